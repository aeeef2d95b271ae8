import pytest

from corpus.figures import fig1_family, fig2_family, fig3_family, fig3_level
from dposet.dposet import DPoset, LimitDecl, directed_sups, validate_dposet
from dposet.family import (
    TruncationFamily,
    embedding_check,
    guard_band,
    guarded_carrier,
    trivial_band,
    validate_family,
)
from order.poset import FinPoset, build_poset
from utils.error.errors import GuardTooLarge, IncoherentDeclaration


def _four_chain() -> FinPoset:
    # 1 < 2 < x < y：链 (1, 2) 的最小严格上界是 x
    return build_poset(["1", "2", "x", "y"], [("1", "2"), ("2", "x"), ("x", "y")])


class TestValidateDposet:
    def test_figures_are_coherent(self):
        for entry in (fig1_family(), fig2_family(), fig3_family()):
            family = entry.family
            validate_family(family, [family.min_level, family.min_level + 1, family.min_level + 2])

    def test_limit_must_be_least(self):
        d = DPoset(_four_chain(), [LimitDecl(("1", "2"), "y", "c")])
        with pytest.raises(IncoherentDeclaration, match="least upper bound is x"):
            validate_dposet(d)

    def test_least_limit_accepted(self):
        validate_dposet(DPoset(_four_chain(), [LimitDecl(("1", "2"), "x", "c")]))

    def test_chain_must_increase(self):
        d = DPoset(_four_chain(), [LimitDecl(("2", "1"), "x", "c")])
        with pytest.raises(IncoherentDeclaration, match="not increasing"):
            validate_dposet(d)

    def test_limit_must_be_strict_upper_bound(self):
        d = DPoset(_four_chain(), [LimitDecl(("1", "2"), "2", "c")])
        with pytest.raises(IncoherentDeclaration, match="strict upper bound"):
            validate_dposet(d)

    def test_duplicate_chain_id(self):
        base = _four_chain()
        d = DPoset(base, [LimitDecl(("1", "2"), "x", "c"), LimitDecl(("1",), "2", "c")])
        with pytest.raises(IncoherentDeclaration, match="duplicate chain id"):
            validate_dposet(d)

    def test_extension_ignores_truncation_bounds(self):
        # 第 3 层 fig3 中 w 是 3 的唯一严格上界，扩展到第 4 层后仍然成立
        validate_dposet(fig3_level(3), extension=fig3_level(4))

    def test_missing_declaration_at_next_level(self):
        d = fig3_level(3)
        bare = DPoset(fig3_level(4).base)
        with pytest.raises(IncoherentDeclaration, match="missing at the next level"):
            validate_dposet(d, extension=bare)

    def test_directed_sups_include_declared_limits(self):
        d = fig3_level(3)
        s = d.mask_of(["1", "2", "3"])
        sups = directed_sups(d, s)
        assert (d.base.index["w"], "nat") in sups
        assert len(sups) == 4


class TestTruncationFamily:
    def test_instantiate_is_cached(self):
        family = fig3_family().family
        assert family.instantiate(5) is family.instantiate(5)

    def test_below_min_level(self):
        with pytest.raises(ValueError):
            fig2_family().family.instantiate(1)

    def test_unknown_schema(self):
        with pytest.raises(KeyError):
            fig3_family().family.schema("diag")

    def test_schema_tail_oracle(self):
        family = fig2_family().family
        d = family.instantiate(3)
        oracle = family.schema("nat").tail_oracle(d)
        assert oracle["col:1"] is False
        assert oracle["col:2"] is True
        assert oracle["row:1"] is True

    def test_embedding_holds_for_figures(self):
        for entry in (fig1_family(), fig2_family(), fig3_family()):
            assert embedding_check(entry.family, entry.family.min_level + 1) is None

    def test_embedding_detects_renamed_elements(self):
        def builder(level: int) -> DPoset:
            names = [f"x{level}_{k}" for k in range(level)]
            return DPoset(build_poset(names, list(zip(names, names[1:]))))

        family = TruncationFamily("drifting", builder)
        assert "disappears" in embedding_check(family, 2)
        with pytest.raises(IncoherentDeclaration):
            validate_family(family, [2])


class TestGuardBand:
    def test_fig3_band(self):
        family = fig3_family().family
        band = guard_band(family, 4, 1)
        d = family.instantiate(4)
        assert d.names_of(band.guarded) == ["1", "2", "3", "w", "a"]
        assert d.names_of(band.inner) == ["1", "2", "w", "a"]
        assert band.established == frozenset({0})
        assert band.allows(0)

    def test_guard_zero_is_full_carrier(self):
        family = fig3_family().family
        d = family.instantiate(4)
        assert guarded_carrier(d, family, 4, 0) == d.base.full

    def test_guard_too_large(self):
        family = fig3_family().family
        d = family.instantiate(2)
        with pytest.raises(GuardTooLarge):
            guarded_carrier(d, family, 2, 2)

    def test_inner_carrier_missing(self):
        band = guard_band(fig3_family().family, 2, 1)
        assert band.inner is None
        with pytest.raises(GuardTooLarge):
            band.require_inner()

    def test_pool_adds_established_tops(self):
        family = fig3_family().family
        d = family.instantiate(4)
        band = guard_band(family, 4, 1)
        assert band.pool(d) >> d.base.index["4"] & 1

    def test_trivial_band_allows_everything(self):
        d = fig3_level(3)
        band = trivial_band(d)
        assert band.guarded == d.base.full
        assert all(band.allows(k) for k in range(len(d.decls)))
