import pytest

from corpus.figures import fig1_level, fig3_level
from order.poset import build_poset
from scott.rudin import check_filtered, meets_every, rudin_select
from scott.waybelow import (
    fin_family,
    way_below,
    way_below_down,
    way_below_set,
    weakly_way_below,
    weakly_way_below_down,
)
from tests.factories import chain_poset
from utils.error.errors import NotFiltered


@pytest.fixture
def fig3():
    return fig3_level(3)


def idx(d, name):
    return d.base.index[name]


class TestWayBelow:
    def test_naturals_are_way_below_their_successors(self, fig3):
        assert way_below(fig3, idx(fig3, "1"), idx(fig3, "2"))
        assert way_below(fig3, idx(fig3, "3"), idx(fig3, "w"))

    def test_a_is_not_way_below_w(self, fig3):
        assert not way_below(fig3, idx(fig3, "a"), idx(fig3, "w"))
        assert not way_below(fig3, idx(fig3, "a"), idx(fig3, "a"))

    def test_weakly_way_below_only_looks_at_exact_limits(self, fig3):
        assert weakly_way_below(fig3, idx(fig3, "a"), idx(fig3, "a"))
        assert not weakly_way_below(fig3, idx(fig3, "w"), idx(fig3, "w"))
        assert weakly_way_below(fig3, idx(fig3, "2"), idx(fig3, "w"))

    def test_down_sets(self, fig3):
        assert fig3.names_of(way_below_down(fig3, idx(fig3, "a"))) == []
        assert fig3.names_of(weakly_way_below_down(fig3, idx(fig3, "a"))) == ["a"]
        assert fig3.names_of(way_below_down(fig3, idx(fig3, "w"))) == ["1", "2", "3"]

    def test_finite_set_way_below(self, fig3):
        g = fig3.mask_of(["a", "3"])
        assert way_below_set(fig3, g, idx(fig3, "w"))

    def test_fig1_top_has_no_single_approximant(self):
        d = fig1_level(3)
        top = idx(d, "top")
        assert d.names_of(way_below_down(d, top)) == []


class TestFinFamily:
    def test_minimal_finite_sets_below_a(self, fig3):
        family = fin_family(fig3, idx(fig3, "a"))
        assert [fig3.names_of(f) for f in family] == [["1", "a"], ["2", "a"], ["3", "a"]]

    def test_size_bound_one(self, fig3):
        assert fin_family(fig3, idx(fig3, "a"), size_bound=1) == []

    def test_points_on_the_chain(self, fig3):
        family = fin_family(fig3, idx(fig3, "2"))
        assert [fig3.names_of(f) for f in family] == [["1"], ["2"]]

    def test_fig1_top_needs_one_point_per_column(self):
        d = fig1_level(2)
        family = fin_family(d, idx(d, "top"), size_bound=2)
        assert len(family) == 4
        assert all(f.bit_count() == 2 for f in family)
        assert fin_family(d, idx(d, "top"), size_bound=1) == []

    def test_rejects_non_positive_bound(self, fig3):
        with pytest.raises(ValueError):
            fin_family(fig3, 0, size_bound=0)


class TestRudin:
    def test_selection_on_a_chain(self):
        p = chain_poset(3)
        family = [p.mask_of(["1", "2"]), p.mask_of(["2", "3"]), p.mask_of(["3"])]
        selection = rudin_select(p, family)
        assert meets_every(selection, family)
        assert p.is_directed(selection)

    def test_selection_needs_a_common_upper_bound(self):
        p = build_poset(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
        family = [p.mask_of(["a", "1"]), p.mask_of(["b", "1"]), p.mask_of(["1"])]
        selection = rudin_select(p, family)
        assert meets_every(selection, family)
        assert p.is_directed(selection)

    def test_not_filtered(self):
        p = build_poset(["a", "b"], [])
        with pytest.raises(NotFiltered) as exc_info:
            check_filtered(p, [p.mask_of(["a"]), p.mask_of(["b"])])
        assert exc_info.value.pair == (["a"], ["b"])

    def test_empty_member_is_not_filtered(self):
        p = chain_poset(2)
        with pytest.raises(NotFiltered):
            rudin_select(p, [0, p.mask_of(["1"])])

    def test_empty_family(self):
        assert rudin_select(chain_poset(2), []) is None
