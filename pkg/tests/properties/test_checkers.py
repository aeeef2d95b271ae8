import pytest

from corpus import all_entries, entry_by_name
from corpus.baseline import constant_family
from dposet.dposet import DPoset
from properties.checkers import (
    CHECKERS,
    CheckOptions,
    check_all,
    check_Dprime_lower,
    check_meet_continuous,
    check_quasicontinuous,
    make_checker,
    run_property,
)
from properties.suite import theorem_suite
from smyth.space import posets_up_to_isomorphism
from tests.factories import finite_dposet
from utils.config.settings import WorkbenchSettings

GOLDENS = [
    (entry.name, prop)
    for entry in all_entries()
    for prop in sorted(entry.golden)
]


@pytest.fixture(scope="module")
def corpus_suite():
    return theorem_suite(all_entries(), WorkbenchSettings(log={"file": None, "console": False}))


def _report(suite, entry: str, prop: str):
    return next(r for r in suite.reports if r.entry == entry and r.property == prop)


class TestCorpusGoldens:
    @pytest.mark.parametrize("entry_name,prop", GOLDENS)
    def test_golden_verdict(self, corpus_suite, entry_name, prop):
        expected = entry_by_name(entry_name).expected(prop)
        report = _report(corpus_suite, entry_name, prop)
        assert report.outcome == expected.outcome
        if expected.witness is not None:
            for key, value in expected.witness.items():
                assert report.verdict.witness[key] == value

    def test_suite_is_clean(self, corpus_suite):
        assert corpus_suite.violations == []
        assert corpus_suite.golden_mismatches == []
        assert corpus_suite.ok
        assert corpus_suite.entry_count == len(all_entries())

    def test_fig3_separates_the_one_step_properties(self, corpus_suite):
        assert _report(corpus_suite, "fig3", "weak-one-step").outcome == "Holds"
        assert _report(corpus_suite, "fig3", "one-step").outcome == "Fails"

    def test_rudin_replay_for_quasicontinuous_dcpos(self, corpus_suite):
        assert {r["entry"] for r in corpus_suite.rudin} >= {"omega-chain", "pentagon"}
        assert all(r["failures"] == [] for r in corpus_suite.rudin)


class TestFiniteDegeneracy:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_every_property_holds_on_finite_posets(self, n, small_settings):
        for k, flat in enumerate(posets_up_to_isomorphism(n)):
            family = constant_family(f"finite-{n}-{k}", finite_dposet(flat, n))
            for prop in CHECKERS:
                report = run_property(prop, family, settings=small_settings)
                assert report.outcome == "Holds", (family.name, prop, report.verdict)


class TestRunProperty:
    def test_record_shape(self, settings):
        family = entry_by_name("fig3").family
        record = run_property("one-step", family, [3, 4, 5], settings=settings).to_record()
        assert set(record) == {
            "property", "entry", "level", "guard", "outcome", "witness", "stable_at", "diagnostic", "millis",
        }
        assert record["outcome"] == "Fails"
        assert record["witness"] == {"A": "nat", "x": "a"}
        assert record["level"] == [3, 4, 5]

    def test_witness_survives_guard_zero(self, settings):
        family = entry_by_name("fig3").family
        report = run_property("one-step", family, [3, 4, 5], guard=0, settings=settings)
        assert report.outcome == "Fails"

    def test_unknown_property(self):
        with pytest.raises(ValueError, match="unknown property"):
            make_checker("compact")

    def test_quasicontinuity_size_bound(self, settings):
        family = entry_by_name("fig3").family
        with pytest.raises(ValueError):
            check_quasicontinuous(family, [3, 4, 5], size_bound=0, settings=settings)
        report = check_quasicontinuous(family, [3, 4, 5], size_bound=2, settings=settings)
        assert report.metadata["size_bound"] == 2

    def test_meet_continuity_reports_the_equational_form(self, settings):
        family = entry_by_name("boolean-cube").family
        report = check_meet_continuous(family, [3, 4, 5], settings=settings)
        assert report.outcome == "Holds"
        assert report.metadata["equational"] == "agrees or not a meet-semilattice"

    def test_dprime_carries_the_aprime_outcome(self, settings):
        family = entry_by_name("fig3").family
        report = check_Dprime_lower(family, [3, 4, 5], settings=settings)
        assert report.outcome == "Fails"
        assert report.metadata["aprime_lower"] == "Fails"

    def test_sampling_is_seeded(self):
        family = entry_by_name("fig1").family
        options = CheckOptions(exhaustive_cap=4, exhaustive_limit=16, samples=50, seed=7)
        settings = WorkbenchSettings(levels=[4, 6, 8], log={"file": None, "console": False})
        first = run_property("one-step", family, settings=settings, options=options)
        second = run_property("one-step", family, settings=settings, options=options)
        assert first.verdict == second.verdict

    def test_no_declarations_means_no_limits(self, small_settings):
        family = constant_family("single", finite_dposet([True], 1))
        assert isinstance(family.instantiate(4), DPoset)
        assert run_property("continuous", family, settings=small_settings).outcome == "Holds"

    def test_check_all_runs_the_selected_checkers(self, settings):
        entry = entry_by_name("pentagon")
        reports = check_all(entry, ["one-step", "exact"], settings=settings)
        assert [r.property for r in reports] == ["one-step", "exact"]
        assert {r.entry for r in reports} == {"pentagon"}
        assert all(r.outcome == entry.golden[r.property].outcome for r in reports)
