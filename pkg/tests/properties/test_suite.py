import pytest

from corpus import entry_by_name
from dposet.verdict import Verdict
from properties.checkers import PropertyReport
from properties.search import TARGETS, oracle_agrees, resolve_target, search_counterexample
from properties.suite import (
    IMPLICATIONS,
    LIMITATION_NOTICE,
    RANDOM_LEVELS,
    implication_violations,
    random_entries,
    random_suite_settings,
    rudin_step_replay,
    theorem_suite,
)


def _reports(entry_name: str, outcomes: dict):
    return [
        PropertyReport(prop, entry_name, Verdict(outcome, levels=(3, 5, 7)), (3, 5, 7), 1)
        for prop, outcome in outcomes.items()
    ]


ALL_HOLD = {
    "weak-one-step": "Holds", "one-step": "Holds", "meet-continuous": "Holds", "continuous": "Holds",
    "quasicontinuous": "Holds", "exact": "Holds", "Dprime-lower": "Holds", "Aprime-lower": "Holds",
}


class TestImplications:
    def test_consistent_outcomes(self):
        entry = entry_by_name("pentagon")
        assert implication_violations(entry, _reports("pentagon", ALL_HOLD)) == []

    def test_one_step_without_weak_one_step_is_flagged(self):
        entry = entry_by_name("pentagon")
        outcomes = {**ALL_HOLD, "weak-one-step": "Fails"}
        names = {v["implication"] for v in implication_violations(entry, _reports("pentagon", outcomes))}
        assert "one-step => weak-one-step" in names
        assert "meet-continuous and weak-one-step <=> one-step" in names

    def test_every_implication_is_named(self):
        assert len({imp.name for imp in IMPLICATIONS}) == len(IMPLICATIONS)


class TestRandomSuite:
    def test_random_settings(self, settings):
        tuned = random_suite_settings(settings)
        assert tuned.levels == list(RANDOM_LEVELS)
        assert tuned.escalation_cap == RANDOM_LEVELS[-1]
        assert settings.levels == [4, 8, 16]

    def test_small_random_suite_has_no_violations(self, settings):
        entries = random_entries(8, first_seed=100)
        suite = theorem_suite(entries, random_suite_settings(settings))
        assert suite.violations == []
        assert suite.golden_mismatches == []
        assert suite.notice == LIMITATION_NOTICE
        assert suite.entry_count == 8

    @pytest.mark.slow
    def test_thousand_random_families(self, settings):
        suite = theorem_suite(random_entries(1000), random_suite_settings(settings))
        assert suite.violations == []

    def test_rudin_replay_on_the_chain(self):
        result = rudin_step_replay(entry_by_name("omega-chain"), 4)
        assert result["failures"] == []
        assert result["checked"] > 0


class TestSearch:
    def test_zero_budget_is_exhausted(self, settings):
        outcome = search_counterexample("meet-not-one-step", 0, settings=settings)
        assert outcome.status == "exhausted"
        assert outcome.examined == 0

    def test_bounded_search_reports_status(self, settings):
        outcome = search_counterexample("exact-not-continuous", 3, seed=5, settings=settings)
        assert outcome.examined <= 3
        assert outcome.status in ("found", "exhausted")
        if outcome.found:
            assert outcome.bundle["oracle_agrees"]

    def test_unknown_target(self, settings):
        with pytest.raises(ValueError):
            search_counterexample("continuous-not-exact", 1, settings=settings)

    def test_negative_budget(self, settings):
        with pytest.raises(ValueError):
            search_counterexample("meet-not-one-step", -1, settings=settings)

    def test_targets(self):
        assert set(TARGETS) == {"problem-5.10", "problem-5.13"}
        assert TARGETS["problem-5.10"].name == "meet-not-one-step"
        assert TARGETS["problem-5.13"].wanted["continuous"] == "Fails"

    @pytest.mark.parametrize("alias", ["problem-5.13", "5.13", "exact-not-continuous"])
    def test_target_aliases(self, alias):
        assert resolve_target(alias).key == "problem-5.13"

    def test_outcome_is_keyed_by_problem(self, settings):
        outcome = search_counterexample("meet-not-one-step", 0, settings=settings)
        assert (outcome.target, outcome.name) == ("problem-5.10", "meet-not-one-step")

    def test_oracle_replay_on_figures(self):
        assert oracle_agrees(entry_by_name("fig3"), 3, 14)
        # 载体超过上限时跳过穷举
        assert oracle_agrees(entry_by_name("fig1"), 4, 14)
