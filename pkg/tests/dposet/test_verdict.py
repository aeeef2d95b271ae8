from typing import Dict, List, Optional

import pytest

from corpus.figures import fig1_family, fig3_family
from dposet.family import guard_band
from dposet.verdict import Verdict, escalate, stabilize
from scott.operators import is_scott_closed


class ScriptedChecker:
    """按层返回预设见证的检查器"""

    name = "scripted"

    def __init__(
        self,
        guarded: Dict[int, dict],
        unguarded: Optional[Dict[int, dict]] = None,
        replays: bool = True,
    ):
        self.guarded = guarded
        self.unguarded = guarded if unguarded is None else unguarded
        self.replays = replays
        self.calls: List[tuple] = []

    def evaluate(self, family, level, guard, guarded):
        self.calls.append((level, guarded))
        return (self.guarded if guarded else self.unguarded).get(level)

    def replay(self, family, witness, level, guard, guarded):
        return self.replays


class AboveLevel(ScriptedChecker):
    """只在 level >= threshold 时给出见证"""

    def __init__(self, threshold: int):
        super().__init__({})
        self.threshold = threshold

    def evaluate(self, family, level, guard, guarded):
        self.calls.append((level, guarded))
        return {"x": "a"} if level >= self.threshold else None


@pytest.fixture
def family():
    return fig3_family().family


WITNESS = {"A": "nat", "x": "a"}


class TestStabilize:
    def test_holds(self, family):
        verdict = stabilize(ScriptedChecker({}), family, [4, 8, 16], 1)
        assert verdict.outcome == "Holds"
        assert verdict.stable_at == 4
        assert verdict.exit_code == 0

    def test_fails_with_stable_witness(self, family):
        checker = ScriptedChecker({4: WITNESS, 8: WITNESS, 16: WITNESS})
        verdict = stabilize(checker, family, [4, 8, 16], 1)
        assert verdict.outcome == "Fails"
        assert verdict.witness == WITNESS
        assert verdict.exit_code == 1

    def test_witness_only_at_last_level(self, family):
        verdict = stabilize(ScriptedChecker({16: WITNESS}), family, [4, 8, 16], 1)
        assert verdict.outcome == "Unstable"
        assert "last level" in verdict.diagnostic
        assert verdict.exit_code == 2

    def test_unguarded_only(self, family):
        checker = ScriptedChecker({}, unguarded={8: WITNESS})
        verdict = stabilize(checker, family, [4, 8, 16], 1)
        assert verdict.outcome == "Unstable"
        assert "unguarded" in verdict.diagnostic
        assert verdict.witness == WITNESS

    def test_witness_does_not_replay(self, family):
        checker = ScriptedChecker({4: WITNESS, 8: WITNESS, 16: WITNESS}, replays=False)
        verdict = stabilize(checker, family, [4, 8, 16], 1)
        assert verdict.outcome == "Unstable"
        assert "does not replay" in verdict.diagnostic

    def test_guarded_fails_unguarded_holds(self, family):
        checker = ScriptedChecker({4: WITNESS, 8: WITNESS, 16: WITNESS}, unguarded={4: WITNESS})
        verdict = stabilize(checker, family, [4, 8, 16], 1)
        assert verdict.outcome == "Unstable"
        assert "unguarded holds at level 8" in verdict.diagnostic

    @pytest.mark.parametrize("levels", [[4, 8], [4, 4, 8], [8, 4, 16]])
    def test_rejects_bad_level_lists(self, family, levels):
        with pytest.raises(ValueError):
            stabilize(ScriptedChecker({}), family, levels, 1)

    def test_parallel_levels_give_the_same_verdict(self, family):
        checker = ScriptedChecker({4: WITNESS, 8: WITNESS, 16: WITNESS})
        assert stabilize(checker, family, [4, 8, 16], 1, workers=4) == stabilize(checker, family, [4, 8, 16], 1)


class TestEscalate:
    def test_doubles_the_last_level_until_stable(self, family):
        checker = AboveLevel(16)
        verdict = escalate(checker, family, [4, 8, 16], 1, cap=32)
        assert verdict.outcome == "Fails"
        assert verdict.levels == (8, 16, 32)

    def test_stops_at_the_cap(self, family):
        checker = AboveLevel(16)
        verdict = escalate(checker, family, [4, 8, 16], 1, cap=16)
        assert verdict.outcome == "Unstable"
        assert verdict.levels == (4, 8, 16)
        assert max(level for level, _ in checker.calls) == 16

    def test_verdict_constructors(self):
        assert Verdict.holds(3, [3, 5, 7]).levels == (3, 5, 7)
        assert Verdict.fails({"x": "a"}, [3, 5, 7]).witness == {"x": "a"}
        assert Verdict.unstable("drift", [3, 5, 7]).diagnostic == "drift"


class SchemaClosedness:
    """↓schema 是否在该模式下 Scott 闭"""

    name = "schema-closed"

    def __init__(self, schema: str):
        self.schema = schema

    def closed(self, family, level, guard, guarded) -> bool:
        d = family.instantiate(level)
        band = guard_band(family, level, guard)
        schema = family.schema(self.schema)
        lower = d.base.down_closure(d.mask_of(schema.members(level)))
        return is_scott_closed(d, lower, band if guarded else band.unguarded(), schema.tail_oracle(d))

    def evaluate(self, family, level, guard, guarded):
        return None if self.closed(family, level, guard, guarded) else {"A": self.schema}

    def replay(self, family, witness, level, guard, guarded):
        return not self.closed(family, level, guard, guarded)


class TestFig1Diagonal:
    @pytest.fixture
    def fig1(self):
        return fig1_family().family

    @pytest.mark.parametrize("level", [4, 8])
    def test_closed_only_when_guarded(self, fig1, level):
        checker = SchemaClosedness("diag")
        assert not checker.closed(fig1, level, 1, guarded=False)
        assert checker.closed(fig1, level, 1, guarded=True)

    def test_boundary_column_trigger_is_unstable(self, fig1):
        verdict = stabilize(SchemaClosedness("diag"), fig1, [4, 8, 16], 1)
        assert verdict.outcome == "Unstable"
        assert "only the unguarded evaluation fails" in verdict.diagnostic
        assert verdict.witness == {"A": "diag"}
        assert verdict.exit_code == 2

    def test_column_with_declared_tail_fails_in_both_modes(self, fig1):
        # col:1 的尾部判定为 inside：两种模式下都触发 top
        verdict = stabilize(SchemaClosedness("col:1"), fig1, [4, 8, 16], 1)
        assert verdict.outcome == "Fails"
        assert verdict.witness == {"A": "col:1"}
