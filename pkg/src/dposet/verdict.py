import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional, Protocol, Sequence, Tuple

from dposet.family import TruncationFamily

logger = logging.getLogger(__name__)

Outcome = Literal["Holds", "Fails", "Unstable"]
# 见证：只含规范元素名的可序列化字典，跨层可比较
Witness = Dict[str, Any]


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    stable_at: Optional[int] = None
    witness: Optional[Witness] = None
    diagnostic: str = ""
    levels: Tuple[int, ...] = field(default_factory=tuple)

    @classmethod
    def holds(cls, stable_at: int, levels: Sequence[int]) -> "Verdict":
        return cls("Holds", stable_at=stable_at, levels=tuple(levels))

    @classmethod
    def fails(cls, witness: Witness, levels: Sequence[int], diagnostic: str = "") -> "Verdict":
        return cls("Fails", witness=witness, diagnostic=diagnostic, levels=tuple(levels))

    @classmethod
    def unstable(cls, diagnostic: str, levels: Sequence[int], witness: Optional[Witness] = None) -> "Verdict":
        return cls("Unstable", witness=witness, diagnostic=diagnostic, levels=tuple(levels))

    @property
    def exit_code(self) -> int:
        return {"Holds": 0, "Fails": 1, "Unstable": 2}[self.outcome]


class LevelChecker(Protocol):
    """单层检查器：evaluate 返回第一个见证（或 None），replay 在任意层重放见证"""

    name: str

    def evaluate(self, family: TruncationFamily, level: int, guard: int, guarded: bool) -> Optional[Witness]:
        ...

    def replay(self, family: TruncationFamily, witness: Witness, level: int, guard: int, guarded: bool) -> bool:
        ...


def _run_levels(
    checker: LevelChecker, family: TruncationFamily, levels: Sequence[int], guard: int, workers: int
) -> Tuple[List[Optional[Witness]], List[Optional[Witness]]]:
    jobs = [(level, mode) for mode in (True, False) for level in levels]

    def run(job):
        level, mode = job
        return checker.evaluate(family, level, guard, mode)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(job) for job in jobs]
    n = len(levels)
    return results[:n], results[n:]


def stabilize(
    checker: LevelChecker,
    family: TruncationFamily,
    levels: Sequence[int],
    guard: int,
    workers: int = 1,
) -> Verdict:
    levels = list(levels)
    if len(levels) < 3 or any(a >= b for a, b in zip(levels, levels[1:])):
        raise ValueError(f"levels must be strictly increasing with at least 3 entries, got {levels}")

    guarded, unguarded = _run_levels(checker, family, levels, guard, workers)
    for level, g, u in zip(levels, guarded, unguarded):
        logger.debug(f"{checker.name} {family.name} N={level}: guarded={g} unguarded={u}")

    if all(w is None for w in guarded) and all(w is None for w in unguarded):
        return Verdict.holds(levels[0], levels)

    first = next((i for i, w in enumerate(guarded) if w is not None), None)
    if first is None:
        i = next(i for i, w in enumerate(unguarded) if w is not None)
        return Verdict.unstable(
            f"only the unguarded evaluation fails (level {levels[i]}): boundary trigger artifact",
            levels,
            witness=unguarded[i],
        )

    witness = guarded[first]
    if first == len(levels) - 1:
        return Verdict.unstable(f"witness appears only at the last level {levels[first]}", levels, witness)
    for j in range(first, len(levels)):
        if j > first and not checker.replay(family, witness, levels[j], guard, True):
            return Verdict.unstable(
                f"witness from level {levels[first]} does not replay at level {levels[j]}: drifts with the boundary",
                levels,
                witness,
            )
        if unguarded[j] is None:
            return Verdict.unstable(
                f"guarded fails but unguarded holds at level {levels[j]}",
                levels,
                witness,
            )
    return Verdict.fails(witness, levels)


def escalate(
    checker: LevelChecker,
    family: TruncationFamily,
    levels: Sequence[int],
    guard: int,
    cap: int,
    workers: int = 1,
) -> Verdict:
    """stabilize；若 Unstable 则把最高层翻倍继续，直到超过 cap"""
    levels = list(levels)
    verdict = stabilize(checker, family, levels, guard, workers)
    while verdict.outcome == "Unstable" and levels[-1] * 2 <= cap:
        levels = levels[1:] + [levels[-1] * 2]
        logger.warning(f"{checker.name} on {family.name} unstable ({verdict.diagnostic}); escalating to {levels}")
        verdict = stabilize(checker, family, levels, guard, workers)
    return verdict


__all__ = ["Verdict", "Witness", "Outcome", "LevelChecker", "stabilize", "escalate"]
