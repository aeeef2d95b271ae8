"""
在生成族中搜索两个开问题的反例候选：
  problem-5.10 (meet-not-one-step)       交连续但没有一步闭包
  problem-5.13 (exact-not-continuous)    交连续、精确但不连续

命中只是“待复核的候选”：先用全部检查器重放，再在小层级上与穷举判定比对。
搜索结果从不被当作对一般问题的回答。
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from tqdm import tqdm

from corpus.entry import CorpusEntry
from corpus.inflate import inflate_random
from properties.checkers import CHECKERS, run_property
from properties.suite import RANDOM_LEVELS, random_suite_settings
from scott.operators import one_step_set, scott_closure
from scott.oracle import enumerate_lower_sets, enumerate_scott_closed, oracle_closure, oracle_one_step
from utils.config.settings import WorkbenchSettings, get_settings
from utils.error.errors import CarrierTooLarge

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchTarget:
    key: str
    name: str
    wanted: Dict[str, str]


TARGETS: Dict[str, SearchTarget] = {
    t.key: t
    for t in (
        SearchTarget("problem-5.10", "meet-not-one-step", {"meet-continuous": "Holds", "one-step": "Fails"}),
        SearchTarget(
            "problem-5.13", "exact-not-continuous", {"meet-continuous": "Holds", "exact": "Holds", "continuous": "Fails"}
        ),
    )
}


def resolve_target(target: str) -> SearchTarget:
    """按 key、去掉前缀的编号或描述名查找"""
    for t in TARGETS.values():
        if target in (t.key, t.key.removeprefix("problem-"), t.name):
            return t
    raise ValueError(f"unknown search target '{target}', expected one of {sorted(TARGETS)}")


@dataclass
class SearchOutcome:
    target: str
    name: str = ""
    examined: int = 0
    found: bool = False
    entry: Optional[str] = None
    bundle: Dict[str, Any] = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "found" if self.found else "exhausted"


def _matches(entry: CorpusEntry, wanted: Dict[str, str], settings: WorkbenchSettings) -> Optional[Dict[str, Any]]:
    outcomes = {}
    for prop, expected in wanted.items():
        report = run_property(prop, entry.family, entry=entry.name, settings=settings)
        outcomes[prop] = report.outcome
        if report.outcome != expected:
            return None
    return outcomes


def oracle_agrees(entry: CorpusEntry, level: int, cap: int) -> bool:
    """小层级上 cl 与 A′ 与穷举判定一致"""
    d = entry.family.instantiate(level)
    try:
        closed = enumerate_scott_closed(d, cap)
    except CarrierTooLarge:
        logger.info(f"{entry.name}: carrier {len(d)} above oracle cap {cap}, oracle replay skipped")
        return True
    for a in enumerate_lower_sets(d):
        if scott_closure(d, a).result != oracle_closure(d, a, closed):
            return False
        if one_step_set(d, a) != oracle_one_step(d, a):
            return False
    return True


def replay_candidate(entry: CorpusEntry, settings: WorkbenchSettings) -> Dict[str, Any]:
    reports = [run_property(prop, entry.family, entry=entry.name, settings=settings) for prop in CHECKERS]
    return {
        "entry": entry.name,
        "provenance": entry.provenance,
        "outcomes": {r.property: r.outcome for r in reports},
        "witnesses": {r.property: r.verdict.witness for r in reports if r.verdict.witness},
        "oracle_agrees": oracle_agrees(entry, 1, settings.oracle_cap),
    }


def search_counterexample(
    target: str,
    budget: int,
    seed: int = 0,
    settings: Optional[WorkbenchSettings] = None,
    carrier_cap: int = 12,
    progress: bool = False,
) -> SearchOutcome:
    resolved = resolve_target(target)
    target = resolved.key
    if budget < 0:
        raise ValueError("budget must be non-negative")
    settings = random_suite_settings(settings or get_settings())
    wanted = resolved.wanted
    outcome = SearchOutcome(target, name=resolved.name)
    for i in tqdm(range(budget), disable=not progress, desc=target):
        entry = inflate_random(seed + i, carrier_cap, chain_count=1 + i % 3)
        outcome.examined += 1
        if _matches(entry, wanted, settings) is None:
            continue
        bundle = replay_candidate(entry, settings)
        replayed = all(bundle["outcomes"][p] == v for p, v in wanted.items()) and bundle["oracle_agrees"]
        if replayed:
            logger.warning(f"{target}: candidate {entry.name} survives replay")
            outcome.found = True
            outcome.entry = entry.name
            outcome.bundle = bundle
            return outcome
        logger.info(f"{target}: candidate {entry.name} did not replay, discarded")
    logger.info(f"{target}: exhausted after {outcome.examined} families at levels {list(RANDOM_LEVELS)}")
    return outcome


__all__ = ["TARGETS", "SearchTarget", "resolve_target", "SearchOutcome", "search_counterexample", "replay_candidate", "oracle_agrees"]
