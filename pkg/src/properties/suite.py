"""
定理套件：对每个条目运行全部检查器，再断言性质之间的蕴含关系。

含 Unstable 结论的条目不参与蕴含统计，单独列出；任何蕴含违反都是阻断发布的失败。
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import islice
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from corpus.entry import CorpusEntry
from corpus.inflate import inflate_random
from dposet.family import guard_band
from order.mask import iter_bits
from properties.checkers import (
    CHECKERS,
    CheckOptions,
    PropertyReport,
    lower_set_cases,
    run_property,
)
from scott.operators import scott_closure
from scott.rudin import meets_every, rudin_select
from scott.waybelow import fin_family
from utils.config.settings import WorkbenchSettings, get_settings
from utils.error.errors import NotFiltered

logger = logging.getLogger(__name__)

# 生成族的尾部很短，用较低的层级即可稳定
RANDOM_LEVELS = (3, 5, 7)

LIMITATION_NOTICE = (
    "note: the non-continuity of the Smyth powerdomain of the Sorgenfrey line cannot be "
    "reproduced on finite spaces (every finite Hausdorff space is discrete); the smyth sweep "
    "checks the finite mechanism of the one-step argument for Q(X) instead."
)

Outcomes = Dict[str, bool]


@dataclass(frozen=True)
class Implication:
    name: str
    holds: Callable[[Outcomes, CorpusEntry], bool]


def _implies(a: bool, b: bool) -> bool:
    return not a or b


IMPLICATIONS: Tuple[Implication, ...] = (
    Implication("one-step => weak-one-step", lambda o, e: _implies(o["one-step"], o["weak-one-step"])),
    Implication("one-step => meet-continuous", lambda o, e: _implies(o["one-step"], o["meet-continuous"])),
    Implication(
        "meet-continuous and weak-one-step <=> one-step",
        lambda o, e: (o["meet-continuous"] and o["weak-one-step"]) == o["one-step"],
    ),
    Implication("Aprime-lower <=> Dprime-lower", lambda o, e: o["Aprime-lower"] == o["Dprime-lower"]),
    Implication(
        "one-step and exact => continuous",
        lambda o, e: _implies(o["one-step"] and o["exact"], o["continuous"]),
    ),
    Implication(
        "continuous => one-step and exact",
        lambda o, e: _implies(o["continuous"], o["one-step"] and o["exact"]),
    ),
    Implication(
        "quasicontinuous dcpo => weak-one-step",
        lambda o, e: _implies(o["quasicontinuous"] and e.flags.dcpo, o["weak-one-step"]),
    ),
    Implication(
        "meet-continuous semilattice => Dprime-lower",
        lambda o, e: _implies(
            o["meet-continuous"] and (e.flags.meet_semilattice or e.flags.sup_semilattice), o["Dprime-lower"]
        ),
    ),
)


@dataclass
class SuiteReport:
    reports: List[PropertyReport] = field(default_factory=list)
    violations: List[Dict[str, Any]] = field(default_factory=list)
    golden_mismatches: List[Dict[str, Any]] = field(default_factory=list)
    excluded: List[str] = field(default_factory=list)
    rudin: List[Dict[str, Any]] = field(default_factory=list)
    notice: str = LIMITATION_NOTICE

    @property
    def ok(self) -> bool:
        return not self.violations and not self.golden_mismatches

    @property
    def entry_count(self) -> int:
        return len({r.entry for r in self.reports})


def implication_violations(entry: CorpusEntry, reports: Sequence[PropertyReport]) -> List[Dict[str, Any]]:
    outcomes = {r.property: r.outcome == "Holds" for r in reports}
    out = []
    for imp in IMPLICATIONS:
        if not imp.holds(outcomes, entry):
            out.append({
                "entry": entry.name,
                "implication": imp.name,
                "outcomes": {r.property: r.outcome for r in reports},
                "witnesses": {r.property: r.verdict.witness for r in reports if r.verdict.witness},
            })
    return out


def golden_mismatches(entry: CorpusEntry, reports: Sequence[PropertyReport]) -> List[Dict[str, Any]]:
    out = []
    for r in reports:
        expected = entry.expected(r.property)
        if expected is None:
            continue
        witness = r.verdict.witness or {}
        same_witness = expected.witness is None or all(
            witness.get(key) == value for key, value in expected.witness.items()
        )
        if r.outcome != expected.outcome or not same_witness:
            out.append({
                "entry": entry.name,
                "property": r.property,
                "expected": expected.outcome,
                "expected_witness": expected.witness,
                "got": r.outcome,
                "witness": r.verdict.witness,
            })
    return out


def rudin_step_replay(
    entry: CorpusEntry,
    level: int,
    guard: int = 1,
    options: Optional[CheckOptions] = None,
    max_sets: int = 64,
) -> Dict[str, Any]:
    """
    拟连续 dcpo 的弱一步闭包论证在一层上的重放。

    对 x ∈ cl(A) ∩ 内层载体，族 {F ∩ ↓A : F ∈ fin(x)} 若是 filtered，取其有向选择 D，
    检查 D 有向且与每个成员相交。
    """
    options = options or CheckOptions()
    family = entry.family
    d = family.instantiate(level)
    band = guard_band(family, level, guard)
    inner = band.require_inner()
    checked = skipped = 0
    failures: List[Dict[str, Any]] = []
    for case in islice(lower_set_cases(family, d, band, level, options), max_sets):
        closure = scott_closure(d, case.mask, band, case.oracle).result
        for x in iter_bits(closure & inner):
            members = [f & case.mask for f in fin_family(d, x, options.size_bound, band)]
            if not members or not all(members):
                skipped += 1
                continue
            try:
                selection = rudin_select(d.base, members)
            except NotFiltered:
                skipped += 1
                continue
            checked += 1
            if not meets_every(selection, members) or not d.base.is_directed(selection):
                failures.append({"A": case.label, "x": d.elements[x], "selection": d.names_of(selection)})
    logger.debug(f"rudin replay on {entry.name} N={level}: {checked} checked, {skipped} skipped")
    return {"entry": entry.name, "level": level, "checked": checked, "skipped": skipped, "failures": failures}


def _evaluate_entry(
    entry: CorpusEntry,
    properties: Sequence[str],
    levels: Optional[Sequence[int]],
    settings: WorkbenchSettings,
) -> List[PropertyReport]:
    return [
        run_property(prop, entry.family, levels, entry=entry.name, settings=settings)
        for prop in properties
    ]


def theorem_suite(
    entries: Sequence[CorpusEntry],
    settings: Optional[WorkbenchSettings] = None,
    levels: Optional[Sequence[int]] = None,
    progress: bool = False,
) -> SuiteReport:
    settings = settings or get_settings()
    properties = list(CHECKERS)
    suite = SuiteReport()

    def job(entry: CorpusEntry) -> Tuple[CorpusEntry, List[PropertyReport]]:
        return entry, _evaluate_entry(entry, properties, levels, settings)

    ordered = sorted(entries, key=lambda e: e.name)
    if settings.workers > 1:
        with ThreadPoolExecutor(max_workers=settings.workers) as pool:
            results = list(tqdm(pool.map(job, ordered), total=len(ordered), disable=not progress, desc="suite"))
    else:
        results = [job(e) for e in tqdm(ordered, disable=not progress, desc="suite")]

    for entry, reports in results:
        suite.reports.extend(reports)
        suite.golden_mismatches.extend(golden_mismatches(entry, reports))
        if any(r.outcome == "Unstable" for r in reports):
            logger.warning(f"{entry.name}: unstable verdicts, excluded from implication accounting")
            suite.excluded.append(entry.name)
            continue
        found = implication_violations(entry, reports)
        for v in found:
            logger.error(f"implication violated on {entry.name}: {v['implication']}")
        suite.violations.extend(found)
        outcome = {r.property: r.outcome for r in reports}
        if entry.flags.dcpo and outcome.get("quasicontinuous") == "Holds":
            suite.rudin.append(
                rudin_step_replay(entry, (levels or settings.levels)[0], settings.guard, CheckOptions.from_settings(settings))
            )

    logger.info(
        f"suite: {suite.entry_count} entries, {len(suite.violations)} violations, "
        f"{len(suite.excluded)} excluded, {len(suite.golden_mismatches)} golden mismatches"
    )
    return suite


def random_entries(count: int, first_seed: int = 0, carrier_cap: int = 12, chain_count: int = 2) -> List[CorpusEntry]:
    return [inflate_random(seed, carrier_cap, chain_count) for seed in range(first_seed, first_seed + count)]


def random_suite_settings(settings: WorkbenchSettings) -> WorkbenchSettings:
    """生成族用较低层级，且不升级层级"""
    return settings.model_copy(update={"levels": list(RANDOM_LEVELS), "escalation_cap": RANDOM_LEVELS[-1]})


__all__ = [
    "IMPLICATIONS", "LIMITATION_NOTICE", "RANDOM_LEVELS", "SuiteReport", "theorem_suite",
    "implication_violations", "golden_mismatches", "rudin_step_replay", "random_entries",
    "random_suite_settings",
]
