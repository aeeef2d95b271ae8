"""
性质检查器。

每个检查器实现 LevelChecker 协议：evaluate 在一层、一种模式下返回第一个见证，
replay 在任意层按名称重放见证；稳定化由 dposet.verdict 负责。

对“所有 A ⊆ P”的量化化归为所有下集（cl 与 A′ 都只依赖 ↓A）：先取族的模式集合，
再取由保护池中反链生成的下集，数量不超过上限时穷举，否则按种子抽样。
"""

import logging
import threading
import time
from dataclasses import dataclass, field
from functools import reduce
from itertools import islice
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from dposet.dposet import DPoset
from dposet.family import Band, TruncationFamily, guard_band, validate_family
from dposet.verdict import Verdict, Witness, escalate
from order.mask import SubsetMask, bit, enumerate_antichains, first, iter_bits
from scott.operators import one_step_set, scott_closure, weak_one_step_set
from scott.waybelow import fin_family, way_below_down, weakly_way_below_down
from utils.config.settings import WorkbenchSettings, get_settings

logger = logging.getLogger(__name__)

MAX_SAMPLED_GENERATORS = 3


@dataclass(frozen=True)
class CheckOptions:
    size_bound: int = 3
    exhaustive_cap: int = 12
    exhaustive_limit: int = 4096
    samples: int = 1000
    seed: int = 0

    @classmethod
    def from_settings(cls, settings: WorkbenchSettings) -> "CheckOptions":
        return cls(
            size_bound=settings.max_f_size,
            exhaustive_cap=settings.exhaustive_cap,
            exhaustive_limit=settings.exhaustive_limit,
            samples=settings.samples,
            seed=settings.seed,
        )


# ------------------------------------------------------------------ 下集来源

@dataclass(frozen=True)
class LowerSetCase:
    """一个被量化的下集：模式集合名或生成元名列表"""

    label: Any
    mask: SubsetMask
    oracle: Optional[Dict[str, bool]] = None


def schema_case(family: TruncationFamily, d: DPoset, level: int, name: str) -> LowerSetCase:
    schema = family.schema(name)
    index = d.base.index
    members = d.mask_of(n for n in schema.members(level) if n in index)
    return LowerSetCase(name, d.base.down_closure(members), schema.tail_oracle(d))


def generator_case(d: DPoset, names: Sequence[str]) -> Optional[LowerSetCase]:
    index = d.base.index
    if any(n not in index for n in names):
        return None
    return LowerSetCase(list(names), d.base.down_closure(d.mask_of(names)))


def _maximal(d: DPoset, picks: SubsetMask) -> SubsetMask:
    base = d.base
    out = 0
    for i in iter_bits(picks):
        if picks & base.up[i] & ~bit(i) == 0:
            out |= bit(i)
    return out


def lower_set_cases(
    family: TruncationFamily, d: DPoset, band: Band, level: int, options: CheckOptions
) -> Iterator[LowerSetCase]:
    for schema in family.schemas:
        yield schema_case(family, d, level, schema.name)

    candidates = list(iter_bits(band.pool(d)))
    antichains = enumerate_antichains(d.base.comparable, candidates)
    if len(candidates) <= options.exhaustive_cap:
        listed = list(antichains)
    else:
        listed = list(islice(antichains, options.exhaustive_limit + 1))
    if len(candidates) <= options.exhaustive_cap or len(listed) <= options.exhaustive_limit:
        logger.debug(f"N={level}: exhaustive over {len(listed)} generated lower sets")
        for gens in listed:
            yield LowerSetCase(d.names_of(gens), d.base.down_closure(gens))
        return

    logger.debug(f"N={level}: sampling {options.samples} generated lower sets from {len(candidates)} generators")
    rng = np.random.default_rng([options.seed, level])
    pool = np.array(candidates)
    for _ in range(options.samples):
        k = int(rng.integers(1, MAX_SAMPLED_GENERATORS + 1))
        picks = rng.choice(pool, size=min(k, len(pool)), replace=False)
        gens = _maximal(d, sum(bit(int(i)) for i in set(picks.tolist())))
        yield LowerSetCase(d.names_of(gens), d.base.down_closure(gens))


def rebuild_case(family: TruncationFamily, d: DPoset, level: int, label: Any) -> Optional[LowerSetCase]:
    if isinstance(label, str):
        try:
            return schema_case(family, d, level, label)
        except KeyError:
            return None
    return generator_case(d, label)


# ------------------------------------------------------------------ 检查器基类


class PropertyChecker:
    name = ""
    # False 表示两种模式结果相同（不涉及极限触发），只算一次
    mode_sensitive = True

    def __init__(self, options: Optional[CheckOptions] = None):
        self.options = options or CheckOptions()
        self._memo: Dict[Tuple[int, int, int], Optional[Witness]] = {}
        self._lock = threading.Lock()

    def _band(self, family: TruncationFamily, level: int, guard: int, guarded: bool) -> Band:
        band = guard_band(family, level, guard)
        return band if guarded else band.unguarded()

    def evaluate(self, family: TruncationFamily, level: int, guard: int, guarded: bool) -> Optional[Witness]:
        if not self.mode_sensitive:
            key = (id(family), level, guard)
            with self._lock:
                if key in self._memo:
                    return self._memo[key]
            guarded = True
        d = family.instantiate(level)
        witness = self.find(family, d, self._band(family, level, guard, guarded), level)
        if not self.mode_sensitive:
            with self._lock:
                self._memo[key] = witness
        return witness

    def replay(self, family: TruncationFamily, witness: Witness, level: int, guard: int, guarded: bool) -> bool:
        d = family.instantiate(level)
        return self.recheck(family, d, self._band(family, level, guard, guarded), level, witness)

    def find(self, family: TruncationFamily, d: DPoset, band: Band, level: int) -> Optional[Witness]:
        raise NotImplementedError

    def recheck(self, family: TruncationFamily, d: DPoset, band: Band, level: int, witness: Witness) -> bool:
        raise NotImplementedError


class _LowerSetChecker(PropertyChecker):
    """对每个下集 A 比较两个集合，见证为 (A, x)"""

    def violation(self, d: DPoset, case: LowerSetCase, band: Band) -> SubsetMask:
        raise NotImplementedError

    def find(self, family, d, band, level):
        pool = band.pool(d)
        for case in lower_set_cases(family, d, band, level, self.options):
            diff = self.violation(d, case, band) & pool
            if diff:
                return {"A": case.label, "x": d.elements[first(diff)]}
        return None

    def recheck(self, family, d, band, level, witness):
        case = rebuild_case(family, d, level, witness["A"])
        x = d.base.index.get(witness["x"])
        if case is None or x is None:
            return False
        return bool(self.violation(d, case, band) >> x & 1)


class WeakOneStepChecker(_LowerSetChecker):
    """cl(A) = A″"""

    name = "weak-one-step"

    def violation(self, d, case, band):
        closure = scott_closure(d, case.mask, band, case.oracle).result
        return closure & ~weak_one_step_set(d, case.mask, band, case.oracle)


class OneStepChecker(_LowerSetChecker):
    """cl(A) = A′"""

    name = "one-step"

    def violation(self, d, case, band):
        closure = scott_closure(d, case.mask, band, case.oracle).result
        return closure & ~one_step_set(d, case.mask, band, case.oracle)


class AprimeLowerChecker(_LowerSetChecker):
    """A′ 是下集"""

    name = "Aprime-lower"

    def violation(self, d, case, band):
        prime = one_step_set(d, case.mask, band, case.oracle)
        return d.base.down_closure(prime) & ~prime


class DprimeLowerChecker(PropertyChecker):
    """每条已确立的声明链 C：C′ 是下集"""

    name = "Dprime-lower"

    def _violation(self, d: DPoset, band: Band, k: int) -> SubsetMask:
        chain = d.mask_of(d.decls[k].chain)
        prime = one_step_set(d, chain, band)
        return d.base.down_closure(prime) & ~prime & band.pool(d)

    def find(self, family, d, band, level):
        for k in sorted(band.established):
            diff = self._violation(d, band, k)
            if diff:
                return {"D": d.decls[k].chain_id, "x": d.elements[first(diff)]}
        return None

    def recheck(self, family, d, band, level, witness):
        k = d.decl_index.get(witness["D"])
        x = d.base.index.get(witness["x"])
        if k is None or x is None:
            return False
        return bool(self._violation(d, band, k) >> x & 1)


class MeetContinuityChecker(PropertyChecker):
    """
    x ≤ ℓ 蕴含 x ∈ cl(↓C ∩ ↓x)。

    有限有向集不必检查：其上确界是最大元 m ≥ x，x ∈ ↓x ∩ ↓m。
    x 落在 ↓C 中时 ↓C ∩ ↓x = ↓x，同样平凡。
    """

    name = "meet-continuous"

    def _fails(self, d: DPoset, band: Band, k: int, x: int, lower_chain: SubsetMask) -> bool:
        if lower_chain >> x & 1:
            return False
        s = lower_chain & d.base.down[x]
        return not scott_closure(d, s, band).result >> x & 1

    def find(self, family, d, band, level):
        base = d.base
        pool = band.pool(d)
        for k in sorted(band.established):
            lower_chain = base.down_closure(d.mask_of(d.decls[k].chain))
            for x in iter_bits(pool & base.down[d.limits[k]]):
                if self._fails(d, band, k, x, lower_chain):
                    return {"x": d.elements[x], "chain": d.decls[k].chain_id}
        return None

    def recheck(self, family, d, band, level, witness):
        k = d.decl_index.get(witness["chain"])
        x = d.base.index.get(witness["x"])
        if k is None or x is None or not d.base.leq[x, d.limits[k]]:
            return False
        lower_chain = d.base.down_closure(d.mask_of(d.decls[k].chain))
        return self._fails(d, band, k, x, lower_chain)


def _image_sup(d: DPoset, band: Band, image: List[int]) -> int:
    # 像链在截断处仍在上升且到达某条已确立链的顶，则取该链的极限
    last = image[-1]
    rising = len(image) < 2 or image[-2] != last
    if rising:
        for k in sorted(band.established):
            if d.tops[k] == last:
                return d.limits[k]
    return last


def meet_equational_check(d: DPoset, band: Band) -> Optional[Witness]:
    """交半格上的等式形式：inf{x, ℓ} = sup_c inf{x, c}。非交半格返回 None。"""
    base = d.base
    meet, _ = base.classify_semilattice()
    if not meet:
        return None
    for k in sorted(band.established):
        decl = d.decls[k]
        for x in iter_bits(band.guarded):
            lhs = base.inf(bit(x) | bit(d.limits[k]))
            image = [base.inf(bit(x) | bit(base.index[c])) for c in decl.chain]
            if None in image or lhs is None:
                continue
            rhs = _image_sup(d, band, image)
            if lhs != rhs:
                return {"x": d.elements[x], "chain": decl.chain_id, "inf": d.elements[lhs], "sup": d.elements[rhs]}
    return None


class _ApproximationChecker(PropertyChecker):
    """x 取受保护载体：⇓x（或 ⇓_w x）有向且上确界为 x"""

    exact = False

    def reason(self, d: DPoset, band: Band, x: int) -> Optional[str]:
        base = d.base
        below = weakly_way_below_down(d, x) if self.exact else way_below_down(d, x)
        if not below:
            return "empty"
        top = base.greatest(below)
        if top is None:
            return "not directed"
        if top == x:
            return None
        for k in range(len(d.decls)):
            if d.limits[k] == x and band.allows(k) and below >> d.tops[k] & 1:
                return None
        return "sup differs"

    def find(self, family, d, band, level):
        for x in iter_bits(band.guarded):
            why = self.reason(d, band, x)
            if why is not None:
                return {"x": d.elements[x], "reason": why}
        return None

    def recheck(self, family, d, band, level, witness):
        x = d.base.index.get(witness["x"])
        return x is not None and self.reason(d, band, x) is not None


class ContinuityChecker(_ApproximationChecker):
    name = "continuous"


class ExactnessChecker(_ApproximationChecker):
    name = "exact"
    exact = True


class QuasicontinuityChecker(PropertyChecker):
    """
    x 取内层载体，F 取受保护载体中的极小有限集。

    有限族在 Smyth 序下有向当且仅当它有最大成员（与有限有向集同一论证），
    此时 ∩↑F 就是该成员的上闭包。
    """

    name = "quasicontinuous"
    mode_sensitive = False

    def reason(self, d: DPoset, band: Band, x: int, inner: SubsetMask) -> Optional[str]:
        base = d.base
        family = fin_family(d, x, self.options.size_bound, band)
        if not family:
            return "empty fin family"
        ups = [base.up_closure(f) for f in family]
        common = reduce(lambda a, b: a & b, ups)
        if common not in ups:
            return "fin family not directed"
        if common & inner & ~base.up[x]:
            return "intersection larger than the upper set"
        return None

    def find(self, family, d, band, level):
        inner = band.require_inner()
        for x in iter_bits(inner):
            why = self.reason(d, band, x, inner)
            if why is not None:
                return {"x": d.elements[x], "reason": why}
        return None

    def recheck(self, family, d, band, level, witness):
        inner = band.require_inner()
        x = d.base.index.get(witness["x"])
        return x is not None and bool(inner >> x & 1) and self.reason(d, band, x, inner) is not None


CHECKERS = {
    cls.name: cls
    for cls in (
        WeakOneStepChecker,
        OneStepChecker,
        MeetContinuityChecker,
        ContinuityChecker,
        QuasicontinuityChecker,
        ExactnessChecker,
        DprimeLowerChecker,
        AprimeLowerChecker,
    )
}


def make_checker(prop: str, options: Optional[CheckOptions] = None) -> PropertyChecker:
    try:
        return CHECKERS[prop](options)
    except KeyError:
        raise ValueError(f"unknown property '{prop}', expected one of {sorted(CHECKERS)}")


# ------------------------------------------------------------------ 报告


@dataclass
class PropertyReport:
    property: str
    entry: str
    verdict: Verdict
    levels: Tuple[int, ...]
    guard: int
    millis: float = 0.0
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def outcome(self) -> str:
        return self.verdict.outcome

    def to_record(self) -> Dict[str, Any]:
        record = {
            "property": self.property,
            "entry": self.entry,
            "level": list(self.verdict.levels or self.levels),
            "guard": self.guard,
            "outcome": self.verdict.outcome,
            "witness": self.verdict.witness,
            "stable_at": self.verdict.stable_at,
            "diagnostic": self.verdict.diagnostic,
            "millis": round(self.millis, 3),
        }
        if self.metadata:
            record["metadata"] = self.metadata
        return record


def run_property(
    prop: str,
    family: TruncationFamily,
    levels: Optional[Sequence[int]] = None,
    guard: Optional[int] = None,
    *,
    entry: Optional[str] = None,
    settings: Optional[WorkbenchSettings] = None,
    options: Optional[CheckOptions] = None,
) -> PropertyReport:
    settings = settings or get_settings()
    levels = tuple(levels or settings.levels)
    guard = settings.guard if guard is None else guard
    checker = make_checker(prop, options or CheckOptions.from_settings(settings))

    start = time.perf_counter()
    validate_family(family, levels)
    verdict = escalate(checker, family, levels, guard, settings.escalation_cap, settings.workers)
    millis = (time.perf_counter() - start) * 1000
    report = PropertyReport(prop, entry or family.name, verdict, levels, guard, millis)

    if prop == "quasicontinuous":
        report.metadata["size_bound"] = checker.options.size_bound
    if prop == "meet-continuous":
        d = family.instantiate(levels[0])
        mismatch = meet_equational_check(d, guard_band(family, levels[0], guard))
        report.metadata["equational"] = "mismatch" if mismatch else "agrees or not a meet-semilattice"
        if mismatch:
            report.metadata["equational_witness"] = mismatch

    log = logger.warning if verdict.outcome == "Unstable" else logger.info
    log(f"{prop} on {report.entry}: {verdict.outcome} ({millis:.0f} ms) {verdict.witness or ''}")
    return report


def check_weak_one_step(family, levels=None, g=None, **kwargs) -> PropertyReport:
    return run_property("weak-one-step", family, levels, g, **kwargs)


def check_one_step(family, levels=None, g=None, **kwargs) -> PropertyReport:
    return run_property("one-step", family, levels, g, **kwargs)


def check_meet_continuous(family, levels=None, g=None, **kwargs) -> PropertyReport:
    return run_property("meet-continuous", family, levels, g, **kwargs)


def check_continuous(family, levels=None, g=None, **kwargs) -> PropertyReport:
    return run_property("continuous", family, levels, g, **kwargs)


def check_exact(family, levels=None, g=None, **kwargs) -> PropertyReport:
    return run_property("exact", family, levels, g, **kwargs)


def check_quasicontinuous(family, levels=None, g=None, size_bound: Optional[int] = None, **kwargs) -> PropertyReport:
    if size_bound is not None:
        if size_bound < 1:
            raise ValueError("size_bound must be at least 1")
        settings = kwargs.get("settings") or get_settings()
        base = kwargs.pop("options", None) or CheckOptions.from_settings(settings)
        kwargs["options"] = CheckOptions(size_bound, base.exhaustive_cap, base.exhaustive_limit, base.samples, base.seed)
    return run_property("quasicontinuous", family, levels, g, **kwargs)


def check_Dprime_lower(family, levels=None, g=None, **kwargs) -> PropertyReport:
    report = run_property("Dprime-lower", family, levels, g, **kwargs)
    aprime = run_property("Aprime-lower", family, levels, g, **kwargs)
    report.metadata["aprime_lower"] = aprime.outcome
    return report


def check_all(entry, properties: Optional[Sequence[str]] = None, **kwargs) -> List[PropertyReport]:
    """对一个语料条目运行全部（或指定的）检查器"""
    props = list(properties or CHECKERS)
    return [run_property(prop, entry.family, entry=entry.name, **kwargs) for prop in props]


__all__ = [
    "CheckOptions", "LowerSetCase", "lower_set_cases", "PropertyChecker", "PropertyReport", "CHECKERS",
    "make_checker", "run_property", "meet_equational_check",
    "check_weak_one_step", "check_one_step", "check_meet_continuous", "check_continuous",
    "check_exact", "check_quasicontinuous", "check_Dprime_lower", "check_all",
]
