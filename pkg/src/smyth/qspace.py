"""
Smyth 幂域 Q(X) 在有限空间上的构造与检查。

有限空间中每个子集都是紧的，开集对有限交封闭，所以饱和集恰好是开集；
∅ 也是紧饱和集，作为 (Q, ⊇) 的顶元保留。
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from dposet.dposet import DPoset
from order.mask import SubsetMask, bit, enumerate_antichains, iter_bits
from order.poset import FinPoset
from scott.operators import one_step_set, scott_closure
from scott.oracle import enumerate_lower_sets
from smyth.space import FiniteSpace, enumerate_t0_spaces, is_saturated, saturation
from utils.error.errors import PreconditionFailed

logger = logging.getLogger(__name__)

# 超过该规模的 Q(X) 不再穷举全部子族
WELL_FILTERED_EXHAUSTIVE = 10
CLAIM3_EXHAUSTIVE_POINTS = 3


def set_name(space: FiniteSpace, s: SubsetMask) -> str:
    return "{" + ",".join(space.names_of(s)) + "}"


@dataclass
class QSpace:
    space: FiniteSpace
    # 载体：饱和集（点集掩码），次序 K ⊑ L 当且仅当 K ⊇ L
    sets: Tuple[SubsetMask, ...]
    poset: FinPoset
    # 上 Vietoris 拓扑的开集，以 Q 载体上的掩码表示
    vietoris: Tuple[SubsetMask, ...] = field(default_factory=tuple)

    def index_of(self, s: SubsetMask) -> int:
        return self.sets.index(s)

    def box(self, u: SubsetMask) -> SubsetMask:
        """□U = {K : K ⊆ U}"""
        out = 0
        for k, s in enumerate(self.sets):
            if s & ~u == 0:
                out |= bit(k)
        return out


def build_qspace(space: FiniteSpace, include_empty: bool = True) -> QSpace:
    sets = tuple(s for s in space.opens if is_saturated(space, s) and (include_empty or s))
    n = len(sets)
    leq = np.zeros((n, n), dtype=bool)
    for i, a in enumerate(sets):
        for j, b in enumerate(sets):
            leq[i, j] = b & ~a == 0
    poset = FinPoset([set_name(space, s) for s in sets], leq)
    q = QSpace(space, sets, poset)

    # □U ∩ □V = □(U ∩ V)，子基已对有限交封闭，只需对并取闭包
    opens = {0}
    for u in space.opens:
        b = q.box(u)
        opens |= {o | b for o in opens}
    q.vietoris = tuple(sorted(opens))
    logger.debug(f"Q({space.name}): {n} saturated sets, {len(q.vietoris)} Vietoris opens")
    return q


def scott_opens(q: QSpace) -> Tuple[SubsetMask, ...]:
    """有限偏序的 Scott 开集就是上集"""
    p = q.poset
    return tuple(sorted({p.up_closure(a) for a in enumerate_antichains(p.comparable, list(range(len(p))))}))


def vietoris_equals_scott(q: QSpace) -> Tuple[bool, Optional[List[str]]]:
    vietoris = set(q.vietoris)
    scott = set(scott_opens(q))
    extra = sorted(vietoris ^ scott)
    if not extra:
        return True, None
    return False, q.poset.names_of(extra[0])


def claim1_check(space: FiniteSpace, q: Optional[QSpace] = None) -> bool:
    """□U ⊆ □V 蕴含 U ⊆ V：若 x ∈ U \\ V，则 ↑x ∈ □U 而不在 □V 中"""
    q = q or build_qspace(space)
    for u in space.opens:
        for v in space.opens:
            bu, bv = q.box(u), q.box(v)
            if bu & ~bv == 0 and u & ~v:
                x = next(iter_bits(u & ~v))
                logger.warning(f"claim 1 fails on {space.name}: point {space.points[x]}")
                return False
            # 证明中用到的点饱和：↑x ∈ □U 当且仅当 x ∈ U
            for x in iter_bits(space.full):
                up_x = saturation(space, bit(x))
                if (bu >> q.index_of(up_x) & 1) != (u >> x & 1):
                    return False
    return True


@dataclass
class Claim3Result:
    neighborhoods: List[SubsetMask]
    picks: List[SubsetMask]
    sequence: List[SubsetMask]
    saturated: bool
    meets_to_k: bool
    directed_in_lower: bool

    @property
    def ok(self) -> bool:
        return self.saturated and self.meets_to_k and self.directed_in_lower

    def render(self, space: FiniteSpace) -> Dict[str, Any]:
        return {
            "neighborhoods": [set_name(space, u) for u in self.neighborhoods],
            "picks": [set_name(space, k) for k in self.picks],
            "sequence": [set_name(space, s) for s in self.sequence],
            "ok": self.ok,
        }


def in_scott_closure(q: QSpace, k: SubsetMask, a: Sequence[SubsetMask]) -> bool:
    # 有限情形的闭包是 ⊑-下闭包：K ⊑ L 即 K ⊇ L
    return any(l & ~k == 0 for l in a)


def claim3_check(space: FiniteSpace, k: SubsetMask, a: Sequence[SubsetMask], q: Optional[QSpace] = None) -> Claim3Result:
    """
    由 K 的开邻域递减序列 U_n 取 K_n ∈ A ∩ □U_n，构造 Q_n = K ∪ ⋃_{m≥n} K_m，
    检查 Q_n 饱和、⋂Q_n = K，且 (Q_n) 是 ↓A 中上确界为 K 的有向子集。
    """
    q = q or build_qspace(space)
    if not is_saturated(space, k):
        raise PreconditionFailed(f"{set_name(space, k)} is not saturated in {space.name}")
    if not in_scott_closure(q, k, a):
        raise PreconditionFailed(f"{set_name(space, k)} is not in the Scott closure of the given family")

    containing = [u for u in space.opens if k & ~u == 0]
    neighborhoods = []
    current = space.full
    for u in containing:
        current &= u
        neighborhoods.append(current)
    picks = []
    for u in neighborhoods:
        options = sorted(l for l in a if l & ~u == 0)
        picks.append(options[0])
    sequence = []
    for n in range(len(picks)):
        acc = k
        for m in range(n, len(picks)):
            acc |= picks[m]
        sequence.append(acc)

    saturated = all(is_saturated(space, s) for s in sequence)
    meet = space.full
    for s in sequence:
        meet &= s
    meets_to_k = meet == k
    # 递减序列在 ⊑ 下递增，因而有向；每个 Q_n ⊇ K_n ∈ A；有限序列的上确界是末项
    decreasing = all(later & ~earlier == 0 for earlier, later in zip(sequence, sequence[1:]))
    in_lower = all(in_scott_closure(q, s, a) for s in sequence)
    directed_in_lower = decreasing and in_lower and sequence[-1] == k
    return Claim3Result(neighborhoods, picks, sequence, saturated, meets_to_k, directed_in_lower)


def claim3_sweep(space: FiniteSpace, q: Optional[QSpace] = None) -> bool:
    q = q or build_qspace(space)
    sets = list(q.sets)
    if len(space) <= CLAIM3_EXHAUSTIVE_POINTS:
        families = (
            [sets[i] for i in iter_bits(m)] for m in range(1, 1 << len(sets))
        )
    else:
        families = ([s] for s in sets)
        families = list(families) + [list(pair) for pair in combinations(sets, 2)]
    for a in families:
        for k in sets:
            if in_scott_closure(q, k, a) and not claim3_check(space, k, a, q).ok:
                logger.warning(f"claim 3 fails on {space.name} for K={set_name(space, k)}")
                return False
    return True


def q_one_step(space: FiniteSpace, q: Optional[QSpace] = None) -> bool:
    """(Q, ⊇) 视为无声明的 d-poset，对全部下集检查 cl(A) = A′"""
    q = q or build_qspace(space)
    d = DPoset(q.poset)
    return all(scott_closure(d, a).result == one_step_set(d, a) for a in enumerate_lower_sets(d))


def _filtered(family: Sequence[SubsetMask]) -> bool:
    members = set(family)
    return all(
        any(c & ~(x & y) == 0 for c in members)
        for x in members for y in members
    )


def well_filtered_check(space: FiniteSpace, q: Optional[QSpace] = None) -> bool:
    """
    每个 (⊇ 下) filtered 的饱和集族 C 与开集 U，⋂C ⊆ U 时存在 K ∈ C 使 K ⊆ U。

    Q 不超过 WELL_FILTERED_EXHAUSTIVE 个元素时穷举全部子族，否则取至多三个成员的子族。
    """
    q = q or build_qspace(space)
    sets = list(q.sets)
    if len(sets) <= WELL_FILTERED_EXHAUSTIVE:
        families = ([sets[i] for i in iter_bits(m)] for m in range(1, 1 << len(sets)))
    else:
        families = (list(c) for r in (1, 2, 3) for c in combinations(sets, r))
    for family in families:
        if not _filtered(family):
            continue
        meet = space.full
        for c in family:
            meet &= c
        for u in space.opens:
            if meet & ~u == 0 and not any(c & ~u == 0 for c in family):
                logger.warning(f"{space.name} is not well-filtered")
                return False
    return True


def smyth_sweep(max_points: int = 4) -> List[Dict[str, Any]]:
    """全部 ≤ max_points 个点的有限 T0 空间（同胚类）上的五项检查"""
    rows = []
    for n in range(1, max_points + 1):
        for space in enumerate_t0_spaces(n):
            q = build_qspace(space)
            vietoris, _ = vietoris_equals_scott(q)
            rows.append({
                "space": space.name,
                "points": n,
                "saturated_sets": len(q.sets),
                "vietoris_equals_scott": vietoris,
                "claim1": claim1_check(space, q),
                "claim3": claim3_sweep(space, q),
                "well_filtered": well_filtered_check(space, q),
                "q_one_step": q_one_step(space, q),
                # 有限空间总是第一可数的
                "first_countable": "vacuous",
            })
    logger.info(f"smyth sweep: {len(rows)} spaces up to {max_points} points")
    return rows


__all__ = [
    "QSpace", "build_qspace", "scott_opens", "vietoris_equals_scott", "claim1_check",
    "Claim3Result", "claim3_check", "claim3_sweep", "q_one_step", "well_filtered_check",
    "smyth_sweep", "set_name", "in_scott_closure",
]
