"""
way-below 与 weakly-way-below（d-poset 语义）。

有向集分两类：有限有向集（上确界即最大元）与声明的 ω 链（上确界为 limit）。
对有限有向集 D，sup D = max D ≥ y 且 D ∩ ↑G ≠ ∅ 对所有这样的 D 成立，
等价于取 D = {y}：y ∈ ↑G，即 ↑y ⊆ ↑G（Smyth 序 G ≤ {y}）。
对声明 (C, ℓ)，C 与上集 ↑G 相交当且仅当链顶在 ↑G 中。
"""

import logging
from typing import List, Optional

from dposet.dposet import DPoset
from dposet.family import Band
from order.mask import SubsetMask, bit, iter_bits

logger = logging.getLogger(__name__)


def way_below_set(d: DPoset, g: SubsetMask, y: int) -> bool:
    up_g = d.base.up_closure(g)
    if not up_g >> y & 1:
        return False
    up_y = d.base.up[y]
    for k in range(len(d.decls)):
        if up_y >> d.limits[k] & 1 and not up_g >> d.tops[k] & 1:
            return False
    return True


def way_below(d: DPoset, x: int, y: int) -> bool:
    return way_below_set(d, bit(x), y)


def weakly_way_below(d: DPoset, x: int, y: int) -> bool:
    leq = d.base.leq
    if not leq[x, y]:
        return False
    return all(leq[x, d.tops[k]] for k in range(len(d.decls)) if d.limits[k] == y)


def _relevant_tops(d: DPoset, y: int, exact: bool) -> SubsetMask:
    """↓top(C) 的交，C 取 ℓ ≥ y（exact 时取 ℓ = y）的全部声明"""
    base = d.base
    out = base.full
    up_y = base.up[y]
    for k in range(len(d.decls)):
        lim = d.limits[k]
        if (lim == y) if exact else (up_y >> lim & 1):
            out &= base.down[d.tops[k]]
    return out


def way_below_down(d: DPoset, y: int, candidates: Optional[SubsetMask] = None) -> SubsetMask:
    """⇓y = {x ≤ y : x ≤ top(C) for every declaration with ℓ ≥ y}, restricted to candidates."""
    mask = d.base.down[y] & _relevant_tops(d, y, exact=False)
    return mask if candidates is None else mask & candidates


def weakly_way_below_down(d: DPoset, y: int, candidates: Optional[SubsetMask] = None) -> SubsetMask:
    mask = d.base.down[y] & _relevant_tops(d, y, exact=True)
    return mask if candidates is None else mask & candidates


def fin_family(d: DPoset, x: int, size_bound: int = 3, band: Optional[Band] = None) -> List[SubsetMask]:
    """
    fin(x) 中 ⊆-极小、|F| ≤ size_bound、位于受保护载体内的全部 F。

    F ≪ x 等价于 F 命中以下每个目标集：↓x，以及每个 ℓ ≥ x 的声明的 ↓top(C)；
    因此 fin 的极小元就是这些目标集的极小命中集。
    """
    if size_bound < 1:
        raise ValueError("size_bound must be positive")
    base = d.base
    candidates = base.full if band is None else band.guarded
    targets = [base.down[x] & candidates]
    up_x = base.up[x]
    for k in range(len(d.decls)):
        if up_x >> d.limits[k] & 1:
            targets.append(base.down[d.tops[k]] & candidates)
    if any(t == 0 for t in targets):
        return []
    # 包含另一个目标集的目标集自动被命中
    targets = sorted(set(targets), key=lambda t: (t.bit_count(), t))
    reduced: List[SubsetMask] = []
    for t in targets:
        if not any(r & ~t == 0 for r in reduced):
            reduced.append(t)

    found = set()

    def search(chosen: SubsetMask, count: int) -> None:
        missing = next((t for t in reduced if not t & chosen), None)
        if missing is None:
            found.add(chosen)
            return
        if count == size_bound:
            return
        for e in iter_bits(missing):
            search(chosen | bit(e), count + 1)

    search(0, 0)

    def hits_all(mask: SubsetMask) -> bool:
        return all(t & mask for t in reduced)

    minimal = [f for f in found if all(not hits_all(f & ~bit(e)) for e in iter_bits(f))]
    minimal.sort(key=lambda f: (f.bit_count(), list(iter_bits(f))))
    return minimal


__all__ = [
    "way_below", "way_below_set", "weakly_way_below", "way_below_down",
    "weakly_way_below_down", "fin_family",
]
