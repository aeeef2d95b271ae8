"""穷举判定：用于测试中与不动点算子逐一比对"""

import logging
from typing import List

from dposet.dposet import DPoset
from order.mask import SubsetMask, bit, enumerate_antichains, iter_bits
from scott.operators import is_scott_closed
from utils.error.errors import CarrierTooLarge

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_CAP = 14


def enumerate_lower_sets(d: DPoset) -> List[SubsetMask]:
    base = d.base
    return [base.down_closure(a) for a in enumerate_antichains(base.comparable, list(range(len(base))))]


def enumerate_scott_closed(d: DPoset, cap: int = DEFAULT_ORACLE_CAP) -> List[SubsetMask]:
    if len(d) > cap:
        raise CarrierTooLarge(len(d), cap)
    closed = [s for s in enumerate_lower_sets(d) if is_scott_closed(d, s)]
    logger.debug(f"{len(closed)} Scott-closed sets on {len(d)} elements")
    return closed


def oracle_closure(d: DPoset, a: SubsetMask, closed: List[SubsetMask]) -> SubsetMask:
    out = d.base.full
    for s in closed:
        if a & ~s == 0:
            out &= s
    return out


def oracle_one_step(d: DPoset, a: SubsetMask) -> SubsetMask:
    """A′ by brute force: maxima of every finite directed subset of ↓A plus limits of chains inside ↓A."""
    base = d.base
    lower = base.down_closure(a)
    sups = 0
    # 有限有向集的上确界是其最大元 m，而 {m} 本身有向，故只需单点集
    for i in iter_bits(lower):
        m = base.sup(bit(i))
        if m is not None:
            sups |= bit(m)
    for k, decl in enumerate(d.decls):
        if all(lower >> base.index[c] & 1 for c in decl.chain):
            sups |= bit(d.limits[k])
    return sups


def oracle_weak_one_step(d: DPoset, a: SubsetMask) -> SubsetMask:
    return d.base.down_closure(oracle_one_step(d, a))


__all__ = [
    "DEFAULT_ORACLE_CAP", "enumerate_lower_sets", "enumerate_scott_closed",
    "oracle_closure", "oracle_one_step", "oracle_weak_one_step",
]
