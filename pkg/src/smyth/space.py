import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from order.mask import SubsetMask, bit, enumerate_antichains, full_mask, iter_bits
from order.poset import FinPoset
from utils.error.errors import PreconditionFailed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FiniteSpace:
    """
    有限 T0 空间：点名 + 开集族（位掩码，升序）。

    构造时校验：含 ∅ 与全集、对并与交封闭、T0。
    """

    name: str
    points: Tuple[str, ...]
    opens: Tuple[SubsetMask, ...]

    def __post_init__(self):
        full = self.full
        family = set(self.opens)
        if 0 not in family or full not in family:
            raise PreconditionFailed(f"space {self.name}: opens must contain the empty and the full set")
        for u in self.opens:
            for v in self.opens:
                if u | v not in family or u & v not in family:
                    raise PreconditionFailed(f"space {self.name}: opens not closed under union and intersection")
        for i in range(len(self.points)):
            for j in range(i + 1, len(self.points)):
                if all((u >> i & 1) == (u >> j & 1) for u in self.opens):
                    raise PreconditionFailed(
                        f"space {self.name} is not T0: {self.points[i]} and {self.points[j]} are indistinguishable"
                    )

    @classmethod
    def generated(cls, name: str, points: Sequence[str], subbasis: Iterable[SubsetMask]) -> "FiniteSpace":
        """由子基生成的拓扑：补上 ∅、全集，再对交和并取闭包"""
        full = full_mask(len(points))
        family = {0, full} | set(subbasis)
        changed = True
        while changed:
            changed = False
            current = list(family)
            for u in current:
                for v in current:
                    for w in (u | v, u & v):
                        if w not in family:
                            family.add(w)
                            changed = True
        return cls(name, tuple(points), tuple(sorted(family)))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def full(self) -> SubsetMask:
        return full_mask(len(self.points))

    def names_of(self, mask: SubsetMask) -> List[str]:
        return [self.points[i] for i in iter_bits(mask)]

    def mask_of(self, names: Iterable[str]) -> SubsetMask:
        index = {p: i for i, p in enumerate(self.points)}
        mask = 0
        for name in names:
            mask |= bit(index[name])
        return mask

    def specialization(self) -> FinPoset:
        """x ≤ y 当且仅当每个含 x 的开集都含 y"""
        n = len(self.points)
        leq = np.zeros((n, n), dtype=bool)
        for i in range(n):
            sat = saturation(self, bit(i))
            for j in iter_bits(sat):
                leq[i, j] = True
        return FinPoset(self.points, leq)


def saturation(space: FiniteSpace, s: SubsetMask) -> SubsetMask:
    out = space.full
    for u in space.opens:
        if s & ~u == 0:
            out &= u
    return out


def is_saturated(space: FiniteSpace, s: SubsetMask) -> bool:
    return saturation(space, s) == s


def alexandrov(p: FinPoset, name: str = "") -> FiniteSpace:
    """开集 = 上集"""
    opens = {p.up_closure(a) for a in enumerate_antichains(p.comparable, list(range(len(p))))}
    return FiniteSpace(name or f"alexandrov[{len(p)}]", p.elements, tuple(sorted(opens)))


def discrete(n: int) -> FiniteSpace:
    points = tuple(f"p{i}" for i in range(n))
    return FiniteSpace(f"discrete[{n}]", points, tuple(range(1 << n)))


def _canonical(leq: np.ndarray) -> Tuple[bool, ...]:
    n = leq.shape[0]
    best = None
    for perm in itertools.permutations(range(n)):
        key = tuple(leq[np.ix_(perm, perm)].flatten().tolist())
        if best is None or key < best:
            best = key
    return best


@lru_cache(maxsize=None)
def posets_up_to_isomorphism(n: int) -> Tuple[Tuple[bool, ...], ...]:
    """n 个点上的全部偏序（按同构去重），以展平的 leq 矩阵表示"""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    seen = {}
    for chosen in range(1 << len(pairs)):
        leq = np.eye(n, dtype=bool)
        for k in iter_bits(chosen):
            i, j = pairs[k]
            leq[i, j] = True
        if (leq & leq.T & ~np.eye(n, dtype=bool)).any():
            continue
        square = (leq.astype(np.int32) @ leq.astype(np.int32)) > 0
        if (square & ~leq).any():
            continue
        key = _canonical(leq)
        seen.setdefault(key, True)
    found = tuple(sorted(seen))
    logger.debug(f"{len(found)} posets on {n} points up to isomorphism")
    return found


def enumerate_t0_spaces(n: int) -> List[FiniteSpace]:
    """有限 T0 空间与其特殊化偏序一一对应，故按偏序同构类枚举即为按同胚类枚举"""
    points = tuple(f"p{i}" for i in range(n))
    spaces = []
    for k, flat in enumerate(posets_up_to_isomorphism(n)):
        leq = np.array(flat, dtype=bool).reshape(n, n)
        spaces.append(alexandrov(FinPoset(points, leq), name=f"T0[{n}]#{k}"))
    return spaces


__all__ = [
    "FiniteSpace", "saturation", "is_saturated", "alexandrov", "discrete",
    "posets_up_to_isomorphism", "enumerate_t0_spaces",
]
