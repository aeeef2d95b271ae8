import logging
from functools import cached_property
from typing import Dict, Iterable, List, Literal, Optional, Sequence, Tuple

import numpy as np

from order.mask import SubsetMask, bit, from_indices, full_mask, iter_bits
from utils.error.errors import AntisymmetryViolation

logger = logging.getLogger(__name__)

BuildMode = Literal["covers", "full"]


class FinPoset:
    """
    不可变有限偏序集。

    elements: 元素名称（互不相同），下标即元素编号
    leq: 只读 n×n 布尔矩阵，leq[i, j] 当且仅当 i <= j
    down[i] / up[i]: ↓i 与 ↑i 的位掩码，构造时预计算

    所有子集参数都是 SubsetMask（整数位掩码）。
    """

    def __init__(self, elements: Sequence[str], leq: np.ndarray):
        assert leq.dtype == bool, "leq must be a boolean numpy array"
        n = len(elements)
        assert leq.shape == (n, n), f"leq must be {n}x{n}, got {leq.shape}"
        leq = leq.copy()
        leq.flags.writeable = False
        self.elements: Tuple[str, ...] = tuple(elements)
        self.leq = leq
        self.index: Dict[str, int] = {name: i for i, name in enumerate(self.elements)}
        self.down: List[SubsetMask] = [from_indices(np.flatnonzero(leq[:, j]).tolist()) for j in range(n)]
        self.up: List[SubsetMask] = [from_indices(np.flatnonzero(leq[i, :]).tolist()) for i in range(n)]

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"FinPoset({len(self)} elements)"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinPoset):
            return NotImplemented
        if set(self.elements) != set(other.elements):
            return False
        perm = [other.index[name] for name in self.elements]
        return bool(np.array_equal(self.leq, other.leq[np.ix_(perm, perm)]))

    __hash__ = None  # type: ignore[assignment]

    @property
    def full(self) -> SubsetMask:
        return full_mask(len(self))

    # 名称与掩码互转

    def mask_of(self, names: Iterable[str]) -> SubsetMask:
        mask = 0
        for name in names:
            mask |= bit(self.index[name])
        return mask

    def names_of(self, mask: SubsetMask) -> List[str]:
        return [self.elements[i] for i in iter_bits(mask)]

    def le(self, x: str, y: str) -> bool:
        return bool(self.leq[self.index[x], self.index[y]])

    # 闭包

    def down_closure(self, mask: SubsetMask) -> SubsetMask:
        out = 0
        for i in iter_bits(mask):
            out |= self.down[i]
        return out

    def up_closure(self, mask: SubsetMask) -> SubsetMask:
        out = 0
        for i in iter_bits(mask):
            out |= self.up[i]
        return out

    def is_lower(self, mask: SubsetMask) -> bool:
        return self.down_closure(mask) == mask

    def is_upper(self, mask: SubsetMask) -> bool:
        return self.up_closure(mask) == mask

    @cached_property
    def comparable(self) -> List[SubsetMask]:
        return [self.down[i] | self.up[i] for i in range(len(self))]

    # 上下界与确界

    def upper_bounds(self, mask: SubsetMask) -> SubsetMask:
        out = self.full
        for i in iter_bits(mask):
            out &= self.up[i]
        return out

    def lower_bounds(self, mask: SubsetMask) -> SubsetMask:
        out = self.full
        for i in iter_bits(mask):
            out &= self.down[i]
        return out

    def least(self, mask: SubsetMask) -> Optional[int]:
        """The element of mask below every other element of mask, if any."""
        for i in iter_bits(mask):
            if mask & ~self.up[i] == 0:
                return i
        return None

    def greatest(self, mask: SubsetMask) -> Optional[int]:
        for i in iter_bits(mask):
            if mask & ~self.down[i] == 0:
                return i
        return None

    def sup(self, mask: SubsetMask) -> Optional[int]:
        # sup(∅) = 最小元（若存在），因为 ∅ 的上界集是整个载体
        return self.least(self.upper_bounds(mask))

    def inf(self, mask: SubsetMask) -> Optional[int]:
        return self.greatest(self.lower_bounds(mask))

    def is_directed(self, mask: SubsetMask) -> bool:
        # 有限集合上只需检查两两有上界：对元素个数归纳，
        # {a,b} 的上界 u 再与 c 取上界，即得 {a,b,c} 的上界
        if not mask:
            return False
        items = list(iter_bits(mask))
        for k, a in enumerate(items):
            for b in items[k + 1:]:
                if not (self.up[a] & self.up[b] & mask):
                    return False
        return True

    def smyth_leq(self, g: SubsetMask, h: SubsetMask) -> bool:
        """G <= H in the Smyth preorder iff ↑H ⊆ ↑G."""
        return self.up_closure(h) & ~self.up_closure(g) == 0

    def classify_semilattice(self) -> Tuple[bool, bool]:
        """(meet-semilattice?, sup-semilattice?) from pairwise infs and sups."""
        # 同样由归纳法：两两存在 inf/sup 即所有非空有限子集存在
        n = len(self)
        meet = join = True
        for a in range(n):
            for b in range(a + 1, n):
                pair = bit(a) | bit(b)
                if meet and self.inf(pair) is None:
                    meet = False
                if join and self.sup(pair) is None:
                    join = False
                if not meet and not join:
                    return False, False
        return meet, join

    # 结构

    @cached_property
    def covers(self) -> List[Tuple[int, int]]:
        """Cover pairs (i, j): i < j with nothing strictly between."""
        lt = self.leq.copy()
        np.fill_diagonal(lt, False)
        between = (lt.astype(np.int32) @ lt.astype(np.int32)) > 0
        child = lt & ~between
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(child))]

    def restrict(self, names: Sequence[str]) -> "FinPoset":
        idx = [self.index[name] for name in names]
        return FinPoset(list(names), self.leq[np.ix_(idx, idx)])


def build_poset(
    elements: Sequence[str],
    relations: Iterable[Tuple[str, str]],
    mode: BuildMode = "covers",
) -> FinPoset:
    """
    由元素和关系对构造偏序集：取自反传递闭包。

    mode="covers": relations 可为任意生成关系（通常是覆盖关系）
    mode="full":   relations 应已是完整关系，闭包后若有新增对则记录告警

    errors: AntisymmetryViolation(x, y) 若闭包产生 x <= y <= x 且 x != y
    """
    if len(set(elements)) != len(elements):
        dup = next(name for name in elements if list(elements).count(name) > 1)
        raise ValueError(f"duplicate element name: {dup}")
    index = {name: i for i, name in enumerate(elements)}
    n = len(elements)
    leq = np.eye(n, dtype=bool)
    given = 0
    for a, b in relations:
        leq[index[a], index[b]] = True
        given += 1

    closed = transitive_closure(leq)
    if mode == "full" and not np.array_equal(closed, leq | np.eye(n, dtype=bool)):
        logger.warning(f"full-relation input with {given} pairs was not transitive, closed it")

    cycle = closed & closed.T
    np.fill_diagonal(cycle, False)
    if cycle.any():
        i, j = (int(v) for v in np.argwhere(cycle)[0])
        raise AntisymmetryViolation(elements[i], elements[j])
    return FinPoset(elements, closed)


def transitive_closure(leq: np.ndarray) -> np.ndarray:
    # Warshall：按中间点 k 逐列合并
    closed = leq.copy()
    for k in range(closed.shape[0]):
        closed |= np.outer(closed[:, k], closed[k, :])
    return closed


__all__ = ["FinPoset", "build_poset", "transitive_closure"]
