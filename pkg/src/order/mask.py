"""整数位掩码表示的子集（SubsetMask）：第 i 位为 1 表示第 i 个元素在集合中"""

from typing import Iterable, Iterator, List, Optional, Sequence

SubsetMask = int

EMPTY: SubsetMask = 0


def full_mask(n: int) -> SubsetMask:
    return (1 << n) - 1


def bit(i: int) -> SubsetMask:
    return 1 << i


def from_indices(indices: Iterable[int]) -> SubsetMask:
    mask = 0
    for i in indices:
        if i < 0:
            raise ValueError(f"negative element index {i}")
        mask |= 1 << i
    return mask


def iter_bits(mask: SubsetMask) -> Iterator[int]:
    """Ascending indices of the set bits."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_indices(mask: SubsetMask) -> List[int]:
    return list(iter_bits(mask))


def size(mask: SubsetMask) -> int:
    return mask.bit_count()


def is_subset(a: SubsetMask, b: SubsetMask) -> bool:
    return a & ~b == 0


def first(mask: SubsetMask) -> Optional[int]:
    if not mask:
        return None
    return (mask & -mask).bit_length() - 1


def first_in_order(mask: SubsetMask, order: Sequence[int]) -> Optional[int]:
    for i in order:
        if mask >> i & 1:
            return i
    return None


def enumerate_antichains(
    comparable: Sequence[SubsetMask],
    candidates: Sequence[int],
) -> Iterator[SubsetMask]:
    """枚举 candidates 中的全部反链（含空集），按候选顺序的字典序。

    comparable[i] 是与 i 可比较的元素掩码（含 i 本身）。
    """
    stack = [(0, 0, 0)]  # (next position, chosen, forbidden)
    while stack:
        pos, chosen, forbidden = stack.pop()
        yield chosen
        # 逆序压栈，保证按字典序弹出
        for j in range(len(candidates) - 1, pos - 1, -1):
            c = candidates[j]
            if forbidden >> c & 1:
                continue
            stack.append((j + 1, chosen | (1 << c), forbidden | comparable[c]))
