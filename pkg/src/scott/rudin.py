import logging
from typing import Optional, Sequence

from order.mask import SubsetMask, bit, iter_bits
from order.poset import FinPoset
from utils.error.errors import InternalError, NotFiltered

logger = logging.getLogger(__name__)


def check_filtered(p: FinPoset, family: Sequence[SubsetMask]) -> None:
    """对每对 F, G 要求族中存在 H 使 ↑H ⊆ ↑F ∩ ↑G（Smyth 序下有向）"""
    for f in family:
        if not f:
            raise NotFiltered([], [])
    ups = [p.up_closure(f) for f in family]
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            common = ups[i] & ups[j]
            if not any(h & ~common == 0 for h in ups):
                raise NotFiltered(p.names_of(family[i]), p.names_of(family[j]))


def rudin_select(p: FinPoset, family: Sequence[SubsetMask]) -> Optional[SubsetMask]:
    """
    有向集 D ⊆ ∪family 且与每个成员相交。

    按规范名称序回溯：每个成员选一个元素，要求已选元素在 ∪family 中有公共上界；
    最后补上最小（名称序）的公共上界，使 D 有最大元从而有向。
    """
    if not family:
        return None
    check_filtered(p, family)
    union = 0
    for f in family:
        union |= f
    order = sorted(iter_bits(union), key=lambda i: p.elements[i])
    members = sorted(family, key=lambda f: (f.bit_count(), sorted(p.elements[i] for i in iter_bits(f))))

    def bounds(chosen: SubsetMask) -> SubsetMask:
        return p.upper_bounds(chosen) & union

    def search(k: int, chosen: SubsetMask) -> Optional[SubsetMask]:
        if k == len(members):
            return chosen
        member = members[k]
        if member & chosen:
            return search(k + 1, chosen)
        for e in order:
            if not member >> e & 1:
                continue
            nxt = chosen | bit(e)
            if bounds(nxt):
                found = search(k + 1, nxt)
                if found is not None:
                    return found
        return None

    chosen = search(0, 0)
    if chosen is None:
        raise InternalError("no directed selection for a filtered finite family")
    if not p.is_directed(chosen):
        ub = bounds(chosen)
        top = min(iter_bits(ub), key=lambda i: p.elements[i])
        chosen |= bit(top)
    logger.debug(f"rudin selection {p.names_of(chosen)} for {len(members)} members")
    return chosen


def meets_every(selection: SubsetMask, family: Sequence[SubsetMask]) -> bool:
    return all(selection & f for f in family)


__all__ = ["rudin_select", "check_filtered", "meets_every"]
