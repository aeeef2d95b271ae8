import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from order.mask import SubsetMask, bit
from order.poset import FinPoset
from utils.error.errors import IncoherentDeclaration

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LimitDecl:
    """声明：chain（严格递增，截断后的有限前缀）的 ω 上确界为 limit"""

    chain: Tuple[str, ...]
    limit: str
    chain_id: str

    @property
    def top(self) -> str:
        return self.chain[-1]


class DPoset:
    """有限偏序集 + ω 链极限声明（d-poset）"""

    def __init__(self, base: FinPoset, decls: Sequence[LimitDecl] = ()):
        self.base = base
        self.decls: Tuple[LimitDecl, ...] = tuple(decls)
        idx = base.index
        # 触发检查的热路径只用下标
        self.tops: List[int] = [idx[d.top] for d in self.decls]
        self.limits: List[int] = [idx[d.limit] for d in self.decls]
        self.decl_index: Dict[str, int] = {d.chain_id: k for k, d in enumerate(self.decls)}

    def __len__(self) -> int:
        return len(self.base)

    def __repr__(self) -> str:
        return f"DPoset({len(self.base)} elements, {len(self.decls)} decls)"

    @property
    def elements(self) -> Tuple[str, ...]:
        return self.base.elements

    def mask_of(self, names) -> SubsetMask:
        return self.base.mask_of(names)

    def names_of(self, mask: SubsetMask) -> List[str]:
        return self.base.names_of(mask)

    def structurally_equal(self, other: "DPoset") -> bool:
        if self.base != other.base:
            return False
        mine = {(d.chain, d.limit) for d in self.decls}
        theirs = {(d.chain, d.limit) for d in other.decls}
        return mine == theirs


def validate_dposet(d: DPoset, extension: Optional[DPoset] = None) -> None:
    """
    校验全部 LimitDecl 不变量（含一致性：limit 是链的最小上界）。

    extension 为下一层截断时，只要求 limit 在「仍然界住下一层链延续」的严格上界中最小；
    截断其它链造成的多余上界被忽略。
    """
    base = d.base
    seen_ids = set()
    seen_pairs = set()
    for decl in d.decls:
        cid = decl.chain_id
        if cid in seen_ids:
            raise IncoherentDeclaration(cid, "duplicate chain id")
        seen_ids.add(cid)
        if (decl.chain, decl.limit) in seen_pairs:
            raise IncoherentDeclaration(cid, "duplicate (chain, limit) pair")
        seen_pairs.add((decl.chain, decl.limit))
        if not decl.chain:
            raise IncoherentDeclaration(cid, "empty chain")
        for name in (*decl.chain, decl.limit):
            if name not in base.index:
                raise IncoherentDeclaration(cid, f"unknown element {name}")
        if len(set(decl.chain)) != len(decl.chain):
            raise IncoherentDeclaration(cid, "chain repeats an element")
        for a, b in zip(decl.chain, decl.chain[1:]):
            if not base.le(a, b):
                raise IncoherentDeclaration(cid, f"chain not increasing at {a}, {b}")

        top = base.index[decl.top]
        lim = base.index[decl.limit]
        if lim == top or not base.leq[top, lim]:
            raise IncoherentDeclaration(cid, f"{decl.limit} is not a strict upper bound of {decl.top}")
        if base.leq[lim, top]:
            raise IncoherentDeclaration(cid, f"{decl.limit} lies below chain element {decl.top}")

        strict_ub = base.up[top] & ~bit(top)
        if extension is not None:
            strict_ub &= _continuation_bounds(d, extension, decl)
        least = base.least(strict_ub)
        if least != lim:
            other = base.elements[least] if least is not None else "none"
            raise IncoherentDeclaration(cid, f"least upper bound is {other}, not {decl.limit}")


def _continuation_bounds(d: DPoset, extension: DPoset, decl: LimitDecl) -> SubsetMask:
    k = extension.decl_index.get(decl.chain_id)
    if k is None:
        raise IncoherentDeclaration(decl.chain_id, "declaration missing at the next level")
    ext = extension.base
    ext_top = extension.tops[k]
    mask = 0
    for i, name in enumerate(d.base.elements):
        j = ext.index.get(name)
        if j is not None and ext.leq[ext_top, j]:
            mask |= bit(i)
    return mask


def directed_sups(d: DPoset, s: SubsetMask) -> List[Tuple[int, Optional[str]]]:
    """
    下集 S 中有向子集的全部上确界：有限有向集的最大元（即 S 自身），
    以及链顶在 S 中的声明极限（见证为 chain id）。
    """
    out: List[Tuple[int, Optional[str]]] = [(i, None) for i in range(len(d)) if s >> i & 1]
    for k, decl in enumerate(d.decls):
        if s >> d.tops[k] & 1:
            out.append((d.limits[k], decl.chain_id))
    return out


__all__ = ["LimitDecl", "DPoset", "validate_dposet", "directed_sups"]
