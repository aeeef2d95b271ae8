import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from dposet.dposet import DPoset
from dposet.family import Band
from order.mask import SubsetMask, bit

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClosureTrace:
    """从 A 到 cl(A) 的各阶段，以及每阶段触发的声明（chain id）"""

    stages: Tuple[SubsetMask, ...]
    triggers: Tuple[Tuple[str, ...], ...]

    @property
    def result(self) -> SubsetMask:
        return self.stages[-1]

    def render(self, d: DPoset) -> Dict[str, List]:
        return {
            "stages": [d.names_of(s) for s in self.stages],
            "triggers": [list(t) for t in self.triggers],
        }


class _Triggers:
    """
    一个下集的极限触发规则。

    声明 k 触发当且仅当：
      - 尾部判定为 inside；或
      - 链顶在已触发极限的下闭包 reached 中；或
      - 判定不是 outside，链顶在 ↓A 中，且保护带允许该声明（未确立的声明在受保护模式下被抑制）。
    """

    def __init__(self, d: DPoset, band: Optional[Band], oracle: Optional[Mapping[str, bool]]):
        self.d = d
        self.band = band
        self.answers: List[Optional[bool]] = [
            None if oracle is None else oracle.get(decl.chain_id) for decl in d.decls
        ]

    def fires(self, k: int, lower: SubsetMask, reached: SubsetMask) -> bool:
        answer = self.answers[k]
        if answer is True:
            return True
        top = self.d.tops[k]
        if reached >> top & 1:
            return True
        if answer is False:
            return False
        if not lower >> top & 1:
            return False
        return self.band is None or self.band.allows(k)


def scott_closure(
    d: DPoset,
    a: SubsetMask,
    band: Optional[Band] = None,
    oracle: Optional[Mapping[str, bool]] = None,
) -> ClosureTrace:
    """cl(A)：迭代 S ↦ ↓S ∪ {触发的极限} 直到不动点，至多 |载体| 轮"""
    base = d.base
    rule = _Triggers(d, band, oracle)
    lower = base.down_closure(a)
    fired = [False] * len(d.decls)
    reached = 0
    stages = [a]
    triggers: List[Tuple[str, ...]] = []
    current = a
    while True:
        new_limits = 0
        names = []
        for k in range(len(d.decls)):
            if not fired[k] and rule.fires(k, lower, reached):
                fired[k] = True
                new_limits |= bit(d.limits[k])
                names.append(d.decls[k].chain_id)
        nxt = base.down_closure(current) | new_limits
        if nxt == current:
            break
        stages.append(nxt)
        triggers.append(tuple(names))
        current = nxt
        reached = _limit_down(d, fired)
    return ClosureTrace(tuple(stages), tuple(triggers))


def _limit_down(d: DPoset, fired: Sequence[bool]) -> SubsetMask:
    out = 0
    for k, on in enumerate(fired):
        if on:
            out |= d.base.down[d.limits[k]]
    return out


def one_step_set(
    d: DPoset,
    a: SubsetMask,
    band: Optional[Band] = None,
    oracle: Optional[Mapping[str, bool]] = None,
) -> SubsetMask:
    """A′ = ↓A ∪ {ℓ : (C,ℓ) 声明且 C 的尾部在 ↓A 中}"""
    rule = _Triggers(d, band, oracle)
    lower = d.base.down_closure(a)
    out = lower
    for k in range(len(d.decls)):
        if rule.fires(k, lower, 0):
            out |= bit(d.limits[k])
    return out


def weak_one_step_set(
    d: DPoset,
    a: SubsetMask,
    band: Optional[Band] = None,
    oracle: Optional[Mapping[str, bool]] = None,
) -> SubsetMask:
    """A″ = ↓(A′)"""
    return d.base.down_closure(one_step_set(d, a, band, oracle))


def is_scott_closed(
    d: DPoset,
    s: SubsetMask,
    band: Optional[Band] = None,
    oracle: Optional[Mapping[str, bool]] = None,
) -> bool:
    if not d.base.is_lower(s):
        return False
    rule = _Triggers(d, band, oracle)
    for k in range(len(d.decls)):
        if rule.fires(k, s, 0) and not s >> d.limits[k] & 1:
            return False
    return True


def is_scott_open(d: DPoset, u: SubsetMask) -> bool:
    """U = ↑U，且 ℓ ∈ U 蕴含链中某元素（等价地，链顶）在 U 中"""
    if not d.base.is_upper(u):
        return False
    return all(not u >> d.limits[k] & 1 or u >> d.tops[k] & 1 for k in range(len(d.decls)))


def scott_interior(d: DPoset, s: SubsetMask) -> SubsetMask:
    """Largest Scott open subset of S: complement of the closure of the complement."""
    full = d.base.full
    return full & ~scott_closure(d, full & ~s).result


__all__ = [
    "ClosureTrace", "scott_closure", "one_step_set", "weak_one_step_set",
    "is_scott_closed", "is_scott_open", "scott_interior",
]
