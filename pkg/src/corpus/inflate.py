"""
随机族生成器（链膨胀）。

在随机有限 DAG 上选若干锚点 m，取 ↓m 中以 m 结尾的一条极大链，再接上新的 ω 尾部
t1 < t2 < ...（m < t_k < 所有 u > m）。极限要么是新元素 l（位于尾部之上、所有 u > m 之下，
可附带若干旁支 b ≤ l），要么是 m 的最小严格上界；两者都没有时该链不声明，族不是 dcpo。
构造保证相容性；旁支或链若仍导致反对称/相容性失败则被丢弃。
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from corpus.entry import CorpusEntry, EntryFlags
from dposet.dposet import DPoset, LimitDecl
from dposet.family import SchemaSet, TruncationFamily, validate_family
from order.mask import iter_bits
from order.poset import FinPoset, build_poset
from utils.error.errors import AntisymmetryViolation, IncoherentDeclaration

logger = logging.getLogger(__name__)

EDGE_PROBABILITY = 0.3
FRESH_LIMIT_PROBABILITY = 0.5
SIDE_PROBABILITY = 0.3
_COHERENCE_LEVELS = (1, 2)


@dataclass
class _Inflated:
    anchor: str
    prefix: Tuple[str, ...]
    above: Tuple[str, ...]
    limit: Optional[str]
    fresh: bool
    sides: Tuple[str, ...] = field(default_factory=tuple)


def _tail(c: int, level: int) -> List[str]:
    return [f"t{c}_{k}" for k in range(1, level + 1)]


def _random_dag(rng: np.random.Generator, size: int) -> Tuple[List[str], List[Tuple[str, str]]]:
    names = [f"b{i}" for i in range(size)]
    relations = []
    for i in range(size):
        for j in range(i + 1, size):
            if rng.random() < EDGE_PROBABILITY:
                relations.append((names[i], names[j]))
    return names, relations


def _maximal_chain_to(base: FinPoset, anchor: int, rng: np.random.Generator) -> Tuple[str, ...]:
    lower_covers = {}
    for lo, hi in base.covers:
        lower_covers.setdefault(hi, []).append(lo)
    chain = [anchor]
    current = anchor
    while lower_covers.get(current):
        options = sorted(lower_covers[current])
        current = options[int(rng.integers(len(options)))]
        chain.append(current)
    return tuple(base.elements[i] for i in reversed(chain))


def _build_level(
    names: Sequence[str],
    relations: Sequence[Tuple[str, str]],
    chains: Sequence[Tuple[int, _Inflated]],
    level: int,
) -> DPoset:
    elements = list(names)
    rels = list(relations)
    decls = []
    for c, plan in chains:
        tail = _tail(c, level)
        elements.extend(tail)
        rels.append((plan.anchor, tail[0]))
        rels.extend(zip(tail, tail[1:]))
        for u in plan.above:
            rels.append((tail[-1], u))
        if plan.fresh:
            elements.append(plan.limit)
            rels.append((tail[-1], plan.limit))
            rels.extend((plan.limit, u) for u in plan.above)
            rels.extend((b, plan.limit) for b in plan.sides)
        if plan.limit is not None:
            decls.append(LimitDecl(plan.prefix + tuple(tail), plan.limit, f"c{c}"))
    return DPoset(build_poset(elements, rels), decls)


def _family_from(
    name: str,
    names: Sequence[str],
    relations: Sequence[Tuple[str, str]],
    chains: Sequence[Tuple[int, _Inflated]],
    base: FinPoset,
) -> TruncationFamily:
    frozen = list(chains)

    def builder(level: int) -> DPoset:
        return _build_level(names, relations, frozen, level)

    schemas = []
    for c, plan in frozen:
        members = list(plan.prefix)
        anchor = base.index[plan.anchor]
        # 另一条链 c' 的尾部落在 ↓(链 c) 中当且仅当 c 的锚点严格高于 c' 的锚点
        inside = {
            f"c{c2}" for c2, other in frozen
            if c2 == c or (base.leq[base.index[other.anchor], anchor] and other.anchor != plan.anchor)
        }
        schemas.append(
            SchemaSet(
                f"tail:c{c}",
                _tail_members(members, c),
                _inside_oracle(inside),
            )
        )
    return TruncationFamily(name, builder, schemas=schemas)


def _tail_members(prefix: List[str], c: int) -> Callable[[int], List[str]]:
    return lambda level: prefix + _tail(c, level)


def _inside_oracle(inside: set) -> Callable[[str], Optional[bool]]:
    return lambda chain_id: chain_id in inside


def _coherent(family: TruncationFamily) -> bool:
    try:
        validate_family(family, _COHERENCE_LEVELS)
    except (AntisymmetryViolation, IncoherentDeclaration) as e:
        logger.debug(f"{family.name}: dropping candidate ({e})")
        return False
    return True


def inflate_random(seed: int, carrier_cap: int = 12, chain_count: int = 2) -> CorpusEntry:
    """同一 seed 产生完全相同的族；carrier_cap 约束基础偏序的大小（不含尾部）"""
    if carrier_cap < 1 or chain_count < 0:
        raise ValueError("carrier_cap must be positive and chain_count non-negative")
    rng = np.random.default_rng(seed)
    size = int(rng.integers(1, max(1, carrier_cap // 2) + 1))
    names, relations = _random_dag(rng, size)
    base = build_poset(names, relations)
    name = f"random-{seed}"

    count = min(chain_count, size)
    anchors = sorted(int(i) for i in rng.choice(size, size=count, replace=False)) if count else []
    accepted: List[Tuple[int, _Inflated]] = []
    for c, anchor in enumerate(anchors):
        prefix = _maximal_chain_to(base, anchor, rng)
        above_mask = base.up[anchor] & ~(1 << anchor)
        above = tuple(base.elements[i] for i in iter_bits(above_mask))
        fresh = rng.random() < FRESH_LIMIT_PROBABILITY
        if fresh:
            plan = _Inflated(base.elements[anchor], prefix, above, f"l{c}", True)
            blocked = base.up[anchor]
            for i in iter_bits(above_mask):
                blocked |= base.up[i]
            sides = tuple(
                base.elements[i] for i in range(size)
                if not blocked >> i & 1 and rng.random() < SIDE_PROBABILITY
            )
            if sides:
                with_sides = _Inflated(plan.anchor, prefix, above, plan.limit, True, sides)
                if _coherent(_family_from(name, names, relations, accepted + [(c, with_sides)], base)):
                    plan = with_sides
        else:
            least = base.least(above_mask)
            limit = None if least is None else base.elements[least]
            plan = _Inflated(base.elements[anchor], prefix, above, limit, False)
        if _coherent(_family_from(name, names, relations, accepted + [(c, plan)], base)):
            accepted.append((c, plan))

    family = _family_from(name, names, relations, accepted, base)
    sample = family.instantiate(3)
    meet, join = sample.base.classify_semilattice()
    flags = EntryFlags(
        dcpo=all(plan.limit is not None for _, plan in accepted),
        meet_semilattice=meet,
        sup_semilattice=join,
    )
    logger.debug(f"{name}: base {size}, {len(accepted)} inflated chains, flags {flags}")
    return CorpusEntry(name, family, flags, provenance=f"chain inflation, seed {seed}")


__all__ = ["inflate_random"]
