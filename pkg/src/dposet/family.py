import logging
import threading
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Mapping, Optional, Sequence, Tuple

from dposet.dposet import DPoset, validate_dposet
from order.mask import SubsetMask, bit
from utils.error.errors import GuardTooLarge, IncoherentDeclaration

logger = logging.getLogger(__name__)

# 尾部判定：True = 链尾在集合内，False = 链尾在集合外
TailOracle = Mapping[str, bool]


@dataclass(frozen=True)
class SchemaSet:
    """
    按层实例化的命名下集（如 ℕ、第 1 列、对角线），可附带尾部判定。

    members(N) 返回第 N 层中该集合的元素名（调用方取下闭包）。
    oracle(chain_id) 返回 True/False/None，None 表示交给截断顶元判定。
    """

    name: str
    members: Callable[[int], Sequence[str]]
    oracle: Callable[[str], Optional[bool]] = field(default=lambda chain_id: None)

    def tail_oracle(self, d: DPoset) -> Dict[str, bool]:
        out = {}
        for decl in d.decls:
            answer = self.oracle(decl.chain_id)
            if answer is not None:
                out[decl.chain_id] = answer
        return out


class TruncationFamily:
    """
    层索引的 d-poset 族：N ↦ DPoset，元素名跨层稳定。

    第 N 层必须逐字嵌入第 N+1 层（embedding_check 校验）。
    """

    def __init__(
        self,
        name: str,
        builder: Callable[[int], DPoset],
        schemas: Sequence[SchemaSet] = (),
        min_level: int = 1,
    ):
        self.name = name
        self._builder = builder
        self.schemas: Tuple[SchemaSet, ...] = tuple(schemas)
        self.min_level = min_level
        self._cache: Dict[int, DPoset] = {}
        self._validated: set = set()
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"TruncationFamily({self.name})"

    def instantiate(self, level: int) -> DPoset:
        if level < self.min_level:
            raise ValueError(f"family {self.name} starts at level {self.min_level}, got {level}")
        cached = self._cache.get(level)
        if cached is not None:
            return cached
        with self._lock:
            if level not in self._cache:
                self._cache[level] = self._builder(level)
            return self._cache[level]

    def validate(self, level: int) -> None:
        if level in self._validated:
            return
        validate_dposet(self.instantiate(level), extension=self.instantiate(level + 1))
        self._validated.add(level)

    def schema(self, name: str) -> SchemaSet:
        for s in self.schemas:
            if s.name == name:
                return s
        raise KeyError(f"family {self.name} has no schema set '{name}'")


def embedding_check(family: TruncationFamily, level: int) -> Optional[str]:
    """Level N restricted from level N+1: returns a description of the first mismatch, or None."""
    small = family.instantiate(level)
    big = family.instantiate(level + 1)
    missing = [name for name in small.elements if name not in big.base.index]
    if missing:
        return f"element {missing[0]} disappears at level {level + 1}"
    if big.base.restrict(small.elements) != small.base:
        return f"order of level {level} is not the restriction of level {level + 1}"
    for decl in small.decls:
        k = big.decl_index.get(decl.chain_id)
        if k is None:
            return f"declaration {decl.chain_id} disappears at level {level + 1}"
        ext = big.decls[k]
        if ext.limit != decl.limit or ext.chain[: len(decl.chain)] != decl.chain:
            return f"declaration {decl.chain_id} is not extended at level {level + 1}"
    return None


@dataclass(frozen=True)
class Band:
    """第 N 层的保护带：完整载体 / 受保护载体（N−g 层名称）/ 内层载体（N−2g 层名称）"""

    level: int
    guard: int
    guarded: SubsetMask
    inner: Optional[SubsetMask]
    established: FrozenSet[int]
    suppress: bool = True

    def allows(self, k: int) -> bool:
        return not self.suppress or k in self.established

    def unguarded(self) -> "Band":
        return Band(self.level, self.guard, self.guarded, self.inner, self.established, suppress=False)

    def pool(self, d: DPoset) -> SubsetMask:
        """Generators: guarded carrier plus the tops of established declarations."""
        mask = self.guarded
        for k in self.established:
            mask |= bit(d.tops[k])
        return mask

    def require_inner(self) -> SubsetMask:
        if self.inner is None:
            raise GuardTooLarge(self.level, 2 * self.guard)
        return self.inner


def trivial_band(d: DPoset) -> Band:
    full = d.base.full
    return Band(level=0, guard=0, guarded=full, inner=full, established=frozenset(range(len(d.decls))), suppress=False)


def _names_mask(d: DPoset, names: Sequence[str]) -> SubsetMask:
    mask = 0
    index = d.base.index
    for name in names:
        i = index.get(name)
        if i is not None:
            mask |= bit(i)
    return mask


def guarded_carrier(d: DPoset, family: TruncationFamily, level: int, guard: int) -> SubsetMask:
    if guard < 0 or level - guard < max(1, family.min_level):
        raise GuardTooLarge(level, guard)
    if guard == 0:
        return d.base.full
    return _names_mask(d, family.instantiate(level - guard).elements)


def guard_band(family: TruncationFamily, level: int, guard: int) -> Band:
    d = family.instantiate(level)
    guarded = guarded_carrier(d, family, level, guard)
    inner_level = level - 2 * guard
    if inner_level >= max(1, family.min_level):
        inner: Optional[SubsetMask] = _names_mask(d, family.instantiate(inner_level).elements)
    else:
        inner = None
    if guard == 0:
        established = frozenset(range(len(d.decls)))
    else:
        older = {decl.chain_id for decl in family.instantiate(level - guard).decls}
        established = frozenset(k for k, decl in enumerate(d.decls) if decl.chain_id in older)
    return Band(level, guard, guarded, inner, established)


def validate_family(family: TruncationFamily, levels: Sequence[int]) -> None:
    for level in levels:
        family.validate(level)
        problem = embedding_check(family, level)
        if problem:
            raise IncoherentDeclaration(family.name, problem)
    logger.debug(f"family {family.name} valid at levels {list(levels)}")


__all__ = [
    "SchemaSet", "TailOracle", "TruncationFamily", "Band", "trivial_band", "guard_band",
    "guarded_carrier", "embedding_check", "validate_family",
]
