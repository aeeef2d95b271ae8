import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

from dposet.dposet import DPoset
from dposet.family import TruncationFamily
from properties.checkers import run_property
from utils.config.settings import get_settings
from utils.error.errors import NotContinuous, NotMonotone, NotRetraction, PreconditionFailed

logger = logging.getLogger(__name__)


@dataclass
class ScottMap:
    """族之间的逐层映射，按规范元素名给出：mapping(level, name) -> 目标同层元素名"""

    name: str
    source: TruncationFamily
    target: TruncationFamily
    mapping: Callable[[int, str], str]

    def table(self, level: int) -> Dict[str, str]:
        src = self.source.instantiate(level)
        dst = self.target.instantiate(level)
        out = {}
        for x in src.elements:
            y = self.mapping(level, x)
            if y not in dst.base.index:
                raise PreconditionFailed(f"{self.name}: {x} maps to {y}, which is not an element at level {level}", x=x)
            out[x] = y
        return out


def identity_map(family: TruncationFamily) -> ScottMap:
    return ScottMap(f"id[{family.name}]", family, family, lambda level, x: x)


def _image_limit(dst: DPoset, image: List[str]) -> str:
    """像链的上确界：像仍在上升且末项落在某条声明链上时取其极限，否则取最大项"""
    last = image[-1]
    if len(image) < 2 or image[-2] != last:
        for decl in dst.decls:
            if last == decl.top:
                return decl.limit
    return last


def verify_map(f: ScottMap, level: int) -> None:
    src = f.source.instantiate(level)
    dst = f.target.instantiate(level)
    table = f.table(level)
    leq_src = src.base.leq
    for i, x in enumerate(src.elements):
        for j, y in enumerate(src.elements):
            if leq_src[i, j] and not dst.base.le(table[x], table[y]):
                raise NotMonotone(
                    f"{f.name} at level {level}: {x} <= {y} but {table[x]} !<= {table[y]}", x=x, y=y
                )
    for decl in src.decls:
        image = [table[c] for c in decl.chain]
        expected = _image_limit(dst, image)
        if table[decl.limit] != expected:
            raise NotContinuous(
                f"{f.name} at level {level}: limit of {decl.chain_id} maps to {table[decl.limit]}, expected {expected}",
                chain_id=decl.chain_id,
            )


def verify_retraction(s: ScottMap, r: ScottMap, levels: Sequence[int]) -> None:
    """s: L → M，r: M → L；逐层检查单调、保极限以及 r∘s = id_L"""
    if s.source is not r.target or s.target is not r.source:
        raise NotRetraction(f"{s.name} and {r.name} do not form a section/retraction pair")
    for level in levels:
        verify_map(s, level)
        verify_map(r, level)
        forward = s.table(level)
        back = r.table(level)
        for x, y in forward.items():
            if back[y] != x:
                raise NotRetraction(f"level {level}: r(s({x})) = {back[y]}", x=x)
    logger.debug(f"{r.name} retracts {s.target.name} onto {s.source.name} at levels {list(levels)}")


def retract_transfer(
    s: ScottMap,
    r: ScottMap,
    prop: str,
    levels: Optional[Sequence[int]] = None,
    guard: Optional[int] = None,
    **kwargs,
) -> Dict[str, object]:
    """若 M 具有一步/弱一步闭包，则其 Scott 收缩 L 也具有"""
    if prop not in ("one-step", "weak-one-step"):
        raise ValueError(f"transfer only covers one-step and weak-one-step, got '{prop}'")
    settings = kwargs.get("settings") or get_settings()
    levels = list(levels or settings.levels)
    verify_retraction(s, r, levels)
    big = run_property(prop, s.target, levels, guard, **kwargs)
    small = run_property(prop, s.source, levels, guard, **kwargs)
    ok = big.outcome != "Holds" or small.outcome == "Holds"
    if not ok:
        logger.error(f"{prop} does not transfer from {s.target.name} to its retract {s.source.name}")
    return {"property": prop, "space": big.outcome, "retract": small.outcome, "ok": ok}


__all__ = ["ScottMap", "identity_map", "verify_map", "verify_retraction", "retract_transfer"]
