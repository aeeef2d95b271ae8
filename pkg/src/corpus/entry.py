import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

from dposet.dposet import DPoset, validate_dposet
from dposet.family import TruncationFamily
from dposet.verdict import Outcome, Witness
from utils.error.errors import IncoherentDeclaration

logger = logging.getLogger(__name__)

# 检查器名称，也是报告记录里的 property 字段
PROPERTIES = (
    "weak-one-step",
    "one-step",
    "meet-continuous",
    "continuous",
    "quasicontinuous",
    "exact",
    "Dprime-lower",
    "Aprime-lower",
)


@dataclass(frozen=True)
class EntryFlags:
    """作者标注的结构标志：dcpo（每条 ω 链都有声明的上确界）与两种半格"""

    dcpo: bool
    meet_semilattice: bool
    sup_semilattice: bool


@dataclass(frozen=True)
class Golden:
    outcome: Outcome
    witness: Optional[Witness] = None


@dataclass
class CorpusEntry:
    name: str
    family: TruncationFamily
    flags: EntryFlags
    golden: Dict[str, Golden] = field(default_factory=dict)
    provenance: str = ""
    # assets/posets 下对应的 DSL 源文件
    source: Optional[str] = None

    def expected(self, prop: str) -> Optional[Golden]:
        return self.golden.get(prop)


def export_dsl(entry: CorpusEntry, level: int) -> str:
    """
    把某一层实例导出为 DSL 文本，供用户修改后重新加载。

    单个 d-poset 按普通相容性校验，只有借助下一层才相容的声明不写入快照，
    以注释列出。
    """
    from cli.dsl import format_dposet, subset_stmt

    d = entry.family.instantiate(level)
    kept, omitted = [], []
    for decl in d.decls:
        try:
            validate_dposet(DPoset(d.base, [decl]))
            kept.append(decl)
        except IncoherentDeclaration:
            omitted.append(decl.chain_id)
    snapshot = DPoset(d.base, kept)

    subsets = {}
    for schema in entry.family.schemas:
        members = [name for name in schema.members(level) if name in d.base.index]
        # 尾部判定按本层的链 id 逐个展开
        answers = {decl.chain_id: schema.oracle(decl.chain_id) for decl in kept}
        inside = [cid for cid, a in answers.items() if a is True]
        outside = [cid for cid, a in answers.items() if a is False]
        subsets[schema.name] = subset_stmt(schema.name, members, inside, outside)
    header = "".join(f"# {cid}: coherent only against level {level + 1}, omitted\n" for cid in omitted)
    if omitted:
        logger.info(f"{entry.name} N={level}: {len(omitted)} declarations left out of the snapshot")
    return header + format_dposet(f"{entry.name}_{level}", snapshot, subsets)


__all__ = ["CorpusEntry", "EntryFlags", "Golden", "PROPERTIES", "export_dsl"]
