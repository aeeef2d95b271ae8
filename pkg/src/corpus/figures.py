"""
三个示例族：非拟连续但有弱一步闭包的 domain、无弱一步闭包的拟连续偏序、ℕ′ ≠ ℕ″ 的 dcpo。

元素名跨层稳定：(m,n) 写作 "(m,n)"，ω 写作 "w"，顶元写作 "top"，自然数为十进制串。
"""

import logging
from typing import List, Optional, Tuple

from corpus.entry import CorpusEntry, EntryFlags, Golden
from dposet.dposet import DPoset, LimitDecl
from dposet.family import SchemaSet, TruncationFamily
from order.poset import build_poset

logger = logging.getLogger(__name__)


def pair(m: int, n: int) -> str:
    return f"({m},{n})"


def omega(m: int) -> str:
    return f"({m},w)"


def column(m: int, level: int) -> List[str]:
    return [pair(m, n) for n in range(1, level + 1)]


def diagonal(level: int) -> List[str]:
    return [pair(n, n) for n in range(1, level + 1)]


def naturals(level: int) -> List[str]:
    return [str(n) for n in range(1, level + 1)]


def _own_chain_only(chain_id: str):
    def oracle(cid: str) -> Optional[bool]:
        return cid == chain_id

    return oracle


# ---------------------------------------------------------------- Fig 1


def fig1_level(level: int) -> DPoset:
    elements = ["top"]
    relations: List[Tuple[str, str]] = []
    decls = []
    for m in range(1, level + 1):
        col = column(m, level)
        elements.extend(col)
        relations.extend(zip(col, col[1:]))
        relations.append((col[-1], "top"))
        decls.append(LimitDecl(tuple(col), "top", f"col:{m}"))
    return DPoset(build_poset(elements, relations), decls)


def fig1_family() -> CorpusEntry:
    family = TruncationFamily(
        "fig1",
        fig1_level,
        schemas=[
            SchemaSet("col:1", lambda n: column(1, n), _own_chain_only("col:1")),
            SchemaSet("col:2", lambda n: column(2, n), _own_chain_only("col:2")),
            # 每列只含有限段，尾部判定交给截断顶元：未受保护时第 N 列触发 top
            SchemaSet("diag", diagonal),
        ],
    )
    golden = {
        "weak-one-step": Golden("Holds"),
        "one-step": Golden("Fails", {"A": "col:1", "x": "(2,1)"}),
        "quasicontinuous": Golden("Fails", {"x": "top"}),
        "meet-continuous": Golden("Fails", {"x": "(2,1)", "chain": "col:1"}),
        "continuous": Golden("Fails", {"x": "top"}),
        "Dprime-lower": Golden("Fails", {"D": "col:1", "x": "(2,1)"}),
        "Aprime-lower": Golden("Fails", {"A": "col:1", "x": "(2,1)"}),
    }
    return CorpusEntry(
        "fig1",
        family,
        EntryFlags(dcpo=True, meet_semilattice=False, sup_semilattice=True),
        golden,
        provenance="non-quasicontinuous domain with weak one-step closure; one-step witness derived",
        source="fig1.poset",
    )


# ---------------------------------------------------------------- Fig 2


def fig2_level(level: int) -> DPoset:
    """
    (i)   (m,n) ≤ (m,n+1)            (ii)  (m,n) ≤ (m,w)
    (iii) n ≤ n+1                     (iv)  (m,n) ≤ n，m ≥ 2
    (v)   (1,n) ≤ (m,w)，m ≥ max(n,2) (vi)  (m,n) ≤ (m+1,n)，m ≥ 2
    另有 (m,w) ≤ (m+1,w)，m ≥ 2：图中画出的 ω 点链，使各列的最小上界存在。
    """
    elements: List[str] = []
    relations: List[Tuple[str, str]] = []
    for m in range(1, level + 1):
        elements.extend(column(m, level))
    elements.extend(omega(m) for m in range(1, level + 1))
    for m in range(1, level + 1):
        col = column(m, level)
        relations.extend(zip(col, col[1:]))
        relations.append((col[-1], omega(m)))
        if m >= 2:
            for n in range(1, level + 1):
                relations.append((pair(m, n), str(n)))
                if m < level:
                    relations.append((pair(m, n), pair(m + 1, n)))
            if m < level:
                relations.append((omega(m), omega(m + 1)))
    nat = naturals(level)
    elements.extend(nat)
    relations.extend(zip(nat, nat[1:]))
    for n in range(1, level + 1):
        target = max(n, 2)
        if target <= level:
            relations.append((pair(1, n), omega(target)))

    decls = [LimitDecl(tuple(column(m, level)), omega(m), f"col:{m}") for m in range(1, level + 1)]
    for n in range(1, level + 1):
        row = tuple(pair(m, n) for m in range(2, level + 1))
        if row:
            decls.append(LimitDecl(row, str(n), f"row:{n}"))
    return DPoset(build_poset(elements, relations), decls)


def _fig2_nat_oracle(chain_id: str) -> Optional[bool]:
    # 第 1 列的尾部不在 ↓ℕ 中，其余列与各行都在
    return chain_id != "col:1"


def fig2_family() -> CorpusEntry:
    family = TruncationFamily(
        "fig2",
        fig2_level,
        schemas=[
            SchemaSet("nat", naturals, _fig2_nat_oracle),
            SchemaSet("col:1", lambda n: column(1, n), _own_chain_only("col:1")),
            SchemaSet("col:2", lambda n: column(2, n), _own_chain_only("col:2")),
            SchemaSet("row:1", lambda n: [pair(m, 1) for m in range(2, n + 1)], _own_chain_only("row:1")),
        ],
        min_level=2,
    )
    golden = {
        "weak-one-step": Golden("Fails", {"A": "nat", "x": "(1,w)"}),
        "one-step": Golden("Fails", {"A": "nat", "x": "(1,1)"}),
        "quasicontinuous": Golden("Holds"),
    }
    return CorpusEntry(
        "fig2",
        family,
        EntryFlags(dcpo=False, meet_semilattice=False, sup_semilattice=False),
        golden,
        provenance="quasicontinuous poset without weak one-step closure; row declarations and the omega chain are additions",
        source="fig2.poset",
    )


# ---------------------------------------------------------------- Fig 3


def fig3_level(level: int) -> DPoset:
    nat = naturals(level)
    elements = nat + ["w", "a"]
    relations = list(zip(nat, nat[1:])) + [(nat[-1], "w"), ("a", "w")]
    return DPoset(build_poset(elements, relations), [LimitDecl(tuple(nat), "w", "nat")])


def fig3_family() -> CorpusEntry:
    family = TruncationFamily(
        "fig3",
        fig3_level,
        schemas=[SchemaSet("nat", naturals, _own_chain_only("nat"))],
    )
    golden = {
        "weak-one-step": Golden("Holds"),
        "one-step": Golden("Fails", {"A": "nat", "x": "a"}),
        "meet-continuous": Golden("Fails", {"x": "a", "chain": "nat"}),
        "continuous": Golden("Fails", {"x": "a"}),
        "exact": Golden("Holds"),
        "Dprime-lower": Golden("Fails", {"D": "nat", "x": "a"}),
        "Aprime-lower": Golden("Fails", {"A": "nat", "x": "a"}),
    }
    return CorpusEntry(
        "fig3",
        family,
        EntryFlags(dcpo=True, meet_semilattice=False, sup_semilattice=True),
        golden,
        provenance="dcpo where the one-step and weak one-step sets of the naturals differ",
        source="fig3.poset",
    )


__all__ = [
    "fig1_family", "fig2_family", "fig3_family", "fig1_level", "fig2_level", "fig3_level",
    "pair", "omega", "column", "diagonal", "naturals",
]
