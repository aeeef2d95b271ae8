from typing import List

from dposet.dposet import DPoset


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(d: DPoset, name: str = "poset") -> str:
    """
    Hasse 图：只画覆盖关系（实线，自下而上），声明的极限画虚线（链顶 → 极限）。

    节点与边都按载体顺序输出，同一输入得到逐字节相同的文本。
    """
    elements = d.elements
    lines: List[str] = [f"digraph {_quote(name)} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    for e in elements:
        lines.append(f"  {_quote(e)};")
    for i, j in sorted(d.base.covers):
        lines.append(f"  {_quote(elements[i])} -> {_quote(elements[j])};")
    for decl in d.decls:
        lines.append(f"  {_quote(decl.top)} -> {_quote(decl.limit)} [style=dashed, label={_quote(decl.chain_id)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = ["export_dot"]
