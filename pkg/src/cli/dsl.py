"""
偏序描述语言（.poset 文件）的解析与打印。

    poset fig3 {
      family N vars k {
        elem k; elem w; elem a;
        le k k+1 where k<N;
        le N w; le a w;
        chain k over k -> w id "nat";
        subset nat = k inside "nat";
      }
    }
    space S { point a b; open a; }
    space T from fig3;

poset 块内的普通语句（elem / le / chain / subset）在每一层都出现；family 块按层变量
（上例的 N）展开，变量取值 1..N，where 子句是整数线性约束。subset 的 inside / outside
是链 id 的通配模式，作为尾部判定：精确 id 先于通配模式，同级时 outside 先于 inside，
都不匹配则交给截断顶元。

错误统一为 "error:行:列: 文本"：语法错误 DslSyntaxError，语义错误 DslSemanticError。
"""

import itertools
import logging
import operator
import re
from dataclasses import dataclass, field
from fnmatch import fnmatchcase
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import pyparsing as pp

from dposet.dposet import DPoset, LimitDecl, validate_dposet
from dposet.family import SchemaSet, TruncationFamily, validate_family
from order.poset import build_poset
from smyth.space import FiniteSpace, alexandrov
from utils.error.errors import (
    AntisymmetryViolation,
    DslSemanticError,
    DslSyntaxError,
    IncoherentDeclaration,
    PreconditionFailed,
)

logger = logging.getLogger(__name__)

RESERVED = (
    "poset space family vars min elem le chain id subset inside outside where over point open from"
).split()

PLAIN_NAME_RE = re.compile(r"[A-Za-z0-9_.:]+")
TUPLE_NAME_RE = re.compile(r"\([^()\s;{}\"]*\)")

COMPARE: Dict[str, Callable[[int, int], bool]] = {
    "<=": operator.le,
    ">=": operator.ge,
    "==": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    ">": operator.gt,
}


def quote_name(name: str) -> str:
    if name not in RESERVED and (PLAIN_NAME_RE.fullmatch(name) or TUPLE_NAME_RE.fullmatch(name)):
        return name
    return '"' + name.replace('"', "'") + '"'


# ---------------------------------------------------------------- 语法树


@dataclass(frozen=True)
class Expr:
    """整数线性表达式：Σ coef·var + const；terms 中 var 为 None 表示常数项"""

    terms: Tuple[Tuple[int, Optional[str]], ...]

    def variables(self) -> List[str]:
        return [v for _, v in self.terms if v is not None]

    def bare_ident(self) -> Optional[str]:
        if len(self.terms) == 1 and self.terms[0][0] == 1 and self.terms[0][1] is not None:
            return self.terms[0][1]
        return None

    def eval(self, env: Mapping[str, int]) -> int:
        total = 0
        for coef, var in self.terms:
            total += coef if var is None else coef * env[var]
        return total

    def __str__(self) -> str:
        out = []
        for k, (coef, var) in enumerate(self.terms):
            sign = "-" if coef < 0 else "+"
            mag = abs(coef)
            body = str(mag) if var is None else (var if mag == 1 else f"{mag}*{var}")
            out.append(body if k == 0 and sign == "+" else (f"-{body}" if k == 0 else f"{sign}{body}"))
        return "".join(out)


@dataclass(frozen=True)
class Cond:
    left: Expr
    op: str
    right: Expr

    def holds(self, env: Mapping[str, int]) -> bool:
        return COMPARE[self.op](self.left.eval(env), self.right.eval(env))

    def __str__(self) -> str:
        return f"{self.left}{self.op}{self.right}"


Component = Union[str, Expr]


@dataclass(frozen=True)
class Pattern:
    parts: Tuple[Component, ...]
    is_tuple: bool

    def render(self, env: Mapping[str, int]) -> str:
        rendered = [self._part(p, env) for p in self.parts]
        return "(" + ",".join(rendered) + ")" if self.is_tuple else rendered[0]

    @staticmethod
    def _part(part: Component, env: Mapping[str, int]) -> str:
        if isinstance(part, str):
            return part
        ident = part.bare_ident()
        if ident is not None and ident not in env:
            return ident
        return str(part.eval(env))

    def variables(self, known: Sequence[str]) -> List[str]:
        out = []
        for p in self.parts:
            if isinstance(p, Expr):
                out.extend(v for v in p.variables() if v in known)
        return out

    def unknown(self, known: Sequence[str]) -> Optional[str]:
        """Returns a variable used arithmetically that is not declared."""
        for p in self.parts:
            if isinstance(p, Expr) and p.bare_ident() is None:
                for v in p.variables():
                    if v not in known:
                        return v
        return None

    def __str__(self) -> str:
        parts = [f'"{p}"' if isinstance(p, str) else str(p) for p in self.parts]
        return "(" + ",".join(parts) + ")" if self.is_tuple else parts[0]


@dataclass(frozen=True)
class Located:
    line: int
    col: int


@dataclass(frozen=True)
class ElemStmt(Located):
    names: Tuple[str, ...]


@dataclass(frozen=True)
class LeStmt(Located):
    names: Tuple[str, ...]


@dataclass(frozen=True)
class ChainStmt(Located):
    names: Tuple[str, ...]
    limit: str
    chain_id: Optional[str]


@dataclass(frozen=True)
class SubsetStmt(Located):
    name: str
    members: Tuple[str, ...]
    inside: Tuple[str, ...] = ()
    outside: Tuple[str, ...] = ()


@dataclass(frozen=True)
class FamElem(Located):
    item: Pattern
    where: Tuple[Cond, ...]


@dataclass(frozen=True)
class FamLe(Located):
    lo: Pattern
    hi: Pattern
    where: Tuple[Cond, ...]


@dataclass(frozen=True)
class FamChain(Located):
    item: Pattern
    over: str
    limit: Pattern
    where: Tuple[Cond, ...]
    chain_id: Optional[str]


@dataclass(frozen=True)
class FamSubset(Located):
    name: str
    item: Pattern
    where: Tuple[Cond, ...]
    inside: Tuple[str, ...] = ()
    outside: Tuple[str, ...] = ()


@dataclass(frozen=True)
class FamilyBlock(Located):
    level_var: str
    min_level: int
    variables: Tuple[str, ...]
    body: Tuple[Located, ...]


@dataclass(frozen=True)
class PosetBlock(Located):
    name: str
    body: Tuple[Located, ...]


@dataclass(frozen=True)
class SpaceBlock(Located):
    name: str
    source: Optional[str] = None
    points: Tuple[str, ...] = ()
    opens: Tuple[Tuple[str, ...], ...] = ()


# ---------------------------------------------------------------- 文法


def _at(s: str, loc: int) -> Tuple[int, int]:
    return pp.lineno(loc, s), pp.col(loc, s)


def _make_expr(tokens: pp.ParseResults) -> Expr:
    terms: List[Tuple[int, Optional[str]]] = []
    sign = 1
    for tok in tokens:
        if isinstance(tok, str):
            sign = 1 if tok == "+" else -1
            continue
        if isinstance(tok, int):
            terms.append((sign * tok, None))
        else:
            parts = list(tok)
            coef = parts[0] if len(parts) == 2 else 1
            terms.append((sign * coef, parts[-1]))
        sign = 1
    return Expr(tuple(terms))


def _oracle_patterns(t: pp.ParseResults) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    inside = tuple(t["inside"]) if "inside" in t else ()
    outside = tuple(t["outside"]) if "outside" in t else ()
    return inside, outside


def _where(t: pp.ParseResults) -> Tuple[Cond, ...]:
    return tuple(t["where"]) if "where" in t else ()


def _grammar() -> pp.ParserElement:
    LBRACE, RBRACE, SEMI, ARROW, EQ = map(pp.Suppress, ["{", "}", ";", "->", "="])
    K = {word: pp.Keyword(word).suppress() for word in RESERVED}
    reserved = pp.MatchFirst(pp.Keyword(word) for word in RESERVED)

    quoted = pp.QuotedString('"')
    ident = (~reserved + pp.Word(pp.alphas + "_", pp.alphanums + "_")).set_name("identifier")
    name = (quoted | pp.Regex(TUPLE_NAME_RE.pattern) | (~reserved + pp.Regex(PLAIN_NAME_RE.pattern))).set_name("name")
    integer = pp.Word(pp.nums).set_parse_action(lambda t: int(t[0])).set_name("integer")

    var_term = pp.Group(pp.Optional(integer + pp.Suppress("*")) + ident)
    term = var_term | integer
    expr = (term + pp.ZeroOrMore(pp.one_of("+ -") + term)).set_parse_action(_make_expr).set_name("expression")
    cond = (expr + pp.one_of("<= >= == != < >") + expr).set_parse_action(lambda t: Cond(t[0], t[1], t[2]))

    component = quoted | expr
    tuple_pattern = (pp.Suppress("(") + pp.Group(pp.delimited_list(component)) + pp.Suppress(")")).set_parse_action(
        lambda t: Pattern(tuple(t[0]), True)
    )
    single_pattern = pp.Group(component).set_parse_action(lambda t: Pattern((t[0][0],), False))
    pattern = (tuple_pattern | single_pattern).set_name("pattern")

    where_clause = K["where"] - pp.Group(pp.delimited_list(cond))("where")
    oracle_clause = (K["inside"] - pp.Group(pp.OneOrMore(quoted))("inside")) | (
        K["outside"] - pp.Group(pp.OneOrMore(quoted))("outside")
    )

    # ---- 普通语句
    elem_stmt = (K["elem"] - pp.Group(pp.OneOrMore(name)) - SEMI).set_parse_action(
        lambda s, l, t: ElemStmt(*_at(s, l), tuple(t[0]))
    )
    le_stmt = (K["le"] - pp.Group(name + pp.OneOrMore(name)) - SEMI).set_parse_action(
        lambda s, l, t: LeStmt(*_at(s, l), tuple(t[0]))
    )
    chain_stmt = (
        K["chain"] - pp.Group(pp.OneOrMore(name))("names") - ARROW - name("limit")
        - pp.Optional(K["id"] - name("chain_id")) - SEMI
    ).set_parse_action(
        lambda s, l, t: ChainStmt(*_at(s, l), tuple(t["names"]), t["limit"], t.get("chain_id"))
    )
    subset_stmt = (
        K["subset"] - name("name") - EQ - pp.Group(pp.ZeroOrMore(name))("members")
        - pp.ZeroOrMore(oracle_clause) - SEMI
    ).set_parse_action(
        lambda s, l, t: SubsetStmt(*_at(s, l), t["name"], tuple(t["members"]), *_oracle_patterns(t))
    )

    # ---- family 语句
    f_elem = (K["elem"] - pattern("item") - pp.Optional(where_clause) - SEMI).set_parse_action(
        lambda s, l, t: FamElem(*_at(s, l), t["item"], _where(t))
    )
    f_le = (K["le"] - pattern("lo") - pattern("hi") - pp.Optional(where_clause) - SEMI).set_parse_action(
        lambda s, l, t: FamLe(*_at(s, l), t["lo"], t["hi"], _where(t))
    )
    f_chain = (
        K["chain"] - pattern("item") - K["over"] - ident("over") - ARROW - pattern("limit")
        - pp.Optional(where_clause) - pp.Optional(K["id"] - quoted("chain_id")) - SEMI
    ).set_parse_action(
        lambda s, l, t: FamChain(*_at(s, l), t["item"], t["over"], t["limit"], _where(t), t.get("chain_id"))
    )
    f_subset = (
        K["subset"] - name("name") - EQ - pattern("item") - pp.Optional(where_clause)
        - pp.ZeroOrMore(oracle_clause) - SEMI
    ).set_parse_action(
        lambda s, l, t: FamSubset(*_at(s, l), t["name"], t["item"], _where(t), *_oracle_patterns(t))
    )
    family_block = (
        K["family"] - ident("level_var") - pp.Optional(K["min"] - integer("min_level"))
        - pp.Optional(K["vars"] - pp.Group(pp.OneOrMore(ident))("vars"))
        - LBRACE - pp.Group(pp.ZeroOrMore(f_elem | f_le | f_chain | f_subset))("body") - RBRACE
    ).set_parse_action(
        lambda s, l, t: FamilyBlock(
            *_at(s, l), t["level_var"], t.get("min_level", 1), tuple(t.get("vars", ())), tuple(t["body"])
        )
    )

    poset_block = (
        K["poset"] - name("name") - LBRACE
        - pp.Group(pp.ZeroOrMore(elem_stmt | le_stmt | chain_stmt | subset_stmt | family_block))("body")
        - RBRACE
    ).set_parse_action(lambda s, l, t: PosetBlock(*_at(s, l), t["name"], tuple(t["body"])))

    open_stmt = K["open"] - pp.Group(pp.ZeroOrMore(name)) - SEMI
    space_body = (
        LBRACE - K["point"] - pp.Group(pp.OneOrMore(name))("points") - SEMI
        - pp.Group(pp.ZeroOrMore(open_stmt))("opens") - RBRACE
    )
    space_block = (
        K["space"] - name("name") - ((K["from"] - name("source") - SEMI) | space_body)
    ).set_parse_action(
        lambda s, l, t: SpaceBlock(
            *_at(s, l),
            t["name"],
            t.get("source"),
            tuple(t.get("points", ())),
            tuple(tuple(o) for o in t.get("opens", ())),
        )
    )

    document = pp.OneOrMore(poset_block | space_block)
    document.ignore(pp.python_style_comment)
    return document


_GRAMMAR: Optional[pp.ParserElement] = None


def parse_blocks(text: str) -> List[Located]:
    global _GRAMMAR
    if _GRAMMAR is None:
        _GRAMMAR = _grammar()
    try:
        return list(_GRAMMAR.parse_string(text, parse_all=True))
    except pp.ParseBaseException as pe:
        raise DslSyntaxError(pe.lineno, pe.column, pe.msg) from pe


# ---------------------------------------------------------------- 语义


def _pattern_oracle(inside: Sequence[str], outside: Sequence[str]) -> Callable[[str], Optional[bool]]:
    # 不含通配符的模式优先；同一级内 outside 优先
    def split(patterns: Sequence[str]) -> Tuple[set, List[str]]:
        globs = [p for p in patterns if any(c in p for c in "*?[")]
        return {p for p in patterns if p not in globs}, globs

    exact_in, glob_in = split(inside)
    exact_out, glob_out = split(outside)

    def oracle(chain_id: str) -> Optional[bool]:
        if chain_id in exact_out:
            return False
        if chain_id in exact_in:
            return True
        if any(fnmatchcase(chain_id, p) for p in glob_out):
            return False
        if any(fnmatchcase(chain_id, p) for p in glob_in):
            return True
        return None

    return oracle


def _semantic(node: Located, text: str) -> DslSemanticError:
    return DslSemanticError(node.line, node.col, text)


class _FamilyExpander:
    """把 family 块按层展开为元素、关系、声明与子集成员"""

    def __init__(self, block: FamilyBlock):
        self.block = block
        self.known = (block.level_var,) + block.variables
        for stmt in block.body:
            patterns = [getattr(stmt, a) for a in ("item", "lo", "hi", "limit") if hasattr(stmt, a)]
            for p in patterns:
                bad = p.unknown(self.known)
                if bad is not None:
                    raise _semantic(stmt, f"unknown variable '{bad}'")
            for c in getattr(stmt, "where", ()):
                for v in c.left.variables() + c.right.variables():
                    if v not in self.known:
                        raise _semantic(stmt, f"unknown variable '{v}' in where clause")
            if isinstance(stmt, FamChain) and stmt.over not in block.variables:
                raise _semantic(stmt, f"chain runs over undeclared variable '{stmt.over}'")

    def _free(self, patterns: Sequence[Pattern], conds: Sequence[Cond], skip: Sequence[str] = ()) -> List[str]:
        used = set()
        for p in patterns:
            used.update(p.variables(self.block.variables))
        for c in conds:
            used.update(v for v in c.left.variables() + c.right.variables() if v in self.block.variables)
        return [v for v in self.block.variables if v in used and v not in skip]

    def assignments(
        self, level: int, patterns: Sequence[Pattern], conds: Sequence[Cond], skip: Sequence[str] = ()
    ) -> Iterator[Dict[str, int]]:
        free = self._free(patterns, conds, skip)
        for values in itertools.product(range(1, level + 1), repeat=len(free)):
            env = {self.block.level_var: level, **dict(zip(free, values))}
            yield env

    def expand(self, level: int, elements: List[str], relations: List[Tuple[str, str]], decls: List[LimitDecl]):
        seen = set(elements)
        for stmt in self.block.body:
            if isinstance(stmt, FamElem):
                for env in self.assignments(level, [stmt.item], stmt.where):
                    if all(c.holds(env) for c in stmt.where):
                        name = stmt.item.render(env)
                        if name not in seen:
                            seen.add(name)
                            elements.append(name)
        for stmt in self.block.body:
            if isinstance(stmt, FamLe):
                for env in self.assignments(level, [stmt.lo, stmt.hi], stmt.where):
                    if all(c.holds(env) for c in stmt.where):
                        lo, hi = stmt.lo.render(env), stmt.hi.render(env)
                        for n in (lo, hi):
                            if n not in seen:
                                raise _semantic(stmt, f"unknown element '{n}' at level {level}")
                        relations.append((lo, hi))
        for k, stmt in enumerate(s for s in self.block.body if isinstance(s, FamChain)):
            decls.extend(self._chains(stmt, level, seen, k))

    def _chains(self, stmt: FamChain, level: int, seen: set, k: int) -> List[LimitDecl]:
        out = []
        for env in self.assignments(level, [stmt.item, stmt.limit], stmt.where, skip=[stmt.over]):
            chain = []
            for step in range(1, level + 1):
                local = {**env, stmt.over: step}
                if all(c.holds(local) for c in stmt.where):
                    chain.append(stmt.item.render(local))
            if not chain:
                continue
            limit = stmt.limit.render(env)
            for n in chain + [limit]:
                if n not in seen:
                    raise _semantic(stmt, f"unknown element '{n}' at level {level}")
            fixed = {v: val for v, val in env.items() if v != self.block.level_var}
            if stmt.chain_id:
                try:
                    chain_id = stmt.chain_id.format(**fixed)
                except KeyError as e:
                    raise _semantic(stmt, f"chain id refers to unbound variable {e}") from e
            else:
                chain_id = ":".join([f"chain{k}"] + [str(v) for v in fixed.values()])
            out.append(LimitDecl(tuple(chain), limit, chain_id))
        return out

    def subset_members(self, name: str, level: int) -> List[str]:
        out = []
        for stmt in self.block.body:
            if isinstance(stmt, FamSubset) and stmt.name == name:
                for env in self.assignments(level, [stmt.item], stmt.where):
                    if all(c.holds(env) for c in stmt.where):
                        out.append(stmt.item.render(env))
        return out


@dataclass
class PosetDecl:
    block: PosetBlock
    family: TruncationFamily
    is_family: bool

    @property
    def name(self) -> str:
        return self.block.name


@dataclass
class DslDocument:
    blocks: List[Located] = field(default_factory=list)
    posets: Dict[str, PosetDecl] = field(default_factory=dict)
    spaces: Dict[str, FiniteSpace] = field(default_factory=dict)

    def family(self, name: Optional[str] = None) -> TruncationFamily:
        if name is None:
            if not self.posets:
                raise PreconditionFailed("document declares no poset")
            return next(iter(self.posets.values())).family
        try:
            return self.posets[name].family
        except KeyError:
            raise PreconditionFailed(f"document has no poset named '{name}'") from None

    def dposet(self, name: Optional[str] = None, level: Optional[int] = None) -> DPoset:
        family = self.family(name)
        return family.instantiate(level if level is not None else family.min_level)

    def space(self, name: Optional[str] = None) -> FiniteSpace:
        if name is None:
            if not self.spaces:
                raise PreconditionFailed("document declares no space")
            return next(iter(self.spaces.values()))
        try:
            return self.spaces[name]
        except KeyError:
            raise PreconditionFailed(f"document has no space named '{name}'") from None


def _build_poset_decl(block: PosetBlock) -> PosetDecl:
    fixed_elements: List[str] = []
    fixed_relations: List[Tuple[Located, Tuple[str, str]]] = []
    fixed_chains: List[ChainStmt] = []
    subsets: Dict[str, List[SubsetStmt]] = {}
    families = [s for s in block.body if isinstance(s, FamilyBlock)]
    if len(families) > 1:
        raise _semantic(families[1], f"poset {block.name} declares more than one family")
    expander = _FamilyExpander(families[0]) if families else None

    for stmt in block.body:
        if isinstance(stmt, ElemStmt):
            for n in stmt.names:
                if n in fixed_elements:
                    raise _semantic(stmt, f"duplicate element '{n}'")
                fixed_elements.append(n)
        elif isinstance(stmt, LeStmt):
            fixed_relations.extend((stmt, pair) for pair in zip(stmt.names, stmt.names[1:]))
        elif isinstance(stmt, ChainStmt):
            fixed_chains.append(stmt)
        elif isinstance(stmt, SubsetStmt):
            subsets.setdefault(stmt.name, []).append(stmt)
    family_subsets: Dict[str, List[FamSubset]] = {}
    if expander is not None:
        for stmt in expander.block.body:
            if isinstance(stmt, FamSubset):
                family_subsets.setdefault(stmt.name, []).append(stmt)

    def builder(level: int) -> DPoset:
        elements = list(fixed_elements)
        relations: List[Tuple[str, str]] = []
        decls: List[LimitDecl] = []
        if expander is not None:
            expander.expand(level, elements, relations, decls)
        known = set(elements)
        for stmt, (lo, hi) in fixed_relations:
            for n in (lo, hi):
                if n not in known:
                    raise _semantic(stmt, f"unknown element '{n}'")
            relations.append((lo, hi))
        for k, stmt in enumerate(fixed_chains):
            for n in stmt.names + (stmt.limit,):
                if n not in known:
                    raise _semantic(stmt, f"unknown element '{n}'")
            decls.append(LimitDecl(stmt.names, stmt.limit, stmt.chain_id or f"{block.name}:{k + 1}"))
        try:
            return DPoset(build_poset(elements, relations), decls)
        except AntisymmetryViolation as e:
            raise _semantic(block, e.message) from e

    def members_of(name: str) -> Callable[[int], List[str]]:
        def members(level: int) -> List[str]:
            out = [n for stmt in subsets.get(name, []) for n in stmt.members]
            if expander is not None:
                out.extend(expander.subset_members(name, level))
            return out

        return members

    schemas = []
    for name in list(subsets) + [n for n in family_subsets if n not in subsets]:
        stmts: List[Union[SubsetStmt, FamSubset]] = list(subsets.get(name, [])) + list(family_subsets.get(name, []))
        inside = tuple(p for s in stmts for p in s.inside)
        outside = tuple(p for s in stmts for p in s.outside)
        schemas.append(SchemaSet(name, members_of(name), _pattern_oracle(inside, outside)))

    min_level = expander.block.min_level if expander is not None else 1
    family = TruncationFamily(block.name, builder, schemas=schemas, min_level=min_level)

    # 立即展开两层，让元素、关系与声明的错误带着位置尽早报告
    try:
        if expander is not None:
            validate_family(family, [min_level, min_level + 1])
        else:
            validate_dposet(family.instantiate(min_level))
        for schema in schemas:
            unknown = [n for n in schema.members(min_level) if n not in family.instantiate(min_level).base.index]
            if unknown:
                node = next(iter(subsets.get(schema.name, []) or family_subsets.get(schema.name, [])))
                raise _semantic(node, f"subset {schema.name} names unknown element '{unknown[0]}'")
    except IncoherentDeclaration as e:
        raise _semantic(block, e.message) from e
    return PosetDecl(block, family, expander is not None)


def _build_space(block: SpaceBlock, posets: Mapping[str, PosetDecl]) -> FiniteSpace:
    if block.source is not None:
        decl = posets.get(block.source)
        if decl is None:
            raise _semantic(block, f"space {block.name} refers to unknown poset '{block.source}'")
        if decl.is_family:
            raise _semantic(block, f"space {block.name}: '{block.source}' is a family, pick a finite poset")
        return alexandrov(decl.family.instantiate(1).base, name=block.name)
    if len(set(block.points)) != len(block.points):
        raise _semantic(block, f"space {block.name} repeats a point name")
    index = {p: i for i, p in enumerate(block.points)}
    subbasis = []
    for names in block.opens:
        mask = 0
        for n in names:
            if n not in index:
                raise _semantic(block, f"open set names unknown point '{n}'")
            mask |= 1 << index[n]
        subbasis.append(mask)
    try:
        return FiniteSpace.generated(block.name, block.points, subbasis)
    except PreconditionFailed as e:
        raise _semantic(block, e.message) from e


def parse_document(text: str) -> DslDocument:
    doc = DslDocument(parse_blocks(text))
    for block in doc.blocks:
        if block.name in doc.posets or block.name in doc.spaces:
            raise _semantic(block, f"name '{block.name}' declared twice")
        if isinstance(block, PosetBlock):
            doc.posets[block.name] = _build_poset_decl(block)
        else:
            doc.spaces[block.name] = _build_space(block, doc.posets)
    logger.debug(f"parsed {len(doc.posets)} posets and {len(doc.spaces)} spaces")
    return doc


# ---------------------------------------------------------------- 打印


def _names(names: Sequence[str]) -> str:
    return " ".join(quote_name(n) for n in names)


def _oracle_text(inside: Sequence[str], outside: Sequence[str]) -> str:
    out = ""
    if outside:
        out += " outside " + " ".join(f'"{p}"' for p in outside)
    if inside:
        out += " inside " + " ".join(f'"{p}"' for p in inside)
    return out


def _where_text(conds: Sequence[Cond]) -> str:
    return " where " + ", ".join(str(c) for c in conds) if conds else ""


def _format_stmt(stmt: Located, indent: str) -> List[str]:
    if isinstance(stmt, ElemStmt):
        return [f"{indent}elem {_names(stmt.names)};"]
    if isinstance(stmt, LeStmt):
        return [f"{indent}le {_names(stmt.names)};"]
    if isinstance(stmt, ChainStmt):
        chain_id = f" id {quote_name(stmt.chain_id)}" if stmt.chain_id else ""
        return [f"{indent}chain {_names(stmt.names)} -> {quote_name(stmt.limit)}{chain_id};"]
    if isinstance(stmt, SubsetStmt):
        members = " " + _names(stmt.members) if stmt.members else ""
        return [f"{indent}subset {quote_name(stmt.name)} ={members}{_oracle_text(stmt.inside, stmt.outside)};"]
    if isinstance(stmt, FamElem):
        return [f"{indent}elem {stmt.item}{_where_text(stmt.where)};"]
    if isinstance(stmt, FamLe):
        return [f"{indent}le {stmt.lo} {stmt.hi}{_where_text(stmt.where)};"]
    if isinstance(stmt, FamChain):
        chain_id = f' id "{stmt.chain_id}"' if stmt.chain_id else ""
        return [f"{indent}chain {stmt.item} over {stmt.over} -> {stmt.limit}{_where_text(stmt.where)}{chain_id};"]
    if isinstance(stmt, FamSubset):
        return [
            f"{indent}subset {quote_name(stmt.name)} = {stmt.item}{_where_text(stmt.where)}"
            f"{_oracle_text(stmt.inside, stmt.outside)};"
        ]
    if isinstance(stmt, FamilyBlock):
        header = f"{indent}family {stmt.level_var}"
        if stmt.min_level != 1:
            header += f" min {stmt.min_level}"
        if stmt.variables:
            header += " vars " + " ".join(stmt.variables)
        lines = [header + " {"]
        for inner in stmt.body:
            lines.extend(_format_stmt(inner, indent + "  "))
        return lines + [indent + "}"]
    raise TypeError(f"cannot format {type(stmt).__name__}")


def format_block(block: Located) -> str:
    if isinstance(block, PosetBlock):
        lines = [f"poset {quote_name(block.name)} {{"]
        for stmt in block.body:
            lines.extend(_format_stmt(stmt, "  "))
        return "\n".join(lines + ["}"])
    if isinstance(block, SpaceBlock):
        if block.source is not None:
            return f"space {quote_name(block.name)} from {quote_name(block.source)};"
        lines = [f"space {quote_name(block.name)} {{", f"  point {_names(block.points)};"]
        lines.extend(f"  open {_names(o)};".replace("open ;", "open;") for o in block.opens)
        return "\n".join(lines + ["}"])
    raise TypeError(f"cannot format {type(block).__name__}")


def format_document(doc: DslDocument) -> str:
    return "\n\n".join(format_block(b) for b in doc.blocks) + "\n"


def format_dposet(name: str, d: DPoset, subsets: Optional[Mapping[str, SubsetStmt]] = None) -> str:
    """把一个具体的 d-poset 写成 DSL：元素、覆盖关系、声明、命名子集"""
    body: List[Located] = [ElemStmt(0, 0, d.elements)] if len(d) else []
    body.extend(LeStmt(0, 0, (d.elements[i], d.elements[j])) for i, j in d.base.covers)
    body.extend(ChainStmt(0, 0, decl.chain, decl.limit, decl.chain_id) for decl in d.decls)
    body.extend((subsets or {}).values())
    return format_block(PosetBlock(0, 0, name, tuple(body))) + "\n"


def subset_stmt(name: str, members: Sequence[str], inside: Sequence[str] = (), outside: Sequence[str] = ()) -> SubsetStmt:
    return SubsetStmt(0, 0, name, tuple(members), tuple(inside), tuple(outside))


__all__ = [
    "DslDocument", "PosetDecl", "parse_document", "parse_blocks", "format_document", "format_block",
    "format_dposet", "subset_stmt", "quote_name", "Expr", "Cond", "Pattern",
]
