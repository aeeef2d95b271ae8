"""
命令分发：每个命令返回 CommandResult（退出码 + 机器可读记录 + 人类可读文本）。

退出码：0 = Holds / ok，1 = Fails，2 = Unstable，3 = 错误（由 main 统一处理）。
"""

import argparse
import logging
import os
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from pydantic import ValidationError
from tabulate import tabulate

from cli.dot import export_dot
from cli.dsl import DslDocument, format_document, parse_document
from corpus import all_entries, entry_by_name, export_dsl
from dposet.family import SchemaSet, TruncationFamily
from properties.checkers import CHECKERS, run_property
from properties.search import TARGETS, search_counterexample
from properties.suite import random_entries, random_suite_settings, theorem_suite
from scott.operators import one_step_set, scott_closure, weak_one_step_set
from smyth.qspace import (
    build_qspace,
    claim1_check,
    claim3_sweep,
    q_one_step,
    smyth_sweep,
    vietoris_equals_scott,
    well_filtered_check,
)
from smyth.space import FiniteSpace, alexandrov
from utils.config.settings import WorkbenchSettings, parse_levels
from utils.error.errors import ConfigError, PreconditionFailed
from utils.file.file import FileOps, PosetFile

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILS, EXIT_UNSTABLE, EXIT_ERROR = 0, 1, 2, 3

ASSETS_DIR = os.path.join("assets", "posets")
_SET_TOKEN_RE = re.compile(r"\([^)]*\)|[^,\s{}]+")


@dataclass
class CommandResult:
    exit_code: int = EXIT_OK
    records: List[Dict[str, Any]] = field(default_factory=list)
    text: str = ""
    # --json 时输出的结构；为空则输出 records
    payload: Optional[Any] = None


# ---------------------------------------------------------------- 参数


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="workbench", description="Scott topology workbench for finite d-posets")
    parser.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    parser.add_argument("--report", metavar="FILE", help="write line-delimited report records to FILE")
    parser.add_argument("--workers", type=int, help="parallel level evaluation")
    parser.add_argument("--config", metavar="FILE", help="alternative workbench_config.json")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_source(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
        p.add_argument("file", help=".poset source (looked up in assets/posets when not found)")
        p.add_argument("--poset", help="poset declared in the file (default: the first one)")
        p.add_argument("--level", type=int, help="truncation level")
        return p

    for name in ("closure", "one-step"):
        p = with_source(sub.add_parser(name, help=f"{name} of a subset"))
        p.add_argument("--set", required=True, dest="subset", help="'{a,b}', 'a,b' or a declared subset name")

    p = with_source(sub.add_parser("check", help="run a property checker"))
    p.add_argument("--property", required=True, choices=sorted(CHECKERS) + ["all"])
    p.add_argument("--levels", help="comma-separated increasing levels, e.g. 4,8,16")
    p.add_argument("--guard", type=int)
    p.add_argument("--max-f-size", type=int, dest="max_f_size")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("suite", help="theorem suite over the corpus or generated families")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--corpus", action="store_true", help="named corpus (default)")
    group.add_argument("--random", type=int, metavar="N", help="N generated families")
    p.add_argument("--first-seed", type=int, default=0)
    p.add_argument("--carrier-cap", type=int, default=12)

    p = sub.add_parser("search", help="bounded counterexample search")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--problem", choices=[k.removeprefix("problem-") for k in sorted(TARGETS)])
    group.add_argument("--target", choices=sorted(TARGETS) + sorted(t.name for t in TARGETS.values()))
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("qspace", help="Smyth powerdomain checks on a finite space")
    p.add_argument("file", nargs="?", help="file declaring a space (or a poset, read as Alexandrov space)")
    p.add_argument("--space", help="space declared in the file")
    p.add_argument("--sweep", type=int, metavar="POINTS", help="all T0 spaces up to POINTS points")

    with_source(sub.add_parser("export-dot", help="Hasse diagram in DOT"))

    p = sub.add_parser("export-corpus", help="DSL snapshot of a corpus entry at one level")
    p.add_argument("name")
    p.add_argument("--level", type=int, default=3)

    p = sub.add_parser("print", help="parse a file and print it back")
    p.add_argument("file")

    sub.add_parser("list", help="corpus entries with their golden verdicts")
    return parser


def apply_overrides(settings: WorkbenchSettings, args: argparse.Namespace) -> WorkbenchSettings:
    """命令行参数覆盖配置；覆盖后的值同样经过校验"""
    updates: Dict[str, Any] = {}
    if getattr(args, "levels", None):
        updates["levels"] = parse_levels(args.levels)
    for key in ("guard", "max_f_size", "seed", "workers"):
        value = getattr(args, key, None)
        if value is not None:
            updates[key] = value
    if not updates:
        return settings
    try:
        return WorkbenchSettings.model_validate({**settings.model_dump(), **updates})
    except ValidationError as e:
        raise ConfigError(f"invalid command-line setting: {e.errors()[0]['msg']}")


# ---------------------------------------------------------------- 输入


def resolve_path(path: str) -> str:
    if os.path.exists(path) or os.path.isabs(path):
        return path
    candidate = os.path.join(ASSETS_DIR, path)
    return candidate if os.path.exists(candidate) else path


def load_document(path: str) -> DslDocument:
    source = PosetFile(path=resolve_path(path))
    return parse_document(FileOps.read_text(source))


def _level_for(family: TruncationFamily, args: argparse.Namespace, settings: WorkbenchSettings) -> int:
    level = getattr(args, "level", None)
    return level if level is not None else max(family.min_level, settings.levels[0])


def parse_set(text: str) -> List[str]:
    """'{a,b}'、'a,b'、'{}' 或 '(1,2),(2,2)'"""
    return _SET_TOKEN_RE.findall(text.strip())


def _resolve_subset(family: TruncationFamily, d, level: int, text: str):
    try:
        schema: Optional[SchemaSet] = family.schema(text)
    except KeyError:
        schema = None
    if schema is not None:
        names = [n for n in schema.members(level) if n in d.base.index]
        return d.base.down_closure(d.mask_of(names)), schema.tail_oracle(d)
    names = parse_set(text)
    unknown = [n for n in names if n not in d.base.index]
    if unknown:
        raise PreconditionFailed(f"unknown element '{unknown[0]}' at level {level}")
    return d.mask_of(names), None


# ---------------------------------------------------------------- 命令


def cmd_closure(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    family = load_document(args.file).family(args.poset)
    level = _level_for(family, args, settings)
    d = family.instantiate(level)
    a, oracle = _resolve_subset(family, d, level, args.subset)
    trace = scott_closure(d, a, oracle=oracle)
    rendered = trace.render(d)
    record = {"command": "closure", "entry": family.name, "level": level, "set": args.subset,
              "result": d.names_of(trace.result), **rendered}
    rows = [[k, ", ".join(stage), ", ".join(trig)] for k, (stage, trig) in
            enumerate(zip(rendered["stages"], [[]] + rendered["triggers"]))]
    text = tabulate(rows, headers=["stage", "elements", "fired"]) + f"\ncl = {{{','.join(record['result'])}}}"
    return CommandResult(EXIT_OK, [record], text)


def cmd_one_step(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    family = load_document(args.file).family(args.poset)
    level = _level_for(family, args, settings)
    d = family.instantiate(level)
    a, oracle = _resolve_subset(family, d, level, args.subset)
    one = d.names_of(one_step_set(d, a, oracle=oracle))
    weak = d.names_of(weak_one_step_set(d, a, oracle=oracle))
    record = {"command": "one-step", "entry": family.name, "level": level, "set": args.subset,
              "one_step": one, "weak_one_step": weak}
    text = tabulate([["A'", ", ".join(one)], ["A''", ", ".join(weak)]], headers=["set", "elements"])
    return CommandResult(EXIT_OK, [record], text)


def _verdict_table(records: List[Dict[str, Any]]) -> str:
    rows = [
        [r["entry"], r["property"], r["outcome"], r["stable_at"] or "", r["witness"] or "", r["diagnostic"]]
        for r in records
    ]
    return tabulate(rows, headers=["entry", "property", "outcome", "stable at", "witness", "diagnostic"])


def cmd_check(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    family = load_document(args.file).family(args.poset)
    props = list(CHECKERS) if args.property == "all" else [args.property]
    reports = [run_property(p, family, settings=settings) for p in props]
    records = [r.to_record() for r in reports]
    exit_code = max(r.verdict.exit_code for r in reports)
    return CommandResult(exit_code, records, _verdict_table(records))


def cmd_suite(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    if args.random is not None:
        entries = random_entries(args.random, args.first_seed, args.carrier_cap)
        settings = random_suite_settings(settings)
    else:
        entries = all_entries()
    suite = theorem_suite(entries, settings, progress=not args.json)
    records = [r.to_record() for r in suite.reports]
    summary = {
        "entries": suite.entry_count,
        "violations": suite.violations,
        "golden_mismatches": suite.golden_mismatches,
        "excluded": suite.excluded,
        "rudin": suite.rudin,
        "notice": suite.notice,
    }
    lines = [
        f"entries: {suite.entry_count}  violations: {len(suite.violations)}  "
        f"golden mismatches: {len(suite.golden_mismatches)}  excluded (unstable): {len(suite.excluded)}",
    ]
    if suite.violations:
        lines.append(tabulate([[v["entry"], v["implication"]] for v in suite.violations], headers=["entry", "violated"]))
    if suite.golden_mismatches:
        lines.append(tabulate(
            [[m["entry"], m["property"], m["expected"], m["got"], m["witness"]] for m in suite.golden_mismatches],
            headers=["entry", "property", "expected", "got", "witness"],
        ))
    lines.append(suite.notice)
    return CommandResult(EXIT_OK if suite.ok else EXIT_FAILS, records, "\n".join(lines), summary)


def cmd_search(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    outcome = search_counterexample(args.target or args.problem, args.budget, args.seed, settings, progress=not args.json)
    record = {"command": "search", "target": outcome.target, "name": outcome.name, "status": outcome.status,
              "examined": outcome.examined, "entry": outcome.entry, "bundle": outcome.bundle}
    text = f"{outcome.target}: {outcome.status} after {outcome.examined} families"
    if outcome.found:
        text += f"\ncandidate {outcome.entry} (replayed; not a proof): {outcome.bundle['outcomes']}"
    return CommandResult(EXIT_OK, [record], text)


def _space_from(doc: DslDocument, name: Optional[str]) -> FiniteSpace:
    if name is not None or doc.spaces:
        return doc.space(name)
    d = doc.dposet()
    if d.decls:
        raise PreconditionFailed("qspace needs a finite space; the poset declares chain limits")
    return alexandrov(d.base, name=doc.family().name)


def space_row(space: FiniteSpace) -> Dict[str, Any]:
    q = build_qspace(space)
    equal, difference = vietoris_equals_scott(q)
    return {
        "space": space.name,
        "points": len(space),
        "saturated_sets": len(q.sets),
        "vietoris_equals_scott": equal,
        "difference": difference,
        "claim1": claim1_check(space, q),
        "claim3": claim3_sweep(space, q),
        "well_filtered": well_filtered_check(space, q),
        "q_one_step": q_one_step(space, q),
        "first_countable": "vacuous",
    }


_SPACE_CHECKS = ("vietoris_equals_scott", "claim1", "claim3", "well_filtered", "q_one_step")


def cmd_qspace(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    if args.sweep is not None:
        rows = smyth_sweep(args.sweep)
    elif args.file:
        rows = [space_row(_space_from(load_document(args.file), args.space))]
    else:
        raise PreconditionFailed("qspace needs FILE or --sweep POINTS")
    ok = all(row[c] for row in rows for c in _SPACE_CHECKS)
    headers = ["space", "points", "saturated_sets", *_SPACE_CHECKS]
    text = tabulate([[row[h] for h in headers] for row in rows], headers=headers)
    return CommandResult(EXIT_OK if ok else EXIT_FAILS, rows, text)


def cmd_export_dot(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    family = load_document(args.file).family(args.poset)
    # Hasse 图默认画第 3 层
    level = args.level if args.level is not None else max(3, family.min_level)
    text = export_dot(family.instantiate(level), family.name)
    return CommandResult(EXIT_OK, [], text, {"dot": text})


def cmd_export_corpus(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    entry = entry_by_name(args.name)
    text = export_dsl(entry, args.level)
    return CommandResult(EXIT_OK, [], text, {"entry": entry.name, "level": args.level, "dsl": text})


def cmd_print(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    text = format_document(load_document(args.file))
    return CommandResult(EXIT_OK, [], text, {"dsl": text})


def cmd_list(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    props = list(CHECKERS)
    records = []
    for entry in all_entries():
        goldens = {p: entry.golden[p].outcome for p in props if p in entry.golden}
        records.append({"entry": entry.name, "provenance": entry.provenance, "source": entry.source, "golden": goldens})
    rows = [[r["entry"], *[r["golden"].get(p, "") for p in props]] for r in records]
    return CommandResult(EXIT_OK, records, tabulate(rows, headers=["entry", *props]))


COMMANDS: Dict[str, Callable[[argparse.Namespace, WorkbenchSettings], CommandResult]] = {
    "closure": cmd_closure,
    "one-step": cmd_one_step,
    "check": cmd_check,
    "suite": cmd_suite,
    "search": cmd_search,
    "qspace": cmd_qspace,
    "export-dot": cmd_export_dot,
    "export-corpus": cmd_export_corpus,
    "print": cmd_print,
    "list": cmd_list,
}


def run(command: str, args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    handler = COMMANDS.get(command)
    if handler is None:
        raise ValueError(f"unknown command '{command}'")
    settings = apply_overrides(settings, args)
    logger.info(f"command {command} started")
    result = handler(args, settings)
    logger.info(f"command {command} finished with exit code {result.exit_code}")
    return result


__all__ = [
    "CommandResult", "COMMANDS", "build_parser", "run", "apply_overrides", "load_document", "parse_set",
    "space_row", "EXIT_OK", "EXIT_FAILS", "EXIT_UNSTABLE", "EXIT_ERROR",
]
