import logging
import os
import re
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, TypedDict

import orjson

logger = logging.getLogger(__name__)

# 报告名只允许这些字符
REPORT_NAME_ALLOWED_RE = re.compile(r"^[A-Za-z0-9._\-]+$")

# 比较两份报告时忽略的字段（与运行环境有关）
VOLATILE_KEYS = frozenset({"millis"})

# 存入 ReportStore 的记录必须带的字段
REQUIRED_KEYS = frozenset({"entry", "property", "outcome"})


class ReportDiff(TypedDict):
    # compare 的返回结构
    same: bool
    only_left: List[str]
    only_right: List[str]
    changed: List[Dict[str, Any]]


def dump_record(record: Dict[str, Any]) -> bytes:
    """单条记录：键排序的 JSON，保证相同输入逐字节一致"""
    return orjson.dumps(record, option=orjson.OPT_SORT_KEYS)


def _record_key(record: Dict[str, Any]) -> str:
    return f"{record.get('entry', '')}/{record.get('property', '')}"


def _stable(record: Dict[str, Any]) -> Dict[str, Any]:
    return {k: v for k, v in record.items() if k not in VOLATILE_KEYS}


class ReportStore:
    """JSON Lines 报告的本地存储，一份报告一个 .jsonl 文件"""

    def __init__(self, root: Optional[str] = None):
        self.root = Path(root or os.getenv("WORKBENCH_REPORT_DIR", "reports"))

    def _path(self, name: str) -> Path:
        if not REPORT_NAME_ALLOWED_RE.match(name):
            raise ValueError(f"invalid report name '{name}'")
        return self.root / f"{name}.jsonl"

    def save(self, name: str, records: Iterable[Dict[str, Any]]) -> Path:
        records = list(records)
        for record in records:
            missing = REQUIRED_KEYS - record.keys()
            if missing:
                raise ValueError(f"report record without {sorted(missing)}: {record}")
        path = write_records(self._path(name), records)
        logger.info(f"report {name}: {len(records)} records written to {path}")
        return path

    def load(self, name: str) -> List[Dict[str, Any]]:
        return load_records(self._path(name))

    def list_reports(self) -> List[str]:
        if not self.root.exists():
            return []
        return sorted(p.stem for p in self.root.glob("*.jsonl"))


def write_records(path: os.PathLike, records: Iterable[Dict[str, Any]]) -> Path:
    """把记录写到任意路径（--report FILE）"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        for record in records:
            f.write(dump_record(record) + b"\n")
    return path


def load_records(path: os.PathLike) -> List[Dict[str, Any]]:
    with open(path, "rb") as f:
        return [orjson.loads(line) for line in f if line.strip()]


def compare_reports(left: Iterable[Dict[str, Any]], right: Iterable[Dict[str, Any]]) -> ReportDiff:
    """按 (entry, property) 对齐两份报告，忽略 millis"""
    a = {_record_key(r): _stable(r) for r in left}
    b = {_record_key(r): _stable(r) for r in right}
    changed = [
        {"key": key, "left": a[key], "right": b[key]}
        for key in sorted(a.keys() & b.keys())
        if a[key] != b[key]
    ]
    only_left = sorted(a.keys() - b.keys())
    only_right = sorted(b.keys() - a.keys())
    return ReportDiff(
        same=not changed and not only_left and not only_right,
        only_left=only_left,
        only_right=only_right,
        changed=changed,
    )


__all__ = ["ReportStore", "ReportDiff", "dump_record", "write_records", "load_records", "compare_reports", "VOLATILE_KEYS"]
