from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Sequence

from coze_coding_utils.error.classifier import ErrorClassifier


class ErrorCategory(Enum):
    INPUT = "input"
    SEMANTIC = "semantic"
    LIMIT = "limit"
    CONFIG = "config"
    INTERNAL = "internal"


class WorkbenchError(Exception):
    """工作台统一异常基类，携带稳定错误码和分类"""

    code: str = "E_WORKBENCH"
    category: ErrorCategory = ErrorCategory.INTERNAL

    def __init__(self, message: str, **detail: Any):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def __str__(self) -> str:
        return f"[{self.code}] {self.message}"


class AntisymmetryViolation(WorkbenchError):
    code = "E_ANTISYMMETRY"
    category = ErrorCategory.SEMANTIC

    def __init__(self, x: str, y: str):
        super().__init__(f"order cycle: {x} <= {y} <= {x}", cycle=(x, y))
        self.cycle = (x, y)


class IncoherentDeclaration(WorkbenchError):
    code = "E_INCOHERENT"
    category = ErrorCategory.SEMANTIC

    def __init__(self, chain_id: str, reason: str):
        super().__init__(f"declaration {chain_id}: {reason}", chain_id=chain_id, reason=reason)
        self.chain_id = chain_id
        self.reason = reason


class GuardTooLarge(WorkbenchError):
    code = "E_GUARD"
    category = ErrorCategory.LIMIT

    def __init__(self, level: int, guard: int):
        super().__init__(f"guard {guard} leaves no carrier at level {level}", level=level, guard=guard)


class CarrierTooLarge(WorkbenchError):
    code = "E_CARRIER"
    category = ErrorCategory.LIMIT

    def __init__(self, size: int, cap: int):
        super().__init__(f"carrier of {size} elements exceeds cap {cap}", size=size, cap=cap)


class NotFiltered(WorkbenchError):
    code = "E_NOT_FILTERED"
    category = ErrorCategory.SEMANTIC

    def __init__(self, first: Sequence[str], second: Sequence[str]):
        super().__init__(
            f"family not filtered: no member above {{{','.join(first)}}} and {{{','.join(second)}}}",
            pair=(list(first), list(second)),
        )
        self.pair = (list(first), list(second))


class PreconditionFailed(WorkbenchError):
    code = "E_PRECONDITION"
    category = ErrorCategory.SEMANTIC


class NotMonotone(WorkbenchError):
    code = "E_NOT_MONOTONE"
    category = ErrorCategory.SEMANTIC


class NotContinuous(WorkbenchError):
    code = "E_NOT_CONTINUOUS"
    category = ErrorCategory.SEMANTIC


class NotRetraction(WorkbenchError):
    code = "E_NOT_RETRACTION"
    category = ErrorCategory.SEMANTIC


class DslError(WorkbenchError):
    """带行列位置的 DSL 错误"""

    category = ErrorCategory.INPUT

    def __init__(self, line: int, column: int, text: str):
        super().__init__(f"error:{line}:{column}: {text}", line=line, column=column)
        self.line = line
        self.column = column
        self.text = text


class DslSyntaxError(DslError):
    code = "E_DSL_SYNTAX"


class DslSemanticError(DslError):
    code = "E_DSL_SEMANTIC"


class ConfigError(WorkbenchError):
    code = "E_CONFIG"
    category = ErrorCategory.CONFIG


class SourceNotFound(WorkbenchError):
    code = "E_FILE_NOT_FOUND"
    category = ErrorCategory.INPUT

    def __init__(self, path: str):
        super().__init__(f"file not found: {path}", path=path)


class InternalError(WorkbenchError):
    code = "E_INTERNAL"
    category = ErrorCategory.INTERNAL


error_classifier = ErrorClassifier()


@dataclass(frozen=True)
class ErrorReport:
    code: str
    category: str
    message: str
    context: Dict[str, Any]


def describe_error(exc: BaseException, context: Optional[Dict[str, Any]] = None) -> ErrorReport:
    """工作台异常直接用自带的 code；其余异常交给 coze_coding_utils 的分类器"""
    ctx = dict(context or {})
    if isinstance(exc, WorkbenchError):
        return ErrorReport(exc.code, exc.category.name, exc.message, {**ctx, **exc.detail})
    err = error_classifier.classify(exc, ctx)
    return ErrorReport(str(err.code), err.category.name, err.message, ctx)

