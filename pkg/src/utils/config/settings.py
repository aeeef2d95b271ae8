import json
import logging
import os
from functools import lru_cache
from typing import List, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator

from utils.error.errors import ConfigError

logger = logging.getLogger(__name__)

# Load environment variables from .env if present
try:
    from dotenv import load_dotenv
    load_dotenv()
except Exception:
    pass

CONFIG_FILE = "config/workbench_config.json"


class LogSettings(BaseModel):
    level: str = "INFO"
    file: Optional[str] = "/tmp/scott_workbench/workbench.log"
    max_bytes: int = 10 * 1024 * 1024
    backup_count: int = 3
    json_format: bool = Field(default=True, alias="json")
    console: bool = True

    model_config = {"populate_by_name": True}


class WorkbenchSettings(BaseModel):
    """检查器与 CLI 的默认参数，可被环境变量和命令行覆盖"""

    levels: List[int] = Field(default_factory=lambda: [4, 8, 16])
    guard: int = 1
    max_f_size: int = 3
    exhaustive_cap: int = 12
    exhaustive_limit: int = 4096
    samples: int = 1000
    oracle_cap: int = 14
    escalation_cap: int = 32
    seed: int = 0
    workers: int = 1
    log: LogSettings = Field(default_factory=LogSettings)

    @field_validator("levels")
    @classmethod
    def _levels_increasing(cls, v: List[int]) -> List[int]:
        if len(v) < 3:
            raise ValueError("levels: 至少需要 3 个层级")
        if any(a >= b for a, b in zip(v, v[1:])) or v[0] < 1:
            raise ValueError("levels: 必须为严格递增的正整数")
        return v

    @field_validator("guard")
    @classmethod
    def _guard_non_negative(cls, v: int) -> int:
        if v < 0:
            raise ValueError("guard: 不能为负数")
        return v

    @field_validator("max_f_size", "exhaustive_cap", "exhaustive_limit", "samples", "oracle_cap", "escalation_cap", "workers")
    @classmethod
    def _positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("必须为正整数")
        return v


def parse_levels(text: str) -> List[int]:
    try:
        return [int(part) for part in text.replace(" ", "").split(",") if part]
    except ValueError as e:
        raise ConfigError(f"invalid level list '{text}': {e}")


def _workspace_path() -> str:
    default = os.path.dirname(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))
    return os.getenv("WORKBENCH_WORKSPACE_PATH", default)


def load_settings(config_path: Optional[str] = None) -> WorkbenchSettings:
    path = config_path or os.getenv("WORKBENCH_CONFIG") or os.path.join(_workspace_path(), CONFIG_FILE)
    raw: dict = {}
    if os.path.exists(path):
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    else:
        logger.debug(f"config file {path} not found, using defaults")

    env_levels = os.getenv("WORKBENCH_LEVELS")
    if env_levels:
        raw["levels"] = parse_levels(env_levels)
    for key in ("guard", "samples", "seed"):
        value = os.getenv(f"WORKBENCH_{key.upper()}")
        if value:
            raw[key] = value
    env_log_level = os.getenv("WORKBENCH_LOG_LEVEL")
    if env_log_level:
        raw.setdefault("log", {})["level"] = env_log_level

    try:
        return WorkbenchSettings.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"invalid workbench config {path}: {e.errors()[0]['msg']}")


@lru_cache(maxsize=1)
def get_settings() -> WorkbenchSettings:
    return load_settings()


__all__ = ["WorkbenchSettings", "LogSettings", "get_settings", "load_settings", "parse_levels"]
