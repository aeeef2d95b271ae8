import json

import pytest

from utils.config.settings import WorkbenchSettings


@pytest.fixture
def settings() -> WorkbenchSettings:
    return WorkbenchSettings(log={"file": None, "console": False})


@pytest.fixture
def small_settings() -> WorkbenchSettings:
    """常量族（有限偏序）用的低层级配置：内层载体在第 3 层即非空"""
    return WorkbenchSettings(levels=[3, 4, 5], escalation_cap=5, log={"file": None, "console": False})


@pytest.fixture
def cli_config(tmp_path) -> str:
    path = tmp_path / "workbench_config.json"
    path.write_text(json.dumps({
        "levels": [3, 5, 7],
        "guard": 1,
        "log": {"level": "WARNING", "file": str(tmp_path / "workbench.log"), "console": False},
    }))
    return str(path)
