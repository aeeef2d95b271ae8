import json
from pathlib import Path

import pytest

from cli.commands import parse_set
import main as workbench_main
from main import main
from storage.report.report_store import compare_reports, load_records

ASSETS = Path(__file__).resolve().parents[2] / "assets" / "posets"


def asset(name: str) -> str:
    return str(ASSETS / name)


@pytest.fixture
def cli(cli_config, capsys):
    def invoke(*argv: str):
        code = main(["--config", cli_config, *argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke


class TestExitCodes:
    def test_fig2_has_no_weak_one_step_closure(self, cli):
        code, out, _ = cli("--json", "check", asset("fig2.poset"), "--property", "weak-one-step", "--levels", "4,8,16")
        assert code == 1
        record = json.loads(out.strip().splitlines()[0])
        assert record["outcome"] == "Fails"
        assert record["witness"] == {"A": "nat", "x": "(1,w)"}

    def test_fig3_has_no_one_step_closure(self, cli):
        code, out, _ = cli("check", asset("fig3.poset"), "--property", "one-step")
        assert code == 1
        assert "Fails" in out

    def test_fig3_is_exact(self, cli):
        code, _, _ = cli("check", asset("fig3.poset"), "--property", "exact")
        assert code == 0

    def test_empty_set_on_the_empty_poset(self, cli):
        code, out, _ = cli("closure", asset("empty.poset"), "--set", "{}")
        assert code == 0
        assert "cl = {}" in out

    def test_missing_file(self, cli):
        code, _, err = cli("check", "no-such-file.poset", "--property", "one-step")
        assert code == 3
        assert "E_FILE_NOT_FOUND" in err

    def test_bad_level_list(self, cli):
        code, _, err = cli("check", asset("fig3.poset"), "--property", "one-step", "--levels", "8,4,16")
        assert code == 3
        assert "E_CONFIG" in err

    def test_unknown_element_in_set(self, cli):
        code, _, err = cli("closure", asset("fig3.poset"), "--set", "{1,zz}")
        assert code == 3
        assert "unknown element 'zz'" in err

    def test_help(self, cli):
        code, out, _ = cli("--help")
        assert code == 0
        assert "export-corpus" in out

    def test_usage_error(self, cli):
        code, _, _ = cli("check")
        assert code == 3

    def test_syntax_error_reports_position(self, cli, tmp_path):
        broken = tmp_path / "broken.poset"
        broken.write_text("poset p {\n  elem a b\n}\n")
        code, _, err = cli("print", str(broken))
        assert code == 3
        assert "error:3:" in err


class TestCommands:
    def test_closure_of_a_named_subset(self, cli):
        code, out, _ = cli("--json", "closure", asset("fig3.poset"), "--set", "nat", "--level", "3")
        assert code == 0
        record = json.loads(out)
        assert record["result"] == ["1", "2", "3", "w", "a"]
        assert record["triggers"][0] == ["nat"]

    def test_one_step(self, cli):
        code, out, _ = cli("--json", "one-step", asset("fig3.poset"), "--set", "{1,2,3}", "--level", "3")
        assert code == 0
        record = json.loads(out)
        assert record["one_step"] == ["1", "2", "3", "w"]
        assert record["weak_one_step"] == ["1", "2", "3", "w", "a"]

    def test_tuple_names_in_sets(self):
        assert parse_set("{(1,1),(2,1)}") == ["(1,1)", "(2,1)"]
        assert parse_set("a, b") == ["a", "b"]
        assert parse_set("{}") == []

    def test_export_dot(self, cli):
        code, out, _ = cli("export-dot", asset("fig3.poset"))
        assert code == 0
        lines = out.splitlines()
        nodes = [l for l in lines if l.strip().endswith(";") and "->" not in l and "=" not in l]
        solid = [l for l in lines if "->" in l and "dashed" not in l]
        dashed = [l for l in lines if "dashed" in l]
        assert (len(nodes), len(solid), len(dashed)) == (5, 4, 1)
        assert '"3" -> "w" [style=dashed, label="nat"];' in out

    def test_export_corpus_then_reload(self, cli, tmp_path):
        code, out, _ = cli("export-corpus", "fig3", "--level", "4")
        assert code == 0
        snapshot = tmp_path / "fig3_4.poset"
        snapshot.write_text(out)
        code, out, _ = cli("print", str(snapshot))
        assert code == 0
        assert out.startswith("poset fig3_4 {")

    def test_print(self, cli):
        code, out, _ = cli("print", asset("fig3.poset"))
        assert code == 0
        assert out.startswith("poset fig3 {")

    def test_list(self, cli):
        code, out, _ = cli("--json", "list")
        assert code == 0
        names = [json.loads(line)["entry"] for line in out.strip().splitlines()]
        assert names[:3] == ["fig1", "fig2", "fig3"]

    def test_qspace_file(self, cli):
        code, out, _ = cli("--json", "qspace", asset("finite.space"), "--space", "sierpinski")
        assert code == 0
        row = json.loads(out)
        assert row["saturated_sets"] == 3
        assert row["claim1"] and row["q_one_step"]

    def test_qspace_from_a_poset(self, cli):
        code, _, _ = cli("qspace", asset("pentagon.poset"))
        assert code == 0

    def test_qspace_rejects_limits(self, cli):
        code, _, err = cli("qspace", asset("fig3.poset"))
        assert code == 3
        assert "E_PRECONDITION" in err

    def test_search_with_zero_budget(self, cli):
        code, out, _ = cli("--json", "search", "--problem", "5.10", "--budget", "0")
        assert code == 0
        record = json.loads(out)
        assert record["status"] == "exhausted"
        assert record["target"] == "problem-5.10"

    def test_search_by_descriptive_name(self, cli):
        code, out, _ = cli("--json", "search", "--target", "exact-not-continuous", "--budget", "0")
        assert code == 0
        assert json.loads(out)["target"] == "problem-5.13"

    def test_search_needs_a_problem(self, cli):
        code, _, _ = cli("search", "--budget", "0")
        assert code == 3

    def test_random_suite(self, cli):
        code, out, _ = cli("--json", "suite", "--random", "3", "--first-seed", "11")
        assert code == 0
        summary = json.loads(out)
        assert summary["violations"] == []
        assert "Sorgenfrey" in summary["notice"]


class TestReports:
    def test_report_is_stable_modulo_timing(self, cli, tmp_path):
        first, second = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        for path in (first, second):
            cli("--report", str(path), "check", asset("fig3.poset"), "--property", "all")
        left, right = load_records(first), load_records(second)
        assert len(left) == 8
        assert compare_reports(left, right)["same"]
        strip = [{k: v for k, v in r.items() if k != "millis"} for r in left]
        assert strip == [{k: v for k, v in r.items() if k != "millis"} for r in right]

    def test_report_difference_is_found(self, cli, tmp_path):
        path = tmp_path / "a.jsonl"
        cli("--report", str(path), "check", asset("fig3.poset"), "--property", "one-step")
        records = load_records(path)
        changed = [{**records[0], "outcome": "Holds"}]
        diff = compare_reports(records, changed)
        assert not diff["same"]
        assert diff["changed"][0]["key"] == "fig3/one-step"


def test_bare_names_resolve_to_shipped_assets(cli, monkeypatch):
    monkeypatch.chdir(ASSETS.parents[1])
    code, out, _ = cli("print", "fig3.poset")
    assert code == 0
    assert out.startswith("poset fig3 {")


class TestLogging:
    def test_logging_is_configured_once_from_settings(self, cli_config, tmp_path, monkeypatch, mocker):
        monkeypatch.setattr(workbench_main, "_logging_ready", False)
        setup = mocker.patch("main.setup_logging")
        assert main(["--config", cli_config, "list"]) == 0
        assert main(["--config", cli_config, "list"]) == 0
        setup.assert_called_once_with(
            log_file=str(tmp_path / "workbench.log"),
            max_bytes=10 * 1024 * 1024,
            backup_count=3,
            log_level="WARNING",
            use_json_format=True,
            console_output=False,
        )

    def test_failure_is_reported_with_its_code(self, cli, mocker):
        mocker.patch("main.run", side_effect=RuntimeError("boom"))
        code, _, err = cli("list")
        assert code == 3
        assert err.startswith("[")
