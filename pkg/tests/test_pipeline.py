"""Integration tests for the complete pipeline and the command line."""

import json
import math
from pathlib import Path

import pytest

from main import EXIT_FAIL, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, main, parse_levels
from src.agents.config_parser_agent import ConfigParserAgent
from src.agents.langgraph_orchestrator import LangGraphOrchestrator
from src.oracle import relative_difference, remez_solve
from src.solver import solve

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
QUICK = ["--levels", "16,32,64", "--tol-b0", "0.05", "--grid", "2000"]


@pytest.fixture(scope="module")
def solved_dir(tmp_path_factory):
    """Output directory of one quick golden solve."""
    out = tmp_path_factory.mktemp("solve")
    assert main(["solve", "--config", str(CONFIGS / "golden.conf"), "--out", str(out), *QUICK]) == EXIT_OK
    return out


def load(path: Path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


class TestOrchestrator:
    def test_solve_state(self, tmp_path):
        state = LangGraphOrchestrator().run_pipeline(
            "solve",
            CONFIGS / "golden.conf",
            overrides={"schedule": [16, 32, 64], "tol_b0": 0.05, "grid": 2000, "out_dir": tmp_path},
        )
        assert state["error"] is None
        assert state["alternation"].count == 3
        assert [rate.end for rate in state["growth"]] == ["origin", "infinity"]
        assert state["deviation"].y == pytest.approx(0.5, abs=0.05)
        assert state["comparison"] is None
        assert set(state["output_files"]) == {"results"}
        assert not (tmp_path / "curve.csv").exists()

    def test_invalid_pole_is_config_error(self, tmp_path):
        state = LangGraphOrchestrator().run_pipeline(
            "solve", CONFIGS / "invalid_pole.conf", overrides={"out_dir": tmp_path}
        )
        assert state["error_kind"] == "config"
        assert "PoleOutsideRange" in state["error"]
        assert state["output_files"] == {}

    def test_unknown_command(self):
        with pytest.raises(ValueError):
            LangGraphOrchestrator().run_pipeline("plot", CONFIGS / "golden.conf")

    def test_unconverged_solve_keeps_history(self, tmp_path):
        state = LangGraphOrchestrator().run_pipeline(
            "solve",
            CONFIGS / "golden.conf",
            overrides={"schedule": [4, 8], "tol_b0": 1e-300, "out_dir": tmp_path},
        )
        assert state["error_kind"] == "numerical"
        payload = load(tmp_path / "results.json")
        assert payload["status"] == "not_converged"
        assert [record["n"] for record in payload["level_history"]] == [4, 8]
        assert payload["error"].startswith("NoConvergence")


class TestCommandLine:
    def test_parse_levels(self):
        assert parse_levels("8,16") == [8, 16]
        assert parse_levels("[8, 16, 32]") == [8, 16, 32]

    def test_missing_config_flag(self):
        with pytest.raises(SystemExit) as info:
            main(["solve"])
        assert info.value.code == EXIT_USAGE

    def test_result_flag_rejected_for_solve(self, tmp_path):
        argv = ["solve", "--config", str(CONFIGS / "golden.conf"), "--result", str(tmp_path / "results.json")]
        assert main(argv) == EXIT_USAGE

    def test_invalid_config_exit(self, tmp_path):
        argv = ["solve", "--config", str(CONFIGS / "invalid_pole.conf"), "--out", str(tmp_path)]
        assert main(argv) == EXIT_USAGE

    def test_unconverged_exit(self, tmp_path):
        argv = ["solve", "--config", str(CONFIGS / "golden.conf"), "--out", str(tmp_path),
                "--levels", "4,8", "--tol-b0", "1e-300"]
        assert main(argv) == EXIT_NUMERICAL
        assert (tmp_path / "results.json").exists()

    def test_solve_writes_results(self, solved_dir, capsys):
        payload = load(solved_dir / "results.json")
        assert payload["status"] == "converged"
        assert payload["summary"]["alternation_count"] == 3
        assert payload["summary"]["L"] == pytest.approx(1 / 9, rel=0.05)
        assert payload["solve_result"]["problem"]["a"] == 0.25

    def test_solve_is_deterministic(self, solved_dir, tmp_path):
        argv = ["solve", "--config", str(CONFIGS / "golden.conf"), "--out", str(tmp_path), *QUICK]
        assert main(argv) == EXIT_OK
        first = (solved_dir / "results.json").read_bytes()
        assert (tmp_path / "results.json").read_bytes() == first

    def test_oracle(self, tmp_path, capsys):
        argv = ["oracle", "--config", str(CONFIGS / "golden.conf"), "--out", str(tmp_path), "--grid", "2000"]
        assert main(argv) == EXIT_OK
        payload = load(tmp_path / "oracle.json")
        assert payload["summary"]["E"] == pytest.approx(1 / 9, abs=1e-10)
        assert not (tmp_path / "results.json").exists()
        assert "E = 0.111111111111" in capsys.readouterr().out

    def test_compare_stored_result_zero_threshold(self, solved_dir, tmp_path, capsys):
        argv = [
            "compare", "--config", str(CONFIGS / "golden.conf"), "--out", str(tmp_path),
            "--result", str(solved_dir / "results.json"), "--threshold", "0", "--grid", "2000",
        ]
        assert main(argv) == EXIT_FAIL
        payload = load(tmp_path / "comparison.json")
        assert payload["summary"]["verdict"] == "FAIL"
        assert not (tmp_path / "results.json").exists()
        assert "FAIL" in capsys.readouterr().out

    def test_compare_loose_threshold(self, solved_dir, tmp_path):
        argv = [
            "compare", "--config", str(CONFIGS / "golden.conf"), "--out", str(tmp_path),
            "--result", str(solved_dir / "results.json"), "--threshold", "0.05", "--grid", "2000",
        ]
        assert main(argv) == EXIT_OK
        assert load(tmp_path / "comparison.json")["summary"]["verdict"] == "PASS"

    def test_compare_missing_result(self, tmp_path):
        argv = [
            "compare", "--config", str(CONFIGS / "golden.conf"), "--out", str(tmp_path),
            "--result", str(tmp_path / "absent.json"),
        ]
        assert main(argv) == EXIT_USAGE

    def test_trace(self, solved_dir, tmp_path):
        argv = [
            "trace", "--config", str(CONFIGS / "golden.conf"), "--out", str(tmp_path),
            "--result", str(solved_dir / "results.json"), "--grid", "2000",
        ]
        assert main(argv) == EXIT_OK
        for name in ("curve.csv", "tips.csv", "boundary.csv", "alternation.csv"):
            assert (tmp_path / name).stat().st_size > 0
        B0 = load(solved_dir / "results.json")["summary"]["B0_star"]
        rows = (tmp_path / "curve.csv").read_text(encoding="utf-8").splitlines()[1:]
        center = [row for row in rows if float(row.split(",")[0]) == math.pi]
        assert float(center[0].split(",")[1]) == pytest.approx(B0, abs=1e-12)


class TestAcceptance:
    def test_golden_compare(self, tmp_path):
        argv = ["compare", "--config", str(CONFIGS / "golden.conf"), "--out", str(tmp_path)]
        assert main(argv) == EXIT_OK
        comparison = load(tmp_path / "comparison.json")["comparison"]
        assert comparison["relative_difference"] < 1e-2
        assert comparison["passed"]
        assert load(tmp_path / "results.json")["summary"]["alternation_count"] == 3

    @pytest.mark.parametrize("name", ["degree_m2.conf", "origin_k2.conf", "inner_pole.conf"])
    def test_further_configs(self, name, tmp_path):
        argv = ["compare", "--config", str(CONFIGS / name), "--out", str(tmp_path)]
        assert main(argv) == EXIT_OK
        comparison = load(tmp_path / "comparison.json")["comparison"]
        assert comparison["relative_difference"] < 2.5e-2
        results = load(tmp_path / "results.json")
        assert results["summary"]["alternation_count"] == results["sections"]["alternation"]["expected_count"]

    @pytest.mark.parametrize("name", ["golden.conf", "degree_m2.conf", "origin_k2.conf", "inner_pole.conf"])
    def test_finest_level_within_one_percent(self, name):
        problem = ConfigParserAgent().parse(CONFIGS / name).problem
        result = solve(problem, schedule=(8, 16, 32, 64, 128), tol_B0=1e-300, strict=False)
        assert result.discretization.n == 128
        assert result.discretization.max_residual < 1e-8
        L = 1.0 / math.cosh(result.B0_star)
        assert relative_difference(L, remez_solve(problem).E) < 1e-2
