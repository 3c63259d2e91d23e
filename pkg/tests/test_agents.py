"""Tests for the pipeline agents."""

import csv
import math
from pathlib import Path

import pytest

from src.agents.analysis_agent import AnalysisAgent
from src.agents.config_parser_agent import ConfigParserAgent
from src.agents.oracle_agent import OracleAgent
from src.agents.report_assembly_agent import ReportAssemblyAgent
from src.agents.solver_agent import SolverAgent
from src.errors import ConfigParseError, PoleOrderingError, PoleOutsideRangeError
from src.schemas import ProblemSpec, RunConfig
from src.utils import save_json

GOLDEN_CONFIG = """\
# golden case
a = 0.25
inner_poles = []
outer_poles = []
k0 = 1
k = []
m = 1
"""


@pytest.fixture
def golden_config_file(tmp_path):
    path = tmp_path / "golden.conf"
    path.write_text(GOLDEN_CONFIG, encoding="utf-8")
    return path


@pytest.fixture(scope="module")
def quick_config(tmp_path_factory):
    """Golden problem with a short schedule that settles under a loose tolerance."""
    return RunConfig(
        problem=ProblemSpec(a=0.25),
        schedule=(16, 32, 64),
        tol_B0=5e-2,
        grid=2000,
        out_dir=tmp_path_factory.mktemp("out"),
    )


@pytest.fixture(scope="module")
def quick_result(quick_config):
    return SolverAgent().solve(quick_config)


class TestConfigParserAgent:
    """Tests for ConfigParserAgent."""

    def test_parse_text(self):
        values = ConfigParserAgent().parse_text(
            "a = 0.6  # endpoint\ninner_poles = [0.3]\nk = [1]\nextrapolate = false\n\nschedule = [8, 16]"
        )
        assert values == {"a": 0.6, "inner_poles": [0.3], "k": [1], "extrapolate": False, "schedule": [8, 16]}

    def test_parse_file(self, golden_config_file):
        config = ConfigParserAgent().parse(golden_config_file)
        assert config.problem == ProblemSpec(a=0.25)
        assert config.schedule == (8, 16, 32, 64, 128)

    def test_overrides(self, golden_config_file, tmp_path):
        overrides = {"schedule": [4, 8], "tol_b0": 1e-3, "grid": 500, "out_dir": tmp_path, "threshold": None}
        config = ConfigParserAgent().parse(golden_config_file, overrides)
        assert config.schedule == (4, 8)
        assert config.tol_B0 == 1e-3
        assert config.grid == 500
        assert config.out_dir == tmp_path
        assert config.threshold == 2.5e-2

    def test_missing_endpoint(self, tmp_path):
        path = tmp_path / "bad.conf"
        path.write_text("k0 = 1\n", encoding="utf-8")
        with pytest.raises(ConfigParseError, match="'a'"):
            ConfigParserAgent().parse(path)

    def test_unknown_key(self):
        with pytest.raises(ConfigParseError, match="line 2"):
            ConfigParserAgent().parse_text("a = 0.5\ncolour = red\n")

    def test_bad_number(self):
        with pytest.raises(ConfigParseError, match="line 1"):
            ConfigParserAgent().parse_text("a = half\n")

    def test_bad_list(self):
        with pytest.raises(ConfigParseError):
            ConfigParserAgent().parse_text("inner_poles = 0.3\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigParseError):
            ConfigParserAgent().parse(tmp_path / "absent.conf")

    def test_invalid_schedule(self, golden_config_file):
        with pytest.raises(ConfigParseError):
            ConfigParserAgent().parse(golden_config_file, {"schedule": [16, 8]})

    def test_pole_outside_range(self, tmp_path):
        path = tmp_path / "pole.conf"
        path.write_text("a = 0.25\ninner_poles = [0.3]\nk = [1]\n", encoding="utf-8")
        with pytest.raises(PoleOutsideRangeError, match="PoleOutsideRange"):
            ConfigParserAgent().parse(path)

    def test_pole_ordering(self, tmp_path):
        path = tmp_path / "order.conf"
        path.write_text("a = 0.5\ninner_poles = [0.3, 0.2]\nk = [1, 1]\n", encoding="utf-8")
        with pytest.raises(PoleOrderingError):
            ConfigParserAgent().parse(path)


class TestSolverAgent:
    """Tests for SolverAgent."""

    def test_solve(self, quick_result):
        assert quick_result.converged
        assert 1 / math.cosh(quick_result.B0_star) == pytest.approx(1 / 9, rel=0.05)

    def test_unconverged_is_returned(self):
        config = RunConfig(problem=ProblemSpec(a=0.25), schedule=(4, 8), tol_B0=1e-300)
        result = SolverAgent().solve(config)
        assert not result.converged
        assert len(result.level_history) == 2

    def test_load_round_trip(self, quick_config, quick_result, tmp_path):
        payload = ReportAssemblyAgent().assemble_result_payload(quick_config, quick_result)
        path = tmp_path / "results.json"
        save_json(payload, path)
        restored = SolverAgent().load(path)
        assert restored.B0_star == quick_result.B0_star
        assert 1 / math.cosh(restored.B0_star) == 1 / math.cosh(quick_result.B0_star)

    def test_load_failed_result(self, tmp_path):
        path = tmp_path / "results.json"
        save_json({"status": "failed", "solve_result": None}, path)
        with pytest.raises(ConfigParseError, match="no solve result"):
            SolverAgent().load(path)

    def test_load_garbage(self, tmp_path):
        path = tmp_path / "results.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigParseError):
            SolverAgent().load(path)


class TestOracleAgent:
    """Tests for OracleAgent."""

    def test_solve_and_compare(self, quick_result):
        agent = OracleAgent()
        solution = agent.solve(ProblemSpec(a=0.25), grid_size=2000)
        assert solution.E == pytest.approx(1 / 9, abs=1e-10)

        report = agent.compare(quick_result, solution, None, threshold=0.05)
        assert report.passed
        assert report.coefficient_deviation is None

        strict = agent.compare(quick_result, solution, None, threshold=0.0)
        assert not strict.passed


class TestAnalysisAgent:
    """Tests for AnalysisAgent."""

    def test_scan(self, quick_result):
        report = AnalysisAgent().scan(quick_result, 2000)
        assert report.count == 3

    def test_extract_and_deviation(self, quick_result):
        agent = AnalysisAgent()
        form = agent.extract(quick_result)
        point = agent.deviation(quick_result, form)
        assert len(form.even_coeffs) == 2
        assert point.y == pytest.approx(0.5, abs=0.05)
        assert point.rational_residual is not None

    def test_growth(self, quick_result):
        rates = AnalysisAgent().growth(quick_result)
        assert [rate.end for rate in rates] == ["origin", "infinity"]
        assert all(rate.relative_error < 0.05 for rate in rates)


class TestReportAssemblyAgent:
    """Tests for ReportAssemblyAgent."""

    def test_result_payload(self, quick_config, quick_result):
        alternation = AnalysisAgent().scan(quick_result, 2000)
        payload = ReportAssemblyAgent().assemble_result_payload(
            quick_config, quick_result, alternation=alternation, warnings=["b", "a"]
        )
        assert payload["status"] == "converged"
        assert payload["summary"]["alternation_count"] == 3
        assert payload["summary"]["L"] == pytest.approx(1 / math.cosh(quick_result.B0_star))
        assert payload["warnings"] == ["a", "b"]
        assert set(payload["sections"]) == {"problem", "solve", "alternation"}
        assert len(payload["level_history"]) == len(quick_result.level_history)

    def test_failed_payload(self, quick_config, quick_result):
        payload = ReportAssemblyAgent().assemble_result_payload(
            quick_config, None, history=quick_result.level_history, error="NoConvergence: level n=64"
        )
        assert payload["status"] == "failed"
        assert payload["solve_result"] is None
        assert len(payload["level_history"]) == len(quick_result.level_history)

    def test_oracle_and_comparison_payloads(self, quick_config, quick_result):
        agent = ReportAssemblyAgent()
        solution = OracleAgent().solve(quick_config.problem, 2000)
        comparison = OracleAgent().compare(quick_result, solution, None, 1e-3)

        oracle_payload = agent.assemble_oracle_payload(quick_config, solution)
        assert oracle_payload["summary"]["E"] == solution.E

        payload = agent.assemble_comparison_payload(quick_config, comparison, solution, quick_result)
        assert payload["summary"]["verdict"] in ("PASS", "FAIL")
        assert payload["comparison"]["threshold"] == 1e-3

    def test_write_traces(self, quick_result, tmp_path):
        alternation = AnalysisAgent().scan(quick_result, 2000)
        files = ReportAssemblyAgent().write_traces(quick_result, alternation, tmp_path)
        assert set(files) == {"curve", "tips", "boundary", "alternation"}

        curve = _read_csv(files["curve"])
        assert list(curve[0]) == ["u", "v"]
        center = [row for row in curve if float(row["u"]) == math.pi]
        assert len(center) == 1
        assert float(center[0]["v"]) == pytest.approx(quick_result.B0_star, abs=1e-12)

        tips = _read_csv(files["tips"])
        assert len(tips) == quick_result.discretization.n - 1
        assert all(abs(float(row["residual"])) < 1e-8 for row in tips)

        boundary = _read_csv(files["boundary"])
        assert list(boundary[0]) == ["alpha", "u", "v"]

        rows = _read_csv(files["alternation"])
        extremes = [float(row["x"]) for row in rows if row["extreme"] == "1"]
        assert extremes == pytest.approx(list(alternation.points))

    def test_write_traces_without_alternation(self, quick_result, tmp_path):
        files = ReportAssemblyAgent().write_traces(quick_result, None, tmp_path)
        rows = _read_csv(files["alternation"])
        assert all(row["extreme"] == "0" for row in rows)


def _read_csv(path: Path):
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))
