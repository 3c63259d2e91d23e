"""Tests for report blocks, the report logic engine and the output templates."""

import math

import pytest

from src.agents.report_logic_engine import ReportLogicEngine
from src.agents.template_engine import TemplateEngine
from src.report_blocks import (
    alternation_block,
    comparison_block,
    growth_block,
    oracle_block,
    problem_block,
    solve_block,
)
from src.schemas import AlternationReport, ComparisonReport, GrowthRate, ProblemSpec, RemezSolution
from src.solver import solve


@pytest.fixture
def sample_problem():
    """Inner-pole problem for testing."""
    return ProblemSpec(a=0.6, inner_poles=(0.3,), k=(1,))


@pytest.fixture
def sample_solution():
    """Golden-case oracle solution for testing."""
    return RemezSolution(
        coefficients=(2 / 9, 8 / 9),
        E=1 / 9,
        reference=(0.25, 0.5, 1.0),
        signed_errors=(-1 / 9, 1 / 9, -1 / 9),
        iterations=3,
        max_error=1 / 9,
    )


@pytest.fixture
def sample_comparison():
    return ComparisonReport(
        L=0.1111, E=1 / 9, relative_difference=1e-4, threshold=1e-3, solve_converged=True, passed=True
    )


@pytest.fixture(scope="module")
def quick_result():
    return solve(ProblemSpec(a=0.25), schedule=(4, 8), tol_B0=1.0, strict=False)


def test_problem_block(sample_problem):
    """Test problem block generation."""
    block = problem_block(sample_problem)

    assert block.block_type == "problem"
    assert block.content["inner_poles"] == [0.3]
    assert block.content["basis_size"] == 3
    assert block.content["alternation_count"] == 4


def test_solve_block(quick_result):
    """Test solve block generation."""
    block = solve_block(quick_result)

    assert block.block_type == "solve"
    assert block.content["L"] == pytest.approx(1 / math.cosh(quick_result.B0_star))
    assert block.content["final_level"] == 8
    assert len(block.content["level_history"]) == 2
    assert block.content["B0_extrapolated"] is None


def test_alternation_block():
    """Test alternation block generation."""
    report = AlternationReport(
        points=(0.25, 0.5, 1.0), values=(10 / 9, 8 / 9, 10 / 9), count=3, expected_count=3, L_observed=1 / 9
    )
    block = alternation_block(report)

    assert block.content["count"] == 3
    assert block.content["points"] == [0.25, 0.5, 1.0]


def test_growth_block():
    """Test growth block generation."""
    rates = [GrowthRate(end="origin", slope=1.01, expected=1.0), GrowthRate(end="infinity", slope=0.98, expected=1.0)]
    block = growth_block(rates)

    assert [rate["end"] for rate in block.content["rates"]] == ["origin", "infinity"]
    assert block.content["rates"][0]["relative_error"] == pytest.approx(0.01)


def test_oracle_block(sample_solution):
    """Test oracle block generation."""
    block = oracle_block(sample_solution)

    assert block.content["E"] == pytest.approx(1 / 9)
    assert block.content["iterations"] == 3


def test_comparison_block(sample_comparison):
    """Test comparison block generation."""
    block = comparison_block(sample_comparison)

    assert block.content["verdict"] == "PASS"
    assert block.content["threshold"] == 1e-3


class TestReportLogicEngine:
    def test_lists_blocks(self):
        engine = ReportLogicEngine()
        assert set(engine.list_available_blocks()) == {
            "problem", "solve", "alternation", "rational", "deviation", "growth", "oracle", "comparison"
        }

    def test_execute_block(self, sample_problem):
        block = ReportLogicEngine().execute_block("problem", sample_problem)
        assert block.content["a"] == 0.6

    def test_unknown_block(self, sample_problem):
        with pytest.raises(ValueError):
            ReportLogicEngine().execute_block("summary", sample_problem)


class TestTemplateEngine:
    def test_lists_templates(self):
        assert TemplateEngine().list_available_templates() == ["result", "oracle", "comparison"]

    def test_unknown_template(self):
        with pytest.raises(ValueError):
            TemplateEngine().get_template("faq")

    def test_failed_result_payload(self):
        payload = {
            "report_type": "result",
            "status": "failed",
            "summary": {},
            "sections": {},
            "level_history": [],
            "solve_result": None,
            "warnings": [],
            "error": "NoConvergence: level n=8",
        }
        engine = TemplateEngine()
        assert engine.validate_data("result", payload)
        assert not engine.validate_data("result", {**payload, "error": None})
        assert not engine.validate_data("result", {**payload, "status": "unknown"})

    def test_oracle_payload_needs_full_reference(self, sample_solution):
        payload = {
            "report_type": "oracle",
            "summary": {"E": 1 / 9, "coefficients": [2 / 9, 8 / 9], "iterations": 3},
            "sections": {},
            "remez_solution": sample_solution.model_dump(mode="json"),
        }
        engine = TemplateEngine()
        assert engine.validate_data("oracle", payload)
        payload["remez_solution"]["reference"] = [0.25, 1.0]
        assert not engine.validate_data("oracle", payload)

    def test_comparison_verdict(self):
        payload = {
            "report_type": "comparison",
            "summary": {"L": 0.1, "E": 0.1, "relative_difference": 0.0, "threshold": 0.0, "verdict": "MAYBE"},
            "sections": {},
            "comparison": {},
        }
        assert not TemplateEngine().validate_data("comparison", payload)

    def test_missing_fields(self):
        engine = TemplateEngine()
        payload = {"report_type": "comparison", "summary": {"L": 0.1}, "sections": {}}
        missing = engine.missing_fields("comparison", payload)
        assert "comparison" in missing
        assert "summary.E" in missing
        assert "summary.L" not in missing

    def test_check_raises_with_missing_fields(self):
        with pytest.raises(ValueError, match="missing comparison"):
            TemplateEngine().check("comparison", {"report_type": "comparison", "summary": {}, "sections": {}})
