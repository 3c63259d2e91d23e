"""Reusable report blocks that turn numerical results into report sections."""

import math
from typing import List

from src.schemas import (
    AlternationReport,
    ComparisonReport,
    DeviationPoint,
    GrowthRate,
    ProblemSpec,
    RationalForm,
    RemezSolution,
    ReportBlock,
    SolveResult,
)


def problem_block(problem: ProblemSpec, **kwargs) -> ReportBlock:
    """Generate the problem description block.

    Args:
        problem: Problem description
        **kwargs: Additional parameters

    Returns:
        ReportBlock with the problem data and derived sizes
    """
    return ReportBlock(
        block_type="problem",
        content={
            "title": "Problem",
            "a": problem.a,
            "inner_poles": list(problem.inner_poles),
            "outer_poles": list(problem.outer_poles),
            "k0": problem.k0,
            "k": list(problem.k),
            "m": problem.m,
            "basis_size": problem.basis_size,
            "numerator_degree": problem.degree,
            "alternation_count": problem.alternation_count,
        }
    )


def solve_block(result: SolveResult, **kwargs) -> ReportBlock:
    """Generate the conformal solve block.

    Args:
        result: Solve result
        **kwargs: Additional parameters

    Returns:
        ReportBlock with B0*, L and the continuation history
    """
    return ReportBlock(
        block_type="solve",
        content={
            "title": "Conformal Map Solve",
            "B0_star": result.B0_star,
            "B0_extrapolated": result.B0_extrapolated,
            "L": 1.0 / math.cosh(result.B0_star),
            "converged": result.converged,
            "extrapolated": result.extrapolated,
            "final_level": result.discretization.n,
            "max_residual": max((abs(r) for r in result.residuals), default=0.0),
            "level_history": [record.model_dump() for record in result.level_history],
            "estimates": list(result.estimates),
            "increments": list(result.increments),
            "monotone_increments": result.monotone_increments,
            "ray_heights": list(result.ray_heights),
        }
    )


def alternation_block(report: AlternationReport, **kwargs) -> ReportBlock:
    """Generate the alternation block."""
    return ReportBlock(
        block_type="alternation",
        content={
            "title": "Alternation",
            "count": report.count,
            "expected_count": report.expected_count,
            "points": list(report.points),
            "values": list(report.values),
            "L_observed": report.L_observed,
        }
    )


def rational_block(form: RationalForm, **kwargs) -> ReportBlock:
    """Generate the rational form block."""
    return ReportBlock(
        block_type="rational",
        content={
            "title": "Rational Form",
            "even_coeffs": list(form.even_coeffs),
            "residual": form.residual,
            "condition": form.condition,
        }
    )


def deviation_block(point: DeviationPoint, **kwargs) -> ReportBlock:
    """Generate the imaginary-axis deviation point block."""
    return ReportBlock(
        block_type="deviation",
        content={
            "title": "Deviation Point",
            "y": point.y,
            "alpha": point.alpha,
            "tip_y": point.tip_y,
            "phi": list(point.phi),
            "extremal_residual": point.extremal_residual,
            "real_residual": point.real_residual,
            "rational_residual": point.rational_residual,
            "rational_zero": point.rational_zero,
        }
    )


def growth_block(rates: List[GrowthRate], **kwargs) -> ReportBlock:
    """Generate the growth-rate block, one entry per end of the imaginary axis."""
    return ReportBlock(
        block_type="growth",
        content={
            "title": "Pole-Order Growth",
            "rates": [
                {
                    "end": rate.end,
                    "slope": rate.slope,
                    "expected": rate.expected,
                    "relative_error": rate.relative_error,
                }
                for rate in rates
            ],
        }
    )


def oracle_block(solution: RemezSolution, **kwargs) -> ReportBlock:
    """Generate the Remez oracle block."""
    return ReportBlock(
        block_type="oracle",
        content={
            "title": "Remez Oracle",
            "E": solution.E,
            "coefficients": list(solution.coefficients),
            "reference": list(solution.reference),
            "signed_errors": list(solution.signed_errors),
            "iterations": solution.iterations,
        }
    )


def comparison_block(report: ComparisonReport, **kwargs) -> ReportBlock:
    """Generate the comparison block."""
    return ReportBlock(
        block_type="comparison",
        content={
            "title": "Conformal vs Oracle",
            "L": report.L,
            "E": report.E,
            "relative_difference": report.relative_difference,
            "coefficient_deviation": report.coefficient_deviation,
            "threshold": report.threshold,
            "solve_converged": report.solve_converged,
            "verdict": "PASS" if report.passed else "FAIL",
        }
    )


REPORT_BLOCK_REGISTRY = {
    "problem": problem_block,
    "solve": solve_block,
    "alternation": alternation_block,
    "rational": rational_block,
    "deviation": deviation_block,
    "growth": growth_block,
    "oracle": oracle_block,
    "comparison": comparison_block,
}
