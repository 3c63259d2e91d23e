"""Oracle Agent - Computes the Remez ground truth and compares against it."""

from typing import Optional

from src.oracle import compare, remez_solve
from src.schemas import ComparisonReport, ProblemSpec, RationalForm, RemezSolution, SolveResult
from src.utils import setup_logging

logger = setup_logging(__name__)


class OracleAgent:
    """Agent responsible for the independent Remez oracle.

    Input: ProblemSpec, SolveResult, optional RationalForm
    Output: RemezSolution, ComparisonReport
    Responsibility: Ground truth for E and the L-versus-E verdict
    """

    def __init__(self):
        """Initialize the Oracle Agent."""
        logger.info("OracleAgent initialized")

    def solve(self, problem: ProblemSpec, grid_size: int) -> RemezSolution:
        """Run the exchange on a working grid of grid_size points.

        Raises:
            SingularReferenceSystemError: If a reference system is singular
            MaxIterExceededError: If the exchange does not settle
        """
        solution = remez_solve(problem, grid_size=grid_size)
        logger.info(f"Oracle E={solution.E:.15f} after {solution.iterations} iterations")
        return solution

    def compare(
        self,
        result: SolveResult,
        solution: RemezSolution,
        rational: Optional[RationalForm],
        threshold: float,
    ) -> ComparisonReport:
        """Compare the conformal L with the oracle E against a threshold."""
        report = compare(result, solution, rational=rational, threshold=threshold)
        if not report.solve_converged:
            logger.warning("Comparing an unconverged solve; verdict is FAIL regardless of the difference")
        return report
