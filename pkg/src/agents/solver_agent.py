"""Solver Agent - Runs the conformal map continuation for a run config."""

from pathlib import Path
from typing import Union

from pydantic import ValidationError

from src.errors import ConfigParseError
from src.schemas import RunConfig, SolveResult
from src.solver import solve
from src.utils import load_json, setup_logging

logger = setup_logging(__name__)


class SolverAgent:
    """Agent responsible for the accessory-parameter solve.

    Input: RunConfig, or a stored result file
    Output: SolveResult (converged or not)
    Responsibility: Drive the level continuation and reload earlier solves
    """

    def __init__(self):
        """Initialize the Solver Agent."""
        logger.info("SolverAgent initialized")

    def solve(self, config: RunConfig) -> SolveResult:
        """Run the continuation over the configured schedule.

        An unconverged schedule is returned with converged=False so that its
        history can still be written.

        Args:
            config: Validated run configuration

        Returns:
            SolveResult at the last solved level

        Raises:
            NoConvergenceError: If some level fails, with the history so far
            DegenerateConfigurationError: If B0 drifts to 0 or infinity
        """
        result = solve(
            config.problem,
            schedule=config.schedule,
            tol_B0=config.tol_B0,
            extrapolate=config.extrapolate,
            strict=False,
        )
        logger.info(f"Solve finished: B0*={result.B0_star:.12f}, converged={result.converged}")
        return result

    def load(self, result_path: Union[str, Path]) -> SolveResult:
        """Reload a SolveResult from a results.json written by a previous solve.

        Raises:
            ConfigParseError: If the file holds no usable solve result
        """
        path = Path(result_path)
        logger.info(f"Loading stored solve result: {path}")
        try:
            payload = load_json(path)
        except (OSError, ValueError) as e:
            raise ConfigParseError(f"cannot read result file {path}: {e}") from e

        stored = payload.get("solve_result")
        if stored is None:
            raise ConfigParseError(f"{path} holds no solve result (status {payload.get('status')})")
        try:
            return SolveResult.model_validate(stored)
        except ValidationError as e:
            raise ConfigParseError(f"{path}: invalid solve result - {e}") from e
