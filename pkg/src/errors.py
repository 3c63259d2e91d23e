"""Exception hierarchy for the comb-map approximation pipeline."""

from typing import Any, List, Optional


class CombMapError(Exception):
    """Base class for all domain errors raised by this package."""


# ========== Problem description ==========

class ProblemSpecError(CombMapError, ValueError):
    """A ProblemSpec violates one of its standing assumptions."""


class PoleOrderingError(ProblemSpecError):
    """Poles are not strictly increasing."""


class PoleOutsideRangeError(ProblemSpecError):
    """An inner pole is not in (0, a) or an outer pole is not in (1, inf)."""


class EmptyMultiplicityError(ProblemSpecError):
    """A multiplicity or the degree parameter is missing or below one."""


class IntervalError(ProblemSpecError):
    """The interval endpoint a is not in (0, 1)."""


class ConfigParseError(CombMapError, ValueError):
    """A run configuration file could not be parsed."""


# ========== Geometry and boundary evaluation ==========

class OutsideCurveSupportError(CombMapError):
    """The curve height was requested at |u - u_c| >= pi/2."""


class EvaluationAtAtomError(CombMapError):
    """A Herglotz quantity was evaluated on top of an atom or jump point."""


class OutsideArcError(CombMapError):
    """A boundary trace was requested outside the arc I."""


class QuadratureFailureError(CombMapError):
    """Adaptive quadrature did not reach the requested tolerance."""


class UndefinedForQZeroError(CombMapError):
    """The coupling constant A needs at least one inner pole."""

    def __init__(self, message: str, scalar: float):
        super().__init__(message)
        self.scalar = scalar


# ========== Solver ==========

class SolverError(CombMapError):
    """Base class for failures of the accessory-parameter solver."""


class MinimizationFailureError(SolverError):
    """The trace minimum over a cell could not be bracketed."""


class TipOutsideCurveSupportError(SolverError):
    """A slit tip left the strip |u - u_c| < pi/2."""


class AdmissibilityError(SolverError):
    """A level configuration violates the admissibility condition."""


class NoConvergenceError(SolverError):
    """The solver hit its iteration cap or stalled."""

    def __init__(self, message: str, history: Optional[List[Any]] = None):
        super().__init__(message)
        self.history = list(history or [])


class DegenerateConfigurationError(SolverError):
    """The curve parameter B0 drifted to zero or to infinity."""


# ========== Extremal function ==========

class NotConvergedError(CombMapError):
    """An operation needs a converged SolveResult."""


class OutsideSupportedRegionError(CombMapError):
    """phi is only evaluated on [a, 1] and on the positive imaginary axis."""


class AlternationCountMismatchError(CombMapError):
    """The extremal function does not alternate the expected number of times."""

    def __init__(self, message: str, expected: int, found: int):
        super().__init__(message)
        self.expected = expected
        self.found = found


class ExtractionError(CombMapError):
    """Base class for rational coefficient extraction failures."""


class IllConditionedError(ExtractionError):
    """The extraction system is too ill-conditioned to trust."""

    def __init__(self, message: str, condition: float):
        super().__init__(message)
        self.condition = condition


class ResidualTooLargeError(ExtractionError):
    """The extracted rational function does not reproduce f."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class RootNotBracketedError(CombMapError):
    """The imaginary-axis deviation point could not be bracketed."""


# ========== Oracle ==========

class OracleError(CombMapError):
    """Base class for Remez exchange failures."""


class SingularReferenceSystemError(OracleError):
    """The alternation system on the current reference is singular."""

    def __init__(self, message: str, condition: float):
        super().__init__(message)
        self.condition = condition


class MaxIterExceededError(OracleError):
    """The exchange did not settle within the iteration cap."""
