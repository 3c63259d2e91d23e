"""Remez oracle - best approximation of 1 on [a, 1] by the fixed-denominator system.

The system {x^{2i} / D(x)} is handled in the equivalent Chebyshev basis
T_i(s_hat) / D(x), where s_hat maps s = x^2 from [a^2, 1] onto [-1, 1];
coefficients are converted to monomials in x^2 only on output.
"""

import math
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial
from numpy.polynomial.chebyshev import chebvander
from scipy.linalg import lu_factor, lu_solve
from scipy.optimize import minimize_scalar

from src.config import COMPARE_THRESHOLD, DEFAULT_GRID, REMEZ_LEVEL_TOL, REMEZ_MAX_COND, REMEZ_MAX_ITER, REMEZ_TOL
from src.errors import MaxIterExceededError, SingularReferenceSystemError
from src.geometry import validate
from src.schemas import ComparisonReport, ProblemSpec, RationalForm, RemezSolution, SolveResult
from src.utils import get_logger

logger = get_logger(__name__)


class ChebyshevSystem:
    """Linear Chebyshev system of form (even numerator) / (fixed odd denominator) on [a, 1]."""

    def __init__(self, spec: ProblemSpec):
        self.spec = spec
        self.a = spec.a
        self.size = spec.basis_size
        self.s_domain = (spec.a * spec.a, 1.0)

    def denominator(self, x):
        """D(x) = x^{2k0-1} * prod (x^2 - x_j^2)^{k_j}."""
        x = np.asarray(x)
        value = x ** (2 * self.spec.k0 - 1)
        for pole, multiplicity in zip(self.spec.poles, self.spec.k):
            value = value * (x * x - pole * pole) ** multiplicity
        return value

    def design_matrix(self, x) -> np.ndarray:
        """Basis functions evaluated at x, one column per basis function."""
        x = np.atleast_1d(np.asarray(x))
        lo, hi = self.s_domain
        s_hat = (2.0 * x * x - (lo + hi)) / (hi - lo)
        return chebvander(s_hat, self.size - 1) / self.denominator(x)[:, None]

    def evaluate(self, coefficients: np.ndarray, x):
        return self.design_matrix(x) @ coefficients

    def to_monomial(self, coefficients: np.ndarray) -> Tuple[float, ...]:
        """Chebyshev coefficients to c_0, c_2, ... in powers of x^2."""
        monomial = Chebyshev(coefficients, domain=list(self.s_domain)).convert(kind=Polynomial).coef
        padded = np.zeros(self.size)
        padded[:len(monomial)] = monomial
        return tuple(float(c) for c in padded)

    def grid(self, size: int) -> np.ndarray:
        """Chebyshev extrema of [a, 1] in increasing order, endpoints included."""
        nodes = -np.cos(math.pi * np.arange(size) / (size - 1))
        points = 0.5 * (1.0 + self.a) + 0.5 * (1.0 - self.a) * nodes
        points[0], points[-1] = self.a, 1.0
        return points


def _solve_reference(system: ChebyshevSystem, reference: np.ndarray, target: Callable) -> Tuple[np.ndarray, float]:
    """Solve Psi(x_i) b + (-1)^i E = target(x_i) on the reference."""
    signs = (-1.0) ** np.arange(len(reference))
    matrix = np.hstack([system.design_matrix(reference), signs[:, None]])
    condition = float(np.linalg.cond(matrix))
    if not math.isfinite(condition) or condition > REMEZ_MAX_COND:
        raise SingularReferenceSystemError(
            f"alternation system on {reference} has condition {condition:.3e}", condition=condition
        )
    solution = lu_solve(lu_factor(matrix), target(reference))
    return solution[:-1], float(solution[-1])


def _local_extrema(error: Callable, grid: np.ndarray, values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """One refined extremum of the error curve per sign segment of the grid values."""
    signs = np.where(values >= 0.0, 1.0, -1.0)
    segments = np.split(np.arange(len(grid)), np.flatnonzero(np.diff(signs)) + 1)

    points, peaks = [], []
    for segment in segments:
        i = int(segment[np.argmax(np.abs(values[segment]))])
        best_x, best_value = grid[i], values[i]
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
        refined = minimize_scalar(
            lambda t: -signs[i] * error(t), bounds=(lo, hi), method="bounded", options={"xatol": 1e-15}
        )
        if refined.success and -refined.fun > abs(best_value):
            best_x, best_value = float(refined.x), float(error(refined.x))
        points.append(best_x)
        peaks.append(best_value)
    return np.array(points), np.array(peaks)


def _single_exchange(reference: np.ndarray, ref_errors: np.ndarray, x_new: float, e_new: float) -> np.ndarray:
    """Swap the global extremum into the reference keeping sign alternation."""
    ref = reference.copy()
    same = lambda j: np.sign(ref_errors[j]) == np.sign(e_new)
    if x_new < ref[0]:
        if same(0):
            ref[0] = x_new
        else:
            ref = np.concatenate([[x_new], ref[:-1]])
    elif x_new > ref[-1]:
        if same(len(ref) - 1):
            ref[-1] = x_new
        else:
            ref = np.concatenate([ref[1:], [x_new]])
    else:
        j = int(np.searchsorted(ref, x_new)) - 1
        ref[j if same(j) else j + 1] = x_new
    return ref


def remez_exchange(
    system: ChebyshevSystem,
    target: Callable,
    tol: float = REMEZ_TOL,
    max_iter: int = REMEZ_MAX_ITER,
    grid_size: int = DEFAULT_GRID,
) -> RemezSolution:
    """Linear Remez exchange for the best approximation of target by the system.

    Args:
        system: Chebyshev system on [a, 1]
        target: Vectorized function to approximate
        tol: Relative change of E accepted as stationary
        max_iter: Iteration cap
        grid_size: Working grid for the extremum search

    Returns:
        RemezSolution with monomial coefficients and the levelled error

    Raises:
        SingularReferenceSystemError: If a reference system is numerically singular
        MaxIterExceededError: If the error does not level within max_iter
    """
    size = system.size
    grid = system.grid(grid_size)
    reference = system.grid(size + 1)
    previous: Optional[float] = None

    for iteration in range(1, max_iter + 1):
        coefficients, E = _solve_reference(system, reference, target)

        def error(x, coefficients=coefficients):
            x_arr = np.atleast_1d(np.asarray(x, dtype=float))
            values = target(x_arr) - system.evaluate(coefficients, x_arr)
            return values if np.ndim(x) else float(values[0])

        points, peaks = _local_extrema(error, grid, error(grid))
        largest = float(np.max(np.abs(peaks)))
        spread = largest - abs(E)
        stationary = previous is None or abs(abs(E) - previous) <= tol * abs(E) + REMEZ_LEVEL_TOL
        logger.debug(f"Remez iteration {iteration}: E={E:.15e}, max error={largest:.15e}, reference={reference}")

        if spread <= REMEZ_LEVEL_TOL * (1.0 + abs(E)) and stationary:
            logger.info(f"Remez converged after {iteration} iterations: E={abs(E):.15e}")
            return RemezSolution(
                coefficients=system.to_monomial(coefficients),
                E=abs(E),
                reference=tuple(float(x) for x in reference),
                signed_errors=tuple(float(e) for e in error(reference)),
                iterations=iteration,
                max_error=largest,
            )
        previous = abs(E)

        if len(points) >= size + 1:
            while len(points) > size + 1:
                drop = 0 if abs(peaks[0]) < abs(peaks[-1]) else -1
                points, peaks = np.delete(points, drop), np.delete(peaks, drop)
            reference = points
        else:
            k = int(np.argmax(np.abs(peaks)))
            reference = _single_exchange(reference, error(reference), points[k], peaks[k])

    raise MaxIterExceededError(f"Remez exchange did not level within {max_iter} iterations")


def remez_solve(
    spec: ProblemSpec,
    tol: float = REMEZ_TOL,
    max_iter: int = REMEZ_MAX_ITER,
    grid_size: int = DEFAULT_GRID,
) -> RemezSolution:
    """Best approximation of the constant 1 on [a, 1] by {x^{2i}/D(x)}.

    Raises:
        ProblemSpecError: If spec is invalid
        SingularReferenceSystemError: See remez_exchange
        MaxIterExceededError: See remez_exchange
    """
    validate(spec)
    system = ChebyshevSystem(spec)
    logger.info(f"Remez oracle: a={spec.a}, poles={list(spec.poles)}, basis size {system.size}")
    return remez_exchange(system, np.ones_like, tol=tol, max_iter=max_iter, grid_size=grid_size)


def relative_difference(value: float, reference: float) -> float:
    """|value - reference| / reference, with 0/0 read as agreement."""
    if reference == 0.0:
        return 0.0 if value == 0.0 else math.inf
    return abs(value - reference) / abs(reference)


def compare(
    result: SolveResult,
    sol: RemezSolution,
    rational: Optional[RationalForm] = None,
    threshold: float = COMPARE_THRESHOLD,
) -> ComparisonReport:
    """Compare L = 1/cosh(B0*) with the oracle E.

    An unconverged solve is compared anyway; its flag is carried into the
    report and the comparison never passes.
    """
    L = 1.0 / math.cosh(result.B0_star)
    rel = relative_difference(L, sol.E)

    deviation = None
    if rational is not None:
        deviation = float(np.max(np.abs(np.subtract(rational.even_coeffs, sol.coefficients))))

    passed = result.converged and rel < threshold
    logger.info(f"Compare: L={L:.12f}, E={sol.E:.12f}, rel={rel:.3e}, {'PASS' if passed else 'FAIL'}")
    return ComparisonReport(
        L=L,
        E=sol.E,
        relative_difference=rel,
        coefficient_deviation=deviation,
        threshold=threshold,
        solve_converged=result.converged,
        passed=passed,
    )
