"""Extremal function f(x) = 1 - (-1)^{k_0+...+k_q} L cos(phi(x)) and what is read off it.

phi is the comb map composed with the preliminary map. It is evaluated on
[a, 1] (through the diameter of the disk) and on the positive imaginary
axis (through the arc I); everywhere else the extracted RationalForm is
the supported evaluator.
"""

import math
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from src.config import DEFAULT_GRID, EXTRACTION_MAX_COND, EXTRACTION_TOL, VERIFICATION_POINTS
from src.errors import (
    AlternationCountMismatchError,
    IllConditionedError,
    NotConvergedError,
    OutsideSupportedRegionError,
    ResidualTooLargeError,
    RootNotBracketedError,
)
from src.geometry import center_abscissa, diameter_preimage, imaginary_axis_angle, imaginary_axis_height
from src.herglotz import boundary_u, boundary_v, eval_f, measure_arc
from src.oracle import ChebyshevSystem
from src.schemas import AlternationReport, DeviationPoint, GrowthRate, RationalForm, SolveResult
from src.utils import get_logger

logger = get_logger(__name__)


def best_error(result: SolveResult) -> float:
    """L = 1/cosh(B0*).

    Raises:
        NotConvergedError: If the solve did not converge
    """
    if not result.converged:
        raise NotConvergedError("best_error needs a converged solve")
    return 1.0 / math.cosh(result.B0_star)


def sign_factor(result: SolveResult) -> int:
    """(-1)^{k_0 + ... + k_q}."""
    return -1 if result.problem.center_order % 2 else 1


def phi_on_interval(x, result: SolveResult) -> np.ndarray:
    """phi on [a, 1], vectorized; real valued, 0 at a and pi*N at 1."""
    a = result.problem.a
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any((x < a) | (x > 1.0)):
        raise OutsideSupportedRegionError(f"phi is evaluated on [a, 1] = [{a}, 1] only")
    zeta = np.array([diameter_preimage(float(t), a) for t in x])
    return np.real(eval_f(zeta, result.measure, result.scale))


def eval_phi(x, result: SolveResult) -> complex:
    """phi(x) for x in [a, 1] or x = iy with y > 0.

    Raises:
        OutsideSupportedRegionError: For any other x
    """
    x = complex(x)
    if x.imag == 0.0 and result.problem.a <= x.real <= 1.0:
        return complex(phi_on_interval(x.real, result)[0])
    if x.real == 0.0 and x.imag > 0.0:
        alpha = imaginary_axis_angle(x.imag, result.problem.a)
        return complex(
            boundary_u(alpha, result.measure, result.scale),
            boundary_v(alpha, result.measure, result.scale),
        )
    raise OutsideSupportedRegionError(f"phi is not evaluated at {x}; use the extracted rational form")


def eval_extremal(x, result: SolveResult):
    """f(x) on [a, 1] (real) or on the imaginary axis (complex)."""
    phi = eval_phi(x, result)
    value = 1.0 - sign_factor(result) * best_error(result) * np.cos(phi)
    return float(value.real) if complex(x).imag == 0.0 else complex(value)


def alternation_scan(result: SolveResult, grid_size: int = DEFAULT_GRID) -> AlternationReport:
    """Locate the extreme points of f on [a, 1].

    Extrema sit where phi crosses a multiple of pi. They are detected as
    sign changes of the discrete slope on a Chebyshev grid and refined by
    root finding on phi - j*pi.

    Raises:
        NotConvergedError: If the solve did not converge
        AlternationCountMismatchError: If the count differs from N + 1
    """
    L = best_error(result)
    spec = result.problem
    expected = spec.alternation_count
    if grid_size < 16 * expected:
        raise ValueError(f"grid of {grid_size} points is too coarse for {expected} extrema")

    system = ChebyshevSystem(spec)
    grid = system.grid(grid_size)
    phi = phi_on_interval(grid, result)
    values = 1.0 - sign_factor(result) * L * np.cos(phi)

    slope = np.diff(values)
    interior = np.flatnonzero(slope[:-1] * slope[1:] < 0) + 1
    points = [float(grid[0])]
    for i in interior:
        j = round(phi[i] / math.pi)
        crossing = lambda t: float(phi_on_interval(t, result)[0]) - j * math.pi
        lo, hi = grid[i - 1], grid[i + 1]
        if crossing(lo) * crossing(hi) < 0:
            points.append(float(brentq(crossing, lo, hi, xtol=1e-15)))
        else:
            points.append(float(grid[i]))
    points.append(float(grid[-1]))

    extreme_values = 1.0 - sign_factor(result) * L * np.cos(phi_on_interval(points, result))
    if len(points) != expected:
        raise AlternationCountMismatchError(
            f"f alternates {len(points)} times on [a, 1], expected {expected}",
            expected=expected,
            found=len(points),
        )
    return AlternationReport(
        points=tuple(points),
        values=tuple(float(v) for v in extreme_values),
        count=len(points),
        expected_count=expected,
        L_observed=float(np.max(np.abs(extreme_values - 1.0))),
    )


def extract_rational(result: SolveResult, sample_count: Optional[int] = None, strict: bool = True) -> RationalForm:
    """Fit the even numerator of form (1) to f on [a, 1].

    Samples are Chebyshev points of s = x^2 on [a^2, 1]; the fit is checked
    on a disjoint uniform grid.

    Args:
        result: Converged solve
        sample_count: Number of fitting samples (at least N)
        strict: Raise ResidualTooLargeError instead of logging it

    Raises:
        NotConvergedError: If the solve did not converge
        IllConditionedError: If the fitting matrix is too ill-conditioned
        ResidualTooLargeError: If strict and the verification residual exceeds tolerance
    """
    L = best_error(result)
    spec = result.problem
    system = ChebyshevSystem(spec)
    count = sample_count or 4 * system.size + 8
    if count < system.size:
        raise ValueError(f"{count} samples cannot determine {system.size} coefficients")

    lo, hi = system.s_domain
    nodes = np.cos(math.pi * (np.arange(count) + 0.5) / count)
    samples = np.sqrt(0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes)
    target = 1.0 - sign_factor(result) * L * np.cos(phi_on_interval(samples, result))

    matrix = system.design_matrix(samples)
    condition = float(np.linalg.cond(matrix))
    if condition > EXTRACTION_MAX_COND:
        raise IllConditionedError(f"extraction matrix condition {condition:.3e}", condition=condition)
    coefficients = np.linalg.lstsq(matrix, target, rcond=None)[0]

    check = np.linspace(spec.a, 1.0, VERIFICATION_POINTS + 2)[1:-1]
    reference = 1.0 - sign_factor(result) * L * np.cos(phi_on_interval(check, result))
    residual = float(np.max(np.abs(system.evaluate(coefficients, check) - reference)))
    if residual > EXTRACTION_TOL:
        if strict:
            raise ResidualTooLargeError(f"rational fit misses f by {residual:.3e}", residual=residual)
        logger.warning(f"Rational fit residual {residual:.3e} above {EXTRACTION_TOL}")

    return RationalForm(
        even_coeffs=system.to_monomial(coefficients),
        problem=spec,
        residual=residual,
        condition=condition,
    )


def evaluate_rational(form: RationalForm, x):
    """R(x) = (c_0 + c_2 x^2 + ...) / D(x), real or complex x."""
    x_arr = np.asarray(x)
    numerator = np.polynomial.polynomial.polyval(x_arr * x_arr, form.even_coeffs)
    value = numerator / ChebyshevSystem(form.problem).denominator(x_arr)
    return value.item() if np.ndim(value) == 0 else value


def rational_imaginary_zero(form: RationalForm, near: float) -> Optional[float]:
    """Zero of R on the positive imaginary axis closest to i*near.

    R(iy) vanishes where the even numerator does, at s = x^2 = -y^2.
    """
    roots = np.atleast_1d(np.polynomial.polynomial.polyroots(form.even_coeffs))
    heights = [math.sqrt(-s.real) for s in roots if abs(s.imag) <= 1e-9 * abs(s) and s.real < 0]
    if not heights:
        return None
    return float(min(heights, key=lambda y: abs(y - near)))


def imaginary_axis_zero(result: SolveResult, rational: Optional[RationalForm] = None) -> DeviationPoint:
    """Point iy* where phi = u_c + i*B0*, so that f(iy*) = 0.

    alpha* solves Re w(alpha) = u_c for the piecewise-linear interpolant
    through (argmin_k, Re w_k) of the interior tips. At a finite level Re phi
    is a step function along the axis and only the slit tips carry the curve
    condition, so phi is evaluated at the tip nearest u_c. There Re f equals
    the curve residual and |Im f| <= |tan(Re phi - u_c)|.

    Raises:
        NotConvergedError: If the solve did not converge
        RootNotBracketedError: If u_c is not between the tip abscissas
    """
    L = best_error(result)
    spec = result.problem
    u_c = center_abscissa(spec)
    abscissas = np.asarray(result.tips.real)
    argmins = np.asarray(result.tips.argmins)
    if not abscissas.min() <= u_c <= abscissas.max():
        raise RootNotBracketedError(f"u_c = {u_c} outside tip range [{abscissas.min()}, {abscissas.max()}]")

    alpha = float(np.interp(u_c, abscissas[::-1], argmins[::-1]))
    y = imaginary_axis_height(alpha, spec.a)

    nearest = int(np.argmin(np.abs(abscissas - u_c)))
    tip_y = imaginary_axis_height(float(argmins[nearest]), spec.a)
    phi = eval_phi(1j * tip_y, result)
    value = 1.0 - sign_factor(result) * L * np.cos(phi)

    rational_residual = None
    rational_zero = None
    if rational is not None:
        rational_residual = float(abs(evaluate_rational(rational, 1j * y)))
        rational_zero = rational_imaginary_zero(rational, y)
    logger.info(f"Deviation point y*={y:.10f} (alpha*={alpha:.10f}), |f| at nearest tip {abs(value):.3e}")
    return DeviationPoint(
        y=y,
        alpha=alpha,
        tip_y=tip_y,
        phi=(phi.real, phi.imag),
        extremal_residual=float(abs(value)),
        real_residual=float(abs(value.real)),
        rational_residual=rational_residual,
        rational_zero=rational_zero,
    )


def trace_growth_rate(result: SolveResult, end: str, distances: Sequence[float] = (1e-3, 1e-4, 1e-5)) -> GrowthRate:
    """Log-slope of v(alpha(y)) as iy approaches the origin or infinity.

    Near the origin v grows like (2k_0 - 1) log(1/y); near infinity like
    (2m - 1) log y.
    """
    spec = result.problem
    lo, hi = measure_arc(result.measure)
    if end == "origin":
        alphas = [hi - d for d in distances]
        expected = 2 * spec.k0 - 1
    elif end == "infinity":
        alphas = [lo + d for d in distances]
        expected = 2 * spec.m - 1
    else:
        raise ValueError(f"Unknown end: {end}")

    heights = np.array([imaginary_axis_height(alpha, spec.a) for alpha in alphas])
    logs = np.log(1.0 / heights) if end == "origin" else np.log(heights)
    traces = np.asarray(boundary_v(np.array(alphas), result.measure, result.scale))
    slope = float(np.polyfit(logs, traces, 1)[0])
    return GrowthRate(end=end, slope=slope, expected=float(expected))
