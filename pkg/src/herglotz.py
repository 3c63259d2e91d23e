"""Herglotz function h, mapping integral f and their boundary traces on the arc I.

Every measure handled here is atomic: the fixed atoms (alpha_j, lambda_j) and
the level-n jumps (beta_k, mu_k), each mirrored onto the lower half of the
circle. For a mirrored pair of weight w at angle theta the kernel of f is

    2 / (1 - 2 t cos(theta) + t^2)

whose antiderivative from -1 is F_theta(zeta) + theta/sin(theta) with

    F_theta(zeta) = (i/sin theta) [log(1 - zeta e^{i theta}) - log(1 - zeta e^{-i theta})].

On the circle this splits into the step function u and the log-kernel sum v.
"""

import math
import warnings
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from src.config import (
    ATOM_EXCLUSION,
    QUAD_ABS_TOL,
    QUAD_LIMIT,
    QUAD_NEAR_ATOM,
    QUAD_REL_TOL,
    TIP_ARGMIN_TOL,
)
from src.errors import (
    EvaluationAtAtomError,
    MinimizationFailureError,
    OutsideArcError,
    QuadratureFailureError,
    UndefinedForQZeroError,
)
from src.schemas import AnglePreimages, HerglotzMeasure, MapScale, ProblemSpec
from src.utils import get_logger

logger = get_logger(__name__)


# ========== lambda-chain and scale ==========

def lambda_chain(angles: AnglePreimages, spec: ProblemSpec, c: float) -> np.ndarray:
    """Atom weights lambda_j = c * k_tilde_j * sin(alpha_j), j = 0..p+1."""
    return c * np.asarray(spec.k_tilde) * np.sin(np.asarray(angles.alpha))


def atom_sum(angles: AnglePreimages, spec: ProblemSpec) -> float:
    """S = sum_j k_tilde_j sin(alpha_j), so that 2*sum(lambda) = 2cS."""
    return float(np.dot(spec.k_tilde, np.sin(angles.alpha)))


def coupling_A(angles: AnglePreimages, spec: ProblemSpec) -> float:
    """A = S / (k_1 sin alpha_1).

    Raises:
        UndefinedForQZeroError: Without inner poles; carries S instead
    """
    S = atom_sum(angles, spec)
    if spec.q == 0:
        raise UndefinedForQZeroError(
            f"A needs an inner pole; equivalent scalar sum k_tilde_j sin(alpha_j) = {S}", scalar=S
        )
    return S / (spec.k[0] * math.sin(angles.alpha[1]))


def scale_interval(angles: AnglePreimages, spec: ProblemSpec) -> Tuple[float, float]:
    """Open interval of c allowed by the mass and width normalizations.

    With unit total contribution, sum(mu) = c * sum(w_k sin beta_k) lies
    strictly between c*sin(alpha_{p+1}) and c.
    """
    S = atom_sum(angles, spec)
    return 1.0 / (2.0 * (S + 1.0)), 1.0 / (2.0 * (S + math.sin(angles.alpha_inf)))


def build_map_scale(angles: AnglePreimages, spec: ProblemSpec, c: float) -> MapScale:
    """Collect C1, A and the c / lambda_1 intervals for a chain scalar c."""
    c_lo, c_hi = scale_interval(angles, spec)
    A = None
    lambda1_interval = None
    if spec.q > 0:
        A = coupling_A(angles, spec)
        factor = spec.k[0] * math.sin(angles.alpha[1])
        lambda1_interval = (c_lo * factor, c_hi * factor)
    return MapScale(
        C1=1.0 / c,
        c=c,
        A=A,
        atom_sum=atom_sum(angles, spec),
        c_interval=(c_lo, c_hi),
        lambda1_interval=lambda1_interval,
    )


def build_measure(
    angles: AnglePreimages,
    spec: ProblemSpec,
    c: float,
    beta=(),
    mu=(),
) -> HerglotzMeasure:
    """Measure with atoms from the lambda-chain and interior jumps (beta_k, mu_k)."""
    lam = lambda_chain(angles, spec, c)
    return HerglotzMeasure(
        atoms=tuple((float(a), float(w)) for a, w in zip(angles.alpha, lam)),
        interior=tuple((float(b), float(m)) for b, m in zip(beta, mu)),
    )


# ========== measure helpers ==========

def measure_arrays(measure: HerglotzMeasure) -> Tuple[np.ndarray, np.ndarray]:
    """Angles and weights of atoms and jumps together."""
    pairs = measure.atoms + measure.interior
    thetas = np.array([angle for angle, _ in pairs], dtype=float)
    weights = np.array([weight for _, weight in pairs], dtype=float)
    return thetas, weights


def trace_contributions(measure: HerglotzMeasure, scale: MapScale) -> Tuple[np.ndarray, np.ndarray]:
    """Angles with their normalized contributions C1 * weight / sin(theta)."""
    thetas, weights = measure_arrays(measure)
    return thetas, scale.C1 * weights / np.sin(thetas)


def measure_arc(measure: HerglotzMeasure) -> Tuple[float, float]:
    """Arc I: from the largest atom below pi/2 (alpha_{p+1}) up to alpha_0 = pi/2."""
    below = [angle for angle, _ in measure.atoms if angle < math.pi / 2]
    return (max(below) if below else 0.0, math.pi / 2)


def _check_arc(alpha: np.ndarray, measure: HerglotzMeasure) -> None:
    lo, hi = measure_arc(measure)
    if np.any((alpha <= lo) | (alpha >= hi)):
        raise OutsideArcError(f"boundary traces are defined on ({lo}, {hi}), got {alpha}")


def _check_not_atom(alpha: np.ndarray, thetas: np.ndarray) -> None:
    gap = np.min(np.abs(alpha[..., None] - thetas), axis=-1, initial=math.inf)
    if np.any(gap < ATOM_EXCLUSION):
        raise EvaluationAtAtomError(f"evaluation on top of an atom or jump point: {alpha}")


def _as_output(values: np.ndarray):
    return values.item() if values.ndim == 0 else values


# ========== h and f ==========

def eval_h(zeta, measure: HerglotzMeasure):
    """Herglotz function h(zeta) of the mirrored measure.

    Raises:
        EvaluationAtAtomError: If zeta coincides with e^{+-i theta} for an atom or jump
    """
    z = np.asarray(zeta, dtype=complex)
    thetas, weights = measure_arrays(measure)
    nodes = np.exp(1j * thetas)
    distance = np.minimum(np.abs(z[..., None] - nodes), np.abs(z[..., None] - np.conj(nodes)))
    if np.any(distance < ATOM_EXCLUSION):
        raise EvaluationAtAtomError(f"h evaluated at an atom: {zeta}")

    zz = z[..., None]
    pair_kernel = 2.0 * (1.0 - zz * zz) / (1.0 - 2.0 * zz * np.cos(thetas) + zz * zz)
    return _as_output((pair_kernel * weights).sum(axis=-1))


def _primitive(z: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """F_theta(z) + theta/sin(theta): integral of the pair kernel from -1 to z."""
    zz = z[..., None]
    sin_t = np.sin(thetas)
    logs = np.log(1.0 - zz * np.exp(1j * thetas)) - np.log(1.0 - zz * np.exp(-1j * thetas))
    return 1j * logs / sin_t + thetas / sin_t


def eval_f(zeta, measure: HerglotzMeasure, scale: MapScale, method: str = "closed_form"):
    """Mapping integral f(zeta) = C1 * int_{-1}^{zeta} h(t)/(1 - t^2) dt.

    Args:
        zeta: Point or array in the closed upper half-disk
        measure: Atomic measure
        scale: Map scale (C1)
        method: "closed_form" (default) or "quadrature"

    Returns:
        f(zeta), complex

    Raises:
        EvaluationAtAtomError: If zeta is an atom or jump point
        QuadratureFailureError: If the quadrature path misses its tolerance
    """
    z = np.asarray(zeta, dtype=complex)
    thetas, weights = measure_arrays(measure)
    nodes = np.exp(1j * thetas)
    distance = np.minimum(np.abs(z[..., None] - nodes), np.abs(z[..., None] - np.conj(nodes)))
    if np.any(distance < ATOM_EXCLUSION):
        raise EvaluationAtAtomError(f"f evaluated at an atom: {zeta}")

    if method == "closed_form":
        return _as_output(scale.C1 * (_primitive(z, thetas) * weights).sum(axis=-1))
    if method == "quadrature":
        values = np.array([
            _quadrature_f(point, thetas, weights, scale.C1, near)
            for point, near in zip(z.ravel(), (distance < QUAD_NEAR_ATOM).reshape(-1, len(thetas)))
        ]).reshape(z.shape)
        return _as_output(values)
    raise ValueError(f"Unknown evaluation method: {method}")


def _quadrature_f(z: complex, thetas: np.ndarray, weights: np.ndarray, C1: float, near: np.ndarray) -> complex:
    """Adaptive quadrature along -1 -> 0 -> z; atoms close to z are added in closed form."""
    far_theta, far_weight = thetas[~near], weights[~near]
    cos_far = np.cos(far_theta)

    def kernel(t):
        return np.sum(2.0 * far_weight / (1.0 - 2.0 * t * cos_far + t * t))

    def integrate(func, lo, hi):
        with warnings.catch_warnings():
            warnings.simplefilter("error", IntegrationWarning)
            try:
                value, error = quad(func, lo, hi, epsabs=QUAD_ABS_TOL, epsrel=QUAD_REL_TOL, limit=QUAD_LIMIT)
            except IntegrationWarning as e:
                raise QuadratureFailureError(f"quadrature failed on [{lo}, {hi}]: {e}") from e
        if error > 10 * QUAD_ABS_TOL:
            raise QuadratureFailureError(f"quadrature error estimate {error:.3e} above tolerance")
        return value

    total = 0j
    if far_theta.size:
        if z.imag == 0.0:
            total += integrate(lambda t: kernel(t).real, -1.0, z.real)
        else:
            total += integrate(lambda t: kernel(t).real, -1.0, 0.0)
            total += integrate(lambda s: (kernel(s * z) * z).real, 0.0, 1.0)
            total += 1j * integrate(lambda s: (kernel(s * z) * z).imag, 0.0, 1.0)
    if np.any(near):
        total += np.sum(_primitive(np.asarray(z), thetas[near]) * weights[near])
    return complex(C1 * total)


# ========== boundary traces ==========

def log_kernel(phi, theta):
    """G(phi, theta) = log(sin((phi + theta)/2) / |sin((phi - theta)/2)|), the v-trace of one pair."""
    return np.log(np.sin(0.5 * (phi + theta))) - np.log(np.abs(np.sin(0.5 * (phi - theta))))


def log_kernel_slope(phi, theta):
    """dG/dphi."""
    return 0.5 / np.tan(0.5 * (phi + theta)) - 0.5 / np.tan(0.5 * (phi - theta))


def log_kernel_curvature(phi, theta):
    """d2G/dphi2."""
    return 0.25 / np.sin(0.5 * (phi - theta)) ** 2 - 0.25 / np.sin(0.5 * (phi + theta)) ** 2


def trace_values(phi, thetas: np.ndarray, contributions: np.ndarray):
    """v(phi) = sum_j contribution_j * G(phi, theta_j)."""
    phi = np.asarray(phi, dtype=float)
    return (log_kernel(phi[..., None], thetas) * contributions).sum(axis=-1)


def trace_slopes(phi, thetas: np.ndarray, contributions: np.ndarray):
    """v'(phi)."""
    phi = np.asarray(phi, dtype=float)
    return (log_kernel_slope(phi[..., None], thetas) * contributions).sum(axis=-1)


def trace_curvatures(phi, thetas: np.ndarray, contributions: np.ndarray):
    """v''(phi), positive between singular points."""
    phi = np.asarray(phi, dtype=float)
    return (log_kernel_curvature(phi[..., None], thetas) * contributions).sum(axis=-1)


def trace_minima(lo, hi, thetas: np.ndarray, contributions: np.ndarray, tol: float = TIP_ARGMIN_TOL):
    """Minimize v over each interval (lo_i, hi_i) between singular points.

    v is strictly convex between consecutive atoms and jumps, so the minimum
    is the zero of v', found by bisection started at the interval center.

    Args:
        lo: Left ends
        hi: Right ends
        thetas: Atom and jump angles
        contributions: Normalized weights of the log kernels
        tol: Bracket width at exit

    Returns:
        (argmins, minimum values)

    Raises:
        MinimizationFailureError: If v' does not change sign inside some interval
    """
    left = np.array(lo, dtype=float, ndmin=1)
    right = np.array(hi, dtype=float, ndmin=1)
    width = right - left
    inset = 1e-10 * width
    with np.errstate(divide="ignore", invalid="ignore"):
        starts = trace_slopes(left + inset, thetas, contributions)
        ends = trace_slopes(right - inset, thetas, contributions)
    bad = ~((starts < 0) & (ends > 0))
    if np.any(bad):
        index = int(np.argmax(bad))
        raise MinimizationFailureError(
            f"no interior minimum on ({left[index]}, {right[index]}); "
            f"slopes {starts[index]:.3e}, {ends[index]:.3e}"
        )

    steps = int(math.ceil(math.log2(max(float(np.max(width)), tol) / tol))) + 1
    for _ in range(steps):
        mid = 0.5 * (left + right)
        descending = trace_slopes(mid, thetas, contributions) < 0
        left = np.where(descending, mid, left)
        right = np.where(descending, right, mid)

    argmins = 0.5 * (left + right)
    return argmins, trace_values(argmins, thetas, contributions)


def boundary_u(alpha, measure: HerglotzMeasure, scale: MapScale):
    """u(alpha) = Re f(e^{i alpha}) = pi * C1 * sum over theta > alpha of weight/sin(theta).

    Raises:
        OutsideArcError: If alpha is not in I
        EvaluationAtAtomError: If alpha is a jump point
    """
    alpha = np.asarray(alpha, dtype=float)
    _check_arc(alpha, measure)
    thetas, contributions = trace_contributions(measure, scale)
    _check_not_atom(alpha, thetas)
    above = thetas > alpha[..., None]
    return _as_output(math.pi * (contributions * above).sum(axis=-1))


def boundary_v(alpha, measure: HerglotzMeasure, scale: MapScale):
    """v(alpha) = Im f(e^{i alpha}) = sum_j C1 * weight_j / sin(theta_j) * G(alpha, theta_j).

    Raises:
        OutsideArcError: If alpha is not in I
        EvaluationAtAtomError: If alpha is an atom or jump point
    """
    alpha = np.asarray(alpha, dtype=float)
    _check_arc(alpha, measure)
    thetas, contributions = trace_contributions(measure, scale)
    _check_not_atom(alpha, thetas)
    return _as_output(trace_values(alpha, thetas, contributions))


def density_from_h(phi, measure: HerglotzMeasure, scale: Optional[MapScale] = None, radius: float = 1.0):
    """Density Re h(r e^{i phi}) / (2 pi) of the measure.

    On the circle (radius 1) an atomic measure has zero density away from its
    atoms; a radius slightly below one gives the Poisson-smoothed density
    that a level-n step measure approximates. h depends on the measure alone,
    so C1 does not enter; a scale is only checked against the atom mass
    2*sum(lambda) = 2cS. Negative values are returned as computed and logged.

    Raises:
        EvaluationAtAtomError: If phi is an atom or jump point and radius is 1
        ValueError: If scale does not belong to the measure
    """
    if scale is not None:
        atom_mass = sum(weight for _, weight in measure.atoms)
        if abs(atom_mass - scale.c * scale.atom_sum) > 1e-10 * max(atom_mass, 1.0):
            raise ValueError(f"scale c={scale.c} does not match atom mass {atom_mass}")
    phi = np.asarray(phi, dtype=float)
    values = np.asarray(np.real(eval_h(radius * np.exp(1j * phi), measure)) / (2.0 * math.pi))
    if np.any(values < 0.0):
        logger.warning(f"Negative density {float(np.min(values)):.3e} at radius {radius}")
    return _as_output(values)
