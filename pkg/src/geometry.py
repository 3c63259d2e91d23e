"""Problem validation, the preliminary map z(zeta) and the comb-domain geometry.

The preliminary map sends the upper half-disk onto the first quadrant with
z(-1) = a, z(1) = 1 and z(i) = 0. It is the composition

    w1 = -(zeta + 1/zeta)/2,  T = tau*w1/(w1 - sigma),  z = sqrt(T)

with tau = 2a^2/(1+a^2) and sigma = -(1-a^2)/(1+a^2), which has a closed-form
inverse on every boundary piece.
"""

import math
from typing import Tuple

import numpy as np

from src.errors import (
    EmptyMultiplicityError,
    IntervalError,
    OutsideCurveSupportError,
    PoleOrderingError,
    PoleOutsideRangeError,
)
from src.schemas import AnglePreimages, CombDomain, ProblemSpec
from src.utils import get_logger

logger = get_logger(__name__)


def validate(spec: ProblemSpec) -> None:
    """Check the standing assumptions 0 < x_1 < ... < x_q < a < 1 < x_{q+1} < ... < x_p.

    Args:
        spec: Problem to check

    Raises:
        IntervalError: If a is not in (0, 1)
        PoleOrderingError: If a pole group is not strictly increasing
        PoleOutsideRangeError: If an inner pole is outside (0, a) or an outer pole is not beyond 1
        EmptyMultiplicityError: If k0, m or some k_j is below one, or k has the wrong length
    """
    if not 0.0 < spec.a < 1.0:
        raise IntervalError(f"IntervalError: a = {spec.a} must lie in (0, 1)")

    for name, poles in (("inner_poles", spec.inner_poles), ("outer_poles", spec.outer_poles)):
        for left, right in zip(poles, poles[1:]):
            if not right > left:
                raise PoleOrderingError(
                    f"PoleOrdering: {name} must be strictly increasing, got {list(poles)}"
                )

    for x in spec.inner_poles:
        if not 0.0 < x < spec.a:
            raise PoleOutsideRangeError(f"PoleOutsideRange: inner pole {x} not in (0, a = {spec.a})")
    for x in spec.outer_poles:
        if not (x > 1.0 and math.isfinite(x)):
            raise PoleOutsideRangeError(f"PoleOutsideRange: outer pole {x} not in (1, inf)")

    if len(spec.k) != spec.p:
        raise EmptyMultiplicityError(
            f"EmptyMultiplicity: {spec.p} poles need {spec.p} multiplicities, got {len(spec.k)}"
        )
    if spec.k0 < 1 or spec.m < 1 or any(kj < 1 for kj in spec.k):
        raise EmptyMultiplicityError(
            f"EmptyMultiplicity: k0 = {spec.k0}, k = {list(spec.k)}, m = {spec.m} must all be >= 1"
        )


def map_constants(a: float) -> Tuple[float, float]:
    """Return (tau, sigma) of the Mobius factor for endpoint a."""
    a2 = a * a
    return 2.0 * a2 / (1.0 + a2), -(1.0 - a2) / (1.0 + a2)


def preliminary_map(zeta: complex, a: float) -> complex:
    """Evaluate z(zeta) on the closed upper half-disk.

    The result is folded into the closed first quadrant so that boundary
    points do not pick up a sign from rounding. The preimage of infinity,
    e^{i alpha_{p+1}}, returns complex infinity.

    Args:
        zeta: Point with |zeta| <= 1 and Im zeta >= 0
        a: Interval endpoint

    Returns:
        z(zeta)
    """
    tau, sigma = map_constants(a)
    zeta = complex(zeta)
    numerator = 1.0 + zeta * zeta
    denominator = numerator + 2.0 * sigma * zeta
    if denominator == 0:
        return complex(math.inf, math.inf)
    z = np.sqrt(tau * numerator / denominator)
    return complex(abs(z.real), abs(z.imag))


def diameter_preimage(x: float, a: float) -> float:
    """Inverse of z on the diameter: the real zeta in [-1, 1] with z(zeta) = x in [a, 1]."""
    tau, sigma = map_constants(a)
    s = x * x
    r = (s - tau) / (sigma * s)
    root = math.sqrt(max(0.0, 1.0 - r * r))
    return -r / (1.0 + root)


def circle_angle(x: float, a: float) -> float:
    """Inverse of z on the unit circle: alpha with z(e^{i alpha}) = x for x in (0, a) or (1, inf)."""
    tau, sigma = map_constants(a)
    s = x * x
    w = sigma * s / (s - tau)
    return math.acos(min(1.0, max(-1.0, -w)))


def imaginary_axis_angle(y: float, a: float) -> float:
    """Angle alpha in (alpha_{p+1}, pi/2) with z(e^{i alpha}) = iy."""
    tau, sigma = map_constants(a)
    y2 = y * y
    w = sigma * y2 / (y2 + tau)
    return math.acos(-w)


def imaginary_axis_height(alpha: float, a: float) -> float:
    """Inverse of imaginary_axis_angle: y with z(e^{i alpha}) = iy."""
    tau, sigma = map_constants(a)
    cos_alpha = math.cos(alpha)
    return math.sqrt(tau * cos_alpha / (-cos_alpha - sigma))


def preimage(x: complex, a: float) -> complex:
    """Boundary preimage of a point of the closed first quadrant's boundary.

    Points of [a, 1] go to the diameter, points of (0, a), (1, inf) and the
    positive imaginary axis go to the unit circle.
    """
    x = complex(x)
    if x.real == 0.0 and x.imag > 0.0:
        return complex(np.exp(1j * imaginary_axis_angle(x.imag, a)))
    if x.imag != 0.0 or x.real <= 0.0:
        raise ValueError(f"{x} is not on the boundary of the first quadrant")
    if a <= x.real <= 1.0:
        return complex(diameter_preimage(x.real, a))
    return complex(np.exp(1j * circle_angle(x.real, a)))


def infinity_angle(a: float) -> float:
    """alpha_{p+1} = arccos((1 - a^2)/(1 + a^2))."""
    _, sigma = map_constants(a)
    return math.acos(-sigma)


def compute_angles(spec: ProblemSpec) -> AnglePreimages:
    """Compute alpha_0 = pi/2, alpha_1..alpha_p and alpha_{p+1} for a valid spec.

    Args:
        spec: Validated problem

    Returns:
        AnglePreimages ordered alpha_0, alpha_1..alpha_p, alpha_{p+1}
    """
    alpha = [math.pi / 2]
    alpha.extend(circle_angle(x, spec.a) for x in spec.poles)
    alpha.append(infinity_angle(spec.a))
    angles = AnglePreimages(alpha=tuple(alpha), q=spec.q)
    check_angle_ordering(angles)
    return angles


def check_angle_ordering(angles: AnglePreimages) -> None:
    """Assert 0 < alpha_{q+1} < ... < alpha_{p+1} < alpha_0 < alpha_1 < ... < alpha_q < pi."""
    q = angles.q
    inner = angles.alpha[1:q + 1]
    outer_and_inf = angles.alpha[q + 1:]
    ordered = (0.0, *outer_and_inf, angles.alpha[0], *inner, math.pi)
    if any(b <= a for a, b in zip(ordered, ordered[1:])):
        raise ValueError(f"angle preimages out of order: {angles.alpha}")


def center_abscissa(spec: ProblemSpec) -> float:
    """u_c = pi * (k_0 + ... + k_q)."""
    return math.pi * spec.center_order


def ray_abscissas(spec: ProblemSpec) -> Tuple[float, ...]:
    """Abscissas of the rays l_1..l_p.

    Inner rays sit at pi*(k_j + ... + k_q); outer rays at
    pi*(k_0 + ... + k_q + m + k_{j+1} + ... + k_p).
    """
    q, k = spec.q, spec.k
    inner = [math.pi * sum(k[j:q]) for j in range(q)]
    outer = [
        math.pi * (spec.center_order + spec.m + sum(k[j + 1:]))
        for j in range(q, spec.p)
    ]
    return tuple(inner + outer)


def build_comb_domain(spec: ProblemSpec, heights: Tuple[float, ...]) -> CombDomain:
    """Assemble the comb domain for given base heights B_0..B_p."""
    return CombDomain(
        width=math.pi * spec.basis_size,
        center=center_abscissa(spec),
        ray_abscissas=ray_abscissas(spec),
        B=tuple(heights),
    )


def curve_height(u, B0: float, u_c: float):
    """Height of the curve E above abscissa u: arccosh(cosh B0 / cos(u - u_c)).

    Accepts a scalar or an array of abscissas.

    Raises:
        OutsideCurveSupportError: If some |u - u_c| >= pi/2
    """
    delta = np.asarray(u, dtype=float) - u_c
    if np.any(np.abs(delta) >= math.pi / 2):
        raise OutsideCurveSupportError(
            f"curve E is only defined for |u - u_c| < pi/2, got offset {np.max(np.abs(delta))}"
        )
    height = np.arccosh(math.cosh(B0) / np.cos(delta))
    return float(height) if height.ndim == 0 else height
