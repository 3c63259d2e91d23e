"""Data schemas for the comb-map approximation pipeline using Pydantic."""

import math
from pathlib import Path
from typing import Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.config import COMPARE_THRESHOLD, DEFAULT_GRID, DEFAULT_SCHEDULE, DEFAULT_TOL_B0, EXTRAPOLATE, OUTPUT_DIR

Pair = Tuple[float, float]


class ProblemSpec(BaseModel):
    """Interval endpoint, fixed poles and degrees of the sgn approximation problem.

    Domain checks (ordering, ranges, multiplicities) live in
    geometry.validate so that they raise named errors.
    """

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "a": 0.6,
                "inner_poles": [0.3],
                "outer_poles": [],
                "k0": 1,
                "k": [1],
                "m": 1
            }
        }
    )

    a: float = Field(..., description="Interval endpoint, approximation on [-1,-a] and [a,1]")
    inner_poles: Tuple[float, ...] = Field((), description="Poles x_1 < ... < x_q in (0, a)")
    outer_poles: Tuple[float, ...] = Field((), description="Poles x_{q+1} < ... < x_p in (1, inf)")
    k0: int = Field(1, description="Pole order at the origin is 2*k0 - 1")
    k: Tuple[int, ...] = Field((), description="Multiplicities k_1..k_p")
    m: int = Field(1, description="Degree parameter")

    @property
    def q(self) -> int:
        return len(self.inner_poles)

    @property
    def p(self) -> int:
        return len(self.inner_poles) + len(self.outer_poles)

    @property
    def poles(self) -> Tuple[float, ...]:
        return tuple(self.inner_poles) + tuple(self.outer_poles)

    @property
    def center_order(self) -> int:
        """Sum of k_0..k_q, so that u_c = pi * center_order."""
        return self.k0 + sum(self.k[:self.q])

    @property
    def basis_size(self) -> int:
        """N = m + k_0 + ... + k_p."""
        return self.m + self.k0 + sum(self.k)

    @property
    def degree(self) -> int:
        """Numerator degree n = 2(m - 1 + k_0 + ... + k_p)."""
        return 2 * (self.basis_size - 1)

    @property
    def alternation_count(self) -> int:
        return self.basis_size + 1

    @property
    def k_tilde(self) -> Tuple[float, ...]:
        """Reduced multiplicities (k0 - 1/2, k_1, ..., k_p, m - 1/2)."""
        return (self.k0 - 0.5, *map(float, self.k), self.m - 0.5)

    @property
    def origin_only(self) -> bool:
        return self.q == 0


class AnglePreimages(BaseModel):
    """Angles alpha_0..alpha_{p+1} of the boundary preimages of the poles."""

    model_config = ConfigDict(frozen=True)

    alpha: Tuple[float, ...] = Field(..., description="alpha_0 = pi/2, alpha_1..alpha_p, alpha_{p+1}")
    q: int = Field(0, description="Number of inner poles")

    @property
    def alpha_inf(self) -> float:
        return self.alpha[-1]

    @property
    def arc(self) -> Pair:
        """The arc I = (alpha_{p+1}, alpha_0)."""
        return (self.alpha[-1], self.alpha[0])


class CombDomain(BaseModel):
    """Half-strip with rays l_1..l_p and the curvilinear set E."""

    model_config = ConfigDict(frozen=True)

    width: float
    center: float
    ray_abscissas: Tuple[float, ...]
    B: Tuple[float, ...] = Field(..., description="B_0 (curve parameter) followed by ray base heights")


class HerglotzMeasure(BaseModel):
    """Atoms (alpha_j, lambda_j) plus the interior jumps (beta_k, mu_k) on I.

    Only the upper half is stored; the measure on -I is the mirror image.
    """

    model_config = ConfigDict(frozen=True)

    atoms: Tuple[Pair, ...]
    interior: Tuple[Pair, ...] = ()

    @field_validator("atoms", "interior")
    @classmethod
    def positive_weights(cls, pairs: Tuple[Pair, ...]) -> Tuple[Pair, ...]:
        for angle, weight in pairs:
            if not weight > 0:
                raise ValueError(f"weight at angle {angle} must be positive, got {weight}")
            if not 0 < angle < math.pi:
                raise ValueError(f"angle {angle} outside (0, pi)")
        return pairs

    @field_validator("interior")
    @classmethod
    def increasing_jumps(cls, pairs: Tuple[Pair, ...]) -> Tuple[Pair, ...]:
        angles = [angle for angle, _ in pairs]
        if any(b <= a for a, b in zip(angles, angles[1:])):
            raise ValueError("interior jump angles must be strictly increasing")
        return pairs

    @property
    def mass(self) -> float:
        return 2.0 * sum(w for _, w in self.atoms) + 2.0 * sum(w for _, w in self.interior)

    @property
    def mass_defect(self) -> float:
        """2*sum(lambda) + 2*sum(mu) - 1."""
        return self.mass - 1.0


class MapScale(BaseModel):
    """Scale C1 = 1/c with the coupling constant A and the admissible intervals."""

    model_config = ConfigDict(frozen=True)

    C1: float = Field(..., gt=0)
    c: float = Field(..., gt=0)
    A: Optional[float] = Field(None, description="Undefined without inner poles")
    atom_sum: float = Field(..., description="sum of k_tilde_j * sin(alpha_j)")
    c_interval: Pair
    lambda1_interval: Optional[Pair] = None


class Discretization(BaseModel):
    """Level-n partition of I with jump values, curve parameter and scale."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=2)
    arc: Pair
    beta: Tuple[float, ...]
    mu: Tuple[float, ...]
    B0: float = Field(..., gt=0)
    c: float = Field(..., gt=0)
    newton_steps: int = 0
    strategy: str = "initial"
    max_residual: Optional[float] = None
    stationarity: Optional[float] = Field(None, description="Largest optimality residual of the fold")

    @property
    def cells(self) -> Tuple[Pair, ...]:
        """Delta_0..Delta_n; the last cell abuts alpha_0."""
        edges = (self.arc[0], *self.beta, self.arc[1])
        return tuple(zip(edges[:-1], edges[1:]))

    @property
    def contributions(self) -> Tuple[float, ...]:
        """C1 * mu_k / sin(beta_k)."""
        return tuple(mu / (self.c * math.sin(beta)) for beta, mu in zip(self.beta, self.mu))


class TipSet(BaseModel):
    """Interior slit tips with their argmins and curve residuals.

    The slits over the two end cells stand on the lines u = u_c +- pi/2 and
    are reported separately; their tips are not matched to the curve.
    """

    model_config = ConfigDict(frozen=True)

    real: Tuple[float, ...]
    imag: Tuple[float, ...]
    argmins: Tuple[float, ...]
    curve_residuals: Tuple[float, ...]
    free_tips: Tuple[Pair, Pair] = Field(..., description="End-cell tips at u_c + pi/2 and u_c - pi/2")
    free_argmins: Pair


class LevelRecord(BaseModel):
    """One row of the continuation history."""

    model_config = ConfigDict(frozen=True)

    n: int
    B0: float
    max_residual: float
    newton_steps: int
    strategy: str


class SolveResult(BaseModel):
    """Outcome of the continuation in n."""

    model_config = ConfigDict(frozen=True)

    problem: ProblemSpec
    B0_star: float = Field(..., description="B0 of the last solved level")
    B0_extrapolated: Optional[float] = Field(None, description="Extrapolated estimate when requested")
    measure: HerglotzMeasure
    scale: MapScale
    discretization: Discretization
    tips: TipSet
    level_history: Tuple[LevelRecord, ...]
    estimates: Tuple[float, ...] = Field((), description="Sequence the Cauchy test ran on")
    increments: Tuple[float, ...] = ()
    monotone_increments: bool = False
    extrapolated: bool = False
    converged: bool
    residuals: Tuple[float, ...] = ()
    ray_heights: Tuple[float, ...] = Field((), description="B_1..B_p")
    origin_only: bool = False


class RationalForm(BaseModel):
    """Even numerator coefficients c_0, c_2, ..., c_n over the fixed odd denominator."""

    model_config = ConfigDict(frozen=True)

    even_coeffs: Tuple[float, ...]
    problem: ProblemSpec
    residual: Optional[float] = None
    condition: Optional[float] = None


class AlternationReport(BaseModel):
    """Extreme points of f on [a, 1]."""

    model_config = ConfigDict(frozen=True)

    points: Tuple[float, ...]
    values: Tuple[float, ...]
    count: int
    expected_count: int
    L_observed: float


class DeviationPoint(BaseModel):
    """Imaginary-axis point where phi = u_c + i*B0, with phi evaluated at the nearest slit tip."""

    model_config = ConfigDict(frozen=True)

    y: float
    alpha: float
    tip_y: float = Field(..., description="Image of the argmin of the tip nearest u_c")
    phi: Pair = Field(..., description="phi(i * tip_y)")
    extremal_residual: float = Field(..., description="|f(i * tip_y)|")
    real_residual: float = Field(..., description="|Re f(i * tip_y)|, zero on the curve")
    rational_residual: Optional[float] = Field(None, description="|R(iy*)| when a rational form is given")
    rational_zero: Optional[float] = Field(None, description="Zero of R on the imaginary axis nearest y*")


class GrowthRate(BaseModel):
    """Log-slope of the imaginary-axis trace near the origin or infinity."""

    model_config = ConfigDict(frozen=True)

    end: Literal["origin", "infinity"]
    slope: float
    expected: float

    @property
    def relative_error(self) -> float:
        return abs(self.slope - self.expected) / abs(self.expected)


class RemezSolution(BaseModel):
    """Best approximation of 1 on [a, 1] by the fixed-denominator system."""

    model_config = ConfigDict(frozen=True)

    coefficients: Tuple[float, ...] = Field(..., description="Monomial coefficients c_0, c_2, ... in x^2")
    E: float
    reference: Tuple[float, ...]
    signed_errors: Tuple[float, ...]
    iterations: int
    max_error: float


class ComparisonReport(BaseModel):
    """Relative difference between the conformal L and the oracle E."""

    model_config = ConfigDict(frozen=True)

    L: float
    E: float
    relative_difference: float
    coefficient_deviation: Optional[float] = None
    threshold: float
    solve_converged: bool
    passed: bool


class ReportBlock(BaseModel):
    """Reusable report section."""

    block_type: str = Field(..., description="Type of report block")
    content: dict = Field(..., description="Block content data")


class RunConfig(BaseModel):
    """A problem plus everything needed to run it."""

    problem: ProblemSpec
    schedule: Tuple[int, ...] = Field(DEFAULT_SCHEDULE, description="Strictly increasing level list")
    tol_B0: float = Field(DEFAULT_TOL_B0, gt=0)
    grid: int = Field(DEFAULT_GRID, gt=0)
    out_dir: Path = OUTPUT_DIR
    threshold: float = Field(COMPARE_THRESHOLD, ge=0)
    extrapolate: bool = EXTRAPOLATE

    @field_validator("schedule")
    @classmethod
    def increasing_schedule(cls, schedule: Tuple[int, ...]) -> Tuple[int, ...]:
        if not schedule:
            raise ValueError("schedule must not be empty")
        if schedule[0] < 2:
            raise ValueError("levels must be at least 2")
        if any(b <= a for a, b in zip(schedule, schedule[1:])):
            raise ValueError(f"schedule must be strictly increasing, got {list(schedule)}")
        return schedule
