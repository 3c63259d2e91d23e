"""Accessory-parameter solver - level-n slit combs and continuation in n.

At level n the arc I is split uniformly into cells Delta_0..Delta_n by the
jump points beta_1..beta_n. Everything geometric depends on the jump
contributions w_k = C1 * mu_k / sin(beta_k): the slit over Delta_c stands at
u_c + pi/2 - pi * (w_1 + ... + w_c) and reaches down to the minimum of v over
Delta_c. With the width normalized, the slits over the two end cells sit on
the lines u = u_c +- pi/2 and only the n - 1 interior tips are matched to
the curve.

That leaves one free parameter per level. The level solution is the fold of
the tips-on-curve family, the configuration with the largest B0, found as a
Karush-Kuhn-Tucker point:

    maximize B0  subject to  t_c(w) = H(s_c(w), B0), c = 1..n-1,  sum(w) = 1.

The chain scalar c only enters through the mass normalization, so it is
recomputed from w exactly.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt, wait_none

from src.config import (
    ARMIJO_SLOPE,
    B0_MAX,
    B0_MIN,
    BOUNDARY_FRACTION,
    CONTINUATION_RATIO,
    CURVE_TOL,
    DEFAULT_SCHEDULE,
    DEFAULT_TOL_B0,
    EXTRAPOLATE,
    FOLD_BOUNDS,
    LINE_SEARCH_MIN_STEP,
    NEWTON_MAX_ITER,
    NORMALIZATION_TOL,
    SOLVER_STRATEGIES,
    STATIONARITY_TOL,
    SWEEP_PASSES,
)
from src.errors import (
    AdmissibilityError,
    DegenerateConfigurationError,
    MinimizationFailureError,
    NoConvergenceError,
    OutsideCurveSupportError,
    SolverError,
    TipOutsideCurveSupportError,
)
from src.geometry import center_abscissa, compute_angles, curve_height, validate
from src.herglotz import (
    atom_sum,
    build_map_scale,
    build_measure,
    log_kernel,
    log_kernel_slope,
    trace_contributions,
    trace_curvatures,
    trace_minima,
)
from src.schemas import (
    AnglePreimages,
    Discretization,
    HerglotzMeasure,
    LevelRecord,
    MapScale,
    ProblemSpec,
    SolveResult,
    TipSet,
)
from src.utils import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class CurveTerms:
    """First and second derivatives of the interior curve residuals.

    Rows run over the interior cells 1..n-1, columns over w_1..w_n.
    """

    w_gradient: np.ndarray
    B_gradient: np.ndarray
    kernel_slope: np.ndarray
    curvature: np.ndarray
    before: np.ndarray
    height_ss: np.ndarray
    height_sB: np.ndarray
    height_BB: np.ndarray


@dataclass(frozen=True)
class LevelState:
    """One evaluated iterate of the level-n optimality system."""

    w: np.ndarray
    cumulative: np.ndarray
    mu: np.ndarray
    B0: float
    c: float
    abscissas: np.ndarray
    argmins: np.ndarray
    minima: np.ndarray
    residual: np.ndarray
    multipliers: np.ndarray
    nu: float
    stationarity: np.ndarray
    terms: CurveTerms

    @property
    def curve_residuals(self) -> np.ndarray:
        return self.residual[:-2]

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residual)))

    @property
    def max_stationarity(self) -> float:
        return float(np.max(np.abs(self.stationarity)))

    @property
    def system(self) -> np.ndarray:
        """Curve and width residuals followed by the stationarity conditions."""
        return np.concatenate([self.residual[:-1], self.stationarity])


def _height_terms(positions: np.ndarray, B0: float, u_c: float) -> Tuple[np.ndarray, ...]:
    """H = arccosh(cosh B0 / cos(s - u_c)) with its first and second derivatives in s and B0."""
    delta = positions - u_c
    cos_d = np.cos(delta)
    tan_d = np.tan(delta)
    ratio = math.cosh(B0) / cos_d
    root = np.sqrt(ratio * ratio - 1.0)
    cubed = root ** 3

    r_s = ratio * tan_d
    r_B = math.sinh(B0) / cos_d
    r_ss = ratio * (tan_d * tan_d + 1.0 / (cos_d * cos_d))
    r_sB = r_B * tan_d

    h_s = r_s / root
    h_B = r_B / root
    h_ss = r_ss / root - r_s * r_s * ratio / cubed
    h_sB = r_sB / root - r_s * r_B * ratio / cubed
    h_BB = ratio / root - r_B * r_B * ratio / cubed
    return h_s, h_B, h_ss, h_sB, h_BB


class SlitComb:
    """Level-n slit domain over the arc I.

    Input: ProblemSpec, AnglePreimages, level n
    Output: Residuals, Jacobians and solved Discretizations at that level
    Responsibility: Turn (w, B0) into slit tips and push B0 to the fold of the tips-on-curve family
    """

    def __init__(self, spec: ProblemSpec, angles: AnglePreimages, n: int):
        if n < 2:
            raise ValueError(f"level must be at least 2, got {n}")
        self.spec = spec
        self.angles = angles
        self.n = n
        lo, hi = angles.arc
        self.arc = (lo, hi)
        self.edges = lo + (hi - lo) * np.arange(n + 2) / (n + 1)
        self.beta = self.edges[1:-1]
        self.sin_beta = np.sin(self.beta)
        self.thetas = np.concatenate([np.asarray(angles.alpha, dtype=float), self.beta])
        self.atom_weights = np.asarray(spec.k_tilde, dtype=float)
        self.atom_sum = atom_sum(angles, spec)
        self.u_c = center_abscissa(spec)
        self.before = np.tri(n - 1, n, dtype=bool)

    # ========== parametrization ==========

    def contributions(self, mu: np.ndarray, c: float) -> np.ndarray:
        return np.asarray(mu, dtype=float) / (c * self.sin_beta)

    def scale_from(self, w: np.ndarray) -> Tuple[float, np.ndarray]:
        """c and mu realizing contributions w with 2cS + 2*sum(mu) = 1 exactly."""
        c = 1.0 / (2.0 * (self.atom_sum + float(np.dot(w, self.sin_beta))))
        return c, c * w * self.sin_beta

    def is_feasible(self, w: np.ndarray) -> bool:
        """Admissibility: positive contributions and interior slits inside the curve support."""
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            return False
        return float(np.sum(w[:-1])) < 1.0

    def abscissas(self, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Partial sums S_0..S_n (S_0 = 0) and the slit abscissas over Delta_0..Delta_n."""
        cumulative = np.concatenate([[0.0], np.cumsum(w)])
        return cumulative, self.u_c + 0.5 * math.pi - math.pi * cumulative

    def cell_minima(self, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Argmins and minima of v over Delta_0..Delta_n."""
        weights = np.concatenate([self.atom_weights, w])
        return trace_minima(self.edges[:-1], self.edges[1:], self.thetas, weights)

    # ========== optimality system ==========

    def evaluate(self, w: np.ndarray, B0: float,
                 multipliers: Optional[np.ndarray] = None, nu: float = 0.0) -> LevelState:
        """Curve, width and mass residuals plus the stationarity of the fold.

        Raises:
            TipOutsideCurveSupportError: If an interior slit leaves |u - u_c| < pi/2
            MinimizationFailureError: If a cell minimum cannot be bracketed
        """
        w = np.asarray(w, dtype=float)
        multipliers = np.zeros(self.n - 1) if multipliers is None else np.asarray(multipliers, dtype=float)
        c, mu = self.scale_from(w)
        cumulative, positions = self.abscissas(w)
        interior = positions[1:-1]
        try:
            heights = np.atleast_1d(curve_height(interior, B0, self.u_c))
        except OutsideCurveSupportError as e:
            raise TipOutsideCurveSupportError(f"n={self.n}: {e}") from e
        argmins, minima = self.cell_minima(w)
        terms = self._curve_terms(w, B0, interior, argmins[1:-1])

        residual = np.concatenate([
            minima[1:-1] - heights,
            [cumulative[-1] - 1.0, 2.0 * c * self.atom_sum + 2.0 * float(np.sum(mu)) - 1.0],
        ])
        stationarity = np.concatenate([
            terms.w_gradient.T @ multipliers + nu,
            [1.0 + float(np.dot(terms.B_gradient, multipliers))],
        ])
        return LevelState(
            w=w,
            cumulative=cumulative,
            mu=mu,
            B0=float(B0),
            c=float(c),
            abscissas=positions,
            argmins=argmins,
            minima=minima,
            residual=residual,
            multipliers=multipliers,
            nu=float(nu),
            stationarity=stationarity,
            terms=terms,
        )

    def _curve_terms(self, w: np.ndarray, B0: float, interior: np.ndarray, argmins: np.ndarray) -> CurveTerms:
        """A tip height moves with w_j only through the kernel value at its argmin, since v' vanishes there."""
        h_s, h_B, h_ss, h_sB, h_BB = _height_terms(interior, B0, self.u_c)
        kernel = log_kernel(argmins[:, None], self.beta[None, :])
        weights = np.concatenate([self.atom_weights, w])
        return CurveTerms(
            w_gradient=kernel + math.pi * h_s[:, None] * self.before,
            B_gradient=-h_B,
            kernel_slope=log_kernel_slope(argmins[:, None], self.beta[None, :]),
            curvature=trace_curvatures(argmins, self.thetas, weights),
            before=self.before.astype(float),
            height_ss=h_ss,
            height_sB=h_sB,
            height_BB=h_BB,
        )

    def multipliers(self, state: LevelState) -> Tuple[np.ndarray, float]:
        """Least-squares multipliers for the stationarity rows at fixed (w, B0)."""
        n = self.n
        matrix = np.zeros((n + 1, n))
        matrix[:n, :n - 1] = state.terms.w_gradient.T
        matrix[:n, n - 1] = 1.0
        matrix[n, :n - 1] = state.terms.B_gradient
        target = np.zeros(n + 1)
        target[n] = -1.0
        solution = np.linalg.lstsq(matrix, target, rcond=None)[0]
        return solution[:-1], float(solution[-1])

    def jacobian(self, state: LevelState) -> np.ndarray:
        """Exact Jacobian of LevelState.system in (w_1..w_n, B0, multipliers, nu).

        Second derivatives of a tip height in w come from the argmin shift,
        -G'(beta_i) G'(beta_j) / v''.
        """
        n = self.n
        terms = state.terms
        lam = state.multipliers

        hess_ww = (
            -(terms.kernel_slope * (lam / terms.curvature)[:, None]).T @ terms.kernel_slope
            - math.pi ** 2 * (terms.before * (lam * terms.height_ss)[:, None]).T @ terms.before
        )
        hess_wB = math.pi * terms.before.T @ (lam * terms.height_sB)

        J = np.zeros((2 * n + 1, 2 * n + 1))
        J[:n - 1, :n] = terms.w_gradient
        J[:n - 1, n] = terms.B_gradient
        J[n - 1, :n] = 1.0
        J[n:2 * n, :n] = hess_ww
        J[n:2 * n, n] = hess_wB
        J[n:2 * n, n + 1:2 * n] = terms.w_gradient.T
        J[n:2 * n, 2 * n] = 1.0
        J[2 * n, :n] = hess_wB
        J[2 * n, n] = -float(np.dot(lam, terms.height_BB))
        J[2 * n, n + 1:2 * n] = terms.B_gradient
        return J

    def is_converged(self, state: LevelState, tol: float = CURVE_TOL) -> bool:
        return (
            float(np.max(np.abs(state.curve_residuals))) < tol
            and abs(state.residual[-2]) < NORMALIZATION_TOL
            and abs(state.residual[-1]) < NORMALIZATION_TOL
            and state.max_stationarity < STATIONARITY_TOL
        )

    # ========== strategies ==========

    def newton(self, w: np.ndarray, B0: float, tol: float = CURVE_TOL,
               max_iter: int = NEWTON_MAX_ITER) -> Tuple[LevelState, int]:
        """Damped Newton on the optimality system, multipliers started by least squares.

        Returns:
            (final state, number of accepted steps)

        Raises:
            NoConvergenceError: On a stalled line search, a singular Jacobian or the iteration cap
            DegenerateConfigurationError: If B0 leaves [B0_MIN, B0_MAX]
        """
        state = self.evaluate(w, B0)
        state = self.evaluate(w, B0, *self.multipliers(state))
        for step in range(max_iter + 1):
            if self.is_converged(state, tol):
                return state, step
            if step == max_iter:
                break
            try:
                direction = np.linalg.solve(self.jacobian(state), -state.system)
            except np.linalg.LinAlgError as e:
                raise NoConvergenceError(f"n={self.n}: singular Jacobian at step {step}") from e

            state = self._line_search(state, direction)
            self._check_degenerate(state.B0)
            logger.debug(
                f"n={self.n} step {step + 1}: B0={state.B0:.12f}, residual={state.max_residual:.3e}, "
                f"stationarity={state.max_stationarity:.3e}"
            )

        raise NoConvergenceError(
            f"n={self.n}: Newton iteration cap {max_iter} reached, residual {state.max_residual:.3e}"
        )

    def _line_search(self, state: LevelState, direction: np.ndarray) -> LevelState:
        n = self.n
        merit = float(np.linalg.norm(state.system))
        shrinking = direction[:n] < -(1.0 - BOUNDARY_FRACTION) * state.w
        t = 1.0
        if np.any(shrinking):
            t = min(t, float(np.min(BOUNDARY_FRACTION * state.w[shrinking] / -direction[:n][shrinking])))

        while t >= LINE_SEARCH_MIN_STEP:
            w = state.w + t * direction[:n]
            B0 = state.B0 + t * direction[n]
            multipliers = state.multipliers + t * direction[n + 1:2 * n]
            nu = state.nu + t * direction[2 * n]
            if self.is_feasible(w) and B0 > 0:
                try:
                    trial = self.evaluate(w, B0, multipliers, nu)
                except (MinimizationFailureError, TipOutsideCurveSupportError):
                    trial = None
                if trial is not None and np.linalg.norm(trial.system) <= (1.0 - ARMIJO_SLOPE * t) * merit:
                    return trial
            t *= 0.5
            logger.debug(f"n={self.n}: step halved to {t}")

        raise NoConvergenceError(f"n={self.n}: line search stalled, residual {state.max_residual:.3e}")

    @staticmethod
    def _check_degenerate(B0: float) -> None:
        if B0 < B0_MIN:
            raise DegenerateConfigurationError(f"B0 = {B0:.3e} tends to 0; the slit domain degenerates")
        if B0 > B0_MAX:
            raise DegenerateConfigurationError(f"B0 = {B0:.3e} tends to infinity")

    def sweep(self, w: np.ndarray, B0: float, passes: int = SWEEP_PASSES) -> np.ndarray:
        """Sequential matching at fixed B0: tip c is moved onto the curve through w_c.

        The last contribution always closes the width normalization.

        Raises:
            AdmissibilityError: If the start is inadmissible
            NoConvergenceError: If a whole pass matches no tip
        """
        if not self.is_feasible(w):
            raise AdmissibilityError(f"n={self.n}: sweep started from an inadmissible configuration")
        w = np.asarray(w, dtype=float) / float(np.sum(w))

        def curve_residual(value: float, c: int, current: np.ndarray) -> float:
            trial = current.copy()
            trial[c - 1] = value
            trial[-1] = 1.0 - float(np.sum(trial[:-1]))
            if not self.is_feasible(trial):
                raise AdmissibilityError(f"n={self.n}: trial contribution {value} is inadmissible")
            return float(self.evaluate(trial, B0).residual[c - 1])

        for sweep_pass in range(passes):
            matched = 0
            for c in range(1, self.n):
                lo = 0.25 * w[c - 1]
                hi = min(4.0 * w[c - 1], w[c - 1] + BOUNDARY_FRACTION * w[-1])
                try:
                    if curve_residual(lo, c, w) * curve_residual(hi, c, w) > 0:
                        logger.debug(f"n={self.n}: tip {c} not bracketed at B0={B0:.10f}")
                        continue
                    w[c - 1] = brentq(curve_residual, lo, hi, args=(c, w), xtol=1e-14)
                except SolverError as e:
                    logger.debug(f"n={self.n}: tip {c} skipped ({e})")
                    continue
                w[-1] = 1.0 - float(np.sum(w[:-1]))
                matched += 1

            logger.info(f"n={self.n} sweep {sweep_pass + 1}: matched {matched} of {self.n - 1} tips")
            if matched == 0:
                raise NoConvergenceError(f"n={self.n}: sweep matched no tip at B0={B0:.10f}")
        return w

    # ========== solving ==========

    def solve(self, start: Discretization, tol: float = CURVE_TOL) -> Discretization:
        """Run the strategies in order until one converges.

        Raises:
            NoConvergenceError: If every strategy fails
        """
        for attempt in Retrying(
            stop=stop_after_attempt(len(SOLVER_STRATEGIES)),
            retry=retry_if_exception_type(NoConvergenceError),
            wait=wait_none(),
            reraise=True,
        ):
            with attempt:
                strategy = SOLVER_STRATEGIES[attempt.retry_state.attempt_number - 1]
                return self._run_strategy(strategy, start, tol)

    def _run_strategy(self, strategy: str, start: Discretization, tol: float) -> Discretization:
        w = np.asarray(start.contributions, dtype=float)
        B0 = start.B0
        if strategy == "sweep":
            logger.warning(f"n={self.n}: Newton failed, falling back to the sequential sweep")
            w = self.sweep(w, B0)
        elif strategy != "newton":
            raise ValueError(f"Unknown solver strategy: {strategy}")

        state, steps = self.newton(w / float(np.sum(w)), B0, tol)
        return self.to_discretization(state, steps, strategy)

    def to_discretization(self, state: LevelState, steps: int = 0, strategy: str = "initial") -> Discretization:
        return Discretization(
            n=self.n,
            arc=self.arc,
            beta=tuple(float(b) for b in self.beta),
            mu=tuple(float(m) for m in state.mu),
            B0=state.B0,
            c=state.c,
            newton_steps=steps,
            strategy=strategy,
            max_residual=state.max_residual,
            stationarity=state.max_stationarity,
        )


# ========== starting points ==========

def fold_start(comb: SlitComb) -> Discretization:
    """Level 2 has a single interior tip, so its fold is a scalar maximization.

    For w = (w_1, 1 - w_1) the tip over Delta_1 fixes cosh B0 = cosh(t_1) cos(s_1 - u_c).

    Raises:
        DegenerateConfigurationError: If no w_1 gives a positive B0
    """
    if comb.n != 2:
        raise ValueError(f"fold_start needs level 2, got {comb.n}")

    def negative_height(w1: float) -> float:
        w = np.array([w1, 1.0 - w1])
        _, minima = comb.cell_minima(w)
        ratio = math.cosh(minima[1]) * math.cos(comb.abscissas(w)[1][1] - comb.u_c)
        return -math.acosh(ratio) if ratio > 1.0 else 1.0 - ratio

    best = minimize_scalar(negative_height, bounds=FOLD_BOUNDS, method="bounded", options={"xatol": 1e-12})
    B0 = -float(best.fun)
    if B0 < B0_MIN:
        raise DegenerateConfigurationError(f"level 2 admits no positive B0 (best {B0:.3e})")
    w = np.array([best.x, 1.0 - best.x])
    logger.debug(f"Level 2 fold: w_1={best.x:.12f}, B0={B0:.12f}")
    return comb.to_discretization(comb.evaluate(w, B0))


def warm_start(previous: Discretization, comb: SlitComb) -> Discretization:
    """Interpolate another level onto comb's partition.

    The cumulative contribution of the old level is a piecewise-linear
    function with value S_k - w_k/2 at beta_k, 0 at alpha_{p+1} and 1 at alpha_0;
    new contributions are its increments between consecutive cell midpoints.
    B0 is carried over.
    """
    old_w = np.asarray(previous.contributions, dtype=float)
    old_w = old_w / np.sum(old_w)
    knots = np.concatenate([[previous.arc[0]], previous.beta, [previous.arc[1]]])
    values = np.concatenate([[0.0], np.cumsum(old_w) - 0.5 * old_w, [1.0]])

    midpoints = 0.5 * (comb.edges[:-1] + comb.edges[1:])
    w = np.diff(np.interp(midpoints, knots, values))
    w = w / np.sum(w)
    return comb.to_discretization(comb.evaluate(w, previous.B0))


def continuation_levels(start: int, target: int, ratio: float = CONTINUATION_RATIO) -> List[int]:
    """Intermediate levels from start up to target, each at most ratio times the last."""
    levels: List[int] = []
    n = start
    while n < target:
        n = min(target, max(n + 1, int(ratio * n)))
        levels.append(n)
    return levels


# ========== public operations ==========

def tip_positions(disc: Discretization, angles: AnglePreimages, spec: ProblemSpec) -> TipSet:
    """Interior slit tips with their argmins and curve residuals, plus the two end tips.

    Raises:
        AdmissibilityError: If disc is not admissible
        MinimizationFailureError: If a cell minimum cannot be bracketed
    """
    comb = SlitComb(spec, angles, disc.n)
    w = comb.contributions(np.asarray(disc.mu), disc.c)
    if not comb.is_feasible(w):
        raise AdmissibilityError(f"n={disc.n}: discretization is not admissible")
    state = comb.evaluate(w, disc.B0)
    return TipSet(
        real=tuple(float(x) for x in state.abscissas[1:-1]),
        imag=tuple(float(y) for y in state.minima[1:-1]),
        argmins=tuple(float(phi) for phi in state.argmins[1:-1]),
        curve_residuals=tuple(float(r) for r in state.curve_residuals),
        free_tips=(
            (float(state.abscissas[0]), float(state.minima[0])),
            (float(state.abscissas[-1]), float(state.minima[-1])),
        ),
        free_argmins=(float(state.argmins[0]), float(state.argmins[-1])),
    )


def residuals(disc: Discretization, angles: AnglePreimages, spec: ProblemSpec) -> np.ndarray:
    """n - 1 curve residuals followed by the width and the mass residual.

    Raises:
        TipOutsideCurveSupportError: If a tip left the strip |u - u_c| < pi/2
    """
    comb = SlitComb(spec, angles, disc.n)
    return comb.evaluate(comb.contributions(np.asarray(disc.mu), disc.c), disc.B0).residual


def solve_level(
    spec: ProblemSpec,
    angles: AnglePreimages,
    n: int,
    init: Optional[Discretization] = None,
    tol: float = CURVE_TOL,
) -> Discretization:
    """Solve the level-n accessory-parameter problem.

    Without init the level-2 fold is solved first; any level below n is
    continued upwards through intermediate levels.

    Args:
        spec: Validated problem
        angles: Its angle preimages
        n: Level, at least 2
        init: Starting point at level n, another level to interpolate, or None
        tol: Curve residual tolerance

    Returns:
        Discretization with all residuals below tolerance

    Raises:
        AdmissibilityError: If init at level n is not admissible
        NoConvergenceError: If every strategy fails
        DegenerateConfigurationError: If B0 drifts to 0 or infinity
    """
    if init is not None and init.n == n:
        comb = SlitComb(spec, angles, n)
        if not comb.is_feasible(comb.contributions(np.asarray(init.mu), init.c)):
            raise AdmissibilityError(f"n={n}: initial contributions violate admissibility")
        return comb.solve(init, tol)

    disc = init
    if disc is None:
        comb = SlitComb(spec, angles, 2)
        disc = comb.solve(fold_start(comb), tol)

    for level in continuation_levels(disc.n, n) or [n]:
        comb = SlitComb(spec, angles, level)
        disc = comb.solve(warm_start(disc, comb), tol)
        logger.debug(f"Continuation level n={level}: B0={disc.B0:.10f}")
    return disc


def richardson(levels: Sequence[int], values: Sequence[float]) -> List[float]:
    """First-order extrapolation of consecutive level values, one estimate per level pair."""
    return [
        values[i] + (values[i] - values[i - 1]) * levels[i - 1] / (levels[i] - levels[i - 1])
        for i in range(1, len(values))
    ]


def ray_heights(measure: HerglotzMeasure, scale: MapScale, angles: AnglePreimages, spec: ProblemSpec) -> Tuple[float, ...]:
    """Base heights B_1..B_p: minimum of v over the arc mapped onto each ray."""
    alpha = angles.alpha
    lo, hi = [], []
    for j in range(1, spec.p + 1):
        if j <= spec.q:
            lo.append(alpha[j - 1])
            hi.append(alpha[j])
        else:
            lo.append(alpha[j])
            hi.append(alpha[j + 1])
    if not lo:
        return ()

    thetas, contributions = trace_contributions(measure, scale)
    try:
        _, values = trace_minima(lo, hi, thetas, contributions)
    except MinimizationFailureError as e:
        logger.warning(f"Ray heights unavailable: {e}")
        return ()
    return tuple(float(v) for v in values)


def solve(
    spec: ProblemSpec,
    schedule: Sequence[int] = DEFAULT_SCHEDULE,
    tol_B0: float = DEFAULT_TOL_B0,
    extrapolate: bool = EXTRAPOLATE,
    strict: bool = True,
) -> SolveResult:
    """Continuation over the schedule with warm starts and a Cauchy test on B0.

    Args:
        spec: Problem
        schedule: Strictly increasing levels, each at least 2
        tol_B0: Stop once consecutive level values differ by less than tol_B0 * (1 + B0)
        extrapolate: Also form Richardson estimates and run the test on them instead
        strict: Raise when the schedule ends unconverged instead of returning converged=False

    Returns:
        SolveResult at the last solved level; B0_star is that level's value

    Raises:
        ProblemSpecError: If spec is invalid
        NoConvergenceError: With the level history attached
    """
    validate(spec)
    angles = compute_angles(spec)
    logger.info(f"Solving a={spec.a}, poles={list(spec.poles)}, N={spec.basis_size} over levels {list(schedule)}")

    history: List[LevelRecord] = []
    estimates: List[float] = []
    disc: Optional[Discretization] = None
    converged = False

    for n in schedule:
        try:
            disc = solve_level(spec, angles, n, init=disc)
        except NoConvergenceError as e:
            raise NoConvergenceError(f"level n={n}: {e}", history=history) from e

        history.append(LevelRecord(
            n=n, B0=disc.B0, max_residual=disc.max_residual,
            newton_steps=disc.newton_steps, strategy=disc.strategy,
        ))
        logger.info(
            f"Level n={n}: B0={disc.B0:.10f}, residual={disc.max_residual:.2e}, "
            f"steps={disc.newton_steps} ({disc.strategy})"
        )

        levels = [record.n for record in history]
        raw = [record.B0 for record in history]
        estimates = richardson(levels, raw) if extrapolate else raw
        if len(estimates) >= 2 and abs(estimates[-1] - estimates[-2]) < tol_B0 * (1.0 + estimates[-2]):
            converged = True
            break

    if not converged and strict:
        raise NoConvergenceError(
            f"B0 did not settle to {tol_B0} over levels {list(schedule)}", history=history
        )

    raw = [record.B0 for record in history]
    increments = [abs(b - a) for a, b in zip(raw, raw[1:])]
    extrapolated = extrapolate and len(history) >= 2
    measure = build_measure(angles, spec, disc.c, disc.beta, disc.mu)
    scale = build_map_scale(angles, spec, disc.c)

    return SolveResult(
        problem=spec,
        B0_star=disc.B0,
        B0_extrapolated=float(estimates[-1]) if extrapolated else None,
        measure=measure,
        scale=scale,
        discretization=disc,
        tips=tip_positions(disc, angles, spec),
        level_history=tuple(history),
        estimates=tuple(float(e) for e in (estimates if extrapolated else raw)),
        increments=tuple(increments),
        monotone_increments=all(b < a for a, b in zip(increments, increments[1:])),
        extrapolated=extrapolated,
        converged=converged,
        residuals=tuple(float(r) for r in residuals(disc, angles, spec)),
        ray_heights=ray_heights(measure, scale, angles, spec),
        origin_only=spec.origin_only,
    )
