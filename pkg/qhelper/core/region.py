"""
Pareto frontier of the helper rate region over helper channels.

Each λ on the grid is a weighted-sum problem J = r2 + λ·r1, minimized by a
seeded multi-restart compass search over the isometry parametrization. The
lower convex hull of the per-λ optima (time-sharing) is the reported frontier.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.linalg import expm

from qhelper.core.channels import (
    ChannelParams, KrausChannel, default_env_dim, dephasing, depolarizing, discard,
    generator_from_theta, identity, kraus_to_stinespring, params_to_isometry, random_params,
)
from qhelper.core.errors import ConfigurationError
from qhelper.core.qcore import TAU_ENT, DensityOperator, purify, vector_entropy
from qhelper.core.rates import HelperInstance, RatePoint, build_phi, helper_rates
from qhelper.utils.centralized_logging import get_logger

logger = get_logger(__name__)

EPS_OPT = 1e-3
ORACLE_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class FrontierConfig:
    dim_c: int = 2
    dim_e: Optional[int] = None
    lambda_grid: Tuple[float, ...] = (0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 64.0)
    restarts: int = 8
    seed: int = 0
    max_iters: int = 400
    step_tol: float = 1e-6
    obj_tol: float = 1e-12
    initial_step: float = 0.5
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "lambda_grid", tuple(float(x) for x in self.lambda_grid))
        if self.dim_c < 1 or (self.dim_e is not None and self.dim_e < 1):
            raise ConfigurationError("dim_c and dim_e must be positive")
        if not self.lambda_grid:
            raise ConfigurationError("lambda_grid must not be empty")
        if any(x < 0 or not np.isfinite(x) for x in self.lambda_grid):
            raise ConfigurationError("lambda_grid values must be finite and nonnegative")
        if list(self.lambda_grid) != sorted(self.lambda_grid):
            raise ConfigurationError("lambda_grid must be ascending")
        if self.restarts < 1 or self.max_iters < 1 or self.workers < 1:
            raise ConfigurationError("restarts, max_iters and workers must be positive")
        if self.step_tol <= 0 or self.obj_tol <= 0 or self.initial_step <= 0:
            raise ConfigurationError("step_tol, obj_tol and initial_step must be positive")

    def env_dim(self, dim_b: int) -> int:
        return self.dim_e if self.dim_e is not None else default_env_dim(dim_b, self.dim_c)

    def to_dict(self) -> Dict:
        return {
            "dim_c": self.dim_c, "dim_e": self.dim_e, "lambda_grid": list(self.lambda_grid),
            "restarts": self.restarts, "seed": self.seed, "max_iters": self.max_iters,
            "step_tol": self.step_tol, "obj_tol": self.obj_tol, "initial_step": self.initial_step,
        }


@dataclass(frozen=True, eq=False)
class LambdaOutcome:
    """Best point found for one λ."""
    index: int
    lam: float
    point: RatePoint
    objective: float
    converged: bool
    iterations: int
    restart: int


@dataclass(eq=False)
class FrontierResult:
    points: List[RatePoint]
    hull: List[RatePoint]
    outcomes: List[LambdaOutcome] = field(default_factory=list)

    @property
    def all_converged(self) -> bool:
        return all(o.converged for o in self.outcomes)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "lambda": [o.lam for o in self.outcomes],
                "r1": [o.point.r1 for o in self.outcomes],
                "r2": [o.point.r2 for o in self.outcomes],
                "converged": [o.converged for o in self.outcomes],
                "iters": [o.iterations for o in self.outcomes],
            },
            columns=["lambda", "r1", "r2", "converged", "iters"],
        )

    def hull_lines(self) -> List[str]:
        """Two-column `r2 r1` lines for gnuplot."""
        return ["# r2 r1"] + [f"{p.r2!r} {p.r1!r}" for p in self.hull]

    def to_dict(self) -> Dict:
        return {
            "points": [
                {"lambda": o.lam, "objective": o.objective, "converged": o.converged,
                 "iters": o.iterations, "restart": o.restart, **o.point.to_dict()}
                for o in self.outcomes
            ],
            "hull": [{"r1": p.r1, "r2": p.r2} for p in self.hull],
        }


class _Objective:
    """(r1, r2) for a fixed source, evaluated straight from θ."""

    def __init__(self, rho_AB: DensityOperator, dim_c: int, dim_e: int):
        if set(rho_AB.labels) != {"A", "B"}:
            raise ConfigurationError(f"Source must be labeled A, B; got {rho_AB.labels}")
        psi = purify(rho_AB, "R")
        self.dim_b = psi.layout.dim_of("B")
        self.dim_c, self.dim_e = dim_c, dim_e
        self.side = dim_c * dim_e
        if self.dim_b > self.side:
            raise ConfigurationError(f"dim_c*dim_e = {self.side} is smaller than dim B = {self.dim_b}")
        # axes after the helper acts on B: A, C, E, R
        dims = psi.layout.dims
        a_idx, b_idx, r_idx = (psi.layout.index(l) for l in ("A", "B", "R"))
        tensor = np.reshape(psi.vector, dims).transpose(a_idx, r_idx, b_idx)
        self.d_a, self.d_r = dims[a_idx], dims[r_idx]
        self.psi_arb = tensor  # (A, R, B)
        self.dims = (self.d_a, dim_c, dim_e, self.d_r)

    def rates(self, theta: np.ndarray) -> Tuple[float, float]:
        u = expm(generator_from_theta(theta, self.side))
        v = u[:, :self.dim_b].reshape(self.dim_c, self.dim_e, self.dim_b)
        phi = np.einsum("ceb,arb->acer", v, self.psi_arb).reshape(-1)
        h = lambda axes: vector_entropy(phi, self.dims, axes)
        h_c = h([1])
        r1 = h([0, 1]) - h_c
        # I(RA;C) = H(RA) + H(C) − H(E) for pure φ
        r2 = 0.5 * (h([0, 3]) + h_c - h([2]))
        return r1, r2

    def params(self, theta: np.ndarray) -> ChannelParams:
        return ChannelParams(self.dim_b, self.dim_c, self.dim_e, theta)


def scalarized_objective(rho_AB: DensityOperator, params: ChannelParams, lam: float) -> float:
    """J = r2 + λ·r1 through build_phi and helper_rates."""
    point = helper_rates(build_phi(HelperInstance(rho_AB, params_to_isometry(params))))
    return point.r2 + lam * point.r1


def _compass_search(objective: _Objective, lam: float, theta0: np.ndarray,
                    cfg: FrontierConfig) -> Tuple[np.ndarray, float, bool, int]:
    """
    Coordinate pattern search: try ±step on each coordinate, keep strict
    improvements, halve the step after a sweep without one.
    """
    theta = theta0.copy()
    r1, r2 = objective.rates(theta)
    best = r2 + lam * r1
    step = cfg.initial_step
    for iteration in range(1, cfg.max_iters + 1):
        start = best
        for k in range(theta.size):
            for direction in (1.0, -1.0):
                trial = theta.copy()
                trial[k] += direction * step
                t1, t2 = objective.rates(trial)
                value = t2 + lam * t1
                if value < best:
                    theta, best = trial, value
                    break
        improvement = start - best
        if improvement <= 0.0:
            step *= 0.5
            if step < cfg.step_tol:
                return theta, best, True, iteration
        elif improvement < cfg.obj_tol:
            return theta, best, True, iteration
    return theta, best, False, cfg.max_iters


def minimize(rho_AB: DensityOperator, lam: float, cfg: FrontierConfig, index: int = 0) -> LambdaOutcome:
    """Best of `cfg.restarts` compass searches, seeded by (seed, index, restart)."""
    dim_b = rho_AB.layout.dim_of("B")
    objective = _Objective(rho_AB, cfg.dim_c, cfg.env_dim(dim_b))
    best: Optional[Tuple[float, np.ndarray, bool, int, int]] = None
    for restart in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, index, restart])
        start = random_params(dim_b, cfg.dim_c, objective.dim_e, rng).theta.copy()
        theta, value, converged, iters = _compass_search(objective, lam, start, cfg)
        logger.debug(f"λ={lam:g} restart {restart}: J={value:.10g} iters={iters} converged={converged}")
        if best is None or value < best[0]:
            best = (value, theta, converged, iters, restart)
    value, theta, converged, iters, restart = best
    r1, r2 = objective.rates(theta)
    if -TAU_ENT < r2 < 0.0:
        r2 = 0.0
    if not converged:
        logger.warning(f"λ={lam:g}: iteration cap {cfg.max_iters} reached")
    point = RatePoint(r1, r2, objective.params(theta))
    return LambdaOutcome(index, lam, point, value, converged, iters, restart)


def lower_convex_hull(points: Sequence[RatePoint], tol: float = TAU_ENT) -> List[RatePoint]:
    """
    Lower-left boundary of the convex hull in the (r2, r1) plane: sorted by r2
    ascending with r1 strictly decreasing.
    """
    ordered = sorted(points, key=lambda p: (p.r2, p.r1))
    hull: List[RatePoint] = []
    for p in ordered:
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (a.r2 - o.r2) * (p.r1 - o.r1) - (a.r1 - o.r1) * (p.r2 - o.r2)
            if cross <= tol:
                hull.pop()
            else:
                break
        hull.append(p)
    frontier: List[RatePoint] = []
    for p in hull:
        if not frontier or p.r1 < frontier[-1].r1 - tol:
            frontier.append(p)
    return frontier


def trace_frontier(rho_AB: DensityOperator, cfg: FrontierConfig) -> FrontierResult:
    """One minimize per λ (in parallel), then the time-sharing hull."""
    grid = list(enumerate(cfg.lambda_grid))
    logger.info(f"Tracing frontier over {len(grid)} λ values with {cfg.restarts} restarts each")
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as executor:
            futures = [executor.submit(minimize, rho_AB, lam, cfg, i) for i, lam in grid]
            outcomes = [f.result() for f in futures]
    else:
        outcomes = [minimize(rho_AB, lam, cfg, i) for i, lam in grid]
    outcomes.sort(key=lambda o: o.index)
    points = [o.point for o in outcomes]
    hull = lower_convex_hull(points)
    logger.info(f"Frontier hull has {len(hull)} vertices")
    return FrontierResult(points=points, hull=hull, outcomes=outcomes)


# ---------------------------------------------------------------------------
# Oracle sweep over preset channels
# ---------------------------------------------------------------------------

def preset_channels(dim_b: int, dim_c: int, grid: Sequence[float] = ORACLE_GRID) -> Dict[str, KrausChannel]:
    channels: Dict[str, KrausChannel] = {"discard": discard(dim_b)}
    if dim_c >= dim_b:
        channels["identity"] = identity(dim_b)
        for p in grid:
            channels[f"dephasing:{p:g}"] = dephasing(p, dim_b)
            channels[f"depolarizing:{p:g}"] = depolarizing(p, dim_b)
    return channels


def preset_sweep(rho_AB: DensityOperator, dim_c: int,
                 grid: Sequence[float] = ORACLE_GRID) -> Dict[str, RatePoint]:
    """Rate points of the preset channels that fit in dim_c."""
    dim_b = rho_AB.layout.dim_of("B")
    points = {}
    for name, channel in preset_channels(dim_b, dim_c, grid).items():
        inst = HelperInstance(rho_AB, kraus_to_stinespring(channel))
        points[name] = helper_rates(build_phi(inst))
    return points


def dominance_violations(result: FrontierResult, oracle: Dict[str, RatePoint],
                         eps: float = EPS_OPT) -> List[Dict]:
    """Cases where an oracle point beats the optimizer's J at some λ by more than eps."""
    violations = []
    for outcome in result.outcomes:
        j_opt = outcome.point.r2 + outcome.lam * outcome.point.r1
        for name, p in oracle.items():
            gap = j_opt - (p.r2 + outcome.lam * p.r1)
            if gap > eps:
                violations.append({"lambda": outcome.lam, "preset": name, "gap": gap})
    return violations
