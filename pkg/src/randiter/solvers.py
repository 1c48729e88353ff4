"""Randomized Kaczmarz and Randomized Coordinate Descent.

Both methods are matrix-free: RK touches one row per step (O(p) work),
RCD one column per step (O(n) work). The driver samples indices with
probability proportional to squared row/column norms and records a
convergence trace at checkpoints.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DegenerateWeights, DimensionError, ZeroNormColumn, ZeroNormRow
from .sampling import RngState, build_sampler

# RCD maintains its residual incrementally; a periodic rebuild caps
# floating-point drift so per-step optimality stays testable.
RESIDUAL_REFRESH_EVERY = 1000

# Plateau detector for regimes with an error floor: stop when the
# relative err_sq change stays below this across PLATEAU_WINDOW
# consecutive checkpoints.
PLATEAU_REL_CHANGE = 1e-6
PLATEAU_WINDOW = 5


class Regime(enum.Enum):
    CONSISTENT_UNIQUE = "consistent"
    INCONSISTENT = "inconsistent"
    UNDERDETERMINED = "underdetermined"
    UNKNOWN = "unknown"


class Method(enum.Enum):
    RK = "rk"
    RCD = "rcd"


@dataclass
class Problem:
    """One regression instance: X (n x p), observations y (length n)."""

    X: np.ndarray
    y: np.ndarray
    regime: Regime = Regime.UNKNOWN

    def __post_init__(self):
        if self.y.shape[0] != self.X.shape[0]:
            raise DimensionError(
                f"y has length {self.y.shape[0]}, X has {self.X.shape[0]} rows"
            )


@dataclass
class SolverState:
    """Mutable iterate for RK/RCD.

    RK does not maintain `residual` (a step needs only one row inner
    product); it is None there and recomputed at checkpoints. RCD keeps
    it incrementally up to date.
    """

    beta: np.ndarray
    residual: np.ndarray | None
    iter: int
    rng: RngState


@dataclass
class TraceRecord:
    iter: int
    err_sq: float
    energy_err_sq: float
    residual_sq: float
    bound: float


@dataclass
class ConvergenceTrace:
    records: list[TraceRecord] = field(default_factory=list)

    def append(self, rec: TraceRecord) -> None:
        if self.records and rec.iter <= self.records[-1].iter:
            raise ValueError("trace iterations must be strictly increasing")
        self.records.append(rec)

    def final(self) -> TraceRecord:
        return self.records[-1]

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])


@dataclass
class RunConfig:
    """Driver knobs shared by every solver run."""

    max_iters: int
    tol: float = 1e-12
    seed: int = 0
    checkpoint_every: int | None = None  # default: one epoch (n or p)
    beta0: np.ndarray | None = None  # default: zero vector


def rk_step(state: SolverState, X: np.ndarray, y: np.ndarray, row: int) -> SolverState:
    """Project the iterate onto the hyperplane of one equation (row)."""
    xr = X[row]
    nrm = float(xr @ xr)
    if nrm <= 0.0:
        raise ZeroNormRow(f"row {row} has zero norm")
    delta = (y[row] - float(xr @ state.beta)) / nrm
    state.beta += delta * xr
    state.iter += 1
    return state


def rcd_step(state: SolverState, X: np.ndarray, y: np.ndarray, col: int) -> SolverState:
    """Exactly minimize the residual norm along one coordinate (column)."""
    xc = X[:, col]
    nrm = float(xc @ xc)
    if nrm <= 0.0:
        raise ZeroNormColumn(f"column {col} has zero norm")
    if state.residual is None:
        state.residual = y - X @ state.beta
    delta = float(xc @ state.residual) / nrm
    state.beta[col] += delta
    state.residual -= delta * xc
    state.iter += 1
    return state


def _plateaued(err_history: list[float]) -> bool:
    if len(err_history) < PLATEAU_WINDOW + 1:
        return False
    recent = err_history[-(PLATEAU_WINDOW + 1):]
    for prev, cur in zip(recent, recent[1:]):
        denom = max(prev, 1e-300)
        if abs(cur - prev) / denom >= PLATEAU_REL_CHANGE:
            return False
    return True


def run(
    method: Method,
    problem: Problem,
    config: RunConfig,
    reference: np.ndarray,
    rate: float,
) -> ConvergenceTrace:
    """Drive sampler-chosen steps and record a convergence trace.

    `reference` is the regime's target (beta*, beta_LS or beta_MN) from
    the oracle; `rate` is the theoretical per-iteration contraction
    factor 1 - sigma_min / trace of the relevant covariance. err_sq is
    the squared Euclidean error, energy_err_sq the squared error of
    fitted values ||X (beta - reference)||^2, and `bound` the rate^t
    envelope on the method's natural error (Euclidean for RK, energy
    for RCD).
    """
    X, y = problem.X, problem.y
    n, p = X.shape
    if config.max_iters <= 0:
        raise ValueError("max_iters must be positive")

    if method == Method.RK:
        weights = linalg.row_norms_sq(X)
    else:
        weights = linalg.col_norms_sq(X)
    if float(np.sum(weights)) <= 0.0:
        raise DegenerateWeights("matrix is entirely zero")
    sampler = build_sampler(weights)

    beta = np.zeros(p) if config.beta0 is None else config.beta0.astype(np.float64).copy()
    rng = RngState(config.seed)
    residual = (y - X @ beta) if method == Method.RCD else None
    state = SolverState(beta=beta, residual=residual, iter=0, rng=rng)

    every = config.checkpoint_every
    if every is None:
        every = n if method == Method.RK else p
    tol_sq = config.tol * config.tol
    consistent = problem.regime in (Regime.CONSISTENT_UNIQUE, Regime.UNDERDETERMINED)

    trace = ConvergenceTrace()
    err_history: list[float] = []
    initial_err = 0.0

    def record() -> TraceRecord:
        nonlocal initial_err
        diff = state.beta - reference
        err_sq = float(diff @ diff)
        fitted = X @ diff
        energy_err_sq = float(fitted @ fitted)
        res = y - X @ state.beta
        residual_sq = float(res @ res)
        natural = err_sq if method == Method.RK else energy_err_sq
        if state.iter == 0:
            initial_err = natural
        bound = (rate ** state.iter) * initial_err
        rec = TraceRecord(state.iter, err_sq, energy_err_sq, residual_sq, bound)
        trace.append(rec)
        err_history.append(natural)
        return rec

    rec = record()
    step = rk_step if method == Method.RK else rcd_step
    for t in range(1, config.max_iters + 1):
        idx = sampler.draw(state.rng)
        step(state, X, y, idx)
        if method == Method.RCD and state.iter % RESIDUAL_REFRESH_EVERY == 0:
            state.residual = y - X @ state.beta
        if t % every == 0 or t == config.max_iters:
            rec = record()
            if consistent and rec.residual_sq <= tol_sq:
                break
            if problem.regime == Regime.INCONSISTENT and _plateaued(err_history):
                break
    return trace
