"""Matrix-free ridge regression solvers.

Two routes to beta_RR = (X^T X + lambda I)^-1 X^T y:

* rk_ridge: a row-action method on the dual system
  (X X^T + lambda I) alpha = y, keeping beta = X^T alpha up to date so
  each step costs O(p). It is exactly a coordinate-descent step on that
  positive-definite system.
* rcd_ridge: a column-action method on the primal normal equations
  (X^T X + lambda I) beta = X^T y, written in shrinkage form; each step
  costs O(n).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .sampling import RngState, build_sampler
from .solvers import (
    RESIDUAL_REFRESH_EVERY,
    ConvergenceTrace,
    RunConfig,
    TraceRecord,
    _plateaued,
)


@dataclass
class RidgeState:
    """Dual/primal pair for rk_ridge; beta = X^T alpha throughout when
    started from zeros."""

    alpha: np.ndarray
    beta: np.ndarray
    iter: int
    rng: RngState
    lam: float


@dataclass
class RcdRidgeState:
    """Primal iterate plus maintained residual r = y - X beta."""

    beta: np.ndarray
    residual: np.ndarray
    iter: int
    rng: RngState
    lam: float


def shrink(a: float, z: float) -> float:
    """Shrinkage S_a(z) = z / (1 + a)."""
    if a < 0.0:
        raise ValueError("shrinkage parameter must be nonnegative")
    return z / (1.0 + a)


def rk_ridge_step(state: RidgeState, X: np.ndarray, y: np.ndarray, row: int) -> RidgeState:
    """One dual row action; updates alpha[row] and beta by the same delta."""
    xr = X[row]
    delta = (y[row] - float(state.beta @ xr) - state.lam * state.alpha[row]) / (
        float(xr @ xr) + state.lam
    )
    state.alpha[row] += delta
    state.beta += delta * xr
    state.iter += 1
    return state


def rcd_ridge_step(state: RcdRidgeState, X: np.ndarray, y: np.ndarray, col: int) -> RcdRidgeState:
    """One primal coordinate action in shrinkage form; keeps r = y - X beta."""
    xc = X[:, col]
    nrm = float(xc @ xc)
    lam = state.lam
    new = (nrm * state.beta[col] + float(xc @ state.residual)) / (nrm + lam)
    diff = new - state.beta[col]
    state.beta[col] = new
    state.residual -= diff * xc
    state.iter += 1
    return state


def rk_ridge_weights(X: np.ndarray, lam: float) -> np.ndarray:
    """Row sampling weights ||X^i||^2 + lambda, precomputed in one pass."""
    return linalg.row_norms_sq(X) + lam


def rcd_ridge_weights(X: np.ndarray, lam: float, plain_norms: bool = False) -> np.ndarray:
    """Column sampling weights; ||X_j||^2 + lambda by default."""
    w = linalg.col_norms_sq(X)
    return w if plain_norms else w + lam


def _check_lambda(lam: float) -> None:
    if not lam > 0.0:
        raise ValueError("ridge solvers require lambda > 0; use the basic solvers instead")


def rk_ridge_run(
    X: np.ndarray,
    y: np.ndarray,
    lam: float,
    config: RunConfig,
    reference_beta: np.ndarray,
    alpha_star: np.ndarray,
    rate: float,
) -> ConvergenceTrace:
    """Run rk_ridge from zeros; trace errors against the oracle targets.

    err_sq is ||beta - beta_RR||^2; energy_err_sq is the dual error in
    the (X X^T + lambda I) norm, computed matrix-free as
    ||X^T v||^2 + lambda ||v||^2 for v = alpha - alpha_star.
    """
    _check_lambda(lam)
    n, p = X.shape
    sampler = build_sampler(rk_ridge_weights(X, lam))
    state = RidgeState(np.zeros(n), np.zeros(p), 0, RngState(config.seed), lam)
    every = config.checkpoint_every or n

    trace = ConvergenceTrace()
    err_history: list[float] = []
    initial = 0.0

    def record():
        nonlocal initial
        dbeta = state.beta - reference_beta
        v = state.alpha - alpha_star
        xtv = X.T @ v
        energy = float(xtv @ xtv) + lam * float(v @ v)
        res = y - X @ state.beta
        if state.iter == 0:
            initial = energy
        rec = TraceRecord(
            state.iter,
            float(dbeta @ dbeta),
            energy,
            float(res @ res),
            (rate ** state.iter) * initial,
        )
        trace.append(rec)
        err_history.append(energy)

    record()
    for t in range(1, config.max_iters + 1):
        rk_ridge_step(state, X, y, sampler.draw(state.rng))
        if t % every == 0 or t == config.max_iters:
            record()
            if _plateaued(err_history):
                break
    return trace


def rcd_ridge_run(
    X: np.ndarray,
    y: np.ndarray,
    lam: float,
    config: RunConfig,
    reference_beta: np.ndarray,
    rate: float,
    plain_norm_weights: bool = False,
) -> ConvergenceTrace:
    """Run rcd_ridge; energy_err_sq is the (Sigma + lambda I)-norm error
    ||X v||^2 + lambda ||v||^2 for v = beta - beta_RR."""
    _check_lambda(lam)
    n, p = X.shape
    sampler = build_sampler(rcd_ridge_weights(X, lam, plain_norm_weights))
    beta0 = np.zeros(p) if config.beta0 is None else config.beta0.astype(np.float64).copy()
    state = RcdRidgeState(beta0, y - X @ beta0, 0, RngState(config.seed), lam)
    every = config.checkpoint_every or p

    trace = ConvergenceTrace()
    err_history: list[float] = []
    initial = 0.0

    def record():
        nonlocal initial
        v = state.beta - reference_beta
        xv = X @ v
        energy = float(xv @ xv) + lam * float(v @ v)
        res = y - X @ state.beta
        if state.iter == 0:
            initial = energy
        rec = TraceRecord(
            state.iter,
            float(v @ v),
            energy,
            float(res @ res),
            (rate ** state.iter) * initial,
        )
        trace.append(rec)
        err_history.append(energy)

    record()
    for t in range(1, config.max_iters + 1):
        rcd_ridge_step(state, X, y, sampler.draw(state.rng))
        if state.iter % RESIDUAL_REFRESH_EVERY == 0:
            state.residual = y - X @ state.beta
        if t % every == 0 or t == config.max_iters:
            record()
            if _plateaued(err_history):
                break
    return trace
