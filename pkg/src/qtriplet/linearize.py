"""Grid sweep over q selecting the deformation that best linearizes ln_q(y) against x.

Both the stationary and relaxation estimators reduce to this: for a model
y = e_q(-b x), ln_q(y) = -b x is exactly linear through the origin, so the
q maximizing R^2 of a through-origin least-squares line is selected.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .qcore import Q_ONE_TOL


def q_grid(lo: float, hi: float, step: float) -> np.ndarray:
    if not (step > 0 and hi >= lo):
        raise ValueError(f"invalid q grid ({lo}, {hi}, {step})")
    n = int(np.floor((hi - lo) / step + 1e-9)) + 1
    # rounded so that grid points print and compare exactly (1.34, not 1.3400000000000003)
    return np.round(lo + step * np.arange(n), 10)


def lnq_matrix(values: np.ndarray, qs: np.ndarray) -> np.ndarray:
    """ln_q(values) for every q in ``qs``; rows index q."""
    logv = np.log(np.asarray(values, dtype=float))[None, :]
    one_minus_q = (1.0 - np.asarray(qs, dtype=float))[:, None]
    near_one = np.abs(one_minus_q) <= Q_ONE_TOL
    safe = np.where(near_one, 1.0, one_minus_q)
    with np.errstate(over="ignore"):
        out = np.expm1(safe * logv) / safe
    return np.where(near_one, logv, out)


def origin_fit(x: np.ndarray, ys: np.ndarray):
    """Through-origin OLS of each row of ``ys`` on ``x``.

    Returns (slopes, r_squared). R^2 is the usual 1 - SS_res/SS_tot with
    SS_tot taken about the mean, so a flat or curved cloud scores low.
    """
    ys = np.atleast_2d(ys)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        slopes = ys @ x / (x @ x)
        resid = ys - slopes[:, None] * x[None, :]
        ss_res = np.sum(resid ** 2, axis=1)
        ss_tot = np.sum((ys - ys.mean(axis=1, keepdims=True)) ** 2, axis=1)
        r2 = 1.0 - ss_res / ss_tot
    r2 = np.where((ss_tot > 0) & np.isfinite(r2), r2, -np.inf)
    return slopes, r2


@dataclass(frozen=True)
class SweepResult:
    q: float
    slope: float
    r_squared: float
    grid: np.ndarray
    grid_r_squared: np.ndarray

    @property
    def grid_best(self) -> float:
        return float(self.grid[int(np.argmax(self.grid_r_squared))])


def _score(x, values, q):
    s, r2 = origin_fit(x, lnq_matrix(values, np.array([q])))
    return float(s[0]), float(r2[0])


def sweep(x: np.ndarray, values: np.ndarray, grid: np.ndarray, refine: bool = True) -> SweepResult:
    """Select q on ``grid`` maximizing R^2, then refine within one grid step."""
    slopes, r2 = origin_fit(x, lnq_matrix(values, grid))
    i = int(np.argmax(r2))
    q_best, slope, r2_best = float(grid[i]), float(slopes[i]), float(r2[i])
    if refine and len(grid) > 1 and np.isfinite(r2_best):
        step = float(grid[1] - grid[0])
        lo = max(float(grid[0]), q_best - step)
        hi = min(float(grid[-1]), q_best + step)
        res = minimize_scalar(lambda q: -_score(x, values, q)[1], bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-5})
        # reported to 3 decimals; keep the grid point unless the rounded value beats it
        q_ref = round(float(res.x), 3)
        s_ref, r2_ref = _score(x, values, q_ref)
        if r2_ref > r2_best:
            q_best, slope, r2_best = q_ref, s_ref, r2_ref
    return SweepResult(q_best, slope, r2_best, grid, r2)
