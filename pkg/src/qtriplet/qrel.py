"""Relaxation index q_rel from the decay of the volatility autocorrelation."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import FitError
from .linearize import SweepResult, lnq_matrix, q_grid, sweep
from .qcore import QValue

NOISE_FLOOR = 0.02
MIN_LAGS = 5
MIN_R_SQUARED = 0.5


@dataclass(frozen=True)
class CorrelationFunction:
    lags: np.ndarray
    values: np.ndarray
    mean_subtracted: bool = False


@dataclass(frozen=True)
class QRelFit:
    q: QValue
    rate: float
    lags_used: int
    sweep: SweepResult


def autocorrelation(v, max_lag: int, mean_subtracted: bool = False,
                    include_zero: bool = False) -> CorrelationFunction:
    """C(tau) = sum_t v[t+tau] v[t] / sum_t v[t]^2 for tau = 1..max_lag.

    The numerator runs over the N - tau available pairs and the denominator
    over all N terms, so a constant series gives (N - tau)/N. No mean is
    removed unless ``mean_subtracted`` is set.
    """
    v = np.asarray(v, dtype=float)
    n = v.size
    if max_lag < 1:
        raise ValueError("max_lag must be >= 1")
    if n < 4 * max_lag:
        raise FitError(f"series of length {n} too short for max_lag {max_lag} (need {4 * max_lag})")
    if mean_subtracted:
        v = v - v.mean()
    denom = float(v @ v)
    if denom == 0:
        raise FitError("autocorrelation undefined for an all-zero series")
    nfft = 1 << int(np.ceil(np.log2(2 * n)))
    spec = np.fft.rfft(v, nfft)
    acov = np.fft.irfft(spec * np.conj(spec), nfft)[: max_lag + 1]
    values = acov / denom
    values[0] = 1.0
    lags = np.arange(max_lag + 1)
    if not include_zero:
        lags, values = lags[1:], values[1:]
    return CorrelationFunction(lags, values, mean_subtracted)


def usable_lags(c: CorrelationFunction, floor: float = NOISE_FLOOR,
                max_lag: Optional[int] = None) -> np.ndarray:
    """Mask of lags before the first one at or below ``floor`` (and within ``max_lag``)."""
    keep = c.lags >= 1
    if max_lag is not None:
        keep &= c.lags <= max_lag
    below = np.nonzero(keep & (c.values <= floor))[0]
    if below.size:
        keep &= np.arange(c.lags.size) < below[0]
    return keep & (c.values > 0)


def fit_q_rel(c: CorrelationFunction, grid=(1.01, 4.0, 0.01), floor: float = NOISE_FLOOR,
              min_lags: int = MIN_LAGS, refine: bool = True) -> QRelFit:
    """Select q linearizing ln_q C(tau) = -tau/tau0 through the origin."""
    mask = usable_lags(c, floor)
    if not mask.any():
        raise FitError("no usable lags (C(tau) <= floor everywhere)")
    if mask.sum() < min_lags:
        raise FitError(f"only {int(mask.sum())} usable lags, need {min_lags}")
    x = c.lags[mask].astype(float)
    res = sweep(x, c.values[mask], q_grid(*grid), refine=refine)
    if not res.r_squared >= MIN_R_SQUARED:
        raise FitError(f"best R^2 {res.r_squared:.3f} below {MIN_R_SQUARED}; no q-exponential decay")
    if not -res.slope > 0:
        raise FitError("autocorrelation does not decay")
    return QRelFit(QValue(res.q, 0.0, min(res.r_squared, 1.0)), -res.slope, int(mask.sum()), res)


def default_max_lag(n: int) -> int:
    return max(1, n // 10)


def block_resample(v: np.ndarray, block: int, rng: np.random.Generator) -> np.ndarray:
    """Concatenate non-overlapping blocks drawn with replacement, trimmed to len(v)."""
    n_blocks = v.size // block
    if n_blocks < 2:
        return v[rng.integers(0, v.size, v.size)]
    blocks = v[: n_blocks * block].reshape(n_blocks, block)
    picks = rng.integers(0, n_blocks, int(np.ceil(v.size / block)))
    return blocks[picks].ravel()[: v.size]


def estimate_q_rel(v, max_lag: Optional[int] = None, grid=(1.01, 4.0, 0.01),
                   floor: float = NOISE_FLOOR, min_lags: int = MIN_LAGS,
                   mean_subtracted: bool = False, n_boot: int = 100, block: int = 50,
                   seed: int = 0, refine: bool = True) -> tuple[QRelFit, CorrelationFunction]:
    """Fit q_rel; the uncertainty is the std of refits over block-bootstrap resamples."""
    v = np.asarray(v, dtype=float)
    lag = default_max_lag(v.size) if max_lag is None else max_lag
    c = autocorrelation(v, lag, mean_subtracted)
    fit = fit_q_rel(c, grid, floor, min_lags, refine)
    err = 0.0
    if n_boot > 0:
        rng = np.random.Generator(np.random.Philox(seed))
        boot = []
        for _ in range(n_boot):
            sample = block_resample(v, block, rng)
            try:
                cb = autocorrelation(sample, lag, mean_subtracted)
                boot.append(fit_q_rel(cb, grid, floor, min_lags, refine).q.value)
            except FitError:
                continue
        if len(boot) >= 2:
            err = float(np.std(boot, ddof=1))
    return QRelFit(QValue(fit.q.value, err, fit.q.r_squared), fit.rate, fit.lags_used, fit.sweep), c


def linearized_curve(c: CorrelationFunction, q: float, floor: float = NOISE_FLOOR):
    """Points (tau, ln_q C(tau)) over the usable lags."""
    mask = usable_lags(c, floor)
    return c.lags[mask].astype(float), lnq_matrix(c.values[mask], np.array([q]))[0]
