"""Multifractal detrended fluctuation analysis and the sensitivity index q_sens.

Moment orders are called ``eta`` throughout to keep them apart from the
entropic index q.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import FitError
from .qcore import QValue

log = logging.getLogger(__name__)

MIN_LENGTH = 256
MIN_SCALE = 10
MIN_SCALES = 8
VARIANCE_FLOOR = 1e-30
MONOTONE_TOL = 0.02
R2_FLAG = 0.9


def default_moments() -> np.ndarray:
    return np.round(np.arange(-5.0, 5.0 + 1e-9, 0.25), 10)


def default_scales(n: int, count: int = 20, smin: int = MIN_SCALE) -> np.ndarray:
    """``count`` log-spaced integer scales in [smin, n/4] (duplicates removed)."""
    smax = n // 4
    if smax < smin:
        raise FitError(f"series of length {n} leaves no scale range above {smin}")
    return np.unique(np.round(np.geomspace(smin, smax, count)).astype(int))


@dataclass(frozen=True)
class FluctuationSurface:
    scales: np.ndarray
    moments: np.ndarray
    values: np.ndarray  # shape (len(moments), len(scales))
    floored: bool = False


@dataclass(frozen=True)
class HurstCurve:
    moments: np.ndarray
    h: np.ndarray
    fit_r2: np.ndarray

    @property
    def flagged(self) -> bool:
        return bool(np.any(self.fit_r2 < R2_FLAG))


@dataclass(frozen=True)
class MultifractalSpectrum:
    alphas: np.ndarray
    f_values: np.ndarray
    alpha_min: float = math.nan
    alpha_max: float = math.nan
    alpha_0: float = math.nan
    alpha_min_err: float = 0.0
    alpha_max_err: float = 0.0
    poly_coeffs: Optional[np.ndarray] = None
    poly_degree: int = 0

    @property
    def width(self) -> float:
        return self.alpha_max - self.alpha_min


def _segment_variances(profile: np.ndarray, s: int, order: int) -> np.ndarray:
    """Detrended variances of the 2 floor(N/s) segments taken from both ends."""
    n = profile.size
    ns = n // s
    front = profile[: ns * s].reshape(ns, s)
    back = profile[n - ns * s:].reshape(ns, s)
    segs = np.vstack([front, back]).T  # (s, 2 ns)
    t = np.arange(s, dtype=float)
    t = (t - t.mean()) / s
    vander = np.vander(t, order + 1)
    coef, *_ = np.linalg.lstsq(vander, segs, rcond=None)
    resid = segs - vander @ coef
    return np.mean(resid ** 2, axis=0)


def fluctuation_surface(v, scales: Optional[Sequence[int]] = None,
                        moments: Optional[Sequence[float]] = None,
                        detrend_order: int = 2, min_length: int = MIN_LENGTH) -> FluctuationSurface:
    """F_eta(s) for every moment eta and scale s.

    Segment variances are combined by the eta/2 power mean; eta = 0 uses the
    logarithmic average exp(mean(log(F^2))/2).
    """
    v = np.asarray(v, dtype=float)
    n = v.size
    if n < min_length:
        raise FitError(f"MFDFA needs at least {min_length} samples, got {n}")
    if detrend_order < 1:
        raise ValueError("detrend_order must be >= 1")
    if not np.all(np.isfinite(v)):
        raise FitError("series contains non-finite values")
    if np.ptp(v) == 0:
        raise FitError("constant series has zero fluctuation at every scale")
    scales = default_scales(n) if scales is None else np.unique(np.asarray(scales, dtype=int))
    moments = default_moments() if moments is None else np.asarray(moments, dtype=float)
    if scales.size < MIN_SCALES:
        raise FitError(f"scale grid has {scales.size} points, need {MIN_SCALES}")
    if scales[0] < MIN_SCALE or scales[-1] > n // 4:
        raise FitError(f"scales must lie within [{MIN_SCALE}, {n // 4}]")

    profile = np.cumsum(v - v.mean())
    values = np.empty((moments.size, scales.size))
    floored = False
    for j, s in enumerate(scales):
        var = _segment_variances(profile, int(s), detrend_order)
        # relative threshold: exact zeros come out of lstsq as rounding noise
        scale2 = max(float(np.max(np.abs(profile))) ** 2, VARIANCE_FLOOR)
        if np.all(var <= 1e-24 * scale2):
            raise FitError(f"zero fluctuation at scale {s}: series is (piecewise) polynomial")
        if np.any(var < VARIANCE_FLOOR):
            floored = True
            var = np.maximum(var, VARIANCE_FLOOR)
        logvar = np.log(var)
        for i, eta in enumerate(moments):
            if eta == 0:
                values[i, j] = math.exp(0.5 * logvar.mean())
            else:
                # power mean computed in log space to avoid overflow at large |eta|
                a = 0.5 * eta * logvar
                amax = a.max()
                values[i, j] = math.exp((amax + math.log(np.mean(np.exp(a - amax)))) / eta)
    if floored:
        log.warning("segment variances floored at %g; negative moments may be unreliable", VARIANCE_FLOOR)
    return FluctuationSurface(scales, moments, values, floored)


def generalized_hurst(surf: FluctuationSurface) -> HurstCurve:
    """OLS slope of ln F_eta(s) against ln s for every eta; low R^2 is flagged."""
    x = np.log(surf.scales.astype(float))
    y = np.log(surf.values)
    xc = x - x.mean()
    yc = y - y.mean(axis=1, keepdims=True)
    slope = yc @ xc / (xc @ xc)
    ss_res = np.sum((yc - slope[:, None] * xc[None, :]) ** 2, axis=1)
    ss_tot = np.sum(yc ** 2, axis=1)
    r2 = np.where(ss_tot > 0, 1.0 - ss_res / np.where(ss_tot > 0, ss_tot, 1.0), 1.0)
    curve = HurstCurve(surf.moments.copy(), slope, r2)
    if curve.flagged:
        log.warning("generalized Hurst fit R^2 below %.2f for some moments", R2_FLAG)
    return curve


def legendre_spectrum(hc: HurstCurve, monotone_tol: float = MONOTONE_TOL) -> MultifractalSpectrum:
    """alpha = h + eta h', f = eta (alpha - h) + 1, with h' by finite differences."""
    eta, h = hc.moments, hc.h
    if eta.size < 9:
        raise FitError("Legendre transform needs at least 9 moments")
    if not np.any(eta == 0):
        raise FitError("moment grid must contain eta = 0")
    hprime = np.gradient(h, eta, edge_order=1)
    alpha = h + eta * hprime
    f = eta * (alpha - h) + 1.0
    # alpha must decrease with eta
    rises = np.diff(alpha)
    if np.any(rises > monotone_tol):
        raise FitError(f"alpha(eta) not monotone (rise {rises.max():.3f} > {monotone_tol}); derivative unreliable")
    return MultifractalSpectrum(alpha, f)


def _poly_extrema(alpha, f, degree):
    """Fit f(alpha) and locate its maximum and the zero crossings around it."""
    lo, hi = float(alpha.min()), float(alpha.max())
    coeffs = np.polyfit(alpha, f, degree)
    # maximum over the sampled range: candidates are critical points and endpoints
    crit = np.roots(np.polyder(coeffs))
    cand = [lo, hi] + [c.real for c in crit if abs(c.imag) < 1e-9 and lo <= c.real <= hi]
    a0 = max(cand, key=lambda a: np.polyval(coeffs, a))
    if np.polyval(coeffs, a0) <= 0:
        return None
    roots = np.roots(coeffs)
    real = np.sort([r.real for r in roots if abs(r.imag) < 1e-9])
    below = real[real < a0]
    above = real[real > a0]
    if below.size == 0 or above.size == 0:
        return None
    return float(below.max()), float(above.min()), float(a0), coeffs


def spectrum_extrema(spec: MultifractalSpectrum, poly_degree: int = 4,
                     spread_degrees: Sequence[int] = (3, 4, 5)) -> MultifractalSpectrum:
    """Extrapolate a polynomial fit of f(alpha) to zero on both sides of its maximum.

    Falls back to a parabola if the requested degree has no root on one side.
    Uncertainties are the standard deviations of the roots over
    ``spread_degrees``.
    """
    alpha, f = np.asarray(spec.alphas), np.asarray(spec.f_values)
    if alpha.size < 9:
        raise FitError("spectrum extrema need at least 9 sampled points")
    if np.ptp(alpha) < 1e-12:
        raise FitError("degenerate (monofractal) spectrum: all alpha coincide")
    degree = poly_degree
    found = _poly_extrema(alpha, f, degree)
    if found is None and degree != 2:
        degree = 2
        found = _poly_extrema(alpha, f, degree)
    if found is None:
        raise FitError("polynomial fit of f(alpha) has no real root on one side of its maximum")
    a_min, a_max, a0, coeffs = found
    mins, maxs = [], []
    for d in spread_degrees:
        alt = _poly_extrema(alpha, f, d)
        if alt is not None:
            mins.append(alt[0])
            maxs.append(alt[1])
    err_min = float(np.std(mins)) if len(mins) >= 2 else 0.0
    err_max = float(np.std(maxs)) if len(maxs) >= 2 else 0.0
    return MultifractalSpectrum(alpha, f, a_min, a_max, a0, err_min, err_max, coeffs, degree)


def q_sens_from_extrema(alpha_min: float, alpha_max: float, alpha_min_err: float = 0.0,
                        alpha_max_err: float = 0.0, r_squared: Optional[float] = None) -> QValue:
    """q_sens from 1/(1 - q_sens) = 1/alpha_min - 1/alpha_max, with first-order error propagation."""
    if not 0 < alpha_min < alpha_max:
        raise FitError(f"need 0 < alpha_min < alpha_max, got ({alpha_min}, {alpha_max})")
    inv = 1.0 / alpha_min - 1.0 / alpha_max
    q = 1.0 - 1.0 / inv
    # dq/d(alpha_min) = -1/(inv^2 alpha_min^2), dq/d(alpha_max) = 1/(inv^2 alpha_max^2)
    err = math.hypot(alpha_min_err / alpha_min ** 2, alpha_max_err / alpha_max ** 2) / inv ** 2
    return QValue(q, err, r_squared)


def spectrum_fit_r2(spec: MultifractalSpectrum) -> Optional[float]:
    if spec.poly_coeffs is None:
        return None
    resid = spec.f_values - np.polyval(spec.poly_coeffs, spec.alphas)
    ss_tot = np.sum((spec.f_values - spec.f_values.mean()) ** 2)
    if ss_tot <= 0:
        return None
    return float(np.clip(1.0 - np.sum(resid ** 2) / ss_tot, 0.0, 1.0))


@dataclass(frozen=True)
class MFDFAResult:
    surface: FluctuationSurface
    hurst: HurstCurve
    spectrum: MultifractalSpectrum
    q_sens: QValue


def estimate_q_sens(v, scales=None, moments=None, detrend_order: int = 2,
                    poly_degree: int = 4, min_length: int = MIN_LENGTH) -> MFDFAResult:
    surf = fluctuation_surface(v, scales, moments, detrend_order, min_length)
    hc = generalized_hurst(surf)
    spec = spectrum_extrema(legendre_spectrum(hc), poly_degree)
    q = q_sens_from_extrema(spec.alpha_min, spec.alpha_max, spec.alpha_min_err,
                            spec.alpha_max_err, spectrum_fit_r2(spec))
    return MFDFAResult(surf, hc, spec, q)
