"""Stationary index q_stat from the histogram of volatility increments.

The histogram is linearized as ln_q(p_i / p_0) against r_i^2, p_0 being the
density of the bin centred at zero. For an exact q-Gaussian this is the line
-beta r^2 through the origin, so the q with the highest R^2 is selected.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import FitError
from .linearize import SweepResult, lnq_matrix, q_grid, sweep
from .qcore import QValue

MIN_SAMPLES = 100
MIN_BINS, MAX_BINS = 41, 201
MIN_NONEMPTY_BINS = 8
MIN_R_SQUARED = 0.5


@dataclass(frozen=True)
class EmpiricalPDF:
    centers: np.ndarray
    densities: np.ndarray
    bin_width: float
    n_samples: int
    n_dropped: int = 0

    @property
    def counts(self) -> np.ndarray:
        return np.rint(self.densities * self.n_samples * self.bin_width)


@dataclass(frozen=True)
class QStatFit:
    q: QValue
    beta: float
    regression_points: int
    sweep: SweepResult


def freedman_diaconis_bins(d: np.ndarray, half_range: float) -> int:
    """Bins of Freedman-Diaconis width covering [-half_range, half_range], odd, in [41, 201]."""
    q75, q25 = np.percentile(d, [75, 25])
    width = 2.0 * (q75 - q25) / len(d) ** (1.0 / 3.0)
    n = int(np.ceil(2.0 * half_range / width)) if width > 0 else MIN_BINS
    return min(max(n, MIN_BINS), MAX_BINS) | 1


def build_histogram(d, bins: Union[int, str] = MIN_BINS,
                    range_iqr: Optional[float] = 3.0) -> EmpiricalPDF:
    """Density histogram on a symmetric range centred at zero.

    The half-range is ``range_iqr`` interquartile ranges, capped at max|d|;
    ``range_iqr=None`` uses max|d|. Samples outside are dropped and counted
    in ``n_dropped``; densities are normalized over the retained samples.
    ``bins="auto"`` picks the Freedman-Diaconis count for that range.
    """
    d = np.asarray(d, dtype=float)
    if d.size < MIN_SAMPLES:
        raise FitError(f"histogram needs at least {MIN_SAMPLES} samples, got {d.size}")
    if np.ptp(d) == 0:
        raise FitError("all increments are equal; histogram range is degenerate")
    half = float(np.max(np.abs(d)))
    if range_iqr is not None:
        q75, q25 = np.percentile(d, [75, 25])
        if q75 > q25:
            half = min(half, range_iqr * float(q75 - q25))
    if bins == "auto":
        n_bins = freedman_diaconis_bins(d, half)
    else:
        n_bins = int(bins)
        if n_bins < 3:
            raise ValueError("need at least 3 bins")
    edges = np.linspace(-half, half, n_bins + 1)
    inside = np.abs(d) <= half
    counts, _ = np.histogram(d[inside], bins=edges)
    width = float(edges[1] - edges[0])
    kept = int(counts.sum())
    centers = 0.5 * (edges[:-1] + edges[1:])
    return EmpiricalPDF(centers, counts / (kept * width), width, kept, int(d.size - kept))


def linearization_points(pdf: EmpiricalPDF, fold: bool = True):
    """(r^2, p/p_0) over nonempty bins.

    With ``fold`` the densities are averaged with their mirror images
    (p(r) + p(-r))/2 first; the q-Gaussian model is even, so this only
    removes noise. p_0 is the centre bin (the middle one for an odd count,
    else the mean of the two central bins).
    """
    dens = pdf.densities
    if fold:
        dens = 0.5 * (dens + dens[::-1])
    n = len(dens)
    p0 = dens[n // 2] if n % 2 else 0.5 * (dens[n // 2 - 1] + dens[n // 2])
    if not p0 > 0:
        raise FitError("central histogram bin is empty")
    mask = dens > 0
    return pdf.centers[mask] ** 2, dens[mask] / p0


def fit_q_stat(pdf: EmpiricalPDF, grid=(1.01, 2.99, 0.01), refine: bool = True,
               fold: bool = True) -> QStatFit:
    """Sweep q over ``grid`` and keep the value that best linearizes the histogram.

    The returned QValue carries no uncertainty; ``estimate_q_stat`` adds the
    bootstrap error.
    """
    x, y = linearization_points(pdf, fold)
    if x.size < MIN_NONEMPTY_BINS:
        raise FitError(f"only {x.size} nonempty bins, need {MIN_NONEMPTY_BINS}")
    res = sweep(x, y, q_grid(*grid), refine=refine)
    if not res.r_squared >= MIN_R_SQUARED:
        raise FitError(f"best R^2 {res.r_squared:.3f} below {MIN_R_SQUARED}; q-Gaussian fit is meaningless")
    if not -res.slope > 0:
        raise FitError("fitted beta is not positive")
    return QStatFit(QValue(res.q, 0.0, min(res.r_squared, 1.0)), -res.slope, int(x.size), res)


def estimate_q_stat(increments, bins: Union[int, str] = MIN_BINS, range_iqr: Optional[float] = 3.0,
                    grid=(1.01, 2.99, 0.01), n_boot: int = 100, seed: int = 0,
                    refine: bool = True, fold: bool = True) -> tuple[QStatFit, EmpiricalPDF]:
    """Fit q_stat and attach the bootstrap standard deviation as its uncertainty.

    Resamples are drawn i.i.d. from the increments, rebinned and refit over
    the full grid, in order. Resamples whose fit fails are skipped.
    """
    d = np.asarray(increments, dtype=float)
    pdf = build_histogram(d, bins, range_iqr)
    fit = fit_q_stat(pdf, grid, refine, fold)
    err = 0.0
    if n_boot > 0:
        rng = np.random.Generator(np.random.Philox(seed))
        boot = []
        for _ in range(n_boot):
            sample = d[rng.integers(0, d.size, d.size)]
            try:
                boot.append(fit_q_stat(build_histogram(sample, bins, range_iqr), grid, refine, fold).q.value)
            except FitError:
                continue
        if len(boot) >= 2:
            err = float(np.std(boot, ddof=1))
    q = QValue(fit.q.value, err, fit.q.r_squared)
    return QStatFit(q, fit.beta, fit.regression_points, fit.sweep), pdf


def linearized_curve(pdf: EmpiricalPDF, q: float, fold: bool = True):
    """Points (r^2, ln_q(p/p_0)) of the linearization plot."""
    x, y = linearization_points(pdf, fold)
    return x, lnq_matrix(y, np.array([q]))[0]
