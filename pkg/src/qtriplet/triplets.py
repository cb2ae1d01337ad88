"""Triplet assembly, pairwise distances and spectral block clustering."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from sklearn.cluster import KMeans

from .config import AnalysisConfig
from .errors import FitError, StageError
from .ingest import VolatilitySeries, volatility_increments
from .mfdfa import MFDFAResult, default_moments, default_scales, estimate_q_sens
from .qcore import QTriplet, triplet_distance
from .qrel import CorrelationFunction, QRelFit, estimate_q_rel
from .qstat import EmpiricalPDF, QStatFit, estimate_q_stat

STAGES = ("ingest-minimum-length", "qstat", "qrel", "mfdfa")


@dataclass
class SeriesAnalysis:
    """Everything one pipeline run produced; ``triplet`` is None on failure."""

    label: str
    config: AnalysisConfig
    triplet: Optional[QTriplet] = None
    failure: Optional[StageError] = None
    qstat: Optional[QStatFit] = None
    pdf: Optional[EmpiricalPDF] = None
    qrel: Optional[QRelFit] = None
    acf: Optional[CorrelationFunction] = None
    mfdfa: Optional[MFDFAResult] = None
    errors: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.triplet is not None


def moment_grid(cfg: AnalysisConfig) -> np.ndarray:
    lo, hi, step = cfg.eta_range
    eta = np.round(np.arange(lo, hi + step / 2, step), 10)
    return eta if np.any(eta == 0) else default_moments()


def scale_grid(n: int, cfg: AnalysisConfig) -> np.ndarray:
    if cfg.scale_grid == "dyadic":
        k = np.arange(int(math.ceil(math.log2(cfg.min_scale))), int(math.floor(math.log2(n // 4))) + 1)
        return 2 ** k
    if cfg.scale_grid != "log":
        raise ValueError(f"unknown scale grid {cfg.scale_grid!r}")
    return default_scales(n, cfg.n_scales, cfg.min_scale)


def analyze_series(v: VolatilitySeries, cfg: AnalysisConfig = AnalysisConfig()) -> SeriesAnalysis:
    """Run the three estimators on a volatility series.

    Every estimator runs even if an earlier one fails, so diagnostics are
    as complete as possible; the first failure (in stage order) is reported
    and no triplet is assembled.
    """
    out = SeriesAnalysis(v.label, cfg)
    x = np.asarray(v.values, dtype=float)
    if x.size < cfg.min_length:
        out.failure = StageError("ingest-minimum-length",
                                 f"{x.size} volatilities, need at least {cfg.min_length}")
        out.errors[out.failure.stage] = out.failure.message
        return out
    try:
        inc = volatility_increments(v).values
        out.qstat, out.pdf = estimate_q_stat(inc, cfg.bins, cfg.range_iqr, cfg.qstat_grid,
                                             cfg.qstat_boot, cfg.seed, cfg.refine, cfg.fold)
    except FitError as e:
        out.errors["qstat"] = str(e)
    try:
        out.qrel, out.acf = estimate_q_rel(x, cfg.max_lag, cfg.qrel_grid, cfg.lag_floor, cfg.min_lags,
                                           cfg.mean_subtracted, cfg.qrel_boot, cfg.block,
                                           cfg.seed, cfg.refine)
    except FitError as e:
        out.errors["qrel"] = str(e)
    try:
        out.mfdfa = estimate_q_sens(x, scale_grid(x.size, cfg), moment_grid(cfg), cfg.detrend_order,
                                    cfg.poly_degree, cfg.min_length)
    except FitError as e:
        out.errors["mfdfa"] = str(e)
    for stage in STAGES:
        if stage in out.errors:
            out.failure = StageError(stage, out.errors[stage])
            return out
    out.triplet = QTriplet(out.mfdfa.q_sens, out.qstat.q, out.qrel.q, v.label)
    return out


@dataclass(frozen=True)
class DistanceMatrix:
    labels: tuple
    d: np.ndarray

    def __post_init__(self):
        d = self.d
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] != len(self.labels):
            raise ValueError("distance matrix must be square and match the labels")
        if not np.array_equal(d, d.T):
            raise ValueError("distance matrix must be symmetric")
        if np.any(d < 0):
            raise ValueError("distances must be nonnegative")

    def entry(self, a: str, b: str) -> float:
        return float(self.d[self.labels.index(a), self.labels.index(b)])


def distance_matrix(ts: Sequence[QTriplet]) -> DistanceMatrix:
    if len(ts) < 2:
        raise ValueError("need at least 2 triplets")
    labels = tuple(t.label for t in ts)
    if len(set(labels)) != len(labels):
        raise ValueError("duplicate triplet labels")
    n = len(ts)
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = triplet_distance(ts[i], ts[j])
    return DistanceMatrix(labels, d)


@dataclass(frozen=True)
class ClusterAssignment:
    labels: tuple
    cluster_of: dict
    k: int

    def members(self, c: int) -> list:
        return [lab for lab in self.labels if self.cluster_of[lab] == c]

    def same_cluster(self, names: Sequence[str]) -> bool:
        return len({self.cluster_of[n] for n in names}) == 1


def farthest_point_seeds(z: np.ndarray, k: int, start: int) -> np.ndarray:
    idx = [start]
    dmin = np.sum((z - z[start]) ** 2, axis=1)
    for _ in range(1, k):
        nxt = int(np.argmax(dmin))  # ties resolve to the lowest index
        idx.append(nxt)
        dmin = np.minimum(dmin, np.sum((z - z[nxt]) ** 2, axis=1))
    return z[idx]


def spectral_embedding(a: np.ndarray, k: int) -> np.ndarray:
    """Rows of R^-1/2 [u_2 .. u_{l+1}], l = ceil(log2 k), from the SVD of R^-1/2 A C^-1/2."""
    r = a.sum(axis=1)
    c = a.sum(axis=0)
    if np.any(r <= 0) or np.any(c <= 0):
        raise FitError("similarity matrix has an all-zero row or column")
    an = a / np.sqrt(r)[:, None] / np.sqrt(c)[None, :]
    u, _, _ = np.linalg.svd(an)
    n_vec = int(math.ceil(math.log2(k)))
    vecs = u[:, 1:1 + n_vec]
    # fix the SVD sign ambiguity so output does not depend on LAPACK internals
    signs = np.sign(vecs[np.argmax(np.abs(vecs), axis=0), np.arange(vecs.shape[1])])
    return vecs * np.where(signs == 0, 1.0, signs) / np.sqrt(r)[:, None]


def spectral_block_cluster(dm, k: int = 4, restarts: int = 20) -> ClusterAssignment:
    """Co-cluster a distance matrix via the singular vectors of its similarity.

    Similarity is max(D) - D, normalized by row and column sums. The row
    embedding is partitioned by k-means and the lowest inertia over the
    restarts wins (earliest restart on ties). Restart ``i`` starts its farthest-point traversal at
    the row ranked ``i`` by distance from the embedding centroid, which keeps
    the result independent of row order. ``dm`` may be a DistanceMatrix or a
    square array.
    """
    if isinstance(dm, DistanceMatrix):
        labels, d = dm.labels, dm.d
    else:
        d = np.asarray(dm, dtype=float)
        labels = tuple(str(i) for i in range(d.shape[0]))
    n = d.shape[0]
    if not 2 <= k <= n:
        raise ValueError(f"k must lie in [2, {n}], got {k}")
    off = d[~np.eye(n, dtype=bool)]
    if np.ptp(off) == 0:
        raise FitError("all pairwise distances are equal; similarity is degenerate")
    z = spectral_embedding(d.max() - d, k)
    spread = np.sum((z - z.mean(axis=0)) ** 2, axis=1)
    starts = np.lexsort((np.arange(n), -np.round(spread, 12)))
    best, best_inertia = None, math.inf
    for i in range(restarts):
        seeds = farthest_point_seeds(z, k, int(starts[i % n]))
        km = KMeans(n_clusters=k, init=seeds, n_init=1, max_iter=300, tol=0.0).fit(z)
        if km.inertia_ < best_inertia - 1e-12:
            best, best_inertia = km.labels_, km.inertia_
    assign = _canonical(best)
    if len(set(assign)) != k:
        raise FitError(f"k-means produced {len(set(assign))} non-empty clusters, wanted {k}")
    return ClusterAssignment(tuple(labels), {lab: int(c) for lab, c in zip(labels, assign)}, k)


def _canonical(assign) -> list:
    """Relabel clusters in order of first appearance."""
    mapping = {}
    return [mapping.setdefault(int(a), len(mapping)) for a in assign]


def mean_within_cluster_distance(dm: DistanceMatrix, ca: ClusterAssignment) -> float:
    idx = np.array([ca.cluster_of[lab] for lab in dm.labels])
    same = (idx[:, None] == idx[None, :]) & ~np.eye(len(idx), dtype=bool)
    return float(dm.d[same].mean()) if same.any() else 0.0


def mean_distance(dm: DistanceMatrix) -> float:
    n = dm.d.shape[0]
    return float(dm.d[~np.eye(n, dtype=bool)].mean())


def is_nonextensive_with_uncertainty(t: QTriplet) -> bool:
    """The ordering q_sens <= 1 <= q_stat <= q_rel with every side widened by its error."""
    s, st, r = t.q_sens, t.q_stat, t.q_rel
    return (s.value + s.uncertainty <= 1.0
            and 1.0 <= st.value - st.uncertainty
            and st.value + st.uncertainty <= r.value - r.uncertainty)
