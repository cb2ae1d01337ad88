"""Serializable analysis reports, triplet tables and plot-curve export."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .linearize import lnq_matrix
from .qcore import QTriplet, QValue, is_nonextensive, q_exponential
from .triplets import SeriesAnalysis

SCHEMA_VERSION = 1
TABLE_HEADER = ["market", "q_sens", "q_sens_err", "q_stat", "q_stat_err", "q_rel", "q_rel_err", "nonextensive"]


@dataclass
class AnalysisReport:
    label: str
    triplet: Optional[QTriplet]
    failure: Optional[dict] = None
    diagnostics: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    version: str = __version__
    schema_version: int = SCHEMA_VERSION

    @property
    def ok(self) -> bool:
        return self.triplet is not None

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "version": self.version,
            "label": self.label,
            "triplet": None if self.triplet is None else self.triplet.to_dict(),
            "nonextensive": None if self.triplet is None else is_nonextensive(self.triplet),
            "failure": self.failure,
            "diagnostics": self.diagnostics,
            "config": self.config,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {d.get('schema_version')!r}")
        t = d.get("triplet")
        return cls(d["label"], None if t is None else QTriplet.from_dict(t, d["label"]),
                   d.get("failure"), d.get("diagnostics", {}), d.get("config", {}),
                   d.get("version", ""), d["schema_version"])

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls.from_dict(json.loads(text))


def _f(x):
    return None if x is None else float(x)


def build_report(a: SeriesAnalysis, extra: Optional[dict] = None) -> AnalysisReport:
    diag: dict = {}
    if extra:
        diag["input"] = extra
    if a.qstat is not None:
        diag["qstat"] = {
            "q": a.qstat.q.value, "uncertainty": a.qstat.q.uncertainty,
            "r_squared": a.qstat.q.r_squared, "beta": a.qstat.beta,
            "regression_points": a.qstat.regression_points,
            "bins": int(a.pdf.centers.size), "bin_width": a.pdf.bin_width,
            "n_samples": a.pdf.n_samples, "n_dropped": a.pdf.n_dropped,
        }
    if a.qrel is not None:
        diag["qrel"] = {
            "q": a.qrel.q.value, "uncertainty": a.qrel.q.uncertainty,
            "r_squared": a.qrel.q.r_squared, "rate": a.qrel.rate,
            "lags_used": a.qrel.lags_used, "max_lag": int(a.acf.lags[-1]),
            "mean_subtracted": a.acf.mean_subtracted,
        }
    if a.mfdfa is not None:
        m = a.mfdfa
        sp = m.spectrum
        diag["mfdfa"] = {
            "alpha_min": sp.alpha_min, "alpha_0": sp.alpha_0, "alpha_max": sp.alpha_max,
            "width": sp.width, "alpha_min_err": sp.alpha_min_err, "alpha_max_err": sp.alpha_max_err,
            "poly_degree": sp.poly_degree, "q_sens": m.q_sens.value, "q_sens_err": m.q_sens.uncertainty,
            "scales": [int(m.surface.scales[0]), int(m.surface.scales[-1]), int(m.surface.scales.size)],
            "moments": [float(m.surface.moments[0]), float(m.surface.moments[-1]), int(m.surface.moments.size)],
            "h": {f"{e:g}": float(h) for e, h in zip(m.hurst.moments, m.hurst.h)},
            "hurst_low_r2": m.hurst.flagged, "variance_floored": m.surface.floored,
        }
    if a.errors:
        diag["errors"] = dict(a.errors)
    failure = None if a.failure is None else {"stage": a.failure.stage, "message": a.failure.message}
    return AnalysisReport(a.label, a.triplet, failure, diag, a.config.to_dict())


# --- triplet tables -------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def triplet_table(triplets: Sequence[QTriplet]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_HEADER)
    for t in triplets:
        w.writerow([t.label, _fmt(t.q_sens.value), _fmt(t.q_sens.uncertainty),
                    _fmt(t.q_stat.value), _fmt(t.q_stat.uncertainty),
                    _fmt(t.q_rel.value), _fmt(t.q_rel.uncertainty), int(is_nonextensive(t))])
    return buf.getvalue()


def read_triplet_table(path) -> list:
    return parse_triplet_table(Path(path).read_text(encoding="utf-8"))


def parse_triplet_table(text: str) -> list:
    """Triplets from CSV text with at least the value/error columns of TABLE_HEADER."""
    rows = csv.DictReader(io.StringIO(text))
    out = []
    for row in rows:
        out.append(QTriplet(QValue(float(row["q_sens"]), float(row["q_sens_err"])),
                            QValue(float(row["q_stat"]), float(row["q_stat_err"])),
                            QValue(float(row["q_rel"]), float(row["q_rel_err"])),
                            row["market"]))
    return out


def reference_triplets() -> list:
    """Bundled reference triplets of 34 stock indices (2010-2018)."""
    return parse_triplet_table(resources.files("qtriplet").joinpath("data/market_triplets.csv").read_text())


def reference_nonextensive_labels() -> set:
    text = resources.files("qtriplet").joinpath("data/market_triplets.csv").read_text()
    return {r["market"] for r in csv.DictReader(io.StringIO(text)) if r["reported_nonextensive"] == "1"}


def matrix_csv(labels: Sequence[str], d: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["market", *labels])
    for lab, row in zip(labels, d):
        w.writerow([lab, *(_fmt(x) for x in row)])
    return buf.getvalue()


# --- plot curves ----------------------------------------------------------

def curve_tables(a: SeriesAnalysis) -> dict:
    """Plain numeric point sets behind the fit plots, keyed by file stem."""
    out = {}
    if a.qstat is not None:
        from .qstat import linearization_points
        q = a.qstat.q.value
        x, y = linearization_points(a.pdf, a.config.fold)
        out["qstat_linearization"] = (["r2", "lnq_p"], np.column_stack([x, lnq_matrix(y, np.array([q]))[0]]))
        slope_g = float(np.sum(x * np.log(y)) / np.sum(x * x))
        r = a.pdf.centers
        dens = a.pdf.densities
        p0 = dens[len(dens) // 2] if len(dens) % 2 else dens.max()
        qg = p0 * np.asarray(q_exponential(-a.qstat.beta * r * r, q))
        gauss = p0 * np.exp(slope_g * r * r)
        out["qstat_pdf"] = (["r", "p", "q_gaussian", "gaussian"], np.column_stack([r, dens, qg, gauss]))
    if a.qrel is not None:
        from .qrel import usable_lags
        c = a.acf
        q = a.qrel.q.value
        mask = usable_lags(c, a.config.lag_floor)
        tau = c.lags[mask].astype(float)
        out["qrel_linearization"] = (["tau", "lnq_c"], np.column_stack([tau, lnq_matrix(c.values[mask], np.array([q]))[0]]))
        rate_e = -float(np.sum(tau * np.log(c.values[mask])) / np.sum(tau * tau))
        lags = c.lags.astype(float)
        out["qrel_acf"] = (["tau", "c", "q_exponential", "exponential"],
                           np.column_stack([lags, c.values, q_exponential(-a.qrel.rate * lags, q),
                                            np.exp(-rate_e * lags)]))
    if a.mfdfa is not None:
        m = a.mfdfa
        ls = np.log(m.surface.scales.astype(float))
        rows = [(e, s, f) for i, e in enumerate(m.surface.moments)
                for s, f in zip(ls, np.log(m.surface.values[i]))]
        out["mfdfa_fluctuation"] = (["eta", "ln_s", "ln_f"], np.array(rows))
        sp = m.spectrum
        fit = np.polyval(sp.poly_coeffs, sp.alphas) if sp.poly_coeffs is not None else np.full_like(sp.alphas, np.nan)
        out["mfdfa_spectrum"] = (["eta", "alpha", "f", "poly_fit"],
                                 np.column_stack([m.hurst.moments, sp.alphas, sp.f_values, fit]))
    return out


def write_curves(a: SeriesAnalysis, directory) -> list:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for stem, (header, data) in curve_tables(a).items():
        path = directory / f"{a.label}_{stem}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(",".join(header) + "\n")
            for row in np.atleast_2d(data):
                fh.write(",".join(repr(float(v)) for v in row) + "\n")
        written.append(path)
    return written
