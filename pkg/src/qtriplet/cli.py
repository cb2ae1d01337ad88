"""Command-line interface: ``qtriplet analyze | batch | distances | synth``.

Exit codes: 0 success, 1 input error, 2 analysis-stage failure.
"""
from __future__ import annotations

import argparse
import datetime as dt
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import fields
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .config import AnalysisConfig
from .errors import DomainError, FitError, ParseError
from .ingest import log_returns, parse_price_csv, volatility, weekdays, write_price_csv
from .qcore import is_nonextensive
from .report import (AnalysisReport, build_report, matrix_csv, read_triplet_table, triplet_table,
                     write_curves)
from .synth import (GENERATORS, SeedSpec, gen_binomial_cascade, gen_exp_correlated, gen_gaussian,
                    gen_q_gaussian)
from .triplets import (analyze_series, distance_matrix, mean_distance,
                       mean_within_cluster_distance, spectral_block_cluster)

EXIT_OK, EXIT_INPUT, EXIT_STAGE = 0, 1, 2
SYNTH_START = dt.date(2010, 1, 4)


def _err(msg: str) -> None:
    print(f"qtriplet: {msg}", file=sys.stderr)


# --- shared analysis flags ------------------------------------------------

def _bins(s: str):
    return s if s == "auto" else int(s)


def _opt_float(s: str):
    return None if s.lower() == "none" else float(s)


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    d = AnalysisConfig()
    g = p.add_argument_group("analysis parameters")
    g.add_argument("--seed", type=int, default=d.seed, help="bootstrap seed")
    g.add_argument("--min-length", type=int, default=d.min_length)
    g.add_argument("--qstat-grid", type=float, nargs=3, metavar=("LO", "HI", "STEP"), default=d.qstat_grid)
    g.add_argument("--bins", type=_bins, default=d.bins, help="histogram bins, or 'auto' (Freedman-Diaconis)")
    g.add_argument("--range-iqr", type=_opt_float, default=d.range_iqr,
                   help="histogram half-range in IQRs ('none' = full range)")
    g.add_argument("--no-fold", dest="fold", action="store_false", help="do not symmetrize the histogram")
    g.add_argument("--qstat-boot", type=int, default=d.qstat_boot)
    g.add_argument("--qrel-grid", type=float, nargs=3, metavar=("LO", "HI", "STEP"), default=d.qrel_grid)
    g.add_argument("--max-lag", type=int, default=d.max_lag)
    g.add_argument("--lag-floor", type=float, default=d.lag_floor)
    g.add_argument("--min-lags", type=int, default=d.min_lags)
    g.add_argument("--mean-subtracted", action="store_true", help="centre the series before the autocorrelation")
    g.add_argument("--qrel-boot", type=int, default=d.qrel_boot)
    g.add_argument("--block", type=int, default=d.block, help="bootstrap block length for q_rel")
    g.add_argument("--eta-range", type=float, nargs=3, metavar=("LO", "HI", "STEP"), default=d.eta_range)
    g.add_argument("--n-scales", type=int, default=d.n_scales)
    g.add_argument("--min-scale", type=int, default=d.min_scale)
    g.add_argument("--scale-grid", choices=("log", "dyadic"), default=d.scale_grid)
    g.add_argument("--detrend-order", type=int, default=d.detrend_order)
    g.add_argument("--poly-degree", type=int, default=d.poly_degree)
    g.add_argument("--no-refine", dest="refine", action="store_false", help="keep the grid-best q")


def config_from_args(ns: argparse.Namespace) -> AnalysisConfig:
    kw = {}
    for f in fields(AnalysisConfig):
        v = getattr(ns, f.name)
        kw[f.name] = tuple(v) if isinstance(v, list) else v
    return AnalysisConfig(**kw)


# --- pipeline -------------------------------------------------------------

def analyze_file(path, cfg: AnalysisConfig, label: Optional[str] = None):
    """Parse a price file and run the triplet pipeline. Raises ParseError/OSError."""
    prices = parse_price_csv(path, label)
    v = volatility(log_returns(prices))
    a = analyze_series(v, cfg)
    extra = {"n_prices": len(prices), "first_date": prices.dates[0].isoformat(),
             "last_date": prices.dates[-1].isoformat()}
    return build_report(a, extra), a


def _text_summary(rep: AnalysisReport) -> str:
    lines = [f"{rep.label}"]
    if rep.ok:
        t = rep.triplet
        for name in ("q_sens", "q_stat", "q_rel"):
            q = getattr(t, name)
            r2 = "" if q.r_squared is None else f"  (R^2 {q.r_squared:.3f})"
            lines.append(f"  {name:7s} = {q.value:.4f} +/- {q.uncertainty:.4f}{r2}")
        lines.append(f"  nonextensive: {'yes' if is_nonextensive(t) else 'no'}")
    else:
        lines.append(f"  failed at stage {rep.failure['stage']}: {rep.failure['message']}")
    return "\n".join(lines) + "\n"


def cmd_analyze(ns) -> int:
    cfg = config_from_args(ns)
    try:
        rep, a = analyze_file(ns.input, cfg, ns.label)
    except ParseError as e:
        _err(f"{ns.input}: {e}")
        return EXIT_INPUT
    except (OSError, UnicodeDecodeError) as e:
        _err(f"{ns.input}: {e}")
        return EXIT_INPUT
    sys.stdout.write(rep.to_json() if ns.format == "json" else _text_summary(rep))
    if ns.emit_curves:
        write_curves(a, ns.emit_curves)
    return EXIT_OK if rep.ok else EXIT_STAGE


# --- batch ----------------------------------------------------------------

def _batch_item(job):
    path, cfg_dict = job
    path = Path(path)
    if path.suffix.lower() == ".json":
        try:
            return path.name, AnalysisReport.from_json(path.read_text(encoding="utf-8")).to_dict()
        except (OSError, ValueError, KeyError, TypeError) as e:
            fail = {"stage": "ingest", "message": f"unreadable report: {e}"}
    else:
        try:
            rep, _ = analyze_file(path, AnalysisConfig.from_dict(cfg_dict))
            return path.name, rep.to_dict()
        except (ParseError, OSError, UnicodeDecodeError) as e:
            fail = {"stage": "ingest", "message": str(e)}
    return path.name, AnalysisReport(path.stem, None, fail, config=cfg_dict).to_dict()


def run_batch(directory, cfg: AnalysisConfig, k: int = 4, jobs: int = 1, restarts: int = 20) -> dict:
    """Analyze every CSV price file / JSON report in ``directory``; results keyed by output file name."""
    paths = sorted(p for p in Path(directory).iterdir()
                   if p.is_file() and p.suffix.lower() in (".csv", ".json"))
    work = [(str(p), cfg.to_dict()) for p in paths]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_batch_item, work))  # map preserves input order
    else:
        results = [_batch_item(w) for w in work]

    reports = [AnalysisReport.from_dict(d) for _, d in results]
    ok = [r for r in reports if r.ok]
    failures = {name: d["failure"] for name, d in results if d["triplet"] is None}
    subset = [r.triplet for r in ok if is_nonextensive(r.triplet)]
    summary = {"version": __version__, "files": [name for name, _ in results], "succeeded": len(ok),
               "failures": failures, "nonextensive": [t.label for t in subset], "k": k,
               "clusters": None, "note": None}
    out = {"summary": summary, "triplets.csv": triplet_table([r.triplet for r in ok])}
    out["reports"] = {f"{Path(name).stem}.json": r.to_json() for (name, _), r in zip(results, reports)}
    if len(subset) >= 2:
        try:
            dm = distance_matrix(subset)
        except ValueError as e:
            summary["note"] = f"distance matrix skipped: {e}"
        else:
            out["distances.csv"] = matrix_csv(dm.labels, dm.d)
            if k <= len(subset):
                try:
                    ca = spectral_block_cluster(dm, k, restarts)
                except FitError as e:
                    summary["note"] = f"clustering skipped: {e}"
                else:
                    summary["clusters"] = {lab: ca.cluster_of[lab] for lab in ca.labels}
                    summary["mean_within_cluster_distance"] = mean_within_cluster_distance(dm, ca)
                    summary["mean_distance"] = mean_distance(dm)
                    out["clusters.csv"] = "market,cluster\n" + "".join(
                        f"{lab},{ca.cluster_of[lab]}\n" for lab in ca.labels)
            else:
                summary["note"] = f"clustering skipped: {len(subset)} nonextensive series < k = {k}"
    else:
        summary["note"] = "fewer than 2 nonextensive series; no distance matrix"
    return out


def write_batch(out: dict, directory) -> None:
    d = Path(directory)
    (d / "reports").mkdir(parents=True, exist_ok=True)
    for name, text in out["reports"].items():
        (d / "reports" / name).write_text(text, encoding="utf-8")
    for name in ("triplets.csv", "distances.csv", "clusters.csv"):
        if name in out:
            (d / name).write_text(out[name], encoding="utf-8")
    (d / "summary.json").write_text(json.dumps(out["summary"], indent=2, sort_keys=True) + "\n",
                                    encoding="utf-8")


def cmd_batch(ns) -> int:
    if not Path(ns.directory).is_dir():
        _err(f"{ns.directory}: not a directory")
        return EXIT_INPUT
    if ns.k < 2:
        _err("--k must be >= 2")
        return EXIT_INPUT
    out = run_batch(ns.directory, config_from_args(ns), ns.k, ns.jobs, ns.restarts)
    if ns.out:
        write_batch(out, ns.out)
    else:
        sys.stdout.write(out["triplets.csv"])
    s = out["summary"]
    for name, f in s["failures"].items():
        _err(f"{name}: failed at {f['stage']}: {f['message']}")
    if s["note"]:
        _err(s["note"])
    if s["succeeded"] == 0:
        _err("no file produced a triplet")
        return EXIT_STAGE
    return EXIT_OK


# --- distances ------------------------------------------------------------

def cmd_distances(ns) -> int:
    try:
        ts = read_triplet_table(Path(ns.table))
    except (OSError, KeyError, ValueError) as e:
        _err(f"{ns.table}: {e}")
        return EXIT_INPUT
    if ns.nonextensive_only:
        ts = [t for t in ts if is_nonextensive(t)]
    try:
        dm = distance_matrix(ts)
        ca = spectral_block_cluster(dm, ns.k, ns.restarts)
    except ValueError as e:
        _err(str(e))
        return EXIT_INPUT
    except FitError as e:
        _err(str(e))
        return EXIT_STAGE
    sys.stdout.write(matrix_csv(dm.labels, dm.d))
    sys.stdout.write("\nmarket,cluster\n" + "".join(f"{lab},{ca.cluster_of[lab]}\n" for lab in ca.labels))
    return EXIT_OK


# --- synth ----------------------------------------------------------------

def synth_returns(name: str, n: int, seed: int, q=1.5, beta=1.0, phi=0.5, a=0.75, levels=16) -> np.ndarray:
    spec = SeedSpec(seed, n)
    if name == "gaussian":
        return gen_gaussian(spec)
    if name == "q-gaussian":
        return gen_q_gaussian(spec, q, beta)
    if name == "ar1":
        return gen_exp_correlated(spec, phi)
    if name == "cascade":
        # unit mean, so --scale sets the typical magnitude
        return gen_binomial_cascade(a, levels) * 2.0 ** levels
    raise ValueError(f"unknown generator {name!r}; choose from {', '.join(GENERATORS)}")


def cmd_synth(ns) -> int:
    try:
        r = ns.scale * synth_returns(ns.generator, ns.n, ns.seed, ns.q, ns.beta, ns.phi, ns.a, ns.levels)
    except (DomainError, ValueError) as e:
        _err(str(e))
        return EXIT_INPUT
    path = np.concatenate([[0.0], np.cumsum(r)])
    with np.errstate(over="ignore"):
        closes = np.exp(path)
    if not np.all(np.isfinite(closes)) or np.any(closes <= 0):
        _err("cumulative returns overflow the price range; lower --scale or --n")
        return EXIT_INPUT
    try:
        write_price_csv(ns.output, weekdays(SYNTH_START, closes.size), closes)
    except OSError as e:
        _err(f"{ns.output}: {e}")
        return EXIT_INPUT
    return EXIT_OK


# --- entry point ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qtriplet", description="Nonextensive q-triplet estimation.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="estimate the triplet of one date,close CSV")
    a.add_argument("input")
    a.add_argument("--format", choices=("json", "text"), default="json")
    a.add_argument("--label", default=None, help="series label (default: file stem)")
    a.add_argument("--emit-curves", metavar="DIR", default=None, help="write fit point sets as CSVs")
    _add_config_flags(a)
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("batch", help="analyze a directory of price CSVs and/or JSON reports")
    b.add_argument("directory")
    b.add_argument("--out", metavar="DIR", default=None, help="output directory (default: table to stdout)")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--k", type=int, default=4, help="number of clusters")
    b.add_argument("--restarts", type=int, default=20)
    _add_config_flags(b)
    b.set_defaults(func=cmd_batch)

    d = sub.add_parser("distances", help="distance matrix and clusters of a triplet table")
    d.add_argument("table")
    d.add_argument("--k", type=int, default=4)
    d.add_argument("--restarts", type=int, default=20)
    d.add_argument("--nonextensive-only", action="store_true")
    d.set_defaults(func=cmd_distances)

    s = sub.add_parser("synth", help="write a synthetic date,close CSV")
    s.add_argument("generator", choices=GENERATORS)
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--n", type=int, default=2520)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--scale", type=float, default=0.01, help="multiplier turning draws into log-returns")
    s.add_argument("--q", type=float, default=1.5)
    s.add_argument("--beta", type=float, default=1.0)
    s.add_argument("--phi", type=float, default=0.5)
    s.add_argument("--a", type=float, default=0.75)
    s.add_argument("--levels", type=int, default=16)
    s.set_defaults(func=cmd_synth)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    return ns.func(ns)


if __name__ == "__main__":
    sys.exit(main())
