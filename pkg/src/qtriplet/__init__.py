"""Estimate the nonextensive q-triplet (q_sens, q_stat, q_rel) of time series."""

__version__ = "0.1.0"

from .config import AnalysisConfig
from .errors import DomainError, FitError, ParseError, QTripletError, StageError
from .ingest import (IncrementSeries, PriceSeries, ReturnSeries, VolatilitySeries, log_returns,
                     parse_price_csv, volatility, volatility_increments)
from .mfdfa import estimate_q_sens, q_sens_from_extrema
from .qcore import (QTriplet, QValue, is_nonextensive, q_exponential, q_gaussian_pdf,
                    q_logarithm, triplet_distance)
from .qrel import estimate_q_rel, fit_q_rel
from .qstat import build_histogram, estimate_q_stat, fit_q_stat
from .triplets import (ClusterAssignment, DistanceMatrix, analyze_series, distance_matrix,
                       is_nonextensive_with_uncertainty, spectral_block_cluster)

__all__ = [
    "AnalysisConfig", "ClusterAssignment", "DistanceMatrix", "DomainError", "FitError",
    "IncrementSeries", "ParseError", "PriceSeries", "QTriplet", "QTripletError", "QValue",
    "ReturnSeries", "StageError", "VolatilitySeries", "analyze_series", "build_histogram",
    "distance_matrix", "estimate_q_rel", "estimate_q_sens", "estimate_q_stat", "fit_q_rel",
    "fit_q_stat", "is_nonextensive", "is_nonextensive_with_uncertainty", "log_returns",
    "parse_price_csv", "q_exponential", "q_gaussian_pdf", "q_logarithm", "q_sens_from_extrema",
    "spectral_block_cluster", "triplet_distance", "volatility", "volatility_increments",
]
