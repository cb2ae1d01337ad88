"""Deformed exponential/logarithm, the q-Gaussian density and triplet value types.

All functions accept scalars or numpy arrays and return the same shape.
The q = 1 case is a separate branch (within ``Q_ONE_TOL``) rather than a limit
of the general formula.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import gammaln

from .errors import DomainError

Q_ONE_TOL = 1e-12


def _is_one(q: float) -> bool:
    return abs(q - 1.0) <= Q_ONE_TOL


def _restore(out, x):
    return float(out) if np.ndim(x) == 0 else out


def q_exponential(x, q: float):
    """e_q(x) = [1 + (1-q) x]^(1/(1-q)), with the Tsallis cutoff.

    Where the bracket is non-positive the result is 0 if the exponent
    1/(1-q) is positive (q < 1). For q > 1 that branch diverges and a
    DomainError is raised.
    """
    xa = np.asarray(x, dtype=float)
    if _is_one(q):
        return _restore(np.exp(xa), x)
    base = 1.0 + (1.0 - q) * xa
    cut = base <= 0
    if np.any(cut) and q > 1:
        raise DomainError(f"q_exponential diverges for q={q} where 1+(1-q)x <= 0")
    out = np.zeros_like(base)
    # log1p keeps precision as q -> 1, where (1-q) x is tiny
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        val = np.exp(np.log1p((1.0 - q) * xa) / (1.0 - q))
    np.copyto(out, val, where=~cut)
    return _restore(out, x)


def q_logarithm(x, q: float):
    """ln_q(x) = (x^(1-q) - 1) / (1-q) for x > 0."""
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise DomainError("q_logarithm requires x > 0")
    if _is_one(q):
        return _restore(np.log(xa), x)
    return _restore(np.expm1((1.0 - q) * np.log(xa)) / (1.0 - q), x)


def q_gaussian_norm(q: float) -> float:
    """Normalizer C_q of the q-Gaussian for 1 < q < 3 (via log-Gamma)."""
    if not 1.0 < q < 3.0:
        raise DomainError(f"q-Gaussian normalizer requires 1 < q < 3, got {q}")
    log_c = (
        0.5 * math.log(math.pi)
        + gammaln((3.0 - q) / (2.0 * (q - 1.0)))
        - 0.5 * math.log(q - 1.0)
        - gammaln(1.0 / (q - 1.0))
    )
    return math.exp(log_c)


def q_gaussian_pdf(r, q: float, beta: float):
    """q-Gaussian density sqrt(beta)/C_q * e_q(-beta r^2)."""
    if beta <= 0:
        raise DomainError("beta must be positive")
    c_q = q_gaussian_norm(q)
    ra = np.asarray(r, dtype=float)
    out = math.sqrt(beta) / c_q * np.asarray(q_exponential(-beta * ra * ra, q))
    return _restore(out, r)


@dataclass(frozen=True)
class QValue:
    """An entropic index with its uncertainty and fit quality."""

    value: float
    uncertainty: float = 0.0
    r_squared: Optional[float] = None

    def __post_init__(self):
        if not self.uncertainty >= 0:
            raise ValueError(f"uncertainty must be >= 0, got {self.uncertainty}")
        if self.r_squared is not None and not 0.0 <= self.r_squared <= 1.0:
            raise ValueError(f"r_squared must lie in [0, 1], got {self.r_squared}")

    def to_dict(self) -> dict:
        return {"value": self.value, "uncertainty": self.uncertainty, "r_squared": self.r_squared}

    @classmethod
    def from_dict(cls, d: dict) -> "QValue":
        return cls(float(d["value"]), float(d.get("uncertainty", 0.0)),
                   None if d.get("r_squared") is None else float(d["r_squared"]))


@dataclass(frozen=True)
class QTriplet:
    q_sens: QValue
    q_stat: QValue
    q_rel: QValue
    label: str = ""

    def __post_init__(self):
        for name in ("q_sens", "q_stat", "q_rel"):
            if not isinstance(getattr(self, name), QValue):
                raise TypeError(f"{name} must be a QValue")

    @classmethod
    def from_values(cls, q_sens, q_stat, q_rel, label="", errors=(0.0, 0.0, 0.0)) -> "QTriplet":
        return cls(QValue(q_sens, errors[0]), QValue(q_stat, errors[1]),
                   QValue(q_rel, errors[2]), label)

    def as_array(self) -> np.ndarray:
        return np.array([self.q_sens.value, self.q_stat.value, self.q_rel.value])

    def to_dict(self) -> dict:
        return {k: getattr(self, k).to_dict() for k in ("q_sens", "q_stat", "q_rel")}

    @classmethod
    def from_dict(cls, d: dict, label: str = "") -> "QTriplet":
        return cls(QValue.from_dict(d["q_sens"]), QValue.from_dict(d["q_stat"]),
                   QValue.from_dict(d["q_rel"]), label)


def triplet_distance(a: QTriplet, b: QTriplet) -> float:
    """Euclidean distance between the central (q_sens, q_stat, q_rel) values."""
    return math.sqrt(float(np.sum((a.as_array() - b.as_array()) ** 2)))


def is_nonextensive(t: QTriplet) -> bool:
    """q_sens <= 1 <= q_stat <= q_rel, inclusive, on central values."""
    return t.q_sens.value <= 1.0 <= t.q_stat.value <= t.q_rel.value
