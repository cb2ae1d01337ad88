"""Synthetic series with known nonextensive properties.

Random draws come from numpy's Philox counter-based bit generator, so a
(seed, n) pair determines the output completely.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .errors import DomainError
from .qcore import q_logarithm


@dataclass(frozen=True)
class SeedSpec:
    seed: int
    n: int

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.n < 1:
            raise ValueError("n must be >= 1")

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(self.seed))


def gen_gaussian(spec: SeedSpec) -> np.ndarray:
    return spec.rng().standard_normal(spec.n)


def q_gaussian_box_muller_beta(q: float) -> float:
    """Width parameter beta of the raw generalized Box-Muller output, 1/(3-q)."""
    return 1.0 / (3.0 - q)


def gen_q_gaussian(spec: SeedSpec, q: float, beta: float = 1.0) -> np.ndarray:
    """q-Gaussian samples with density ``q_gaussian_pdf(., q, beta)``.

    Generalized Box-Muller: z = sqrt(-2 ln_q'(u1)) cos(2 pi u2) with
    q' = (1+q)/(3-q) has density proportional to e_q(-z^2/(3-q)); it is
    then rescaled to the requested beta.
    """
    if not 1.0 < q < 3.0:
        raise DomainError(f"q-Gaussian sampler requires 1 < q < 3, got {q}")
    if beta <= 0:
        raise DomainError("beta must be positive")
    rng = spec.rng()
    u = rng.random((2, spec.n))
    # u1 in (0, 1]: ln_q'(0) is undefined
    u1 = 1.0 - u[0]
    q_prime = (1.0 + q) / (3.0 - q)
    z = np.sqrt(-2.0 * q_logarithm(u1, q_prime)) * np.cos(2.0 * math.pi * u[1])
    return z * math.sqrt(q_gaussian_box_muller_beta(q) / beta)


def gen_exp_correlated(spec: SeedSpec, phi: float) -> np.ndarray:
    """Stationary AR(1) x[t+1] = phi x[t] + eps[t] with unit-variance innovations."""
    if not 0.0 <= phi < 1.0:
        raise DomainError("phi must lie in [0, 1)")
    eps = spec.rng().standard_normal(spec.n)
    # start from the stationary distribution so no burn-in is needed
    eps[0] /= math.sqrt(1.0 - phi * phi)
    return lfilter([1.0], [1.0, -phi], eps)


def gen_binomial_cascade(a: float, levels: int, spec: SeedSpec | None = None) -> np.ndarray:
    """Deterministic binomial multiplicative measure of length 2**levels.

    Cell k carries a**(n_k) (1-a)**(levels-n_k), n_k the number of ones in
    the binary expansion of k. ``spec`` is accepted for a uniform generator
    signature; the cascade uses no randomness.
    """
    if not 0.5 <= a < 1.0:
        raise DomainError("cascade weight a must lie in [0.5, 1)")
    if levels < 10:
        raise DomainError("cascade needs at least 10 levels")
    k = np.arange(2 ** levels, dtype=np.uint64)
    ones = np.zeros(k.shape, dtype=np.int64)
    for bit in range(levels):
        ones += ((k >> np.uint64(bit)) & np.uint64(1)).astype(np.int64)
    return a ** ones * (1.0 - a) ** (levels - ones)


def cascade_hurst(eta, a: float):
    """Generalized Hurst exponent of the binomial cascade, eta != 0."""
    eta = np.asarray(eta, dtype=float)
    return 1.0 / eta - np.log(a ** eta + (1.0 - a) ** eta) / (eta * math.log(2.0))


GENERATORS = ("gaussian", "q-gaussian", "ar1", "cascade")
