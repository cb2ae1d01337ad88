import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, stats

from qtriplet.errors import DomainError
from qtriplet.qcore import (QTriplet, QValue, is_nonextensive, q_exponential, q_gaussian_norm,
                            q_gaussian_pdf, q_logarithm, triplet_distance)

finite_q = st.floats(0.1, 2.9).filter(lambda q: abs(q - 1) > 1e-6)


def test_q_one_is_ordinary_exp_and_log():
    assert q_exponential(1.0, 1.0) == pytest.approx(math.e, rel=1e-15)
    assert q_logarithm(math.e, 1.0) == pytest.approx(1.0, rel=1e-15)


def test_q_exponential_matches_direct_formula():
    x = np.linspace(-0.9, 3.0, 50)
    for q in (0.5, 1.5, 2.5):
        base = 1 + (1 - q) * x
        mask = base > 0
        want = np.power(base[mask], 1 / (1 - q))
        np.testing.assert_allclose(q_exponential(x[mask], q), want, rtol=1e-12)


def test_q_two_logarithm():
    # ln_2(x) = 1 - 1/x
    assert q_logarithm(4.0, 2.0) == pytest.approx(0.75)


def test_cutoff_below_one_and_domain_error_above():
    assert q_exponential(-3.0, 0.5) == 0.0
    with pytest.raises(DomainError):
        q_exponential(2.0, 2.0)  # 1 + (1-2)*2 < 0
    with pytest.raises(DomainError):
        q_logarithm(-1.0, 1.5)


def test_scalar_in_scalar_out():
    assert isinstance(q_exponential(0.3, 1.3), float)
    assert isinstance(q_logarithm(0.3, 1.3), float)
    assert q_exponential(np.array([0.1, 0.2]), 1.3).shape == (2,)


@given(st.floats(1e-3, 1e3), finite_q)
def test_exp_of_log_round_trip(x, q):
    assert q_exponential(q_logarithm(x, q), q) == pytest.approx(x, rel=1e-10)


@given(st.floats(-0.5, 0.5), st.floats(0.5, 1.5))
def test_q_exponential_continuous_in_q(x, q):
    # within the q = 1 branch tolerance the two formulas agree
    assert q_exponential(x, 1.0 + 1e-9) == pytest.approx(q_exponential(x, 1.0), rel=1e-8)


@pytest.mark.parametrize("q", [1.2, 1.5, 1.8, 2.5])
def test_q_gaussian_matches_student_t(q):
    # q-Gaussian <-> Student t: nu = (3-q)/(q-1), scale^2 = 1/(beta (3-q))
    beta = 2.0
    nu = (3 - q) / (q - 1)
    scale = 1 / math.sqrt(beta * (3 - q))
    r = np.linspace(-5, 5, 41)
    np.testing.assert_allclose(q_gaussian_pdf(r, q, beta), stats.t(nu, scale=scale).pdf(r), rtol=1e-10)


def test_q_gaussian_gaussian_limit():
    r = np.linspace(-3, 3, 13)
    beta = 0.5
    want = math.sqrt(beta / math.pi) * np.exp(-beta * r * r)
    np.testing.assert_allclose(q_gaussian_pdf(r, 1 + 1e-6, beta), want, atol=1e-4)


@pytest.mark.parametrize("q", [1.2, 1.5, 1.8, 2.5])
def test_q_gaussian_normalized(q):
    total, _ = integrate.quad(lambda r: q_gaussian_pdf(r, q, 1.0), -np.inf, np.inf, limit=200)
    assert total == pytest.approx(1.0, abs=1e-6)


def test_q_gaussian_norm_cauchy():
    assert q_gaussian_norm(2.0) == pytest.approx(math.pi)


def test_q_gaussian_rejects_bad_parameters():
    with pytest.raises(DomainError):
        q_gaussian_pdf(0.0, 3.0, 1.0)
    with pytest.raises(DomainError):
        q_gaussian_pdf(0.0, 1.5, -1.0)
    with pytest.raises(DomainError):
        q_gaussian_pdf(0.0, 1.0, 1.0)


def test_qvalue_validation_and_round_trip():
    v = QValue(1.34, 0.06, 0.994)
    assert QValue.from_dict(v.to_dict()) == v
    with pytest.raises(ValueError):
        QValue(1.0, -0.1)
    with pytest.raises(ValueError):
        QValue(1.0, 0.0, 1.5)


def test_triplet_round_trip():
    t = QTriplet.from_values(0.0, 1.34, 2.26, "GSPTSE", errors=(0.02, 0.06, 0.04))
    assert QTriplet.from_dict(t.to_dict(), "GSPTSE") == t


def test_distance_example():
    a = QTriplet.from_values(0.0, 1.0, 1.0)
    b = QTriplet.from_values(0.3, 1.4, 1.0)
    assert triplet_distance(a, b) == pytest.approx(0.5)


triplets = st.builds(QTriplet.from_values, st.floats(-2, 1), st.floats(0.5, 3), st.floats(0.5, 4))


@given(triplets, triplets, triplets)
def test_distance_metric_axioms(a, b, c):
    assert triplet_distance(a, a) == 0
    assert triplet_distance(a, b) == triplet_distance(b, a)
    assert triplet_distance(a, c) <= triplet_distance(a, b) + triplet_distance(b, c) + 1e-12


def test_predicate_examples():
    assert is_nonextensive(QTriplet.from_values(0.0, 1.34, 2.26))
    assert not is_nonextensive(QTriplet.from_values(-0.01, 1.50, 1.46))
    assert is_nonextensive(QTriplet.from_values(1.0, 1.0, 1.0))  # inclusive bounds
