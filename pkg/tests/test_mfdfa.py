import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qtriplet.errors import FitError
from qtriplet.mfdfa import (FluctuationSurface, HurstCurve, MultifractalSpectrum, default_moments,
                            default_scales, estimate_q_sens, fluctuation_surface, generalized_hurst,
                            legendre_spectrum, q_sens_from_extrema, spectrum_extrema)
from qtriplet.synth import SeedSpec, cascade_hurst, gen_binomial_cascade, gen_gaussian


def _naive_F(v, s, eta, order=2):
    """Textbook MFDFA with one polyfit per segment."""
    y = np.cumsum(v - v.mean())
    n = len(y)
    ns = n // s
    segs = [y[i * s:(i + 1) * s] for i in range(ns)] + [y[n - (i + 1) * s:n - i * s] for i in range(ns)]
    t = np.arange(s)
    var = np.array([np.mean((g - np.polyval(np.polyfit(t, g, order), t)) ** 2) for g in segs])
    if eta == 0:
        return math.exp(0.5 * np.mean(np.log(var)))
    return np.mean(var ** (eta / 2)) ** (1 / eta)


def test_surface_matches_naive_implementation():
    v = np.abs(gen_gaussian(SeedSpec(2, 1000)))
    scales = np.array([10, 13, 17, 25, 40, 60, 100, 250])
    moments = np.array([-3.0, -1.0, 0.0, 1.0, 2.0, 4.0])
    surf = fluctuation_surface(v, scales, moments)
    for i, e in enumerate(moments):
        for j, s in enumerate(scales):
            assert surf.values[i, j] == pytest.approx(_naive_F(v, s, e), rel=1e-8)


def test_surface_errors():
    v = gen_gaussian(SeedSpec(0, 1024))
    with pytest.raises(FitError):
        fluctuation_surface(np.full(1024, 3.0))
    with pytest.raises(FitError):
        fluctuation_surface(v[:200])
    with pytest.raises(FitError):
        fluctuation_surface(v, scales=[10, 20, 40, 80])
    with pytest.raises(FitError):
        fluctuation_surface(v, scales=[5, 10, 20, 30, 40, 60, 80, 100])


def test_default_grids():
    s = default_scales(2520)
    assert s[0] == 10 and s[-1] == 630 and np.all(np.diff(s) > 0)
    m = default_moments()
    assert m.size == 41 and 0.0 in m


def test_exact_power_law_surface():
    s = np.array([10, 20, 40, 80, 160, 320, 640, 1280])
    m = default_moments()
    surf = FluctuationSurface(s, m, np.tile(s.astype(float) ** 0.7, (m.size, 1)))
    hc = generalized_hurst(surf)
    np.testing.assert_allclose(hc.h, 0.7, atol=1e-10)
    assert not hc.flagged


def test_white_noise_is_monofractal():
    hc = generalized_hurst(fluctuation_surface(gen_gaussian(SeedSpec(7, 2 ** 16))))
    i2 = int(np.where(hc.moments == 2)[0][0])
    assert hc.h[i2] == pytest.approx(0.5, abs=0.05)
    assert np.ptp(hc.h) < 0.1


def test_cascade_matches_analytic_hurst():
    v = gen_binomial_cascade(0.75, 16)
    hc = generalized_hurst(fluctuation_surface(v, 2 ** np.arange(7, 15)))
    m = hc.moments != 0
    np.testing.assert_allclose(hc.h[m], cascade_hurst(hc.moments[m], 0.75), atol=0.05)
    assert np.all(np.diff(hc.h) < 0)


@given(st.floats(0.1, 100), st.floats(-50, 50))
def test_affine_invariance(a, b):
    v = np.abs(gen_gaussian(SeedSpec(4, 512)))
    h1 = generalized_hurst(fluctuation_surface(v)).h
    h2 = generalized_hurst(fluctuation_surface(a * v + b)).h
    np.testing.assert_allclose(h2, h1, rtol=1e-7, atol=1e-9)


def _cascade_alpha(eta, a):
    w = np.array([a, 1 - a])
    p = w[None, :] ** eta[:, None]
    return -(p @ np.log(w)) / (p.sum(axis=1) * math.log(2))


def test_legendre_of_analytic_cascade():
    a = 0.75
    eta = np.round(np.arange(-5, 5.0001, 0.05), 10)
    h = np.where(eta == 0, 0.0, cascade_hurst(np.where(eta == 0, 1.0, eta), a))
    # h(0) by its limit (the removable singularity)
    h[eta == 0] = 0.5 * (h[np.argmin(np.abs(eta + 0.05))] + h[np.argmin(np.abs(eta - 0.05))])
    spec = legendre_spectrum(HurstCurve(eta, h, np.ones_like(eta)))
    inner = np.abs(eta) <= 4.9
    np.testing.assert_allclose(spec.alphas[inner], _cascade_alpha(eta[inner], a), atol=5e-3)
    assert spec.alphas.min() == pytest.approx(-math.log2(a), abs=0.1)
    assert spec.alphas.max() == pytest.approx(-math.log2(1 - a), abs=0.1)
    assert spec.f_values.max() == pytest.approx(1.0, abs=0.05)


def test_constant_hurst_gives_degenerate_spectrum():
    eta = default_moments()
    spec = legendre_spectrum(HurstCurve(eta, np.full(eta.size, 0.6), np.ones(eta.size)))
    np.testing.assert_allclose(spec.alphas, 0.6)
    np.testing.assert_allclose(spec.f_values, 1.0)
    with pytest.raises(FitError):
        spectrum_extrema(spec)


def test_non_monotone_alpha_rejected():
    eta = default_moments()
    with pytest.raises(FitError):
        legendre_spectrum(HurstCurve(eta, 0.5 + 0.1 * np.sin(3 * eta), np.ones(eta.size)))


def test_parabola_extrema():
    alpha = np.linspace(0.6, 1.0, 21)
    spec = spectrum_extrema(MultifractalSpectrum(alpha, 1 - (alpha - 0.8) ** 2 / 0.09))
    assert spec.alpha_min == pytest.approx(0.5, abs=1e-6)
    assert spec.alpha_max == pytest.approx(1.1, abs=1e-6)
    assert spec.alpha_max - spec.alpha_0 == pytest.approx(spec.alpha_0 - spec.alpha_min, abs=1e-6)


def test_q_sens_examples():
    assert q_sens_from_extrema(0.5, 1.0).value == pytest.approx(0.0, abs=1e-12)
    assert q_sens_from_extrema(0.52, 1.08).value == pytest.approx(-0.0028, abs=1e-4)
    # alpha_max -> inf: 1/(1-q) -> 1/alpha_min, so q -> 1 - alpha_min
    assert q_sens_from_extrema(0.5, 1e9).value == pytest.approx(0.5, abs=1e-6)
    with pytest.raises(FitError):
        q_sens_from_extrema(1.0, 0.5)


def test_q_sens_error_propagation_numeric():
    a, b, ea, eb = 0.52, 1.08, 0.02, 0.03
    q = q_sens_from_extrema(a, b, ea, eb)
    da = (q_sens_from_extrema(a + 1e-6, b).value - q_sens_from_extrema(a - 1e-6, b).value) / 2e-6
    db = (q_sens_from_extrema(a, b + 1e-6).value - q_sens_from_extrema(a, b - 1e-6).value) / 2e-6
    assert q.uncertainty == pytest.approx(math.hypot(da * ea, db * eb), rel=1e-5)


def test_estimate_q_sens_on_cascade():
    r = estimate_q_sens(gen_binomial_cascade(0.75, 14), scales=2 ** np.arange(5, 13))
    sp = r.spectrum
    assert sp.alpha_min < sp.alpha_0 < sp.alpha_max
    assert np.polyval(sp.poly_coeffs, sp.alpha_0) == pytest.approx(1.0, abs=0.05)
    assert sp.alpha_min_err >= 0 and r.q_sens.uncertainty >= 0
