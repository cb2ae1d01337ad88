import numpy as np
import pytest
from hypothesis import given, strategies as st

from qtriplet.linearize import lnq_matrix, origin_fit, q_grid, sweep
from qtriplet.qcore import q_exponential, q_logarithm


def test_q_grid_endpoints_and_rounding():
    g = q_grid(1.01, 2.99, 0.01)
    assert g.size == 199
    assert g[0] == 1.01 and g[-1] == 2.99
    with pytest.raises(ValueError):
        q_grid(2.0, 1.0, 0.1)


def test_lnq_matrix_matches_scalar_function():
    v = np.array([0.2, 0.5, 0.9])
    qs = np.array([0.7, 1.0, 1.5, 2.0])
    m = lnq_matrix(v, qs)
    for i, q in enumerate(qs):
        np.testing.assert_allclose(m[i], [q_logarithm(x, q) for x in v], rtol=1e-12)


def test_origin_fit_exact_line():
    x = np.arange(1.0, 11.0)
    slopes, r2 = origin_fit(x, np.vstack([-3 * x, 2 * x + 0.0]))
    np.testing.assert_allclose(slopes, [-3, 2])
    np.testing.assert_allclose(r2, [1, 1])


@given(st.floats(1.1, 2.9), st.floats(0.05, 2.0))
def test_sweep_recovers_exact_q(q, rate):
    x = np.linspace(0.1, 5, 30)
    y = q_exponential(-rate * x, q)
    res = sweep(x, y, q_grid(1.01, 2.99, 0.01))
    assert res.q == pytest.approx(q, abs=0.006)
    assert res.r_squared > 0.999
    assert res.r_squared >= res.grid_r_squared.max() - 1e-12


def test_sweep_without_refine_returns_grid_point():
    x = np.linspace(0.1, 5, 30)
    res = sweep(x, q_exponential(-x, 1.234), q_grid(1.01, 2.99, 0.01), refine=False)
    assert res.q == res.grid_best
    assert res.q == pytest.approx(1.23)
