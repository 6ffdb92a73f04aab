import math
import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from pinfilab.params import MarketParams, NormalizedParams, market_from_normalized

OPEN_BAND = NormalizedParams(A=0.3, B=0.7, C=1.3, inv_depth=0.001)
# sellers only above x = 1; dead band [0.8, 1]
SELLER_BAND = NormalizedParams(A=0.3, B=0.5, C=0.8, inv_depth=0.001)


@pytest.fixture
def open_band():
    return OPEN_BAND


@pytest.fixture
def open_band_market():
    return lambda x=1.0, g=0.0: market_from_normalized(OPEN_BAND, x=x, g=g)


@pytest.fixture
def seller_band_market():
    return lambda x=1.3, g=0.0: market_from_normalized(SELLER_BAND, x=x, g=g)


def random_market(rng: np.random.Generator) -> MarketParams:
    return MarketParams(
        alpha=float(rng.uniform(0.01, 10.0)),
        beta=float(rng.uniform(0.0, 2.0)),
        gamma=float(rng.uniform(0.0, 3.0)),
        delta=float(rng.uniform(0.0, 2.0)),
        theta=float(rng.uniform(0.01, 10.0)),
        fill_rate=float(rng.uniform(0.01, 0.99)),
        depth=float(10 ** rng.uniform(0.5, 5.0)),
    )


def random_feasible_market(rng: np.random.Generator) -> MarketParams:
    """Valid parameters with C > 1 and the minimum depth met."""
    while True:
        theta = float(rng.uniform(0.1, 10.0))
        p = float(rng.uniform(0.05, 0.95))
        slack = (1.0 - p) * theta
        beta = float(rng.uniform(0.0, 0.9 * slack))
        delta = float(rng.uniform(0.0, 0.9 * slack - beta)) if 0.9 * slack > beta else 0.0
        params = MarketParams(
            alpha=1.0, beta=beta, gamma=0.0, delta=delta, theta=theta,
            fill_rate=p, depth=float(10 ** rng.uniform(1.0, 5.0)),
        )
        if params.depth >= 1.0 + beta / (p * theta) and beta + delta < slack:
            return params


market_strategy = st.builds(
    MarketParams,
    alpha=st.floats(0.01, 10.0),
    beta=st.floats(0.0, 2.0),
    gamma=st.floats(0.0, 3.0),
    delta=st.floats(0.0, 2.0),
    theta=st.floats(0.01, 10.0),
    fill_rate=st.floats(0.01, 0.99),
    depth=st.floats(2.0, 1e5),
)


def rel_err(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def isclose(a, b, rel=0.0, abs_=0.0):
    return math.isclose(a, b, rel_tol=rel, abs_tol=abs_)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
