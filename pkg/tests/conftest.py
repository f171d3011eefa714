"""Shared fixtures: expensive exactness sweeps and bound sequences are
computed once per session and reused across test modules."""

import time

import pytest

from quartichull import curves, exactness, relaxation

_VERDICTS = {}


def sweep_verdict(name):
    """Cached exactness sweep for a registry curve; records wall time."""
    if name not in _VERDICTS:
        record = curves.lookup(name)
        t0 = time.time()
        verdict = exactness.sweep_exactness(record.implicit, n=360)
        _VERDICTS[name] = (verdict, time.time() - t0)
    return _VERDICTS[name]


@pytest.fixture(scope="session")
def egg_verdict():
    return sweep_verdict("egg")


@pytest.fixture(scope="session")
def bean_verdict():
    return sweep_verdict("bean")


@pytest.fixture(scope="session")
def folium_verdict():
    return sweep_verdict("folium")


@pytest.fixture(scope="session")
def lemniscate_verdict():
    return sweep_verdict("lemniscate")


@pytest.fixture(scope="session")
def smoothconvex_verdict():
    return sweep_verdict("smoothconvex")


@pytest.fixture(scope="session")
def fermat_verdict():
    return sweep_verdict("fermat")


@pytest.fixture(scope="session")
def waterdrop_verdict():
    return sweep_verdict("waterdrop")


@pytest.fixture(scope="session")
def bean_bounds():
    """Lower bounds on x1 over the bean's relaxed hulls, orders 2..8."""
    bean = curves.lookup("bean")
    t0 = time.time()
    rows = relaxation.minimize_linear(bean.implicit, (1.0, 0.0), range(2, 9))
    return rows, time.time() - t0
