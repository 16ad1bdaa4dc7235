import numpy as np
import pytest

from rectlat import derive_double_yukawa, derive_yukawa_coulomb
from rectlat.quadrature import QuadratureConfig


@pytest.fixture(scope="session")
def q():
    return QuadratureConfig()


@pytest.fixture(scope="session")
def dy98():
    """The double-Yukawa member used throughout: v1=9.8, kappa1=2."""
    return derive_double_yukawa(9.8, 2.0)


@pytest.fixture(scope="session")
def yc_near_tricritical():
    """Yukawa-Coulomb member just below its tricritical screening."""
    return derive_yukawa_coulomb(2.0365)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def rel_or_abs(a, b, rel, abs_tol=1e-12):
    """Relative comparison that degrades to absolute near zeros."""
    return abs(a - b) <= max(rel * max(abs(a), abs(b)), abs_tol)
