import numpy as np
import pytest

from oscsync import (
    BathParams,
    SystemParams,
    build_generator,
    diagonalize,
    dissipation_coefficients,
)


@pytest.fixture(scope="session")
def fig_system():
    """The strongly coupled detuned pair used throughout."""
    return SystemParams(omega1=1.0, omega2=1.4, lam=0.7)


@pytest.fixture(scope="session")
def cb_bath():
    return BathParams(topology="common")


@pytest.fixture(scope="session")
def sb_bath():
    return BathParams(topology="separate")


def make_gen(omega2, lam, topology="common", backend="full", **bath_kw):
    """One-call generator assembly for tests."""
    sys_p = SystemParams(omega1=1.0, omega2=omega2, lam=lam)
    bath = BathParams(topology=topology, **bath_kw)
    basis = diagonalize(sys_p)
    coeffs = dissipation_coefficients(sys_p, bath, basis)
    return sys_p, basis, coeffs, build_generator(basis, coeffs, backend=backend)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(183327311)
