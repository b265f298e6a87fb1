import math

import pytest
from hypothesis import HealthCheck, settings

from eitnoise import FluctuationSystem, SystemParams, solve_steady_state
from eitnoise.model import SqueezeSpec

settings.register_profile(
    "default", max_examples=25, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def make_symmetric(c: float, gamma_cavity: float, om1: float, om2: float,
                   r2: float = 0.0, theta2: float = 0.0, r1: float = 0.0,
                   n_atoms: int = 200, gamma_cross: float = 0.0
                   ) -> SystemParams:
    """Symmetric-regime parameters realizing a given cooperativity."""
    g = math.sqrt(c * gamma_cavity / n_atoms)
    return SystemParams(
        gamma_rad_1=1.0, gamma_rad_2=1.0,
        kappa_1=gamma_cavity, kappa_2=gamma_cavity,
        g_1=g, g_2=g, n_atoms=n_atoms,
        alpha_1=om1 / g, alpha_2=om2 / g,
        gamma_cross=gamma_cross,
        squeeze_1=SqueezeSpec(r=r1),
        squeeze_2=SqueezeSpec(r=r2, theta=theta2),
    )


@pytest.fixture(scope="session")
def fig2_params() -> SystemParams:
    return make_symmetric(167.0, 0.15, 1.0, 1.0, r2=3.0, n_atoms=167)


@pytest.fixture(scope="session")
def fig3_params() -> SystemParams:
    return make_symmetric(167.0, 0.15, 1.0, 2.0, r2=3.0, n_atoms=167)


@pytest.fixture(scope="session")
def fig2_system(fig2_params):
    steady = solve_steady_state(fig2_params)
    return FluctuationSystem.from_steady_state(fig2_params, steady)
