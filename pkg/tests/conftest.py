from fractions import Fraction as F

import pytest

from starmono.params import build_star_graph, gamma_to_mu_xi

# a generic exact (2,2,2,2) parameter pack with sum(gamma) = 0 (hbar = 0)
GAMMA_D4_ZERO = [[F(1, 5), F(-2, 5)], [F(1, 7), F(-3, 7)],
                 [F(1, 3), F(-1, 4)], [F(1, 2), F(-41, 420)]]
NU_D4 = F(1, 5)


@pytest.fixture(scope="session")
def graph_d4():
    return build_star_graph((2, 2, 2, 2))


@pytest.fixture(scope="session")
def params_d4_zero(graph_d4):
    """Exact pack on the four-legged graph with hbar = 0, nu generic."""
    return gamma_to_mu_xi(graph_d4, GAMMA_D4_ZERO, NU_D4)


@pytest.fixture(scope="session")
def params_d4_nu0(graph_d4):
    """Same gamma, nu = 0 (the induced-representation locus)."""
    return gamma_to_mu_xi(graph_d4, GAMMA_D4_ZERO, 0)
