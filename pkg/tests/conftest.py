"""Shared fixtures: grids, charges and built Green's functions.

The expensive builds (standard 390- and refined 780-node grids) are session
scoped so the unit tests and the acceptance suite share them.
"""

import pytest

from dirac_greens.grid import build_grid
from dirac_greens.greens import build_greens
from dirac_greens.potential import coulomb_charge, linearize

RNT = 2.177968408335618e-4
H390 = 0.0625
N390 = 390
H780 = 0.03125
N780 = 780


@pytest.fixture(scope="session")
def grid390():
    return build_grid(RNT, H390, N390)


@pytest.fixture(scope="session")
def grid780():
    return build_grid(RNT, H780, N780)


@pytest.fixture(scope="session")
def pw_gold_390(grid390):
    return linearize(coulomb_charge(79.0), grid390)


@pytest.fixture(scope="session")
def pw_gold_780(grid780):
    return linearize(coulomb_charge(79.0), grid780)


@pytest.fixture(scope="session")
def pw_hydrogen_390(grid390):
    return linearize(coulomb_charge(1.0), grid390)


@pytest.fixture(scope="session")
def pw_hydrogen_780(grid780):
    return linearize(coulomb_charge(1.0), grid780)


@pytest.fixture(scope="session")
def gf_gold_s_390(pw_gold_390):
    return build_greens(-367.5, -1, pw_gold_390)


@pytest.fixture(scope="session")
def gf_gold_d_390(pw_gold_390):
    return build_greens(-551.3, 2, pw_gold_390)


@pytest.fixture(scope="session")
def gf_gold_s_780(pw_gold_780):
    return build_greens(-367.5, -1, pw_gold_780)


@pytest.fixture(scope="session")
def gf_gold_d_780(pw_gold_780):
    return build_greens(-551.3, 2, pw_gold_780)


@pytest.fixture(scope="session")
def gf_hydrogen_390(pw_hydrogen_390):
    return build_greens(-0.6, -1, pw_hydrogen_390)


@pytest.fixture(scope="session")
def gf_hydrogen_780(pw_hydrogen_780):
    return build_greens(-0.6, -1, pw_hydrogen_780)


@pytest.fixture(scope="session")
def orbitals_gold_390(pw_gold_390):
    from dirac_greens.dirac import solve_bound

    return {
        (-1, 1): solve_bound(pw_gold_390, -1, 1),
        (-1, 2): solve_bound(pw_gold_390, -1, 2),
        (2, 3): solve_bound(pw_gold_390, 2, 3),
        (2, 4): solve_bound(pw_gold_390, 2, 4),
    }


@pytest.fixture(scope="session")
def orbitals_gold_780(pw_gold_780):
    from dirac_greens.dirac import solve_bound

    return {
        (-1, 1): solve_bound(pw_gold_780, -1, 1),
        (-1, 2): solve_bound(pw_gold_780, -1, 2),
        (2, 3): solve_bound(pw_gold_780, 2, 3),
        (2, 4): solve_bound(pw_gold_780, 2, 4),
    }
