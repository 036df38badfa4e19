"""Second-order radial matrix elements."""

import dataclasses

import numpy as np
import pytest

from dirac_greens.dirac import solve_bound, sommerfeld_energy
from dirac_greens.errors import DomainError
from dirac_greens.greens import build_greens
from dirac_greens.grid import build_grid
from dirac_greens.matel import MatrixElementSpec, radial_matrix_element
from dirac_greens.potential import coulomb_charge, linearize

RNT = 2.177968408335618e-4


@pytest.fixture(scope="module")
def setup_small():
    g = build_grid(RNT, 0.0625, 220)
    pw = linearize(coulomb_charge(1.0), g)
    gf = build_greens(-0.6, -1, pw)
    o1 = solve_bound(pw, -1, 1)
    o2 = solve_bound(pw, -1, 2)
    return g, pw, gf, o1, o2


def test_zero_rank_reduces_to_double_overlap(setup_small):
    g, pw, gf, o1, _ = setup_small
    spec = MatrixElementSpec(k=0.0, ktilde=0.0, Lambda=0, LambdaTilde=0)
    got = radial_matrix_element(o1, gf, o1, spec)
    w = g.weights
    gLL = gf.tabulate()[0]
    direct = (w * o1.P[: g.mtp]) @ gLL @ (w * o1.P[: g.mtp])
    assert got == pytest.approx(direct, rel=1e-13)


def test_linearity_in_alpha_orbital(setup_small):
    _, _, gf, o1, o2 = setup_small
    spec = MatrixElementSpec(k=0.3, ktilde=0.1, Lambda=1, LambdaTilde=0)
    doubled = dataclasses.replace(o2, P=2.0 * o2.P, Q=2.0 * o2.Q)
    u1 = radial_matrix_element(o1, gf, o2, spec)
    u2 = radial_matrix_element(o1, gf, doubled, spec)
    assert u2 == pytest.approx(2.0 * u1, rel=1e-13)


def test_bilinearity(setup_small):
    _, _, gf, o1, o2 = setup_small
    spec = MatrixElementSpec(k=0.2, ktilde=0.4, Lambda=0, LambdaTilde=2)
    combo = dataclasses.replace(
        o1, P=o1.P + 0.5 * o2.P, Q=o1.Q + 0.5 * o2.Q
    )
    u = radial_matrix_element(combo, gf, o1, spec)
    u1 = radial_matrix_element(o1, gf, o1, spec)
    u2 = radial_matrix_element(o2, gf, o1, spec)
    assert u == pytest.approx(u1 + 0.5 * u2, rel=1e-12)


def test_swap_symmetry(setup_small):
    # same orbital on both sides, symmetric component: swapping the photon
    # labels (k, Lambda) <-> (ktilde, LambdaTilde) leaves U invariant
    _, _, gf, o1, _ = setup_small
    a = MatrixElementSpec(k=0.7, ktilde=0.2, Lambda=2, LambdaTilde=1)
    b = MatrixElementSpec(k=0.2, ktilde=0.7, Lambda=1, LambdaTilde=2)
    ua = radial_matrix_element(o1, gf, o1, a)
    ub = radial_matrix_element(o1, gf, o1, b)
    assert ua == pytest.approx(ub, rel=1e-9)


def test_component_selectors(setup_small):
    _, _, gf, o1, _ = setup_small
    u_ll = radial_matrix_element(o1, gf, o1, MatrixElementSpec(0, 0, 0, 0))
    u_ss = radial_matrix_element(
        o1, gf, o1, MatrixElementSpec(0, 0, 0, 0, Tbeta="S", T="S", Ttilde="S", Talpha="S")
    )
    # small components are O(alpha Z) so the SS kernel element is far smaller
    assert abs(u_ss) < 1e-3 * abs(u_ll)


def test_rank_limit():
    with pytest.raises(DomainError):
        MatrixElementSpec(k=0.0, ktilde=0.0, Lambda=21, LambdaTilde=0)


def test_pole_residue_constant():
    # near E -> E_1s the element with unit weights behaves like
    # (int P^2 dr)^2 / (E_1s - E): the residue is constant to ~10%
    g = build_grid(RNT, 0.0625, 220)
    pw = linearize(coulomb_charge(1.0), g)
    o1 = solve_bound(pw, -1, 1)
    e1s = sommerfeld_energy(1.0, 1, -1)
    spec = MatrixElementSpec(k=0.0, ktilde=0.0, Lambda=0, LambdaTilde=0)
    vals = []
    for dE in (-1e-3, -5e-4, 5e-4, 1e-3):
        gf = build_greens(e1s + dE, -1, pw)
        u = radial_matrix_element(o1, gf, o1, spec)
        vals.append(u * (o1.energy - gf.energy))
    vals = np.array(vals)
    assert np.max(np.abs(vals / np.median(vals) - 1.0)) <= 0.10
