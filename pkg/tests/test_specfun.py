"""Special-function kernel tests.

Expected values come from independent oracles: closed forms, a gamma
recurrence seeded on [1, 2], brute-force extended-precision series, and a
quadrature representation of U.
"""

import math

import mpmath
import numpy as np
import pytest
from scipy.integrate import quad

from dirac_greens.errors import DomainError, OverflowRangeError
from dirac_greens.specfun import (
    kummer_m,
    kummer_m_deriv,
    log_gamma,
    sph_bessel_j,
    tricomi_u,
    tricomi_u_deriv,
)


class TestLogGamma:
    def test_factorial_value(self):
        assert log_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-14)

    def test_half_integer(self):
        assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-14)

    def test_recurrence_oracle(self):
        # Gamma(7.3) by the recurrence Gamma(x) = (x-1) Gamma(x-1), seeded
        # from the [1, 2] window; independent of the lgamma route under test
        seed = math.gamma(1.3)
        product = 6.3 * 5.3 * 4.3 * 3.3 * 2.3 * 1.3
        assert log_gamma(7.3) == pytest.approx(
            math.log(product) + math.log(seed), rel=1e-13
        )

    @pytest.mark.parametrize("x", [0.0, -1.0, -2.5, float("nan"), float("inf")])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            log_gamma(x)


class TestKummerM:
    def test_series_leading_term(self):
        assert kummer_m(0.7, 3.3, 0.0).value == 1.0

    def test_degree_one_polynomial(self):
        # M(-1, 3, 2) = 1 - 2/3
        assert kummer_m(-1.0, 3.0, 2.0).value == pytest.approx(1.0 / 3.0, rel=1e-13)

    def test_closed_form_vs_series_oracle(self):
        # M(1, 2, z) = (e^z - 1)/z; cross-checked by brute-force summation in
        # extended precision
        with mpmath.workdps(40):
            brute = mpmath.nsum(
                lambda k: mpmath.rf(1, int(k))
                / mpmath.rf(2, int(k))
                / mpmath.factorial(int(k)),
                [0, mpmath.inf],
            )
        closed = math.e - 1.0
        assert float(brute) == pytest.approx(closed, rel=1e-15)
        res = kummer_m(1.0, 2.0, 1.0)
        assert res.value == pytest.approx(closed, rel=1e-12)
        assert res.est_rel_error <= 1e-10

    def test_nonpositive_integer_b_rejected(self):
        with pytest.raises(DomainError):
            kummer_m(1.0, 0.0, 1.0)
        with pytest.raises(DomainError):
            kummer_m(1.0, -3.0, 1.0)

    def test_overflow_carries_exponent(self):
        with pytest.raises(OverflowRangeError) as err:
            kummer_m(1.5, 2.5, 2000.0)
        assert err.value.log_magnitude > 709.0

    def test_moderate_domain_error_estimates(self):
        rng = np.random.RandomState(11)
        for _ in range(40):
            a = rng.uniform(-10, 3)
            b = rng.uniform(1.1, 10)
            z = 10 ** rng.uniform(-2, 2)
            res = kummer_m(a, b, z)
            assert res.est_rel_error <= 1e-10


class TestTricomiU:
    def test_a_zero(self):
        assert tricomi_u(0.0, 2.7, 3.1).value == 1.0

    def test_power_identity(self):
        # U(a, a+1, z) = z^-a
        assert tricomi_u(1.0, 2.0, 2.0).value == pytest.approx(0.5, rel=1e-12)

    def test_quadrature_oracle(self):
        # U(1, 1, z) = int_0^inf e^{-z t} / (1 + t) dt at z = 1
        oracle, err = quad(
            lambda t: math.exp(-t) / (1.0 + t),
            0.0,
            np.inf,
            epsabs=1e-13,
            epsrel=1e-13,
            limit=200,
        )
        assert err < 1e-11
        res = tricomi_u(1.0, 1.0, 1.0)
        assert res.value == pytest.approx(oracle, rel=1e-10)

    def test_z_domain(self):
        with pytest.raises(DomainError):
            tricomi_u(1.0, 2.0, 0.0)
        with pytest.raises(DomainError):
            tricomi_u(1.0, 2.0, -1.0)


class TestDerivatives:
    def test_kummer_deriv_at_zero(self):
        # M'(1, 2, 0) = a/b
        assert kummer_m_deriv(1.0, 2.0, 0.0).value == pytest.approx(0.5, rel=1e-14)

    def test_tricomi_deriv_a_zero(self):
        assert tricomi_u_deriv(0.0, 2.5, 1.5).value == 0.0

    def test_kummer_deriv_finite_difference(self):
        h = 1e-5
        fd = (kummer_m(1.0, 2.0, 1.0 + h).value - kummer_m(1.0, 2.0, 1.0 - h).value) / (
            2 * h
        )
        assert kummer_m_deriv(1.0, 2.0, 1.0).value == pytest.approx(fd, rel=1e-7)


def _lattice(n, rng, z_hi=130.0):
    pts = []
    while len(pts) < n:
        a = rng.uniform(-12.0, 3.0)
        b = rng.uniform(1.05, 11.0)
        z = 10 ** rng.uniform(-3.0, math.log10(z_hi))
        pts.append((a, b, z))
    return pts


class TestIdentities:
    def test_wronskian_identity(self):
        # M U' - M' U = -Gamma(b)/Gamma(a) z^-b e^z
        rng = np.random.RandomState(5)
        for a, b, z in _lattice(60, rng):
            if abs(a - round(a)) < 1e-3 and a <= 0.5:
                continue  # 1/Gamma(a) = 0: both sides vanish identically
            left = (
                kummer_m(a, b, z).value * tricomi_u_deriv(a, b, z).value
                - kummer_m_deriv(a, b, z).value * tricomi_u(a, b, z).value
            )
            right = (
                -math.gamma(b)
                / math.gamma(a)
                * math.exp(z - b * math.log(z))
            )
            assert left == pytest.approx(right, rel=1e-8), (a, b, z)

    def test_contiguous_relation(self):
        # (b-a) M(a-1,b,z) + (2a-b+z) M(a,b,z) - a M(a+1,b,z) = 0
        rng = np.random.RandomState(6)
        for a, b, z in _lattice(60, rng):
            t1 = (b - a) * kummer_m(a - 1.0, b, z).value
            t2 = (2.0 * a - b + z) * kummer_m(a, b, z).value
            t3 = -a * kummer_m(a + 1.0, b, z).value
            scale = max(abs(t1), abs(t2), abs(t3), 1e-300)
            assert abs(t1 + t2 + t3) / scale < 1e-9, (a, b, z)

    def test_derivative_identities_vs_finite_differences(self):
        rng = np.random.RandomState(7)
        for a, b, z in _lattice(40, rng, z_hi=60.0):
            h = 1e-5 * z
            if z - h <= 0:
                continue
            # the difference quotient carries subtraction noise ~ eps |f| / 2h
            fd_m = (kummer_m(a, b, z + h).value - kummer_m(a, b, z - h).value) / (2 * h)
            noise_m = 1e-15 * abs(kummer_m(a, b, z).value) / h
            assert kummer_m_deriv(a, b, z).value == pytest.approx(
                fd_m, rel=1e-6, abs=noise_m
            ), (a, b, z)
            fd_u = (
                tricomi_u(a, b, z + h).value - tricomi_u(a, b, z - h).value
            ) / (2 * h)
            noise_u = 1e-15 * abs(tricomi_u(a, b, z).value) / h
            assert tricomi_u_deriv(a, b, z).value == pytest.approx(
                fd_u, rel=1e-6, abs=noise_u
            ), (a, b, z)


class TestSphericalBessel:
    def test_j0_origin(self):
        assert sph_bessel_j(0, 0.0) == 1.0

    def test_j0_at_pi(self):
        assert abs(sph_bessel_j(0, math.pi)) < 1e-12

    def test_j1_closed_form(self):
        x = 1.0
        closed = math.sin(x) / x**2 - math.cos(x) / x
        assert sph_bessel_j(1, x) == pytest.approx(closed, rel=1e-13)
        assert sph_bessel_j(1, 1.0) == pytest.approx(0.3011686789397568, rel=1e-12)

    def test_higher_orders_closed_form(self):
        # j2 = (3/x^3 - 1/x) sin x - 3 cos x / x^2
        for x in (0.3, 1.7, 9.0):
            j2 = (3.0 / x**3 - 1.0 / x) * math.sin(x) - 3.0 * math.cos(x) / x**2
            assert sph_bessel_j(2, x) == pytest.approx(j2, rel=1e-12, abs=1e-300)

    def test_small_argument_leading_order(self):
        # j_L(x) -> x^L / (2L+1)!! as x -> 0
        x = 1e-4
        dfact = 1.0
        for m in range(3, 2 * 8 + 2, 2):
            dfact *= m
        lead = x**8 / dfact
        assert sph_bessel_j(8, x) == pytest.approx(lead, rel=1e-7)

    def test_zero_of_high_order_at_origin(self):
        assert sph_bessel_j(20, 0.0) == 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            sph_bessel_j(-1, 1.0)
        with pytest.raises(DomainError):
            sph_bessel_j(2, -0.5)
