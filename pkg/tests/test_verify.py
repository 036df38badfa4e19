"""Orbital reconstruction and accuracy diagnostics."""

import dataclasses

import numpy as np
import pytest

from dirac_greens.dirac import solve_bound
from dirac_greens.errors import DomainError
from dirac_greens.verify import (
    check_greens_function,
    jump_diagnostic,
    normalization_integral,
    overlap_integral,
    project_orbital,
)


@pytest.fixture(scope="module")
def hydrogen_1s_390(pw_hydrogen_390):
    return solve_bound(pw_hydrogen_390, -1, 1)


@pytest.fixture(scope="module")
def hydrogen_2s_390(pw_hydrogen_390):
    return solve_bound(pw_hydrogen_390, -1, 2)


class TestProjectOrbital:
    def test_reconstruction_error_small(self, gf_hydrogen_390, hydrogen_1s_390):
        orb = hydrogen_1s_390
        Pt, Qt = project_orbital(gf_hydrogen_390, orb)
        scale = np.max(np.abs(orb.P))
        assert np.max(np.abs(Pt - orb.P[: len(Pt)])) / scale <= 1e-2

    def test_sign_pattern_preserved(self, gf_hydrogen_390, hydrogen_2s_390):
        orb = hydrogen_2s_390
        Pt, _ = project_orbital(gf_hydrogen_390, orb)
        # same interior node count over the region where P is significant
        scale = np.max(np.abs(orb.P))
        sig = np.abs(orb.P[: len(Pt)]) > 1e-3 * scale
        s_ref = np.sign(orb.P[: len(Pt)])[sig]
        s_got = np.sign(Pt)[sig]
        assert np.count_nonzero(np.diff(s_ref) != 0) == np.count_nonzero(
            np.diff(s_got) != 0
        )

    def test_linearity(self, gf_hydrogen_390, hydrogen_1s_390):
        orb = hydrogen_1s_390
        scaled = dataclasses.replace(orb, P=3.0 * orb.P, Q=3.0 * orb.Q)
        Pt, Qt = project_orbital(gf_hydrogen_390, orb)
        Pt3, Qt3 = project_orbital(gf_hydrogen_390, scaled)
        np.testing.assert_allclose(Pt3, 3.0 * Pt, rtol=1e-13, atol=1e-300)
        np.testing.assert_allclose(Qt3, 3.0 * Qt, rtol=1e-13, atol=1e-300)

    def test_kappa_mismatch(self, gf_hydrogen_390, pw_hydrogen_390):
        orb = solve_bound(pw_hydrogen_390, 1, 2)
        with pytest.raises(DomainError):
            project_orbital(gf_hydrogen_390, orb)

    def test_energy_coincidence(self, gf_hydrogen_390, hydrogen_1s_390):
        orb = dataclasses.replace(hydrogen_1s_390, energy=gf_hydrogen_390.energy)
        with pytest.raises(DomainError):
            project_orbital(gf_hydrogen_390, orb)


class TestIntegrals:
    def test_exact_limit_is_one(self, grid390, hydrogen_1s_390):
        orb = hydrogen_1s_390
        mtp = grid390.mtp
        ov = overlap_integral(orb, orb.P[:mtp], orb.Q[:mtp], grid390)
        nm = normalization_integral(orb.P[:mtp], orb.Q[:mtp], grid390)
        assert ov == pytest.approx(1.0, abs=2e-8)
        assert nm == pytest.approx(1.0, abs=2e-8)

    def test_reconstructed_overlap_near_one(
        self, gf_hydrogen_390, grid390, hydrogen_1s_390
    ):
        Pt, Qt = project_orbital(gf_hydrogen_390, hydrogen_1s_390)
        ov = overlap_integral(hydrogen_1s_390, Pt, Qt, grid390)
        assert abs(ov - 1.0) <= 1e-2


class TestJumpDiagnostic:
    def test_rhs_scale(self, gf_hydrogen_390):
        # the prescribed jump magnitude is about 2 for moderate Z/r + E
        alpha = gf_hydrogen_390.consts.alpha
        rhs = alpha * (2.0 / alpha + alpha * 1.0 / 1.0 + alpha * gf_hydrogen_390.energy)
        assert rhs == pytest.approx(2.0, abs=1e-3)

    def test_hydrogen_within_tolerance(self, gf_hydrogen_390):
        assert jump_diagnostic(gf_hydrogen_390) <= 1e-2

    def test_refinement_improves(self, gf_hydrogen_390, gf_hydrogen_780):
        assert jump_diagnostic(gf_hydrogen_780) < jump_diagnostic(gf_hydrogen_390)


class TestReport:
    def test_full_report(self, gf_hydrogen_390, hydrogen_1s_390, hydrogen_2s_390):
        report = check_greens_function(
            gf_hydrogen_390, [hydrogen_1s_390, hydrogen_2s_390]
        )
        assert len(report.orbitals) == 2
        for row in report.orbitals:
            assert abs(row.overlap - 1.0) <= 1e-2
            assert abs(row.normalization - 1.0) <= 2e-2
        assert report.jump_max_rel_dev <= 1e-2
        assert report.wronskian_rel_spread <= 1e-6
