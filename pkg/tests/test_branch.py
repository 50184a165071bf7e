import numpy as np
import pytest

from helmbif.branch import (branch_diagnostics, newton_continue,
                            non_circularity, overdetermination_defect,
                            scaling_study)
from helmbif.errors import (DegenerateDataError, DomainError,
                            NonConvergenceError)
from helmbif.fields import ConformalMap, TrivialSolution
from helmbif.wronskian import find_mu

from oracles import fit_loglog_slope


class TestDefect:
    def test_disk_is_exactly_solvable(self):
        mu = find_mu(4).mu
        for lam in (mu * mu, (mu + 0.3) ** 2):
            assert overdetermination_defect(
                ConformalMap.identity(4), lam) <= 1e-10

    def test_single_mode_defect_positive(self):
        mu = find_mu(4).mu
        dev = overdetermination_defect(ConformalMap.single_mode(4, 1e-2),
                                       mu * mu)
        assert dev > 1e-8

    def test_quadratic_at_bifurcation_linear_at_control(self):
        mu = find_mu(4).mu
        eps = [2e-3, 4e-3, 8e-3]
        at_mu = [overdetermination_defect(ConformalMap.single_mode(4, e),
                                          mu * mu) for e in eps]
        control = [overdetermination_defect(
            ConformalMap.single_mode(4, e), (mu + 0.3) ** 2) for e in eps]
        assert fit_loglog_slope(eps, at_mu) == pytest.approx(2.0, abs=0.3)
        assert fit_loglog_slope(eps, control) == pytest.approx(1.0, abs=0.25)


class TestScalingStudy:
    def test_report_fields(self):
        mu = find_mu(5).mu
        eps = [1e-3, 2e-3, 4e-3, 8e-3]
        report = scaling_study(5, eps, mu)
        assert report.eps == tuple(eps)
        assert all(d > 0 for d in report.devs)
        assert report.slope == pytest.approx(2.0, abs=0.25)

    def test_single_point_rejected(self):
        with pytest.raises(DegenerateDataError):
            scaling_study(4, [4e-3], find_mu(4).mu)

    @pytest.mark.parametrize("m", [4, 5, 6])
    def test_slope_gap_between_bifurcation_and_control(self, m):
        mu = find_mu(m).mu
        eps = [2e-3, 4e-3, 8e-3, 1.6e-2]
        at_mu = scaling_study(m, eps, mu).slope
        control = scaling_study(m, eps, mu + 0.3).slope
        assert at_mu - control >= 0.6
        assert at_mu == pytest.approx(2.0, abs=0.3)

    def test_amplitude_range_enforced(self):
        mu = find_mu(4).mu
        with pytest.raises(DomainError):
            scaling_study(4, [1e-3, 0.06], mu)
        with pytest.raises(DomainError):
            scaling_study(4, [4e-3, 2e-3], mu)


class TestNewtonContinue:
    def test_zero_target_returns_trivial_point(self):
        points = newton_continue(4, 0.0, 1, 3)
        assert len(points) == 1
        point = points[0]
        mu = find_mu(4).mu
        assert point.lam == pytest.approx(mu * mu, abs=1e-12)
        assert point.c == pytest.approx(TrivialSolution(mu).c0, abs=1e-12)
        assert point.defect <= 1e-10
        assert point.gamma == 0.0

    def test_parameter_validation(self):
        with pytest.raises(DomainError):
            newton_continue(4, 0.06, 2, 3)
        with pytest.raises(DomainError):
            newton_continue(4, 0.01, 0, 3)
        with pytest.raises(DomainError):
            newton_continue(4, 0.01, 2, 5)

    def test_small_amplitude_reaches_default_tolerance(self):
        points = newton_continue(4, 0.002, 2, 3)
        assert len(points) == 3
        assert all(p.defect <= 1e-9 for p in points[1:])
        mu = find_mu(4).mu
        for p in points[1:]:
            assert abs(p.lam - mu * mu) < 1e-3
            assert p.c < 0
            expected_gamma = TrivialSolution(np.sqrt(p.lam)).c0 - p.c
            assert p.gamma == pytest.approx(expected_gamma, abs=1e-12)

    def test_quadratic_convergence_tail(self):
        points = newton_continue(4, 0.002, 1, 3, tol=1e-10)
        history = points[-1].defect_history
        assert len(history) >= 3
        assert history[-2] / history[-1] >= 10.0
        assert history[-3] / history[-2] >= 10.0

    def test_refinement_beats_first_order_truncation(self):
        # At moderate amplitude the refined defect is at least 10x below
        # the defect of the unrefined single-mode truncation.
        mu = find_mu(4).mu
        eps = 0.016
        unrefined = overdetermination_defect(
            ConformalMap.single_mode(4, eps), mu * mu)
        points = newton_continue(4, eps, 4, 3, tol=1e-5)
        assert points[-1].defect * 10.0 <= unrefined

    def test_opposite_amplitudes_are_congruent(self):
        # eps -> -eps corresponds to rotating the domain by pi/m: even
        # harmonics keep their sign, odd ones flip; lambda and c agree.
        plus = newton_continue(4, 0.002, 2, 3)[-1]
        minus = newton_continue(4, -0.002, 2, 3)[-1]
        assert abs(plus.lam - minus.lam) <= 1e-8
        assert abs(plus.c - minus.c) <= 1e-7
        for l in (2, 3, 4):
            a = plus.map.coefficient(l * 4 + 1)
            b = minus.map.coefficient(l * 4 + 1)
            assert b == pytest.approx((-1.0) ** l * a, abs=1e-9)

    def test_stagnation_carries_partial_branch(self):
        # One extra harmonic cannot reach the default tolerance at this
        # amplitude; the error must carry the accepted points.
        with pytest.raises(NonConvergenceError) as info:
            newton_continue(4, 0.02, 1, 1)
        assert len(info.value.points) >= 1
        assert info.value.residual > 1e-9
        assert info.value.last_iterate["eps"] > 0


class TestDiagnostics:
    def test_trivial_point_is_circular(self):
        points = newton_continue(4, 0.0, 1, 3)
        diag = branch_diagnostics(points)
        assert diag.entries[0].non_circularity <= 1e-14
        assert diag.entries[0].c_negative
        assert diag.entries[0].symmetry_residual <= 1e-12

    def test_moderate_amplitude_branch(self):
        points = newton_continue(4, 0.05, 5, 3, tol=1e-3)
        diag = branch_diagnostics(points)
        assert diag.all_ok
        last = diag.entries[-1]
        expected = 0.05 / np.sqrt(2.0)
        assert abs(last.non_circularity - expected) <= 0.2 * expected
        assert all(e.c < 0 for e in diag.entries)

    def test_single_mode_non_circularity(self):
        # |phi(e^{i t})| = 1 + eps cos(m t) + O(eps^2): RMS eps/sqrt(2).
        eps = 0.01
        value = non_circularity(ConformalMap.single_mode(4, eps))
        assert value == pytest.approx(eps / np.sqrt(2.0), rel=2e-2)

    def test_empty_branch_rejected(self):
        with pytest.raises(DomainError):
            branch_diagnostics([])
