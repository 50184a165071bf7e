"""Acceptance suite: one test per criterion, each printing a PASS/FAIL
line with its runtime.  Run with `pytest -s tests/test_acceptance.py`
to see the lines as they appear.

Criterion 7 is asserted exactly as stated (branch to amplitude 0.05 with
3 extra shape harmonics, every point at defect <= 1e-9).  That bound is
not attainable with a 3-harmonic shape truncation: the defect floor is
set by the first dropped harmonic (growing like eps^5, about 6.6e-4 at
0.05) and no Dirichlet-solver resolution changes it.  The test reports
the measured floor along with the parts of the criterion that do hold
(quadratic lambda/c shifts, non-circularity) and then fails honestly.
"""

import time

import numpy as np
import pytest

import helmbif as hb
from helmbif.errors import NonConvergenceError

from oracles import fit_loglog_slope


def _report(number, passed, elapsed, detail):
    status = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {number} {status} ({elapsed:.2f} s): {detail}")


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_criterion_1_bessel_root_table():
    expected = {(1, 1): 3.8317, (0, 2): 5.5201, (3, 1): 6.3802,
                (1, 2): 7.0156, (4, 1): 7.5883}
    with Timer() as t:
        values = {key: hb.bessel_root(*key).value for key in expected}
    deviations = {key: abs(values[key] - expected[key]) for key in expected}
    passed = max(deviations.values()) <= 5e-5 and t.elapsed < 1.0
    _report(1, passed, t.elapsed,
            f"max root deviation {max(deviations.values()):.2e} (<= 5e-5)")
    assert max(deviations.values()) <= 5e-5
    assert t.elapsed < 1.0


def test_criterion_2_wronskian_spot_value():
    with Timer() as t:
        j02 = hb.bessel_root(0, 2).value
        value = hb.wronskian(1, 4, j02)
    passed = abs(value - (-0.012148)) <= 1e-5 and t.elapsed < 1.0
    _report(2, passed, t.elapsed,
            f"W_(1,4)(j_02) = {value:.8f} (-0.012148 +/- 1e-5)")
    assert value == pytest.approx(-0.012148, abs=1e-5)
    assert t.elapsed < 1.0


def test_criterion_3_certificate_suite_to_64():
    with Timer() as t:
        report = hb.verify_bifurcation_values(64)
    failed = [item.name for item in report.items if not item.passed]
    passed = report.all_passed and t.elapsed < 10.0
    _report(3, passed, t.elapsed,
            f"{len(report.items)} certificate checks, identity residual "
            f"{report.identity_max_residual:.2e}, failed: {failed or 'none'}")
    assert report.all_passed, failed
    assert t.elapsed < 10.0


def test_criterion_4_kernel_certificate():
    with Timer() as t:
        sup_at_root = {}
        detuned_min = {}
        for m in (4, 5, 6):
            mu = hb.find_mu(m).mu
            kf = hb.kernel_fields(m, mu)
            residual, kin, dyn = hb.apply_linearized(
                hb.LinearizedInput(kf.v, kf.w, 0.0), mu)
            rng = np.random.default_rng(m)
            r = rng.uniform(0.1, 0.9, size=8)
            th = rng.uniform(0.0, 2 * np.pi, size=8)
            sup_at_root[m] = max(float(np.max(np.abs(residual(r, th)))),
                                 kin.sup_norm(), dyn.sup_norm())
            detuned = []
            for sign in (1.0, -1.0):
                mu_d = mu + 0.1 * sign
                kf_d = hb.kernel_fields(m, mu_d)
                _, _, dyn_d = hb.apply_linearized(
                    hb.LinearizedInput(kf_d.v, kf_d.w, 0.0), mu_d)
                detuned.append(dyn_d.sup_norm())
            detuned_min[m] = min(detuned)
    worst_sup = max(sup_at_root.values())
    worst_detuned = min(detuned_min.values())
    passed = worst_sup <= 1e-10 and worst_detuned >= 1e-3 and t.elapsed < 5.0
    _report(4, passed, t.elapsed,
            f"kernel sup {worst_sup:.2e} (<= 1e-10), detuned response "
            f"{worst_detuned:.2e} (>= 1e-3)")
    assert worst_sup <= 1e-10
    assert worst_detuned >= 1e-3
    assert t.elapsed < 5.0


def test_criterion_5_disk_reproduction():
    with Timer() as t:
        mu = hb.find_mu(4).mu
        domain = hb.build_domain(hb.ConformalMap.identity(4), 104)
        sol = hb.solve_dirichlet(domain, mu * mu)
        trace = hb.normal_derivative(sol, domain)
        c0 = hb.TrivialSolution(mu).c0
    lead_err = abs(sol.coeffs[0] - 1.0 / hb.bessel_j(0, mu))
    tail = float(np.max(np.abs(sol.coeffs[1:])))
    trace_err = float(np.max(np.abs(trace - c0)))
    passed = (lead_err <= 1e-12 and tail <= 1e-12 and trace_err <= 1e-10
              and t.elapsed < 1.0)
    _report(5, passed, t.elapsed,
            f"a_0 error {lead_err:.2e}, tail {tail:.2e}, "
            f"normal-derivative error {trace_err:.2e}")
    assert lead_err <= 1e-12
    assert tail <= 1e-12
    assert trace_err <= 1e-10
    assert t.elapsed < 1.0


def test_criterion_6_bifurcation_signature():
    eps = [1e-3, 2e-3, 4e-3, 8e-3, 1.6e-2]
    with Timer() as t:
        slopes = {}
        for m in (4, 5):
            mu = hb.find_mu(m).mu
            slopes[(m, "at_mu")] = hb.scaling_study(m, eps, mu).slope
            slopes[(m, "control")] = hb.scaling_study(m, eps, mu + 0.3).slope
    ok = all(abs(slopes[(m, "at_mu")] - 2.0) <= 0.25 and
             abs(slopes[(m, "control")] - 1.0) <= 0.2 for m in (4, 5))
    passed = ok and t.elapsed < 60.0
    _report(6, passed, t.elapsed,
            "slopes " + ", ".join(
                f"m={m}: {slopes[(m, 'at_mu')]:.3f}/{slopes[(m, 'control')]:.3f}"
                for m in (4, 5)) + " (want 2.0 +/- 0.25 / 1.0 +/- 0.2)")
    for m in (4, 5):
        assert slopes[(m, "at_mu")] == pytest.approx(2.0, abs=0.25)
        assert slopes[(m, "control")] == pytest.approx(1.0, abs=0.2)
    assert t.elapsed < 60.0


def test_criterion_7_branch_continuation():
    mu = hb.find_mu(4).mu
    c0 = hb.TrivialSolution(mu).c0
    with Timer() as t:
        try:
            points = hb.newton_continue(4, 0.05, 10, 3, tol=1e-9)
            failure = None
        except NonConvergenceError as exc:
            points = exc.points
            failure = exc
    if failure is None:
        eps = np.array([p.eps for p in points[1:]])
        lam_shift = np.array([abs(p.lam - mu * mu) for p in points[1:]])
        c_shift = np.array([abs(p.c - c0) for p in points[1:]])
        lam_slope = fit_loglog_slope(eps, lam_shift)
        c_slope = fit_loglog_slope(eps, c_shift)
        nc = hb.non_circularity(points[-1].map)
        ok = (all(p.defect <= 1e-9 for p in points)
              and lam_slope >= 1.8 and c_slope >= 1.8
              and abs(nc - 0.05 / np.sqrt(2)) <= 0.2 * 0.05 / np.sqrt(2))
        _report(7, ok and t.elapsed < 300.0, t.elapsed,
                f"defects <= 1e-9; lambda slope {lam_slope:.2f}, "
                f"c slope {c_slope:.2f}, non-circularity {nc:.4f}")
        assert ok
        assert t.elapsed < 300.0
        return

    # The continuation stalled above the 1e-9 bound.  Measure what the
    # 3-harmonic family actually achieves and report the parts of the
    # criterion that do hold, then fail.
    diag = hb.newton_continue(4, 0.012, 8, 3, tol=1e-6)
    eps = np.array([p.eps for p in diag[1:]])
    lam_slope = fit_loglog_slope(eps, [abs(p.lam - mu * mu) for p in diag[1:]])
    c_slope = fit_loglog_slope(eps, [abs(p.c - c0) for p in diag[1:]])
    coarse = hb.newton_continue(4, 0.05, 5, 3, tol=1e-3)
    nc = hb.non_circularity(coarse[-1].map)
    nc_ok = abs(nc - 0.05 / np.sqrt(2)) <= 0.2 * 0.05 / np.sqrt(2)
    detail = (
        f"defect <= 1e-9 NOT attainable: floor {failure.residual:.2e} at "
        f"eps={failure.last_iterate['eps']:g} with 3 extra shape harmonics "
        f"(first dropped harmonic scales like eps^5). Diagnostics at "
        f"attainable tolerances: lambda slope {lam_slope:.2f} (>= 1.8 "
        f"{'ok' if lam_slope >= 1.8 else 'FAIL'}), c slope {c_slope:.2f} "
        f"(>= 1.8 {'ok' if c_slope >= 1.8 else 'FAIL'}), non-circularity "
        f"{nc:.4f} vs eps/sqrt(2)={0.05 / np.sqrt(2):.4f} "
        f"({'ok' if nc_ok else 'FAIL'})")
    _report(7, False, t.elapsed, detail)
    assert t.elapsed < 300.0
    pytest.fail(f"criterion 7: {detail}")


def test_criterion_8_identity_suite():
    rng = np.random.default_rng(42)
    with Timer() as t:
        worst_recurrence = 0.0
        worst_ode = 0.0
        worst_derivative = 0.0
        worst_wronskian_fd = 0.0
        for _ in range(200):
            k = int(rng.integers(1, 65))
            x = float(rng.uniform(0.1, 60.0))
            res = abs(hb.bessel_j(k - 1, x) + hb.bessel_j(k + 1, x)
                      - (2.0 * k / x) * hb.bessel_j(k, x))
            worst_recurrence = max(worst_recurrence, res)
        for _ in range(200):
            k = int(rng.integers(0, 65))
            x = float(rng.uniform(0.1, 60.0))
            ev = hb.BesselEval.at(k, x)
            worst_ode = max(worst_ode,
                            ev.ode_residual() / (1.0 + abs(ev.value)))
        for _ in range(200):
            k = int(rng.integers(0, 17))
            x = float(rng.uniform(0.5, 30.0))
            fd = (hb.bessel_j(k, x + 1e-6) - hb.bessel_j(k, x - 1e-6)) / 2e-6
            worst_derivative = max(worst_derivative,
                                   abs(hb.bessel_j_prime(k, x) - fd))
        for _ in range(200):
            k = int(rng.integers(0, 9))
            l = int(rng.integers(0, 9))
            mu = float(rng.uniform(0.5, 8.0))
            fd = ((mu + 1e-6) * hb.wronskian(k, l, mu + 1e-6)
                  - (mu - 1e-6) * hb.wronskian(k, l, mu - 1e-6)) / 2e-6
            worst_wronskian_fd = max(
                worst_wronskian_fd,
                abs(hb.mu_wronskian_derivative(k, l, mu) - fd))
    passed = (worst_recurrence <= 1e-11 and worst_ode <= 1e-10
              and worst_derivative <= 1e-8 and worst_wronskian_fd <= 1e-7
              and t.elapsed < 5.0)
    _report(8, passed, t.elapsed,
            f"recurrence {worst_recurrence:.2e} (<=1e-11), ODE "
            f"{worst_ode:.2e} (<=1e-10), derivative-vs-FD "
            f"{worst_derivative:.2e} (<=1e-8), wronskian-derivative-vs-FD "
            f"{worst_wronskian_fd:.2e} (<=1e-7)")
    assert worst_recurrence <= 1e-11
    assert worst_ode <= 1e-10
    assert worst_derivative <= 1e-8
    assert worst_wronskian_fd <= 1e-7
    assert t.elapsed < 5.0


def test_criterion_9_figure_reproduction():
    from helmbif.runs import run_figure

    with Timer() as t:
        result = run_figure([4, 5, 6], 0.1, grid_n=64, first_order=True)
    worst = 0.0
    for m in (4, 5, 6):
        lines = result["files"][f"boundary_m{m}.csv"].strip().splitlines()[1:]
        u = np.array([float(line.split(",")[3]) for line in lines])
        worst = max(worst, float(np.max(np.abs(u - 1.0))))
        grid = result["files"][f"field_m{m}.csv"].strip().splitlines()[1:]
        values = np.array([[float(cell) for cell in line.split(",")]
                           for line in grid])
        assert np.all(np.isfinite(values))
    passed = worst <= 0.05 and t.elapsed < 30.0
    _report(9, passed, t.elapsed,
            f"boundary trace deviation {worst:.2e} (<= 0.05) for m=4,5,6 "
            f"at eps=0.1")
    assert worst <= 0.05
    assert t.elapsed < 30.0
