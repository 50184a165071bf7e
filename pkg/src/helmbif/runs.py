"""One function per subcommand: compute, then render the output files.

These are the single implementations behind both the HTTP endpoints and
(through them) the CLI.  Every function is deterministic for identical
arguments; randomized certificate checks use fixed seeds.
"""

import numpy as np

from .bessel import bessel_j
from .branch import (branch_diagnostics, newton_continue, non_circularity,
                     scaling_study)
from .config import DEFAULTS
from .errors import NonConvergenceError
from .fields import (LinearizedInput, apply_linearized, asymptotic_family,
                     kernel_fields)
from .helmholtz import build_domain, solve_dirichlet
from .render import render_csv, render_json
from .wronskian import find_mu, verify_bifurcation_values

# Kernel and transversality certificates use fixed bounds that only hold
# for small modes (the Wronskian scale decays factorially in m); the
# certified range is scoped accordingly.
_CERT_MAX_MODE = 8
_KERNEL_SUP_TOL = 1e-10
_KERNEL_DETUNE = 0.1
_KERNEL_DETUNED_MIN = 1e-3
_TRANSVERSALITY_MIN = 1e-4


def run_mu_table(m_min, m_max, fmt="csv"):
    rows = []
    for m in range(m_min, m_max + 1):
        root = find_mu(m)
        rows.append({
            "m": m,
            "mu": root.mu,
            "slope": root.slope,
            "j0_at_mu": bessel_j(0, root.mu),
            "j1_at_mu": bessel_j(1, root.mu),
            "jm_at_mu": bessel_j(m, root.mu),
        })
    if fmt == "json":
        files = {"mu_table.json": render_json(rows)}
    else:
        header = ["m", "mu", "slope", "j0_at_mu", "j1_at_mu", "jm_at_mu"]
        files = {"mu_table.csv": render_csv(
            header, [[r[h] for h in header] for r in rows])}
    return {"rows": rows, "files": files}


def _kernel_certificates(m):
    """Sup-norm checks of the linearized operator on the kernel pair at
    mu_m and at the detuned values mu_m +/- 0.1, plus the transversality
    surrogate |W'(mu_m)|."""
    root = find_mu(m)
    mu = root.mu
    items = []

    def add(name, passed, value, margin):
        items.append({"name": name, "passed": bool(passed),
                      "value": float(value), "margin": float(margin)})

    kf = kernel_fields(m, mu)
    _, kin, dyn = apply_linearized(LinearizedInput(kf.v, kf.w, 0.0), mu)
    kin_sup, dyn_sup = kin.sup_norm(), dyn.sup_norm()
    add(f"kernel_kinematic_sup_m{m}", kin_sup <= _KERNEL_SUP_TOL,
        kin_sup, _KERNEL_SUP_TOL - kin_sup)
    add(f"kernel_dynamic_sup_m{m}", dyn_sup <= _KERNEL_SUP_TOL,
        dyn_sup, _KERNEL_SUP_TOL - dyn_sup)
    for sign, tag in ((1.0, "plus"), (-1.0, "minus")):
        detuned = mu + sign * _KERNEL_DETUNE
        kf_d = kernel_fields(m, detuned)
        _, _, dyn_d = apply_linearized(
            LinearizedInput(kf_d.v, kf_d.w, 0.0), detuned)
        sup_d = dyn_d.sup_norm()
        add(f"kernel_detuned_{tag}_m{m}", sup_d >= _KERNEL_DETUNED_MIN,
            sup_d, sup_d - _KERNEL_DETUNED_MIN)
    w_prime = root.slope / mu
    add(f"transversality_m{m}", abs(w_prime) >= _TRANSVERSALITY_MIN,
        w_prime, abs(w_prime) - _TRANSVERSALITY_MIN)
    return items


def run_verify(m_max):
    certificate_report = verify_bifurcation_values(m_max)
    kernel_items = []
    for m in range(4, min(m_max, _CERT_MAX_MODE) + 1):
        kernel_items.extend(_kernel_certificates(m))
    passed = certificate_report.all_passed and all(i["passed"] for i in kernel_items)
    report = {
        "certificates": certificate_report.as_dict(),
        "kernel_certificates": kernel_items,
        "all_passed": passed,
    }
    return {"passed": passed, "report": report,
            "files": {"verify_report.json": render_json(report)}}


def run_scaling(m, eps_list, control_offset=DEFAULTS.control_offset,
                modes=DEFAULTS.modes, fmt="csv"):
    mu = find_mu(m).mu
    main = scaling_study(m, eps_list, mu, modes=modes)
    control = scaling_study(m, eps_list, mu + control_offset, modes=modes)
    rows = [[e, dm, dc] for e, dm, dc in zip(main.eps, main.devs, control.devs)]
    footer = {"slope_at_mu": main.slope, "slope_at_control": control.slope,
              "intercept_at_mu": main.intercept,
              "intercept_at_control": control.intercept,
              "mu": main.mu, "control_offset": control_offset}
    if fmt == "json":
        files = {"scaling.json": render_json({"rows": rows, **footer})}
    else:
        files = {"scaling.csv": render_csv(
            ["eps", "dev_at_mu_m", "dev_at_control"], rows, footer)}
    return {"slope_at_mu": main.slope, "slope_at_control": control.slope,
            "rows": rows, "files": files}


def _point_payload(point):
    return {
        "eps": point.eps,
        "lambda": point.lam,
        "c": point.c,
        "defect": point.defect,
        "gamma": point.gamma,
        "coefficients": {str(j): a for j, a in
                         zip(point.map.exponents, point.map.coeffs)},
        "non_circularity": non_circularity(point.map),
        "dirichlet_residual": point.dirichlet_residual,
    }


def run_branch(m, eps_target, steps, shape_modes, tol=DEFAULTS.refine_tol,
               modes=DEFAULTS.modes):
    failure = None
    try:
        points = newton_continue(m, eps_target, steps, shape_modes,
                                 tol=tol, modes=modes)
    except NonConvergenceError as exc:
        points = exc.points
        failure = {"failure": str(exc), "last_iterate": exc.last_iterate}
    payload = [_point_payload(p) for p in points]
    diagnostics = branch_diagnostics(points) if points else None
    if diagnostics is not None:
        for entry, item in zip(payload, diagnostics.entries):
            entry["symmetry_residual"] = item.symmetry_residual
    if failure is not None:
        payload.append(failure)
    return {"points": payload, "failure": failure,
            "files": {"branch.json": render_json(payload)}}


def _figure_sets(m, eps, grid_n, first_order, modes, tol, steps):
    n_theta = 2 * grid_n
    radii = (np.arange(grid_n) + 0.5) / grid_n
    thetas = np.linspace(0.0, 2.0 * np.pi, n_theta, endpoint=False)
    rg, tg = np.meshgrid(radii, thetas, indexing="ij")
    disk = rg * np.exp(1j * tg)
    boundary_thetas = np.linspace(0.0, 2.0 * np.pi, 4 * grid_n, endpoint=False)

    if first_order:
        family = asymptotic_family(m, eps)
        grid_pts = family.map.phi(disk)
        grid_u = family.u_disk(rg, tg)
        boundary_pts = family.map.phi(np.exp(1j * boundary_thetas))
        boundary_u = family.u_disk(np.ones_like(boundary_thetas),
                                   boundary_thetas)
    else:
        if steps is None:
            steps = max(1, int(np.ceil(abs(eps) / 0.005)))
        points = newton_continue(m, eps, steps, 3, tol=tol, modes=modes)
        point = points[-1]
        size = DEFAULTS.oversample * (modes + 1)
        domain = build_domain(point.map, size)
        solution = solve_dirichlet(domain, point.lam, modes=modes, tol=np.inf)
        grid_pts = point.map.phi(disk)
        grid_u = solution.u(grid_pts)
        boundary_pts = point.map.phi(np.exp(1j * boundary_thetas))
        boundary_u = solution.u(boundary_pts)

    boundary_rows = [[t, p.real, p.imag, u] for t, p, u in
                     zip(boundary_thetas, boundary_pts, boundary_u)]
    grid_rows = [[p.real, p.imag, u] for p, u in
                 zip(grid_pts.ravel(), grid_u.ravel())]
    return boundary_rows, grid_rows


def run_figure(m_list, eps, grid_n=DEFAULTS.grid_n, first_order=False,
               modes=DEFAULTS.modes, tol=DEFAULTS.refine_tol, steps=None):
    files = {}
    for m in m_list:
        boundary_rows, grid_rows = _figure_sets(
            m, eps, grid_n, first_order, modes, tol, steps)
        files[f"boundary_m{m}.csv"] = render_csv(
            ["theta", "x", "y", "u"], boundary_rows)
        files[f"field_m{m}.csv"] = render_csv(["x", "y", "u"], grid_rows)
    return {"files": files}
