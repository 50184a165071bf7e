"""Overdetermination defect, its scaling in the perturbation amplitude,
and Gauss-Newton continuation of the solution branch.

The defect of a domain/parameter pair is the arc-length RMS deviation of
the Dirichlet solution's normal derivative about its mean: zero exactly
on solutions of the overdetermined problem.  At the bifurcation value the
defect of the single-mode family scales like eps^2; away from it, like
eps.  Continuation refines the extra shape harmonics, the spectral
parameter, and the Neumann constant at fixed leading amplitude.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .config import DEFAULTS
from .errors import DegenerateDataError, DomainError, NonConvergenceError
from .fields import ConformalMap, TrivialSolution
from .helmholtz import build_domain, deviation, normal_derivative, solve_dirichlet
from .wronskian import find_mu


def overdetermination_defect(conformal_map, lam, modes=DEFAULTS.modes,
                             oversample=DEFAULTS.oversample,
                             boundary_tol=DEFAULTS.boundary_tol):
    """Solve the Dirichlet problem and measure the Neumann deviation."""
    size = oversample * (modes + 1)
    domain = build_domain(conformal_map, size)
    solution = solve_dirichlet(domain, lam, modes=modes, tol=boundary_tol)
    trace = normal_derivative(solution, domain)
    return deviation(trace, domain.weights)[1]


@dataclass(frozen=True)
class ScalingReport:
    """Log-log fit of defect against amplitude for the single-mode family."""

    m: int
    mu: float
    eps: tuple
    devs: tuple
    slope: float
    intercept: float


def scaling_study(m, eps_list, mu, modes=DEFAULTS.modes,
                  oversample=DEFAULTS.oversample):
    """Defect of w = eps z^(m+1) at lambda = mu^2 for each eps, with a
    least-squares slope on (log eps, log defect).

    Reliable fits want at least 4 amplitudes spanning a decade, all in
    (0, 0.05]; fewer than 2 points, or any defect below 1e-13 (noise
    floor), is degenerate data.
    """
    eps_arr = [float(e) for e in eps_list]
    if len(eps_arr) < 2:
        raise DegenerateDataError(
            f"cannot fit a slope to {len(eps_arr)} point(s)")
    if any(e <= 0 or e > 0.05 for e in eps_arr):
        raise DomainError("amplitudes must lie in (0, 0.05]")
    if any(b <= a for a, b in zip(eps_arr, eps_arr[1:])):
        raise DomainError("amplitudes must be strictly increasing")
    devs = []
    for eps in eps_arr:
        dev = overdetermination_defect(
            ConformalMap.single_mode(m, eps), mu * mu,
            modes=modes, oversample=oversample)
        if dev < 1e-13:
            raise DegenerateDataError(
                f"defect {dev:.3e} at eps={eps:g} is noise-dominated")
        devs.append(dev)
    slope, intercept = np.polyfit(np.log(eps_arr), np.log(devs), 1)
    return ScalingReport(m=int(m), mu=float(mu), eps=tuple(eps_arr),
                         devs=tuple(devs), slope=float(slope),
                         intercept=float(intercept))


@dataclass(frozen=True)
class BranchPoint:
    """One member of the continued family at leading amplitude eps.

    gamma = c0(sqrt(lambda)) - c records the deviation of the Neumann
    constant from its radial value at the same spectral parameter.
    defect_history holds the per-iteration defects of the accepting
    Gauss-Newton solve (diagnostics for the convergence tail).
    """

    m: int
    eps: float
    map: ConformalMap
    lam: float
    c: float
    defect: float
    gamma: float
    dirichlet_residual: float
    defect_history: tuple


def _branch_map(m, eps, shape):
    exponents = [m + 1] + [(i + 2) * m + 1 for i in range(len(shape))]
    coeffs = [eps] + list(shape)
    return ConformalMap(m, exponents, coeffs)


def _branch_defect(m, eps, shape, lam, c, modes, size):
    """Defect, Neumann residual vector on the validation grid, and the
    Dirichlet validation residual, for one parameter vector."""
    conformal_map = _branch_map(m, eps, shape)
    colloc = build_domain(conformal_map, size)
    solution = solve_dirichlet(colloc, lam, modes=modes, tol=np.inf)
    validation = build_domain(conformal_map, size, offset=0.5)
    trace = normal_derivative(solution, validation)
    _, dev = deviation(trace, validation.weights)
    residual = np.sqrt(validation.weights) * (trace - c)
    return dev, residual, solution.boundary_residual


def _trivial_point(m, mu, modes, oversample):
    c0 = TrivialSolution(mu).c0
    identity = ConformalMap.identity(m)
    domain = build_domain(identity, oversample * (modes + 1))
    solution = solve_dirichlet(domain, mu * mu, modes=modes)
    trace = normal_derivative(solution, domain)
    defect = deviation(trace, domain.weights)[1]
    return BranchPoint(m=m, eps=0.0, map=identity,
                       lam=mu * mu, c=c0, defect=defect, gamma=0.0,
                       dirichlet_residual=solution.boundary_residual,
                       defect_history=(defect,))


def newton_continue(m, eps_target, steps, extra_modes,
                    tol=DEFAULTS.refine_tol, modes=DEFAULTS.modes,
                    oversample=DEFAULTS.oversample):
    """March the branch from 0 to eps_target in equal steps of the leading
    amplitude, refining (extra shape harmonics, lambda, c) at each step by
    damped Gauss-Newton on "normal derivative equals c at the validation
    angles" with the leading coefficient held fixed.

    Returns the accepted points, trivial point first.  Raises
    NonConvergenceError (carrying the partial branch) if an iteration
    stagnates above the tolerance.
    """
    m = int(m)
    if abs(eps_target) > 0.05:
        raise DomainError(f"|eps_target| = {abs(eps_target):g} exceeds 0.05")
    if steps < 1:
        raise DomainError("steps must be >= 1")
    if not 1 <= extra_modes <= 4:
        raise DomainError(
            f"extra shape modes must be in [1, 4], got {extra_modes}")
    mu = find_mu(m).mu
    size = oversample * (modes + 1)
    points = [_trivial_point(m, mu, modes, oversample)]
    if eps_target == 0.0:
        return points

    n_unknowns = extra_modes + 2
    x = np.zeros(n_unknowns)
    x[-2] = mu * mu
    x[-1] = points[0].c
    for step_index in range(1, steps + 1):
        eps = eps_target * step_index / steps
        history = []
        defect, residual, dresid = _branch_defect(
            m, eps, x[:-2], x[-2], x[-1], modes, size)
        history.append(defect)
        accepted = defect <= tol
        for _ in range(DEFAULTS.max_iterations):
            if accepted:
                break
            jac = np.empty((residual.size, n_unknowns))
            for j in range(n_unknowns):
                xp = x.copy()
                xp[j] += DEFAULTS.fd_step
                _, res_p, _ = _branch_defect(
                    m, eps, xp[:-2], xp[-2], xp[-1], modes, size)
                jac[:, j] = (res_p - residual) / DEFAULTS.fd_step
            dx, _, _, _ = scipy.linalg.lstsq(jac, -residual,
                                             lapack_driver="gelsy")
            scale = 1.0
            for _ in range(DEFAULTS.max_halvings):
                trial = x + scale * dx
                trial_defect, trial_residual, trial_dresid = _branch_defect(
                    m, eps, trial[:-2], trial[-2], trial[-1], modes, size)
                if trial_defect < defect:
                    break
                scale *= 0.5
            else:
                # No decrease at the smallest damped step; take that step
                # and let the stagnation check terminate the iteration.
                trial = x + scale * dx
                trial_defect, trial_residual, trial_dresid = _branch_defect(
                    m, eps, trial[:-2], trial[-2], trial[-1], modes, size)
            step_size = scale * float(np.linalg.norm(dx))
            x = trial
            defect, residual, dresid = trial_defect, trial_residual, trial_dresid
            history.append(defect)
            if defect <= tol:
                accepted = True
                break
            if step_size < DEFAULTS.stagnation_step * max(1.0, float(np.linalg.norm(x))):
                break
        if not accepted:
            raise NonConvergenceError(
                f"Gauss-Newton stalled at eps={eps:g}: defect {defect:.3e} "
                f"above tolerance {tol:.3e}",
                residual=defect, points=points,
                last_iterate={"eps": eps, "shape": x[:-2].tolist(),
                              "lambda": float(x[-2]), "c": float(x[-1]),
                              "defect": defect})
        lam, c = float(x[-2]), float(x[-1])
        gamma = TrivialSolution(np.sqrt(lam)).c0 - c
        points.append(BranchPoint(
            m=m, eps=eps, map=_branch_map(m, eps, x[:-2]), lam=lam, c=c,
            defect=defect, gamma=gamma, dirichlet_residual=dresid,
            defect_history=tuple(history)))
    return points


def non_circularity(conformal_map, samples=2048):
    """RMS of the boundary radius about its mean; zero iff a circle."""
    theta = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    radius = np.abs(conformal_map.phi(np.exp(1j * theta)))
    return float(np.sqrt(np.mean((radius - radius.mean()) ** 2)))


@dataclass(frozen=True)
class BranchPointDiagnostics:
    eps: float
    non_circularity: float
    c: float
    c_negative: bool
    symmetry_residual: float


@dataclass(frozen=True)
class BranchDiagnostics:
    entries: tuple

    @property
    def all_ok(self):
        return all(e.c_negative and e.symmetry_residual <= 1e-12
                   for e in self.entries)


def branch_diagnostics(points, samples=1024):
    """Per-point non-circularity, sign of c, and the rotational symmetry
    residual of the boundary under theta -> theta + 2 pi / m."""
    if not points:
        raise DomainError("diagnostics need at least one branch point")
    entries = []
    for point in points:
        theta = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
        unit = np.exp(1j * theta)
        rot = np.exp(2j * np.pi / point.m)
        sym = float(np.max(np.abs(point.map.phi(unit * rot)
                                  - rot * point.map.phi(unit))))
        entries.append(BranchPointDiagnostics(
            eps=point.eps,
            non_circularity=non_circularity(point.map, samples),
            c=point.c,
            c_negative=point.c < 0,
            symmetry_residual=sym))
    return BranchDiagnostics(entries=tuple(entries))
