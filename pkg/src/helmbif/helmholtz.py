"""Dirichlet Helmholtz solver on m-fold symmetric perturbed disks.

The trial space is the symmetric even Fourier-Bessel family
J_k(sqrt(lambda) r) cos(k theta), k in {0, m, ..., K*m}: every basis
function solves the PDE exactly, so the solve reduces to fitting u = 1 on
the boundary by least squares over one fundamental sector.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .bessel import bessel_j, bessel_j_prime
from .config import DEFAULTS
from .errors import DomainError, IllConditionedWarning, NonConvergenceError


@dataclass(frozen=True)
class SymmetricDomain:
    """Boundary samples of Omega = (id + w)(D) over one fundamental sector.

    Angles are parameter angles of the map, equispaced midpoints in
    [0, pi/m] (reflection symmetry halves the 2 pi/m rotation sector);
    normals come from rotating the boundary tangent by -pi/2; weights are
    arc-length midpoint weights.
    """

    map: object
    m: int
    size: int
    offset: float
    thetas: np.ndarray
    points: np.ndarray
    normals: np.ndarray
    weights: np.ndarray


def build_domain(conformal_map, size, offset=0.0):
    """Sample the boundary at `size` sector angles (offset in half-steps)."""
    bound = conformal_map.derivative_bound()
    if bound >= 1.0:
        raise DomainError(
            f"injectivity certificate fails: sum j|a_j| = {bound:g} >= 1")
    m = conformal_map.m
    step = (np.pi / m) / size
    thetas = (np.arange(size) + 0.5 + offset) * step
    unit = np.exp(1j * thetas)
    points = conformal_map.phi(unit)
    tangent = conformal_map.phi_prime(unit) * 1j * unit
    normals = -1j * tangent
    normals = normals / np.abs(normals)
    weights = np.abs(tangent) * step
    return SymmetricDomain(map=conformal_map, m=m, size=size, offset=offset,
                           thetas=thetas, points=points, normals=normals,
                           weights=weights)


@dataclass(frozen=True)
class DirichletSolution:
    """Fourier-Bessel coefficients solving Lap u + lambda u = 0, u = 1 on
    the boundary, with residual and conditioning diagnostics."""

    lam: float
    m: int
    modes: np.ndarray
    coeffs: np.ndarray
    boundary_residual: float
    condition: float
    ill_conditioned: bool

    @property
    def mu(self):
        return float(np.sqrt(self.lam))

    def u(self, z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        theta = np.angle(z)
        out = np.zeros(z.shape)
        for k, a in zip(self.modes, self.coeffs):
            out = out + a * bessel_j(int(k), self.mu * r) * np.cos(k * theta)
        return out

    def gradient(self, z):
        """Cartesian gradient from closed-form radial/angular derivatives."""
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        theta = np.angle(z)
        ur = np.zeros(z.shape)
        ut = np.zeros(z.shape)
        for k, a in zip(self.modes, self.coeffs):
            k = int(k)
            ur = ur + a * self.mu * bessel_j_prime(k, self.mu * r) * np.cos(k * theta)
            if k:
                ut = ut - a * (k / r) * bessel_j(k, self.mu * r) * np.sin(k * theta)
        e_r = np.exp(1j * theta)
        e_t = 1j * e_r
        return ur * e_r.real + ut * e_t.real, ur * e_r.imag + ut * e_t.imag


def _design_matrix(lam, m, modes, points):
    mu = np.sqrt(lam)
    r = np.abs(points)
    theta = np.angle(points)
    cols = [bessel_j(int(k), mu * r) * np.cos(k * theta) for k in modes]
    return np.stack(cols, axis=1)


def solve_dirichlet(domain, lam, modes=DEFAULTS.modes, tol=DEFAULTS.boundary_tol):
    """Least-squares Trefftz fit of u = 1 at the collocation points.

    Columns are norm-scaled and the system is solved by QR with column
    pivoting (never normal equations).  The reported residual is
    sup |u - 1| on a validation grid offset by half a spacing.
    """
    if lam <= 0:
        raise DomainError(f"lambda must be positive, got {lam:g}")
    if domain.size < 2 * (modes + 1):
        raise DomainError(
            f"{domain.size} collocation angles cannot oversample "
            f"{modes + 1} basis modes")
    m = domain.m
    mode_list = np.arange(modes + 1) * m
    A = _design_matrix(lam, m, mode_list, domain.points)
    scale = np.linalg.norm(A, axis=0)
    scale[scale == 0] = 1.0
    A_scaled = A / scale
    rhs = np.ones(domain.size)
    coeffs_scaled, _, _, _ = scipy.linalg.lstsq(
        A_scaled, rhs, lapack_driver="gelsy")
    # Scaled coefficients measure each mode's boundary contribution;
    # entries at rounding level are noise that the unscaling would blow
    # up by 1/scale (factorially large for high orders), so drop them.
    cutoff = 1e-11 * np.max(np.abs(coeffs_scaled))
    coeffs_scaled[np.abs(coeffs_scaled) < cutoff] = 0.0
    coeffs = coeffs_scaled / scale
    condition = float(np.linalg.cond(A_scaled))

    validation = build_domain(domain.map, domain.size,
                              offset=domain.offset + 0.5)
    A_val = _design_matrix(lam, m, mode_list, validation.points)
    residual = float(np.max(np.abs(A_val @ coeffs - 1.0)))

    ill = condition > DEFAULTS.condition_limit
    if ill:
        warnings.warn(
            f"Trefftz system condition estimate {condition:.3g} exceeds "
            f"{DEFAULTS.condition_limit:g}", IllConditionedWarning)
    if residual > tol:
        raise NonConvergenceError(
            f"boundary residual {residual:.3e} above tolerance {tol:.3e} "
            f"with {modes} modes", residual=residual)
    return DirichletSolution(lam=float(lam), m=m, modes=mode_list,
                             coeffs=coeffs, boundary_residual=residual,
                             condition=condition, ill_conditioned=ill)


def normal_derivative(solution, domain):
    """n . grad(u) at the domain's boundary samples."""
    gx, gy = solution.gradient(domain.points)
    return gx * domain.normals.real + gy * domain.normals.imag


def deviation(trace, weights):
    """Arc-length-weighted mean of a boundary trace and the RMS deviation
    about that mean. The deviation vanishes exactly when the trace is the
    constant the overdetermined problem asks for."""
    trace = np.asarray(trace, dtype=float)
    weights = np.asarray(weights, dtype=float)
    total = weights.sum()
    mean = float((trace * weights).sum() / total)
    dev = float(np.sqrt(((trace - mean) ** 2 * weights).sum() / total))
    return mean, dev
