"""Closed-form building blocks on the unit disk: the radial base solution,
symmetric holomorphic boundary perturbations, the Schwarz lift, the
linearized boundary operator on Fourier-Bessel inputs, its kernel fields,
and the first-order family they generate.

All boundary traces are cosine series in the m-fold symmetric even class
{cos(k*theta) : k = 0, m, 2m, ...}; the objects here are band-limited, so
the series are exact, not truncations.
"""

from dataclasses import dataclass

import numpy as np

from .bessel import bessel_j, bessel_j_prime, bessel_j_second
from .errors import ConsistencyError, DomainError, SolvabilityError
from .wronskian import _j02, _j11, find_mu


@dataclass(frozen=True)
class CosineSeries:
    """Finite cosine series sum_k c_k cos(k*theta)."""

    modes: tuple
    coeffs: tuple

    def __post_init__(self):
        if len(self.modes) != len(self.coeffs):
            raise ConsistencyError("modes and coeffs must pair up")

    @classmethod
    def build(cls, modes, coeffs):
        order = np.argsort(modes)
        return cls(tuple(int(modes[i]) for i in order),
                   tuple(float(coeffs[i]) for i in order))

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros_like(theta)
        for k, c in zip(self.modes, self.coeffs):
            out = out + c * np.cos(k * theta)
        return out

    @property
    def mean(self):
        for k, c in zip(self.modes, self.coeffs):
            if k == 0:
                return c
        return 0.0

    def coefficient(self, mode):
        for k, c in zip(self.modes, self.coeffs):
            if k == mode:
                return c
        return 0.0

    def sup_norm(self, samples=512):
        theta = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
        return float(np.max(np.abs(self(theta)))) if self.modes else 0.0


class TrivialSolution:
    """Radially symmetric solution U(r) = J_0(mu r)/J_0(mu), normalized to
    U(1) = 1, with its boundary slope c0 = -mu J_1(mu)/J_0(mu)."""

    def __init__(self, mu):
        mu = float(mu)
        if not (_j11() < mu < _j02()):
            raise DomainError(
                f"mu={mu:g} outside ({_j11():.4f}, {_j02():.4f}); "
                "J_0(mu) may vanish there")
        self.mu = mu
        self._j0_mu = bessel_j(0, mu)
        self.c0 = -mu * bessel_j(1, mu) / self._j0_mu

    def u(self, r):
        return bessel_j(0, self.mu * np.asarray(r, dtype=float)) / self._j0_mu

    def u_r(self, r):
        mu = self.mu
        return mu * bessel_j_prime(0, mu * np.asarray(r, dtype=float)) / self._j0_mu

    def u_rr(self, r):
        mu = self.mu
        return mu * mu * bessel_j_second(0, mu * np.asarray(r, dtype=float)) / self._j0_mu


class ConformalMap:
    """Symmetric holomorphic perturbation w(z) = sum_j a_j z^j of the
    identity, with real coefficients and exponents j = 1 (mod m), j >= m+1.

    The normalization phi'(0) = 1 is structural: exponent 1 is not
    representable.  phi = id + w maps the closed disk injectively whenever
    derivative_bound() = sum_j j|a_j| < 1 (sup |w'| bound on |z| = 1).
    """

    def __init__(self, m, exponents=(), coeffs=()):
        m = int(m)
        if m < 4:
            raise DomainError(f"mode m must be >= 4, got {m}")
        exponents = tuple(int(j) for j in exponents)
        coeffs = tuple(float(a) for a in coeffs)
        if len(exponents) != len(coeffs):
            raise ConsistencyError("exponents and coeffs must pair up")
        if len(set(exponents)) != len(exponents):
            raise ConsistencyError("duplicate exponents")
        for j in exponents:
            if j % m != 1 or j < m + 1:
                raise DomainError(
                    f"exponent {j} breaks m-fold symmetry or normalization "
                    f"(need j = 1 mod {m}, j >= {m + 1})")
        order = np.argsort(exponents)
        self.m = m
        self.exponents = tuple(exponents[i] for i in order)
        self.coeffs = tuple(coeffs[i] for i in order)

    @classmethod
    def identity(cls, m):
        return cls(m)

    @classmethod
    def single_mode(cls, m, eps):
        return cls(m, (m + 1,), (float(eps),))

    def coefficient(self, exponent):
        for j, a in zip(self.exponents, self.coeffs):
            if j == exponent:
                return a
        return 0.0

    def w(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for j, a in zip(self.exponents, self.coeffs):
            out = out + a * z ** j
        return out

    def w_prime(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for j, a in zip(self.exponents, self.coeffs):
            out = out + j * a * z ** (j - 1)
        return out

    def phi(self, z):
        return np.asarray(z, dtype=complex) + self.w(z)

    def phi_prime(self, z):
        return 1.0 + self.w_prime(z)

    def derivative_bound(self):
        """sum_j j |a_j| >= sup_{|z|=1} |w'(z)|; injectivity certificate."""
        return float(sum(j * abs(a) for j, a in zip(self.exponents, self.coeffs)))

    def boundary_trace(self):
        """Cosine series of x . w on |z| = 1: mode j-1 carries a_j."""
        return CosineSeries.build([j - 1 for j in self.exponents],
                                  list(self.coeffs))


@dataclass(frozen=True)
class FourierBesselField:
    """v(r, theta) = sum_k b_k J_k(mu r) cos(k theta), modes in {0, m, 2m, ...}.

    Every term solves the Helmholtz equation at mu^2 exactly, so the field
    does too; the residual sampler only measures the rounding of the
    derivative identity chain.
    """

    mu: float
    m: int
    modes: tuple
    coeffs: tuple

    def __post_init__(self):
        for k in self.modes:
            if k != 0 and k % self.m != 0:
                raise DomainError(
                    f"mode {k} outside the {self.m}-fold symmetric class")

    @classmethod
    def build(cls, mu, m, modes, coeffs):
        return cls(float(mu), int(m), tuple(int(k) for k in modes),
                   tuple(float(b) for b in coeffs))

    def __call__(self, r, theta):
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(np.broadcast(r, theta).shape)
        for k, b in zip(self.modes, self.coeffs):
            out = out + b * bessel_j(k, self.mu * r) * np.cos(k * theta)
        return out

    def radial_derivative(self, r, theta):
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(np.broadcast(r, theta).shape)
        for k, b in zip(self.modes, self.coeffs):
            out = out + b * self.mu * bessel_j_prime(k, self.mu * r) * np.cos(k * theta)
        return out

    def helmholtz_residual(self, r, theta):
        """(Lap + mu^2) v evaluated through the identity chain."""
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(np.broadcast(r, theta).shape)
        mu = self.mu
        for k, b in zip(self.modes, self.coeffs):
            radial = (mu * mu * bessel_j_second(k, mu * r)
                      + mu * bessel_j_prime(k, mu * r) / r
                      - (k * k / (r * r)) * bessel_j(k, mu * r)
                      + mu * mu * bessel_j(k, mu * r))
            out = out + b * radial * np.cos(k * theta)
        return out

    def boundary_trace(self):
        return CosineSeries.build(
            list(self.modes),
            [b * bessel_j(k, self.mu) for k, b in zip(self.modes, self.coeffs)])

    def boundary_radial_trace(self):
        return CosineSeries.build(
            list(self.modes),
            [b * self.mu * bessel_j_prime(k, self.mu)
             for k, b in zip(self.modes, self.coeffs)])


@dataclass(frozen=True)
class LinearizedInput:
    """Argument triple (v, w, gamma) of the linearized boundary operator."""

    v: FourierBesselField
    w: ConformalMap
    gamma: float

    def __post_init__(self):
        if self.v.m != self.w.m:
            raise ConsistencyError(
                f"field symmetry m={self.v.m} != map symmetry m={self.w.m}")


def schwarz_lift(trace, m):
    """Unique symmetric holomorphic w with x . w = trace on the boundary.

    Exists iff the trace has mean zero (coefficient of mode 0); then
    w(z) = z G(z) with G(z) = sum_{k>0} g_k z^k, and the normalization
    a_1 = 0 holds automatically.
    """
    m = int(m)
    for k in trace.modes:
        if k != 0 and k % m != 0:
            raise DomainError(f"trace mode {k} outside the {m}-fold class")
    if abs(trace.mean) > 1e-13:
        raise SolvabilityError(
            f"mean-zero violated: constant coefficient {trace.mean:g}")
    exponents = [k + 1 for k in trace.modes if k != 0]
    coeffs = [trace.coefficient(k) for k in trace.modes if k != 0]
    return ConformalMap(m, exponents, coeffs)


def apply_linearized(inp, mu):
    """Linearized operator at the trivial solution, restricted to
    Fourier-Bessel fields so the interior component vanishes identically.

    Returns (interior residual sampler, kinematic trace, dynamic trace):
      interior: (r, theta) -> (Lap + mu^2) v      (zero up to rounding),
      kinematic: v + U_r(1) * (x . w)             on the boundary,
      dynamic:  U_r(1) v_r - U_rr(1) v + U_r(1) gamma   on the boundary,
    the traces as exact cosine series.
    """
    mu = float(mu)
    if abs(inp.v.mu - mu) > 1e-14 * max(1.0, abs(mu)):
        raise ConsistencyError(
            f"field built at mu={inp.v.mu!r}, operator evaluated at {mu!r}")
    trivial = TrivialSolution(mu)
    ur1 = trivial.c0
    urr1 = float(trivial.u_rr(1.0))

    v_trace = inp.v.boundary_trace()
    vr_trace = inp.v.boundary_radial_trace()
    xw_trace = inp.w.boundary_trace()

    modes = sorted(set(v_trace.modes) | set(xw_trace.modes) | {0})
    kinematic = CosineSeries.build(
        modes,
        [v_trace.coefficient(k) + ur1 * xw_trace.coefficient(k) for k in modes])
    dynamic = CosineSeries.build(
        modes,
        [ur1 * vr_trace.coefficient(k) - urr1 * v_trace.coefficient(k)
         + (ur1 * inp.gamma if k == 0 else 0.0) for k in modes])
    return inp.v.helmholtz_residual, kinematic, dynamic


@dataclass(frozen=True)
class KernelField:
    """Null direction of the linearized operator at mu_m: the Fourier-Bessel
    mode V_m = J_m(mu r) cos(m theta) paired with the monomial map
    W_m = amplitude * z^(m+1), amplitude = J_m(mu) J_0(mu) / (mu J_1(mu))."""

    m: int
    mu: float
    v: FourierBesselField
    w: ConformalMap

    @property
    def amplitude(self):
        return self.w.coefficient(self.m + 1)


def kernel_fields(m, mu):
    m = int(m)
    if m < 4:
        raise DomainError(f"mode m must be >= 4, got {m}")
    mu = float(mu)
    if not (_j11() < mu < _j02()):
        raise DomainError(f"mu={mu:g} outside ({_j11():.4f}, {_j02():.4f})")
    amplitude = (bessel_j(m, mu) * bessel_j(0, mu)
                 / (mu * bessel_j(1, mu)))
    v = FourierBesselField.build(mu, m, [m], [1.0])
    w = ConformalMap.single_mode(m, amplitude)
    return KernelField(m=m, mu=mu, v=v, w=w)


class AsymptoticFamily:
    """First-order member of the solution family at amplitude eps: the map
    phi = id + eps z^(m+1), the pulled-back field in disk coordinates with
    the second-order remainder dropped, and the leading values of the
    normal-derivative constant and the spectral parameter."""

    def __init__(self, m, eps):
        m = int(m)
        eps = float(eps)
        if abs(eps) > 0.2:
            raise DomainError(f"|eps| = {abs(eps):g} exceeds 0.2")
        if (m + 1) * abs(eps) >= 1.0:
            raise DomainError(
                f"injectivity certificate fails: (m+1)|eps| = {(m + 1) * abs(eps):g} >= 1")
        root = find_mu(m)
        mu = root.mu
        self.m = m
        self.eps = eps
        self.mu = mu
        self.map = (ConformalMap.single_mode(m, eps) if eps != 0.0
                    else ConformalMap.identity(m))
        trivial = TrivialSolution(mu)
        self.c = trivial.c0
        self.lam = mu * mu
        self._j0 = bessel_j(0, mu)
        self._j1 = bessel_j(1, mu)
        self._jm = bessel_j(m, mu)

    def u_disk(self, r, theta):
        """Pulled-back field at disk coordinates (r, theta), first order.

        The bracket multiplying eps vanishes at r = 1, so the boundary
        value is 1 up to rounding.
        """
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        mu, m = self.mu, self.m
        base = bessel_j(0, mu * r) / self._j0
        bracket = (self._j1 * bessel_j(m, mu * r) / (self._j0 * self._jm)
                   - bessel_j(1, mu * r) * r ** (m + 1) / self._j0)
        return base + self.eps * mu * bracket * np.cos(m * theta)

    def u_physical(self, z):
        """First-order field in original coordinates: the radial solution
        plus eps times the kernel mode, scaled to match the map
        normalization.  Composing it with phi reproduces u_disk up to
        second order; on the image boundary it deviates from 1 at O(eps^2).
        """
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        theta = np.angle(z)
        mu, m = self.mu, self.m
        kappa = mu * self._j1 / (self._j0 * self._jm)
        return (bessel_j(0, mu * r) / self._j0
                + self.eps * kappa * bessel_j(m, mu * r) * np.cos(m * theta))


def asymptotic_family(m, eps):
    """Build the first-order family member; see AsymptoticFamily."""
    return AsymptoticFamily(m, eps)


def first_order_boundary_deviation(m, eps, angles=512):
    """max |u1(phi(e^(i theta))) - 1| for the physical first-order field u1
    evaluated on the perturbed boundary.

    The O(eps) boundary displacement cancels against the O(eps) field
    perturbation, leaving a genuine O(eps^2) deviation; this is the
    quantity whose log-log slope certifies the first-order family.
    """
    family = AsymptoticFamily(m, eps)
    theta = np.linspace(0.0, 2.0 * np.pi, angles, endpoint=False)
    boundary = family.map.phi(np.exp(1j * theta))
    return float(np.max(np.abs(family.u_physical(boundary) - 1.0)))
