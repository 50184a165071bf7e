"""Cross-Wronskians of Bessel functions and their smallest positive roots.

For mode m >= 4 the Wronskian W_{1,m} = J_1 J_m' - J_m J_1' has a unique
simple root mu_m between the first two positive roots of J_1, and below
the second root of J_0.  These values are the bifurcation points of the
rest of the package; everything here certifies their existence, location,
simplicity, and monotonicity in m.
"""

from dataclasses import dataclass, field, asdict
from functools import lru_cache

import numpy as np

from .bessel import bessel_j, bessel_j_prime, bessel_root
from .errors import ConsistencyError, EnvelopeError

MIN_MODE = 4
MAX_MODE = 64

_ROOT_WIDTH = 1e-13


def wronskian(k, l, mu):
    """W_{k,l}(mu) = J_k(mu) J_l'(mu) - J_l(mu) J_k'(mu)."""
    return (bessel_j(k, mu) * bessel_j_prime(l, mu)
            - bessel_j(l, mu) * bessel_j_prime(k, mu))


def mu_wronskian_derivative(k, l, mu):
    """Closed form of d/dmu [mu W_{k,l}(mu)] = ((l^2-k^2)/mu) J_k J_l.

    Follows from the defining ODEs of J_k and J_l; no differencing.
    """
    if mu <= 0:
        raise EnvelopeError("mu must be positive")
    return (l * l - k * k) / mu * bessel_j(k, mu) * bessel_j(l, mu)


@lru_cache(maxsize=None)
def _j11():
    return bessel_root(1, 1).value


@lru_cache(maxsize=None)
def _j12():
    return bessel_root(1, 2).value


@lru_cache(maxsize=None)
def _j02():
    return bessel_root(0, 2).value


@dataclass(frozen=True)
class WronskianRoot:
    """Smallest positive root mu_m of W_{1,m} with its certificate data.

    bracket is the final bisection interval inside (j_{1,1}, j_{1,2});
    slope is d/dmu [mu W_{1,m}] at mu_m, negative for a simple root with
    W_{1,m}'(mu_m) = slope / mu_m != 0.
    """

    mode: int
    mu: float
    bracket: tuple
    slope: float


def _check_mode(m):
    if m != int(m) or m < MIN_MODE or m > MAX_MODE:
        raise EnvelopeError(
            f"mode must be an integer in [{MIN_MODE}, {MAX_MODE}], got {m}"
            " (smaller modes admit no such root)")
    return int(m)


@lru_cache(maxsize=None)
def find_mu(m):
    """Locate mu_m by bisection on (j_{1,1}, j_{1,2}) plus one Newton polish.

    The endpoint signs W(j_{1,1}) > 0 > W(j_{1,2}) are re-verified; a
    surprise there indicates a Bessel-layer bug, not bad input.  The
    lru_cache gives single-fill memoisation that is safe under concurrent
    readers (recomputation races produce identical values).
    """
    m = _check_mode(m)
    a, b = _j11(), _j12()
    fa, fb = wronskian(1, m, a), wronskian(1, m, b)
    if not (fa > 0 > fb):
        raise ConsistencyError(
            f"unexpected Wronskian signs at bracket ends for m={m}: "
            f"W(j11)={fa:g}, W(j12)={fb:g}")
    lo, hi, flo = a, b, fa
    while hi - lo > _ROOT_WIDTH:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = wronskian(1, m, mid)
        if fm == 0.0:
            lo = hi = mid
            break
        if flo * fm < 0:
            hi = mid
        else:
            lo, flo = mid, fm
    mu = 0.5 * (lo + hi)
    # One Newton step with the closed-form derivative
    # W' = (d(mu W)/dmu - W) / mu.
    w_val = wronskian(1, m, mu)
    w_prime = (mu_wronskian_derivative(1, m, mu) - w_val) / mu
    if w_prime != 0.0:
        polished = mu - w_val / w_prime
        if lo <= polished <= hi or abs(polished - mu) < 10 * _ROOT_WIDTH:
            mu = polished
    slope = mu_wronskian_derivative(1, m, mu)
    root = WronskianRoot(mode=m, mu=mu, bracket=(lo, hi), slope=slope)
    _certify(root)
    return root


def _certify(root):
    m, mu = root.mode, root.mu
    problems = []
    if not (_j11() < mu < _j02()):
        problems.append(f"mu_{m}={mu!r} outside (j11, j02)")
    if abs(wronskian(1, m, mu)) > 1e-12:
        problems.append(f"|W_(1,{m})(mu_{m})| = {abs(wronskian(1, m, mu)):g}")
    if not root.slope < 0:
        problems.append(f"slope {root.slope:g} not negative")
    if not (bessel_j(0, mu) < 0 and bessel_j(1, mu) < 0 and bessel_j(m, mu) > 0):
        problems.append("sign pattern J0<0, J1<0, Jm>0 violated")
    if problems:
        raise ConsistencyError(
            f"certificate failed for mu_{m}: " + "; ".join(problems))


@dataclass
class CheckItem:
    name: str
    passed: bool
    value: float
    margin: float

    def as_dict(self):
        return asdict(self)


@dataclass
class CertificateReport:
    """Structured pass/fail record of the bifurcation-value certificates."""

    m_max: int
    mu: dict = field(default_factory=dict)
    items: list = field(default_factory=list)
    identity_max_residual: float = 0.0

    @property
    def all_passed(self):
        return all(item.passed for item in self.items)

    @property
    def worst_margin(self):
        return min((item.margin for item in self.items), default=float("inf"))

    def add(self, name, passed, value, margin):
        self.items.append(CheckItem(name=name, passed=bool(passed),
                                    value=float(value), margin=float(margin)))

    def as_dict(self):
        return {
            "m_max": self.m_max,
            "mu": {str(k): v for k, v in self.mu.items()},
            "items": [item.as_dict() for item in self.items],
            "identity_max_residual": self.identity_max_residual,
            "all_passed": self.all_passed,
            "worst_margin": self.worst_margin,
        }


def verify_bifurcation_values(m_max, identity_samples=100, seed=0):
    """Machine-check the whole chain of root certificates for 4 <= m <= m_max.

    Per mode: bracketing signs, location, |W| at the root, negative slope
    (simplicity), the J_0/J_1/J_m sign pattern, strict decrease of mu_m,
    and W_{1,m+1}(mu_m) < 0.  Globally: the three-term identity
    J_1 W_{k,m} - J_k W_{1,m} + J_m W_{1,k} = 0 at random (k, m, mu), and
    the sign of W_{1,4} at j_{0,2} that pins mu_4 below j_{0,2}.
    Failures are recorded in the report, not raised.
    """
    m_max = _check_mode(m_max)
    report = CertificateReport(m_max=m_max)
    j11, j12, j02 = _j11(), _j12(), _j02()

    w14 = wronskian(1, 4, j02)
    report.add("W14_at_j02", w14 < 0, w14, -w14)

    prev_mu = None
    for m in range(MIN_MODE, m_max + 1):
        fa, fb = wronskian(1, m, j11), wronskian(1, m, j12)
        report.add(f"bracket_signs_m{m}", fa > 0 > fb, fa, min(fa, -fb))
        root = find_mu(m)
        mu = root.mu
        report.add(f"mu_in_interval_m{m}", j11 < mu < j02, mu,
                   min(mu - j11, j02 - mu))
        w_at = abs(wronskian(1, m, mu))
        report.add(f"wronskian_at_root_m{m}", w_at <= 1e-12, w_at,
                   1e-12 - w_at)
        report.add(f"slope_negative_m{m}", root.slope < 0, root.slope,
                   -root.slope)
        j0v, j1v, jmv = bessel_j(0, mu), bessel_j(1, mu), bessel_j(m, mu)
        report.add(f"signs_m{m}", j0v < 0 and j1v < 0 and jmv > 0,
                   jmv, min(-j0v, -j1v, jmv))
        if prev_mu is not None:
            report.add(f"monotone_m{m}", mu < prev_mu, mu, prev_mu - mu)
        prev_mu = mu
        # Kernel-uniqueness ingredient: the next Wronskian is already
        # negative at mu_m.
        w_next = wronskian(1, m + 1, mu)
        report.add(f"next_wronskian_negative_m{m}", w_next < 0, w_next,
                   -w_next)
        report.mu[m] = mu

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(identity_samples):
        k = int(rng.integers(0, 33))
        m = int(rng.integers(0, 33))
        mu = float(rng.uniform(0.5, 10.0))
        res = abs(bessel_j(1, mu) * wronskian(k, m, mu)
                  - bessel_j(k, mu) * wronskian(1, m, mu)
                  + bessel_j(m, mu) * wronskian(1, k, mu))
        worst = max(worst, res)
    report.identity_max_residual = worst
    report.add("three_term_identity", worst <= 1e-12, worst, 1e-12 - worst)
    return report
