"""Lattice dispersion relation and elliptic parametrization of the spectral curve.

The dispersion gamma_theta, the unimodular coefficients b_theta, and the map
theta -> u_theta onto the real period interval [-K, K) of the uniformizing
elliptic functions, together with the coupling container that holds every
derived scalar (dual coupling, modulus, eta, ...).

Quasimomenta are handled as exact integer indices into a sector's ordered
momentum set wherever states are matched across modules; floating theta values
are produced only at evaluation sites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import brentq

from .elliptic import EllipticModulus, inverse_sn_real, jacobi_sn_cn_dn
from .exceptions import ConvergenceError, DomainError

_MIN_PERIOD_RATIO = 1e-3  # reject K'/K below this; theta-series precision collapses

SECTORS = ("a", "p")


def quasimomenta(sector: str, n: int) -> np.ndarray:
    """Ordered quasimomentum set of the antiperiodic ("a") or periodic ("p") sector.

    Sector "a" is {pi/N, 3pi/N, ..., 2pi - pi/N}; sector "p" is
    {0, 2pi/N, ..., 2pi - 2pi/N}.
    """
    if n < 1:
        raise DomainError(f"lattice width must be positive, got {n}")
    j = np.arange(n)
    if sector == "a":
        return (2 * j + 1) * math.pi / n
    if sector == "p":
        return 2 * j * math.pi / n
    raise DomainError(f"sector must be 'a' or 'p', got {sector!r}")


def theta_of_index(sector: str, index: int, n: int) -> float:
    """Momentum value for an integer index into the sector's ordered set."""
    if not 0 <= index < n:
        raise DomainError(f"momentum index {index} outside [0, {n})")
    if sector == "a":
        return (2 * index + 1) * math.pi / n
    if sector == "p":
        return 2 * index * math.pi / n
    raise DomainError(f"sector must be 'a' or 'p', got {sector!r}")


@dataclass(frozen=True)
class SpectralPoint:
    """One point of the spectral curve: quasimomentum with its attached data."""

    theta: float
    gamma: float
    b: complex
    u: float


@dataclass(frozen=True)
class Couplings:
    """Lattice width, couplings, and every derived scalar of the curve.

    Construction enforces the ferromagnetic region kx_star < ky (equivalently
    alpha < 1) and solves for the real parameter eta in (-K'/2, 0) satisfying
    sinh(2*kx) = i*sn(2i*eta).

    Pure data plus caches of per-sector spectral tables; immutable and safe
    to share across threads.
    """

    n: int
    kx: float
    ky: float
    kx_star: float
    alpha: float
    beta: float
    s: float
    modulus: EllipticModulus
    eta: float

    @classmethod
    def from_kx_ky(cls, kx: float, ky: float, n: int) -> "Couplings":
        if kx <= 0.0 or ky <= 0.0:
            raise DomainError(f"couplings must be positive, got kx={kx}, ky={ky}")
        if n < 1:
            raise DomainError(f"lattice width must be positive, got {n}")
        kx_star = math.atanh(math.exp(-2.0 * kx))
        if not kx_star < ky:
            raise DomainError(
                f"not in the ferromagnetic region: kx*={kx_star:.6f} >= ky={ky}"
            )
        alpha = math.tanh(kx_star) / math.tanh(ky)
        beta = math.tanh(kx_star) * math.tanh(ky)
        if not 0.0 < beta < alpha < 1.0:
            raise DomainError(f"expected 0 < beta < alpha < 1, got {beta}, {alpha}")
        s = math.sinh(2.0 * kx) * math.sinh(2.0 * ky)
        k = math.sinh(2.0 * kx_star) / math.sinh(2.0 * ky)
        modulus = EllipticModulus.from_k(k)
        if modulus.bigKprime / modulus.bigK < _MIN_PERIOD_RATIO:
            raise DomainError(
                f"couplings too close to criticality: K'/K = "
                f"{modulus.bigKprime / modulus.bigK:.2e} < {_MIN_PERIOD_RATIO}"
            )
        eta = _solve_eta(math.sinh(2.0 * kx), modulus)
        return cls(n=n, kx=kx, ky=ky, kx_star=kx_star, alpha=alpha, beta=beta,
                   s=s, modulus=modulus, eta=eta)

    @property
    def sinh2kx(self) -> float:
        return math.sinh(2.0 * self.kx)

    @property
    def sinh2ky(self) -> float:
        return math.sinh(2.0 * self.ky)

    @property
    def sinh2kx_star(self) -> float:
        return math.sinh(2.0 * self.kx_star)

    @property
    def xi(self) -> float:
        """|1 - s^{-2}|^{1/4}; the spontaneous magnetization is xi^{1/2}."""
        return abs(1.0 - self.s ** (-2)) ** 0.25

    # ---- per-sector spectral tables -------------------------------------

    @cached_property
    def thetas_a(self) -> np.ndarray:
        return quasimomenta("a", self.n)

    @cached_property
    def thetas_p(self) -> np.ndarray:
        return quasimomenta("p", self.n)

    @cached_property
    def gamma_a(self) -> np.ndarray:
        return gamma_of_theta(self.thetas_a, self)

    @cached_property
    def gamma_p(self) -> np.ndarray:
        return gamma_of_theta(self.thetas_p, self)

    @cached_property
    def u_a(self) -> np.ndarray:
        return np.array([u_of_theta(t, self) for t in self.thetas_a])

    @cached_property
    def u_p(self) -> np.ndarray:
        return np.array([u_of_theta(t, self) for t in self.thetas_p])

    @cached_property
    def b_a(self) -> np.ndarray:
        return b_of_theta(self.thetas_a, self)

    @cached_property
    def b_p(self) -> np.ndarray:
        return b_of_theta(self.thetas_p, self)

    @cached_property
    def sqrt_b_a(self) -> np.ndarray:
        return sqrt_b_of_theta(self.thetas_a, self)

    @cached_property
    def sqrt_b_p(self) -> np.ndarray:
        return sqrt_b_of_theta(self.thetas_p, self)

    @cached_property
    def nu_a(self) -> np.ndarray:
        return nu_of_gamma(self.gamma_a, self)

    @cached_property
    def nu_p(self) -> np.ndarray:
        return nu_of_gamma(self.gamma_p, self)

    def thetas(self, sector: str) -> np.ndarray:
        return self.thetas_a if sector == "a" else self.thetas_p

    def gammas(self, sector: str) -> np.ndarray:
        return self.gamma_a if sector == "a" else self.gamma_p

    def us(self, sector: str) -> np.ndarray:
        return self.u_a if sector == "a" else self.u_p

    def spectral_point(self, theta: float) -> SpectralPoint:
        return SpectralPoint(
            theta=float(theta),
            gamma=float(gamma_of_theta(theta, self)),
            b=complex(b_of_theta(theta, self)),
            u=u_of_theta(theta, self),
        )


def _solve_eta(target_sinh2kx: float, modulus: EllipticModulus) -> float:
    """Solve sinh(2*kx) = i*sn(2i*eta) for eta in (-K'/2, 0).

    For pure-imaginary argument, i*sn(2i*eta) = sc(2|eta|, k'), so the root
    is bracketed on (0, K') in the variable v = 2|eta| and found with a real
    one-dimensional solver.
    """
    comp = modulus.complementary()

    def sc(v: float) -> float:
        sn, cn, _ = jacobi_sn_cn_dn(v, comp)
        return sn.real / cn.real

    hi = comp.bigK * (1.0 - 1e-12)
    lo = comp.bigK * 1e-14
    f = lambda v: sc(v) - target_sinh2kx
    if not f(lo) < 0.0 < f(hi):
        raise ConvergenceError("failed to bracket eta")
    v = brentq(f, lo, hi, xtol=1e-15, rtol=8.9e-16)
    eta = -0.5 * v
    sn2ieta, _, _ = jacobi_sn_cn_dn(2j * eta, modulus)
    residual = abs(target_sinh2kx - (1j * sn2ieta))
    if residual > 1e-11:
        raise ConvergenceError(f"eta residual {residual:.3e} exceeds 1e-11")
    return eta


def eta_of_couplings(kx: float, ky: float) -> float:
    """The uniformization parameter eta in (-K'/2, 0) for given couplings."""
    return Couplings.from_kx_ky(kx, ky, 1).eta


def gamma_of_theta(theta, c: Couplings):
    """Single-particle energy gamma_theta >= 0 of the lattice dispersion."""
    ch = (math.cosh(2 * c.kx_star) * math.cosh(2 * c.ky)
          - math.sinh(2 * c.kx_star) * math.sinh(2 * c.ky) * np.cos(theta))
    return np.arccosh(ch)


def b_of_theta(theta, c: Couplings):
    """Unimodular coefficient b_theta, square-root branch with positive real part.

    Raises
    ------
    DomainError
        If the radicand lands on the negative real axis (branch cut); the
        branch is then ambiguous and no side is silently picked.
    """
    z = np.exp(1j * np.asarray(theta, dtype=float))
    num = (1.0 - c.alpha * z) * (1.0 - c.beta / z)
    den = (1.0 - c.beta * z) * (1.0 - c.alpha / z)
    ratio = num / den
    b = np.sqrt(ratio)
    if np.any(b.real <= 0.0):
        raise DomainError("b_theta radicand on the branch cut; cannot fix the sign")
    return b if b.ndim else complex(b)


def sqrt_b_of_theta(theta, c: Couplings):
    """Principal square root of b_theta; positive real part asserted.

    The convention sqrt(b_pi) = 1 fixes the branch used throughout the
    induced-rotation matrices.
    """
    root = np.sqrt(b_of_theta(theta, c))
    if np.any(np.asarray(root).real <= 0.0):
        raise DomainError("sqrt(b_theta) on the branch cut; cannot fix the sign")
    return root


def u_of_theta(theta: float, c: Couplings) -> float:
    """Image u_theta in [-K, K) of the spectral-curve point (e^{i theta}, e^{gamma}).

    Computed by inverting sn on
    sn(u_theta) = -sinh(2*ky) * cos(theta/2) / sinh((gamma_pi + gamma_theta)/2),
    which lands on the branch cn(u) >= 0 and carries the sign convention
    u_theta < 0 for theta < pi (u_0 = -K, u_pi = 0).  Near theta = 0 (where
    that inversion is ill-conditioned, |sn| -> 1) the complementary relation
    sn(u_theta + K) = sinh(2*ky) * sin(theta/2) / sinh((gamma_theta + gamma_0)/2)
    is inverted instead; whichever argument is smaller in magnitude wins.
    """
    gamma_0 = 2.0 * (c.ky - c.kx_star)
    gamma_pi = 2.0 * (c.ky + c.kx_star)
    gamma_t = float(gamma_of_theta(theta, c))
    s_direct = -c.sinh2ky * math.cos(theta / 2.0) / math.sinh((gamma_pi + gamma_t) / 2.0)
    s_shift = c.sinh2ky * math.sin(theta / 2.0) / math.sinh((gamma_t + gamma_0) / 2.0)
    if abs(s_direct) <= abs(s_shift):
        s = min(1.0, max(-1.0, s_direct))
        return inverse_sn_real(s, c.modulus)
    w = inverse_sn_real(min(1.0, s_shift), c.modulus) - c.modulus.bigK
    return w if theta <= math.pi else -w


def log_sinh(x):
    """log(sinh(x)) for x > 0, safe against overflow at large x."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)
    big = x > 20.0
    out[big] = x[big] - math.log(2.0) + np.log1p(-np.exp(-2.0 * x[big]))
    out[~big] = np.log(np.sinh(x[~big]))
    return float(out[0]) if scalar else out


def nu_of_gamma(gamma, c: Couplings):
    """Sector-asymmetry exponent nu for given single-particle energies.

    nu = sum over antiperiodic momenta of log sinh((gamma + gamma')/2)
    minus the same sum over periodic momenta; evaluated in log space so
    large energies cannot overflow.
    """
    gamma = np.asarray(gamma, dtype=float)
    g = gamma[..., None]
    term_a = log_sinh((g + c.gamma_a) / 2.0).sum(axis=-1)
    term_p = log_sinh((g + c.gamma_p) / 2.0).sum(axis=-1)
    out = term_a - term_p
    return out if out.ndim else float(out)


def b_elliptic(u: float, c: Couplings) -> complex:
    """sqrt(b) on the curve as a function of u, with the sign fixed by sqrt(b_pi) = 1.

    Evaluates (dn u + i*k*sn u*cn u)/sqrt(1 - k^2 sn^4 u); its square equals
    b_of_theta at the momentum corresponding to u.
    """
    k = c.modulus.k
    sn, cn, dn = jacobi_sn_cn_dn(u, c.modulus)
    sn, cn, dn = sn.real, cn.real, dn.real
    return (dn + 1j * k * sn * cn) / math.sqrt(1.0 - k**2 * sn**4)
