"""Elliptic Cauchy matrices and the closed forms built from them.

Covers the Frobenius determinant and inverse of matrices with entries
theta_1(x_i - y_j + alpha) / (theta_1(x_i - y_j) * theta_1(alpha)), the
balanced theta-interpolation sum, the sn-pfaffian product identity, and the
specialization to the two sector-coupling matrices

    Phi[theta, theta'] = dn(u_theta - u_theta') / sn(u_theta - u_theta'),
    Psi[theta, theta'] = cn(u_theta - u_theta'),

with rows on the periodic momentum set and columns on the antiperiodic one.
Their inverse and the products Psi*Phi^-1, Phi^-1*Psi are evaluated in closed
form.  The default code paths use the reduced sn-forms; the raw theta-product
forms are kept behind a ``theta_route`` flag purely for cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .elliptic import EllipticModulus, jacobi_sn_cn_dn, theta
from .exceptions import DomainError, SingularMatrixError
from .spectral import Couplings, log_sinh

_LATTICE_TOL = 1e-11


def _theta1_zero_distance(z: complex, q: float) -> float:
    """Distance from z to the zero lattice pi*Z + pi*tau*Z of theta_1."""
    pit = -math.log(q)
    return math.hypot(math.remainder(z.real, math.pi),
                      math.remainder(z.imag, pit))


def _th1(z, q: float):
    """theta_1 over an array of arguments."""
    z = np.asarray(z, dtype=complex)
    flat = np.array([theta(1, zi, q) for zi in z.ravel()])
    return flat.reshape(z.shape) if z.shape else complex(flat[0])


@dataclass(frozen=True)
class EllipticPointConfig:
    """Point data (x_i, y_i, alpha) of an elliptic Cauchy matrix of nome q."""

    xs: tuple
    ys: tuple
    q: float
    alpha_shift: complex

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(complex(x) for x in self.xs))
        object.__setattr__(self, "ys", tuple(complex(y) for y in self.ys))
        if len(self.xs) != len(self.ys):
            raise DomainError("xs and ys must have the same length")
        for x in self.xs:
            for y in self.ys:
                if _theta1_zero_distance(x - y, self.q) < _LATTICE_TOL:
                    raise DomainError(
                        f"x - y = {x - y} is on the zero lattice of theta_1"
                    )

    @property
    def size(self) -> int:
        return len(self.xs)


def elliptic_cauchy_matrix(cfg: EllipticPointConfig) -> np.ndarray:
    """Dense entries theta_1(x_i - y_j + alpha)/(theta_1(x_i - y_j) theta_1(alpha))."""
    xs, ys = np.array(cfg.xs), np.array(cfg.ys)
    ta = theta(1, cfg.alpha_shift, cfg.q)
    if abs(ta) < _LATTICE_TOL:
        raise DomainError("theta_1(alpha) vanishes; Cauchy entries undefined")
    diff = xs[:, None] - ys[None, :]
    return _th1(diff + cfg.alpha_shift, cfg.q) / (_th1(diff, cfg.q) * ta)


def frobenius_det(cfg: EllipticPointConfig) -> complex:
    """Closed-form determinant of the elliptic Cauchy matrix."""
    xs, ys, q = np.array(cfg.xs), np.array(cfg.ys), cfg.q
    ta = theta(1, cfg.alpha_shift, q)
    if abs(ta) < _LATTICE_TOL:
        raise DomainError("theta_1(alpha) vanishes; determinant undefined")
    n = cfg.size
    total = theta(1, xs.sum() - ys.sum() + cfg.alpha_shift, q) / ta
    for i in range(n):
        for j in range(i + 1, n):
            total *= theta(1, xs[i] - xs[j], q) * theta(1, ys[j] - ys[i], q)
    diff = xs[:, None] - ys[None, :]
    total /= np.prod(_th1(diff, q))
    return complex(total)


def frobenius_inverse(cfg: EllipticPointConfig) -> np.ndarray:
    """Closed-form inverse from the Frobenius determinant and its cofactors.

    Entry (m, n) pairs the n-th x point with the m-th y point.

    Raises
    ------
    SingularMatrixError
        If theta_1 vanishes at the balancing sum sum(x) - sum(y) + alpha.
    """
    xs, ys, q = np.array(cfg.xs), np.array(cfg.ys), cfg.q
    n = cfg.size
    bal = xs.sum() - ys.sum() + cfg.alpha_shift
    t_bal = theta(1, bal, q)
    if _theta1_zero_distance(complex(bal), q) < _LATTICE_TOL:
        raise SingularMatrixError("balancing sum on the zero lattice; matrix singular")
    tx = _th1(xs[:, None] - ys[None, :], q)          # theta_1(x_i - y_j)
    out = np.empty((n, n), dtype=complex)
    for m in range(n):
        for nn in range(n):
            num = theta(1, bal - xs[nn] + ys[m], q)
            val = -num / (t_bal * theta(1, xs[nn] - ys[m], q))
            prod = np.prod(tx[nn, :]) * np.prod(_th1(ys[m] - xs, q))
            for i in range(n):
                if i != nn:
                    prod /= theta(1, xs[nn] - xs[i], q)
                if i != m:
                    prod /= theta(1, ys[m] - ys[i], q)
            out[m, nn] = val * prod
    return out


def _interpolation_terms(zs, zs_prime, q: float) -> np.ndarray:
    zs = np.asarray(zs, dtype=complex)
    zp = np.asarray(zs_prime, dtype=complex)
    m = len(zs)
    terms = np.empty(m, dtype=complex)
    for i in range(m):
        num = np.prod(_th1(zs[i] - zp, q))
        den = 1.0 + 0.0j
        for j in range(m):
            if j != i:
                den *= theta(1, zs[i] - zs[j], q)
        terms[i] = num / den
    return terms


def theta_interpolation_sum(zs, zs_prime, q: float) -> complex:
    """Balanced theta-interpolation sum; vanishes for balanced points.

    Computes sum_i prod_j theta_1(z_i - z'_j) / prod_{j != i} theta_1(z_i - z_j)
    for point sets satisfying sum(z) = sum(z'), for which the result is zero
    up to rounding (|sum| <= 1e-10 times the magnitude of the largest term).

    Raises
    ------
    DomainError
        If the balancing condition is violated beyond 1e-12.
    """
    zs = np.asarray(zs, dtype=complex)
    zp = np.asarray(zs_prime, dtype=complex)
    if len(zs) != len(zp):
        raise DomainError("point sets must have the same length")
    imbalance = abs(zs.sum() - zp.sum())
    if imbalance > 1e-12:
        raise DomainError(f"points not balanced: |sum z - sum z'| = {imbalance:.3e}")
    return complex(_interpolation_terms(zs, zp, q).sum())


def sn_pfaffian_product(us, mod: EllipticModulus) -> complex:
    """Product over i < j of sqrt(k)*sn(u_i - u_j), for an even number of points.

    Equals the pfaffian of the antisymmetric matrix sqrt(k)*sn(u_i - u_j);
    coincident points give 0, consistent with the degenerate pfaffian.
    """
    us = np.asarray(us, dtype=complex)
    if len(us) % 2 != 0:
        raise DomainError("sn pfaffian product needs an even number of points")
    sqk = math.sqrt(mod.k)
    total = 1.0 + 0.0j
    for i in range(len(us)):
        for j in range(i + 1, len(us)):
            d = us[i] - us[j]
            sn = 0.0 if d == 0 else jacobi_sn_cn_dn(d, mod)[0]
            total *= sqk * sn
    return complex(total)


# ---- Ising specialization ------------------------------------------------


@lru_cache(maxsize=32)
def _sn_tables(c: Couplings) -> tuple[np.ndarray, np.ndarray]:
    """(sn of periodic u's, sn of antiperiodic u's)."""
    sn_p = np.array([jacobi_sn_cn_dn(u, c.modulus)[0].real for u in c.u_p])
    sn_a = np.array([jacobi_sn_cn_dn(u, c.modulus)[0].real for u in c.u_a])
    return sn_p, sn_a


def ising_xy(c: Couplings) -> tuple[np.ndarray, np.ndarray]:
    """Theta-argument points x_i (periodic) and y_i (antiperiodic), u scaled by pi/2K."""
    scale = math.pi / (2.0 * c.modulus.bigK)
    return c.u_p * scale, c.u_a * scale


def ising_constraint_residuals(c: Couplings) -> dict[str, float]:
    """Residuals of the point-pairing constraints of the Ising configuration.

    Both parities share x_1 = -pi/2, the pairwise cancellations
    x_j + x_{N+2-j} = 0 and y_k + y_{N+1-k} = 0, and the balancing sum
    sum(x) - sum(y) = -pi/2.  Odd N additionally has y_{(N+1)/2} = 0, even N
    has x_{N/2+1} = 0.
    """
    xs, ys = ising_xy(c)
    n = c.n
    res = {"x1_plus_half_pi": abs(xs[0] + math.pi / 2.0)}
    pair_x = max((abs(xs[j] + xs[n - j]) for j in range(1, n)), default=0.0)
    pair_y = max((abs(ys[k] + ys[n - 1 - k]) for k in range(n)), default=0.0)
    res["x_pairing"] = pair_x
    res["y_pairing"] = pair_y
    if n % 2 == 0:
        res["middle_point"] = abs(xs[n // 2])
    else:
        res["middle_point"] = abs(ys[(n - 1) // 2])
    res["balancing_sum"] = abs(xs.sum() - ys.sum() + math.pi / 2.0)
    return res


def _diff_sn(u_rows: np.ndarray, u_cols: np.ndarray, mod: EllipticModulus,
             which: int) -> np.ndarray:
    """sn/cn/dn (which = 0/1/2) of all pairwise differences, real arguments."""
    out = np.empty((len(u_rows), len(u_cols)))
    for i, ui in enumerate(u_rows):
        for j, uj in enumerate(u_cols):
            d = ui - uj
            if d == 0:
                out[i, j] = (0.0, 1.0, 1.0)[which]
            else:
                out[i, j] = jacobi_sn_cn_dn(d, mod)[which].real
    return out


def phi_matrix(c: Couplings) -> np.ndarray:
    """Phi with rows on periodic momenta and columns on antiperiodic ones."""
    sn = _diff_sn(c.u_p, c.u_a, c.modulus, 0)
    dn = _diff_sn(c.u_p, c.u_a, c.modulus, 2)
    return dn / sn


def psi_matrix(c: Couplings) -> np.ndarray:
    """Psi = cn of pairwise differences, same index layout as Phi."""
    return _diff_sn(c.u_p, c.u_a, c.modulus, 1)


def fg_factors(c: Couplings) -> tuple[np.ndarray, np.ndarray]:
    """Per-point theta-product factors entering the closed-form inverse of Phi."""
    xs, ys = ising_xy(c)
    q = c.modulus.q
    t2, t3, t4 = c.modulus._theta_zeros
    pref = 1j * t3 / (t2 * t4)
    n = c.n
    f = np.empty(n, dtype=complex)
    g = np.empty(n, dtype=complex)
    for i in range(n):
        num = np.prod(_th1(xs[i] - ys, q))
        den = np.prod([theta(1, xs[i] - xs[j], q) for j in range(n) if j != i]) \
            if n > 1 else 1.0
        f[i] = pref * num / den
        num = np.prod(_th1(ys[i] - xs, q))
        den = np.prod([theta(1, ys[i] - ys[j], q) for j in range(n) if j != i]) \
            if n > 1 else 1.0
        g[i] = pref * num / den
    return f, g


def h_function(z: complex, c: Couplings) -> complex:
    """h(z) = prod_i theta_1(z - x_i)/theta_1(z - y_i); verification route only."""
    xs, ys = ising_xy(c)
    q = c.modulus.q
    return complex(np.prod(_th1(z - xs, q)) / np.prod(_th1(z - ys, q)))


def phi_inverse_closed(c: Couplings) -> np.ndarray:
    """Phi^-1 with rows on antiperiodic momenta and columns on periodic ones.

    Entries f_n * g_m / sn(u_n - v_m) with the theta-product factors of
    :func:`fg_factors`.
    """
    f, g = fg_factors(c)
    sn = _diff_sn(c.u_p, c.u_a, c.modulus, 0)  # sn(u_n - v_m), index [n, m]
    return (f[None, :] * g[:, None]) / sn.T


def phi_inverse_trig(c: Couplings) -> np.ndarray:
    """Phi^-1 from the fully reduced trigonometric formula (cross-check route)."""
    n = c.n
    ga, gp = c.gamma_a, c.gamma_p
    half_sum = (ga[:, None] + gp[None, :]) / 2.0
    sin_half = np.sin((c.thetas_a[:, None] - c.thetas_p[None, :]) / 2.0)
    amp = np.exp((c.nu_a[:, None] - c.nu_p[None, :]) / 2.0)
    return (-c.sinh2ky * amp * np.sinh(half_sum)
            / (n**2 * np.sinh(ga)[:, None] * np.sinh(gp)[None, :] * sin_half))


def chi_kappa(c: Couplings) -> tuple[np.ndarray, np.ndarray]:
    """Cross-sector sn-product ratios chi (periodic) and kappa (antiperiodic)."""
    sn_pa = _diff_sn(c.u_p, c.u_a, c.modulus, 0)
    sn_pp = _diff_sn(c.u_p, c.u_p, c.modulus, 0)
    sn_aa = _diff_sn(c.u_a, c.u_a, c.modulus, 0)
    n = c.n
    chi = np.empty(n)
    kappa = np.empty(n)
    for i in range(n):
        chi[i] = np.prod(sn_pa[i, :]) / np.prod(
            [sn_pp[i, j] for j in range(n) if j != i])
        kappa[i] = np.prod(-sn_pa[:, i]) / np.prod(
            [sn_aa[i, j] for j in range(n) if j != i])
    return chi, kappa


def chi_kappa_trig(c: Couplings) -> tuple[np.ndarray, np.ndarray]:
    """chi and kappa through the explicit momentum products (cross-check route).

    The sine products over full momentum sets collapse to +-1/N, leaving
    chi = -exp(-nu) sinh(2*ky)/(N sinh gamma) on the periodic set and
    kappa = +exp(+nu) sinh(2*ky)/(N sinh gamma) on the antiperiodic one.
    """
    chi = -np.exp(-c.nu_p) * c.sinh2ky / (c.n * np.sinh(c.gamma_p))
    kappa = np.exp(c.nu_a) * c.sinh2ky / (c.n * np.sinh(c.gamma_a))
    return chi, kappa


def lambda_uv(u: float, v: float, c: Couplings) -> float:
    """Ratio lambda(u, v) in its reduced sn-form."""
    mod = c.modulus
    k = mod.k
    sn_p, sn_a = _sn_tables(c)
    snu, _, dnu = jacobi_sn_cn_dn(u, mod)
    snv, _, dnv = jacobi_sn_cn_dn(v, mod)
    snu, dnu, snv, dnv = snu.real, dnu.real, snv.real, dnv.real
    val = dnu * (1.0 + k * snv) / (dnv * (1.0 + k * snu))
    val *= np.prod((1.0 - k * sn_p * snu) * (1.0 - k * sn_a * snv)
                   / ((1.0 - k * sn_a * snu) * (1.0 - k * sn_p * snv)))
    return float(val)


def psi_phi_inverse_closed(c: Couplings, theta_route: bool = False) -> np.ndarray:
    """Closed form of Psi * Phi^-1, indexed by periodic momenta on both axes.

    The default path uses the reduced sn-form (chi and lambda factors); with
    ``theta_route=True`` the raw theta-product form through h(z) is used
    instead, for cross-checking only.
    """
    n = c.n
    sn_pp = _diff_sn(c.u_p, c.u_p, c.modulus, 0)
    out = np.zeros((n, n), dtype=complex)
    if theta_route:
        f, _ = fg_factors(c)
        xs, _ = ising_xy(c)
        pitau_half = math.pi * c.modulus.tau / 2.0
        hvals = np.array([h_function(x + pitau_half, c) for x in xs])
        for l in range(n):
            for m in range(n):
                if l != m:
                    out[l, m] = f[m] * hvals[l] * sn_pp[l, m]
        return out
    chi, _ = chi_kappa(c)
    for l in range(n):
        for m in range(n):
            if l != m:
                out[l, m] = chi[m] * lambda_uv(c.u_p[l], c.u_p[m], c) * sn_pp[l, m]
    return out


def phi_inverse_psi_closed(c: Couplings, theta_route: bool = False) -> np.ndarray:
    """Closed form of Phi^-1 * Psi, indexed by antiperiodic momenta on both axes."""
    n = c.n
    sn_aa = _diff_sn(c.u_a, c.u_a, c.modulus, 0)
    out = np.zeros((n, n), dtype=complex)
    if theta_route:
        _, g = fg_factors(c)
        _, ys = ising_xy(c)
        pitau_half = math.pi * c.modulus.tau / 2.0
        hvals = np.array([h_function(y - pitau_half, c) for y in ys])
        for m in range(n):
            for l in range(n):
                if l != m:
                    out[m, l] = -g[m] / hvals[l] * sn_aa[m, l]
        return out
    _, kappa = chi_kappa(c)
    for m in range(n):
        for l in range(n):
            if l != m:
                out[m, l] = kappa[m] * lambda_uv(c.u_a[m], c.u_a[l], c) * sn_aa[l, m]
    return out


def det_phi_theta(c: Couplings) -> complex:
    """det(Phi) from the theta-function closed form."""
    xs, ys = ising_xy(c)
    q = c.modulus.q
    n = c.n
    t2, t3, t4 = c.modulus._theta_zeros
    pitau = math.pi * c.modulus.tau
    bal = xs.sum() - ys.sum()
    pref = (t2**n * t4**n / t3 ** (n + 1)) * np.exp(-1j * (bal - pitau / 4.0))
    total = pref * theta(1, bal + math.pi / 2.0 - pitau / 2.0, q)
    for i in range(n):
        for j in range(i + 1, n):
            total *= theta(1, xs[i] - xs[j], q) * theta(1, ys[j] - ys[i], q)
    total /= np.prod(_th1(xs[:, None] - ys[None, :], q))
    return complex(total)


def det_phi_squared_trig(c: Couplings) -> float:
    """(det Phi)^2 from the fully reduced trigonometric formula, in log space."""
    n = c.n
    log_val = (2.0 * n * math.log(n)
               + 0.5 * math.log1p(-c.modulus.k**2)
               - 2.0 * n * math.log(c.sinh2ky)
               + 0.5 * (c.nu_p.sum() - c.nu_a.sum())
               + log_sinh(c.gamma_p).sum() + log_sinh(c.gamma_a).sum())
    return math.exp(log_val)
