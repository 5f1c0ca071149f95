"""Induced rotations, two-particle matrices, and multiparticle spin form factors.

The spin operator at site l conjugates periodic-sector fermions into linear
combinations of antiperiodic ones; the four N x N blocks (A, B, C, D) of that
induced rotation determine every matrix element of the spin between the two
fermionic Fock towers.  Normalized two-particle form factors are entries of
D^-1, B*D^-1 and D^-1*C; any multiparticle form factor is the pfaffian of a
matrix assembled from those, or equivalently the fully factorized closed
product over the participating momenta.

Phase convention: the vacuum-to-vacuum matrix element is declared real
positive.  Bra momenta are supplied in ascending order, ket momenta likewise;
swapping two momenta flips the sign of the form factor in both routes.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .elliptic import jacobi_sn_cn_dn
from .exceptions import DomainError, VerificationError
from .linalg import pfaffian
from .spectral import Couplings, gamma_of_theta, nu_of_gamma, theta_of_index

_FULL_ENUMERATION_MAX_N = 10
_DEFAULT_PARTICLE_CUTOFF = 4


@dataclass(frozen=True)
class FockState:
    """A fermionic eigenstate label: sector plus strictly increasing momenta.

    Momenta are integer indices into the sector's ordered quasimomentum set,
    so states can be matched across modules without floating-point drift.
    """

    sector: str
    indices: tuple[int, ...]

    def __post_init__(self):
        if self.sector not in ("a", "p"):
            raise DomainError(f"sector must be 'a' or 'p', got {self.sector!r}")
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if any(j <= i for i, j in zip(self.indices, self.indices[1:])):
            raise DomainError(
                f"momenta must be strictly increasing (fermionic exclusion), "
                f"got {self.indices}"
            )

    def validate(self, n: int) -> None:
        if self.indices and not (0 <= self.indices[0] and self.indices[-1] < n):
            raise DomainError(f"momentum indices {self.indices} outside [0, {n})")

    def momenta(self, n: int) -> np.ndarray:
        self.validate(n)
        return np.array([theta_of_index(self.sector, i, n) for i in self.indices])

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class FormFactorSpec:
    """Which matrix element to compute: site plus bra (sector a) and ket (sector p).

    The m + n odd case vanishes identically by the charge selection rule and
    is rejected on construction.
    """

    site: int
    bra: FockState
    ket: FockState

    def __post_init__(self):
        if self.bra.sector != "a":
            raise DomainError("bra must live in the antiperiodic sector")
        if self.ket.sector != "p":
            raise DomainError("ket must live in the periodic sector")
        if (len(self.bra) + len(self.ket)) % 2 != 0:
            raise DomainError(
                "m + n must be even; odd matrix elements vanish by charge selection"
            )


@dataclass(frozen=True)
class InducedRotation:
    """The four blocks of the fermion rotation induced by the spin at one site.

    Rows are indexed by periodic momenta, columns by antiperiodic ones.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    site: int

    def relation_residuals(self) -> dict[str, float]:
        """Max residuals of the canonical anticommutation and unitarity relations."""
        a, b, c, d = self.a, self.b, self.c, self.d
        eye = np.eye(a.shape[0])
        return {
            "ABt_plus_BAt": float(np.max(np.abs(a @ b.T + b @ a.T))),
            "CDt_plus_DCt": float(np.max(np.abs(c @ d.T + d @ c.T))),
            "ADt_plus_BCt": float(np.max(np.abs(a @ d.T + b @ c.T - eye))),
            "conjA_minus_D": float(np.max(np.abs(a.conj() - d))),
            "conjB_minus_C": float(np.max(np.abs(b.conj() - c))),
            "CCdag_vs_1_minus_DDdag": float(
                np.max(np.abs(c @ c.conj().T - (eye - d @ d.conj().T)))
            ),
        }


def nu_of_theta(theta: float, c: Couplings):
    """Sector-asymmetry exponent nu at momentum theta.

    Defined as the log-ratio of the products of sinh((gamma_theta+gamma')/2)
    over the antiperiodic and the periodic momentum sets.
    """
    return nu_of_gamma(gamma_of_theta(theta, c), c)


def induced_rotation(c: Couplings, site: int) -> InducedRotation:
    """The blocks (A, B, C, D) of the rotation induced by the spin at ``site``."""
    if not 0 <= site < c.n:
        raise DomainError(f"site {site} outside [0, {c.n})")
    n = c.n
    tp = c.thetas_p[:, None]
    ta = c.thetas_a[None, :]
    rb = c.sqrt_b_a[None, :] / c.sqrt_b_p[:, None]
    pb = c.sqrt_b_a[None, :] * c.sqrt_b_p[:, None]
    ell = site - 0.5
    d = (np.exp(-1j * ell * (tp - ta)) / (2j * n * np.sin((ta - tp) / 2.0))
         * (rb + 1.0 / rb))
    cc = (np.exp(-1j * ell * (tp + ta)) / (2j * n * np.sin((tp + ta) / 2.0))
          * (pb - 1.0 / pb))
    return InducedRotation(a=d.conj(), b=cc.conj(), c=cc, d=d, site=site)


@lru_cache(maxsize=64)
def _site_independent_tables(c: Couplings) -> dict:
    """Pair ratios entering all closed-form matrices, independent of the site."""
    ga, gp = c.gamma_a, c.gamma_p
    rho2 = c.sinh2ky / c.sinh2kx
    tab = {}
    tab["ap_ratio"] = (np.sinh((ga[:, None] + gp[None, :]) / 2.0)
                       / np.sin((c.thetas_a[:, None] - c.thetas_p[None, :]) / 2.0))
    for sec, th, g in (("a", c.thetas_a, ga), ("p", c.thetas_p, gp)):
        ratio = np.sin((th[:, None] - th[None, :]) / 2.0) \
            / np.sinh((g[:, None] + g[None, :]) / 2.0)
        np.fill_diagonal(ratio, 0.0)
        tab[f"{sec}{sec}_ratio"] = ratio
    tab["amp_a"] = np.exp(c.nu_a / 2.0) / np.sqrt(c.n * np.sinh(ga))
    tab["amp_p"] = np.exp(-c.nu_p / 2.0) / np.sqrt(c.n * np.sinh(gp))
    tab["rho2"] = rho2
    return tab


def two_particle_matrices(c: Couplings, site: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Closed forms of (D^-1, B*D^-1, D^-1*C) for the rotation at ``site``.

    D^-1 is indexed antiperiodic x periodic; B*D^-1 periodic x periodic;
    D^-1*C antiperiodic x antiperiodic.  The entries are the normalized
    two-particle form factors.
    """
    if not 0 <= site < c.n:
        raise DomainError(f"site {site} outside [0, {c.n})")
    n = c.n
    tab = _site_independent_tables(c)
    ell = site - 0.5
    ta, tp = c.thetas_a, c.thetas_p
    amp_a, amp_p = tab["amp_a"], tab["amp_p"]
    dinv = (1j * np.exp(-1j * ell * (ta[:, None] - tp[None, :]))
            * amp_a[:, None] * amp_p[None, :] * tab["ap_ratio"])
    bdinv = (-1j * np.exp(1j * ell * (tp[:, None] + tp[None, :]))
             * tab["rho2"] * amp_p[:, None] * amp_p[None, :] * tab["pp_ratio"])
    dinvc = (-1j * np.exp(-1j * ell * (ta[:, None] + ta[None, :]))
             * tab["rho2"] * amp_a[:, None] * amp_a[None, :] * tab["aa_ratio"])
    return dinv, bdinv, dinvc


def xi_t(c: Couplings) -> float:
    """Finite-size correction factor multiplying the infinite-lattice amplitude."""
    return math.exp((c.nu_p.sum() - c.nu_a.sum()) / 4.0)


def vacuum_overlap(c: Couplings) -> float:
    """Vacuum-to-vacuum spin matrix element |det D|^{1/2}, evaluated in log space.

    Equals [(1 - k^2) * prod_p e^{nu} * prod_a e^{-nu}]^{1/8}; converges to
    the spontaneous magnetization (1 - s^{-2})^{1/8} as N grows.
    """
    log_val = (math.log1p(-c.modulus.k**2) + c.nu_p.sum() - c.nu_a.sum()) / 8.0
    return math.exp(log_val)


def _check_spec(spec: FormFactorSpec, c: Couplings) -> None:
    spec.bra.validate(c.n)
    spec.ket.validate(c.n)
    if not 0 <= spec.site < c.n:
        raise DomainError(f"site {spec.site} outside [0, {c.n})")


def assemble_r_matrix(spec: FormFactorSpec, c: Couplings) -> np.ndarray:
    """Antisymmetric pairing matrix R of the pfaffian representation.

    Blocks: bra x bra from D^-1*C, bra x ket from D^-1, ket x ket from B*D^-1.
    """
    _check_spec(spec, c)
    m, n = len(spec.bra), len(spec.ket)
    dinv, bdinv, dinvc = two_particle_matrices(c, spec.site)
    ia = np.array(spec.bra.indices, dtype=int)
    ip = np.array(spec.ket.indices, dtype=int)
    r = np.zeros((m + n, m + n), dtype=complex)
    if m:
        r[:m, :m] = dinvc[np.ix_(ia, ia)]
    if m and n:
        r[:m, m:] = dinv[np.ix_(ia, ip)]
        r[m:, :m] = -r[:m, m:].T
    if n:
        r[m:, m:] = bdinv[np.ix_(ip, ip)]
    return r


def assemble_r_elliptic(spec: FormFactorSpec, c: Couplings) -> np.ndarray:
    """R rebuilt from the elliptic route: -i*rho * Omega * Rt * Omega.

    Rt has entries sqrt(k)*sn(u_i - u_j) where bra arguments carry an iK'
    shift; used as a cross-check of :func:`assemble_r_matrix`.
    """
    _check_spec(spec, c)
    m, n = len(spec.bra), len(spec.ket)
    ia = np.array(spec.bra.indices, dtype=int)
    ip = np.array(spec.ket.indices, dtype=int)
    rho = math.sqrt(c.sinh2ky / c.sinh2kx)
    ell = spec.site - 0.5
    omega = np.concatenate([
        -np.exp(-1j * ell * c.thetas_a[ia] + c.nu_a[ia] / 2.0)
        / np.sqrt(c.n * np.sinh(c.gamma_a[ia])),
        np.exp(1j * ell * c.thetas_p[ip] - c.nu_p[ip] / 2.0)
        / np.sqrt(c.n * np.sinh(c.gamma_p[ip])),
    ])
    u_tilde = np.concatenate([
        c.u_a[ia] + 1j * c.modulus.bigKprime,
        c.u_p[ip].astype(complex),
    ])
    sqk = math.sqrt(c.modulus.k)
    rt = np.zeros((m + n, m + n), dtype=complex)
    for i in range(m + n):
        for j in range(i + 1, m + n):
            rt[i, j] = sqk * jacobi_sn_cn_dn(u_tilde[i] - u_tilde[j], c.modulus)[0]
            rt[j, i] = -rt[i, j]
    return -1j * rho * (omega[:, None] * rt * omega[None, :])


def ff_pfaffian(spec: FormFactorSpec, c: Couplings) -> complex:
    """Form factor as |det D|^{1/2} times the pfaffian of the pairing matrix."""
    r = assemble_r_matrix(spec, c)
    return vacuum_overlap(c) * pfaffian(r)


def ff_closed(spec: FormFactorSpec, c: Couplings) -> complex:
    """Fully factorized closed form of the (m, n)-particle form factor.

    The leading power of i has an integer exponent for even m + n and is
    evaluated as such, so no branch choice enters; the result agrees with the
    pfaffian route including its phase.
    """
    _check_spec(spec, c)
    m, n = len(spec.bra), len(spec.ket)
    ia = np.array(spec.bra.indices, dtype=int)
    ip = np.array(spec.ket.indices, dtype=int)
    tab = _site_independent_tables(c)
    ell = spec.site - 0.5

    ipower = (2 * m * n - (m + n) // 2) % 4
    val = complex(1j) ** ipower * math.sqrt(c.xi * xi_t(c))
    val *= tab["rho2"] ** ((m - n) ** 2 / 4.0)
    val *= np.prod(np.exp(-1j * ell * c.thetas_a[ia]) * tab["amp_a"][ia])
    val *= np.prod(np.exp(1j * ell * c.thetas_p[ip]) * tab["amp_p"][ip])
    aa = tab["aa_ratio"][np.ix_(ia, ia)]
    pp = tab["pp_ratio"][np.ix_(ip, ip)]
    val *= np.prod(aa[np.triu_indices(m, k=1)])
    val *= np.prod(pp[np.triu_indices(n, k=1)])
    if m and n:
        val *= np.prod(tab["ap_ratio"][np.ix_(ia, ip)])
    return complex(val)


# ---- two-point correlation -------------------------------------------------


def _sector_states(c: Couplings, sector: str, parity: int,
                   max_particles: int | None) -> list[tuple[int, ...]]:
    n = c.n
    cap = n if max_particles is None else min(n, max_particles)
    states = []
    for k in range(parity % 2, cap + 1, 2):
        states.extend(itertools.combinations(range(n), k))
    return states


def two_point_correlation(c: Couplings, m_height: int, dx: int, dy: int,
                          eps_x: int = 1, eps_y: int = 1,
                          max_particles: int | None = None) -> float:
    """Spin-spin correlation <sigma_{0,0} sigma_{dx,dy}> on the M x N torus.

    Assembled from the spectral expansion: squared form-factor moduli
    weighted by transfer-matrix and translation eigenvalues, with the
    spin-flip insertion for eps_x = -1 and the state-parity selection implied
    by eps_y.  The double sum runs over the full even- (or odd-) particle
    Fock basis of both sectors for N <= 10; beyond that a particle-number
    cutoff (default 4) is applied and a truncation bound is estimated.

    Summation order is fixed, so repeated runs are bit-identical.
    """
    if eps_x not in (1, -1) or eps_y not in (1, -1):
        raise DomainError("eps_x and eps_y must be +1 or -1")
    if not 0 <= dx <= m_height:
        raise DomainError(f"need 0 <= dx <= M, got dx={dx}, M={m_height}")
    if dx == 0 and dy % c.n == 0:
        return 1.0
    parity = 0 if eps_y == 1 else 1
    cutoff = max_particles
    if c.n > _FULL_ENUMERATION_MAX_N and cutoff is None:
        cutoff = _DEFAULT_PARTICLE_CUTOFF
    states_a = _sector_states(c, "a", parity, cutoff)
    states_p = _sector_states(c, "p", parity, cutoff)
    if not states_a or not states_p:
        raise DomainError("no states of the required parity below the cutoff")

    # reduced energies: log of V-eigenvalue without the common prefactor
    e_a = np.array([0.5 * c.gamma_a.sum() - c.gamma_a[list(s)].sum()
                    for s in states_a])
    e_p = np.array([0.5 * c.gamma_p.sum() - c.gamma_p[list(s)].sum()
                    for s in states_p])
    ph_a = np.array([c.thetas_a[list(s)].sum() for s in states_a])
    ph_p = np.array([c.thetas_p[list(s)].sum() for s in states_p])
    e_max = max(e_a.max(), e_p.max())
    e_a -= e_max
    e_p -= e_max

    chi = (1 - eps_x) // 2
    # U charge of a-sector states is +eps_y^... : a-vacuum carries +1, the
    # p-vacuum -1, and each particle flips the sign; surviving states have
    # charge +eps_y (a) and -eps_y (p).
    u_a = float(eps_y) if chi else 1.0
    u_p = -float(eps_y) if chi else 1.0

    abs_f2 = np.empty((len(states_a), len(states_p)))
    for i, sa in enumerate(states_a):
        bra = FockState("a", sa)
        for j, sp in enumerate(states_p):
            f = ff_closed(FormFactorSpec(0, bra, FockState("p", sp)), c)
            abs_f2[i, j] = abs(f) ** 2

    w1 = np.exp(dx * e_p[None, :] + (m_height - dx) * e_a[:, None]) * u_a
    w2 = np.exp(dx * e_a[:, None] + (m_height - dx) * e_p[None, :]) * u_p
    phase = np.exp(-1j * dy * (ph_p[None, :] - ph_a[:, None]))
    num = np.sum(abs_f2 * (w1 * phase + w2 * phase.conj()))
    den = np.sum(np.exp(m_height * e_a)) * u_a + np.sum(np.exp(m_height * e_p)) * u_p
    if abs(den) < 1e-300:
        raise DomainError("partition sum vanishes for these boundary conditions")
    result = num / den

    if cutoff is not None and cutoff < c.n:
        # every omitted state carries at least cutoff+1 particles, so its
        # reduced energy is at most e_om below; combined with
        # sum over a full sector of |F|^2 = 1 this gives a coarse tail bound
        k_min = cutoff + 1
        e_om_a = 0.5 * c.gamma_a.sum() - np.sort(c.gamma_a)[:k_min].sum() - e_max
        e_om_p = 0.5 * c.gamma_p.sum() - np.sort(c.gamma_p)[:k_min].sum() - e_max
        e_om = max(e_om_a, e_om_p)
        tail = (np.sum(np.exp((m_height - dx) * e_a)) * math.exp(dx * e_om_p)
                + np.sum(np.exp(dx * e_p)) * math.exp((m_height - dx) * e_om_a)
                + 2.0 ** c.n * math.exp(m_height * e_om))
        bound = tail / abs(den)
        if bound > 1e-10:
            warnings.warn(
                f"particle-number cutoff {cutoff} may truncate the state sum; "
                f"estimated bound on the omitted weight: {bound:.2e}",
                stacklevel=2,
            )

    if abs(result.imag) > 1e-9 * max(1.0, abs(result.real)):
        raise VerificationError(
            f"correlation sum has non-negligible imaginary part {result.imag:.3e}"
        )
    return float(result.real)
