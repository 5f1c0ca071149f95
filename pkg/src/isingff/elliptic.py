"""Jacobi theta functions, complete elliptic integrals, and Jacobi elliptic functions.

Conventions: theta functions take the nome q in (0, 1) and an argument z with
real period pi, so that sn/cn/dn of argument u are theta ratios evaluated at
z = pi*u/(2K).  The period ratio tau = i*K'/K is always pure imaginary here,
hence q = exp(-pi*K'/K) is real.

All evaluation is in double precision.  Arguments with large imaginary part
are reduced into the fundamental strip by quasiperiod shifts with exact
bookkeeping of the accumulated phase factor.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

from .exceptions import ConvergenceError, DomainError

_SERIES_CUTOFF = 1e-17
_MAX_TERMS = 512
_Q_MAX = 0.999
_POLE_TOL = 1e-11


def complete_elliptic_K(k: float) -> float:
    """Complete elliptic integral K(k) by the arithmetic-geometric mean.

    The complementary integral K' is obtained by calling with the
    complementary modulus k' = sqrt(1 - k^2).

    Raises
    ------
    DomainError
        If k is outside (0, 1).
    """
    if not 0.0 < k < 1.0:
        raise DomainError(f"modulus k={k} outside (0, 1)")
    a = 1.0
    b = math.sqrt((1.0 - k) * (1.0 + k))
    for _ in range(64):
        if abs(a - b) <= 4e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    else:
        raise ConvergenceError("AGM iteration did not converge")
    return math.pi / (a + b)


def _theta1_strip(z: complex, q: float) -> complex:
    """theta_1 sine series, assuming |Im z| already inside the half-strip."""
    if z == 0:
        return 0.0 + 0.0j
    total = 0.0 + 0.0j
    peak = 0.0
    y = abs(z.imag)
    for n in range(_MAX_TERMS):
        term = (-1.0) ** n * q ** ((n + 0.5) ** 2) * cmath.sin((2 * n + 1) * z)
        total += term
        peak = max(peak, abs(term))
        tail = q ** ((n + 1.5) ** 2) * math.exp((2 * n + 3) * y)
        if tail < _SERIES_CUTOFF * max(abs(total), peak, 1e-300):
            return 2.0 * total
    raise ConvergenceError(
        f"theta_1 series exceeded {_MAX_TERMS} terms (q={q}, Im z={z.imag})"
    )


def _theta1(z: complex, q: float) -> complex:
    """theta_1(z, q) for arbitrary complex z.

    Uses theta_1(z + pi) = -theta_1(z) and the quasiperiodicity relation
    theta_1(z + l*pi*tau) = (-1)^l exp(-i*pi*l^2*tau - 2*i*l*z) theta_1(z)
    to reduce the argument; the shift counts are integers so the phase
    factor is tracked exactly.
    """
    pit = -math.log(q)  # pi*|tau|, with tau = i*K'/K
    z = complex(z)
    ell = round(z.imag / pit)
    m = round(z.real / math.pi)
    zr = z - m * math.pi - ell * 1j * pit
    val = _theta1_strip(zr, q)
    if m & 1:
        val = -val
    if ell != 0:
        # theta_1(zr + l*pi*tau) = (-1)^l exp(pi*|tau|*l^2 - 2i*l*zr) theta_1(zr)
        val *= (-1.0) ** ell * cmath.exp(pit * ell * ell - 2j * ell * zr)
    return val


def theta(index: int, z: complex, q: float) -> complex:
    """Jacobi theta function theta_index(z) of nome q.

    theta_1 is summed from its sine series; theta_2, theta_3, theta_4 are
    obtained from theta_1 by the half-period shifts of its argument.

    Parameters
    ----------
    index : int
        Which theta function, 1 through 4.
    z : complex
        Argument (real period pi).
    q : float
        Nome, 0 < q < 1.
    """
    if not 0.0 < q < _Q_MAX:
        raise DomainError(f"nome q={q} outside (0, {_Q_MAX})")
    z = complex(z)
    if index == 1:
        return _theta1(z, q)
    if index == 2:
        return _theta1(z + math.pi / 2, q)
    pit = -math.log(q)
    phase = cmath.exp(-1j * z - pit / 4)
    if index == 3:
        return phase * _theta1(z + math.pi / 2 - 1j * pit / 2, q)
    if index == 4:
        return 1j * phase * _theta1(z - 1j * pit / 2, q)
    raise DomainError(f"theta index must be 1..4, got {index}")


@dataclass(frozen=True)
class EllipticModulus:
    """Elliptic modulus with its quarter periods, period ratio, and nome.

    Invariants (see :meth:`self_check`): k^2 + k'^2 = 1, q = exp(-pi*K'/K)
    in (0, 1), and the theta-constant routes k = theta_2(0)^2/theta_3(0)^2,
    2K = pi*theta_3(0)^2 reproduce k and K.
    """

    k: float
    kprime: float
    bigK: float
    bigKprime: float
    tau: complex
    q: float

    @classmethod
    def from_k(cls, k: float) -> "EllipticModulus":
        if not 0.0 < k < 1.0:
            raise DomainError(f"modulus k={k} outside (0, 1)")
        kprime = math.sqrt((1.0 - k) * (1.0 + k))
        bigK = complete_elliptic_K(k)
        bigKprime = complete_elliptic_K(kprime)
        ratio = bigKprime / bigK
        q = math.exp(-math.pi * ratio)
        if q >= _Q_MAX:
            raise DomainError(
                f"nome q={q:.6f} too close to 1 for double precision (k={k})"
            )
        return cls(k=k, kprime=kprime, bigK=bigK, bigKprime=bigKprime,
                   tau=1j * ratio, q=q)

    def complementary(self) -> "EllipticModulus":
        """Modulus object for k', with K and K' exchanged."""
        return EllipticModulus.from_k(self.kprime)

    @cached_property
    def _theta_zeros(self) -> tuple[complex, complex, complex]:
        """(theta_2(0), theta_3(0), theta_4(0))."""
        return (theta(2, 0.0, self.q), theta(3, 0.0, self.q),
                theta(4, 0.0, self.q))

    def self_check(self) -> dict[str, float]:
        """Residuals of the defining invariants, for verification suites."""
        t2, t3, t4 = self._theta_zeros
        return {
            "k2_plus_kprime2": abs(self.k**2 + self.kprime**2 - 1.0),
            "nome": abs(self.q - math.exp(-math.pi * self.bigKprime / self.bigK)),
            "k_from_thetas": abs(t2**2 / t3**2 - self.k),
            "twoK_from_thetas": abs(math.pi * t3**2 - 2.0 * self.bigK),
        }


def _pole_distance(u: complex, mod: EllipticModulus) -> float:
    """Distance from u to the pole lattice iK' + 2K*Z + 2iK'*Z of sn/cn/dn."""
    x = math.remainder(u.real, 2.0 * mod.bigK)
    y = math.remainder(u.imag - mod.bigKprime, 2.0 * mod.bigKprime)
    return math.hypot(x, y)


def jacobi_sn_cn_dn(u: complex, mod: EllipticModulus) -> tuple[complex, complex, complex]:
    """(sn u, cn u, dn u) for complex u via theta-function ratios.

    The theta evaluator reduces large imaginary parts internally, so u may
    have any imaginary part as long as it stays away from the common pole
    lattice iK' mod (2K, 2iK').

    Raises
    ------
    DomainError
        If u is within tolerance of a pole; the value is not extrapolated.
    """
    u = complex(u)
    if _pole_distance(u, mod) < _POLE_TOL * (1.0 + abs(u)):
        raise DomainError(f"u={u} within tolerance of a pole of sn/cn/dn")
    z = u * math.pi / (2.0 * mod.bigK)
    q = mod.q
    t2, t3, t4 = mod._theta_zeros
    d = theta(4, z, q)
    sn = (t3 / t2) * theta(1, z, q) / d
    cn = (t4 / t2) * theta(2, z, q) / d
    dn = (t4 / t3) * theta(3, z, q) / d
    return sn, cn, dn


def inverse_sn_real(s: float, mod: EllipticModulus) -> float:
    """u in [-K, K] with sn u = s and cn u >= 0, for real s in [-1, 1].

    Inverts through the incomplete elliptic integral of the first kind.
    Values of |s| exceeding 1 by no more than a few ulps are clamped.
    """
    from scipy.special import ellipkinc

    if abs(s) > 1.0 + 8e-16:
        raise DomainError(f"|s|={abs(s)} exceeds 1; sn is not invertible there")
    s = min(1.0, max(-1.0, s))
    return float(ellipkinc(math.asin(s), mod.k**2))
