"""Dense complex linear algebra: pfaffian, determinant, inverse.

The pfaffian is computed by skew-symmetric tridiagonalization (Parlett-Reid
style Gauss transforms) with partial pivoting.  Row/column swaps are counted
exactly because the sign of the pfaffian carries physics downstream.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .exceptions import DomainError, SingularMatrixError

_SKEW_TOL = 1e-13
_PIVOT_TOL = 1e-13


def _check_skew(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"pfaffian needs a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m))) if m.size else 0.0)
    asym = float(np.max(np.abs(m + m.T))) if m.size else 0.0
    if asym > _SKEW_TOL * scale:
        raise DomainError(f"matrix not antisymmetric: max|M + M^T| = {asym:.3e}")
    return m.astype(complex)


def pfaffian(m: np.ndarray) -> complex:
    """Pfaffian of a complex antisymmetric matrix, Pf(m)^2 = det(m).

    Odd dimension gives 0; the empty matrix gives 1.  Antisymmetry is checked
    on entry (absolute tolerance 1e-13 relative to the largest entry).
    """
    a = _check_skew(m).copy()
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    if n % 2 == 1:
        return 0.0 + 0.0j
    pf = 1.0 + 0.0j
    for k in range(0, n - 1, 2):
        # pivot the largest remaining entry of column k into position (k+1, k)
        kp = k + 1 + int(np.argmax(np.abs(a[k + 1:, k])))
        if kp != k + 1:
            a[[k + 1, kp], k:] = a[[kp, k + 1], k:]
            a[k:, [k + 1, kp]] = a[k:, [kp, k + 1]]
            pf = -pf
        pivot = a[k + 1, k]
        if abs(pivot) <= _PIVOT_TOL * max(1.0, float(np.max(np.abs(a[k:, k:])))):
            return 0.0 + 0.0j
        pf *= a[k, k + 1]
        if k + 2 < n:
            tau = a[k, k + 2:] / a[k, k + 1]
            a[k + 2:, k + 2:] += np.outer(tau, a[k + 2:, k + 1])
            a[k + 2:, k + 2:] -= np.outer(a[k + 2:, k + 1], tau)
    return complex(pf)


def det_and_inverse(m: np.ndarray) -> tuple[complex, np.ndarray]:
    """Determinant and inverse of a square complex matrix via pivoted LU.

    Raises
    ------
    SingularMatrixError
        If any pivot falls below 1e-13 times the largest row norm.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"need a square matrix, got shape {m.shape}")
    n = m.shape[0]
    if n == 0:
        return 1.0 + 0.0j, m.copy()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(m)
    diag = np.diag(lu)
    row_scale = float(np.max(np.sum(np.abs(m), axis=1)))
    if np.min(np.abs(diag)) <= _PIVOT_TOL * max(row_scale, 1e-300):
        raise SingularMatrixError(
            f"matrix singular to tolerance (min pivot {np.min(np.abs(diag)):.3e})"
        )
    swaps = int(np.sum(piv != np.arange(n)))
    det = complex((-1.0) ** swaps * np.prod(diag))
    inv = lu_solve((lu, piv), np.eye(n, dtype=complex))
    return det, inv
