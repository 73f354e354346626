"""Dense complex block linear algebra.

Everything works on plain ``numpy.ndarray`` objects. A block partition is
just the integer ``p``: the leading ``p x p`` block is ``A11`` and the
trailing ``(n-p) x (n-p)`` block is ``A22``.

A square block counts as invertible iff

    sigma_min > INVERTIBILITY_RTOL * max(1, sigma_max)

Blocks failing the gate raise instead of being pseudo-inverted.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla

from .errors import SingularBlock, SingularMatrix

INVERTIBILITY_RTOL = 1e-12


def as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {A.shape}")
    return A


def _square(A) -> np.ndarray:
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return A


def split(A, p: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(A11, A12, A21, A22)`` for the partition at ``p``."""
    A = _square(A)
    n = A.shape[0]
    if not 0 <= p <= n:
        raise ValueError(f"partition p={p} outside [0, {n}]")
    return A[:p, :p], A[:p, p:], A[p:, :p], A[p:, p:]


def singular_values(A) -> np.ndarray:
    A = as_matrix(A)
    if A.size == 0:
        return np.zeros(0)
    return np.linalg.svd(A, compute_uv=False)


def min_singular_value(A) -> float:
    s = singular_values(A)
    return float(s[-1]) if s.size else np.inf


def condition_number(A) -> float:
    s = singular_values(A)
    if s.size == 0:
        return 1.0
    if s[-1] == 0:
        return np.inf
    return float(s[0] / s[-1])


def is_invertible(A) -> bool:
    s = singular_values(A)
    if s.size == 0:
        return True
    return bool(s[-1] > INVERTIBILITY_RTOL * max(1.0, s[0]))


def require_invertible(A, exc=SingularMatrix, **kwargs) -> None:
    """Raise ``exc(sigma_min, **kwargs)`` unless ``A`` passes the gate."""
    s = singular_values(A)
    if s.size and not s[-1] > INVERTIBILITY_RTOL * max(1.0, s[0]):
        raise exc(float(s[-1]), **kwargs)


def det(A) -> complex:
    """Determinant from a partially pivoted LU factorization."""
    A = _square(A)
    n = A.shape[0]
    if n == 0:
        return 1.0 + 0j
    lu, piv = sla.lu_factor(A, check_finite=True)
    swaps = np.count_nonzero(piv != np.arange(n))
    d = np.prod(np.diag(lu))
    return complex(-d if swaps % 2 else d)


def solve(A, B, refine: int = 1) -> np.ndarray:
    """Solve ``A X = B`` by LU with ``refine`` steps of iterative refinement."""
    A = _square(A)
    B = np.asarray(B, dtype=complex)
    if A.shape[0] == 0:
        return np.zeros_like(B)
    require_invertible(A)
    factors = sla.lu_factor(A)
    X = sla.lu_solve(factors, B)
    for _ in range(refine):
        X = X + sla.lu_solve(factors, B - A @ X)
    return X


def inv(A) -> np.ndarray:
    A = _square(A)
    return solve(A, np.eye(A.shape[0], dtype=complex))


def schur_complement(A, p: int) -> np.ndarray:
    """Schur complement of the trailing block: ``A11 - A12 A22^{-1} A21``.

    Raises :class:`SingularBlock` when ``A22`` fails the invertibility gate.
    """
    A11, A12, A21, A22 = split(A, p)
    if A22.shape[0] == 0:
        return A11.copy()
    require_invertible(A22, SingularBlock)
    return A11 - A12 @ solve(A22, A21)


def block_inverse(A, p: int) -> np.ndarray:
    """Assemble ``A^{-1}`` from the four-block Schur formula.

    Top-left is the inverse of the Schur complement of ``A22``; the other
    blocks follow from it and ``A22^{-1}``.
    """
    A11, A12, A21, A22 = split(A, p)
    n = A11.shape[0] + A22.shape[0]
    if A22.shape[0] == 0:
        return inv(A11)
    require_invertible(A22, SingularBlock)
    A22inv = inv(A22)
    S = A11 - A12 @ A22inv @ A21
    if S.shape[0] == 0:
        return A22inv
    require_invertible(S, SingularMatrix, what="Schur complement")
    Sinv = inv(S)
    out = np.empty((n, n), dtype=complex)
    out[:p, :p] = Sinv
    out[:p, p:] = -Sinv @ A12 @ A22inv
    out[p:, :p] = -A22inv @ A21 @ Sinv
    out[p:, p:] = A22inv + A22inv @ A21 @ Sinv @ A12 @ A22inv
    return out


def unitarity_defect(M) -> float:
    """Max elementwise modulus of ``M^dagger M - I``."""
    M = as_matrix(M)
    if M.size == 0:
        return 0.0
    return float(np.max(np.abs(M.conj().T @ M - np.eye(M.shape[1]))))


def max_abs(M) -> float:
    M = np.asarray(M)
    return float(np.max(np.abs(M))) if M.size else 0.0


def direct_sum(*blocks) -> np.ndarray:
    blocks = [as_matrix(b) for b in blocks]
    if not blocks:
        return np.zeros((0, 0), dtype=complex)
    return sla.block_diag(*blocks).astype(complex)
