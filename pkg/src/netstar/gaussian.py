"""Real Gaussian counterpart of the fermionic reduction.

For a real symmetric positive definite ``A`` the measure

    dmu_A(x) = det(A)^{1/2} (2 pi)^{-n/2} exp(-x.Ax/2) dx

has covariance ``A^{-1}``; integrating out the trailing ``n - p``
coordinates leaves the Schur complement of ``A22`` in the exponent. The
bosonic network reduction uses the same assembled block matrix as the
fermionic one but eliminates the interior block with a Cholesky
factorization instead of LU.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import blocklin
from .errors import NotOrthogonal, NotPositiveDefinite
from .graph import Graph
from .scattering import NetworkData, ReductionResult, assemble_lagrangian

SYMMETRY_TOL = 1e-12
ORTHOGONALITY_TOL = 1e-10


def as_spd(A) -> np.ndarray:
    """Validate and return ``A`` as a real symmetric positive definite array."""
    A = np.asarray(A)
    if np.iscomplexobj(A):
        if np.max(np.abs(A.imag), initial=0.0) > SYMMETRY_TOL:
            raise NotPositiveDefinite("matrix has a non-zero imaginary part")
        A = A.real
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotPositiveDefinite(f"expected a square matrix, got shape {A.shape}")
    scale = max(1.0, np.max(np.abs(A), initial=0.0))
    if np.max(np.abs(A - A.T), initial=0.0) > SYMMETRY_TOL * scale:
        raise NotPositiveDefinite("matrix is not symmetric")
    if A.size and np.linalg.eigvalsh(A)[0] <= 0:
        raise NotPositiveDefinite("matrix has a non-positive eigenvalue")
    return A


def min_eig(A) -> float:
    A = np.asarray(A)
    if A.size == 0:
        return np.inf
    return float(np.linalg.eigvalsh((A + A.conj().T) / 2)[0])


def gaussian_marginalize(A, p: int) -> tuple[np.ndarray, float]:
    """Marginal over the trailing ``n - p`` coordinates.

    Returns ``(A_hat, det A22)``; the marginal density is proportional to
    ``exp(-x1.A_hat x1 / 2)``.
    """
    A = as_spd(A)
    A_hat = blocklin.schur_complement(A, p).real
    d22 = blocklin.det(A[p:, p:]).real
    return A_hat, d22


def marginal_normalization(A, p: int) -> float:
    """``(2 pi)^{(n-p)/2} / det(A22)^{1/2}``, the factor produced by
    integrating out the trailing coordinates."""
    A = as_spd(A)
    n = A.shape[0]
    return (2 * np.pi) ** ((n - p) / 2) / np.sqrt(blocklin.det(A[p:, p:]).real)


def density(A, x) -> float:
    A = as_spd(A)
    x = np.asarray(x, dtype=float)
    n = A.shape[0]
    return float(np.sqrt(np.linalg.det(A)) / (2 * np.pi) ** (n / 2) * np.exp(-0.5 * x @ A @ x))


@dataclass(frozen=True)
class PositivityReport:
    kappa: float
    min_eig_A: float
    min_eig_A_hat: float
    precondition_ok: bool
    passed: bool

    @property
    def margin_in(self) -> float:
        return self.min_eig_A - self.kappa

    @property
    def margin_out(self) -> float:
        return self.min_eig_A_hat - self.kappa


def positivity_bound_check(A, kappa: float, p: int) -> PositivityReport:
    """Check that ``A > kappa I`` carries over to the Schur complement of ``A22``.

    A violated precondition is reported (``precondition_ok=False``), not raised.
    """
    A = np.asarray(A, dtype=float)
    lam = min_eig(A)
    if not lam > kappa:
        return PositivityReport(kappa, lam, np.nan, False, False)
    A_hat, _ = gaussian_marginalize(A, p)
    lam_hat = min_eig(A_hat)
    return PositivityReport(kappa, lam, lam_hat, True, bool(lam_hat > kappa))


def _require_orthogonal(V, what: str) -> np.ndarray:
    V = np.asarray(V)
    if np.iscomplexobj(V):
        if np.max(np.abs(V.imag), initial=0.0) > ORTHOGONALITY_TOL:
            raise NotOrthogonal(f"{what} is not real")
        V = V.real
    defect = blocklin.unitarity_defect(V)
    if defect > ORTHOGONALITY_TOL:
        raise NotOrthogonal(f"{what} is not orthogonal (defect {defect:.2e})")
    return V


def bosonic_reduce(g: Graph, data: NetworkData) -> ReductionResult:
    """Reduce a network with positive vertex data through a Cholesky
    elimination of the (then positive definite) interior block.

    Requires real symmetric ``X(v) > (n(V) - 1) I`` and orthogonal ``V``.
    """
    bound = g.n_vertices - 1
    for v in g.vertices:
        X = as_spd(data.X(v))
        if not min_eig(X) > bound:
            raise NotPositiveDefinite(f"X({v}) has min eigenvalue {min_eig(X):.4g} <= n(V) - 1 = {bound}")
    for (v, w), V in data.connecting_matrices.items():
        _require_orthogonal(V, f"V({v},{w})")

    L = assemble_lagrangian(g, data)
    M = L.entries.real
    if np.max(np.abs(M - M.T), initial=0.0) > SYMMETRY_TOL * max(1.0, np.max(np.abs(M))):
        raise NotPositiveDefinite("assembled matrix is not symmetric")
    M = (M + M.T) / 2
    ext = L.exterior_positions()
    interior = L.interior_positions()
    LE = M[np.ix_(ext, ext)]
    LEI = M[np.ix_(ext, interior)]
    T = M[np.ix_(interior, interior)]
    if T.size:
        try:
            factor = sla.cho_factor(T, lower=True)
        except np.linalg.LinAlgError:
            raise NotPositiveDefinite("interior block is not positive definite") from None
        W = sla.solve_triangular(factor[0], LEI.T, lower=True)
        K = LE - W.T @ W
        det_T = float(np.prod(np.diag(factor[0])) ** 2)
    else:
        K = LE.copy()
        det_T = 1.0
    K = (K + K.T) / 2
    lam = min_eig(K)
    if not lam > 0:
        raise NotPositiveDefinite(f"reduced matrix has min eigenvalue {lam:.4g}")
    return ReductionResult(
        K.astype(complex),
        complex(det_T),
        L.external,
        {"min_eig_K": lam, "min_eig_L": min_eig(M)},
    )


@dataclass(frozen=True)
class MomentReport:
    count: int
    seed: int
    mean: np.ndarray
    covariance: np.ndarray
    expected_covariance: np.ndarray
    mean_stderr: np.ndarray
    covariance_stderr: np.ndarray

    @property
    def mean_z(self) -> float:
        """Largest |mean| in units of its standard error."""
        return float(np.max(np.abs(self.mean) / self.mean_stderr))

    @property
    def covariance_z(self) -> float:
        return float(np.max(np.abs(self.covariance - self.expected_covariance) / self.covariance_stderr))


def make_rng(seed: int) -> np.random.Generator:
    """Philox4x64 counter-based generator with a 64-bit seed."""
    return np.random.Generator(np.random.Philox(seed))


def sample_gaussian(A, count: int, seed: int) -> MomentReport:
    """Draw ``count`` samples of ``dmu_A`` as ``x = C z`` with ``C C^T = A^{-1}``."""
    A = as_spd(A)
    if count < 1:
        raise ValueError("count must be at least 1")
    cov = blocklin.inv(A).real
    cov = (cov + cov.T) / 2
    C = np.linalg.cholesky(cov)
    z = make_rng(seed).standard_normal((count, A.shape[0]))
    x = z @ C.T
    mean = x.mean(axis=0)
    second = x.T @ x / count
    diag = np.diag(cov)
    mean_se = np.sqrt(diag / count)
    # Var(x_i x_j) = S_ii S_jj + S_ij^2 for a centred Gaussian
    cov_se = np.sqrt((np.outer(diag, diag) + cov**2) / count)
    return MomentReport(count, seed, mean, second, cov, mean_se, cov_se)
