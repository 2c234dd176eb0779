"""Dense Hermitian spectral helpers.

Everything here works on small (at most ~64x64) matrices with
``numpy.linalg.eigh``; no sparse or iterative solvers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-12
RANK_TOL = 1e-10


class NotHermitianError(ValueError):
    pass


def hermiticity_error(M: np.ndarray) -> float:
    """Largest entrywise violation of ``M == M^dagger`` relative to max(1, |M|_max)."""
    M = np.asarray(M)
    scale = max(1.0, float(np.abs(M).max(initial=0.0)))
    return float(np.abs(M - M.conj().T).max(initial=0.0)) / scale


def check_hermitian(M, tol: float = HERMITIAN_TOL) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotHermitianError(f"expected a square matrix, got shape {M.shape}")
    err = hermiticity_error(M)
    if err > tol:
        raise NotHermitianError(f"matrix is not Hermitian (relative error {err:.3g} > {tol:.1g})")
    return 0.5 * (M + M.conj().T)


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: np.ndarray
    lambda_min: float
    is_psd: bool
    pseudo_det: float
    numerical_rank: int


def _nonzero(evals: np.ndarray, rank_tol: float) -> np.ndarray:
    if evals.size == 0:
        return evals
    scale = np.abs(evals).max()
    if scale == 0.0:
        return evals[:0]
    return evals[np.abs(evals) > rank_tol * scale]


def eig_hermitian(M, psd_tol: float = RANK_TOL, rank_tol: float = RANK_TOL) -> SpectralReport:
    """Full spectrum of a Hermitian matrix, ascending, with derived quantities."""
    H = check_hermitian(M)
    evals = np.linalg.eigvalsh(H)
    nz = _nonzero(evals, rank_tol)
    lam_max = float(evals[-1]) if evals.size else 0.0
    return SpectralReport(
        eigenvalues=evals,
        lambda_min=float(evals[0]),
        is_psd=bool(evals[0] >= -psd_tol * max(1.0, lam_max)),
        pseudo_det=float(np.prod(nz)) if nz.size else 1.0,
        numerical_rank=int(nz.size),
    )


def is_psd(M, tol: float = RANK_TOL) -> bool:
    """True iff lambda_min >= -tol * max(1, lambda_max)."""
    evals = np.linalg.eigvalsh(check_hermitian(M))
    return bool(evals[0] >= -tol * max(1.0, float(evals[-1])))


def pseudo_det(M, rank_tol: float = RANK_TOL) -> float:
    """Product of the eigenvalues with |lambda| > rank_tol * max|lambda|.

    The zero matrix has pseudo-determinant 1 by convention.
    """
    evals = np.linalg.eigvalsh(check_hermitian(M))
    nz = _nonzero(evals, rank_tol)
    return float(np.prod(nz)) if nz.size else 1.0


def lindblad_decomposition(C, rank_tol: float = RANK_TOL) -> list[tuple[float, np.ndarray]]:
    """Split ``C = sum_k gamma_k l_k l_k^dagger`` with orthonormal ``l_k``.

    Rates are sorted descending; negligible ones are dropped.  Negative rates
    are kept, since transformed coefficient matrices need not be PSD.
    """
    evals, evecs = np.linalg.eigh(check_hermitian(C))
    if evals.size == 0:
        return []
    scale = np.abs(evals).max()
    out = []
    for k in np.argsort(evals)[::-1]:
        if scale == 0.0 or abs(evals[k]) <= rank_tol * scale:
            continue
        out.append((float(evals[k]), evecs[:, k].copy()))
    return out


def trace_norm(M) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.abs(np.linalg.eigvalsh(check_hermitian(M, tol=1e-10))).sum())
