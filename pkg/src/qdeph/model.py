"""Correlated dephasing environments: validated models and constructors.

A model is the pair (C, h) of a GKSL generator with Pauli-Z jump operators,

    L(rho) = -i[H, rho] + sum_ij c_ij (Z_i rho Z_j - 1/2 {Z_i Z_j, rho}),
    H = 1/2 sum_ij h_ij Z_i Z_j,

with C Hermitian and h real symmetric.  The diagonal of h only adds a
constant to H and is always stored as zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spectral import HERMITIAN_TOL, RANK_TOL, is_psd


class ModelError(ValueError):
    """Raised for malformed coefficient matrices."""


class UndefinedValueError(ZeroDivisionError):
    """A ratio statistic has a vanishing denominator."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DephasingModel:
    n: int
    C: np.ndarray
    h: np.ndarray
    physical: bool = field(default=False)

    def with_h(self, h) -> "DephasingModel":
        return make_model(self.n, self.C, h)

    def without_h(self) -> "DephasingModel":
        return make_model(self.n, self.C, np.zeros((self.n, self.n)))

    def permuted(self, perm) -> "DephasingModel":
        """Relabel qubits: qubit ``q`` of the result is qubit ``perm[q]`` of self."""
        p = np.asarray(perm)
        return make_model(self.n, self.C[np.ix_(p, p)], self.h[np.ix_(p, p)])

    def __eq__(self, other):
        if not isinstance(other, DephasingModel):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.C, other.C) and np.array_equal(self.h, other.h)

    def __hash__(self):
        return hash((self.n, self.C.tobytes(), self.h.tobytes()))


def make_model(n: int, C, h=None, tol: float = HERMITIAN_TOL) -> DephasingModel:
    """Validate and build a model.

    C within ``tol`` (relative to max(1, |C|_max)) of Hermitian is
    symmetrized; anything worse raises ``ModelError``.  The same goes for h.
    """
    if int(n) != n or n < 1:
        raise ModelError(f"qubit count must be a positive integer, got {n!r}")
    n = int(n)
    C = np.asarray(C, dtype=complex)
    h = np.zeros((n, n)) if h is None else np.asarray(h)
    if C.shape != (n, n):
        raise ModelError(f"C has shape {C.shape}, expected {(n, n)}")
    if h.shape != (n, n):
        raise ModelError(f"h has shape {h.shape}, expected {(n, n)}")
    if np.iscomplexobj(h):
        if np.abs(h.imag).max(initial=0.0) > tol * max(1.0, np.abs(h).max(initial=0.0)):
            raise ModelError("h must be real")
        h = h.real
    h = h.astype(float)
    if not (np.all(np.isfinite(C)) and np.all(np.isfinite(h))):
        raise ModelError("coefficients must be finite")

    scale = max(1.0, float(np.abs(C).max(initial=0.0)))
    if np.abs(C - C.conj().T).max(initial=0.0) > tol * scale:
        raise ModelError("C is not Hermitian")
    hscale = max(1.0, float(np.abs(h).max(initial=0.0)))
    if np.abs(h - h.T).max(initial=0.0) > tol * hscale:
        raise ModelError("h is not symmetric")

    C = 0.5 * (C + C.conj().T)
    h = 0.5 * (h + h.T)
    np.fill_diagonal(h, 0.0)
    return DephasingModel(n, _frozen(C), _frozen(h), physical=is_psd(C, RANK_TOL))


def case_c1(n: int) -> DephasingModel:
    """Uniform correlations: every c_ij = 1/n (rank one, real)."""
    if n < 1:
        raise ModelError("n must be >= 1")
    return make_model(n, np.full((n, n), 1.0 / n))


def case_c2(n: int) -> DephasingModel:
    """Purely imaginary correlations: +i above, -i below, n-1 on the diagonal."""
    if n < 2:
        raise ModelError("case_c2 needs n >= 2")
    C = np.triu(np.full((n, n), 1j), 1)
    C = C + C.conj().T + (n - 1) * np.eye(n)
    return make_model(n, C)


def _rank_one(vec: np.ndarray) -> np.ndarray:
    return np.outer(vec, vec.conj())


def fourier_vector(n: int, k: int = 1) -> np.ndarray:
    return np.exp(2j * np.pi * k * np.arange(n) / n) / np.sqrt(n)


def case_c3(n: int) -> DephasingModel:
    """Rank-one Fourier correlations, c_jk = exp(2 pi i (j - k) / n) / n."""
    if n < 2:
        raise ModelError("case_c3 needs n >= 2")
    return make_model(n, _rank_one(fourier_vector(n, 1)))


def g_vector(theta: float) -> np.ndarray:
    return np.exp(1j * theta * np.arange(3)) / np.sqrt(3)


def g_theta(theta: float) -> DephasingModel:
    """Three-qubit rank-one family interpolating between real and Fourier C."""
    return make_model(3, _rank_one(g_vector(theta)))


def two_qubit_family(r: float, alpha: float) -> DephasingModel:
    """Single jump Z_0 + r e^{i alpha} Z_1 on two qubits."""
    return make_model(2, _rank_one(np.array([1.0, r * np.exp(1j * alpha)])))


def sample_ginibre(n: int, rng_seed) -> DephasingModel:
    """C = w w^dagger with w complex Ginibre (unit-variance real and imaginary parts).

    ``rng_seed`` may be an int or a ``numpy.random.Generator``; an int seeds
    a fresh PCG64 stream so the same seed always gives the same C.
    """
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.Generator(np.random.PCG64(rng_seed))
    z = rng.standard_normal((2, n, n))
    w = z[0] + 1j * z[1]
    return make_model(n, w @ w.conj().T)


def rank_proxy(model_or_C) -> float:
    """tr(C^2) / tr(C)^2; equals 1 for rank-one PSD C and 1/n for the identity."""
    C = model_or_C.C if isinstance(model_or_C, DephasingModel) else np.asarray(model_or_C)
    tr = np.trace(C).real
    if tr == 0.0:
        raise UndefinedValueError("tr(C) = 0")
    return float(np.trace(C @ C).real / tr**2)


def rel_imag_norm(model_or_C) -> float:
    """|Im C|_F / |C - diag(C)|_F."""
    C = model_or_C.C if isinstance(model_or_C, DephasingModel) else np.asarray(model_or_C)
    off = C - np.diag(np.diag(C))
    den = np.linalg.norm(off)
    if den == 0.0:
        raise UndefinedValueError("C has no off-diagonal part")
    return float(np.linalg.norm(C.imag) / den)


def is_rank_one(model: DephasingModel, tol: float = RANK_TOL) -> bool:
    ev = np.linalg.eigvalsh(model.C)
    return bool(abs(ev[-2]) <= tol * abs(ev[-1])) if model.n > 1 else True
