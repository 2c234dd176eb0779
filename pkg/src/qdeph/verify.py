"""Independent checks of two equivalences.

* Classical noise: random phases with covariance C t, averaged over
  trajectories, reproduce the analytic dephasing evolution for real C.
* Measurement and feedforward: monitoring A while driving B (and the reverse
  scheme) yields, unconditionally, the dissipator D[A - iB].

Superoperators use column-stacking vectorization, vec(X) = X.flatten("F"),
so that vec(A X B) = (B^T kron A) vec(X).
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dynamics import STATE_CAP, _as_array, basis_labels, evolve
from .model import DephasingModel, ModelError
from .spectral import lindblad_decomposition

MC_BLOCK = 4096


@dataclass(frozen=True, eq=False)
class Superoperator:
    n: int
    S: np.ndarray

    def apply(self, rho: np.ndarray) -> np.ndarray:
        d = rho.shape[0]
        return (self.S @ vec(rho)).reshape(d, d, order="F")


def vec(X: np.ndarray) -> np.ndarray:
    return np.asarray(X).flatten(order="F")


def default_threads() -> int:
    env = os.environ.get("QDEPH_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# --- classical noise ----------------------------------------------------------

def _mc_block(root: int, block: int, count: int, factor: np.ndarray, lab: np.ndarray) -> np.ndarray:
    ss = np.random.SeedSequence(root, spawn_key=(block,))
    rng = np.random.Generator(np.random.PCG64(ss))
    z = rng.standard_normal((count, factor.shape[0]))
    phases = z @ factor  # factor is symmetric: rows ~ Normal(0, C t)
    u = np.exp(-1j * (phases @ lab.T))
    return u.T @ u.conj()


def classical_mc(model: DephasingModel, rho0, t: float, n_traj: int, rng_seed: int = 1,
                 threads: int | None = None, block: int = MC_BLOCK):
    """Average exp(-i sum_i phi_i Z_i) rho0 (h.c.) over phi ~ Normal(0, C t).

    Returns ``(rho_mc, max_dev)`` where ``max_dev`` is the largest entrywise
    gap to ``evolve(rho0, model, t)``.  Trajectories are drawn in fixed-size
    blocks, each with its own stream spawned from ``(rng_seed, block)``, so
    the result does not depend on ``threads``.
    """
    C = np.asarray(model.C)
    scale = max(1.0, float(np.abs(C).max()))
    if np.abs(C.imag).max() > 1e-12 * scale:
        raise ModelError("classical noise only produces real C")
    if np.abs(model.h).max() > 0:
        raise ModelError("classical_mc needs h = 0")
    if model.n > STATE_CAP:
        raise ModelError(f"n={model.n} exceeds the state-size cap {STATE_CAP}")
    evals, O = np.linalg.eigh(C.real * t)
    if evals[0] < -1e-10 * max(1.0, abs(evals[-1])):
        raise ModelError("C must be positive semi-definite")
    factor = (O * np.sqrt(np.clip(evals, 0.0, None))) @ O.T
    if n_traj < 1:
        raise ValueError("need at least one trajectory")

    rho = _as_array(rho0)
    lab = basis_labels(model.n).astype(float)
    counts = [min(block, n_traj - s) for s in range(0, n_traj, block)]
    threads = threads or default_threads()
    args = [(rng_seed, b, c, factor, lab) for b, c in enumerate(counts)]
    if threads == 1 or len(args) == 1:
        parts = [_mc_block(*a) for a in args]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda a: _mc_block(*a), args))
    acc = np.zeros_like(parts[0])
    for p in parts:  # fixed order keeps the sum bit-stable
        acc += p
    rho_mc = rho * (acc / n_traj)
    exact = evolve(rho, model, t)
    return rho_mc, float(np.abs(rho_mc - exact).max())


# --- superoperators -----------------------------------------------------------

def _n_from_dim(d: int) -> int:
    n = int(round(np.log2(d)))
    return n if 2**n == d else 0


def dissipator_superop(L: np.ndarray) -> np.ndarray:
    """D[L] rho = L rho L^dag - 1/2 {L^dag L, rho}."""
    L = np.asarray(L, dtype=complex)
    eye = np.eye(L.shape[0])
    LdL = L.conj().T @ L
    return np.kron(L.conj(), L) - 0.5 * np.kron(eye, LdL) - 0.5 * np.kron(LdL.T, eye)


def commutator_superop(H: np.ndarray) -> np.ndarray:
    """rho -> [H, rho]."""
    H = np.asarray(H, dtype=complex)
    eye = np.eye(H.shape[0])
    return np.kron(eye, H) - np.kron(H.T, eye)


def liouvillian_superop(H, L_list) -> Superoperator:
    """Superoperator of rho -> -i[H, rho] + sum_k gamma_k D[L_k] rho.

    ``L_list`` holds ``(gamma, L)`` pairs.
    """
    H = np.asarray(H, dtype=complex)
    d = H.shape[0]
    if H.shape != (d, d):
        raise ValueError("H must be square")
    S = -1j * commutator_superop(H)
    for gamma, L in L_list:
        L = np.asarray(L)
        if L.shape != (d, d):
            raise ValueError(f"jump operator has shape {L.shape}, expected {(d, d)}")
        S = S + gamma * dissipator_superop(L)
    return Superoperator(_n_from_dim(d), S)


def z_jump(coeffs) -> np.ndarray:
    """Jump operator sum_i coeffs_i Z_i as a dense matrix."""
    coeffs = np.asarray(coeffs)
    return np.diag(basis_labels(coeffs.size) @ coeffs).astype(complex)


def model_superop(model) -> Superoperator:
    """Full generator of a dephasing model, built from its Lindblad decomposition."""
    Hdiag = 0.5 * np.einsum("ak,km,am->a", basis_labels(model.n).astype(float), model.h, basis_labels(model.n).astype(float))
    terms = [(g, z_jump(l)) for g, l in lindblad_decomposition(model.C)]
    return liouvillian_superop(np.diag(Hdiag), terms)


def feedforward_superop(A: np.ndarray, B: np.ndarray, alpha_ff: float, k: float | None = None) -> np.ndarray:
    """Monitor A at rate k and feed the record forward onto B with strength alpha_ff."""
    k = 4.0 * alpha_ff if k is None else k
    anti = np.kron(A.T, np.eye(A.shape[0])) + np.kron(np.eye(A.shape[0]), A)  # rho -> A rho + rho A
    return (k / 4.0) * dissipator_superop(A) + alpha_ff * dissipator_superop(B) \
        - 1j * (np.sqrt(k * alpha_ff) / 2.0) * commutator_superop(B) @ anti


def feedforward_equiv(L, alpha_ff: float = 0.5) -> float:
    """Operator-norm gap between forward+reverse feedforward and D[L].

    L = A - iB with A, B Hermitian.  The forward scheme (measure A, drive B)
    and the reverse one (measure B, drive -A) each run at k = 4 alpha_ff; the
    sum equals 2 alpha_ff D[L], so the default alpha_ff = 1/2 targets D[L].
    """
    L = np.asarray(L, dtype=complex)
    if L.shape[0] > 8:
        raise ValueError("feedforward check is limited to at most 3 qubits")
    A = 0.5 * (L + L.conj().T)
    B = 0.5j * (L - L.conj().T)
    total = feedforward_superop(A, B, alpha_ff) + feedforward_superop(B, -A, alpha_ff)
    target = 2.0 * alpha_ff * dissipator_superop(L)
    return float(np.linalg.norm(total - target, 2))


def feedforward_model(model: DephasingModel, alpha_ff: float = 0.5) -> list[tuple[float, float]]:
    """Run ``feedforward_equiv`` for each Lindblad component sqrt(gamma_k) L_k.

    Returns ``(gamma_k, deviation)`` pairs.  Needs a physical model.
    """
    out = []
    for g, l in lindblad_decomposition(model.C):
        if g < 0:
            raise ModelError("feedforward realization needs non-negative rates")
        out.append((g, feedforward_equiv(np.sqrt(g) * z_jump(l), alpha_ff)))
    return out
