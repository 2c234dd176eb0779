"""Exact state evolution under Z-dephasing generators.

The generator is diagonal in the Z product basis:
L(|a><b|) = (i Omega_ab - Gamma_ab) |a><b|, so every density-matrix element
just picks up a phase and a decay factor.  Basis index of a label ``a``
(entries +-1) is sum_i b_i 2^(n-1-i) with b_i = (1 - a_i)/2, i.e. qubit 0
is the most significant bit and a_i = +1 is |0>.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .pt import Bipartition
from .spectral import lindblad_decomposition, trace_norm

STATE_CAP = 10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    n: int
    rho: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        dim = 2**self.n
        if rho.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix for n={self.n}, got {rho.shape}")
        if np.abs(rho - rho.conj().T).max() > 1e-10:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > 1e-10:
            raise ValueError("density matrix does not have unit trace")
        object.__setattr__(self, "rho", rho)


def _as_array(rho) -> np.ndarray:
    return rho.rho if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def _n_of(rho: np.ndarray) -> int:
    n = int(round(np.log2(rho.shape[0])))
    if rho.shape != (2**n, 2**n):
        raise ValueError(f"not a multi-qubit operator: shape {rho.shape}")
    return n


@lru_cache(maxsize=None)
def basis_labels(n: int) -> np.ndarray:
    """(2^n, n) array of +-1 labels in basis-index order."""
    idx = np.arange(2**n)[:, None]
    bits = (idx >> (n - 1 - np.arange(n))[None, :]) & 1
    out = 1 - 2 * bits
    out.setflags(write=False)
    return out


def label_index(alpha) -> int:
    alpha = np.asarray(alpha)
    bits = (1 - alpha) // 2
    n = alpha.size
    return int(np.sum(bits * (1 << (n - 1 - np.arange(n)))))


def _check_labels(alpha, beta, model):
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if alpha.shape != (model.n,) or beta.shape != (model.n,):
        raise ValueError(f"labels must have length n={model.n}")
    return alpha, beta


def gamma_rate(alpha, beta, model) -> float:
    """Decay rate of |alpha><beta|: 1/2 (alpha-beta)^T Re(C) (alpha-beta)."""
    alpha, beta = _check_labels(alpha, beta, model)
    d = alpha - beta
    return float(0.5 * d @ np.real(model.C) @ d)


def omega_freq(alpha, beta, model) -> float:
    """Oscillation frequency of |alpha><beta| from Im(C) and the Ising couplings."""
    alpha, beta = _check_labels(alpha, beta, model)
    T = np.imag(model.C)
    h = np.asarray(model.h)
    om = 0.0
    for k in range(model.n):
        for m in range(k + 1, model.n):
            om += (alpha[k] * beta[m] - alpha[m] * beta[k]) * T[k, m]
            om -= (alpha[k] * alpha[m] - beta[k] * beta[m]) * h[k, m]
    return float(om)


def rate_matrices(model):
    """All (Gamma, Omega) at once, each a 2^n x 2^n real matrix."""
    lab = basis_labels(model.n).astype(float)
    R = lab @ np.real(model.C) @ lab.T
    q = np.diag(R)
    gamma = 0.5 * (q[:, None] + q[None, :] - 2.0 * R)
    energy = 0.5 * np.einsum("ak,km,am->a", lab, np.asarray(model.h, dtype=float), lab)
    omega = lab @ np.imag(model.C) @ lab.T - (energy[:, None] - energy[None, :])
    # exact structure: Gamma symmetric, Omega antisymmetric, both zero on the diagonal
    gamma = 0.5 * (gamma + gamma.T)
    omega = 0.5 * (omega - omega.T)
    np.fill_diagonal(gamma, 0.0)
    np.fill_diagonal(omega, 0.0)
    return gamma, omega


def evolve(rho0, model, t: float, cap: int = STATE_CAP):
    """rho(t)_ab = exp[(i Omega_ab - Gamma_ab) t] rho(0)_ab.

    ``model`` may be a DephasingModel or a TransformedModel (non-PSD C~ and
    nonzero h~ are fine; that is how partially transposed states evolve).
    Returns a DensityMatrix for DensityMatrix input, an array otherwise.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if model.n > cap:
        raise ValueError(f"n={model.n} exceeds the state-size cap {cap}")
    rho = _as_array(rho0)
    if rho.shape != (2**model.n, 2**model.n):
        raise ValueError("state and model sizes differ")
    if t == 0:
        out = rho.copy()
    else:
        gamma, omega = rate_matrices(model)
        with np.errstate(under="ignore"):
            out = rho * np.exp((1j * omega - gamma) * t)
    return DensityMatrix(model.n, out) if isinstance(rho0, DensityMatrix) else out


# --- states -----------------------------------------------------------------

def _pure(psi: np.ndarray) -> np.ndarray:
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def product_state(kets) -> DensityMatrix:
    """Pure product state from a list of single-qubit kets (qubit 0 first)."""
    psi = np.array([1.0 + 0j])
    for k in kets:
        k = np.asarray(k, dtype=complex)
        psi = np.kron(psi, k / np.linalg.norm(k))
    return DensityMatrix(len(kets), _pure(psi))


def random_product_state(n: int, rng: np.random.Generator) -> DensityMatrix:
    return product_state([rng.standard_normal(2) + 1j * rng.standard_normal(2) for _ in range(n)])


def product_plus_state(n: int) -> DensityMatrix:
    return DensityMatrix(n, np.full((2**n, 2**n), 2.0**-n, dtype=complex))


def _pair_check(i: int, j: int, n: int):
    if not (0 <= i < j < n):
        raise ValueError(f"need 0 <= i < j < n, got i={i}, j={j}, n={n}")


def bell_pair_labels(i: int, j: int, n: int):
    """(alpha, beta) of the Bell-state coherence: all |0>, vs. qubits i, j flipped."""
    _pair_check(i, j, n)
    alpha = np.ones(n, dtype=int)
    beta = alpha.copy()
    beta[[i, j]] = -1
    return alpha, beta


def bar_pair_labels(i: int, j: int, n: int):
    """(alpha, beta) of the bar-state coherence: qubits 0..i in |1>, qubit j differs."""
    _pair_check(i, j, n)
    alpha = np.ones(n, dtype=int)
    alpha[: i + 1] = -1
    beta = alpha.copy()
    beta[j] = -1
    return alpha, beta


def _two_label_state(alpha, beta) -> DensityMatrix:
    n = len(alpha)
    psi = np.zeros(2**n, dtype=complex)
    psi[label_index(alpha)] = 1.0
    psi[label_index(beta)] = 1.0
    return DensityMatrix(n, _pure(psi))


def bell_state(i: int, j: int, n: int) -> DensityMatrix:
    """(|0_i 0_j> + |1_i 1_j>)/sqrt(2), other qubits in |0>."""
    return _two_label_state(*bell_pair_labels(i, j, n))


def bar_state(i: int, j: int, n: int) -> DensityMatrix:
    """Qubits 0..i in |1>, qubit j in |+>, the rest in |0>."""
    return _two_label_state(*bar_pair_labels(i, j, n))


# --- entanglement -------------------------------------------------------------

def partial_transpose_state(rho, part: Bipartition) -> np.ndarray:
    """Transpose the Z-basis indices of the qubits in ``part.A``."""
    rho = _as_array(rho)
    n = _n_of(rho)
    if n != part.n:
        raise ValueError(f"state has n={n}, partition has n={part.n}")
    perm = list(range(2 * n))
    for a in part.A:
        perm[a], perm[n + a] = n + a, a
    return rho.reshape((2,) * (2 * n)).transpose(perm).reshape(2**n, 2**n)


def log_negativity(rho, part: Bipartition) -> float:
    """log2 of the trace norm of the partial transpose (clipped at 0)."""
    return max(0.0, float(np.log2(trace_norm(partial_transpose_state(rho, part)))))


def geometric_grid(tmin: float = 1e-3, tmax: float = 10.0, points: int = 60, include_zero: bool = False) -> np.ndarray:
    grid = np.geomspace(tmin, tmax, points)
    return np.concatenate([[0.0], grid]) if include_zero else grid


def negativity_trace(model, rho0, part: Bipartition, t_grid=None) -> list[tuple[float, float]]:
    """E_N(t) along ``t_grid`` (default: 60 geometric points in [1e-3, 10])."""
    t_grid = geometric_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    if model.n > STATE_CAP:
        raise ValueError(f"n={model.n} exceeds the state-size cap {STATE_CAP}")
    rho = _as_array(rho0)
    gamma, omega = rate_matrices(model)
    gen = 1j * omega - gamma
    out = []
    for t in t_grid:
        if t < 0:
            raise ValueError("t must be non-negative")
        with np.errstate(under="ignore"):
            rho_t = rho * np.exp(gen * t)
        out.append((float(t), log_negativity(rho_t, part)))
    return out


def z_combination(coeffs) -> np.ndarray:
    """Diagonal of sum_i coeffs_i Z_i in the product basis."""
    coeffs = np.asarray(coeffs)
    return basis_labels(coeffs.size) @ coeffs


def positivity_probe(transformed, dt: float) -> float:
    """<phi| rho(dt) |phi> for psi = |+>^n and phi = L0 psi.

    L0 is the jump operator of the most negative rate gamma0 of C~; to first
    order the result is dt * gamma0 < 0, exhibiting loss of positivity.
    """
    comps = lindblad_decomposition(transformed.C)
    negative = [(g, l) for g, l in comps if g < 0]
    if not negative:
        raise ValueError("transformed generator has no negative rate")
    gamma0, l0 = min(negative, key=lambda c: c[0])
    n = transformed.n
    psi = np.full(2**n, 2.0 ** (-n / 2), dtype=complex)
    phi = z_combination(l0) * psi
    phi = phi / np.linalg.norm(phi)  # <psi|L0^dag L0|psi> = |l0|^2 = 1 already
    rho = evolve(np.outer(psi, psi.conj()), transformed, dt)
    return float(np.real(phi.conj() @ rho @ phi))


def most_negative_rate(transformed) -> float:
    comps = lindblad_decomposition(transformed.C)
    return min(g for g, _ in comps)


def dark_coherences(model, tol: float = 1e-12) -> list[tuple[int, int]]:
    """Index pairs (a, b), a < b, whose coherence neither decays nor rotates."""
    gamma, omega = rate_matrices(model)
    scale = max(1.0, float(np.abs(gamma).max()), float(np.abs(omega).max()))
    mask = (np.abs(gamma) <= tol * scale) & (np.abs(omega) <= tol * scale)
    a, b = np.nonzero(np.triu(mask, 1))
    return list(zip(a.tolist(), b.tolist()))
