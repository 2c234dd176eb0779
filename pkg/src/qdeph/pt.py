"""Partial transpose lifted to the coefficient matrices, and the witness.

Transposing the Z-basis indices of a subsystem A maps the dephasing
generator (C, h) to another generator of the same form (C~, h~).  For a pair
(k, l) with k in A and l outside A:

    h~_kl = Im c_kl,    c~_kl = -Re c_kl + i h_kl;

pairs inside A get (c~_kl, h~_kl) = (c_lk, -h_kl), pairs outside A are
untouched, and the (l, k) entries follow from Hermiticity of C~ and symmetry
of h~.  C~ is Hermitian but need not be PSD; a negative eigenvalue of C~
(with h = 0) means the dissipation alone can entangle A with its complement.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .model import DephasingModel, ModelError

BIPARTITION_CAP = 16
NEG_TOL = 1e-12


@dataclass(frozen=True)
class Bipartition:
    n: int
    A: frozenset

    def __post_init__(self):
        A = frozenset(int(a) for a in self.A)
        object.__setattr__(self, "A", A)
        if not 0 < len(A) < self.n:
            raise ValueError(f"subsystem must be a proper nonempty subset, got {sorted(A)} for n={self.n}")
        if min(A) < 0 or max(A) >= self.n:
            raise ValueError(f"qubit indices must lie in [0, {self.n}), got {sorted(A)}")

    @classmethod
    def of(cls, n: int, A: Iterable[int]) -> "Bipartition":
        return cls(n, frozenset(A))

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        m[list(self.A)] = True
        return m

    def label(self) -> str:
        return ",".join(str(a) for a in sorted(self.A))

    def __str__(self):
        return "{" + self.label() + "}"


@dataclass(frozen=True, eq=False)
class TransformedModel:
    n: int
    C_tilde: np.ndarray
    h_tilde: np.ndarray
    partition: Bipartition

    # duck-typed with DephasingModel so dynamics can evolve either one
    @property
    def C(self) -> np.ndarray:
        return self.C_tilde

    @property
    def h(self) -> np.ndarray:
        return self.h_tilde


def neg_threshold(C: np.ndarray, tol: float = NEG_TOL) -> float:
    """Entangling cutoff: lambda_min < -tol * max(1, |C|_F)."""
    return tol * max(1.0, float(np.linalg.norm(C)))


def _transform_arrays(C: np.ndarray, h: np.ndarray, inA: np.ndarray):
    both = inA[:, None] & inA[None, :]
    row_in = inA[:, None] & ~inA[None, :]
    col_in = ~inA[:, None] & inA[None, :]

    Ct = C.copy()
    ht = h.copy()
    Ct[both] = C.T[both]
    ht[both] = -h[both]
    Ct[row_in] = (-C.real + 1j * h)[row_in]
    ht[row_in] = C.imag[row_in]
    Ct[col_in] = (-C.real - 1j * h)[col_in]
    ht[col_in] = -C.imag[col_in]
    return Ct, ht


def pt_transform(model, part: Bipartition) -> TransformedModel:
    """Coefficients of the generator acting on the partially transposed state."""
    if part.n != model.n:
        raise ModelError(f"partition is for n={part.n}, model has n={model.n}")
    C = np.asarray(model.C, dtype=complex)
    h = np.asarray(model.h, dtype=float)
    Ct, ht = _transform_arrays(C, h, part.mask)
    Ct.setflags(write=False)
    ht.setflags(write=False)
    return TransformedModel(model.n, Ct, ht, part)


def enumerate_bipartitions(n: int) -> list[Bipartition]:
    """One representative per {A, complement} pair: subsets containing qubit 0.

    Ordered by ascending bitmask with qubit q on bit q; 2^(n-1) - 1 entries.
    """
    if n < 2:
        raise ValueError("need at least two qubits to bipartition")
    full = (1 << n) - 1
    return [
        Bipartition(n, frozenset(q for q in range(n) if mask >> q & 1))
        for mask in range(1, full, 2)
    ]


def witness(model: DephasingModel, part: Bipartition) -> float:
    """Smallest eigenvalue of C~ for the dissipative part alone (h set to 0)."""
    C = np.asarray(model.C, dtype=complex)
    Ct, _ = _transform_arrays(C, np.zeros(C.shape), part.mask)
    return float(np.linalg.eigvalsh(Ct)[0])


def is_entangling(lambda_min: float, C: np.ndarray, tol: float = NEG_TOL) -> bool:
    return bool(lambda_min < -neg_threshold(C, tol))


def witness_all(model: DephasingModel, cap: int = BIPARTITION_CAP, chunk: int = 4096):
    """Minimum witness over all bipartitions.

    Returns ``(best_lambda, best_partition)``; ties go to the earliest
    partition in enumeration order.
    """
    n = model.n
    if n > cap:
        raise ValueError(f"n={n} exceeds the bipartition cap {cap}")
    parts = enumerate_bipartitions(n)
    C = np.asarray(model.C, dtype=complex)
    zeros = np.zeros(C.shape)
    best = np.empty(len(parts))
    for start in range(0, len(parts), chunk):
        block = parts[start:start + chunk]
        stack = np.stack([_transform_arrays(C, zeros, p.mask)[0] for p in block])
        best[start:start + len(block)] = np.linalg.eigvalsh(stack)[:, 0]
    idx = int(np.argmin(best))  # first occurrence of the minimum
    return float(best[idx]), parts[idx]


def witness_table(model: DephasingModel, parts: list[Bipartition] | None = None):
    """Witness for each partition, as a list of ``(partition, lambda_min, entangling)``."""
    parts = enumerate_bipartitions(model.n) if parts is None else parts
    out = []
    for p in parts:
        lam = witness(model, p)
        out.append((p, lam, is_entangling(lam, model.C)))
    return out
