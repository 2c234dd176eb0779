"""Random-environment scans over Ginibre coefficient matrices C = w w^dagger.

Every sample draws its own PCG64 stream seeded from (master_seed, index),
so results do not depend on the thread count or chunking.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .pt import NEG_TOL, _transform_arrays
from .verify import default_threads

CHUNK = 2048


@dataclass(frozen=True)
class EnsembleRecord:
    sample_index: int
    seed: int
    lambda_min: float
    rel_imag_norm: float
    rank_proxy: float
    entangling: bool


@dataclass(frozen=True)
class ScanConfig:
    n: int
    n_samples: int
    master_seed: int = 1
    witness_partition: str = "first"  # "first" -> A = {0}; "all" -> min over bipartitions
    bin_width: float = 0.02
    threads: int | None = None
    neg_tol: float = NEG_TOL

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if not 0 < self.bin_width <= 1:
            raise ValueError("bin_width must lie in (0, 1]")
        if self.witness_partition not in ("first", "all"):
            raise ValueError("witness_partition must be 'first' or 'all'")


def sample_seed(master_seed: int, index: int, stream: tuple = ()) -> int:
    """64-bit per-sample seed derived from (master_seed, *stream, index)."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(*stream, index))
    return int(ss.generate_state(1, np.uint64)[0])


def ginibre_matrix(n: int, seed: int) -> np.ndarray:
    z = np.random.Generator(np.random.PCG64(seed)).standard_normal((2, n, n))
    w = z[0] + 1j * z[1]
    return w @ w.conj().T


@dataclass
class ScanResult:
    n: int
    seeds: np.ndarray
    lambda_min: np.ndarray
    rel_imag_norm: np.ndarray
    rank_proxy: np.ndarray
    entangling: np.ndarray

    def __len__(self):
        return self.seeds.size

    def records(self):
        for k in range(len(self)):
            yield EnsembleRecord(k, int(self.seeds[k]), float(self.lambda_min[k]), float(self.rel_imag_norm[k]),
                                 float(self.rank_proxy[k]), bool(self.entangling[k]))

    @property
    def fraction(self) -> float:
        return float(self.entangling.mean())


def _witness_masks(n: int, mode: str) -> list[np.ndarray]:
    if mode == "first":
        m = np.zeros(n, dtype=bool)
        m[0] = True
        return [m]
    return [np.array([(mask >> q) & 1 for q in range(n)], dtype=bool) for mask in range(1, (1 << n) - 1, 2)]


def _scan_chunk(n, seeds, masks, neg_tol):
    Cs = np.stack([ginibre_matrix(n, int(s)) for s in seeds])
    zeros = np.zeros((n, n))
    lam = np.full(len(seeds), np.inf)
    for m in masks:
        Ct = np.stack([_transform_arrays(C, zeros, m)[0] for C in Cs])
        lam = np.minimum(lam, np.linalg.eigvalsh(Ct)[:, 0])
    diag = np.einsum("kii->ki", Cs)
    off = Cs.copy()
    idx = np.arange(n)
    off[:, idx, idx] = 0
    rel = np.linalg.norm(Cs.imag, axis=(1, 2)) / np.linalg.norm(off, axis=(1, 2))
    tr = diag.real.sum(axis=1)
    rp = np.einsum("kij,kji->k", Cs, Cs).real / tr**2
    thr = neg_tol * np.maximum(1.0, np.linalg.norm(Cs, axis=(1, 2)))
    return lam, rel, rp, lam < -thr


def run_scan(config: ScanConfig, stream: tuple = ()) -> ScanResult:
    """Sample ``n_samples`` environments and evaluate the witness on each."""
    n, N = config.n, config.n_samples
    seeds = np.array([sample_seed(config.master_seed, k, stream) for k in range(N)], dtype=np.uint64)
    masks = _witness_masks(n, config.witness_partition)
    lam = np.empty(N)
    rel = np.empty(N)
    rp = np.empty(N)
    ent = np.empty(N, dtype=bool)

    def work(start):
        stop = min(start + CHUNK, N)
        lam[start:stop], rel[start:stop], rp[start:stop], ent[start:stop] = _scan_chunk(
            n, seeds[start:stop], masks, config.neg_tol)

    starts = range(0, N, CHUNK)
    threads = config.threads or default_threads()
    if threads == 1:
        for s in starts:
            work(s)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, starts))
    return ScanResult(n, seeds, lam, rel, rp, ent)


@dataclass
class BinnedFraction:
    edges: np.ndarray
    counts: np.ndarray
    entangling: np.ndarray

    @property
    def fraction(self) -> np.ndarray:
        """Entangling fraction per bin; empty bins read 0."""
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(self.counts > 0, self.entangling / np.maximum(self.counts, 1), 0.0)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[1:] + self.edges[:-1])


def bin_fraction(x: np.ndarray, flags: np.ndarray, bin_width: float) -> BinnedFraction:
    nbins = int(round(1.0 / bin_width))
    edges = np.linspace(0.0, 1.0, nbins + 1)
    idx = np.clip(np.floor(x / bin_width).astype(int), 0, nbins - 1)
    counts = np.bincount(idx, minlength=nbins)
    ent = np.bincount(idx, weights=flags.astype(float), minlength=nbins)
    return BinnedFraction(edges, counts, ent)


def fig2_scan(config: ScanConfig):
    """Witness vs. relative imaginary norm for three-qubit environments."""
    if config.n != 3:
        raise ValueError("fig2 scan is defined for n = 3")
    res = run_scan(config)
    return res, bin_fraction(res.rel_imag_norm, res.entangling, config.bin_width)


def fig3_scan(config: ScanConfig) -> ScanResult:
    """Witness (first-qubit cut) vs. rank proxy tr(C^2)/tr(C)^2."""
    return run_scan(config)


def fraction_vs_n(n_range, n_samples: int, seed: int = 1, threads: int | None = None) -> list[tuple[int, float, float]]:
    """Entangling fraction f(n) for the first-qubit cut, with binomial stderr."""
    out = []
    for n in n_range:
        if not 3 <= n <= 50:
            raise ValueError("n must lie in [3, 50]")
        res = run_scan(ScanConfig(n, n_samples, seed, threads=threads), stream=(n,))
        f = res.fraction
        out.append((int(n), f, float(np.sqrt(f * (1.0 - f) / n_samples))))
    return out
