"""Bell-state coherence tomography of (Re C, Im C, h).

Each pair (i, j) is probed with two states.  The Bell state tracks the
coherence between all-|0> and the i, j-flipped label; the "bar" state puts
qubits 0..i in |1> and tracks the flip of qubit j.  Their coherences evolve
as 1/2 exp[(i Omega - Gamma) t].  Decay rates fix Re C; the two families
of frequencies give n(n-1) linear equations for the strict upper triangles
of h and Im C.  Pairs are always ordered lexicographically, (0,1), (0,2),
..., (n-2, n-1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .dynamics import (bar_pair_labels, bar_state, bell_pair_labels, bell_state,
                       evolve, label_index, product_state)
from .model import DephasingModel, make_model

AMPLITUDE_FLOOR = 1e-6


class RankDeficientError(np.linalg.LinAlgError):
    def __init__(self, rank: int, needed: int):
        super().__init__(f"measurement system has rank {rank}, need {needed}")
        self.rank = rank
        self.needed = needed


def pairs(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


def upper(M: np.ndarray) -> np.ndarray:
    """Strict upper triangle in lexicographic pair order."""
    r, c = np.triu_indices(M.shape[0], 1)
    return np.asarray(M)[r, c]


def from_upper(v: np.ndarray, n: int, antisymmetric: bool = False) -> np.ndarray:
    M = np.zeros((n, n))
    r, c = np.triu_indices(n, 1)
    M[r, c] = v
    M[c, r] = -v if antisymmetric else v
    return M


@dataclass(frozen=True)
class MeasurementVectors:
    pair: tuple[int, int]
    q: np.ndarray
    w: np.ndarray
    q_bar: np.ndarray
    w_bar: np.ndarray


def measurement_vectors(i: int, j: int, n: int) -> MeasurementVectors:
    """Coefficient vectors with Omega_ij = -h.q + t.w and Omega-bar_ij = -h.q_bar + t.w_bar."""
    if not 0 <= i < j < n:
        raise ValueError(f"need 0 <= i < j < n, got i={i}, j={j}, n={n}")
    P = pairs(n)
    q, w, qb, wb = (np.zeros(len(P)) for _ in range(4))
    ij = (i, j)
    for p, (k, m) in enumerate(P):
        k_in, m_in = k in ij, m in ij
        if k_in and not m_in:
            q[p], w[p] = 2, 2
        elif m_in and not k_in:
            q[p], w[p] = 2, -2
        if m == j and k <= i:
            qb[p], wb[p] = -2, 2
        elif m == j and i < k < j:
            qb[p], wb[p] = 2, -2
        elif k == j and m > j:
            qb[p], wb[p] = 2, 2
    return MeasurementVectors(ij, q, w, qb, wb)


@dataclass
class MeasurementSet:
    n: int
    gamma_single: np.ndarray
    gamma_pair: np.ndarray
    omega_pair: np.ndarray
    omega_bar: np.ndarray
    gamma_bar: np.ndarray | None = None

    def to_dict(self) -> dict:
        d = {
            "n": self.n,
            "pairs": [list(p) for p in pairs(self.n)],
            "gamma_single": self.gamma_single.tolist(),
            "gamma_pair": self.gamma_pair.tolist(),
            "omega_pair": self.omega_pair.tolist(),
            "omega_bar": self.omega_bar.tolist(),
        }
        if self.gamma_bar is not None:
            d["gamma_bar"] = self.gamma_bar.tolist()
        return d


def predict_measurements(model: DephasingModel) -> MeasurementSet:
    C = np.asarray(model.C)
    n = model.n
    hv, tv = upper(model.h), upper(C.imag)
    g1 = 2.0 * np.real(np.diag(C))
    g2, om, omb, gb = [], [], [], []
    for i, j in pairs(n):
        g2.append(2.0 * (C[i, i].real + C[j, j].real + 2.0 * C[i, j].real))
        mv = measurement_vectors(i, j, n)
        om.append(-hv @ mv.q + tv @ mv.w)
        omb.append(-hv @ mv.q_bar + tv @ mv.w_bar)
        gb.append(2.0 * C[j, j].real)  # only qubit j differs in the bar coherence
    return MeasurementSet(n, g1, np.array(g2), np.array(om), np.array(omb), np.array(gb))


@dataclass
class CoherenceTrace:
    times: np.ndarray
    samples: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.samples = np.asarray(self.samples, dtype=complex)
        if self.times.shape != self.samples.shape:
            raise ValueError("times and samples differ in length")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("t,re,im\n")
            for t, s in zip(self.times, self.samples):
                fh.write(f"{t:.17g},{s.real:.17g},{s.imag:.17g}\n")


def synthesize_trace(omega: float, gamma: float, t_grid, noise_sigma: float = 0.0, rng=None, **meta) -> CoherenceTrace:
    """s(t) = 1/2 exp[(i Omega - Gamma) t] plus complex Gaussian noise of width sigma."""
    if gamma < 0:
        raise ValueError("decay rate must be non-negative")
    t = np.asarray(t_grid, dtype=float)
    s = 0.5 * np.exp((1j * omega - gamma) * t)
    if noise_sigma > 0:
        rng = np.random.default_rng(rng)
        s = s + noise_sigma * (rng.standard_normal(t.size) + 1j * rng.standard_normal(t.size))
    return CoherenceTrace(t, s, dict(meta, sigma=noise_sigma))


def fit_trace(trace: CoherenceTrace) -> tuple[float, float]:
    """(Omega_hat, Gamma_hat) from origin-anchored least-squares lines.

    ln|2 s| against t gives -Gamma, the unwrapped phase gives Omega.  Samples
    below 1e-6 of the largest amplitude are dropped first.
    """
    t, s = trace.times, trace.samples
    if t.size < 4:
        raise ValueError("need at least 4 samples to fit")
    amp = np.abs(s)
    if amp.max() < AMPLITUDE_FLOOR:
        raise ValueError("trace amplitude is below the fit floor everywhere")
    keep = amp >= AMPLITUDE_FLOOR * amp.max()
    t, s, amp = t[keep], s[keep], amp[keep]
    if t.size < 4:
        raise ValueError("fewer than 4 samples above the amplitude floor")
    phase = np.unwrap(np.angle(s))
    tt = t @ t
    gamma_hat = -(t @ np.log(2.0 * amp)) / tt
    omega_hat = (t @ phase) / tt
    return float(omega_hat), float(gamma_hat)


def measurement_matrix(n: int) -> np.ndarray:
    """Stacked rows [-q | w] then [-q_bar | w_bar] acting on [h; Im C] upper triangles."""
    rows = []
    for i, j in pairs(n):
        mv = measurement_vectors(i, j, n)
        rows.append(np.concatenate([-mv.q, mv.w]))
    for i, j in pairs(n):
        mv = measurement_vectors(i, j, n)
        rows.append(np.concatenate([-mv.q_bar, mv.w_bar]))
    return np.array(rows)


def recover(meas: MeasurementSet, rank_tol: float = 1e-10):
    """Invert a measurement set to ``(C_hat, h_hat)``.

    Raises RankDeficientError (carrying ``.rank``) when the frequency system
    cannot separate Ising couplings from Im C, as happens for n = 2.
    """
    n = meas.n
    P = pairs(n)
    re = np.diag(np.asarray(meas.gamma_single, dtype=float) / 2.0)
    for p, (i, j) in enumerate(P):
        re[i, j] = re[j, i] = (meas.gamma_pair[p] / 2.0 - re[i, i] - re[j, j]) / 2.0
    M = measurement_matrix(n)
    need = n * (n - 1)
    rank = int(np.linalg.matrix_rank(M, tol=rank_tol * max(1.0, np.abs(M).max())))
    if rank < need:
        raise RankDeficientError(rank, need)
    rhs = np.concatenate([meas.omega_pair, meas.omega_bar])
    x = np.linalg.solve(M, rhs) if M.shape[0] == M.shape[1] else np.linalg.lstsq(M, rhs, rcond=None)[0]
    npairs = len(P)
    h_hat = from_upper(x[:npairs], n)
    im = from_upper(x[npairs:], n, antisymmetric=True)
    return re + 1j * im, h_hat


# --- end-to-end protocol --------------------------------------------------------

def _single_labels(i: int, n: int):
    alpha = np.ones(n, dtype=int)
    beta = alpha.copy()
    beta[i] = -1
    return alpha, beta


def _single_state(i: int, n: int):
    kets = [np.array([1.0, 0.0])] * n
    kets[i] = np.array([1.0, 1.0])
    return product_state(kets)


def default_grid(model: DephasingModel, points: int = 40) -> np.ndarray:
    """Sampling grid from a rough a-priori rate scale of the model.

    Spans about two decay times of the fastest coherence and keeps the phase
    step per sample below pi/2 for the largest possible frequency.
    """
    n = model.n
    cmax = float(np.abs(model.C).max())
    gamma_bound = 2.0 * n * n * cmax
    omega_bound = 4.0 * len(pairs(n)) * (float(np.abs(model.C.imag).max()) + float(np.abs(model.h).max()))
    tmax = 2.0 / max(gamma_bound, 1e-12)
    if omega_bound > 0:
        points = max(points, int(np.ceil(tmax * omega_bound / (np.pi / 2))) + 1)
    return np.linspace(0.0, tmax, points)


def _measure(model, state, labels, t_grid, sigma, rng, **meta) -> CoherenceTrace:
    a, b = (label_index(x) for x in labels)
    rho0 = state.rho
    ref = rho0[a, b]
    s = np.array([evolve(rho0, model, t)[a, b] for t in t_grid]) / ref * 0.5
    if sigma > 0:
        s = s + sigma * (rng.standard_normal(s.size) + 1j * rng.standard_normal(s.size))
    return CoherenceTrace(t_grid, s, dict(meta, sigma=sigma))


def simulate_measurements(model: DephasingModel, noise_sigma: float = 0.0, t_grid=None, rng=None) -> MeasurementSet:
    """Run the protocol on simulated states and fit every coherence trace."""
    n = model.n
    rng = np.random.default_rng(rng)
    t_grid = default_grid(model) if t_grid is None else np.asarray(t_grid, dtype=float)
    g1 = [fit_trace(_measure(model, _single_state(i, n), _single_labels(i, n), t_grid, noise_sigma, rng))[1]
          for i in range(n)]
    g2, om, omb, gb = [], [], [], []
    for i, j in pairs(n):
        o, g = fit_trace(_measure(model, bell_state(i, j, n), bell_pair_labels(i, j, n), t_grid, noise_sigma, rng,
                                  family="bell", i=i, j=j))
        g2.append(g)
        om.append(o)
        o, g = fit_trace(_measure(model, bar_state(i, j, n), bar_pair_labels(i, j, n), t_grid, noise_sigma, rng,
                                  family="bar", i=i, j=j))
        gb.append(g)
        omb.append(o)
    return MeasurementSet(n, np.array(g1), np.array(g2), np.array(om), np.array(omb), np.array(gb))


@dataclass
class RoundtripReport:
    n: int
    sigma: float
    err_re: float
    err_im: float
    err_h: float
    rank: int

    def to_dict(self) -> dict:
        return {"n": self.n, "sigma": self.sigma, "err_re_C": self.err_re, "err_im_C": self.err_im,
                "err_h": self.err_h, "rank": self.rank}


def roundtrip(model: DephasingModel, noise_sigma: float = 0.0, t_grid=None, rng=None) -> RoundtripReport:
    """Simulate, fit and invert; report Frobenius errors in Re C, Im C and h."""
    if model.n > 6:
        raise ValueError("roundtrip is limited to n <= 6")
    meas = simulate_measurements(model, noise_sigma, t_grid, rng)
    C_hat, h_hat = recover(meas)
    return RoundtripReport(
        model.n, noise_sigma,
        float(np.linalg.norm(C_hat.real - model.C.real)),
        float(np.linalg.norm(C_hat.imag - model.C.imag)),
        float(np.linalg.norm(h_hat - model.h)),
        int(np.linalg.matrix_rank(measurement_matrix(model.n))),
    )


def recovered_model(meas: MeasurementSet) -> DephasingModel:
    C_hat, h_hat = recover(meas)
    return make_model(meas.n, C_hat, h_hat, tol=1e-8)
