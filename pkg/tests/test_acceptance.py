"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]`` / ``[FAIL]`` line with the measured
quantity and its wall time; tolerances and runtime budgets are fixed here and
never loosened. Run ``pytest tests/test_acceptance.py -s`` to see the lines,
or ``python3 tests/test_acceptance.py`` for a plain report.
"""
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from properties import CHECKS, PROPERTY_CASES  # noqa: E402
from qdeph.dynamics import (  # noqa: E402
    geometric_grid, log_negativity, most_negative_rate, negativity_trace, positivity_probe,
    product_plus_state, random_product_state,
)
from qdeph.ensembles import ScanConfig, fig2_scan, fraction_vs_n  # noqa: E402
from qdeph.model import (  # noqa: E402
    case_c1, case_c2, case_c3, g_theta, make_model, sample_ginibre, two_qubit_family,
)
from qdeph.pt import Bipartition, enumerate_bipartitions, pt_transform, witness  # noqa: E402
from qdeph.spectral import lindblad_decomposition, pseudo_det  # noqa: E402
from qdeph.tomography import roundtrip  # noqa: E402
from qdeph.verify import classical_mc, feedforward_equiv, z_jump  # noqa: E402
from qdeph.dynamics import evolve  # noqa: E402


def report(number, title, ok, detail, elapsed, budget):
    within = elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    print(f"\n[{status}] criterion {number:2d}: {title}: {detail} ({elapsed:.2f} s, budget {budget:g} s)")
    assert ok, detail
    assert within, f"runtime {elapsed:.2f} s exceeds {budget} s"


def first(n):
    return Bipartition.of(n, [0])


def test_01_pseudo_determinant():
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(3, 9):
        got = pseudo_det(pt_transform(case_c3(n), first(n)).C_tilde)
        want = (2 - n) / (4 * n**2)
        worst = max(worst, abs(got - want) / abs(want))
    report(1, "pseudo-determinant law n=3..8", worst <= 1e-10, f"max rel err {worst:.2e}",
           time.perf_counter() - t0, 1)


def test_02_explicit_three_by_three():
    t0 = time.perf_counter()
    worst = 0.0
    for n in (4, 6, 8):
        a = np.sqrt(n / 2 - 1)
        b = np.sqrt(n * (n - 2)) / 2
        M = np.array([[1, 0, -a], [0, n / 2, 1j * b], [-a, -1j * b, n / 2 - 1]]) / n
        want = np.sort(np.linalg.eigvalsh(M))
        ev = np.linalg.eigvalsh(pt_transform(case_c3(n), first(n)).C_tilde)
        nonzero = np.sort(ev[np.abs(ev) > 1e-10])
        if nonzero.size != 3:
            worst = np.inf
            break
        worst = max(worst, np.abs(nonzero - want).max())
    report(2, "explicit 3x3 reduced matrix n=4,6,8", worst <= 1e-10, f"max eigenvalue gap {worst:.2e}",
           time.perf_counter() - t0, 1)


def test_03_classical_cases():
    t0 = time.perf_counter()
    worst = np.inf
    for n in range(2, 9):
        m = case_c1(n)
        for part in enumerate_bipartitions(n):
            worst = min(worst, witness(m, part) / np.linalg.norm(m.C))
        m = case_c2(n)
        for k in range(1, n):
            worst = min(worst, witness(m, Bipartition.of(n, range(k))) / np.linalg.norm(m.C))
    report(3, "C1 and C2 stay PSD under the transform", worst >= -1e-10,
           f"min witness/||C|| {worst:.2e}", time.perf_counter() - t0, 10)


def test_04_g_theta_landscape():
    t0 = time.perf_counter()
    grid = np.linspace(0.0, 2 * np.pi, 49)
    special = np.isclose(grid, 0.0) | np.isclose(grid, np.pi) | np.isclose(grid, 2 * np.pi)
    w = np.array([witness(g_theta(th), first(3)) for th in grid])
    ok = bool(np.all(w[~special] < -1e-6)) and bool(np.all(np.abs(w[special]) <= 1e-10))
    detail = f"max generic witness {w[~special].max():.3e}, max |witness| at 0, pi {np.abs(w[special]).max():.2e}"
    report(4, "g(theta) entangling except at 0, pi", ok, detail, time.perf_counter() - t0, 1)


def test_05_transient_negativity():
    t0 = time.perf_counter()
    grid = geometric_grid(1e-3, 10.0, 60, include_zero=True)
    trace = np.array(negativity_trace(case_c3(3), product_plus_state(3), first(3), grid))
    e = trace[:, 1]
    ok = e[0] == 0.0 and e.max() > 1e-3 and e[-1] < 1e-3
    report(5, "transient negativity for C3", ok,
           f"E_N(0)={e[0]:.1e}, max={e.max():.3e}, final={e[-1]:.2e}", time.perf_counter() - t0, 5)


def test_06_two_qubit_family():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    states = [random_product_state(2, rng) for _ in range(20)]
    grid = geometric_grid(1e-3, 10.0, 30, include_zero=True)
    part = first(2)
    min_w, max_e, coeff_err = np.inf, 0.0, 0.0
    for r in np.linspace(0.2, 2.0, 10):
        for alpha in np.linspace(0, np.pi, 10)[1:-1]:
            m = two_qubit_family(r, alpha)
            min_w = min(min_w, witness(m, part))
            tr = pt_transform(m, part)
            coeff_err = max(coeff_err, abs(tr.h_tilde[0, 1] + r * np.sin(alpha)),
                            abs(tr.C_tilde[0, 1] + r * np.cos(alpha)))
            for s in states:
                for t in grid:
                    max_e = max(max_e, log_negativity(evolve(s, m, t), part))
    ok = min_w >= -1e-12 and max_e <= 1e-9 and coeff_err <= 1e-15
    report(6, "two-qubit family never entangles", ok,
           f"min witness {min_w:.2e}, max E_N {max_e:.2e}, coefficient err {coeff_err:.1e}",
           time.perf_counter() - t0, 30)


def test_07_positivity_probe():
    t0 = time.perf_counter()
    dt = 1e-4
    worst, all_negative = 0.0, True
    for n in range(3, 7):
        tr = pt_transform(case_c3(n), first(n))
        p = positivity_probe(tr, dt)
        g0 = most_negative_rate(tr)
        all_negative &= p < 0
        worst = max(worst, abs(p / dt - g0) / abs(g0))
    report(7, "positivity probe tracks the negative rate", all_negative and worst <= 0.01,
           f"max rel gap {worst:.2e}", time.perf_counter() - t0, 5)


def test_08_classical_noise():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    models = [case_c1(3)]
    for _ in range(2):
        w = rng.standard_normal((3, 3))
        models.append(make_model(3, w @ w.T))
    rho0 = product_plus_state(3)
    devs = [classical_mc(m, rho0, 0.3, 10**5, rng_seed=k + 1)[1] for k, m in enumerate(models)]
    report(8, "classical white noise reproduces the master equation", max(devs) <= 0.02,
           f"max deviation {max(devs):.2e}", time.perf_counter() - t0, 60)


def test_09_feedforward():
    t0 = time.perf_counter()
    rng = np.random.default_rng(9)
    ops = [z_jump([1, 0, 0]), z_jump([1, -1j, 0])]
    g, l = lindblad_decomposition(case_c3(3).C)[0]
    ops.append(np.sqrt(g) * z_jump(l))
    ops += [z_jump(rng.standard_normal(3) + 1j * rng.standard_normal(3)) for _ in range(5)]
    dev = max(feedforward_equiv(L) for L in ops)
    report(9, "forward plus reverse feedforward gives D[L]", dev <= 1e-12, f"max deviation {dev:.2e}",
           time.perf_counter() - t0, 5)


def test_10_tomography_roundtrip():
    t0 = time.perf_counter()
    worst, rank_ok = 0.0, True
    for n in (3, 4, 5):
        for k in range(10):
            rng = np.random.default_rng([n, k])
            h = rng.standard_normal((n, n))
            m = sample_ginibre(n, rng).with_h(h + h.T)
            rep = roundtrip(m, 0.0, rng=rng)
            worst = max(worst, rep.err_re, rep.err_im, rep.err_h)
            rank_ok &= rep.rank == n * (n - 1)
    report(10, "noiseless tomography roundtrip", worst <= 1e-6 and rank_ok,
           f"max Frobenius err {worst:.2e}, rank n(n-1): {rank_ok}", time.perf_counter() - t0, 30)


def test_11_fig2_shape():
    t0 = time.perf_counter()
    _, bins = fig2_scan(ScanConfig(3, 10**5, master_seed=1))
    f = bins.fraction
    low, high = int(bins.entangling[0]), int(bins.entangling[-1])
    peak = float(f[1:-1].max())
    ok = low == 0 and high == 0 and peak > 0.1
    detail = (f"entangling in [0,0.02]: {low}/{int(bins.counts[0])}, "
              f"in [0.98,1]: {high}/{int(bins.counts[-1])}, interior max f {peak:.3f}")
    report(11, "three-qubit ensemble shape", ok, detail, time.perf_counter() - t0, 120)


def test_12_convergence():
    t0 = time.perf_counter()
    rows = fraction_vs_n(range(4, 25), 10**4, seed=1)
    n, f, s = (np.array(c) for c in zip(*rows))
    q = 1.0 - f
    slack = 2.0 * np.sqrt(s[1:] ** 2 + s[:-1] ** 2)
    violations = int(np.sum(q[1:] - q[:-1] > slack))
    ok = violations == 0 and f[-1] > f[0]
    report(12, "entangling fraction converges to 1", ok,
           f"f(4)={f[0]:.3f}, f(24)={f[-1]:.4f}, 2-sigma monotonicity violations {violations}",
           time.perf_counter() - t0, 300)


def test_13_property_suites():
    t0 = time.perf_counter()
    failures = {}
    for name, check in CHECKS.items():
        bad = 0
        for seed in range(PROPERTY_CASES):
            try:
                check(10_000 + seed)
            except AssertionError:
                bad += 1
        failures[name] = bad
    total = sum(failures.values())
    report(13, f"property suites, {PROPERTY_CASES} cases each", total == 0,
           ", ".join(f"{k}: {v}" for k, v in failures.items()), time.perf_counter() - t0, 60)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
