"""Command-line front end.

Exit codes: 0 success, 1 invalid input (bad flags, unreadable or malformed
files, invalid models), 2 numerical contract failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import dynamics, ensembles, model as M, pt, tomography, verify
from .io import csv_text, fmt, load_model, model_to_dict, save_model

EXIT_OK, EXIT_INPUT, EXIT_CONTRACT = 0, 1, 2

SCHEMAS = {
    "case": 'model JSON: {"n": int, "c_re": [[float]], "c_im": [[float]], "h": [[float]]}',
    "witness": 'JSON: {"n": int, "best_lambda": float, "best_partition": [int], "entangling": bool, '
               '"records": [{"partition": [int], "lambda_min": float, "entangling": bool}]}; '
               "CSV columns: partition,lambda_min,entangling",
    "evolve": 'JSON: {"n": int, "t": float, "state": str, "rho_re": [[float]], "rho_im": [[float]]}',
    "negativity": "CSV columns: t,E_N",
    "ensemble": "fig2 CSV columns: rel_imag_norm,lambda_min (bins CSV: bin_lo,bin_hi,count,fraction); "
                "fig3 CSV columns: rank_proxy,lambda_min; fvsn CSV columns: n,f,stderr",
    "tomo": 'predict JSON: {"n", "pairs", "gamma_single", "gamma_pair", "omega_pair", "omega_bar", "gamma_bar"}; '
            'roundtrip JSON: {"n", "sigma", "err_re_C", "err_im_C", "err_h", "rank"}; trace CSV columns: t,re,im',
    "verify": 'JSON: {"deviation": float, "pass": bool}',
}


class UsageError(Exception):
    pass


class ContractFailure(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _epilog(name: str) -> str:
    return f"output schema: {SCHEMAS[name]}"


def build_parser() -> Parser:
    p = Parser(prog="qdeph", description="Entangling-power analysis of correlated Z-dephasing environments.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    c = sub.add_parser("case", help="write a canonical or random model file", epilog=_epilog("case"))
    c.add_argument("kind", choices=["c1", "c2", "c3", "gtheta", "twoqubit", "ginibre"])
    c.add_argument("--n", type=int, default=3)
    c.add_argument("--theta", type=float, default=2 * np.pi / 3)
    c.add_argument("--r", type=float, default=1.0)
    c.add_argument("--alpha", type=float, default=np.pi / 2)
    c.add_argument("--seed", type=int, default=1)
    c.add_argument("--h-seed", type=int, default=None, help="add random Ising couplings drawn from this seed")
    c.add_argument("--out", default="-")

    w = sub.add_parser("witness", help="minimum eigenvalue of the transformed C", epilog=_epilog("witness"))
    w.add_argument("--model", required=True)
    g = w.add_mutually_exclusive_group()
    g.add_argument("--partition", help="comma-separated qubits of subsystem A")
    g.add_argument("--all", action="store_true", help="scan every bipartition (default)")
    fmt_g = w.add_mutually_exclusive_group()
    fmt_g.add_argument("--json", action="store_true")
    fmt_g.add_argument("--csv", action="store_true")
    w.add_argument("--out", default="-")

    e = sub.add_parser("evolve", help="exact state evolution", epilog=_epilog("evolve"))
    e.add_argument("--model", required=True)
    e.add_argument("--state", default="plus", help="plus | bell:i,j | bar:i,j")
    e.add_argument("--t", type=float, required=True)
    e.add_argument("--out", default="-")

    ng = sub.add_parser("negativity", help="logarithmic negativity along a time grid", epilog=_epilog("negativity"))
    ng.add_argument("--model", required=True)
    ng.add_argument("--partition", default="0")
    ng.add_argument("--state", default="plus")
    ng.add_argument("--tmin", type=float, default=1e-3)
    ng.add_argument("--tmax", type=float, default=10.0)
    ng.add_argument("--points", type=int, default=60)
    ng.add_argument("--csv", default="-")

    en = sub.add_parser("ensemble", help="random-environment scans", epilog=_epilog("ensemble"))
    en.add_argument("kind", choices=["fig2", "fig3", "fvsn"])
    en.add_argument("--n", type=int, default=None)
    en.add_argument("--nmin", type=int, default=4)
    en.add_argument("--nmax", type=int, default=32)
    en.add_argument("--samples", type=int, default=10_000)
    en.add_argument("--seed", type=int, default=1)
    en.add_argument("--bin-width", type=float, default=0.02)
    en.add_argument("--bins", default=None, help="fig2 only: also write binned fractions here")
    en.add_argument("--threads", type=int, default=None)
    en.add_argument("--out", default="-")

    t = sub.add_parser("tomo", help="Bell-state tomography of C and h", epilog=_epilog("tomo"))
    t.add_argument("kind", choices=["predict", "roundtrip"])
    t.add_argument("--model", required=True)
    t.add_argument("--sigma", type=float, default=0.0)
    t.add_argument("--seed", type=int, default=1)
    t.add_argument("--points", type=int, default=40)
    t.add_argument("--trace-dir", default=None, help="roundtrip only: write each coherence trace as CSV")
    t.add_argument("--json", dest="out", default="-")

    v = sub.add_parser("verify", help="classical-noise and feedforward equivalence checks", epilog=_epilog("verify"))
    v.add_argument("kind", choices=["classical", "feedforward"])
    v.add_argument("--model", required=True)
    v.add_argument("--state", default="plus")
    v.add_argument("--t", type=float, default=0.3)
    v.add_argument("--traj", type=int, default=100_000)
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--tol", type=float, default=None,
                   help="pass threshold (default 0.02 for classical, 1e-12 for feedforward)")
    v.add_argument("--threads", type=int, default=None)
    v.add_argument("--out", default="-")
    return p


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _parse_partition(spec: str, n: int) -> pt.Bipartition:
    try:
        qubits = [int(x) for x in spec.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad partition {spec!r}") from exc
    return pt.Bipartition.of(n, qubits)


def _parse_state(spec: str, n: int) -> dynamics.DensityMatrix:
    kind, _, args = spec.partition(":")
    if kind == "plus" and not args:
        return dynamics.product_plus_state(n)
    if kind in ("bell", "bar"):
        try:
            i, j = (int(x) for x in args.split(","))
        except ValueError as exc:
            raise UsageError(f"bad state {spec!r}; expected {kind}:i,j") from exc
        return dynamics.bell_state(i, j, n) if kind == "bell" else dynamics.bar_state(i, j, n)
    raise UsageError(f"unknown state {spec!r}")


def cmd_case(a) -> int:
    builders = {
        "c1": lambda: M.case_c1(a.n),
        "c2": lambda: M.case_c2(a.n),
        "c3": lambda: M.case_c3(a.n),
        "gtheta": lambda: M.g_theta(a.theta),
        "twoqubit": lambda: M.two_qubit_family(a.r, a.alpha),
        "ginibre": lambda: M.sample_ginibre(a.n, a.seed),
    }
    model = builders[a.kind]()
    if a.h_seed is not None:
        h = np.random.default_rng(a.h_seed).standard_normal((model.n, model.n))
        model = model.with_h(h + h.T)
    _emit(json.dumps(model_to_dict(model)) + "\n", a.out)
    return EXIT_OK


def cmd_witness(a) -> int:
    model = load_model(a.model)
    if a.partition:
        parts = [_parse_partition(a.partition, model.n)]
    else:
        if model.n > pt.BIPARTITION_CAP:
            raise ValueError(f"n={model.n} exceeds the bipartition cap {pt.BIPARTITION_CAP}")
        parts = pt.enumerate_bipartitions(model.n)
    table = pt.witness_table(model, parts)
    k = int(np.argmin([lam for _, lam, _ in table]))
    if a.csv:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["partition", "lambda_min", "entangling"])
        for p, lam, ent in table:
            wr.writerow([p.label(), fmt(lam), fmt(ent)])
        _emit(buf.getvalue(), a.out)
    else:
        best_p, best_lam, best_ent = table[k]
        _emit(_json({
            "n": model.n,
            "best_lambda": best_lam,
            "best_partition": sorted(best_p.A),
            "entangling": best_ent,
            "records": [{"partition": sorted(p.A), "lambda_min": lam, "entangling": ent} for p, lam, ent in table],
        }), a.out)
    return EXIT_OK


def cmd_evolve(a) -> int:
    model = load_model(a.model)
    rho = dynamics.evolve(_parse_state(a.state, model.n), model, a.t).rho
    _emit(_json({"n": model.n, "t": a.t, "state": a.state,
                 "rho_re": rho.real.tolist(), "rho_im": rho.imag.tolist()}), a.out)
    return EXIT_OK


def cmd_negativity(a) -> int:
    model = load_model(a.model)
    part = _parse_partition(a.partition, model.n)
    grid = dynamics.geometric_grid(a.tmin, a.tmax, a.points)
    rows = dynamics.negativity_trace(model, _parse_state(a.state, model.n), part, grid)
    _emit(csv_text(["t", "E_N"], rows), a.csv)
    return EXIT_OK


def cmd_ensemble(a) -> int:
    if a.kind == "fig2":
        cfg = ensembles.ScanConfig(3 if a.n is None else a.n, a.samples, a.seed, bin_width=a.bin_width, threads=a.threads)
        res, bins = ensembles.fig2_scan(cfg)
        _emit(csv_text(["rel_imag_norm", "lambda_min"], zip(res.rel_imag_norm, res.lambda_min)), a.out)
        if a.bins:
            rows = zip(bins.edges[:-1], bins.edges[1:], bins.counts, bins.fraction)
            Path(a.bins).write_text(csv_text(["bin_lo", "bin_hi", "count", "fraction"], rows))
    elif a.kind == "fig3":
        cfg = ensembles.ScanConfig(16 if a.n is None else a.n, a.samples, a.seed, threads=a.threads)
        res = ensembles.fig3_scan(cfg)
        _emit(csv_text(["rank_proxy", "lambda_min"], zip(res.rank_proxy, res.lambda_min)), a.out)
    else:
        rows = ensembles.fraction_vs_n(range(a.nmin, a.nmax + 1), a.samples, a.seed, threads=a.threads)
        _emit(csv_text(["n", "f", "stderr"], rows), a.out)
    return EXIT_OK


def cmd_tomo(a) -> int:
    model = load_model(a.model)
    if a.kind == "predict":
        _emit(_json(tomography.predict_measurements(model).to_dict()), a.out)
        return EXIT_OK
    grid = tomography.default_grid(model, a.points)
    report = tomography.roundtrip(model, a.sigma, grid, a.seed)
    if a.trace_dir:
        out = Path(a.trace_dir)
        out.mkdir(parents=True, exist_ok=True)
        rng = np.random.default_rng(a.seed)
        for i, j in tomography.pairs(model.n):
            for family, st, lab in (("bell", dynamics.bell_state, dynamics.bell_pair_labels),
                                    ("bar", dynamics.bar_state, dynamics.bar_pair_labels)):
                tr = tomography._measure(model, st(i, j, model.n), lab(i, j, model.n), grid, a.sigma, rng)
                tr.to_csv(out / f"{family}_{i}_{j}.csv")
    _emit(_json(report.to_dict()), a.out)
    return EXIT_OK


def cmd_verify(a) -> int:
    model = load_model(a.model)
    if a.kind == "classical":
        tol = 0.02 if a.tol is None else a.tol
        _, dev = verify.classical_mc(model, _parse_state(a.state, model.n), a.t, a.traj, a.seed, threads=a.threads)
        result = {"deviation": dev, "pass": dev <= tol}
    else:
        tol = 1e-12 if a.tol is None else a.tol
        comps = verify.feedforward_model(model)
        dev = max((d for _, d in comps), default=0.0)
        result = {"deviation": dev, "pass": dev <= tol,
                  "components": [{"gamma": g, "deviation": d} for g, d in comps]}
    _emit(_json(result), a.out)
    if not result["pass"]:
        raise ContractFailure(f"deviation {dev:.3g} exceeds {tol:.3g}")
    return EXIT_OK


COMMANDS = {
    "case": cmd_case, "witness": cmd_witness, "evolve": cmd_evolve, "negativity": cmd_negativity,
    "ensemble": cmd_ensemble, "tomo": cmd_tomo, "verify": cmd_verify,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except ContractFailure as exc:
        print(f"qdeph: contract failure: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except (UsageError, ValueError, OSError, np.linalg.LinAlgError) as exc:
        print(f"qdeph: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
