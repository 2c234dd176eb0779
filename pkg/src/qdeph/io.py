"""Model files and CSV output.

Model JSON: {"n": int, "c_re": [[...]], "c_im": [[...]], "h": [[...]]},
row-major, qubits 0..n-1.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .model import DephasingModel, ModelError, make_model


def model_to_dict(model: DephasingModel) -> dict:
    return {
        "n": model.n,
        "c_re": np.real(model.C).tolist(),
        "c_im": np.imag(model.C).tolist(),
        "h": np.asarray(model.h).tolist(),
    }


def model_from_dict(d: dict) -> DephasingModel:
    try:
        n = d["n"]
        C = np.asarray(d["c_re"], dtype=float) + 1j * np.asarray(d.get("c_im", np.zeros_like(d["c_re"])), dtype=float)
        h = np.asarray(d.get("h", np.zeros((n, n))), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"malformed model description: {exc}") from exc
    return make_model(n, C, h)


def save_model(model: DephasingModel, path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model)) + "\n")


def load_model(path) -> DephasingModel:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(d, dict):
        raise ModelError(f"{path}: expected a JSON object")
    return model_from_dict(d)


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def csv_text(header: list[str], rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def write_csv(path, header: list[str], rows) -> None:
    Path(path).write_text(csv_text(header, rows))
