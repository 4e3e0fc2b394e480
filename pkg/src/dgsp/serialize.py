"""File formats: spectral JSON, kernel JSON, tensor JSON, report JSON/CSV,
and the one-value-per-line signal CSV.

All writers are deterministic: same inputs give byte-identical files.
Floats are serialized with Python's shortest round-trip representation.
"""
from __future__ import annotations

import json

import numpy as np

from .errors import ParseError
from .multifactor import FactorChain
from .perturb import PerturbationReport
from .spectrum import SpectralBasis

__all__ = [
    "spectral_matrix_to_dict",
    "spectral_matrix_from_dict",
    "write_spectral_matrix",
    "read_spectral_matrix",
    "write_kernel",
    "read_kernel",
    "tensor_to_dict",
    "write_tensor",
    "report_to_dict",
    "write_report_json",
    "write_report_csv",
    "load_signal",
    "save_signal",
]


def _c2d(z: complex) -> dict:
    return {"re": float(np.real(z)), "im": float(np.imag(z))}


def _d2c(d: dict) -> complex:
    return complex(d["re"], d["im"])


def _complex_grid(a: np.ndarray) -> list:
    return [[_c2d(z) for z in row] for row in np.asarray(a, dtype=complex)]


def _grid_complex(rows: list) -> np.ndarray:
    return np.array([[_d2c(d) for d in row] for row in rows], dtype=complex)


def spectral_matrix_to_dict(basis: SpectralBasis, a: np.ndarray) -> dict:
    """Schema: {"n", "lambda_p", "lambda_u", "coeffs"} with coeffs[i][j]
    indexed (scaling mode i, rotation mode j)."""
    return {
        "n": int(basis.n),
        "lambda_p": [float(x) for x in basis.lambda2],
        "lambda_u": [_c2d(z) for z in basis.lambda1],
        "coeffs": _complex_grid(a),
    }


def spectral_matrix_from_dict(doc: dict):
    """Returns (n, lambda_p, lambda_u, coeffs)."""
    try:
        n = int(doc["n"])
        lam_p = np.array([float(x) for x in doc["lambda_p"]])
        lam_u = np.array([_d2c(d) for d in doc["lambda_u"]], dtype=complex)
        coeffs = _grid_complex(doc["coeffs"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad spectral matrix document: {exc}") from exc
    if coeffs.shape != (n, n) or lam_p.shape != (n,) or lam_u.shape != (n,):
        raise ParseError("spectral matrix document has inconsistent sizes")
    return n, lam_p, lam_u, coeffs


def write_spectral_matrix(path, basis: SpectralBasis, a: np.ndarray) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        json.dump(spectral_matrix_to_dict(basis, a), fh, indent=1)
        fh.write("\n")


def read_spectral_matrix(path):
    with open(path, "r", encoding="ascii") as fh:
        return spectral_matrix_from_dict(json.load(fh))


def write_kernel(path, h: np.ndarray) -> None:
    h = np.asarray(h, dtype=complex)
    doc = {"n": int(h.shape[0]), "entries": _complex_grid(h)}
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def read_kernel(path) -> np.ndarray:
    with open(path, "r", encoding="ascii") as fh:
        doc = json.load(fh)
    try:
        entries = _grid_complex(doc["entries"])
        n = int(doc["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad kernel document: {exc}") from exc
    if entries.shape != (n, n):
        raise ParseError("kernel document has inconsistent sizes")
    return entries


def tensor_to_dict(chain: FactorChain, t: np.ndarray) -> dict:
    """Tensor coefficients with explicit axis order, axis j1 outermost."""
    t = np.asarray(t, dtype=complex)
    k = t.ndim

    def nest(arr):
        if arr.ndim == 1:
            return [_c2d(z) for z in arr]
        return [nest(sub) for sub in arr]

    return {
        "n": int(chain.n),
        "k": int(k),
        "axis_order": [f"j{i + 1}" for i in range(k)],
        "entries": nest(t),
    }


def write_tensor(path, chain: FactorChain, t: np.ndarray) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        json.dump(tensor_to_dict(chain, t), fh, indent=1)
        fh.write("\n")


def report_to_dict(report: PerturbationReport) -> dict:
    return {
        "scales": [float(t) for t in report.scales],
        "transform_distances": [float(d) for d in report.transform_distances],
        "filter_ks": [int(k) for k in report.filter_ks],
        "filter_distances": {
            str(k): [float(d) for d in report.filter_distances[k]] for k in report.filter_ks
        },
        "fitted_slope": None if np.isnan(report.fitted_slope) else float(report.fitted_slope),
        "fitted_c": float(report.fitted_c),
        "epsilon_hat": float(report.epsilon_hat),
        "y_filter": float(report.y_filter),
        "bound_transform": [float(b) for b in report.bound_transform],
        "bound_filters": {
            str(k): [float(b) for b in report.bound_filters[k]] for k in report.filter_ks
        },
        "valid_scales": [bool(v) for v in report.valid_mask],
    }


def write_report_json(path, report: PerturbationReport) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        json.dump(report_to_dict(report), fh, indent=1)
        fh.write("\n")


def write_report_csv(path, report: PerturbationReport) -> None:
    ks = report.filter_ks
    header = ["scale", "valid", "transform_distance", "bound_transform"]
    for k in ks:
        header += [f"filter_distance_k{k}", f"bound_filter_k{k}"]
    lines = [",".join(header)]
    for i, t in enumerate(report.scales):
        row = [
            f"{t:.17g}",
            "1" if report.valid_mask[i] else "0",
            f"{report.transform_distances[i]:.17g}",
            f"{report.bound_transform[i]:.17g}",
        ]
        for k in ks:
            row += [
                f"{report.filter_distances[k][i]:.17g}",
                f"{report.bound_filters[k][i]:.17g}",
            ]
        lines.append(",".join(row))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def save_signal(path, values) -> None:
    values = np.asarray(values, dtype=float)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(f"{v:.17g}" for v in values) + "\n")


def load_signal(path) -> np.ndarray:
    values = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError as exc:
                raise ParseError(f"line {lineno}: not a number: {line!r}") from exc
    if not values:
        raise ParseError("signal file is empty")
    return np.array(values)
