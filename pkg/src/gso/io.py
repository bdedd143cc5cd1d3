"""JSON schemas for states, channels, models and passive operations.

Every matrix is ``2N x 2N`` in interleaved ordering (Q1, P1, ..., QN, PN) and
stored row-major as a list of lists next to an ``n_modes`` field::

    state            {"n_modes": N, "matrix": [[...]]}
    passive          {"n_modes": N, "matrix": [[...]]}
    channel          {"n_modes": N, "X": [[...]], "Y": [[...]]}
    general channel  {"n_modes": N, "A": [[...]], "B": [[...]], "C": [[...]]}
    Lindblad model   {"n_modes": N, "H": [[...]], "nu": nu}
"""

import json

import numpy as np

from .channel import GaussianChannel
from .dynamics import LindbladModel
from .general import GeneralGaussianChannel


class SchemaError(ValueError):
    """A document does not match the expected schema."""


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: malformed JSON ({exc})") from exc


def _n(doc):
    n = doc.get("n_modes")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SchemaError(f"n_modes must be a positive integer, got {n!r}")
    return n


def _matrix(doc, key, n):
    if key not in doc:
        raise SchemaError(f"missing field {key!r}")
    try:
        M = np.array(doc[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"field {key!r} is not a numeric matrix") from exc
    if M.shape != (2 * n, 2 * n):
        raise SchemaError(f"field {key!r} has shape {M.shape}, expected {(2 * n, 2 * n)}")
    if not np.all(np.isfinite(M)):
        raise SchemaError(f"field {key!r} has non-finite entries")
    return M


def detect_kind(doc):
    """Which schema a parsed document follows."""
    if not isinstance(doc, dict):
        raise SchemaError("top-level JSON value must be an object")
    keys = set(doc)
    if {"X", "Y"} <= keys:
        return "channel"
    if {"A", "B", "C"} <= keys:
        return "general_channel"
    if {"H", "nu"} <= keys:
        return "model"
    if "matrix" in keys:
        return "state"
    raise SchemaError(f"unrecognised document with fields {sorted(keys)}")


def parse_matrix_doc(doc):
    return _matrix(doc, "matrix", _n(doc))


def parse_channel_matrices(doc):
    """Raw ``(X, Y)`` without symmetrizing, for diagnosing invalid files."""
    n = _n(doc)
    return _matrix(doc, "X", n), _matrix(doc, "Y", n)


def parse_channel(doc):
    X, Y = parse_channel_matrices(doc)
    try:
        return GaussianChannel(X, Y)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def parse_general(doc):
    n = _n(doc)
    return GeneralGaussianChannel(*(_matrix(doc, k, n) for k in "ABC"))


def parse_model(doc):
    n = _n(doc)
    nu = doc.get("nu")
    if not isinstance(nu, (int, float)) or isinstance(nu, bool):
        raise SchemaError(f"nu must be a number, got {nu!r}")
    try:
        return LindbladModel(_matrix(doc, "H", n), nu)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def rows(M):
    """Nested lists for JSON; ``+ 0.0`` turns negative zeros into zeros."""
    return (np.asarray(M, dtype=float) + 0.0).tolist()


def matrix_doc(M):
    M = np.asarray(M, dtype=float)
    return {"n_modes": M.shape[0] // 2, "matrix": rows(M)}


def channel_doc(ch):
    return {"n_modes": ch.n_modes, "X": rows(ch.X), "Y": rows(ch.Y)}


def general_doc(ch):
    return {"n_modes": ch.n_modes, "A": rows(ch.A), "B": rows(ch.B), "C": rows(ch.C)}


def model_doc(model):
    return {"n_modes": model.n_modes, "H": rows(model.H), "nu": model.nu}


def dumps(doc):
    return json.dumps(doc, indent=2) + "\n"
