"""JSON encodings.

Complex numbers are ``[re, im]`` pairs; matrices are dense and row-major:
``{"n": n, "entries": [[[re, im], ...], ...]}``.
"""
import json

import numpy as np

from .clifford import UnitaryTuple, make_tuple


def complex_to_json(z):
    z = complex(z)
    return [z.real, z.imag]


def matrix_to_json(m):
    a = np.asarray(m, dtype=complex)
    return {"n": int(a.shape[0]), "entries": [[complex_to_json(z) for z in row] for row in a]}


def matrix_from_json(obj):
    try:
        rows = obj["entries"]
        a = np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from exc
    n = int(obj.get("n", a.shape[0]))
    if a.ndim != 2 or a.shape != (n, n):
        raise ValueError(f"matrix JSON declares n={n} but entries have shape {a.shape}")
    return a


def vector_to_json(v):
    return [complex_to_json(z) for z in np.ravel(v)]


def vector_from_json(obj):
    return np.array([complex(re, im) for re, im in obj], dtype=complex)


def tuple_to_json(t: UnitaryTuple):
    return {"k": t.k, "unitaries": [matrix_to_json(v) for v in t.unitaries]}


def tuple_from_json(obj, tol=None):
    mats = [matrix_from_json(m) for m in obj["unitaries"]]
    k = int(obj["k"])
    if any(m.shape != (k, k) for m in mats):
        raise ValueError(f"tuple JSON declares k={k} but a unitary has another size")
    return make_tuple(mats) if tol is None else make_tuple(mats, tol)


def decomposition_to_json(dec):
    return {"terms": [{"weight": float(w), "matrix": matrix_to_json(x.entries)} for w, x in dec.terms]}


def dumps(obj, pretty=False):
    """Deterministic JSON text (sorted keys, fixed separators)."""
    if pretty:
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
