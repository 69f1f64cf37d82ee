"""JSON wire formats and the canonical input digest.

Matrices travel as row-major arrays of rows with each entry a two-element
[re, im] pair; operators as {"dim": d, "terms": [{"sign": +-1, "a": rows,
"b": rows}, ...]} with at most one negative sign, first if present. The
canonical digest is SHA-256 over a canonical rendering (sorted keys,
compact separators, Python's shortest round-trip float formatting) of the
normalized object, so whitespace and default-field differences do not
change it while any value perturbation does.
"""

from __future__ import annotations

import hashlib
import json
import math
from typing import Any

import numpy as np

from .exceptions import InputError
from .posdecomp import DecompositionTrace, SignedLRSum, SignedTerm
from .superop import LRSum, LRTerm

__all__ = [
    "matrix_to_rows",
    "rows_to_matrix",
    "operator_to_obj",
    "obj_to_operator",
    "trace_to_obj",
    "jsonify",
    "canonical_dumps",
    "canonical_digest",
]


def matrix_to_rows(m) -> list:
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


def _entry_to_complex(entry, where: str) -> complex:
    if (
        not isinstance(entry, (list, tuple))
        or len(entry) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
    ):
        raise InputError(f"{where}: entries must be [re, im] number pairs")
    re, im = float(entry[0]), float(entry[1])
    if not (math.isfinite(re) and math.isfinite(im)):
        raise InputError(f"{where}: entries must be finite")
    return complex(re, im)


def rows_to_matrix(rows, dim: int | None = None, where: str = "matrix") -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise InputError(f"{where}: expected a non-empty array of rows")
    n = len(rows)
    if dim is not None and n != dim:
        raise InputError(f"{where}: expected {dim} rows, got {n}")
    out = np.zeros((n, n), dtype=np.complex128)
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise InputError(f"{where}: row {r} must have {n} entries")
        for c, entry in enumerate(row):
            out[r, c] = _entry_to_complex(entry, f"{where}[{r}][{c}]")
    return out


def operator_to_obj(s: LRSum | SignedLRSum) -> dict:
    """Normalized JSON object for an operator; the sign field is always explicit."""
    terms = []
    for t in s.terms:
        sign = t.sign if isinstance(t, SignedTerm) else 1
        terms.append({"sign": sign, "a": matrix_to_rows(t.a), "b": matrix_to_rows(t.b)})
    return {"dim": s.dim, "terms": terms}


def obj_to_operator(obj) -> LRSum | SignedLRSum:
    """Parse an operator object; returns a SignedLRSum iff a negative sign appears."""
    if not isinstance(obj, dict):
        raise InputError("operator: expected a JSON object")
    if "dim" not in obj or "terms" not in obj:
        raise InputError("operator: required fields 'dim' and 'terms'")
    dim = obj["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise InputError(f"operator: dim must be a positive integer, got {dim!r}")
    raw_terms = obj["terms"]
    if not isinstance(raw_terms, list):
        raise InputError("operator: terms must be an array")
    parsed = []
    for i, term in enumerate(raw_terms):
        if not isinstance(term, dict) or "a" not in term or "b" not in term:
            raise InputError(f"operator: term {i} must be an object with 'a' and 'b'")
        sign = term.get("sign", 1)
        if sign not in (1, -1):
            raise InputError(f"operator: term {i} sign must be 1 or -1, got {sign!r}")
        a = rows_to_matrix(term["a"], dim, f"term {i} 'a'")
        b = rows_to_matrix(term["b"], dim, f"term {i} 'b'")
        parsed.append((int(sign), a, b))
    try:
        if any(sign == -1 for sign, _, _ in parsed):
            return SignedLRSum(dim, tuple(SignedTerm(*t) for t in parsed))
        return LRSum(dim, tuple(LRTerm(a, b) for _, a, b in parsed))
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def jsonify(x) -> Any:
    """Recursively convert library values into JSON-ready structures.

    Complex scalars become [re, im]; 1-D arrays become lists of pairs,
    2-D arrays row arrays; NaN becomes null; tuple dict keys become
    comma-joined strings.
    """
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(x)
        return None if math.isnan(v) else v
    if isinstance(x, (complex, np.complexfloating)):
        return [jsonify(x.real), jsonify(x.imag)]
    if isinstance(x, np.ndarray):
        if x.ndim == 1:
            return [jsonify(complex(v)) for v in x]
        if x.ndim == 2:
            return matrix_to_rows(x)
        raise InputError(f"cannot serialize array of ndim {x.ndim}")
    if isinstance(x, dict):
        out = {}
        for k, v in x.items():
            if isinstance(k, tuple):
                k = ",".join(str(p) for p in k)
            out[str(k)] = jsonify(v)
        return out
    if isinstance(x, (list, tuple)):
        return [jsonify(v) for v in x]
    raise InputError(f"cannot serialize value of type {type(x).__name__}")


def trace_to_obj(trace: DecompositionTrace) -> dict:
    return {"steps": [{"name": s.name, "data": jsonify(s.data)} for s in trace.steps]}


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def canonical_digest(obj) -> str:
    """Hex SHA-256 of the canonical rendering of a (normalized) JSON object."""
    return hashlib.sha256(canonical_dumps(obj).encode("utf-8")).hexdigest()
