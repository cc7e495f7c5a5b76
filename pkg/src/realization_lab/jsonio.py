"""JSON encoding of complex scalars and matrices as ``[re, im]`` pairs."""

from __future__ import annotations

import math
from numbers import Number

import numpy as np

from .errors import DimensionError


def complex_from_json(x) -> complex:
    """Decode ``[re, im]`` (or a bare real number) into a complex."""
    if isinstance(x, bool):
        raise DimensionError(f"expected a number or [re, im] pair, got {x!r}")
    if isinstance(x, Number):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(
            isinstance(v, Number) and not isinstance(v, bool) for v in x):
        return complex(float(x[0]), float(x[1]))
    raise DimensionError(f"expected a number or [re, im] pair, got {x!r}")


def complex_to_json(z) -> list:
    z = complex(z)
    # -0.0 would make reports depend on sign-of-zero noise
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def matrix_from_json(data, name: str = "matrix") -> np.ndarray:
    """Decode a list of rows whose entries are ``[re, im]`` pairs or reals."""
    if not isinstance(data, list) or not data:
        raise DimensionError(f"{name} must be a non-empty list of rows")
    rows = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or not row:
            raise DimensionError(f"{name} row {i} must be a non-empty list")
        rows.append([complex_from_json(x) for x in row])
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DimensionError(f"{name} rows have unequal lengths")
    a = np.array(rows, dtype=complex)
    if not np.all(np.isfinite(a)):
        raise DimensionError(f"{name} has non-finite entries")
    return a


def matrix_to_json(M) -> list:
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    return [[complex_to_json(z) for z in row] for row in M]


def to_jsonable(obj):
    """Recursively convert numpy/complex values into JSON-ready structures."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if obj.ndim == 2:
            return matrix_to_json(obj)
        if np.iscomplexobj(obj):
            return [complex_to_json(z) for z in obj.ravel()]
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if math.isnan(f):
            return None
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f + 0.0
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_to_json(obj)
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")
