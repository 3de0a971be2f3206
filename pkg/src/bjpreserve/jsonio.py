"""JSON schemas for elements, maps, canonical forms and factorizations.

Element::

    {"shape": [n1, ..., nk], "blocks": [[[[re, im], ...], ...], ...]}

``blocks[i][r][c]`` is the entry in row ``r``, column ``c`` of block ``i``.

Map::

    {"shape": [...], "matrix": [[...], ...]}

a real ``D x D`` matrix on realified coordinates (block-major, row-major,
real part before imaginary part).

Canonical form::

    {"gamma": g, "u": element, "v": element, "pi": [...], "J": [...]}

Semilinear factorization::

    {"shape": [...], "pi": [...], "blocks": [{"P": matrix, "Q": matrix,
     "linear": bool, "transpose": bool}, ...]}

with matrices as nested ``[re, im]`` pairs like element blocks.  Block indices
are zero-based.  Floats are written with 17 significant digits so parsing
returns the identical double.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .core import AlgebraElement, AlgebraShape, as_shape


class SchemaError(ValueError):
    pass


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} cannot be serialized")
    s = format(x, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def _encode(obj, indent: int, level: int) -> str:
    if isinstance(obj, AlgebraElement):
        obj = element_to_json(obj)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return f"[{_fmt_float(obj.real)}, {_fmt_float(obj.imag)}]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(x, indent, level + 1) for x in obj) + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        pad = " " * (indent * (level + 1))
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + " " * (indent * level) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    return _encode(obj, indent, 0) + "\n"


def _cmatrix_to_json(M: np.ndarray):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M, dtype=complex)]


def _cmatrix_from_json(data, n: int, what: str) -> np.ndarray:
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as e:
        raise SchemaError(f"{what}: not a numeric array") from e
    if arr.shape != (n, n, 2):
        raise SchemaError(f"{what}: expected {n}x{n} entries of [re, im], got array of shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def _shape_from_json(data) -> AlgebraShape:
    if not isinstance(data, list) or not all(isinstance(n, int) and not isinstance(n, bool) for n in data):
        raise SchemaError("shape must be a list of positive integers")
    try:
        return AlgebraShape(tuple(data))
    except ValueError as e:
        raise SchemaError(str(e)) from e


def _require(d, keys, what):
    if not isinstance(d, dict):
        raise SchemaError(f"{what}: expected an object")
    missing = [k for k in keys if k not in d]
    extra = [k for k in d if k not in keys]
    if missing or extra:
        raise SchemaError(f"{what}: missing keys {missing}, unknown keys {extra}")


def element_to_json(a: AlgebraElement) -> dict:
    return {"shape": list(a.shape.dims), "blocks": [_cmatrix_to_json(b) for b in a.blocks]}


def element_from_json(d) -> AlgebraElement:
    _require(d, ("shape", "blocks"), "element")
    shape = _shape_from_json(d["shape"])
    blocks = d["blocks"]
    if not isinstance(blocks, list) or len(blocks) != shape.k:
        raise SchemaError(f"element: expected {shape.k} blocks")
    return AlgebraElement(shape, [_cmatrix_from_json(b, n, f"block {i}")
                                  for i, (n, b) in enumerate(zip(shape.dims, blocks))])


def map_to_json(m) -> dict:
    return {"shape": list(m.shape.dims), "matrix": m.matrix.tolist()}


def map_from_json(d):
    from .preservers import RealLinearMap
    _require(d, ("shape", "matrix"), "map")
    shape = _shape_from_json(d["shape"])
    try:
        M = np.array(d["matrix"], dtype=float)
    except (TypeError, ValueError) as e:
        raise SchemaError("map: matrix is not numeric") from e
    if M.shape != (shape.D, shape.D):
        raise SchemaError(f"map: matrix must be {shape.D}x{shape.D}, got {M.shape}")
    return RealLinearMap(shape, M)


def canonical_to_json(c) -> dict:
    return {"gamma": float(c.gamma), "u": element_to_json(c.u), "v": element_to_json(c.v),
            "pi": list(c.pi), "J": sorted(c.J)}


def canonical_from_json(d):
    from .preservers import CanonicalForm
    _require(d, ("gamma", "u", "v", "pi", "J"), "canonical form")
    c = CanonicalForm(float(d["gamma"]), element_from_json(d["u"]), element_from_json(d["v"]),
                      tuple(d["pi"]), frozenset(d["J"]))
    try:
        c.validate(1e-8)
    except ValueError as e:
        raise SchemaError(f"canonical form: {e}") from e
    return c


def factorization_to_json(f) -> dict:
    return {
        "shape": list(f.shape.dims),
        "pi": list(f.pi),
        "blocks": [{"P": _cmatrix_to_json(b.P), "Q": _cmatrix_to_json(b.Q),
                    "linear": bool(b.linear), "transpose": bool(b.transpose)} for b in f.factors],
    }


def factorization_from_json(d):
    from .singularity import BlockFactor, SemilinearFactorization
    _require(d, ("shape", "pi", "blocks"), "factorization")
    shape = _shape_from_json(d["shape"])
    fs = []
    for i, (n, b) in enumerate(zip(shape.dims, d["blocks"])):
        _require(b, ("P", "Q", "linear", "transpose"), f"factor {i}")
        fs.append(BlockFactor(_cmatrix_from_json(b["P"], n, f"P{i}"), _cmatrix_from_json(b["Q"], n, f"Q{i}"),
                              bool(b["linear"]), bool(b["transpose"])))
    try:
        return SemilinearFactorization(shape, tuple(d["pi"]), fs)
    except ValueError as e:
        raise SchemaError(f"factorization: {e}") from e


def load(path):
    with open(path) as fh:
        return json.load(fh)


def as_shape_arg(text: str) -> AlgebraShape:
    """Parse ``"2,3"`` or ``"2x3"`` into a shape."""
    parts = [p.strip() for p in text.replace("x", ",").split(",")]
    if not all(p.isdigit() for p in parts):
        raise ValueError(f"cannot parse shape {text!r}; expected e.g. 2,3 or 2x3")
    return as_shape(tuple(int(p) for p in parts))
