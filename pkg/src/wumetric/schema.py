"""JSON descriptions of seminorms, homogeneous functions and fields.

Complex numbers are ``[re, im]`` pairs (a bare real number is also accepted).
Seminorms::

    {"kind": "euclidean", "scale": 1.0, "dim": 2}
    {"kind": "max_abs", "covectors": [[[2, 0], [0, 0]]]}
    {"kind": "hermitian", "matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}
    {"kind": "max", "parts": [...]}
    {"kind": "product", "h1": {...}, "h2": {...}}

Homogeneous (possibly non-convex) functions for the Busemann step add
``{"kind": "min", "parts": [...]}``. Fields::

    {"kind": "field", "descriptor": "ex1", "epsilon": 0.5}
    {"kind": "field", "descriptor": "ex3", "c": 0.3, "R": 8}
    {"kind": "field", "descriptor": "remark", "k": 2, "rank_along": 1}
    {"kind": "field", "descriptor": "ball", "n": 2, "radius": 1}
    {"kind": "field", "descriptor": "geps", "epsilon": 0.5}
    {"kind": "field", "descriptor": "polydisc", "n": 2}
"""

from __future__ import annotations

import numpy as np

from .busemann import HomogeneousFunction
from .errors import DimensionError, InvariantError
from .fields import Ball, Ex1Field, Ex3Synthetic, GEps, Polydisc, RemarkField, model_field, MetricField
from .hermitian import HermitianForm
from .seminorm import (
    HermitianQ,
    MaxAbsFunctionals,
    MaxCombination,
    ProductMax,
    ScaledEuclidean,
    Seminorm,
)


class SchemaError(ValueError):
    """The input does not match the description schema."""


def parse_complex(v) -> complex:
    if isinstance(v, bool):
        raise SchemaError(f"not a number: {v!r}")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        return complex(v[0], v[1])
    raise SchemaError(f"complex numbers are [re, im] pairs, got {v!r}")


def parse_vector(v) -> np.ndarray:
    if not isinstance(v, list) or not v:
        raise SchemaError(f"vectors are non-empty lists, got {v!r}")
    return np.array([parse_complex(x) for x in v], dtype=complex)


def parse_matrix(rows) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise SchemaError("matrices are non-empty lists of rows")
    vecs = [parse_vector(r) for r in rows]
    if len({len(r) for r in vecs}) != 1:
        raise SchemaError("matrix rows have different lengths")
    return np.array(vecs)


def dump_complex(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def dump_vector(v) -> list:
    return [dump_complex(z) for z in np.asarray(v).ravel()]


def dump_matrix(a) -> list:
    return [dump_vector(r) for r in np.atleast_2d(a)]


def _need(obj: dict, key: str):
    if key not in obj:
        raise SchemaError(f"{obj.get('kind', 'object')!s} description needs {key!r}")
    return obj[key]


def _number(obj: dict, key: str, default=None) -> float:
    v = obj.get(key, default)
    if v is None:
        raise SchemaError(f"missing {key!r}")
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError(f"{key!r} must be a number")
    return float(v)


def _int(obj: dict, key: str, default=None) -> int:
    v = obj.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"{key!r} must be an integer")
    return v


def parse_seminorm(obj) -> Seminorm:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaError("a seminorm description is an object with a 'kind'")
    kind = obj["kind"]
    if kind == "euclidean":
        return ScaledEuclidean(_number(obj, "scale", 1.0), _int(obj, "dim"))
    if kind == "max_abs":
        return MaxAbsFunctionals(parse_matrix(_need(obj, "covectors")))
    if kind == "hermitian":
        try:
            form = HermitianForm(parse_matrix(_need(obj, "matrix")))
        except (InvariantError, DimensionError) as exc:
            raise SchemaError(f"hermitian matrix: {exc}") from None
        return HermitianQ(form)
    if kind == "max":
        parts = _need(obj, "parts")
        if not isinstance(parts, list) or not parts:
            raise SchemaError("'parts' must be a non-empty list")
        return MaxCombination(tuple(parse_seminorm(p) for p in parts))
    if kind == "product":
        return ProductMax(parse_seminorm(_need(obj, "h1")), parse_seminorm(_need(obj, "h2")))
    raise SchemaError(f"unknown seminorm kind {kind!r}")


def parse_function(obj) -> HomogeneousFunction | Seminorm:
    """A seminorm, or ``min`` of seminorms (absolutely homogeneous, not convex)."""
    if isinstance(obj, dict) and obj.get("kind") == "min":
        parts = [parse_function(p) for p in _need(obj, "parts")]
        dims = {p.dim for p in parts}
        if len(dims) != 1:
            raise SchemaError("parts of a min live on different spaces")
        return HomogeneousFunction(
            None, dims.pop(),
            batch_evaluator=lambda X: np.min(np.stack([p.eval_many(X) for p in parts]), axis=0))
    return parse_seminorm(obj)


def dump_seminorm(h: Seminorm) -> dict:
    if isinstance(h, ScaledEuclidean):
        return {"kind": "euclidean", "scale": float(h.scale), "dim": int(h.dim)}
    if isinstance(h, MaxAbsFunctionals):
        return {"kind": "max_abs", "covectors": dump_matrix(h.covectors)}
    if isinstance(h, HermitianQ):
        return {"kind": "hermitian", "matrix": dump_matrix(h.matrix)}
    if isinstance(h, MaxCombination):
        return {"kind": "max", "parts": [dump_seminorm(p) for p in h.parts]}
    if isinstance(h, ProductMax):
        return {"kind": "product", "h1": dump_seminorm(h.h1), "h2": dump_seminorm(h.h2)}
    raise SchemaError(f"{type(h).__name__} has no JSON form")


def parse_descriptor(obj):
    if not isinstance(obj, dict) or obj.get("kind") != "field":
        raise SchemaError("a field description is an object with kind 'field'")
    d = obj.get("descriptor")
    if d == "ex1":
        return Ex1Field(_number(obj, "epsilon"), bool(obj.get("control", False)))
    if d == "ex3":
        return Ex3Synthetic(_number(obj, "c"), _number(obj, "R"), _number(obj, "delta", 1e-2),
                            parse_complex(obj.get("z2", 0.0)))
    if d == "remark":
        return RemarkField(_int(obj, "k", 2), _int(obj, "rank_along", 1))
    if d == "ball":
        return Ball(_int(obj, "n"), _number(obj, "radius", 1.0))
    if d == "geps":
        return GEps(_number(obj, "epsilon"))
    if d == "polydisc":
        return Polydisc(_int(obj, "n"))
    raise SchemaError(f"unknown field descriptor {d!r}")


def parse_field(obj) -> MetricField:
    return model_field(parse_descriptor(obj))


def dump_descriptor(desc) -> dict:
    if isinstance(desc, Ex1Field):
        return {"kind": "field", "descriptor": "ex1", "epsilon": desc.eps, "control": desc.control}
    if isinstance(desc, Ex3Synthetic):
        return {"kind": "field", "descriptor": "ex3", "c": desc.c, "R": desc.R, "delta": desc.delta,
                "z2": dump_complex(desc.z2)}
    if isinstance(desc, RemarkField):
        return {"kind": "field", "descriptor": "remark", "k": desc.k, "rank_along": desc.rank_along}
    if isinstance(desc, Ball):
        return {"kind": "field", "descriptor": "ball", "n": desc.n, "radius": desc.radius}
    if isinstance(desc, GEps):
        return {"kind": "field", "descriptor": "geps", "epsilon": desc.eps}
    if isinstance(desc, Polydisc):
        return {"kind": "field", "descriptor": "polydisc", "n": desc.n}
    raise SchemaError(f"unknown descriptor {desc!r}")
