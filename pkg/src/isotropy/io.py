"""
JSON documents for specs, matrices, parameters and reports.

Complex scalars are ``[re, im]`` pairs and matrices nested row-major lists
of such pairs.  Eigenvalue classes are tagged objects::

    {"class": "positive_real", "lambda": 1.0}
    {"class": "zero"}
    {"class": "negative_real", "mu": 0.8}
    {"class": "nonreal", "xi": [1.0, 1.0]}      # or "rho": [re, im]

A spec document is ``{"eigen": ..., "alpha": [...], "mu": [...], "eps": [[...], ...]}``
with ``eps`` optional.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .canonical import (NEGATIVE_REAL, NONREAL, POSITIVE_REAL, ZERO,
                        CanonicalSpec, EigenClass)
from .congruence import VW, CongruenceProblem, FreeParameters
from .toeplitz import FLAVORS

__all__ = [
    "InvalidDocument", "complex_to_json", "complex_from_json", "matrix_to_json",
    "matrix_from_json", "eigen_to_json", "eigen_from_json", "spec_to_json",
    "spec_from_json", "params_to_json", "params_from_json", "problem_from_json",
    "ProblemFile", "load_problem_file", "dumps", "load_json",
]


class InvalidDocument(ValueError):
    """A document does not follow the expected layout."""


def complex_to_json(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def complex_from_json(v) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        return complex(v[0], v[1])
    raise InvalidDocument(f"expected a number or [re, im], got {v!r}")


def matrix_to_json(a) -> list:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError("expected a 2-d array")
    return [[complex_to_json(x) for x in row] for row in a]


def matrix_from_json(v) -> np.ndarray:
    if not isinstance(v, list) or not v or not all(isinstance(row, list) for row in v):
        raise InvalidDocument("a matrix must be a nonempty list of rows")
    width = len(v[0])
    if width == 0 or any(len(row) != width for row in v):
        raise InvalidDocument("matrix rows must be nonempty and of equal length")
    return np.array([[complex_from_json(x) for x in row] for row in v], dtype=complex)


def eigen_to_json(e: EigenClass) -> dict:
    if e.kind == POSITIVE_REAL:
        return {"class": e.kind, "lambda": float(complex(e.value).real)}
    if e.kind == ZERO:
        return {"class": e.kind}
    if e.kind == NEGATIVE_REAL:
        return {"class": e.kind, "mu": float(complex(e.value).real)}
    return {"class": e.kind, "xi": complex_to_json(e.value)}


def _real(d: dict, key: str) -> float:
    if key not in d:
        raise InvalidDocument(f"missing field {key!r}")
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InvalidDocument(f"field {key!r} must be a real number")
    return float(v)


def eigen_from_json(d) -> EigenClass:
    if not isinstance(d, dict) or "class" not in d:
        raise InvalidDocument("eigen must be an object with a 'class' tag")
    kind = d["class"]
    try:
        if kind == POSITIVE_REAL:
            return EigenClass.positive_real(_real(d, "lambda"))
        if kind == ZERO:
            return EigenClass.zero()
        if kind == NEGATIVE_REAL:
            return EigenClass.negative_real(_real(d, "mu"))
        if kind == NONREAL:
            if ("xi" in d) == ("rho" in d):
                raise InvalidDocument("nonreal needs exactly one of 'xi' and 'rho'")
            if "xi" in d:
                return EigenClass.nonreal(xi=complex_from_json(d["xi"]))
            return EigenClass.nonreal(rho=complex_from_json(d["rho"]))
    except InvalidDocument:
        raise
    except ValueError as exc:
        raise InvalidDocument(str(exc)) from exc
    raise InvalidDocument(f"unknown eigenvalue class {kind!r}")


def _int_list(d: dict, key: str) -> list[int]:
    v = d.get(key)
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise InvalidDocument(f"field {key!r} must be a list of integers")
    return v


def spec_to_json(spec: CanonicalSpec) -> dict:
    out = {"eigen": eigen_to_json(spec.eigen), "alpha": list(spec.alpha),
           "mu": list(spec.mu)}
    if spec.eps is not None:
        out["eps"] = [list(row) for row in spec.eps]
    return out


def spec_from_json(d) -> CanonicalSpec:
    if not isinstance(d, dict):
        raise InvalidDocument("spec must be an object")
    eigen = eigen_from_json(d.get("eigen"))
    alpha = _int_list(d, "alpha")
    mu = _int_list(d, "mu")
    eps = d.get("eps")
    if eps is not None and not (isinstance(eps, list) and all(isinstance(r, list) for r in eps)):
        raise InvalidDocument("eps must be a list of lists")
    try:
        return CanonicalSpec(eigen, tuple(alpha), tuple(mu),
                             None if eps is None else tuple(tuple(r) for r in eps))
    except (TypeError, ValueError) as exc:
        raise InvalidDocument(str(exc)) from exc


def _key(k) -> str:
    return ",".join(str(i) for i in k) if isinstance(k, tuple) else str(k)


def _parse_key(s: str, n: int):
    try:
        parts = tuple(int(x) for x in s.split(","))
    except ValueError:
        raise InvalidDocument(f"bad key {s!r}") from None
    if len(parts) != n:
        raise InvalidDocument(f"key {s!r} needs {n} indices")
    return parts[0] if n == 1 else parts


def params_to_json(params: FreeParameters) -> dict:
    return {
        "a0": {_key(k): matrix_to_json(v) for k, v in sorted(params.a0.items())},
        "sub": {_key(k): [matrix_to_json(c) for c in v] for k, v in sorted(params.sub.items())},
        "z": {_key(k): matrix_to_json(v) for k, v in sorted(params.z.items())},
    }


def params_from_json(d) -> FreeParameters | np.ndarray:
    """Explicit parameters, or the coordinate vector of a ``{"theta": [...]}`` document."""
    if not isinstance(d, dict):
        raise InvalidDocument("params must be an object")
    if "theta" in d:
        theta = d["theta"]
        if not isinstance(theta, list) or not all(
                isinstance(x, (int, float)) and not isinstance(x, bool) for x in theta):
            raise InvalidDocument("theta must be a list of real numbers")
        return np.asarray(theta, dtype=float)
    p = FreeParameters()
    for k, v in d.get("a0", {}).items():
        p.a0[_parse_key(k, 1)] = matrix_from_json(v)
    for k, v in d.get("sub", {}).items():
        if not isinstance(v, list):
            raise InvalidDocument("sub entries must be lists of matrices")
        p.sub[_parse_key(k, 2)] = [matrix_from_json(c) for c in v]
    for k, v in d.get("z", {}).items():
        p.z[_parse_key(k, 2)] = matrix_from_json(v)
    return p


def problem_from_json(d) -> CongruenceProblem:
    """``{"alpha", "mu", "flavor", "B": [[coeff, ...], ...], "C": ..., "real", "vw_mu"}``."""
    if not isinstance(d, dict):
        raise InvalidDocument("problem must be an object")
    alpha = _int_list(d, "alpha")
    mu = _int_list(d, "mu")
    flavor = d.get("flavor", "plain")
    if flavor not in FLAVORS + (VW,):
        raise InvalidDocument(f"unknown flavor {flavor!r}")

    def coeffs(key):
        v = d.get(key)
        if not isinstance(v, list) or not all(isinstance(r, list) for r in v):
            raise InvalidDocument(f"{key} must be a list of coefficient lists")
        return [[matrix_from_json(c) for c in row] for row in v]

    try:
        return CongruenceProblem(tuple(alpha), tuple(mu), coeffs("B"), coeffs("C"), flavor,
                                 real=bool(d.get("real", False)),
                                 vw_mu=d.get("vw_mu"))
    except (TypeError, ValueError) as exc:
        raise InvalidDocument(str(exc)) from exc


@dataclass
class ProblemFile:
    """Contents of a problem document.

    Exactly one of `spec` and `problem` is set.  `seed` and `params` are
    mutually exclusive; `generators` lists requests such as
    ``{"type": "corner", "p": 0, "t": 1, "k": 0, "F": [[...]]}``.
    """
    spec: CanonicalSpec | None = None
    problem: CongruenceProblem | None = None
    seed: int | None = None
    params: Any = None
    generators: list = field(default_factory=list)


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidDocument(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidDocument(f"{path}: {exc}") from exc


_GEN_TYPES = ("asZ", "asZ2", "corner", "corner-alt")


def load_problem_file(doc) -> ProblemFile:
    """Validate a problem document.  A bare spec object is accepted too."""
    if not isinstance(doc, dict):
        raise InvalidDocument("problem file must be an object")
    if "eigen" in doc:
        doc = {"spec": doc}
    if ("spec" in doc) == ("problem" in doc):
        raise InvalidDocument("give exactly one of 'spec' and 'problem'")
    out = ProblemFile()
    if "spec" in doc:
        out.spec = spec_from_json(doc["spec"])
    else:
        out.problem = problem_from_json(doc["problem"])
    if "seed" in doc and "params" in doc:
        raise InvalidDocument("'seed' and 'params' are mutually exclusive")
    if "seed" in doc:
        seed = doc["seed"]
        if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2 ** 64:
            raise InvalidDocument("seed must be an unsigned 64-bit integer")
        out.seed = seed
    if "params" in doc:
        out.params = params_from_json(doc["params"])
    gens = doc.get("generators", [])
    if not isinstance(gens, list):
        raise InvalidDocument("generators must be a list")
    for g in gens:
        if not isinstance(g, dict) or g.get("type") not in _GEN_TYPES:
            raise InvalidDocument(f"generator requests need a type in {_GEN_TYPES}")
        if g["type"].startswith("corner"):
            for k in ("p", "t", "k"):
                if isinstance(g.get(k), bool) or not isinstance(g.get(k), int):
                    raise InvalidDocument(f"corner request needs integer {k!r}")
            g = dict(g, F=matrix_from_json(g.get("F")))
        else:
            z = g.get("Z", {})
            if not isinstance(z, dict):
                raise InvalidDocument("Z must map 'r,n' keys to matrices")
            g = dict(g, Z={_parse_key(k, 2): matrix_from_json(v) for k, v in z.items()})
        out.generators.append(g)
    return out


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return matrix_to_json(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def dumps(obj) -> str:
    """Deterministic JSON text with sorted keys and a trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, default=_default) + "\n"
