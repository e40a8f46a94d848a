"""
Command line interface.

Subcommands ``dim``, ``canonical``, ``generate``, ``verify`` and ``oracle``
read a JSON problem document (see :mod:`isotropy.io`) and print a JSON
report.  Exit codes: 0 success, 1 verification failure or unsolvable
problem, 2 invalid input.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .canonical import CanonicalSpec, canonical_form, transform_kit
from .congruence import FreeParameters, Unsolvable
from .generators import gen_asZ, gen_asZ2, gen_corner, gen_corner_alt
from .isotropy import (IsotropyElement, assemble_Q, coordinate_weights, derive_problem,
                       dimension, parameters_from_vector, random_parameters, solve)
from .toeplitz import ALTERNATING
from .verify import ORACLE_RTOL, tangent_dimension, verify_element

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2
DEFAULT_TOL = 1e-8


class _Invalid(Exception):
    pass


def _load(args) -> io.ProblemFile:
    pf = io.load_problem_file(io.load_json(args.spec))
    if getattr(args, "params", None):
        if args.seed is not None or pf.seed is not None:
            raise _Invalid("--params cannot be combined with a seed")
        pf.params = io.params_from_json(io.load_json(args.params))
    if getattr(args, "seed", None) is not None:
        if pf.params is not None:
            raise _Invalid("--seed cannot be combined with explicit parameters")
        pf.seed = args.seed
    return pf


def _need_spec(pf: io.ProblemFile) -> CanonicalSpec:
    if pf.spec is None:
        raise _Invalid("this command needs a 'spec' document")
    return pf.spec


def _element_doc(H: np.ndarray, el: IsotropyElement, source: str, tol: float) -> dict:
    return {
        "source": source,
        "Q": io.matrix_to_json(el.Q),
        "residuals": {"orth": el.residual_orth, "consim": el.residual_consim,
                      "cong": el.residual_cong},
        "pass": bool(el.passes(H, tol)),
    }


def _resolve_params(problem, params):
    if isinstance(params, FreeParameters):
        return params
    return parameters_from_vector(problem, params)


def cmd_dim(args) -> tuple[dict, int]:
    spec = _need_spec(_load(args))
    return {"spec": io.spec_to_json(spec), "dimension": dimension(spec)}, EXIT_OK


def cmd_canonical(args) -> tuple[dict, int]:
    spec = _need_spec(_load(args))
    H = canonical_form(spec)
    return {"spec": io.spec_to_json(spec), "size": H.shape[0],
            "matrix": io.matrix_to_json(H)}, EXIT_OK


def _generate_problem(pf: io.ProblemFile, count: int, tol: float) -> tuple[dict, int]:
    problem = pf.problem
    rng = np.random.default_rng(pf.seed if pf.seed is not None else 0)
    families = []
    try:
        if pf.params is not None:
            runs = [_resolve_params(problem, pf.params)]
        else:
            runs = [random_parameters(problem, rng)[0] for _ in range(count)]
        for params in runs:
            fam = solve(problem, params)
            res = problem.residual(fam)
            bound = tol * (1 + np.linalg.norm(problem.calC()))
            families.append({"X": io.matrix_to_json(fam.assemble()), "residual": res,
                             "pass": bool(res <= bound)})
    except Unsolvable as exc:
        return {"error": "unsolvable", "detail": str(exc)}, EXIT_FAIL
    ok = all(f["pass"] for f in families)
    return {"families": families, "pass": ok}, EXIT_OK if ok else EXIT_FAIL


def _request_family(spec: CanonicalSpec, problem, req: dict):
    B0 = [problem.B[r][0] for r in range(problem.N)]
    alt = problem.flavor == ALTERNATING
    kind = req["type"]
    if problem.flavor not in ("plain", ALTERNATING):
        raise _Invalid("explicit generator requests need a positive_real, zero or nonreal spec")
    if kind in ("asZ", "asZ2"):
        if (kind == "asZ2") != alt:
            raise _Invalid(f"{kind} does not match the eigenvalue class")
        return (gen_asZ2 if alt else gen_asZ)(problem.alpha, B0, req["Z"])
    if (kind == "corner-alt") != alt:
        raise _Invalid(f"{kind} does not match the eigenvalue class")
    g = gen_corner_alt if alt else gen_corner
    return g(problem.alpha, B0, req["p"], req["t"], req["k"], req["F"])


def cmd_generate(args) -> tuple[dict, int]:
    pf = _load(args)
    tol = args.tol if args.tol is not None else DEFAULT_TOL
    if args.count < 0:
        raise _Invalid("--count must be nonnegative")
    if pf.spec is None:
        out, code = _generate_problem(pf, args.count, tol)
        out["seed"] = None if pf.params is not None else (pf.seed or 0)
        return out, code
    spec = pf.spec
    problem = derive_problem(spec)
    kit = transform_kit(spec)
    H = canonical_form(spec)
    seed = pf.seed if pf.seed is not None else 0
    rng = np.random.default_rng(seed)
    elements = []
    if pf.params is not None:
        el = assemble_Q(spec, solve(problem, _resolve_params(problem, pf.params)), kit, problem)
        elements.append(_element_doc(H, el, "params", tol))
    elif args.count:
        weights = coordinate_weights(spec, problem, kit)
        for _ in range(args.count):
            params, theta = random_parameters(problem, rng, weights=weights)
            el = assemble_Q(spec, solve(problem, params), kit, problem)
            doc = _element_doc(H, el, "random", tol)
            doc["theta"] = [float(x) for x in theta]
            elements.append(doc)
    for req in pf.generators:
        el = assemble_Q(spec, _request_family(spec, problem, req), kit, problem)
        elements.append(_element_doc(H, el, req["type"], tol))
    ok = all(e["pass"] for e in elements)
    return ({"spec": io.spec_to_json(spec), "seed": None if pf.params is not None else seed,
             "elements": elements, "pass": ok}, EXIT_OK if ok else EXIT_FAIL)


def _matrices(doc) -> list[np.ndarray]:
    if isinstance(doc, dict) and "elements" in doc:
        return [io.matrix_from_json(e.get("Q")) for e in doc["elements"]]
    if isinstance(doc, dict) and "Q" in doc:
        return [io.matrix_from_json(doc["Q"])]
    if isinstance(doc, dict) and "matrix" in doc:
        return [io.matrix_from_json(doc["matrix"])]
    return [io.matrix_from_json(doc)]


def cmd_verify(args) -> tuple[dict, int]:
    spec = _need_spec(_load(args))
    mats = _matrices(io.load_json(args.matrix))
    n = spec.size
    for Q in mats:
        if Q.shape != (n, n):
            raise _Invalid(f"matrix has shape {Q.shape}, expected {(n, n)}")
    tol = args.tol if args.tol is not None else DEFAULT_TOL
    reports = [verify_element(spec, Q, tol).to_dict() for Q in mats]
    ok = all(r["pass"] for r in reports)
    return {"spec": io.spec_to_json(spec), "reports": reports, "pass": ok}, \
        EXIT_OK if ok else EXIT_FAIL


def cmd_oracle(args) -> tuple[dict, int]:
    spec = _need_spec(_load(args))
    rtol = args.tol if args.tol is not None else ORACLE_RTOL
    oracle = tangent_dimension(canonical_form(spec), rtol)
    formula = dimension(spec)
    match = oracle == formula
    return ({"spec": io.spec_to_json(spec), "tangent_dim": oracle, "formula_dim": formula,
             "match": match}, EXIT_OK if match else EXIT_FAIL)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isotropy",
        description="Isotropy groups of Hermitian canonical forms under orthogonal *congruence.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--spec", required=True, metavar="PATH", help="problem or spec document")
        p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
        p.add_argument("--tol", type=float, help="override the default thresholds")
        p.set_defaults(func=func)
        return p

    add("dim", cmd_dim, "dimension of the isotropy group")
    add("canonical", cmd_canonical, "canonical form matrix")
    g = add("generate", cmd_generate, "sample isotropy elements")
    g.add_argument("--seed", type=int, metavar="U64")
    g.add_argument("--params", metavar="PATH", help="explicit parameters or {\"theta\": [...]}")
    g.add_argument("--count", type=int, default=1, metavar="N")
    v = add("verify", cmd_verify, "check matrices against a spec")
    v.add_argument("matrix", metavar="MATRIX", help="matrix document or generate output")
    add("oracle", cmd_oracle, "tangent-space dimension versus the formula")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is not None and not 0 <= args.seed < 2 ** 64:
        parser.error("--seed must be an unsigned 64-bit integer")
    try:
        doc, code = args.func(args)
    except (_Invalid, io.InvalidDocument, ValueError) as exc:
        print(io.dumps({"error": "invalid input", "detail": str(exc)}), end="", file=sys.stderr)
        return EXIT_INVALID
    except Unsolvable as exc:
        doc, code = {"error": "unsolvable", "detail": str(exc)}, EXIT_FAIL
    text = io.dumps(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
