"""Batch command-line front end.

A job is one TOML document::

    command = "invariants"
    catalog = "heisenberg3-coadjoint"      # or the two tables below

    [algebra]
    dim = 3
    names = ["P", "Q", "Z"]
    brackets = [[1, 2, [[3, "1"]]]]        # 1-based; [i, j, [[k, c], ...]]

    [representation]
    kind = "coadjoint"                     # adjoint | coadjoint | matrices
    coords = ["x", "y", "z"]

    [options]
    degree = 3

Results are TOML documents with ``schema = 1``. Exit status: 0 success,
1 invalid input, 2 failed internal self-check.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import tomli
import tomli_w

from .catalog import UnknownEntryError, catalog_get, catalog_names
from .errors import NotInvariantError, VerificationError
from .fields import VectorField, rep_fields
from .lie import (HomomorphismError, JacobiError, LieAlgebra, Representation, adjoint_rep,
                  coadjoint_rep, make_lie_algebra)
from .poly import ContextError, ParseError, Polynomial, Ring, format_rational, parse_rational
from .section import section_invariants
from .solver import (characteristic_verdict, graded_invariants, invariant_space, jacobian_rank,
                     linear_stabilizer, module_membership)
from .takiff import derived_invariants, verify_takiff_corollary

__all__ = ["JobSpec", "JobError", "load_job", "run", "main", "COMMANDS"]

SCHEMA = 1
COMMANDS = ("invariants", "stabilizer", "membership", "verdict", "takiff", "section", "rank", "catalog")


class JobError(ValueError):
    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


@dataclass
class JobSpec:
    command: str
    catalog: str | None = None
    algebra: dict | None = None
    representation: dict | None = None
    options: dict = field(default_factory=dict)


# -- validation helpers ---------------------------------------------------------

def _int(opts, key, path, minimum=0, required=False):
    if key not in opts:
        if required:
            raise JobError(f"{path}.{key}", "required")
        return None
    v = opts[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise JobError(f"{path}.{key}", "must be an integer")
    if v < minimum:
        raise JobError(f"{path}.{key}", f"must be >= {minimum}")
    return v


def _rational(v, path) -> Fraction:
    if isinstance(v, bool):
        raise JobError(path, "must be a rational")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return parse_rational(v)
        except ParseError:
            raise JobError(path, f"not a rational literal: {v!r}") from None
    raise JobError(path, "rationals are written as integers or \"p/q\" strings")


def _str_list(v, path):
    if not isinstance(v, list) or not all(isinstance(s, str) for s in v):
        raise JobError(path, "must be a list of strings")
    return v


def load_job(doc: dict) -> JobSpec:
    """Check the document layout and return a :class:`JobSpec`."""
    if not isinstance(doc, dict):
        raise JobError("$", "document must be a table")
    allowed = {"command", "catalog", "algebra", "representation", "options"}
    for key in doc:
        if key not in allowed:
            raise JobError(key, "unknown key")
    cmd = doc.get("command")
    if not isinstance(cmd, str):
        raise JobError("command", "required string")
    if cmd not in COMMANDS:
        raise JobError("command", f"must be one of {', '.join(COMMANDS)}")
    catalog = doc.get("catalog")
    if catalog is not None and not isinstance(catalog, str):
        raise JobError("catalog", "must be a string")
    for key in ("algebra", "representation", "options"):
        if key in doc and not isinstance(doc[key], dict):
            raise JobError(key, "must be a table")
    return JobSpec(cmd, catalog, doc.get("algebra"), doc.get("representation"), dict(doc.get("options", {})))


def build_algebra(spec: dict) -> LieAlgebra:
    dim = _int(spec, "dim", "algebra", required=True)
    names = spec.get("names")
    if names is not None:
        names = _str_list(names, "algebra.names")
    raw = spec.get("brackets", [])
    if not isinstance(raw, list):
        raise JobError("algebra.brackets", "must be a list")
    brackets = []
    for idx, entry in enumerate(raw):
        path = f"algebra.brackets[{idx}]"
        if not (isinstance(entry, list) and len(entry) == 3):
            raise JobError(path, "must be [i, j, [[k, c], ...]]")
        i, j, coeffs = entry
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in (i, j)):
            raise JobError(path, "indices must be integers")
        if not isinstance(coeffs, list):
            raise JobError(path, "third item must be a list of [k, c] pairs")
        pairs = []
        for cidx, pair in enumerate(coeffs):
            cpath = f"{path}[2][{cidx}]"
            if not (isinstance(pair, list) and len(pair) == 2 and isinstance(pair[0], int)):
                raise JobError(cpath, "must be [k, c]")
            pairs.append((pair[0] - 1, _rational(pair[1], cpath + "[1]")))
        brackets.append((i - 1, j - 1, pairs))
    try:
        return make_lie_algebra(dim, names, brackets)
    except JacobiError as exc:
        i, j, k = exc.triple
        raise JobError("algebra.brackets",
                       f"Jacobi identity fails for ({i + 1}, {j + 1}, {k + 1}), defect "
                       f"[{', '.join(format_rational(c) for c in exc.defect)}]") from None
    except ValueError as exc:
        raise JobError("algebra", str(exc)) from None


def build_representation(g: LieAlgebra, spec: dict) -> Representation:
    kind = spec.get("kind", "adjoint")
    coords = spec.get("coords")
    if coords is not None:
        coords = _str_list(coords, "representation.coords")
    try:
        if kind == "adjoint":
            return adjoint_rep(g, coords)
        if kind == "coadjoint":
            return coadjoint_rep(g, coords)
        if kind == "matrices":
            mats = spec.get("matrices")
            if not isinstance(mats, list):
                raise JobError("representation.matrices", "required list of matrices")
            parsed = []
            for a, M in enumerate(mats):
                if not isinstance(M, list) or not all(isinstance(r, list) for r in M):
                    raise JobError(f"representation.matrices[{a}]", "must be a list of rows")
                parsed.append([[_rational(x, f"representation.matrices[{a}][{r}][{c}]")
                                for c, x in enumerate(row)] for r, row in enumerate(M)])
            n = len(parsed[0]) if parsed else len(coords or [])
            return Representation(g, n, tuple(parsed), tuple(coords or ()))
    except HomomorphismError as exc:
        i, j = exc.pair
        raise JobError("representation.matrices",
                       f"bracket of basis elements {i + 1}, {j + 1} is not represented") from None
    except ValueError as exc:
        raise JobError("representation", str(exc)) from None
    raise JobError("representation.kind", "must be adjoint, coadjoint or matrices")


@dataclass
class _Context:
    rep: Representation | None
    algebra: LieAlgebra | None
    entry: Any = None

    def ring(self, params=()):
        if self.rep is None:
            raise JobError("representation", "this command needs a representation or a catalog entry")
        r = self.rep.ring
        return r.extend(params) if params else r


def _context(job: JobSpec) -> _Context:
    if job.catalog is not None:
        if job.algebra is not None or job.representation is not None:
            raise JobError("catalog", "give either a catalog entry or algebra/representation tables")
        try:
            entry = catalog_get(job.catalog)
        except UnknownEntryError as exc:
            raise JobError("catalog", str(exc)) from None
        return _Context(entry.rep, entry.rep.algebra, entry)
    g = build_algebra(job.algebra) if job.algebra is not None else None
    rep = None
    if job.representation is not None:
        if g is None:
            raise JobError("representation", "needs an [algebra] table")
        rep = build_representation(g, job.representation)
    return _Context(rep, g)


def _parse_poly(ring: Ring, text, path) -> Polynomial:
    if not isinstance(text, str):
        raise JobError(path, "polynomials are strings")
    try:
        return ring.parse(text)
    except ParseError as exc:
        raise JobError(path, str(exc)) from None


def _poly_list(opts, key, ring, required=True):
    if key not in opts:
        if required:
            raise JobError(f"options.{key}", "required")
        return None
    return [_parse_poly(ring, t, f"options.{key}[{i}]") for i, t in enumerate(_str_list(opts[key], f"options.{key}"))]


def _matrix_out(M):
    return [[format_rational(Fraction(x)) for x in row] for row in M]


def _invariants_upto(ctx, opts):
    max_deg = _int(opts, "max_degree", "options", minimum=1, required=True)
    inv = graded_invariants(rep_fields(ctx.rep), max_deg)
    return [p for d in sorted(inv) for p in inv[d]], max_deg


def _chosen_invariants(ctx, opts):
    """Explicit ``invariants``, else computed up to ``max_degree``, else the
    catalog entry's generators."""
    ring = ctx.ring()
    if "invariants" in opts:
        return _poly_list(opts, "invariants", ring), "given"
    if "max_degree" in opts:
        polys, d = _invariants_upto(ctx, opts)
        return polys, f"all invariants of degree <= {d}"
    if ctx.entry is not None and ctx.entry.invariants:
        return list(ctx.entry.invariants), "catalog generators"
    raise JobError("options", "give invariants or max_degree")


# -- commands -----------------------------------------------------------------

def _cmd_invariants(ctx, opts):
    fields_ = rep_fields(ctx.rep, ctx.ring())
    if "degree" in opts:
        d = _int(opts, "degree", "options", minimum=1)
        degrees = {d: invariant_space(fields_, d)}
    else:
        top = _int(opts, "max_degree", "options", minimum=1)
        if top is None:
            raise JobError("options.degree", "give degree or max_degree")
        degrees = graded_invariants(fields_, top)
    return {
        "coords": list(ctx.rep.coord_names),
        "dims": {str(d): len(v) for d, v in degrees.items()},
        "invariants": {str(d): [str(p) for p in v] for d, v in degrees.items()},
    }


def _cmd_stabilizer(ctx, opts):
    polys, source = _chosen_invariants(ctx, opts)
    polys = [p for p in polys if p]
    if not polys:
        raise JobError("options", "no nonzero polynomials to stabilize")
    stab = linear_stabilizer(polys)
    return {
        "coords": list(ctx.rep.coord_names),
        "source": source,
        "polynomials": [str(p) for p in polys],
        "dim": stab.dim,
        "basis": [_matrix_out(M) for M in stab.basis],
    }


def _cmd_membership(ctx, opts):
    params = _str_list(opts.get("params", []), "options.params")
    try:
        ring = ctx.ring(params)
    except ValueError as exc:
        raise JobError("options.params", str(exc)) from None
    bound = _int(opts, "bound", "options", required=True)
    if "target" not in opts:
        raise JobError("options.target", "required")
    target = _field(ring, opts["target"], "options.target")
    if "generators" in opts:
        gens_raw = opts["generators"]
        if not isinstance(gens_raw, list):
            raise JobError("options.generators", "must be a list of fields")
        gens = [_field(ring, g, f"options.generators[{i}]") for i, g in enumerate(gens_raw)]
    else:
        gens = rep_fields(ctx.rep, ring)
    cert = module_membership(target, gens, bound)
    out = {"outcome": cert.outcome, "bound": cert.bound, "target": target.to_strings(),
           "generators": [g.to_strings() for g in gens]}
    if cert.found:
        out["coefficients"] = [str(p) for p in cert.coefficients]
    else:
        out["reason"] = cert.reason
    return out


def _field(ring, raw, path) -> VectorField:
    coeffs = _str_list(raw, path)
    if len(coeffs) != ring.n_state:
        raise JobError(path, f"needs {ring.n_state} coefficients")
    return VectorField(ring, tuple(_parse_poly(ring, c, f"{path}[{i}]") for i, c in enumerate(coeffs)))


def _cmd_verdict(ctx, opts):
    polys, source = _chosen_invariants(ctx, opts)
    polys = [p for p in polys if p]
    if "generators_complete" in opts:
        complete = opts["generators_complete"]
        if not isinstance(complete, bool):
            raise JobError("options.generators_complete", "must be true or false")
    elif ctx.entry is not None and source == "catalog generators":
        complete = ctx.entry.generators_complete
    else:
        complete = False
    rec = characteristic_verdict(ctx.rep, polys, complete)
    return {
        "verdict": rec.verdict.value,
        "stabilizer_dim": rec.stabilizer_dim,
        "rep_dim": rec.rep_dim,
        "generators_complete": rec.generators_complete,
        "max_invariant_degree": rec.max_invariant_degree,
        "source": source,
        "polynomials": [str(p) for p in polys],
        "note": rec.note,
    }


def _cmd_takiff(ctx, opts):
    g = ctx.algebra
    if g is None:
        raise JobError("algebra", "takiff needs an [algebra] table or a catalog entry")
    m = _int(opts, "m", "options", required=True)
    ring = Ring(g.basis_names)
    if "invariants" in opts:
        base = _poly_list(opts, "invariants", ring)
    elif ctx.entry is not None and ctx.entry.invariants and ctx.rep.coord_names == g.basis_names:
        base = list(ctx.entry.invariants)
    else:
        raise JobError("options.invariants", "required (polynomials in the basis names)")
    families = []
    for p in base:
        fam = derived_invariants(g, p, m)
        families.append({"base": str(p), "derived": [str(P) for P in fam.derived]})
    tv = verify_takiff_corollary(g, base, m)
    return {
        "m": m,
        "coords": list(adjoint_rep(fam.algebra).coord_names),
        "families": families,
        "verdict": tv.verdict.value,
        "stabilizer_dim": tv.record.stabilizer_dim,
        "ad_dim": tv.ad_dim,
        "degree_bound": tv.degree_bound,
        "note": "derived families only; not claimed complete",
    }


def _cmd_section(ctx, opts):
    n = _int(opts, "n", "options", minimum=2, required=True)
    si = section_invariants(n)
    return {"n": n, "polys": {f"P{r + 1}": str(p) for r, p in enumerate(si.polys)}}


def _cmd_rank(ctx, opts):
    ring = ctx.ring()
    polys, source = _chosen_invariants(ctx, opts)
    if "point" not in opts or not isinstance(opts["point"], list):
        raise JobError("options.point", "required list of rationals")
    point = [_rational(v, f"options.point[{i}]") for i, v in enumerate(opts["point"])]
    if len(point) != ring.n_state:
        raise JobError("options.point", f"needs {ring.n_state} coordinates")
    return {"rank": jacobian_rank(polys, point), "point": [format_rational(v) for v in point],
            "polynomials": [str(p) for p in polys]}


def _cmd_catalog(ctx, opts):
    action = opts.get("action", "list")
    if action == "list":
        return {"entries": catalog_names()}
    if action != "show":
        raise JobError("options.action", "must be list or show")
    name = opts.get("name")
    if not isinstance(name, str):
        raise JobError("options.name", "required")
    try:
        e = catalog_get(name)
    except UnknownEntryError as exc:
        raise JobError("options.name", str(exc)) from None
    return entry_document(e)


def entry_document(e) -> dict:
    g = e.rep.algebra
    expected = {}
    for k, v in e.expected.items():
        expected[k] = {str(d): c for d, c in v.items()} if isinstance(v, dict) else v
    return {
        "name": e.name,
        "provenance": e.provenance,
        "algebra": {
            "dim": g.dim,
            "names": list(g.basis_names),
            "brackets": [[i + 1, j + 1, [[k + 1, format_rational(c)] for k, c in cs]]
                         for i, j, cs in g.brackets_list()],
        },
        "representation": {
            "coords": list(e.rep.coord_names),
            "matrices": [_matrix_out(M) for M in e.rep.matrices],
            "fields": [f.to_strings() for f in rep_fields(e.rep)],
        },
        "invariants": [str(p) for p in e.invariants],
        "generators_complete": e.generators_complete,
        "expected": expected,
    }


_HANDLERS = {
    "invariants": _cmd_invariants,
    "stabilizer": _cmd_stabilizer,
    "membership": _cmd_membership,
    "verdict": _cmd_verdict,
    "takiff": _cmd_takiff,
    "section": _cmd_section,
    "rank": _cmd_rank,
    "catalog": _cmd_catalog,
}

_NEEDS_REP = {"invariants", "stabilizer", "membership", "verdict", "rank"}


def run(job: JobSpec) -> tuple[dict, int]:
    """Execute a job; returns the result document and the exit status."""
    try:
        ctx = _context(job) if job.command not in ("section", "catalog") else _Context(None, None)
        if job.command in _NEEDS_REP and ctx.rep is None:
            raise JobError("representation", f"{job.command} needs a representation or a catalog entry")
        body = _HANDLERS[job.command](ctx, job.options)
    except VerificationError as exc:
        return {"schema": SCHEMA, "command": job.command, "status": "internal-error", "error": str(exc)}, 2
    except JobError as exc:
        return _error_doc(job, exc.path, exc.reason), 1
    except (ParseError, ContextError, NotInvariantError, ValueError) as exc:
        return _error_doc(job, "options", str(exc)), 1
    doc = {"schema": SCHEMA, "command": job.command, "status": "ok"}
    if job.catalog is not None:
        doc["catalog"] = job.catalog
    doc.update(body)
    return doc, 0


def _error_doc(job, path, reason):
    return {"schema": SCHEMA, "command": job.command, "status": "invalid",
            "error": {"path": path, "reason": reason}}


def dumps(doc: dict) -> str:
    return tomli_w.dumps(doc)


# -- argv -----------------------------------------------------------------------

def _add_source(p):
    p.add_argument("--catalog", help="catalog entry name")
    p.add_argument("--job", help="TOML job document supplying [algebra]/[representation]/[options]")


def _parser():
    ap = argparse.ArgumentParser(prog="invkit", description="Exact invariant-theory computations.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a complete job document")
    p.add_argument("file")

    p = sub.add_parser("invariants", help="graded invariant polynomials")
    _add_source(p)
    p.add_argument("--degree", type=int)
    p.add_argument("--max-degree", type=int)

    p = sub.add_parser("stabilizer", help="linear stabilizer algebra of polynomials")
    _add_source(p)
    p.add_argument("--invariant", action="append", dest="invariants")
    p.add_argument("--max-degree", type=int)

    p = sub.add_parser("membership", help="polynomial combination of generator fields")
    _add_source(p)
    p.add_argument("--target", nargs="+", required=False, help="coefficients of the target field")
    p.add_argument("--generator", nargs="+", action="append", dest="generators")
    p.add_argument("--param", action="append", dest="params")
    p.add_argument("--bound", type=int)

    p = sub.add_parser("verdict", help="are the invariants characteristic?")
    _add_source(p)
    p.add_argument("--invariant", action="append", dest="invariants")
    p.add_argument("--max-degree", type=int)
    p.add_argument("--complete", dest="generators_complete", action="store_const", const=True)

    p = sub.add_parser("takiff", help="derived invariants on a Takiff algebra")
    p.add_argument("--algebra", help="TOML file with an [algebra] table")
    p.add_argument("--catalog")
    p.add_argument("--invariant", action="append", dest="invariants")
    p.add_argument("-m", type=int)

    p = sub.add_parser("section", help="polynomial invariants of the principal nilpotent flow")
    p.add_argument("-n", type=int, required=True)

    p = sub.add_parser("rank", help="Jacobian rank of polynomials at a point")
    _add_source(p)
    p.add_argument("--invariant", action="append", dest="invariants")
    p.add_argument("--point", required=False, help="comma-separated rationals")

    p = sub.add_parser("catalog", help="list or show catalog entries")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?")
    return ap


_OPTION_KEYS = ("degree", "max_degree", "invariants", "bound", "params", "m", "n",
                "generators_complete", "name", "action")


def _read_toml(path):
    try:
        with open(path, "rb") as fh:
            return tomli.load(fh)
    except OSError as exc:
        raise JobError(path, exc.strerror or str(exc)) from None
    except tomli.TOMLDecodeError as exc:
        raise JobError(path, f"invalid TOML: {exc}") from None


def job_from_args(args) -> JobSpec:
    if args.command == "run":
        return load_job(_read_toml(args.file))
    doc: dict = {"command": args.command}
    if getattr(args, "job", None):
        base = _read_toml(args.job)
        for key in ("catalog", "algebra", "representation", "options"):
            if key in base:
                doc[key] = base[key]
    if args.command == "takiff" and args.algebra:
        base = _read_toml(args.algebra)
        if "algebra" not in base:
            raise JobError(args.algebra, "missing [algebra] table")
        doc["algebra"] = base["algebra"]
    if getattr(args, "catalog", None):
        doc["catalog"] = args.catalog
    opts = dict(doc.get("options", {}))
    for key in _OPTION_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            opts[key] = v
    if getattr(args, "target", None):
        opts["target"] = args.target
    if getattr(args, "generators", None):
        opts["generators"] = args.generators
    if getattr(args, "point", None):
        opts["point"] = [s.strip() for s in args.point.split(",")]
    doc["options"] = opts
    return load_job(doc)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        job = job_from_args(args)
    except JobError as exc:
        print(f"error: {exc.path}: {exc.reason}", file=sys.stderr)
        return 1
    doc, status = run(job)
    sys.stdout.write(dumps(doc))
    if status == 1:
        err = doc["error"]
        print(f"error: {err['path']}: {err['reason']}", file=sys.stderr)
    elif status == 2:
        print(f"internal error: {doc['error']}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
