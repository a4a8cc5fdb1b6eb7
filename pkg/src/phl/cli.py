"""Command line interface: ``phl inspect|cone|holonomy|demo <target>``.

Targets are catalog names (``flat:4``, ``quadric:3,0,1``, ``non-einstein:2``,
``cy2d``, ``symplectic:4``, ``cquadric:2``, ``product:<a>,<b>``) or the path of
a JSON manifest. Reports are JSON with sorted keys; exact scalars are written
as strings such as ``"-3/7"`` or ``"1/2+2*i"``.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np
from gmpy2 import mpq

from . import linalg
from .acceptance import CRITERIA, run_criterion
from .catalog import Built, build
from .cone import cone_checks
from .errors import PhlError
from .fields import GaussianRational, field_by_name, format_scalar
from .jets import DEFAULT_ORDER, jet_from_polynomial
from .pipeline import KINDS, holonomy_of, make_cone
from .projective import projective_data
from .tensors import ConnectionChart, TensorJet, is_einstein

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT = 0, 1, 2


# manifests ------------------------------------------------------------------
def _index_key(key: str, dim: int, rank: int, where: str) -> tuple[int, ...]:
    try:
        idx = tuple(int(p) for p in key.split(","))
    except ValueError:
        raise PhlError(f"{where}: key {key!r} is not a comma-separated index list") from None
    if len(idx) != rank or not all(0 <= i < dim for i in idx):
        raise PhlError(f"{where}: index {key!r} out of range for dimension {dim}")
    return idx


def load_manifest(path: str | Path, order: int | None = None) -> Built:
    """Read a JSON manifest: name, dim, field, vars, gamma {"k,i,j": poly}, order, nu?, rho_c?"""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise PhlError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from None
    for key in ("dim", "vars", "gamma"):
        if key not in doc:
            raise PhlError(f"{path}: missing required key {key!r}")
    dim = int(doc["dim"])
    names = list(doc["vars"])
    if len(names) != dim:
        raise PhlError(f"{path}: 'vars' lists {len(names)} names for dimension {dim}")
    fld = field_by_name(doc.get("field", "rational"))
    order = int(order if order is not None else doc.get("order", DEFAULT_ORDER))

    def poly(text, where):
        try:
            return jet_from_polynomial(str(text), names, order, fld)
        except PhlError as exc:
            raise PhlError(f"{path}: {where}: {exc}") from None

    entries = {_index_key(k, dim, 3, f"gamma[{k!r}]"): poly(v, f"gamma[{k!r}]")
               for k, v in doc["gamma"].items()}
    conn = ConnectionChart.from_christoffels(entries, names, order, fld,
                                             name=doc.get("name", path.stem))
    built = Built(conn.name, conn)
    if "nu" in doc:
        arr = np.full((dim, dim), mpq(0), dtype=object)
        for k, v in doc["nu"].items():
            i, j = _index_key(k, dim, 2, f"nu[{k!r}]")
            arr[i, j] = mpq(str(v))
        built.nu = TensorJet("dd", dim, dim, order, {(0,) * dim: arr})
    if "rho_c" in doc:
        jets = {_index_key(k, dim, 2, f"rho_c[{k!r}]"): poly(v, f"rho_c[{k!r}]")
                for k, v in doc["rho_c"].items()}
        built.rho_c = TensorJet.from_jets("dd", jets, dim)
    return built


def resolve_target(target: str, order: int, base: str) -> Built:
    if target.endswith(".json") or Path(target).is_file():
        return load_manifest(target, order)
    return build(target, order, base)


# serialization ----------------------------------------------------------------
def scalar(x) -> str:
    return format_scalar(x)


def matrix(m) -> list:
    return [[scalar(x) for x in row] for row in np.asarray(m, dtype=object)]


def leading(t: TensorJet, names) -> dict:
    """Lowest-degree nonzero part of each component, as polynomial strings."""
    if t.is_zero():
        return {"zero": True}
    deg = min(sum(e) for e in t.terms)
    comps = {}
    for idx in t.nonzero_components():
        part = t.component(*idx).homogeneous_part(deg)
        if not part.is_zero():
            comps[",".join(map(str, idx))] = part.format(names)
    return {"zero": False, "degree": deg, "components": comps}


def _echo(built: Built, args) -> dict:
    c = built.conn
    return {"target": args.target, "name": c.name, "dim": c.dim, "field": c.field.name,
            "vars": list(c.var_names), "order": c.order, "base": args.base}


def cmd_inspect(args) -> tuple[dict, int]:
    built = resolve_target(args.target, args.order, args.base)
    conn = built.conn
    pd = projective_data(conn)
    names = list(conn.var_names)
    p0 = pd.rho.at_base()
    ein = is_einstein(conn)
    report = {
        "input": _echo(built, args),
        "ricci": {**leading(pd.ricci, names), "symmetric": pd.ricci.is_symmetric()},
        "rho": {**leading(pd.rho, names), "symmetric": pd.rho.is_symmetric(),
                "at_base": matrix(p0),
                "nondegenerate_at_base": linalg.det(p0.tolist()) != 0},
        "weyl": leading(pd.weyl, names),
        "cotton_york": leading(pd.cotton_york, names),
        "projectively_flat": pd.weyl.is_zero() and (conn.dim > 2 or pd.cotton_york.is_zero()),
        "einstein": {"einstein": ein.einstein, "reason": ein.reason},
    }
    return report, EXIT_OK


def _cone_section(cone) -> dict:
    chk = cone_checks(cone)
    return {"kind": cone.kind, "dim": cone.dim, "vars": list(cone.cone_conn.var_names),
            "order": cone.cone_conn.order, "q_index": cone.q_index,
            "r_index": cone.r_index, "e_index": cone.e_index, **chk}


def cmd_cone(args) -> tuple[dict, int]:
    built = resolve_target(args.target, args.order, args.base)
    cone = make_cone(built, args.kind, args.auto_data)
    sec = _cone_section(cone)
    ok = sec["torsion_zero"] and sec["ricci_zero"] and sec.get("J_parallel", True)
    return {"input": _echo(built, args), "cone": sec}, EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_holonomy(args) -> tuple[dict, int]:
    built = resolve_target(args.target, args.order, args.base)
    cone = make_cone(built, args.kind, args.auto_data)
    hol, rep = holonomy_of(cone, args.max_depth)
    spanning = [g.tag for g in hol.algebra.generators]
    report = {
        "input": _echo(built, args),
        "cone": _cone_section(cone),
        "holonomy": {"dimension": hol.dimension, "depth": hol.depth,
                     "stabilized": hol.stabilized, "dims_by_depth": hol.dims_by_depth,
                     "fiber_dim": hol.algebra.dim, "note": hol.label,
                     "generator_count": len(spanning), "generators": spanning[:64]},
        "classification": {
            "label": rep.label, "dimension": rep.dimension, "trace_free": rep.trace_free,
            "signature": list(rep.sym_signature) if rep.sym_signature else None,
            "invariant_sym_forms": [matrix(s) for s in rep.invariant_sym_forms],
            "invariant_antisym_forms": [matrix(s) for s in rep.invariant_antisym_forms],
            "commutant_dim": rep.commutant_dim, "commutant_type": rep.commutant_type,
            "complex_structure": matrix(rep.complex_structure)
            if rep.complex_structure is not None else None,
        },
    }
    return report, EXIT_OK


def cmd_demo(args) -> tuple[dict, int]:
    results = []
    for number in sorted(CRITERIA):
        res = run_criterion(number, args.order)
        results.append(res)
        if not args.json:
            print(res.line(), file=sys.stderr if args.out == "-" else sys.stdout)
    report = {"criteria": [{"number": r.number, "title": r.title, "passed": r.passed,
                            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                                       for c in r.checks]} for r in results],
              "passed": all(r.passed for r in results)}
    return report, EXIT_OK if report["passed"] else EXIT_CHECK_FAILED


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def parse_report_scalar(text: str):
    """Inverse of the scalar serialization: "p/q" or "a+b*i" back to an exact value."""
    text = text.strip()
    if text.endswith("*i"):
        body = text[:-2]
        cut = max(body.rfind("+", 1), body.rfind("-", 1))
        if cut <= 0:
            return GaussianRational(0, mpq(body))
        return GaussianRational(mpq(body[:cut]), mpq(body[cut:].lstrip("+")))
    return mpq(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("inspect", "rho, Weyl and Cotton-York of a connection"),
                           ("cone", "build a cone connection and check its contract"),
                           ("holonomy", "infinitesimal holonomy of a cone and its classification"),
                           ("demo", "run the acceptance suite")):
        p = sub.add_parser(name, help=helptext)
        if name != "demo":
            p.add_argument("target", help="catalog target or JSON manifest path")
        p.add_argument("--order", type=int, default=DEFAULT_ORDER, help="jet order (default 6)")
        p.add_argument("--json", action="store_true", help="print the JSON report")
        p.add_argument("--out", default=None, help="write the JSON report to FILE")
        if name in ("cone", "holonomy"):
            p.add_argument("--kind", choices=KINDS, default="real")
            data = p.add_mutually_exclusive_group()
            data.add_argument("--auto-data", dest="auto_data", action="store_true", default=True,
                              help="symplectic cone: Ricci-flat choice of s, U, f (default)")
            data.add_argument("--zero-data", dest="auto_data", action="store_false",
                              help="symplectic cone: s = U = f = 0")
        if name == "holonomy":
            p.add_argument("--max-depth", type=int, default=None)
        if name != "demo":
            default_base = "generic" if name == "holonomy" else "origin"
            p.add_argument("--base", choices=("origin", "generic", "generic2"),
                           default=default_base, help=f"base point (default {default_base})")
    return parser


def _summary(command: str, report: dict) -> str:
    if command == "inspect":
        return (f"{report['input']['name']}: Ric zero={report['ricci']['zero']}, "
                f"P zero={report['rho']['zero']}, W zero={report['weyl']['zero']}, "
                f"CY zero={report['cotton_york']['zero']}, "
                f"P nondegenerate at base={report['rho']['nondegenerate_at_base']}, "
                f"einstein={report['einstein']['einstein']} ({report['einstein']['reason']})")
    if command == "cone":
        c = report["cone"]
        extra = f", nabla J = 0: {c['J_parallel']}" if "J_parallel" in c else ""
        return (f"{c['kind']} cone of dim {c['dim']}: torsion = 0: {c['torsion_zero']}, "
                f"Ricci = 0: {c['ricci_zero']}{extra}")
    if command == "holonomy":
        h, c = report["holonomy"], report["classification"]
        sig = f", signature {tuple(c['signature'])}" if c["signature"] else ""
        return (f"holonomy dim {h['dimension']} on fiber dim {h['fiber_dim']} "
                f"(depth {h['depth']}, stabilized={h['stabilized']}): {c['label']}{sig}")
    return "all criteria passed" if report["passed"] else "acceptance FAILED"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "demo":
        args.base = "generic"
    handler = {"inspect": cmd_inspect, "cone": cmd_cone, "holonomy": cmd_holonomy,
               "demo": cmd_demo}[args.command]
    try:
        report, code = handler(args)
    except (PhlError, ValueError, ZeroDivisionError) as exc:
        print(f"phl {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = dumps(report)
    if args.out:
        Path(args.out).write_text(text + "\n")
    if args.json:
        print(text)
    else:
        print(_summary(args.command, report))
    return code


if __name__ == "__main__":
    sys.exit(main())
