"""Command-line front end.

Every subcommand prints one JSON document (or an aligned table with
``--format table``).  Exit status is 0 on success, 1 when the input does
not validate and 2 when a check finds a failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .models.instances import (
    INSTANCE_NAMES,
    build_instance,
    closed_value,
    omega_vector,
    polya_report,
)
from .models.multisets import Multiset, divisor_count, omega_profile
from .models.polya import close_group, cyclic_group, dihedral_group
from .models.signature import signature_of_form, sturm_signature
from .moncat import check_axioms, table_category_from_json
from .reports import jsonable
from .semiring import check_laws, semiring_from_json
from .verify import THEOREMS, verify_theorem

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2
DIVISOR_LIMIT = 10**6


class InputError(ValueError):
    pass


def _load(path: str):
    return json.loads(Path(path).read_text())


def _freeze(x):
    if isinstance(x, list):
        return tuple(_freeze(v) for v in x)
    return x


def _semiring_arg(text: str | None):
    if text is None:
        return None
    if text.lstrip().startswith("{"):
        return semiring_from_json(json.loads(text))
    if Path(text).is_file():
        return semiring_from_json(_load(text))
    return semiring_from_json(text)


def _instance(args):
    return build_instance(
        args.instance,
        k=args.k,
        nmax=args.nmax,
        semiring=_semiring_arg(args.semiring),
        group=args.group,
        degree=args.degree,
        colors=args.colors,
        max_edges=args.max_edges,
    )


# subcommands: each returns (document, exit code)


def cmd_laws(args):
    report = check_laws(_semiring_arg(args.semiring), samples=args.samples, seed=args.seed)
    return report.to_json(), EXIT_OK if report.passed else EXIT_FAILED


def cmd_catcheck(args):
    cat = table_category_from_json(_load(args.file), check=False)
    report = check_axioms(cat, samples=args.samples, seed=args.seed)
    return report.to_json(), EXIT_OK if report.passed else EXIT_FAILED


def cmd_statesum(args):
    inst = _instance(args)
    model, fields = inst.model, inst.fields
    W = model.bordism_from_json(_load(args.bordism))
    M, N = model.incoming(W), model.outgoing(W)
    if args.boundary:
        doc = _load(args.boundary)
        boundary = (
            _freeze(fields.field_from_json(M, doc.get("in", []))),
            _freeze(fields.field_from_json(N, doc.get("out", []))),
        )
        return inst.state_sum(W, boundary).to_json(), EXIT_OK
    if M == N == model.empty_closed:
        return closed_value(inst, W).to_json(), EXIT_OK
    return inst.render(inst.state_vector(W)), EXIT_OK


def cmd_verify(args):
    report = verify_theorem(_instance(args), args.theorem, cases=args.cases, seed=args.seed)
    return report.to_json(), EXIT_OK if report.passed else EXIT_FAILED


def _group_from_json(doc) -> tuple[list, int]:
    degree = int(doc["degree"])
    if "elements" in doc:
        elements = [tuple(g) for g in doc["elements"]]
        closed = close_group(elements, degree)
        if set(closed) != set(elements):
            raise InputError("the listed permutations are not closed under composition")
        return closed, degree
    if "generators" in doc:
        return close_group(doc["generators"], degree), degree
    kind = doc.get("group", "cyclic")
    if kind == "cyclic":
        return cyclic_group(degree), degree
    if kind == "dihedral":
        return dihedral_group(degree), degree
    raise InputError(f"unknown group {kind!r}")


def cmd_polya(args):
    group, degree = _group_from_json(_load(args.group_file))
    if args.colors < 1:
        raise InputError("need at least one colour")
    report = polya_report(group, degree, args.colors)
    return report, EXIT_OK if report["match"] else EXIT_FAILED


def cmd_divisors(args):
    n = args.n
    if not 1 <= n <= DIVISOR_LIMIT:
        raise InputError(f"n must lie in 1..{DIVISOR_LIMIT}")
    W = Multiset.of(n)
    if args.omega:
        inst = build_instance("omega-divisor")
        values = [int(v) for v in omega_vector(inst, n)]
        oracle = omega_profile(n)
        doc = {"n": n, "omega": values, "oracle": oracle, "match": values == oracle}
    else:
        inst = build_instance("divisor")
        z = closed_value(inst, W)
        d = int(z[inst.category.unit_identity])
        oracle = divisor_count(n)
        doc = {"n": n, "d": d, "oracle": oracle, "match": d == oracle}
    return doc, EXIT_OK if doc["match"] else EXIT_FAILED


def cmd_signature(args):
    doc = _load(args.matrix_file)
    rows = doc["form"] if isinstance(doc, dict) else doc
    sig, check = signature_of_form(rows), sturm_signature(rows)
    out = {"size": len(rows), "signature": sig, "sturm": check, "match": sig == check}
    return out, EXIT_OK if out["match"] else EXIT_FAILED


def cmd_aggregate(args):
    inst = _instance(args)
    model = inst.model
    doc = _load(args.catalog)
    M = model.closed_from_json(_freeze(doc["closed"]))
    catalog = [model.bordism_from_json(b) for b in doc["bordisms"]]
    return inst.render(inst.coboundary_aggregate(M, catalog)), EXIT_OK


# output


def render_table(doc, prefix: str = "") -> list[tuple[str, str]]:
    """Flatten nested JSON into ``(path, value)`` rows."""
    if isinstance(doc, dict) and doc:
        rows = []
        for k in sorted(doc):
            rows.extend(render_table(doc[k], f"{prefix}.{k}" if prefix else str(k)))
        return rows
    if isinstance(doc, list) and doc and any(isinstance(v, (dict, list)) for v in doc):
        rows = []
        for i, v in enumerate(doc):
            rows.extend(render_table(v, f"{prefix}[{i}]"))
        return rows
    return [(prefix or "value", json.dumps(doc, sort_keys=True))]


def format_output(doc, fmt: str) -> str:
    if fmt == "table":
        rows = render_table(doc)
        width = max((len(k) for k, _ in rows), default=0)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)
    return json.dumps(jsonable(doc), sort_keys=True)


def _instance_options(p: argparse.ArgumentParser):
    p.add_argument("--k", type=int, default=1, help="grid resolution of the max and iv instances")
    p.add_argument("--nmax", type=int, default=2, help="largest value of the delta instance")
    p.add_argument("--semiring", help="carrier name, JSON descriptor or descriptor file")
    p.add_argument("--group", default="cyclic", choices=("cyclic", "dihedral"))
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--colors", type=int, default=2)
    p.add_argument("--max-edges", type=int, default=8)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="postft", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("json", "table"), default="json")
    parser.add_argument("--output", help="write the report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("laws", help="semiring law suite")
    p.add_argument("semiring")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_laws)

    p = sub.add_parser("catcheck", help="strict monoidal category axioms of a table")
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=300)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_catcheck)

    p = sub.add_parser("statesum", help="state sum of a bordism")
    p.add_argument("instance", choices=INSTANCE_NAMES)
    p.add_argument("bordism")
    p.add_argument("--boundary", help="JSON file with the incoming and outgoing fields")
    _instance_options(p)
    p.set_defaults(run=cmd_statesum)

    p = sub.add_parser("verify", help="randomized check of a theorem on an instance")
    p.add_argument("instance", choices=INSTANCE_NAMES)
    p.add_argument("theorem", choices=THEOREMS)
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    _instance_options(p)
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("polya", help="orbit counting identities for bead colourings")
    p.add_argument("group_file")
    p.add_argument("--colors", type=int, required=True)
    p.set_defaults(run=cmd_polya)

    p = sub.add_parser("divisors", help="divisor counts from the multiset state sums")
    p.add_argument("n", type=int)
    p.add_argument("--omega", action="store_true", help="split the count by number of prime factors")
    p.set_defaults(run=cmd_divisors)

    p = sub.add_parser("signature", help="signature of a symmetric form")
    p.add_argument("matrix_file")
    p.set_defaults(run=cmd_signature)

    p = sub.add_parser("aggregate", help="sum of state sums over a catalog of bordisms")
    p.add_argument("instance", choices=INSTANCE_NAMES)
    p.add_argument("catalog")
    _instance_options(p)
    p.set_defaults(run=cmd_aggregate)
    return parser


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        doc, code = args.run(args)
    except (ValueError, KeyError, TypeError, OSError) as exc:
        doc = {"error": type(exc).__name__, "message": str(exc)}
        code = EXIT_INVALID
    text = format_output(doc, args.format if code != EXIT_INVALID else "json")
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text, file=stdout)
    return code


def main():
    sys.exit(run())
