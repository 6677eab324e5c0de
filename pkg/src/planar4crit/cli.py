"""Command-line front end.  Every command prints one JSON envelope.

Exit status: 0 when the verdict is pass, 1 when an internal check fails or a
budget runs out, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from collections import Counter
from pathlib import Path
from typing import Callable, Optional

from . import __version__
from .assembly import build_gn, extension_checks, gn_size, guaranteed_critical_edges
from .coloring import chromatic_number, is_proper
from .criticality import (
    WORKERS_ENV,
    BudgetExceeded,
    bound_limit,
    bound_monotone_from,
    check_edges,
    default_workers,
    density_report,
    density_threshold,
    dual_density_limit,
    extract_qn,
    subgraph_rotation,
)
from .embedding import build_embedding, dual_graph, planarity_test, verify_genus_zero
from .gadgets import ContractId, build_gadget, g2_without_diamond_edge, verify_contract
from .graph import FORMATS, Graph, delete_edge, serialize
from .lattice import verify_endrow_transfer

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


def _coefficients(h) -> tuple[int, int]:
    return 2 * (h.k1 - 3), h.k2 - 4 * h.k1 + 7


def _emit_graph(g: Graph, args) -> dict:
    text = serialize(g, args.format)
    if args.out:
        Path(args.out).write_text(text)
        return {"format": args.format, "out": args.out}
    return {"format": args.format, "graph": text}


def _deadline(args) -> Optional[float]:
    return None if args.budget_secs is None else time.monotonic() + args.budget_secs


# -- commands -------------------------------------------------------------


def cmd_gen(args) -> tuple[dict, bool]:
    h = build_gn(args.n)
    g = h.graph
    g.validate()
    payload = {
        "n": args.n,
        "vertices": g.n,
        "edges": g.num_edges,
        "k1": h.k1,
        "k2": h.k2,
        "copies": [c.name for c in h.copies],
    }
    payload.update(_emit_graph(g, args))
    return payload, g.n == gn_size(args.n, h.k1, h.k2)


def cmd_verify_gadgets(args) -> tuple[dict, bool]:
    rows = []
    for kind in ContractId:
        bp = build_gadget(kind)
        rep = verify_contract(bp)
        rows.append(
            {
                "gadget": kind.value,
                "vertices": bp.graph.n,
                "edges": bp.graph.num_edges,
                "accepted": rep.accepted,
                "expected": rep.expected,
                "planar": rep.planar,
                "genus_zero": verify_genus_zero(bp.graph, bp.rotation),
                "ok": rep.ok,
                "message": rep.message or None,
            }
        )
    g2 = build_gadget(ContractId.G2)
    mutant = verify_contract(g2, g2_without_diamond_edge())
    control = {"mutant": "G2 without its diamond edge", "accepted": mutant.accepted, "rejected": not mutant.ok}
    ok = all(r["ok"] and r["genus_zero"] for r in rows) and control["rejected"]
    return {"gadgets": rows, "mutation_control": control}, ok


def cmd_chi(args) -> tuple[dict, bool]:
    h = build_gn(args.n)
    chi = chromatic_number(h.graph, 4)
    lat = h.lattice
    lat_chi = chromatic_number(lat.graph, 4)
    witness_ok = is_proper(lat.graph, lat.standard_coloring(), 3)
    payload = {"n": args.n, "chi": chi, "lattice_chi": lat_chi, "lattice_witness_valid": witness_ok}
    return payload, chi == 4 and lat_chi == 3 and witness_ok


def cmd_critical(args) -> tuple[dict, bool]:
    h = build_gn(args.n)
    g = h.graph
    guaranteed = set(guaranteed_critical_edges(h))
    edges = g.edges() if args.all else sorted(guaranteed)
    reports = check_edges(h, edges, args.workers)
    rows, valid = [], True
    for r in reports:
        row = r.to_json(g)
        row["guaranteed"] = r.edge in guaranteed
        if r.critical:
            ok = is_proper(delete_edge(g, r.edge), r.witness, 3) and len(r.witness) == g.n
            valid &= ok
            row["witness"] = [r.witness[v] for v in range(g.n)]
        rows.append(row)
    crit_guaranteed = sum(1 for r in reports if r.critical and r.edge in guaranteed)
    expected = 5 * args.n**2 - 9 * args.n + 4
    payload = {
        "n": args.n,
        "scope": "all" if args.all else "guaranteed",
        "checked": len(reports),
        "critical": sum(r.critical for r in reports),
        "guaranteed_expected": expected,
        "guaranteed_critical": crit_guaranteed,
        "methods": dict(Counter(r.method for r in reports)),
        "edges": rows,
    }
    return payload, valid and crit_guaranteed == expected == len(guaranteed)


def _qn(args):
    h = build_gn(args.n)
    q, old = extract_qn(h, _deadline(args))
    return h, q, old


def cmd_extract(args) -> tuple[dict, bool]:
    h, q, old = _qn(args)
    kept = {(old[u], old[v]) for u, v in q.edges()}
    guaranteed = guaranteed_critical_edges(h)
    contains = all(e in kept for e in guaranteed)
    payload = {
        "n": args.n,
        "gn_vertices": h.graph.n,
        "gn_edges": h.graph.num_edges,
        "q_vertices": q.n,
        "q_edges": q.num_edges,
        "contains_guaranteed": contains,
        "labels": [q.name(v) for v in range(q.n)],
    }
    payload.update(_emit_graph(q, args))
    return payload, contains and q.num_edges >= len(guaranteed)


def cmd_density(args) -> tuple[dict, bool]:
    if args.from_n < 4 or args.to_n < args.from_n:
        raise UsageError("density needs 4 <= --from <= --to")
    rows = density_report(args.from_n, args.to_n, args.budget_secs)
    h = build_gn(4, check_contracts=False)
    a, b = _coefficients(h)
    ok = all(
        r.symbolic or (r.ratio >= r.bound and r.q_edges >= 5 * r.n**2 - 9 * r.n + 4) for r in rows
    )
    payload = {
        "a": a,
        "b": b,
        "k1": h.k1,
        "k2": h.k2,
        "limit": str(bound_limit()),
        "threshold_2_4": density_threshold(a, b),
        "bound_increasing_from": bound_monotone_from(a, b),
        "rows": [r.to_json() for r in rows],
    }
    return payload, ok


def cmd_dual(args) -> tuple[dict, bool]:
    h, q, old = _qn(args)
    dual = dual_graph(q, subgraph_rotation(build_embedding(h), q, old))
    conserved = dual.num_edges == q.num_edges
    double = len(dual.dual_faces()) == q.n
    payload = {
        "n": args.n,
        "primal_vertices": q.n,
        "primal_edges": q.num_edges,
        "dual_vertices": dual.num_vertices,
        "dual_edges": dual.num_edges,
        "dual_density": round(dual.density, 6),
        "dual_density_limit": str(dual_density_limit()),
        "edge_conservation": conserved,
        "double_dual_faces_match": double,
        "planarity_test": planarity_test(q),
        "dual_edge_list": [list(e) for e in dual.edges],
    }
    return payload, conserved and double and payload["planarity_test"]


def cmd_lemma(args) -> tuple[dict, bool]:
    if args.id == "L2":
        if args.n < 2:
            raise UsageError("L2 needs --n >= 2")
        ok = verify_endrow_transfer(args.n)
        method = "enumeration" if args.n <= 3 else "refutation"
        return {"lemma": "L2", "n": args.n, "method": method, "holds": ok}, ok
    if args.n < 4:
        raise UsageError("L8 needs --n >= 4")
    checks = extension_checks(args.n)
    return {"lemma": "L8", "n": args.n, "checks": checks}, all(checks.values())


# -- parsing --------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--budget-secs", type=float, default=600.0, help="time budget (default 600)")
    common.add_argument(
        "--workers",
        type=_positive,
        default=None,
        help=f"worker processes for edge sweeps (default ${WORKERS_ENV} or 1)",
    )
    common.add_argument("--indent", type=int, default=None, help="pretty-print the JSON")

    p = _Parser(prog="planar4crit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn: Callable, needs_n: bool = True, min_n: int = 4):
        sp = sub.add_parser(name, parents=[common])
        if needs_n:
            sp.add_argument("--n", type=int, required=True)
        sp.set_defaults(fn=fn, min_n=min_n)
        return sp

    for name, fn in (("gen", cmd_gen), ("extract", cmd_extract)):
        sp = add(name, fn)
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=FORMATS, default="graph6")
    add("verify-gadgets", cmd_verify_gadgets, needs_n=False)
    add("chi", cmd_chi)
    sp = add("critical", cmd_critical)
    scope = sp.add_mutually_exclusive_group()
    scope.add_argument("--all", action="store_true")
    scope.add_argument("--guaranteed", action="store_true")
    sp = add("density", cmd_density, needs_n=False)
    sp.add_argument("--from", dest="from_n", type=int, required=True)
    sp.add_argument("--to", dest="to_n", type=int, required=True)
    add("dual", cmd_dual)
    sp = add("lemma", cmd_lemma, min_n=2)
    sp.add_argument("--id", choices=("L2", "L8"), required=True)
    return p


def _parameters(args) -> dict:
    skip = {"fn", "min_n", "command", "indent"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "n", None) is not None and args.n < args.min_n:
            raise UsageError(f"--n must be at least {args.min_n}")
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"planar4crit: error: {exc}", file=sys.stderr)
        return 2
    if args.workers is None:
        args.workers = default_workers()
    start = time.monotonic()
    try:
        payload, ok = args.fn(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"planar4crit: error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        payload, ok = {"error": "budget exceeded", "detail": str(exc)}, False
    except (AssertionError, ValueError) as exc:
        payload, ok = {"error": type(exc).__name__, "detail": str(exc)}, False
    envelope = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "parameters": _parameters(args),
        "artifact_version": __version__,
        "timing": {"seconds": round(time.monotonic() - start, 3)},
        "payload": payload,
        "verdict": "pass" if ok else "fail",
    }
    print(json.dumps(envelope, indent=args.indent))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
