"""Command-line front end.

Every verb reads a graph file (``--graph``) and a sink name (``--q``) and
writes JSON with sorted keys, or plain text with ``--format text``.  Exit
status is 0 on success, 1 on bad input and 2 when a verification fails.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Sequence

from . import cells, divisors, graph, ideals, oracle
from .cells import CellError, Report
from .divisors import DivisorError
from .graph import GraphError
from .ideals import Binomial, IdealError, Monomial
from .oracle import OracleError

VERBS = ("gens", "betti", "resolution", "reduce", "greens", "trees", "facets", "dual", "verify")
IDEALS = ("IG", "MG", "JG", "OG")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _mono(m: Monomial) -> dict:
    return {"exponents": m.exponent_map(), "string": str(m)}


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


def _load(args) -> tuple[graph.Multigraph, int]:
    try:
        with open(args.graph, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise GraphError(f"cannot read graph file {args.graph}: {exc.strerror}") from None
    G = graph.parse_graph(text)
    return G, G.index(args.q)


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------

def cmd_gens(G, q, args):
    gs = ideals.cut_generators(G, q, args.ideal, minimal=not args.all_cuts)
    out = []
    for elem in gs.elements:
        if isinstance(elem, Binomial):
            out.append({"lead": _mono(elem.lead), "trail": _mono(elem.trail)})
        else:
            out.append({"lead": _mono(elem), "trail": None})
    data = {"ideal": gs.ideal, "minimal": gs.minimal, "generators": out}
    text = "\n".join(str(e) for e in gs.elements)
    return data, text


def _betti_rows(table):
    return [{"i": i, "j": j, "beta": b} for (i, j), b in table.items()]


def cmd_betti(G, q, args):
    table = cells.graph_betti_table(G, q)
    totals = cells.betti_totals(table)
    data = {"table": _betti_rows(table), "totals": list(totals)}
    lines = [f"beta_{i},{j} = {b}" for (i, j), b in table.items()]
    lines.append("totals " + " ".join(map(str, totals)))
    return data, "\n".join(lines)


def _resolution_json(C: cells.LabeledChainComplex) -> dict:
    diffs = []
    for h in range(1, len(C.diffs)):
        entries = []
        for col, column in enumerate(C.diffs[h]):
            for row in sorted(column):
                for mono, coef in sorted(column[row].items()):
                    entries.append({"row": row, "col": col, "coeff": coef,
                                    "monomial": _mono(mono)})
        diffs.append({"degree": h, "entries": entries})
    return {
        "ideal": C.ideal,
        "ring": C.ring,
        "ranks": C.ranks(),
        "labels": [[_mono(m) for m in lvl] for lvl in C.labels],
        "differentials": diffs,
    }


def _resolution_dot(G, q, C: cells.LabeledChainComplex, c) -> str:
    kind = "bounded" if C.ideal in ("OG", "MG") else "torus"
    cx = cells.build_complex(G, q, kind, c)
    pos = {idx: (h, i) for h, lvl in enumerate(C.cell_ids) for i, idx in enumerate(lvl)}
    lines = ["digraph faces {", "  rankdir=BT;"]
    for h, lvl in enumerate(C.labels):
        for i, m in enumerate(lvl):
            lines.append(f'  c{h}_{i} [label="{m}"];')
    for cell in cx.cells:
        h, i = pos[cell.index]
        seen = set()
        for face, _, _, _ in cell.boundary:
            fh, fi = pos[face]
            if (fh, fi) not in seen:
                seen.add((fh, fi))
                lines.append(f"  c{fh}_{fi} -> c{h}_{i};")
    lines.append("}")
    return "\n".join(lines)


def cmd_resolution(G, q, args):
    C = cells.resolution(G, q, args.ideal, args.c)
    if args.export == "dot":
        dot = _resolution_dot(G, q, C, args.c)
        return None, dot
    data = _resolution_json(C)
    lines = [f"{C.ideal}: ranks {' '.join(map(str, C.ranks()))}"]
    for h, lvl in enumerate(C.labels):
        lines.append(f"degree {h}: " + ", ".join(str(m) for m in lvl))
    return data, "\n".join(lines)


def cmd_reduce(G, q, args):
    if args.divisor is None:
        raise UsageError("reduce needs --divisor")
    D = divisors.parse_divisor(G, args.divisor)
    red = divisors.q_reduce(G, q, D)
    text = divisors.format_divisor(G, red)
    data = {"input": divisors.format_divisor(G, D), "reduced": text,
            "coefficients": {G.vertices[v]: red[v] for v in range(G.n)}}
    return data, text


def cmd_greens(G, q, args):
    j = divisors.greens_matrix(G, q)
    b, theta, lam = divisors.bq_theta(G, q)
    names = G.vertices
    data = {
        "vertices": list(names),
        "greens": [[_frac(x) for x in row] for row in j],
        "b_q": {names[v]: _frac(b[v]) for v in range(G.n)},
        "theta_q": {names[v]: theta[v] for v in range(G.n)},
        "lambda_q": {G.oriented_name(e): lam[e] for e in range(2 * G.m)},
        "pic0_invariants": divisors.equivalence_and_pic(G, q, [0] * G.n, [0] * G.n)[1],
    }
    lines = ["j_q:"] + ["  " + " ".join(_frac(x) for x in row) for row in j]
    lines.append("b_q: " + " ".join(_frac(x) for x in b))
    lines.append("theta_q: " + " ".join(map(str, theta)))
    return data, "\n".join(lines)


def cmd_trees(G, q, args):
    trees = graph.enumerate_spanning_trees(G, q)
    count = graph.count_spanning_trees(G)
    listing = [{"edges": [f"e{k + 1}" for k in T.edge_indices],
                "orientation": sorted(G.oriented_name(e) for e in T.sourced_orientation)}
               for T in trees]
    data = {"count": count, "enumerated": len(trees), "trees": listing}
    lines = [f"count {count}"] + [" ".join(t["orientation"]) for t in listing]
    return data, "\n".join(lines)


def _parse_distinguished(G, text):
    out = ideals.default_distinguished(G)
    if not text:
        return out
    names = {G.oriented_name(e): e for e in range(2 * G.m)}
    for part in text.split(","):
        if ":" not in part:
            raise UsageError(f"malformed distinguished edge {part!r}")
        v, e = (s.strip() for s in part.split(":", 1))
        if e not in names:
            raise IdealError(f"unknown oriented edge {e!r}")
        out[G.index(v)] = names[e]
    return out


def cmd_facets(G, q, args):
    facets = ideals.facets_and_primes(G, q)
    dist = _parse_distinguished(G, args.distinguished)
    L, Lq = ideals.lsop_sets(G, q, dist)
    data = {
        "facets": [sorted(G.oriented_name(e) for e in f.facet) for f in facets],
        "primes": [sorted(G.oriented_name(e) for e in f.orientation) for f in facets],
        "lsop": [ideals.form_str(G, f) for f in L],
        "lsop_q": [ideals.form_str(G, f) for f in Lq],
        "lsop_verified": ideals.lsop_verified(G, q, Lq),
    }
    lines = [" ".join(f) for f in data["facets"]]
    lines.append("L: " + ", ".join(data["lsop"]))
    return data, "\n".join(lines)


def cmd_dual(G, q, args):
    gens = ideals.alexander_dual_gens(G, q)
    data = {"degree_vector": {G.vertices[v]: a for v, a in enumerate(ideals.degree_vector(G, q))},
            "generators": [_mono(m) for m in gens]}
    return data, "\n".join(str(m) for m in gens)


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

def cell_suite(G, q, c=cells.DEFAULT_C) -> list[Report]:
    out = []
    for check in cells.CHECKS:
        out.extend(cells.verify(G, q, check, c))
    for ideal in IDEALS:
        C = cells.resolution(G, q, ideal, c)
        ok = C.length == G.n - 1 or (G.n == 1 and C.length == 0)
        out.append(Report(f"length[{ideal}]", ok, f"length {C.length}, n-1 = {G.n - 1}"))
    return out


def oracle_suite(G, q, seed: int = 0, weights: int = 5, divisors_per_graph: int = 10,
                 radius: int = 3) -> list[Report]:
    rng = random.Random(seed)
    out = []
    for target in ("OG", "MG"):
        want = cells.betti_table(cells.resolution(G, q, target))
        try:
            got = oracle.oracle_betti(G, q, target)
        except OracleError as exc:
            out.append(Report(f"oracle-betti[{target}]", True, str(exc), skipped=True))
            continue
        out.append(Report(f"oracle-betti[{target}]", got == want, f"{got}"))
    ig = ideals.cut_generators(G, q, "IG")
    jg = ideals.cut_generators(G, q, "JG")
    out.append(Report("buchberger[IG,grevlex_q]",
                      oracle.buchberger_verify(ig, oracle.grevlex_q_order(G, q)), ""))
    for k in range(weights):
        order = oracle.random_weight_order(jg.elements, 2 * G.m, rng)
        out.append(Report(f"buchberger[JG,weight{k}]", oracle.buchberger_verify(jg, order),
                          str(order.weight)))
    _, theta, lam = divisors.bq_theta(G, q)
    if ig.elements:
        mg = ideals.minimalize(ideals.cut_generators(G, q, "MG").elements)
        og = ideals.minimalize(ideals.cut_generators(G, q, "OG").elements)
        in_ig = oracle.initial_ideal(ig, theta, ideals.variable_order(G, q))
        in_jg = oracle.initial_ideal(jg, lam)
        out.append(Report("initial[IG,theta]", in_ig is not None and set(in_ig) == set(mg), ""))
        out.append(Report("initial[JG,lambda]", in_jg is not None and set(in_jg) == set(og), ""))
        a = ideals.degree_vector(G, q)
        brute = oracle.brute_alexander_dual(mg, a)
        out.append(Report("alexander-dual", set(brute) == set(ideals.alexander_dual_gens(G, q)), ""))
    bad, outside = [], 0
    for _ in range(divisors_per_graph):
        D = [rng.randint(0, 3) if v != q else rng.randint(-3, 3) for v in range(G.n)]
        red = divisors.q_reduce(G, q, D)
        script = oracle.firing_script(G, q, D, red)
        if max(map(abs, script)) > radius:
            outside += 1
            continue
        if oracle.brute_bq_min(G, q, D, radius) != red:
            bad.append(D)
    out.append(Report("brute-bq-min", not bad, f"mismatches {bad[:3]}, {outside} outside the ball"))
    return out


def _status(r: Report) -> str:
    return "SKIP" if r.skipped else ("PASS" if r.ok else "FAIL")


def cmd_verify(G, q, args):
    reports: list[Report] = []
    if args.check:
        reports = cells.verify(G, q, args.check, args.c)
    else:
        if args.suite in ("all", "cells"):
            reports.extend(cell_suite(G, q, args.c))
        if args.suite in ("all", "oracle"):
            reports.extend(oracle_suite(G, q, args.seed))
    data = {"passed": all(r.ok for r in reports),
            "checks": [{"check": r.check, "ok": r.ok, "skipped": r.skipped, "detail": r.detail}
                       for r in reports]}
    text = "\n".join(f"{_status(r)} {r.check} {r.detail}".rstrip() for r in reports)
    return data, text


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="chipres", description=__doc__.splitlines()[0])
    p.add_argument("verb", choices=VERBS)
    p.add_argument("--graph", required=True, help="graph JSON file")
    p.add_argument("--q", required=True, help="name of the sink vertex")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--ideal", choices=IDEALS)
    p.add_argument("--all-cuts", action="store_true", help="gens: use every cut, not only bonds")
    p.add_argument("--divisor", help='reduce: divisor as "v:coeff,..."')
    p.add_argument("--export", choices=("json", "dot"), default="json")
    p.add_argument("--c", type=Fraction, default=cells.DEFAULT_C, help="slice height in (0,1)")
    p.add_argument("--distinguished", help='facets: in-edges as "v:e1,w:eb2"')
    p.add_argument("--suite", choices=("all", "cells", "oracle"), default="all")
    p.add_argument("--check", choices=cells.CHECKS)
    p.add_argument("--seed", type=int, default=0)
    return p


HANDLERS = {
    "gens": cmd_gens, "betti": cmd_betti, "resolution": cmd_resolution, "reduce": cmd_reduce,
    "greens": cmd_greens, "trees": cmd_trees, "facets": cmd_facets, "dual": cmd_dual,
    "verify": cmd_verify,
}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.verb in ("gens", "resolution") and args.ideal is None:
            raise UsageError(f"{args.verb} needs --ideal")
        if args.export == "dot" and args.verb != "resolution":
            raise UsageError("--export dot only applies to resolution")
        if args.export == "dot" and args.format == "text":
            raise UsageError("--export dot cannot be combined with --format text")
        G, q = _load(args)
        data, text = HANDLERS[args.verb](G, q, args)
    except (UsageError, GraphError, DivisorError, IdealError, CellError, OracleError,
            ValueError) as exc:
        print(f"chipres: error: {exc}", file=stderr)
        return 1
    if data is None or args.format == "text":
        print(text, file=stdout)
    else:
        print(json.dumps(data, sort_keys=True, indent=2), file=stdout)
    if args.verb == "verify" and not data["passed"]:
        return 2
    return 0


def main() -> None:
    sys.exit(run())
