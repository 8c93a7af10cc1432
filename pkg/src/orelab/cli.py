"""``ore-lab`` command line."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import census as census_mod
from .coloring import chromatic_number, is_k_critical
from .discharge import run_discharging
from .graph import Graph, GraphError, VertexSet, bits, boundary_mask, emit_graph6, ore_degree, parse_graph6
from .ore import generate_4_ore, is_4_ore
from .potential import (
    check_extform,
    critical_complement,
    critical_extensions,
    degree_three_reduction,
    format_scaled,
    is_cocollapsible,
    is_collapsible,
    is_tight_collapsible,
    min_potential,
    potential,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def read_graph(arg: str) -> Graph:
    """A graph6 string, or ``@path`` naming a file whose first non-blank line is one."""
    text = arg
    if arg.startswith("@"):
        try:
            lines = [ln.strip() for ln in Path(arg[1:]).read_text(encoding="utf-8").splitlines()]
        except OSError as exc:
            raise UsageError(f"cannot read {arg[1:]}: {exc.strerror}") from exc
        lines = [ln for ln in lines if ln]
        if not lines:
            raise UsageError(f"{arg[1:]} holds no graph")
        text = lines[0]
    try:
        return parse_graph6(text)
    except GraphError as exc:
        raise UsageError(f"bad graph6 {text!r}: {exc}") from exc


def parse_subset(text: str, g: Graph) -> VertexSet:
    try:
        verts = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"subset must be comma-separated vertex indices, got {text!r}") from exc
    bad = [v for v in verts if not 0 <= v < g.n]
    if bad:
        raise UsageError(f"vertex {bad[0]} out of range for a graph on {g.n} vertices")
    return VertexSet.of(g.n, verts)


def parse_n_values(text: str) -> list[int]:
    """``8`` means 4..8; ``a-b`` an inclusive range; ``a,b,c`` a list."""
    try:
        if "," in text:
            return sorted({int(t) for t in text.split(",")})
        if "-" in text:
            lo, hi = (int(t) for t in text.split("-", 1))
            return list(range(lo, hi + 1))
        return list(range(4, int(text) + 1))
    except ValueError as exc:
        raise UsageError(f"cannot read --n {text!r}") from exc


def emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args) -> int:
    g = read_graph(args.graph)
    cert = is_4_ore(g)
    out = {
        "g6": emit_graph6(g),
        "n": g.n,
        "edges": g.num_edges,
        "chromatic_number": chromatic_number(g),
        "4_critical": is_k_critical(g, 4) if g.n else False,
        "ore_degree": ore_degree(g) if g.num_edges else None,
        "potential": format_scaled(potential(g)),
        "potential_scaled": potential(g),
        "certificate": cert.to_json() if cert else None,
    }
    if args.json:
        emit(out)
    else:
        print(f"graph {out['g6']}: n={g.n}, |E|={g.num_edges}, chi={out['chromatic_number']}")
        print(f"  4-critical: {'yes' if out['4_critical'] else 'no'}")
        print(f"  Ore-degree: {out['ore_degree']}")
        print(f"  potential: {out['potential']} (scaled {out['potential_scaled']})")
        if cert is None:
            print("  4-Ore: no")
        else:
            print(f"  4-Ore: yes, certificate {'LEAF' if cert.is_leaf else json.dumps(cert.to_json())}")
    return EXIT_OK


def cmd_gen_ore(args) -> int:
    if args.max_n < 4:
        raise UsageError("--max-n must be at least 4")
    mode = "random" if args.random else "exhaustive"
    fh = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        for og in generate_4_ore(args.max_n, mode=mode, seed=args.seed, count=args.count):
            fh.write(json.dumps({"g6": emit_graph6(og.graph), "n": og.graph.n,
                                 "certificate": og.certificate.to_json()}, sort_keys=True) + "\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_census(args) -> int:
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = set(checks) - set(census_mod.CHECKS)
    if unknown:
        raise UsageError(f"unknown checks {sorted(unknown)}; choose from {', '.join(census_mod.CHECKS)}")
    n_values = parse_n_values(args.n) if args.n else []
    if args.input is None:
        if not n_values:
            raise UsageError("give --n or --input")
        if max(n_values) > census_mod.BUILTIN_MAX_N:
            raise UsageError(f"built-in enumeration stops at n = {census_mod.BUILTIN_MAX_N}; use --input")
    report = census_mod.run_census(n_values, args.input, checks, jobs=args.jobs)
    if args.report:
        census_mod.write_report(report, args.report)
    if args.json:
        print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    else:
        print(report.summary())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_potential(args) -> int:
    g = read_graph(args.graph)
    out: dict = {"g6": emit_graph6(g)}
    if args.subset is not None:
        r = parse_subset(args.subset, g)
        p = potential(g, r)
        out.update(subset=sorted(r), potential=format_scaled(p), potential_scaled=p)
    else:
        p = potential(g)
        out.update(potential=format_scaled(p), potential_scaled=p)
    if args.min:
        val, wit = min_potential(g)
        out.update(min_potential=format_scaled(val), min_potential_scaled=val, witness=sorted(wit))
    emit(out)
    return EXIT_OK


def cmd_extend(args) -> int:
    g = read_graph(args.graph)
    r = parse_subset(args.subset, g)
    ok = True
    for rec in critical_extensions(g, r, all_extenders=args.all_extenders):
        row = rec.to_json()
        row["extform"] = check_extform(rec)
        ok &= row["extform"]
        emit(row)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_collapse(args) -> int:
    g = read_graph(args.graph)
    r = parse_subset(args.subset, g)
    coll = is_collapsible(g, r)
    co, nontrivial = is_cocollapsible(g, r)
    out: dict = {
        "g6": emit_graph6(g),
        "r": sorted(r),
        "boundary": list(bits(boundary_mask(g, r.mask))),
        "collapsible": coll,
        "tight": is_tight_collapsible(g, r) if coll else False,
        "cocollapsible": co,
        "nontrivial": nontrivial,
    }
    if coll:
        comp = critical_complement(g, r)
        out["complement_g6"] = emit_graph6(comp.graph)
        out["collapsed_vertex"] = comp.collapsed
    emit(out)
    if args.explain and len(r) >= 4:
        for rec in critical_extensions(g, r):
            emit(rec.to_json())
    return EXIT_OK


def cmd_discharge(args) -> int:
    g = read_graph(args.graph)
    res = run_discharging(g)
    for line in res.transcript_lines():
        print(line)
    emit({
        "g6": emit_graph6(g),
        "initial_scaled": list(res.initial.charges),
        "final_scaled": list(res.final.charges),
        "total_scaled": res.final.total,
        "rule_i_rounds": res.rule_i_rounds,
    })
    return EXIT_OK if res.final.total == res.initial.total else EXIT_FAIL


def cmd_reduce(args) -> int:
    g = read_graph(args.graph)
    for v in (args.v, args.u1, args.u2):
        if not 0 <= v < g.n:
            raise UsageError(f"vertex {v} out of range for a graph on {g.n} vertices")
    emit(degree_three_reduction(g, args.v, args.u1, args.u2).to_json())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ore-lab", description="4-critical graphs, Ore-compositions and potentials.")
    sub = p.add_subparsers(dest="command", required=True)
    graph_help = "graph6 string, or @FILE"

    s = sub.add_parser("check", help="criticality, Ore-degree, potential and 4-Ore certificate of one graph")
    s.add_argument("graph", help=graph_help)
    s.add_argument("--json", action="store_true", help="print one JSON object")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("gen-ore", help="emit 4-Ore graphs with certificates as JSON lines")
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--random", action="store_true", help="random compositions instead of exhaustive generation")
    s.add_argument("--count", type=int, default=10, help="number of random graphs (default 10)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--output", help="write here instead of stdout")
    s.set_defaults(func=cmd_gen_ore)

    s = sub.add_parser("census", help="enumerate or ingest graphs and verify the theorems on 4-critical ones")
    s.add_argument("--n", help="N (meaning 4..N), A-B, or a comma list")
    s.add_argument("--input", help="graph6 file to scan instead of the built-in enumeration")
    s.add_argument("--checks", default=",".join(census_mod.CHECKS), help="comma list (default: all)")
    s.add_argument("--jobs", type=int, default=census_mod.default_jobs(), help="worker processes (default $ORE_LAB_JOBS or 1)")
    s.add_argument("--report", help="write the JSON report here")
    s.add_argument("--json", action="store_true", help="print the JSON report instead of the summary")
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("potential", help="p(R), p(G) and the minimum potential")
    s.add_argument("graph", help=graph_help)
    s.add_argument("--subset", help="comma-separated vertices of R (default: all of V)")
    s.add_argument("--min", action="store_true", help="also report P(G) and a minimiser")
    s.set_defaults(func=cmd_potential)

    s = sub.add_parser("extend", help="critical extensions of R as JSON lines")
    s.add_argument("graph", help=graph_help)
    s.add_argument("--subset", required=True)
    s.add_argument("--all-extenders", action="store_true", help="every 4-critical subgraph, not just one per colouring")
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("collapse", help="collapsible / tight / cocollapsible verdicts and the critical complement")
    s.add_argument("graph", help=graph_help)
    s.add_argument("--subset", required=True)
    s.add_argument("--explain", action="store_true", help="also print the critical extensions of R")
    s.set_defaults(func=cmd_collapse)

    s = sub.add_parser("discharge", help="discharging transcript (JSON lines) and final charges")
    s.add_argument("graph", help=graph_help)
    s.set_defaults(func=cmd_discharge)

    s = sub.add_parser("reduce", help="degree-three reduction record")
    s.add_argument("graph", help=graph_help)
    s.add_argument("--v", type=int, required=True)
    s.add_argument("--u1", type=int, required=True)
    s.add_argument("--u2", type=int, required=True)
    s.set_defaults(func=cmd_reduce)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be positive")
    try:
        return args.func(args)
    except (UsageError, GraphError) as exc:
        print(f"ore-lab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
