"""Command-line entry point: ``geocycles <verb> ...``.

Exit codes: 0 ok, 2 input error, 3 budget or certification failure,
4 property violation found by a check verb.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path as FsPath
from typing import Optional

from . import experiments as ex
from .decompose import geodetic_generating_set, short_decomposition
from .errors import GeoCyclesError, InputError
from .families import family_from_spec, ladder
from .geodesy import all_pairs, find_shortcut
from .graph import Cycle, Graph, parse_length, set_length
from .io import dumps, fraction_str, graph_from_json, to_dot, truncation_to_json
from .pipeline import (
    empty_stream,
    generate_gamma,
    ladder_square,
    rung_element,
    single_circuit,
    verify_stage_geodesy,
    verify_thinness,
)
from .truncation import DEFAULT_HORIZON, Hierarchy, build_truncation, metric_diagnostic

VERBS = ("distances", "geodetic-check", "decompose", "truncate", "pipeline", "experiment", "census", "diagnose")
EXPERIMENTS = ("subdivided-ladder", "divergence", "peripheral", "span")



def _approx(x) -> str:
    """Short text form: exact when the denominator is small, else a decimal."""
    x = Fraction(x)
    return fraction_str(x) if x.denominator <= 10**6 else f"{float(x):.6g}"


def _rational(text: str) -> Fraction:
    try:
        return parse_length(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="geocycles", description="Geodetic cycles in graphs with rational lengths.")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("input", nargs="?", help="graph JSON file, family spec (file, inline JSON or name[:lengths]) or experiment name")
    p.add_argument("--cycle", help="comma-separated edge ids of the cycle to check or decompose")
    p.add_argument("--eps", type=_rational, help="decompose into geodetic cycles of length at most 5*eps")
    p.add_argument("--trace", action="store_true", help="include the decomposition trace")
    p.add_argument("--index", type=int, default=2, help="truncation index for 'truncate'")
    p.add_argument("--stream", default="rung", help="pipeline element: rung, square:N or empty")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--host-depth", type=int, help="deepest truncation for the pipeline (default depth+4)")
    p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    p.add_argument("--tol", type=_rational, default=Fraction(0))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=200)
    p.add_argument("--format", choices=("json", "dot", "text"), default="text")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _read_graph(arg: Optional[str]) -> tuple[Graph, dict]:
    if not arg:
        raise InputError("a graph JSON file is required")
    text = arg if arg.lstrip().startswith("{") else _read(arg)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    return graph_from_json(doc), doc


def _read(path: str) -> str:
    try:
        return FsPath(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _family(arg: Optional[str]):
    if not arg:
        raise InputError("a family spec is required")
    s = arg.strip()
    if not s.startswith("{") and not os.path.exists(s):
        name, _, lengths = s.partition(":")
        return family_from_spec({"family": name, "lengths": lengths or "unit"})
    return family_from_spec(s)


def _cycle(g: Graph, args, doc: dict) -> Cycle:
    if args.cycle:
        ids = [x.strip() for x in args.cycle.split(",") if x.strip()]
    elif "cycle" in doc:
        ids = [str(x) for x in doc["cycle"]]
    else:
        raise InputError("give the cycle with --cycle or a 'cycle' field in the document")
    return Cycle.from_edges(g, ids)


def _cycle_doc(g: Graph, c: Cycle) -> dict:
    return {"edges": list(c.edges), "vertices": list(c.vertices), "length": c.length(g)}


def cmd_distances(args):
    g, _ = _read_graph(args.input)
    o = all_pairs(g)
    table = {u: {v: o.dist(u, v) for v in g.vertices if o.reachable(u, v)} for u in g.vertices}
    lines = [f"{u} {v} {fraction_str(d)}" for u in g.vertices for v, d in table[u].items()]
    return {"distances": table}, lines, None, 0


def cmd_geodetic_check(args):
    g, doc = _read_graph(args.input)
    c = _cycle(g, args, doc)
    sc = find_shortcut(g, c)
    report = {"cycle": _cycle_doc(g, c), "geodetic": sc is None}
    if sc is not None:
        report["shortcut"] = {
            "from": sc.x,
            "to": sc.y,
            "edges": list(sc.path.edges),
            "length": sc.length,
            "arcs": list(sc.arcs),
        }
    text = [f"geodetic: {'true' if sc is None else 'false'}"]
    if sc is not None:
        text.append(f"shortcut {sc.x}-{sc.y} via {','.join(sc.path.edges)} length {fraction_str(sc.length)}")
    dot = to_dot(g, c.edges if sc is None else sc.path.edges)
    return report, text, dot, 0 if sc is None else 4


def cmd_decompose(args):
    g, doc = _read_graph(args.input)
    c = _cycle(g, args, doc)
    if args.eps is not None:
        dec = short_decomposition(g, c, args.eps, trace=args.trace)
    else:
        dec = geodetic_generating_set(g, c.edges, trace=args.trace)
    report = {
        "input": sorted(dec.input),
        "bound": dec.bound,
        "parts": [_cycle_doc(g, p) for p in dec.parts],
    }
    if args.trace:
        report["trace"] = dec.trace
    text = [f"{len(dec.parts)} geodetic parts, bound {fraction_str(dec.bound)}"]
    text += [f"  {','.join(p.edges)} length {fraction_str(p.length(g))}" for p in dec.parts]
    return report, text, to_dot(g, c.edges), 0


def cmd_truncate(args):
    f = _family(args.input)
    t = build_truncation(f, args.index, args.tol, args.horizon)
    report = truncation_to_json(t)
    text = [
        f"truncation {t.index}: |S_i|={len(t.inner)} |S_i+1|={len(t.ball)} "
        f"tilde edges={len(t.tilde.edges)} outer edges={len(t.outer)}"
    ]
    text += [f"  {o.id}: [{_approx(o.length.lo)}, {_approx(o.length.hi)}]" for o in t.outer.values()]
    return report, text, to_dot(t.hat, truncation=t, name=f"hat{t.index}"), 0


def _stream(spec: str, f):
    kind, _, arg = spec.partition(":")
    shape = f.params.get("family")
    if kind == "empty":
        return empty_stream()
    if shape not in ("ladder", "subdivided_ladder"):
        raise InputError("rung and square streams need a ladder family")
    sub = shape == "subdivided_ladder"
    if kind == "rung":
        return rung_element(sub)
    if kind == "square":
        try:
            return single_circuit(ladder_square(int(arg), sub))
        except ValueError:
            raise InputError(f"bad square index in {spec!r}") from None
    raise InputError(f"unknown stream {spec!r}")


def cmd_pipeline(args):
    f = _family(args.input)
    h = Hierarchy(f, tol=args.tol, horizon=args.horizon)
    rep = generate_gamma(h, _stream(args.stream, f), args.depth, args.host_depth)
    bad = verify_stage_geodesy(h, rep)
    stages = []
    text = []
    for st in rep.stages:
        lengths = [set_length(h.at(rep.host_depth).hat, ch.deepest.edges) for ch in st.chains]
        stages.append(
            {
                "index": st.index,
                "bound": st.bound,
                "epsilon": h.eps(st.index),
                "circles": [list(ch.deepest.edges) for ch in st.chains],
                "lengths": lengths,
                "residual_on_tilde": st.residual_on_tilde,
            }
        )
        text.append(f"stage {st.index}: {len(st.chains)} circles, bound {_approx(st.bound)}, residual {st.residual_on_tilde}")
    report = {"depth": rep.depth, "host_depth": rep.host_depth, "stages": stages, "non_geodetic": bad}
    first_rung = "R1" if "ladder" in f.name else None
    if first_rung:
        th = verify_thinness(h, rep, first_rung)
        report["thinness"] = {"edge": th.edge, "last_stage": th.last_stage, "cutoff": th.cutoff, "ok": th.ok}
    return report, text, None, 0 if not bad else 4


def cmd_census(args):
    g, _ = _read_graph(args.input)
    entries = ex.geodetic_census(g, jobs=args.jobs)
    rows = [
        {**_cycle_doc(g, e.cycle), "geodetic": e.geodetic, "peripheral": ex.is_peripheral(g, e.cycle)}
        for e in entries
    ]
    text = [f"{len(rows)} cycles, {sum(r['geodetic'] for r in rows)} geodetic"]
    text += [
        f"  {','.join(r['edges'])} {'G' if r['geodetic'] else '-'}{'P' if r['peripheral'] else '-'}" for r in rows
    ]
    witness = [x for e in entries if not e.geodetic for x in e.cycle.edges]
    return {"cycles": rows}, text, to_dot(g, witness), 0


def cmd_diagnose(args):
    f = _family(args.input)
    d = metric_diagnostic(f, args.depth, horizon=args.horizon)
    report = {"family": f.name, "verdict": d.verdict, "radius": d.radius, "epsilon": {str(i): iv for i, iv in d.intervals}}
    text = [f"{f.name}: {d.verdict}"]
    for i, iv in d.intervals:
        hi = "inf" if iv.hi is None else _approx(iv.hi)
        text.append(f"  eps_{i} in [{_approx(iv.lo)}, {hi}]")
    return report, text, None, 0


def cmd_experiment(args):
    name = args.input
    if name == "subdivided-ladder":
        rows = []
        for t in ex.subdivided_ladder(args.depth)[2:]:
            rc = ex.rung_census(t)
            rows.append(
                {
                    "index": t.index,
                    "circuits": rc.circuits,
                    "geodetic_circuits": len(rc.geodetic_circuits),
                    "all_contain_first_rung": rc.holds,
                    "outer_geodetic_without_rung": len(rc.outer_geodetic_without_rung),
                }
            )
        dists = {str(n): ex.rung_distance(n) for n in range(2, 7)}
        verdict = metric_diagnostic(family_from_spec({"family": "subdivided_ladder"}), min(args.depth, 10)).verdict
        report = {"rung_distances": dists, "census": rows, "diagnostic": verdict}
        text = [f"rung {n}: distance {fraction_str(d)}" for n, d in dists.items()]
        text += [f"S^{r['index']}: {r['geodetic_circuits']} geodetic circuits, all contain R1: {r['all_contain_first_rung']}" for r in rows]
        text.append(f"diagnostic: {verdict}")
        return report, text, None, 0
    if name == "divergence":
        f = ladder("dyadic_harmonic")
        lower = ex.divergence_probe(f, args.depth, "lower")
        upper = ex.divergence_probe(f, args.depth, "upper")
        return {"depth": args.depth, "lower": lower, "upper": upper}, [
            f"lower ray to depth {args.depth}: {fraction_str(lower)}",
            f"upper ray to depth {args.depth}: {fraction_str(upper)}",
        ], None, 0
    if name in ("peripheral", "span"):
        from . import generators as gen

        graphs = {"k4": gen.k4(), "wheel5": gen.wheel(5), "prism": gen.prism(), "cube": gen.cube()}
        report, text = {}, []
        for key, g in graphs.items():
            if name == "span":
                s = ex.peripheral_span(g)
                report[key] = {"peripheral": s.peripheral, "rank": s.rank, "cyclomatic": s.cyclomatic}
                text.append(f"{key}: rank {s.rank} / cyclomatic {s.cyclomatic}")
            else:
                r = ex.search_peripheral_lengths(g, args.budget, args.seed)
                report[key] = {
                    "seed": r.seed,
                    "evaluations": r.evaluations,
                    "violations": r.best_violations,
                    "lengths": r.lengths,
                    "verified": ex.verify_scheme(g, r.scheme) if r.scheme else False,
                }
                text.append(f"{key}: {r.best_violations} violations after {r.evaluations} evaluations")
        return report, text, None, 0
    raise InputError(f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}")


HANDLERS = {
    "distances": cmd_distances,
    "geodetic-check": cmd_geodetic_check,
    "decompose": cmd_decompose,
    "truncate": cmd_truncate,
    "pipeline": cmd_pipeline,
    "experiment": cmd_experiment,
    "census": cmd_census,
    "diagnose": cmd_diagnose,
}


def run(argv: Optional[list[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    if args.jobs < 1 or args.depth < 0 or args.horizon < 1 or args.tol < 0:
        print("error: --jobs and --horizon must be positive, --depth and --tol non-negative", file=sys.stderr)
        return 2
    try:
        report, text, dot, code = HANDLERS[args.verb](args)
        if args.format == "json":
            out.write(dumps(report))
        elif args.format == "dot":
            if dot is None:
                raise InputError(f"--format dot is not available for {args.verb}")
            out.write(dot)
        else:
            out.write("\n".join(text) + "\n")
        return code
    except GeoCyclesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
