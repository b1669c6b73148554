"""The ten acceptance criteria, each at its stated tolerance.

Every test prints one ``criterion N: PASS|FAIL`` line, and the lines are
repeated in the terminal summary.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

import pytest

from geocycles.decompose import geodetic_decomposition
from geocycles.experiments import (
    all_cycles,
    divergence_probe,
    geodetic_census,
    peripheral_span,
    rung_census,
    rung_distance,
    search_peripheral_lengths,
    subdivided_ladder,
    verify_scheme,
)
from geocycles.families import ladder, strip, subdivided_ladder_family
from geocycles.geodesy import all_pairs, is_geodetic
from geocycles.generators import k4, prism, random_connected_graph, wheel
from geocycles.graph import symmetric_sum
from geocycles.pipeline import (
    check_chain,
    generate_gamma,
    ladder_square,
    rung_element,
    single_circuit,
    verify_stage_geodesy,
    verify_thinness,
)
from geocycles.truncation import Hierarchy, ball, metric_diagnostic, restrict

from conftest import ACCEPTANCE_LINES
from oracles import brute_geodetic, floyd


def report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def _decomposition_suite(unit: bool, seed: int) -> tuple[int, int, list[str]]:
    rng = random.Random(seed)
    graphs = cycles = 0
    problems: list[str] = []
    while graphs < 200:
        g = random_connected_graph(rng, rng.randint(2, 12), rng.randint(1, 9), unit=unit)
        dist = floyd(g)
        oracle = all_pairs(g)
        graphs += 1
        for c in all_cycles(g):
            cycles += 1
            dec = geodetic_decomposition(g, c, oracle)
            if symmetric_sum(p.edge_set for p in dec.parts) != c.edge_set:
                problems.append(f"graph {graphs}: parts do not sum to {sorted(c.edge_set)}")
            for p in dec.parts:
                if not brute_geodetic(g, p.edge_set, dist):
                    problems.append(f"graph {graphs}: part {sorted(p.edge_set)} not geodetic")
                if p.length(g) > c.length(g):
                    problems.append(f"graph {graphs}: part longer than input")
    return graphs, cycles, problems


def test_criterion_1_decomposition_random_rational():
    t0 = time.perf_counter()
    graphs, cycles, problems = _decomposition_suite(unit=False, seed=2024)
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < 300
    report(1, ok, f"{graphs} graphs, {cycles} cycles, {len(problems)} violations, {elapsed:.1f}s")


def test_criterion_2_decomposition_unit_lengths():
    t0 = time.perf_counter()
    graphs, cycles, problems = _decomposition_suite(unit=True, seed=7)
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < 300
    report(2, ok, f"{graphs} graphs, {cycles} cycles, {len(problems)} violations, {elapsed:.1f}s")


def test_criterion_3_subdivided_ladder():
    dists = {n: rung_distance(n) for n in range(2, 7)}
    dist_ok = all(d == 2 * n - 1 for n, d in dists.items())
    ts = subdivided_ladder(8)
    circuit_ok = True
    literal = 0
    for i in range(2, 9):
        rc = rung_census(ts[i])
        circuit_ok &= rc.holds
        literal += len(rc.outer_geodetic_without_rung)
    verdict = metric_diagnostic(subdivided_ladder_family("unit"), 8).verdict
    ok = dist_ok and circuit_ok and verdict == "REFUTED"
    report(
        3,
        ok,
        f"rung distances {[str(d) for d in dists.values()]}, every geodetic circuit of the hat "
        f"truncations i=2..8 contains R1: {circuit_ok} "
        f"({literal} geodetic cycles through outer edges avoid R1), diagnostic {verdict}",
    )


def _restriction_pairs(h: Hierarchy, top: int):
    for j in range(1, top + 1):
        tj = h.at(j)
        for c in all_cycles(tj.hat):
            for i in range(j):
                yield c, i, j


def test_criterion_4_restriction_shorter():
    families = [ladder("nst"), ladder("unit"), ladder("dyadic_harmonic"),
                subdivided_ladder_family("nst"), subdivided_ladder_family("unit"), strip(2)]
    pairs = violations = 0
    for f in families:
        h = Hierarchy(f)
        for c, i, j in _restriction_pairs(h, 6):
            r = restrict(c, h.at(i))
            pairs += 1
            if r is None:
                continue
            if h.at(i).certified_length(r.edges, "hi") > h.at(j).certified_length(c.edges, "lo"):
                violations += 1
    report(4, pairs >= 500 and violations == 0, f"{pairs} (cycle, i<j) pairs, {violations} violations")


def test_criterion_5_truncation_distances():
    f = ladder("nst")
    h = Hierarchy(f)
    checked = mismatches = 0
    for i in range(9):
        t = h.at(i)
        assert set(t.hat.vertices) <= ball(f, i + 1)
        o = all_pairs(t.hat)
        for u in t.hat.vertices:
            for v in t.hat.vertices:
                checked += 1
                mismatches += o.dist(u, v) != f.distance(u, v)
    report(5, mismatches == 0, f"{checked} vertex pairs over i=0..8, {mismatches} mismatches")


def test_criterion_6_restriction_keeps_geodesy():
    tested = violations = 0
    for f in (ladder("nst"), subdivided_ladder_family("nst"), ladder("unit")):
        h = Hierarchy(f)
        oracles = {i: all_pairs(h.at(i).hat) for i in range(9)}
        for j in range(1, 9):
            tj = h.at(j)
            assert tj.exact
            for entry in geodetic_census(tj.hat, oracle=oracles[j]):
                if not entry.geodetic:
                    continue
                for i in range(j):
                    r = restrict(entry.cycle, h.at(i))
                    if r is None:
                        continue
                    tested += 1
                    violations += not is_geodetic(h.at(i).hat, r, oracles[i])
    report(6, tested > 0 and violations == 0, f"{tested} restrictions checked, {violations} violations")


def test_criterion_7_epsilon():
    nst = [h for h in (Hierarchy(ladder("nst")).eps(i).hi for i in range(11))]
    # index 0 is the whole graph and may tie with index 1
    decreasing = all(a is not None and b is not None and b < a for a, b in zip(nst[1:], nst[2:]))
    below = all(nst[i] < Fraction(2) ** (3 - i) for i in range(11))
    hu = Hierarchy(ladder("unit"))
    unit_lo = [hu.eps(i).lo for i in range(11)]
    ok = decreasing and below and min(unit_lo) >= 1
    report(
        7,
        ok,
        f"NST hi strictly decreasing over i=1..10 {decreasing}, below 2^-(i-3) for i<=10 {below}, "
        f"unit lo min {min(unit_lo)}",
    )


@pytest.mark.parametrize("which", ["square", "rung element"])
def test_criterion_8_pipeline(which):
    h = Hierarchy(subdivided_ladder_family("nst"))
    stream = single_circuit(ladder_square(1, subdivided=True)) if which == "square" else rung_element(True)
    rep = generate_gamma(h, stream, 6, 10)
    residual = symmetric_sum(
        [restrict(c, h.at(10)).edge_set for c in stream.meeting(h, 10)]
        + [ch.deepest.edge_set for st in rep.stages for ch in st.chains]
    )
    residual_ok = all(not residual & h.at(st.index).tilde.edge_ids for st in rep.stages)
    length_ok = True
    for st in rep.stages:
        for ch in st.chains:
            check_chain(ch, h)
            length_ok &= all(ch.at(j).length(h.at(j).hat) <= st.bound for j in range(ch.start, ch.end + 1))
    bad = verify_stage_geodesy(h, rep)
    th = verify_thinness(h, rep, "R1")
    ok = residual_ok and length_ok and not bad and th.ok and th.last_stage is not None
    report(
        8,
        ok,
        f"{which}: residual clear {residual_ok}, lengths within 5 eps {length_ok}, "
        f"{len(bad)} non-geodetic levels, R1 last stage {th.last_stage} < cutoff {th.cutoff}",
    )


def test_criterion_9_divergence():
    f = ladder("dyadic_harmonic")
    lower = divergence_probe(f, 30, "lower")
    upper = [divergence_probe(f, d, "upper") for d in range(1, 31)]
    ok = lower > 3 and all(u < 1 for u in upper)
    report(9, ok, f"lower sum at 30 = {float(lower):.4f}, max upper sum {float(max(upper)):.10f}")


def test_criterion_10_peripheral():
    spans = {name: peripheral_span(g) for name, g in (("K4", k4()), ("W5", wheel(5)), ("prism", prism()))}
    span_ok = all(s.spans for s in spans.values())
    repro = verify = True
    found = 0
    for name, g in (("K4", k4()), ("W5", wheel(5)), ("prism", prism())):
        a = search_peripheral_lengths(g, budget=60, seed=11)
        b = search_peripheral_lengths(g, budget=60, seed=11)
        repro &= a == b
        if a.found:
            found += 1
            verify &= verify_scheme(g, a.scheme)
    ok = span_ok and repro and verify
    ranks = ", ".join(f"{k} {s.rank}/{s.cyclomatic}" for k, s in spans.items())
    report(10, ok, f"rank/cyclomatic {ranks}, search reproducible {repro}, {found}/3 schemes found, schemes re-verify {verify}")
