from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geocycles.decompose import geodetic_decomposition, geodetic_generating_set, short_decomposition
from geocycles.errors import CertificationError, ContractViolation
from geocycles.families import ladder, subdivided_ladder_family
from geocycles.geodesy import all_pairs
from geocycles.graph import Cycle, Graph, symmetric_sum
from geocycles.truncation import Hierarchy

from conftest import small_graphs, unit_k4
from oracles import brute_cycles, brute_geodetic, floyd


def _check(g, c, dec, ref):
    assert symmetric_sum(p.edge_set for p in dec.parts) == c.edge_set
    for p in dec.parts:
        assert brute_geodetic(g, p.edge_set, ref)


def test_geodetic_input_is_returned_whole():
    g = Graph.from_tuples([(f"e{k}", k, (k + 1) % 6, 1) for k in range(6)])
    c = Cycle.from_edges(g, g.edge_ids)
    dec = geodetic_decomposition(g, c)
    assert dec.parts == [c] and dec.bound == 6


def test_k4_square_splits_into_two_triangles():
    g = unit_k4()
    c = Cycle.from_edges(g, ("ab", "bc", "cd", "da"))
    dec = geodetic_decomposition(g, c, trace=True)
    assert len(dec.parts) == 2
    assert all(len(p) == 3 and p.length(g) == 3 <= 4 for p in dec.parts)
    _check(g, c, dec, floyd(g))
    assert dec.trace[0]["shortcut"] in (["ac"], ["bd"])


def test_long_ladder_boundary_parts_keep_first_rung():
    h = Hierarchy(subdivided_ladder_family("unit"))
    t = h.at(8)
    for k in (2, 3, 4):
        vs = [f"x{n}" for n in range(1, k + 1)] + [f"r{k}.{j}" for j in range(1, 2 * k)]
        vs += [f"y{n}" for n in range(k, 0, -1)]
        c = Cycle.from_vertices(t.hat, vs)
        dec = geodetic_decomposition(t.hat, c)
        assert dec.parts and all("R1" in p.edge_set for p in dec.parts)


@settings(max_examples=80, deadline=None)
@given(small_graphs(max_vertices=9, max_extra=4))
def test_every_cycle_decomposes(g):
    o = all_pairs(g)
    ref = floyd(g)
    cycles = brute_cycles(g)
    for es in cycles:
        c = Cycle.from_edges(g, es)
        dec = geodetic_decomposition(g, c, o)
        _check(g, c, dec, ref)
        assert all(p.length(g) <= c.length(g) for p in dec.parts)
        assert dec.split_depth <= len(cycles)


def test_generating_set_edge_cases():
    g = unit_k4()
    assert geodetic_generating_set(g, set()).parts == []
    tri = frozenset({"ab", "bc", "ac"})
    assert [p.edge_set for p in geodetic_generating_set(g, tri).parts] == [tri]
    with pytest.raises(ContractViolation):
        geodetic_generating_set(g, {"ab"})


@settings(max_examples=50, deadline=None)
@given(small_graphs(max_vertices=10, max_extra=5), st.randoms(use_true_random=False))
def test_generating_set_of_random_even_subgraph(g, rnd):
    x = symmetric_sum(c for c in brute_cycles(g) if rnd.random() < 0.4)
    dec = geodetic_generating_set(g, x)
    assert dec.total() == x
    ref = floyd(g)
    assert all(brute_geodetic(g, p.edge_set, ref) for p in dec.parts)


def test_short_decomposition_short_geodetic_input():
    g = unit_k4()
    tri = Cycle.from_edges(g, ("ab", "bc", "ac"))
    assert short_decomposition(g, tri, Fraction(1)).parts == [tri]


def test_short_decomposition_rejects_long_edge():
    g = Graph.from_tuples([("long", "a", "b", 10), ("s1", "a", "m", "1/2"), ("s2", "m", "b", "1/2")])
    c = Cycle.from_edges(g, g.edge_ids)
    with pytest.raises(CertificationError):
        short_decomposition(g, c, Fraction(1), c_part={"long"})
    with pytest.raises(ContractViolation):
        short_decomposition(g, c, Fraction(1, 4), c_part={"long"})


def test_short_decomposition_reports_bad_epsilon():
    g = unit_k4()
    c = Cycle.from_edges(g, ("ab", "bc", "cd", "da"))
    with pytest.raises(CertificationError):
        short_decomposition(g, c, Fraction(1, 2))


def test_hub_wheel_cut_into_short_triangles():
    n = 12
    t = [(f"r{k}", f"v{k}", f"v{(k + 1) % n}", 1) for k in range(n)]
    t += [(f"s{k}", "hub", f"v{k}", 1) for k in range(n)]
    g = Graph.from_tuples(t)
    rim = Cycle.from_edges(g, {f"r{k}" for k in range(n)})
    dec = short_decomposition(g, rim, Fraction(2), trace=True)
    assert dec.bound == 10
    assert all(p.length(g) <= 10 for p in dec.parts)
    assert dec.total() == rim.edge_set
    assert dec.trace


def test_nst_ladder_boundary_cycle_within_five_eps():
    h = Hierarchy(ladder("nst"))
    t = h.at(4)
    eps = h.eps(1).hi
    vs = [f"x{n}" for n in range(1, 7)] + [f"y{n}" for n in range(5, 0, -1)]
    c = Cycle.from_vertices(t.hat, vs)
    assert any(t.is_outer(e) for e in c.edges)
    dec = short_decomposition(t.hat, c, eps)
    ref = floyd(t.hat)
    _check(t.hat, c, dec, ref)
    assert all(p.length(t.hat) <= 5 * eps for p in dec.parts)


def _planar_grid(w: int, h: int, rng: random.Random) -> Graph:
    t = []
    for x in range(w):
        for y in range(h):
            if x + 1 < w:
                t.append((f"h{x}.{y}", f"{x}.{y}", f"{x + 1}.{y}", Fraction(rng.randint(1, 3))))
            if y + 1 < h:
                t.append((f"v{x}.{y}", f"{x}.{y}", f"{x}.{y + 1}", Fraction(rng.randint(1, 3))))
    return Graph.from_tuples(t)


@pytest.mark.parametrize("seed", range(6))
def test_short_decomposition_on_grid_boundaries(seed):
    rng = random.Random(seed)
    g = _planar_grid(5, 4, rng)
    ref = floyd(g)
    border = [f"{x}.0" for x in range(5)] + [f"4.{y}" for y in range(1, 4)]
    border += [f"{x}.3" for x in range(3, -1, -1)] + [f"0.{y}" for y in range(2, 0, -1)]
    c = Cycle.from_vertices(g, border)
    eps = max(ref[a, b] for a in g.vertices for b in g.vertices)
    dec = short_decomposition(g, c, eps)
    _check(g, c, dec, ref)
    assert all(p.length(g) <= 5 * eps for p in dec.parts)
