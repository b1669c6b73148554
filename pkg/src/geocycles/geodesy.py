"""Exact shortest paths, geodetic tests and shortcut extraction on finite graphs."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import ContractViolation, InputError, NoPathError
from .graph import Cycle, Graph, Path


def _dijkstra(g: Graph, source: str) -> dict[str, tuple[Fraction, tuple, tuple]]:
    """Labels ``(dist, edge ids, vertices)`` for every vertex reachable from ``source``.

    Ties are broken by the lexicographically least edge-id sequence; the label
    order is preserved under extension because all lengths are positive.
    """
    if not g.has_vertex(source):
        raise InputError(f"unknown vertex {source!r}")
    done: dict[str, tuple[Fraction, tuple, tuple]] = {}
    heap = [(Fraction(0), (), source, (source,))]
    while heap:
        d, es, v, vs = heapq.heappop(heap)
        if v in done:
            continue
        done[v] = (d, es, vs)
        for eid, w in g.neighbors(v):
            if w not in done:
                heapq.heappush(heap, (d + g.length(eid), es + (eid,), w, vs + (w,)))
    return done


def shortest_path(g: Graph, x: str, y: str) -> Path:
    labels = _dijkstra(g, x)
    if not g.has_vertex(y):
        raise InputError(f"unknown vertex {y!r}")
    if y not in labels:
        raise NoPathError(f"no path between {x} and {y}")
    d, es, vs = labels[y]
    return Path(vs, es, d)


class DistanceOracle:
    """All-pairs exact distances with one witness path per ordered pair."""

    def __init__(self, g: Graph, labels: dict[str, dict]):
        self.graph = g
        self._labels = labels

    def dist(self, x: str, y: str) -> Fraction:
        try:
            return self._labels[x][y][0]
        except KeyError:
            raise NoPathError(f"no path between {x} and {y}") from None

    def path(self, x: str, y: str) -> Path:
        self.dist(x, y)
        d, es, vs = self._labels[x][y]
        return Path(vs, es, d)

    def reachable(self, x: str, y: str) -> bool:
        return y in self._labels.get(x, {})


def all_pairs(g: Graph) -> DistanceOracle:
    return DistanceOracle(g, {v: _dijkstra(g, v) for v in g.vertices})


def _oracle_for(g: Graph, oracle: Optional[DistanceOracle]) -> DistanceOracle:
    if oracle is None:
        return all_pairs(g)
    if oracle.graph is not g and oracle.graph != g:
        raise ContractViolation("oracle was built for a different graph")
    return oracle


class CycleArcs:
    """Positions and prefix lengths along a cycle, for arc-length queries."""

    def __init__(self, g: Graph, c: Cycle):
        for eid in c.edges:
            g.edge(eid)
        self.graph = g
        self.cycle = c
        self.pos = {v: k for k, v in enumerate(c.vertices)}
        pre = [Fraction(0)]
        for eid in c.edges:
            pre.append(pre[-1] + g.length(eid))
        self.prefix = pre
        self.total = pre[-1]

    def arcs(self, a: str, b: str) -> tuple[Fraction, Fraction]:
        p, q = sorted((self.pos[a], self.pos[b]))
        inner = self.prefix[q] - self.prefix[p]
        return inner, self.total - inner

    def arc_paths(self, a: str, b: str) -> tuple[Path, Path]:
        """The two a-b paths along the cycle; the first runs forward from ``a``."""
        c = self.cycle
        n = len(c.vertices)
        p, q = self.pos[a], self.pos[b]

        def forward(i: int, j: int) -> Path:
            vs, es = [c.vertices[i]], []
            k = i
            while k != j:
                es.append(c.edges[k])
                k = (k + 1) % n
                vs.append(c.vertices[k])
            return Path(tuple(vs), tuple(es), sum((self.graph.length(e) for e in es), Fraction(0)))

        one = forward(p, q)
        other = forward(q, p)
        other = Path(other.vertices[::-1], other.edges[::-1], other.length)
        return one, other


def is_geodetic(g: Graph, c: Cycle, oracle: Optional[DistanceOracle] = None) -> bool:
    oracle = _oracle_for(g, oracle)
    arcs = CycleArcs(g, c)
    vs = c.vertices
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            if min(arcs.arcs(vs[i], vs[j])) != oracle.dist(vs[i], vs[j]):
                return False
    return True


@dataclass(frozen=True)
class Shortcut:
    x: str
    y: str
    path: Path
    arcs: tuple[Fraction, Fraction]

    @property
    def length(self) -> Fraction:
        return self.path.length


def find_shortcut(g: Graph, c: Cycle, oracle: Optional[DistanceOracle] = None) -> Optional[Shortcut]:
    """A path internally disjoint from ``c``, strictly shorter than both cycle arcs
    between its endpoints, or ``None`` when ``c`` is geodetic.

    Vertex pairs are scanned by increasing gap (shorter arc minus distance); the
    witness path of the first pair with positive gap is cut at its vertices on
    ``c`` and the first resulting segment that beats both arcs is returned.
    """
    oracle = _oracle_for(g, oracle)
    arcs = CycleArcs(g, c)
    vs = c.vertices
    candidates = []
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            gap = min(arcs.arcs(vs[i], vs[j])) - oracle.dist(vs[i], vs[j])
            if gap > 0:
                candidates.append((gap, i, j))
    if not candidates:
        return None
    _, i, j = min(candidates)
    witness = oracle.path(vs[i], vs[j])
    on_cycle = [k for k, v in enumerate(witness.vertices) if v in arcs.pos]
    cycle_edges = c.edge_set
    for a, b in zip(on_cycle, on_cycle[1:]):
        seg_edges = witness.edges[a:b]
        if len(seg_edges) == 1 and seg_edges[0] in cycle_edges:
            continue
        seg = Path(witness.vertices[a : b + 1], seg_edges, sum((g.length(e) for e in seg_edges), Fraction(0)))
        two = arcs.arcs(seg.start, seg.end)
        if seg.length < min(two):
            return Shortcut(seg.start, seg.end, seg, two)
    raise AssertionError("shortest path beats the cycle but no segment does")
