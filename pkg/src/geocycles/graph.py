"""Finite multigraphs with exact rational edge lengths, and GF(2) edge-space algebra.

Edge sets are plain ``frozenset``s of edge ids; the sum of a family is the set of
edges lying in an odd number of its members.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

from .errors import ContractViolation, InputError

EdgeSet = frozenset  # frozenset[str]


def parse_length(value) -> Fraction:
    """Read ``"p/q"``, a decimal string or an int exactly. Floats are rejected."""
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(f"length {value!r} must be given exactly, as 'p/q' or a decimal string")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if not isinstance(value, str):
        raise InputError(f"cannot read length {value!r}")
    text = value.strip()
    try:
        if "/" in text:
            return Fraction(text)
        return Fraction(Decimal(text))
    except (ValueError, ZeroDivisionError, InvalidOperation) as exc:
        raise InputError(f"cannot read length {value!r}") from exc


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    length: Fraction

    def other(self, x: str) -> str:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise ValueError(f"{x} is not an endpoint of {self.id}")

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


class Graph:
    """Immutable finite multigraph. Loops and parallel edges are allowed."""

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge]):
        verts = tuple(dict.fromkeys(vertices))
        edges = tuple(edges)
        vset = frozenset(verts)
        by_id: dict[str, Edge] = {}
        incident: dict[str, list[str]] = {v: [] for v in verts}
        for e in edges:
            if e.id in by_id:
                raise InputError(f"duplicate edge id {e.id!r}")
            if e.u not in vset or e.v not in vset:
                raise InputError(f"edge {e.id!r} has an endpoint outside the vertex set")
            if not isinstance(e.length, Fraction) or e.length <= 0:
                raise InputError(f"edge {e.id!r} needs a positive rational length, got {e.length!r}")
            by_id[e.id] = e
            incident[e.u].append(e.id)
            if not e.is_loop:
                incident[e.v].append(e.id)
        self.vertices = verts
        self.edges = edges
        self._vset = vset
        self._by_id = by_id
        self._incident = {v: tuple(sorted(ids)) for v, ids in incident.items()}

    @classmethod
    def from_tuples(cls, edges: Iterable[tuple], vertices: Iterable[str] = ()) -> "Graph":
        """Build from ``(id, u, v, length)`` tuples; vertices are collected from the edges."""
        es = [Edge(str(i), str(u), str(v), parse_length(ln)) for i, u, v, ln in edges]
        verts = list(vertices)
        for e in es:
            verts += [e.u, e.v]
        return cls(verts, es)

    def __repr__(self) -> str:
        return f"Graph(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    @property
    def vertex_set(self) -> frozenset:
        return self._vset

    @property
    def edge_ids(self) -> frozenset:
        return frozenset(self._by_id)

    def has_vertex(self, v: str) -> bool:
        return v in self._vset

    def has_edge(self, eid: str) -> bool:
        return eid in self._by_id

    def edge(self, eid: str) -> Edge:
        try:
            return self._by_id[eid]
        except KeyError:
            raise InputError(f"unknown edge id {eid!r}") from None

    def length(self, eid: str) -> Fraction:
        return self.edge(eid).length

    def incident(self, v: str) -> tuple[str, ...]:
        """Edge ids at ``v`` in increasing id order (a loop is listed once)."""
        return self._incident[v]

    def neighbors(self, v: str) -> list[tuple[str, str]]:
        return [(eid, self._by_id[eid].other(v)) for eid in self._incident[v]]

    def components(self, removed: Iterable[str] = ()) -> list[frozenset]:
        gone = set(removed)
        seen: set[str] = set()
        comps = []
        for s in self.vertices:
            if s in gone or s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                x = stack.pop()
                for _, y in self.neighbors(x):
                    if y not in gone and y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def edge_subgraph(self, eids: Iterable[str]) -> "Graph":
        es = [self.edge(e) for e in sorted(set(eids))]
        verts = [v for v in self.vertices if any(v in (e.u, e.v) for e in es)]
        return Graph(verts, es)

    def with_lengths(self, lengths: Mapping[str, Fraction]) -> "Graph":
        return Graph(
            self.vertices,
            [Edge(e.id, e.u, e.v, Fraction(lengths.get(e.id, e.length))) for e in self.edges],
        )


@dataclass(frozen=True)
class Path:
    """A path as alternating vertex/edge sequences; ``len(vertices) == len(edges) + 1``."""

    vertices: tuple[str, ...]
    edges: tuple[str, ...]
    length: Fraction

    @property
    def start(self) -> str:
        return self.vertices[0]

    @property
    def end(self) -> str:
        return self.vertices[-1]


@dataclass(frozen=True)
class Cycle:
    """A cycle in canonical form.

    ``edges[k]`` joins ``vertices[k]`` and ``vertices[k+1]`` (indices mod n). The
    rotation starts at the least edge id and the direction puts the smaller of the
    two neighbouring edge ids second, so equal edge sets give equal cycles.
    """

    vertices: tuple[str, ...]
    edges: tuple[str, ...]

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def length(self, g: Graph) -> Fraction:
        return set_length(g, self.edges)

    @classmethod
    def from_edges(cls, g: Graph, eids: Iterable[str]) -> "Cycle":
        eids = set(eids)
        if not eids:
            raise ContractViolation("a cycle needs at least one edge")
        deg: dict[str, list[str]] = defaultdict(list)
        for eid in eids:
            e = g.edge(eid)
            deg[e.u].append(eid)
            deg[e.v].append(eid)
        if any(len(ids) != 2 for ids in deg.values()):
            raise ContractViolation("edge set is not 2-regular, so not a cycle")
        first = min(eids)
        e0 = g.edge(first)
        if e0.is_loop:
            if len(eids) != 1:
                raise ContractViolation("a loop plus further edges is not a cycle")
            return cls((e0.u,), (first,))

        def walk(a: str, b: str) -> tuple[tuple[str, ...], tuple[str, ...]]:
            vs, es = [a], [first]
            prev, cur = first, b
            while cur != a:
                vs.append(cur)
                nxt = deg[cur][0] if deg[cur][1] == prev else deg[cur][1]
                es.append(nxt)
                prev, cur = nxt, g.edge(nxt).other(cur)
            return tuple(vs), tuple(es)

        fwd = walk(e0.u, e0.v)
        if len(fwd[1]) != len(eids):
            raise ContractViolation("edge set is disconnected, so not a single cycle")
        bwd = walk(e0.v, e0.u)
        best = min((fwd, bwd), key=lambda t: (t[1], t[0]))
        return cls(best[0], best[1])

    @classmethod
    def from_vertices(cls, g: Graph, vertices: Sequence[str]) -> "Cycle":
        """Cycle through ``vertices`` in order, using the least-id edge for each step."""
        eids = []
        n = len(vertices)
        for k in range(n):
            a, b = vertices[k], vertices[(k + 1) % n]
            cands = [eid for eid, y in g.neighbors(a) if y == b and eid not in eids]
            if not cands:
                raise InputError(f"no unused edge between {a} and {b}")
            eids.append(cands[0])
        return cls.from_edges(g, eids)


def symmetric_sum(family: Iterable[Iterable[str]]) -> frozenset:
    """Edges lying in an odd number of members of ``family``."""
    return reduce(lambda acc, s: acc ^ frozenset(s), family, frozenset())


def set_length(g: Graph, x: Iterable[str]) -> Fraction:
    return sum((g.length(e) for e in set(x)), Fraction(0))


def is_cycle_space_member(g: Graph, x: Iterable[str]) -> bool:
    parity: dict[str, int] = defaultdict(int)
    for eid in set(x):
        e = g.edge(eid)
        if e.is_loop:
            continue
        parity[e.u] ^= 1
        parity[e.v] ^= 1
    return not any(parity.values())


def decompose_into_circuits(g: Graph, x: Iterable[str]) -> list[Cycle]:
    """Split an even edge set into pairwise edge-disjoint cycles.

    Walks from the least vertex with unused edges, always leaving by the least
    unused edge id, and cuts off a cycle at the first repeated vertex.
    """
    x = frozenset(x)
    if not is_cycle_space_member(g, x):
        raise ContractViolation("edge set has a vertex of odd degree")
    remaining = set(x)
    cycles: list[Cycle] = []
    walk_v: list[str] = []
    walk_e: list[str] = []
    while remaining:
        if not walk_v:
            start = min(v for eid in remaining for v in (g.edge(eid).u, g.edge(eid).v))
            walk_v, walk_e = [start], []
        cur = walk_v[-1]
        in_walk = set(walk_e)
        eid = next(e for e in g.incident(cur) if e in remaining and e not in in_walk)
        nxt = g.edge(eid).other(cur)
        walk_e.append(eid)
        if nxt in walk_v:
            k = walk_v.index(nxt)
            closed = walk_e[k:]
            cycles.append(Cycle.from_edges(g, closed))
            remaining.difference_update(closed)
            del walk_v[k + 1 :]
            del walk_e[k:]
            if len(walk_v) == 1 and not any(e in remaining for e in g.incident(walk_v[0])):
                walk_v = []
        else:
            walk_v.append(nxt)
    return cycles
