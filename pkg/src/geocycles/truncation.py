"""Locally finite graph families and their finite truncations.

A family is explored lazily from its root. For a radius ``i`` the truncation
consists of the ball ``S_i`` (edge-count radius), the subgraph ``tilde`` on
``S_{i+1}`` of all edges meeting ``S_i``, and ``hat``: ``tilde`` plus one outer
edge for each pair of vertices of ``S_{i+1} - S_i`` lying in a common component
of ``G - S_i``. Outer edges carry the distance between their endpoints in the
whole graph, either from an exact oracle or as a certified interval.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Optional, Union

from .errors import BudgetError, ContractViolation, InputError, NoPathError
from .geodesy import _dijkstra
from .graph import Cycle, Edge, Graph, Path

log = logging.getLogger(__name__)

DEFAULT_HORIZON = int(os.environ.get("GEOCYCLES_HORIZON", "6"))
DEFAULT_MAX_RADIUS = int(os.environ.get("GEOCYCLES_MAX_RADIUS", "120"))

Neighbors = Callable[[str], list]  # vertex -> [(edge id, neighbour, length)]


@dataclass(frozen=True)
class Interval:
    """Closed interval of rationals; ``hi is None`` means unbounded above."""

    lo: Fraction
    hi: Optional[Fraction]

    def __post_init__(self):
        if self.hi is not None and self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "Interval":
        return cls(Fraction(x), Fraction(x))

    @property
    def exact(self) -> bool:
        return self.hi is not None and self.lo == self.hi

    @property
    def bounded(self) -> bool:
        return self.hi is not None

    @property
    def width(self) -> Optional[Fraction]:
        return None if self.hi is None else self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x and (self.hi is None or x <= self.hi)


@dataclass(frozen=True, eq=False)
class GraphFamily:
    """A connected locally finite graph presented by a neighbour function.

    ``tail_length(r)`` bounds the total length of all edges having an endpoint
    at edge-distance more than ``r`` from the root (``None``: no finite bound).
    ``distance`` and ``epsilon``, when given, are exact analytic oracles.
    """

    name: str
    root: str
    neighbors: Neighbors
    distance: Optional[Callable[[str, str], Fraction]] = None
    epsilon: Optional[Callable[[int], Interval]] = None
    finite: bool = False
    tail_length: Optional[Callable[[int], Optional[Fraction]]] = None
    params: dict = field(default_factory=dict)

    def __repr__(self) -> str:
        return f"GraphFamily({self.name!r}, root={self.root!r})"


class Explorer:
    """Breadth-first exploration of a family with cached adjacency."""

    def __init__(self, family: GraphFamily, max_radius: int = DEFAULT_MAX_RADIUS):
        self.family = family
        self.max_radius = max_radius
        self.dist: dict[str, int] = {family.root: 0}
        self.layers: list[list[str]] = [[family.root]]
        self.exhausted = False
        self._adj: dict[str, list[tuple[str, str]]] = {}
        self.edges: dict[str, Edge] = {}

    def adj(self, v: str) -> list[tuple[str, str]]:
        if v not in self._adj:
            out = []
            for eid, w, length in self.family.neighbors(v):
                e = Edge(str(eid), v, str(w), Fraction(length))
                old = self.edges.get(e.id)
                if old is None:
                    if e.length <= 0:
                        raise InputError(f"edge {e.id} has non-positive length")
                    self.edges[e.id] = e
                elif {old.u, old.v} != {e.u, e.v} or old.length != e.length:
                    raise InputError(f"family reports edge {e.id} inconsistently")
                out.append((e.id, e.v))
            self._adj[v] = sorted(out)
        return self._adj[v]

    def grow(self, r: int) -> None:
        if r > self.max_radius and not self.exhausted:
            raise BudgetError(f"exploration radius {r} exceeds budget {self.max_radius}")
        while len(self.layers) <= r and not self.exhausted:
            k = len(self.layers)
            nxt = []
            for v in self.layers[-1]:
                for _, w in self.adj(v):
                    if w not in self.dist:
                        self.dist[w] = k
                        nxt.append(w)
            if nxt:
                self.layers.append(sorted(nxt))
            else:
                self.exhausted = True

    def ball(self, r: int) -> frozenset:
        if r < 0:
            return frozenset()
        self.grow(r)
        return frozenset(v for layer in self.layers[: r + 1] for v in layer)

    def known_within(self, r: int) -> bool:
        """True when the whole (finite) graph lies in the ball of radius ``r``."""
        return self.exhausted and r >= len(self.layers) - 1

    def edge_length(self, eid: str) -> Fraction:
        return self.edges[eid].length

    def induced(self, verts: Iterable[str]) -> Graph:
        verts = sorted(verts)
        vs = set(verts)
        es = {}
        for v in verts:
            for eid, w in self.adj(v):
                if w in vs:
                    es[eid] = self.edges[eid]
        return Graph(verts, [es[k] for k in sorted(es)])


@dataclass
class OutsideComponent:
    """A component of ``G - S_r``, known inside the explored ball ``S_depth``."""

    vertices: frozenset  # explored part
    complete: bool
    attach: dict  # vertex of S_r -> least length of an edge from it into the component
    attach_total: Fraction
    length_bound: Optional[Fraction]  # total edge length inside the component


def outside_components(
    ex: Explorer, r: int, horizon: int = DEFAULT_HORIZON, min_depth: int = 0
) -> tuple[list[OutsideComponent], int]:
    """Components of ``G - S_r`` with an exploration depth at which they are resolved.

    The partition is exact once at most one explored component still reaches the
    exploration frontier (every vertex beyond the frontier connects to the frontier
    outside ``S_r`` along a shortest path to the root). Otherwise the depth grows;
    if the boundary partition stays unchanged for ``horizon`` extra layers it is
    accepted as stable.
    """
    inner = ex.ball(r)
    depth = max(r + 1, min_depth)
    stable_since = None
    last_key = None
    while True:
        ex.grow(depth + 1)
        region = ex.ball(depth) - inner
        comps = _components_of(ex, region)
        frontier = [c for c in comps if not _complete(ex, c, depth)]
        if ex.known_within(depth) or len(frontier) <= 1:
            break
        key = frozenset(frozenset(v for v in c if ex.dist[v] == r + 1) for c in comps)
        if key == last_key:
            if depth - stable_since >= horizon:
                log.info("components of G - S_%d accepted as stable at depth %d", r, depth)
                break
        else:
            last_key, stable_since = key, depth
        depth += 1
    tail = _tail(ex, depth)
    out = []
    for comp in comps:
        complete = _complete(ex, comp, depth)
        inside = Fraction(0)
        seen = set()
        attach: dict[str, Fraction] = {}
        attach_total = Fraction(0)
        for v in sorted(comp):
            for eid, w in ex.adj(v):
                ln = ex.edge_length(eid)
                if w in comp and eid not in seen:
                    seen.add(eid)
                    inside += ln
                elif w in inner:
                    if eid not in seen:
                        seen.add(eid)
                        attach_total += ln
                    attach[w] = min(attach.get(w, ln), ln)
        if complete:
            bound = inside
        else:
            bound = None if tail is None else inside + tail
        out.append(OutsideComponent(frozenset(comp), complete, attach, attach_total, bound))
    return out, depth


def _tail(ex: Explorer, depth: int) -> Optional[Fraction]:
    if ex.known_within(depth):
        return Fraction(0)
    if ex.family.tail_length is None:
        return None
    t = ex.family.tail_length(depth)
    return None if t is None else Fraction(t)


def _components_of(ex: Explorer, region: frozenset) -> list[frozenset]:
    seen: set[str] = set()
    comps = []
    for s in sorted(region):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for _, y in ex.adj(x):
                if y in region and y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def _complete(ex: Explorer, comp: frozenset, depth: int) -> bool:
    return all(ex.dist.get(w, depth + 1) <= depth for v in comp for _, w in ex.adj(v))


def ball(f: GraphFamily, i: int) -> frozenset:
    if i < 0:
        raise ContractViolation("radius must be non-negative")
    return Explorer(f).ball(i)


def _bound_graphs(ex: Explorer, radius: int, horizon: int) -> tuple[Graph, Optional[Graph]]:
    """Ball graph plus one virtual vertex per outside component.

    In the lower graph entering a component costs only the attaching edge, so
    every distance is an under-estimate; in the upper graph crossing a component
    also pays its total edge length, so every path there is realisable in |G|.
    """
    base = ex.induced(ex.ball(radius))
    comps, _ = outside_components(ex, radius, horizon)
    lo_edges = list(base.edges)
    hi_edges = list(base.edges)
    verts = list(base.vertices)
    for k, comp in enumerate(comps):
        hub = f"\x00K{k}"
        verts.append(hub)
        for a, ln in sorted(comp.attach.items()):
            lo_edges.append(Edge(f"\x00lo{k}:{a}", a, hub, ln))
            if comp.length_bound is not None:
                hi_edges.append(Edge(f"\x00hi{k}:{a}", a, hub, ln + comp.length_bound / 2))
    return Graph(verts, lo_edges), Graph(verts, hi_edges)


def distance_estimate(
    f: GraphFamily,
    u: str,
    v: str,
    tol=Fraction(0),
    horizon: int = DEFAULT_HORIZON,
    max_radius: int = DEFAULT_MAX_RADIUS,
    explorer: Optional[Explorer] = None,
) -> Interval:
    """Certified interval for the distance between ``u`` and ``v`` in the whole graph."""
    tol = Fraction(tol)
    ex = explorer or Explorer(f, max_radius)
    if u == v:
        return Interval.point(0)
    radius = 0
    while u not in ex.dist or v not in ex.dist:
        radius += 1
        ex.grow(radius)
        if ex.exhausted and (u not in ex.dist or v not in ex.dist):
            raise NoPathError(f"{u} or {v} is not a vertex of {f.name}")
    radius = max(ex.dist[u], ex.dist[v])
    while True:
        lo_g, hi_g = _bound_graphs(ex, radius, horizon)
        lo = _dijkstra(lo_g, u)[v][0]
        hi_labels = _dijkstra(hi_g, u)
        hi = hi_labels[v][0] if v in hi_labels else None
        if hi is not None and hi - lo <= tol:
            return Interval(lo, hi)
        if ex.known_within(radius):
            raise AssertionError("finite graph but bounds do not meet")
        radius += 1
        if radius > ex.max_radius:
            raise BudgetError(f"distance {u}-{v} not within {tol} by radius {ex.max_radius}")


def _tail_radius(f: GraphFamily, start: int, tol: Fraction, max_radius: int) -> int:
    if f.tail_length is None or f.finite:
        return start
    r = start
    while True:
        t = f.tail_length(r)
        if t is None or t <= tol:
            return r
        r += 1
        if r > max_radius:
            raise BudgetError(f"tail bound not below {tol} by radius {max_radius}")


def epsilon_estimate(
    f: GraphFamily,
    i: int,
    tol=Fraction(1, 2**24),
    horizon: int = DEFAULT_HORIZON,
    radius: Optional[int] = None,
    max_radius: int = DEFAULT_MAX_RADIUS,
    explorer: Optional[Explorer] = None,
) -> Interval:
    """Interval around the largest distance between two points that can be joined
    while avoiding the closed ball ``G[S_{i-1}]``.

    ``hi``: per component of ``G - S_{i-1}``, the total length of its edges and
    attaching edges (an arc inside the region is never longer), maximised.
    ``lo``: the largest lower distance bound between two vertices of
    ``S_i - S_{i-1}`` in one component. Only vertices are sampled for ``lo``.
    ``i = 0`` is allowed and measures the whole graph; its ``lo`` samples the
    first two layers since the root alone gives nothing.
    """
    if i < 0:
        raise ContractViolation("epsilon index must be non-negative")
    if f.epsilon is not None:
        return f.epsilon(i)
    tol = Fraction(tol)
    ex = explorer or Explorer(f, max_radius)
    depth = _tail_radius(f, max(i + horizon, radius or 0), tol, ex.max_radius)
    r = i - 1
    if r < 0:
        comps = _whole_graph(ex, depth, horizon)
    else:
        comps, depth = outside_components(ex, r, horizon, min_depth=depth)
    if not comps:
        return Interval.point(0)
    his = []
    for comp in comps:
        his.append(None if comp.length_bound is None else comp.length_bound + comp.attach_total)
    hi = None if any(h is None for h in his) else max(his)
    lo = Fraction(0)
    rim = set(ex.layers[i]) if i < len(ex.layers) else set()
    if i == 0 and len(ex.layers) > 1:
        rim |= set(ex.layers[1])
    lo_g, _ = _bound_graphs(ex, depth, horizon)
    for comp in comps:
        pts = sorted(rim & comp.vertices)
        for a in pts:
            labels = _dijkstra(lo_g, a)
            for b in pts:
                if b > a:
                    lo = max(lo, labels[b][0])
    if hi is not None and lo > hi:
        raise AssertionError(f"epsilon bounds crossed: {lo} > {hi}")
    return Interval(lo, hi)


def _whole_graph(ex: Explorer, depth: int, horizon: int) -> list[OutsideComponent]:
    ex.grow(depth + 1)
    verts = ex.ball(depth)
    complete = ex.known_within(depth)
    total = sum((e.length for e in ex.induced(verts).edges), Fraction(0))
    tail = _tail(ex, depth)
    bound = total if complete else (None if tail is None else total + tail)
    return [OutsideComponent(verts, complete, {}, Fraction(0), bound)]


@dataclass(frozen=True)
class OuterEdge:
    id: str
    u: str
    v: str
    length: Interval


@dataclass(eq=False)
class Truncation:
    index: int
    inner: frozenset  # S_i
    ball: frozenset  # S_{i+1}
    tilde: Graph
    hat: Graph  # outer edges at their upper bounds
    hat_lo: Graph  # outer edges at their lower bounds
    outer: dict  # edge id -> OuterEdge
    component: dict  # vertex of S_{i+1} - S_i -> component number
    family: Optional[GraphFamily] = None

    @property
    def exact(self) -> bool:
        return all(o.length.exact for o in self.outer.values())

    @property
    def boundary(self) -> frozenset:
        return self.ball - self.inner

    def outer_between(self, u: str, v: str) -> Optional[str]:
        return self._pairs.get(frozenset((u, v)))

    def __post_init__(self):
        self._pairs = {frozenset((o.u, o.v)): o.id for o in self.outer.values()}

    def is_outer(self, eid: str) -> bool:
        return eid in self.outer

    def certified_length(self, edges: Iterable[str], side: str = "hi") -> Fraction:
        g = self.hat if side == "hi" else self.hat_lo
        return sum((g.length(e) for e in set(edges)), Fraction(0))


def outer_edge_id(i: int, u: str, v: str) -> str:
    a, b = sorted((u, v))
    return f"o{i}[{a},{b}]"


def build_truncation(
    f: GraphFamily,
    i: int,
    tol=Fraction(0),
    horizon: int = DEFAULT_HORIZON,
    max_radius: int = DEFAULT_MAX_RADIUS,
    explorer: Optional[Explorer] = None,
) -> Truncation:
    if i < 0:
        raise ContractViolation("truncation index must be non-negative")
    tol = Fraction(tol)
    ex = explorer or Explorer(f, max_radius)
    inner = ex.ball(i)
    outer_ball = ex.ball(i + 1)
    tilde_edges = {}
    for v in sorted(inner):
        for eid, _ in ex.adj(v):
            tilde_edges[eid] = ex.edges[eid]
    tilde = Graph(sorted(outer_ball), [tilde_edges[k] for k in sorted(tilde_edges)])
    rim = outer_ball - inner
    component: dict[str, int] = {}
    outer: dict[str, OuterEdge] = {}
    if rim:
        comps, _ = outside_components(ex, i, horizon)
        for k, comp in enumerate(comps):
            members = sorted(rim & comp.vertices)
            for v in members:
                component[v] = k
            for u, v in combinations(members, 2):
                if f.distance is not None:
                    length = Interval.point(f.distance(u, v))
                else:
                    length = distance_estimate(f, u, v, tol, horizon, max_radius, explorer=ex)
                oid = outer_edge_id(i, u, v)
                outer[oid] = OuterEdge(oid, u, v, length)
    hi_edges = [Edge(o.id, o.u, o.v, o.length.hi) for o in outer.values()]
    lo_edges = [Edge(o.id, o.u, o.v, o.length.lo) for o in outer.values()]
    hat = Graph(tilde.vertices, list(tilde.edges) + hi_edges)
    hat_lo = Graph(tilde.vertices, list(tilde.edges) + lo_edges)
    return Truncation(i, inner, outer_ball, tilde, hat, hat_lo, outer, component, f)


class Hierarchy:
    """Truncations and epsilon bounds of one family, built once and cached.

    Single writer: build from one thread, then share read-only.
    """

    def __init__(
        self,
        family: GraphFamily,
        tol=Fraction(0),
        eps_tol=Fraction(1, 2**24),
        horizon: int = DEFAULT_HORIZON,
        max_radius: int = DEFAULT_MAX_RADIUS,
    ):
        self.family = family
        self.tol = Fraction(tol)
        self.eps_tol = Fraction(eps_tol)
        self.horizon = horizon
        self.explorer = Explorer(family, max_radius)
        self._trunc: dict[int, Truncation] = {}
        self._eps: dict[int, Interval] = {}

    def at(self, i: int) -> Truncation:
        if i not in self._trunc:
            self._trunc[i] = build_truncation(
                self.family, i, self.tol, self.horizon, self.explorer.max_radius, explorer=self.explorer
            )
        return self._trunc[i]

    def eps(self, i: int) -> Interval:
        if i not in self._eps:
            self._eps[i] = epsilon_estimate(
                self.family, i, self.eps_tol, self.horizon, explorer=self.explorer
            )
        return self._eps[i]

    def graph_cycle(self, vertices: list[str]) -> Cycle:
        """A finite cycle of the family through ``vertices`` (least-id edges)."""
        for v in vertices:
            self._locate(v)
        g = self.explorer.induced(vertices)
        return Cycle.from_vertices(g, vertices)

    def graph_length(self, edges: Iterable[str]) -> Fraction:
        return sum((self.graph_edge(e).length for e in set(edges)), Fraction(0))

    def graph_edge(self, eid: str) -> Edge:
        """The family edge ``eid``, exploring outward until it is seen."""
        ex = self.explorer
        r = 0
        while eid not in ex.edges:
            if ex.known_within(r) and all(v in ex._adj for v in ex.dist):
                raise InputError(f"{eid} is not an edge of {self.family.name}")
            if r > ex.max_radius:
                raise BudgetError(f"edge {eid} not found within radius {ex.max_radius}")
            for v in ex.ball(r):
                ex.adj(v)
            r += 1
        return ex.edges[eid]

    def _locate(self, v: str) -> None:
        r = len(self.explorer.layers) - 1
        while v not in self.explorer.dist:
            if self.explorer.exhausted:
                raise InputError(f"{v} is not a vertex of {self.family.name}")
            r += 1
            self.explorer.grow(r)


Walk = Union[Cycle, Path]


def restrict(x: Walk, t: Truncation) -> Optional[Walk]:
    """Restriction of a cycle or path (in ``G`` or in a deeper truncation) to ``t``.

    Edges of ``tilde`` are kept; every excursion leaving ``S_{i+1}`` between two
    of its vertices is replaced by the outer edge joining them. Returns ``None``
    when ``x`` avoids ``S_i``.
    """
    if not any(v in t.inner for v in x.vertices):
        return None
    if isinstance(x, Cycle):
        return _restrict_cycle(x, t)
    return _restrict_path(x, t)


def _segment_edge(t: Truncation, a: str, b: str, seg: tuple) -> str:
    if len(seg) == 1 and t.tilde.has_edge(seg[0]):
        return seg[0]
    if any(t.tilde.has_edge(e) for e in seg):
        raise ContractViolation("walk leaves the truncation along an edge of tilde")
    oid = t.outer_between(a, b)
    if oid is None:
        raise ContractViolation(f"no outer edge {a}-{b} in truncation {t.index}")
    return oid


def _restrict_cycle(c: Cycle, t: Truncation) -> Cycle:
    n = len(c.vertices)
    start = next(k for k, v in enumerate(c.vertices) if v in t.inner)
    vs = [c.vertices[(start + k) % n] for k in range(n)]
    es = [c.edges[(start + k) % n] for k in range(n)]
    hits = [k for k, v in enumerate(vs) if v in t.ball] + [n]
    vs.append(vs[0])
    out = []
    for a, b in zip(hits, hits[1:]):
        out.append(_segment_edge(t, vs[a], vs[b], tuple(es[a:b])))
    return Cycle.from_edges(t.hat, out)


def _restrict_path(p: Path, t: Truncation) -> Path:
    hits = [k for k, v in enumerate(p.vertices) if v in t.ball]
    out_v, out_e = [p.vertices[hits[0]]], []
    for a, b in zip(hits, hits[1:]):
        out_e.append(_segment_edge(t, p.vertices[a], p.vertices[b], tuple(p.edges[a:b])))
        out_v.append(p.vertices[b])
    length = sum((t.hat.length(e) for e in out_e), Fraction(0))
    return Path(tuple(out_v), tuple(out_e), length)


VERDICTS = ("CONSISTENT", "REFUTED", "INCONCLUSIVE")


@dataclass
class MetricDiagnostic:
    intervals: list  # (i, Interval) for i = 1..depth
    verdict: str
    radius: int


def metric_diagnostic(
    f: GraphFamily,
    depth: int,
    tol=Fraction(1, 2**24),
    horizon: int = DEFAULT_HORIZON,
    max_radius: int = DEFAULT_MAX_RADIUS,
) -> MetricDiagnostic:
    """Epsilon intervals for ``i = 1..depth`` and a verdict on whether they vanish.

    CONSISTENT: upper bounds finite, non-increasing, and either zero at the end or
    shrunk by a factor ``2^(depth // 2)`` from the first. REFUTED: lower bounds
    positive and not decreasing over the second half. INCONCLUSIVE otherwise.
    All intervals share one exploration radius so the upper bounds are comparable.
    """
    if depth < 1:
        raise ContractViolation("depth must be at least 1")
    ex = Explorer(f, max_radius)
    radius = _tail_radius(f, depth + horizon, Fraction(tol), max_radius)
    ivs = [(i, epsilon_estimate(f, i, tol, horizon, radius=radius, explorer=ex)) for i in range(1, depth + 1)]
    his = [iv.hi for _, iv in ivs]
    los = [iv.lo for _, iv in ivs]
    verdict = "INCONCLUSIVE"
    if all(h is not None for h in his) and all(a >= b for a, b in zip(his, his[1:])):
        if his[-1] == 0 or his[-1] * 2 ** (depth // 2) <= his[0]:
            verdict = "CONSISTENT"
    if verdict == "INCONCLUSIVE":
        half = los[(depth - 1) // 2 :]
        if half[-1] > 0 and all(a <= b for a, b in zip(half, half[1:])) or (
            half[-1] > 0 and half[-1] >= half[0]
        ):
            verdict = "REFUTED"
    return MetricDiagnostic(ivs, verdict, radius)
