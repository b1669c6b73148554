"""Writing cycles as sums of geodetic cycles.

``geodetic_decomposition`` splits a non-geodetic cycle along a shortcut until
every piece is geodetic; every piece is at most as long as the input.
``short_decomposition`` additionally caps piece lengths at ``5 * eps`` by first
cutting the cycle into short pieces along ``eps``-short return paths.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .errors import CertificationError, ContractViolation
from .geodesy import CycleArcs, DistanceOracle, _oracle_for, find_shortcut
from .graph import Cycle, Graph, decompose_into_circuits, set_length, symmetric_sum

log = logging.getLogger(__name__)


@dataclass
class Decomposition:
    input: frozenset
    parts: list[Cycle]
    bound: Fraction
    trace: list[dict] = field(default_factory=list)
    split_depth: int = 0  # deepest nesting of shortcut splits

    def total(self) -> frozenset:
        return symmetric_sum(p.edge_set for p in self.parts)


def reduce_mod2(cycles: Iterable[Cycle]) -> list[Cycle]:
    """Drop cycles occurring an even number of times; keeps first-seen order."""
    cycles = list(cycles)
    counts = Counter(c.edge_set for c in cycles)
    out, seen = [], set()
    for c in cycles:
        if counts[c.edge_set] % 2 and c.edge_set not in seen:
            seen.add(c.edge_set)
            out.append(c)
    return out


def geodetic_decomposition(
    g: Graph, c: Cycle, oracle: Optional[DistanceOracle] = None, trace: bool = False
) -> Decomposition:
    oracle = _oracle_for(g, oracle)
    bound = c.length(g)
    parts: list[Cycle] = []
    steps: list[dict] = []
    stack = [(c, 0)]
    deepest = 0
    while stack:
        d, depth = stack.pop()
        deepest = max(deepest, depth)
        sc = find_shortcut(g, d, oracle)
        if sc is None:
            parts.append(d)
            continue
        q1, q2 = CycleArcs(g, d).arc_paths(sc.x, sc.y)
        d1 = Cycle.from_edges(g, sc.path.edges + q1.edges)
        d2 = Cycle.from_edges(g, sc.path.edges + q2.edges)
        if trace:
            steps.append(
                {
                    "depth": depth,
                    "cycle": list(d.edges),
                    "shortcut": list(sc.path.edges),
                    "split": [list(d1.edges), list(d2.edges)],
                }
            )
        stack.append((d2, depth + 1))
        stack.append((d1, depth + 1))
    log.debug("geodetic_decomposition: %d parts, split depth %d", len(parts), deepest)
    return Decomposition(c.edge_set, reduce_mod2(parts), bound, steps, deepest)


def geodetic_generating_set(
    g: Graph, x: Iterable[str], oracle: Optional[DistanceOracle] = None, trace: bool = False
) -> Decomposition:
    x = frozenset(x)
    circuits = decompose_into_circuits(g, x)
    oracle = _oracle_for(g, oracle) if circuits else oracle
    parts: list[Cycle] = []
    steps: list[dict] = []
    bound = Fraction(0)
    deepest = 0
    for circ in circuits:
        dec = geodetic_decomposition(g, circ, oracle, trace)
        parts += dec.parts
        steps += dec.trace
        bound = max(bound, dec.bound)
        deepest = max(deepest, dec.split_depth)
    return Decomposition(x, reduce_mod2(parts), bound, steps, deepest)


@dataclass(frozen=True)
class _Sector:
    # C-part as a path from x to y along the original cycle; x == y for the whole cycle
    cpart_vertices: tuple
    cpart_edges: tuple
    return_edges: frozenset

    @property
    def edges(self) -> frozenset:
        return frozenset(self.cpart_edges) | self.return_edges


def _initial_sector(g: Graph, c: Cycle, c_part: Optional[Iterable[str]], eps: Fraction) -> _Sector:
    n = len(c.edges)
    part = c.edge_set if c_part is None else frozenset(c_part)
    if not part <= c.edge_set or not part:
        raise ContractViolation("C-part must be a non-empty subset of the cycle's edges")
    if part == c.edge_set:
        return _Sector(c.vertices + (c.vertices[0],), c.edges, frozenset())
    starts = [k for k in range(n) if c.edges[k] in part and c.edges[k - 1] not in part]
    if len(starts) != 1:
        raise ContractViolation("C-part must be a single subpath of the cycle")
    k = starts[0]
    m = len(part)
    idx = [(k + t) % n for t in range(m)]
    vs = tuple(c.vertices[i] for i in idx) + (c.vertices[(k + m) % n],)
    rest = c.edge_set - part
    if set_length(g, rest) > eps:
        raise ContractViolation("the complement of the C-part is longer than eps")
    return _Sector(vs, tuple(c.edges[i] for i in idx), rest)


def short_decomposition(
    g: Graph,
    c: Cycle,
    eps: Fraction,
    c_part: Optional[Iterable[str]] = None,
    oracle: Optional[DistanceOracle] = None,
    trace: bool = False,
) -> Decomposition:
    """Geodetic cycles of length at most ``5 * eps`` summing to ``c``.

    ``eps`` must bound the distance between any two vertices of ``c`` (the pivot
    path check enforces this) and ``c_part`` names the subpath of ``c`` treated as
    the C-part of the starting sector; by default the whole cycle.

    Raises CertificationError when a hypothesis fails: no pivot vertex within
    ``(eps, 3 eps]``, or a pivot path longer than ``eps``.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ContractViolation("eps must be positive")
    oracle = _oracle_for(g, oracle)
    cap = 5 * eps
    pending = [_initial_sector(g, c, c_part, eps)]
    pieces: list[Cycle] = []
    steps: list[dict] = []
    while pending:
        sec = pending.pop()
        if set_length(g, sec.edges) <= cap:
            pieces.append(Cycle.from_edges(g, sec.edges))
            continue
        qv, qe = sec.cpart_vertices, sec.cpart_edges
        run = Fraction(0)
        k = None
        for t, eid in enumerate(qe, start=1):
            run += g.length(eid)
            if run > eps:
                k = t
                break
        if k is None or run > 3 * eps:
            raise CertificationError(
                f"no pivot vertex at C-part distance in (eps, 3 eps]; some C-part edge exceeds 2 eps = {2 * eps}"
            )
        z, y = qv[k], qv[-1]
        p = oracle.path(z, y)
        if p.length > eps:
            raise CertificationError(f"pivot path {z}-{y} has length {p.length} > eps = {eps}")
        q1v, q1e = qv[k:], qe[k:]
        q2 = frozenset(qe[:k]) | sec.return_edges
        short = decompose_into_circuits(g, symmetric_sum([q2, p.edges]))
        pieces += short
        at = {v: idx for idx, v in enumerate(q1v)}
        hits = [idx for idx, v in enumerate(p.vertices) if v in at]
        new = []
        for a, b in zip(hits, hits[1:]):
            v, w = p.vertices[a], p.vertices[b]
            pseg = p.edges[a:b]
            ia, ib = at[v], at[w]
            if ia < ib:
                sv, se = q1v[ia : ib + 1], q1e[ia:ib]
            else:
                sv, se = q1v[ib : ia + 1][::-1], q1e[ib:ia][::-1]
            if tuple(pseg) == tuple(se):
                continue
            new.append(_Sector(tuple(sv), tuple(se), frozenset(pseg)))
        if trace:
            steps.append(
                {
                    "sector": sorted(sec.edges),
                    "pivot": z,
                    "target": y,
                    "path": list(p.edges),
                    "short_cycles": [list(s.edges) for s in short],
                    "sectors": [sorted(s.edges) for s in new],
                }
            )
        pending += reversed(new)
    parts: list[Cycle] = []
    for piece in pieces:
        parts += geodetic_decomposition(g, piece, oracle).parts
    parts = reduce_mod2(parts)
    if symmetric_sum(p.edge_set for p in parts) != c.edge_set:
        raise AssertionError("short decomposition does not sum to its input")
    return Decomposition(c.edge_set, parts, cap, steps)
