"""Writing an element of the cycle space as a thin sum of geodetic cycles, up to a depth.

An element is presented as a :class:`CircuitStream` of edge-disjoint finite
circuits. Stage ``i`` takes the residual (element plus everything chosen so far),
picks its circuits meeting ``S_i`` and replaces each by chains of short geodetic
cycles, one cycle per truncation level ``i..N``, each the restriction of the next.
After stage ``i`` the residual has no edge in ``tilde_i``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Optional, Sequence

from .decompose import reduce_mod2, short_decomposition
from .errors import CertificationError, ContractViolation, NoSequenceError
from .geodesy import DistanceOracle, all_pairs, is_geodetic
from .graph import Cycle, decompose_into_circuits, set_length, symmetric_sum
from .truncation import Hierarchy, Truncation, restrict

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CircuitStream:
    """Edge-disjoint finite circuits of a family, given as vertex sequences.

    ``member(k)`` is the k-th circuit or ``None`` past the end; ``horizon(i)`` is
    a promise that no member with index ``>= horizon(i)`` meets ``S_i``.
    """

    name: str
    member: Callable[[int], Optional[Sequence[str]]]
    horizon: Callable[[int], int]

    def meeting(self, h: Hierarchy, i: int) -> list[Cycle]:
        inner = h.at(i).inner
        out = []
        for k in range(self.horizon(i)):
            vs = self.member(k)
            if vs is None:
                break
            if any(v in inner for v in vs):
                out.append(h.graph_cycle(list(vs)))
        return out


def empty_stream() -> CircuitStream:
    return CircuitStream("empty", lambda k: None, lambda i: 0)


def single_circuit(vertices: Sequence[str]) -> CircuitStream:
    vs = tuple(vertices)
    return CircuitStream("single", lambda k: vs if k == 0 else None, lambda i: 1)


def ladder_square(n: int, subdivided: bool = False) -> list[str]:
    """Vertex sequence of the square x_n x_{n+1} y_{n+1} y_n, rungs included."""

    def rung(m: int) -> list[str]:
        if not subdivided or m == 1:
            return []
        return [f"r{m}.{k}" for k in range(1, 2 * m)]

    return [f"x{n}", f"x{n + 1}", *rung(n + 1), f"y{n + 1}", f"y{n}", *reversed(rung(n))]


def rung_element(subdivided: bool = True) -> CircuitStream:
    """The sum of the squares Q_1, Q_3, Q_5, ...: it contains every rung."""
    return CircuitStream(
        "rung_element",
        lambda k: ladder_square(2 * k + 1, subdivided),
        lambda i: i // 2 + 1,
    )


@dataclass(frozen=True)
class Chain:
    """Cycles ``levels[j]`` in ``hat_j`` for ``j = start..end``."""

    start: int
    levels: tuple  # tuple[Cycle, ...], index 0 is level ``start``

    @property
    def end(self) -> int:
        return self.start + len(self.levels) - 1

    def at(self, j: int) -> Cycle:
        return self.levels[j - self.start]

    @property
    def deepest(self) -> Cycle:
        return self.levels[-1]


def chain_from(x: Cycle, h: Hierarchy, start: int, end: int) -> Chain:
    levels = []
    for j in range(start, end + 1):
        r = restrict(x, h.at(j))
        if r is None:
            raise ContractViolation(f"chain member avoids S_{j}")
        levels.append(r)
    return Chain(start, tuple(levels))


def check_chain(ch: Chain, h: Hierarchy) -> None:
    for j in range(ch.start, ch.end):
        if restrict(ch.at(j + 1), h.at(j)) != ch.at(j):
            raise AssertionError(f"chain is not compatible between levels {j} and {j + 1}")


def _trace(x: Cycle, t: Truncation) -> frozenset:
    return x.edge_set & t.tilde.edge_ids


def prune_minimal(family: Sequence[Cycle], t: Truncation) -> list[Cycle]:
    """Drop members until the traces on ``tilde`` are linearly independent over GF(2).

    The sum on ``tilde`` is unchanged and no proper subfamily has the same sum.
    """
    keep = list(family)
    while True:
        dep = _dependent_subset([_trace(c, t) for c in keep])
        if dep is None:
            return keep
        keep = [c for k, c in enumerate(keep) if k not in dep]


def _dependent_subset(vectors: list[frozenset]) -> Optional[set]:
    """Indices of a non-empty subset summing to zero, or None if independent."""
    universe = sorted(set().union(*vectors)) if vectors else []
    bit = {e: 1 << k for k, e in enumerate(universe)}
    basis: dict[int, tuple[int, int]] = {}  # pivot -> (vector, combination mask)
    for idx, vec in enumerate(vectors):
        v = sum(bit[e] for e in vec)
        mask = 1 << idx
        while v:
            p = v.bit_length() - 1
            if p not in basis:
                basis[p] = (v, mask)
                break
            bv, bm = basis[p]
            v ^= bv
            mask ^= bm
        if v == 0:
            return {k for k in range(len(vectors)) if mask >> k & 1}
    return None


def _canon(family) -> tuple:
    return tuple(sorted(c.edges for c in family))


def koenig_select(levels: dict, restriction_map: Callable[[int, Hashable], Hashable], depth: int) -> list:
    """A sequence ``s_i..s_N`` with ``restriction_map(j+1, s_{j+1}) == s_j``.

    ``levels[j]`` lists the candidates at level ``j``; ``restriction_map(j+1, d)``
    sends a level-(j+1) candidate to a level-j candidate. Candidates with more
    depth-N descendants win; ties go to the earliest listed.
    """
    start = min(levels)
    if set(levels) != set(range(start, depth + 1)):
        raise ContractViolation("levels must cover a contiguous range ending at the depth")
    for j in range(start, depth + 1):
        if not levels[j]:
            raise NoSequenceError(f"level {j} has no candidates")
    count = {depth: {c: 1 for c in levels[depth]}}
    children: dict[int, dict] = {}
    for j in range(depth - 1, start - 1, -1):
        count[j] = {c: 0 for c in levels[j]}
        children[j] = {c: [] for c in levels[j]}
        for d in levels[j + 1]:
            p = restriction_map(j + 1, d)
            if p not in count[j]:
                raise ContractViolation(f"restriction of a level-{j + 1} candidate is not a level-{j} candidate")
            count[j][p] += count[j + 1][d]
            children[j][p].append(d)
    best = max(levels[start], key=lambda c: count[start][c], default=None)
    best = next(c for c in levels[start] if count[start][c] == count[start][best])
    if count[start][best] == 0:
        raise NoSequenceError("no candidate survives to the full depth")
    seq = [best]
    for j in range(start, depth):
        kids = [d for d in children[j][seq[-1]] if count[j + 1][d] > 0]
        top = max(count[j + 1][d] for d in kids)
        seq.append(next(d for d in kids if count[j + 1][d] == top))
    return seq


class _Oracles:
    def __init__(self, h: Hierarchy):
        self.h = h
        self._cache: dict[int, DistanceOracle] = {}

    def __call__(self, j: int) -> DistanceOracle:
        if j not in self._cache:
            self._cache[j] = all_pairs(self.h.at(j).hat)
        return self._cache[j]


def _oracles(h: Hierarchy) -> _Oracles:
    if not hasattr(h, "_pipeline_oracles"):
        h._pipeline_oracles = _Oracles(h)
    return h._pipeline_oracles


def stage_bound(h: Hierarchy, i: int) -> Fraction:
    hi = h.eps(i).hi
    if hi is None:
        raise CertificationError(f"epsilon_{i} has no finite upper bound")
    if hi == 0:
        raise CertificationError(f"epsilon_{i} is zero but a circuit meets S_{i}")
    return hi


def decompose_meeting_circle(h: Hierarchy, c: Cycle, i: int, depth: int) -> list[Chain]:
    """Chains of geodetic cycles, levels ``i..depth``, whose level-i sum agrees with ``c`` on ``tilde_i``.

    ``c`` lives in the family or in a truncation at level ``>= depth``; it must meet
    ``S_i`` and avoid ``S_{i-1}``. Every cycle has length at most ``5 * eps_i``.
    """
    if depth <= i:
        raise ContractViolation("depth must exceed the stage index")
    if not any(v in h.at(i).inner for v in c.vertices):
        raise ContractViolation(f"circuit does not meet S_{i}")
    if i > 0 and any(v in h.at(i - 1).inner for v in c.vertices):
        raise ContractViolation(f"circuit meets S_{i - 1}")
    eps = stage_bound(h, i)
    ti = h.at(i)
    target = c.edge_set & ti.tilde.edge_ids
    oracles = _oracles(h)
    levels: dict[int, list] = {}
    for j in range(depth, i - 1, -1):
        t = h.at(j)
        cj = restrict(c, t)
        fresh = short_decomposition(t.hat, cj, eps, oracle=oracles(j)).parts
        cands = [_family(prune_minimal(fresh, ti))]
        if j < depth:
            cands += [_down(fam, h, j, ti) for fam in levels[j + 1]]
        uniq = list(dict.fromkeys(cands))
        for fam in uniq:
            if symmetric_sum(_trace(x, ti) for x in fam) != target:
                raise AssertionError(f"level-{j} family does not agree with the circuit on tilde_{i}")
        levels[j] = uniq
    seq = koenig_select(levels, lambda j, fam: _down(fam, h, j - 1, ti), depth)
    chains = [chain_from(x, h, i, depth) for x in sorted(seq[-1], key=lambda x: x.edges)]
    log.debug("stage %d circuit of length %d: %d chains", i, len(c), len(chains))
    return chains


def _family(cycles) -> tuple:
    return tuple(sorted(cycles, key=lambda x: x.edges))


def _down(fam: tuple, h: Hierarchy, j: int, ti: Truncation) -> tuple:
    t = h.at(j)
    rs = [r for r in (restrict(x, t) for x in fam) if r is not None]
    return _family(prune_minimal(reduce_mod2(rs), ti))


@dataclass
class GammaStage:
    index: int
    chains: list
    bound: Fraction  # 5 * eps_i upper bound
    circuits: list  # residual circuits handled at this stage
    residual_on_tilde: int  # edges of tilde_i left in the residual afterwards

    def edges(self) -> frozenset:
        """Edges of the family met by this stage's cycles at any level."""
        return frozenset().union(*(x.edge_set for ch in self.chains for x in ch.levels)) if self.chains else frozenset()


@dataclass
class GammaReport:
    stages: list
    depth: int
    host_depth: int
    residual: frozenset = field(default_factory=frozenset)  # final residual in hat_N


def stream_residual(h: Hierarchy, stream: CircuitStream, n: int) -> frozenset:
    t = h.at(n)
    return symmetric_sum(restrict(c, t).edge_set for c in stream.meeting(h, n))


def generate_gamma(h: Hierarchy, stream: CircuitStream, k: int, host_depth: Optional[int] = None) -> GammaReport:
    """Stages ``0..k`` for ``stream``, with chains reaching truncation ``host_depth``."""
    n = k + 4 if host_depth is None else host_depth
    if n <= k:
        raise ContractViolation("host depth must exceed the number of stages")
    tn = h.at(n)
    residual = stream_residual(h, stream, n)
    stages = []
    for i in range(k + 1):
        ti = h.at(i)
        circuits = [
            d for d in decompose_into_circuits(tn.hat, residual) if any(v in ti.inner for v in d.vertices)
        ]
        chains: list[Chain] = []
        for d in circuits:
            chains += decompose_meeting_circle(h, d, i, n)
        residual = symmetric_sum([residual] + [ch.deepest.edge_set for ch in chains])
        left = residual & ti.tilde.edge_ids
        if left:
            raise AssertionError(f"stage {i} leaves {len(left)} residual edges on tilde_{i}")
        stages.append(GammaStage(i, chains, 5 * stage_bound(h, i) if chains else 5 * (h.eps(i).hi or 0), circuits, len(left)))
        log.info("stage %d: %d circuits, %d chains", i, len(circuits), len(chains))
    return GammaReport(stages, k, n, residual)


def verify_stage_geodesy(h: Hierarchy, report: GammaReport) -> list[tuple[int, int, int]]:
    """(stage, chain, level) triples whose cycle fails to be geodetic in its host."""
    oracles = _oracles(h)
    bad = []
    for st in report.stages:
        for ci, ch in enumerate(st.chains):
            for j in range(ch.start, ch.end + 1):
                if not is_geodetic(h.at(j).hat, ch.at(j), oracles(j)):
                    bad.append((st.index, ci, j))
    return bad


@dataclass
class ThinnessReport:
    edge: str
    last_stage: Optional[int]
    cutoff: Optional[int]  # first stage j with 5 eps_j < length of the edge
    ok: bool


def verify_thinness(h: Hierarchy, report: GammaReport, e: str) -> ThinnessReport:
    length = h.graph_length([e])
    last = None
    for st in report.stages:
        if any(e in ch.deepest.edge_set for ch in st.chains):
            last = st.index
    cutoff = None
    for st in report.stages:
        hi = h.eps(st.index).hi
        if hi is not None and 5 * hi < length:
            cutoff = st.index
            break
    ok = cutoff is None or last is None or last < cutoff
    return ThinnessReport(e, last, cutoff, ok)


def chain_union(ch: Chain, h: Hierarchy) -> frozenset:
    """Union over the levels ``m`` of ``X_m`` intersected with ``tilde_m``."""
    out = frozenset()
    for j in range(ch.start, ch.end + 1):
        out |= ch.at(j).edge_set & h.at(j).tilde.edge_ids
    return out


@dataclass
class ClosureCensus:
    degrees: dict  # vertex or component node -> degree
    is_circle: bool


def closure_census(ch: Chain, h: Hierarchy) -> ClosureCensus:
    """Degree census of the chain union with each component of ``G - S_N`` shrunk to a point.

    An outer edge of the deepest member passes through the point of its component,
    adding 2 to that point's degree; a circle has every degree equal to 2.
    """
    t = h.at(ch.end)
    union = chain_union(ch, h)
    deg: dict = {}
    g = h.explorer
    for eid in union:
        e = g.edges[eid]
        for x in (e.u, e.v):
            deg[x] = deg.get(x, 0) + 1
    for eid in ch.deepest.edges:
        if t.is_outer(eid):
            o = t.outer[eid]
            for x in (o.u, o.v):
                deg[x] = deg.get(x, 0) + 1
            node = f"end:{t.component[o.u]}"
            deg[node] = deg.get(node, 0) + 2
    connected = _connected_union(union, ch, t, g)
    return ClosureCensus(deg, connected and all(d == 2 for d in deg.values()))


def _connected_union(union, ch: Chain, t: Truncation, g) -> bool:
    adj: dict = {}

    def link(a, b):
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)

    for eid in union:
        e = g.edges[eid]
        link(e.u, e.v)
    for eid in ch.deepest.edges:
        if t.is_outer(eid):
            o = t.outer[eid]
            node = f"end:{t.component[o.u]}"
            link(o.u, node)
            link(o.v, node)
    if not adj:
        return False
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        for y in adj[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(adj)


def stage_lengths(h: Hierarchy, st: GammaStage) -> list[Fraction]:
    return [set_length(h.at(ch.start).hat, ch.at(ch.start).edges) for ch in st.chains]
