"""Worked examples: the subdivided ladder, cycle censuses, peripheral cycles, ray sums."""

from __future__ import annotations

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import BudgetError, ContractViolation
from .families import LengthScheme, subdivided_ladder_family
from .geodesy import DistanceOracle, all_pairs, is_geodetic
from .graph import Cycle, Graph
from .truncation import GraphFamily, Hierarchy, Truncation, distance_estimate

log = logging.getLogger(__name__)

CENSUS_CAP = 10**5


def subdivided_ladder(i: int) -> list[Truncation]:
    """Truncations ``0..i`` of the unit-length subdivided ladder."""
    if i < 1:
        raise ContractViolation("need i >= 1")
    h = Hierarchy(subdivided_ladder_family("unit"))
    return [h.at(j) for j in range(i + 1)]


def rung_distance(n: int) -> Fraction:
    """Distance between the ends of rung ``n`` of the unit subdivided ladder."""
    iv = distance_estimate(subdivided_ladder_family("unit"), f"x{n}", f"y{n}")
    return iv.hi


def all_cycles(g: Graph, cap: int = CENSUS_CAP) -> list[Cycle]:
    """Every cycle of ``g`` once, loops and digons included, in canonical order.

    Backtracking from each vertex ``s`` over simple paths through vertices after
    ``s`` (in vertex order); each cycle is found from its least vertex, twice, and
    deduplicated on its edge set.
    """
    order = {v: k for k, v in enumerate(g.vertices)}
    found: dict[frozenset, None] = {}

    def add(es):
        key = frozenset(es)
        if key not in found:
            found[key] = None
            if len(found) > cap:
                raise BudgetError(f"more than {cap} cycles")

    for e in g.edges:
        if e.is_loop:
            add([e.id])
    for s in g.vertices:
        rank = order[s]
        path_e: list[str] = []
        on_path = {s}

        def dfs(v: str) -> None:
            for eid, w in g.neighbors(v):
                if w == v or (path_e and eid == path_e[-1]):
                    continue
                if w == s and path_e:
                    add(path_e + [eid])
                elif w not in on_path and order[w] > rank:
                    on_path.add(w)
                    path_e.append(eid)
                    dfs(w)
                    path_e.pop()
                    on_path.discard(w)

        dfs(s)
    cycles = [Cycle.from_edges(g, es) for es in found]
    return sorted(cycles, key=lambda c: (len(c), c.edges))


@dataclass(frozen=True)
class CensusEntry:
    cycle: Cycle
    geodetic: bool


def _verdicts(g: Graph, cycles: list) -> list[bool]:
    oracle = all_pairs(g)
    return [is_geodetic(g, c, oracle) for c in cycles]


def geodetic_census(
    g: Graph, cap: int = CENSUS_CAP, oracle: Optional[DistanceOracle] = None, jobs: int = 1
) -> list[CensusEntry]:
    """All cycles of ``g`` with their geodesy verdicts, in canonical order.

    With ``jobs > 1`` the verdicts are computed in worker processes over
    contiguous chunks and merged back in order.
    """
    cycles = all_cycles(g, cap)
    if jobs > 1 and len(cycles) > jobs:
        size = -(-len(cycles) // jobs)
        chunks = [cycles[k : k + size] for k in range(0, len(cycles), size)]
        with ProcessPoolExecutor(jobs) as pool:
            verdicts = [v for part in pool.map(_verdicts, [g] * len(chunks), chunks) for v in part]
    else:
        oracle = oracle or all_pairs(g)
        verdicts = [is_geodetic(g, c, oracle) for c in cycles]
    return [CensusEntry(c, v) for c, v in zip(cycles, verdicts)]


def is_peripheral(g: Graph, c: Cycle) -> bool:
    """No chord (a parallel edge or loop at the cycle counts) and ``g - V(c)`` connected."""
    vs = set(c.vertices)
    own = c.edge_set
    for e in g.edges:
        if e.id not in own and e.u in vs and e.v in vs:
            return False
    rest = g.components(removed=vs)
    return len(rest) <= 1


def gf2_rank(sets) -> int:
    universe = sorted(set().union(*sets)) if sets else []
    bit = {e: 1 << k for k, e in enumerate(universe)}
    basis: dict[int, int] = {}
    for s in sets:
        v = sum(bit[e] for e in s)
        while v:
            p = v.bit_length() - 1
            if p not in basis:
                basis[p] = v
                break
            v ^= basis[p]
    return len(basis)


def cyclomatic_number(g: Graph) -> int:
    return len(g.edges) - len(g.vertices) + len(g.components())


@dataclass
class SpanCheck:
    peripheral: int
    rank: int
    cyclomatic: int

    @property
    def spans(self) -> bool:
        return self.rank == self.cyclomatic


def peripheral_span(g: Graph, cap: int = CENSUS_CAP) -> SpanCheck:
    per = [c for c in all_cycles(g, cap) if is_peripheral(g, c)]
    return SpanCheck(len(per), gf2_rank([c.edge_set for c in per]), cyclomatic_number(g))


def peripheral_violations(g: Graph, cap: int = CENSUS_CAP) -> list[Cycle]:
    """Cycles that are geodetic under the current lengths but not peripheral."""
    oracle = all_pairs(g)
    return [c for c in all_cycles(g, cap) if not is_peripheral(g, c) and is_geodetic(g, c, oracle)]


@dataclass
class SearchResult:
    seed: int
    budget: int
    evaluations: int
    best_violations: int
    lengths: dict  # edge id -> Fraction of the best assignment seen
    scheme: Optional[LengthScheme] = None
    witnesses: list = field(default_factory=list)  # violating cycles of the best assignment

    @property
    def found(self) -> bool:
        return self.scheme is not None


_STEPS = (Fraction(1, 2), Fraction(2, 3), Fraction(3, 4), Fraction(4, 3), Fraction(3, 2), Fraction(2))


def search_peripheral_lengths(g: Graph, budget: int = 200, seed: int = 0, cap: int = CENSUS_CAP) -> SearchResult:
    """Look for lengths making every geodetic cycle peripheral.

    Starts from unit lengths and repeatedly rescales one random edge by a random
    rational factor, keeping the change unless it raises the number of violating
    cycles. Stops at zero violations or after ``budget`` evaluations.
    """
    rng = random.Random(seed)
    cycles = all_cycles(g, cap)
    fixed_bad = [c for c in cycles if not is_peripheral(g, c)]

    def score(lengths: dict) -> list[Cycle]:
        h = g.with_lengths(lengths)
        oracle = all_pairs(h)
        return [c for c in fixed_bad if is_geodetic(h, c, oracle)]

    current = {e.id: Fraction(1) for e in g.edges}
    bad = score(current)
    best, best_bad = dict(current), bad
    evals = 1
    ids = sorted(current)
    while best_bad and evals < budget and ids:
        trial = dict(current)
        eid = rng.choice(ids)
        trial[eid] = trial[eid] * rng.choice(_STEPS)
        tb = score(trial)
        evals += 1
        if len(tb) <= len(bad):
            current, bad = trial, tb
            if len(bad) < len(best_bad):
                best, best_bad = dict(current), bad
    scheme = None
    if not best_bad:
        scheme = LengthScheme("explicit", {"lengths": {k: str(v) for k, v in sorted(best.items())}})
    log.info("peripheral search seed=%d: %d evaluations, %d violations", seed, evals, len(best_bad))
    return SearchResult(seed, budget, evals, len(best_bad), best, scheme, best_bad)


def verify_scheme(g: Graph, scheme: LengthScheme) -> bool:
    """Re-check from scratch that every geodetic cycle is peripheral under ``scheme``."""
    lengths = {k: Fraction(v) for k, v in scheme.params["lengths"].items()}
    return not peripheral_violations(g.with_lengths(lengths))


def divergence_probe(f: GraphFamily, depth: int, ray: str = "lower") -> Fraction:
    """Total length of the first ``depth`` edges along the lower (``y``) or upper (``x``) rail."""
    if depth < 0:
        raise ContractViolation("depth must be non-negative")
    letter, rail = ("y", "Y") if ray == "lower" else ("x", "X")
    if ray not in ("lower", "upper"):
        raise ContractViolation("ray must be 'lower' or 'upper'")
    total = Fraction(0)
    for n in range(1, depth + 1):
        ln = next(length for eid, _, length in f.neighbors(f"{letter}{n}") if eid == f"{rail}{n}")
        total += Fraction(ln)
    return total


@dataclass
class RungCensus:
    """Census of one truncation split by whether a cycle uses outer edges."""

    index: int
    circuits: int  # cycles made of edges of the family only
    geodetic_circuits: list
    missing_rung: list  # geodetic circuits avoiding the first rung
    outer_geodetic_without_rung: list  # geodetic cycles through outer edges that avoid the rung

    @property
    def holds(self) -> bool:
        return not self.missing_rung


def rung_census(t: Truncation, rung: str = "R1", cap: int = CENSUS_CAP) -> RungCensus:
    entries = geodetic_census(t.hat, cap)
    real = [e for e in entries if not any(t.is_outer(x) for x in e.cycle.edges)]
    geo = [e.cycle for e in real if e.geodetic]
    other = [
        e.cycle
        for e in entries
        if e.geodetic and rung not in e.cycle.edge_set and any(t.is_outer(x) for x in e.cycle.edges)
    ]
    return RungCensus(t.index, len(real), geo, [c for c in geo if rung not in c.edge_set], other)
