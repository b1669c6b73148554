"""Small named graphs and seeded random graphs."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .graph import Edge, Graph


def _graph(pairs, lengths=None) -> Graph:
    verts = []
    edges = []
    for k, (u, v) in enumerate(pairs):
        u, v = str(u), str(v)
        verts += [u, v]
        ln = Fraction(1) if lengths is None else Fraction(lengths[k])
        edges.append(Edge(f"e{k}", u, v, ln))
    return Graph(sorted(set(verts), key=_vkey), edges)


def _vkey(v: str):
    return (len(v), v)


def cycle_graph(n: int) -> Graph:
    return _graph([(k, (k + 1) % n) for k in range(n)])


def complete_graph(n: int) -> Graph:
    return _graph(combinations(range(n), 2))


def k4() -> Graph:
    return complete_graph(4)


def wheel(rim: int) -> Graph:
    """Hub ``h`` joined to every vertex of a ``rim``-cycle."""
    pairs = [(k, (k + 1) % rim) for k in range(rim)] + [("h", k) for k in range(rim)]
    return _graph(pairs)


def prism() -> Graph:
    """Triangular prism: triangles a0a1a2 and b0b1b2 joined by a_k b_k."""
    pairs = [(f"a{k}", f"a{(k + 1) % 3}") for k in range(3)]
    pairs += [(f"b{k}", f"b{(k + 1) % 3}") for k in range(3)]
    pairs += [(f"a{k}", f"b{k}") for k in range(3)]
    return _graph(pairs)


def cube() -> Graph:
    pairs = [(a, b) for a in range(8) for b in range(a + 1, 8) if bin(a ^ b).count("1") == 1]
    return _graph(pairs)


def random_connected_graph(
    rng: random.Random,
    n: int,
    extra: int,
    unit: bool = False,
    max_num: int = 9,
    max_den: int = 4,
    multi: bool = True,
) -> Graph:
    """A random spanning tree on ``n`` vertices plus ``extra`` further edges.

    With ``multi`` the extra edges may be parallel edges or loops.
    """
    verts = [f"v{k}" for k in range(n)]
    pairs = []
    for k in range(1, n):
        pairs.append((verts[rng.randrange(k)], verts[k]))
    for _ in range(extra):
        if multi:
            u, v = rng.choice(verts), rng.choice(verts)
        else:
            free = [(a, b) for a, b in combinations(verts, 2) if (a, b) not in pairs and (b, a) not in pairs]
            if not free:
                break
            u, v = rng.choice(free)
        pairs.append((u, v))
    edges = []
    for k, (u, v) in enumerate(pairs):
        ln = Fraction(1) if unit else Fraction(rng.randint(1, max_num), rng.randint(1, max_den))
        edges.append(Edge(f"e{k}", u, v, ln))
    return Graph(verts, edges)
