"""Built-in graph families: the ladder, the subdivided ladder, a unit strip, finite graphs.

Ladder vertices are ``x{n}`` and ``y{n}`` (n >= 1), rails ``X{n}`` (x_n x_{n+1}) and
``Y{n}``, rungs ``R{n}``. In the subdivided ladder rung ``n >= 2`` is a path of 2n
edges ``R{n}.1 .. R{n}.{2n}`` through ``r{n}.1 .. r{n}.{2n-1}``, counted from the
``x`` side; rung 1 stays a single edge ``R1``.

Length schemes:

* ``unit``: every edge has length 1.
* ``nst``: a normal spanning tree that is a ray zigzagging x1 y1 y2 (rung 2) x2 x3
  (rung 3) y3 y4 ... ; a vertex at ray position p gets potential 2^-p and each
  edge the difference of its endpoint potentials. Tree edges then have length
  2^-p of their upper endpoint and every chord the sum along its tree path.
* ``dyadic_harmonic`` (plain ladder): upper rail 1/2, 1/4, ...; lower rail
  1/2, 1/3, 1/4, ...; rungs 1/2, 1/4, ...
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path as FsPath
from typing import Optional

from .errors import InputError
from .graph import Graph, parse_length
from .truncation import GraphFamily

LENGTH_SCHEMES = ("unit", "nst", "dyadic_harmonic", "explicit")


@dataclass(frozen=True)
class LengthScheme:
    name: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in LENGTH_SCHEMES:
            raise InputError(f"unknown length scheme {self.name!r}")


class _Shape:
    """Vertex positions along the zigzag ray of a (subdivided) ladder."""

    def __init__(self, subdivided: bool):
        self.subdivided = subdivided
        self._start = [0, 0]  # 1-indexed

    def rung_len(self, n: int) -> int:
        return 2 * n if self.subdivided and n >= 2 else 1

    def start(self, n: int) -> int:
        while len(self._start) <= n:
            m = len(self._start) - 1
            self._start.append(self._start[m] + self.rung_len(m) + 1)
        return self._start[n]

    def rung_vertex(self, n: int, k: int) -> str:
        """Vertex ``k`` of rung ``n`` counted from x_n (k = 0) to y_n (k = rung_len)."""
        if k == 0:
            return f"x{n}"
        if k == self.rung_len(n):
            return f"y{n}"
        return f"r{n}.{k}"

    def rung_edge(self, n: int, k: int) -> str:
        """Rung edge between rung vertices k-1 and k."""
        return f"R{n}" if self.rung_len(n) == 1 else f"R{n}.{k}"

    def parse(self, v: str) -> tuple[str, int, int]:
        try:
            if v[0] in "xy":
                n = int(v[1:])
                k = 0 if v[0] == "x" else self.rung_len(n)
            elif v[0] == "r" and self.subdivided:
                a, b = v[1:].split(".")
                n, k = int(a), int(b)
                if not 0 < k < self.rung_len(n):
                    raise ValueError
            else:
                raise ValueError
        except (ValueError, IndexError):
            raise InputError(f"{v!r} is not a ladder vertex") from None
        if n < 1:
            raise InputError(f"{v!r} is not a ladder vertex")
        return v[0], n, k

    def pos(self, v: str) -> int:
        _, n, k = self.parse(v)
        s, m = self.start(n), self.rung_len(n)
        return s + k if n % 2 else s + m - k

    def neighbors(self, v: str) -> list[tuple[str, str]]:
        kind, n, k = self.parse(v)
        m = self.rung_len(n)
        out = []
        if k == 0 or k == m:
            rail, letter = ("X", "x") if k == 0 else ("Y", "y")
            if n > 1:
                out.append((f"{rail}{n - 1}", f"{letter}{n - 1}"))
            out.append((f"{rail}{n}", f"{letter}{n + 1}"))
        if k > 0:
            out.append((self.rung_edge(n, k), self.rung_vertex(n, k - 1)))
        if k < m:
            out.append((self.rung_edge(n, k + 1), self.rung_vertex(n, k + 1)))
        return out


def _potential(p: int) -> Fraction:
    return Fraction(1, 2**p)


def _ladder_family(subdivided: bool, lengths: str) -> GraphFamily:
    shape = _Shape(subdivided)
    name = ("subdivided_ladder" if subdivided else "ladder") + f"[{lengths}]"
    if lengths == "dyadic_harmonic" and subdivided:
        raise InputError("dyadic_harmonic lengths are defined for the plain ladder only")

    def edge_length(eid: str, a: str, b: str) -> Fraction:
        if lengths == "unit":
            return Fraction(1)
        if lengths == "nst":
            return abs(_potential(shape.pos(a)) - _potential(shape.pos(b)))
        n = int(eid[1:])
        return Fraction(1, n + 1) if eid[0] == "Y" else Fraction(1, 2**n)

    @lru_cache(maxsize=None)
    def neighbors(v: str):
        return [(eid, w, edge_length(eid, v, w)) for eid, w in shape.neighbors(v)]

    distance = tail = None
    if lengths == "nst":

        def distance(u: str, v: str) -> Fraction:
            return abs(_potential(shape.pos(u)) - _potential(shape.pos(v)))

        def tail(r: int) -> Fraction:
            # ray position >= edge distance; at most 3 edges hang below each position
            return Fraction(6, 2**r)

    elif lengths not in ("unit", "dyadic_harmonic"):
        raise InputError(f"length scheme {lengths!r} is not available for ladders")
    return GraphFamily(
        name,
        "x1",
        neighbors,
        distance=distance,
        tail_length=tail,
        params={"family": "subdivided_ladder" if subdivided else "ladder", "lengths": lengths},
    )


def ladder(lengths: str = "unit") -> GraphFamily:
    return _ladder_family(False, lengths)


def subdivided_ladder_family(lengths: str = "unit") -> GraphFamily:
    return _ladder_family(True, lengths)


def ladder_position(v: str, subdivided: bool = False) -> int:
    """Position of ``v`` on the zigzag normal ray (root x1 at 0)."""
    return _Shape(subdivided).pos(v)


def strip(width: int = 4) -> GraphFamily:
    """One-ended unit grid ``width`` rows high: vertices ``c{col}.{row}``, col >= 0.

    Horizontal edges ``H{col}.{row}`` join columns col and col+1, vertical edges
    ``V{col}.{row}`` join rows row and row+1.
    """
    if width < 2:
        raise InputError("strip width must be at least 2")

    def parse(v: str) -> tuple[int, int]:
        try:
            a, b = v[1:].split(".")
            col, row = int(a), int(b)
        except ValueError:
            raise InputError(f"{v!r} is not a strip vertex") from None
        if v[0] != "c" or col < 0 or not 0 <= row < width:
            raise InputError(f"{v!r} is not a strip vertex")
        return col, row

    @lru_cache(maxsize=None)
    def neighbors(v: str):
        col, row = parse(v)
        out = [(f"H{col}.{row}", f"c{col + 1}.{row}", Fraction(1))]
        if col > 0:
            out.append((f"H{col - 1}.{row}", f"c{col - 1}.{row}", Fraction(1)))
        if row > 0:
            out.append((f"V{col}.{row - 1}", f"c{col}.{row - 1}", Fraction(1)))
        if row < width - 1:
            out.append((f"V{col}.{row}", f"c{col}.{row + 1}", Fraction(1)))
        return out

    return GraphFamily(f"strip[{width}]", "c0.0", neighbors, params={"family": "strip", "width": width})


def finite_family(g: Graph, root: Optional[str] = None) -> GraphFamily:
    """A finite connected graph as a family; distances come from exact shortest paths."""
    from .geodesy import all_pairs

    if not g.vertices:
        raise InputError("empty graph")
    if not g.is_connected():
        raise InputError("family graphs must be connected")
    root = g.vertices[0] if root is None else root
    if not g.has_vertex(root):
        raise InputError(f"unknown root {root!r}")
    oracle = all_pairs(g)
    adj = {v: [(eid, w, g.length(eid)) for eid, w in g.neighbors(v)] for v in g.vertices}

    def neighbors(v: str):
        if v not in adj:
            raise InputError(f"unknown vertex {v!r}")
        return adj[v]

    return GraphFamily(
        "finite",
        root,
        neighbors,
        distance=oracle.dist,
        finite=True,
        tail_length=lambda r: Fraction(0),
        params={"family": "finite", "graph": g},
    )


def family_from_spec(spec) -> GraphFamily:
    """Build a family from a spec document (dict, JSON text, or path to a JSON file)."""
    from .io import graph_from_json

    if isinstance(spec, (str, FsPath)):
        text = str(spec)
        if not text.lstrip().startswith("{"):
            text = FsPath(text).read_text()
        try:
            spec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"family spec is not valid JSON: {exc}") from exc
    if not isinstance(spec, dict) or "family" not in spec:
        raise InputError("family spec needs a 'family' field")
    kind = spec["family"]
    lengths = spec.get("lengths", "unit")
    params = spec.get("params", {}) or {}
    if kind == "ladder":
        return ladder(lengths)
    if kind == "subdivided_ladder":
        return subdivided_ladder_family(lengths)
    if kind == "strip":
        if lengths != "unit":
            raise InputError("strip supports unit lengths only")
        return strip(int(params.get("width", 4)))
    if kind == "finite":
        if "graph" in params:
            g = graph_from_json(params["graph"])
        elif "graph_path" in params:
            g = graph_from_json(FsPath(params["graph_path"]).read_text())
        else:
            raise InputError("finite family needs params.graph or params.graph_path")
        if lengths == "unit":
            g = g.with_lengths({e.id: Fraction(1) for e in g.edges})
        elif lengths == "explicit":
            extra = params.get("lengths", {})
            g = g.with_lengths({k: parse_length(v) for k, v in extra.items()})
        else:
            raise InputError(f"length scheme {lengths!r} is not available for finite graphs")
        return finite_family(g, params.get("root"))
    raise InputError(f"unknown family {kind!r}")
