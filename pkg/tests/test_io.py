from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given

from geocycles.errors import InputError
from geocycles.families import family_from_spec, ladder
from geocycles.io import dumps, graph_from_json, graph_to_json, to_dot, truncation_to_json
from geocycles.truncation import build_truncation

from conftest import small_graphs


@given(small_graphs(max_vertices=8, max_extra=5))
def test_graph_json_round_trip(g):
    doc = graph_to_json(g)
    text = dumps(doc)
    assert graph_from_json(text) == g
    assert dumps(graph_to_json(graph_from_json(text))) == text


def test_graph_json_reads_decimals_and_rejects_floats():
    g = graph_from_json({"edges": [{"id": "a", "u": "p", "v": "q", "len": "0.25"}]})
    assert g.length("a") == Fraction(1, 4)
    with pytest.raises(InputError):
        graph_from_json({"edges": [{"id": "a", "u": "p", "v": "q", "len": 0.25}]})
    with pytest.raises(InputError):
        graph_from_json({"vertices": ["p"], "edges": [{"id": "a", "u": "p", "v": "q", "len": "1"}]})
    with pytest.raises(InputError):
        graph_from_json("{not json")


def test_rationals_written_as_strings():
    text = dumps({"x": Fraction(3, 6), "y": Fraction(2)})
    assert json.loads(text) == {"x": "1/2", "y": "2/1"}


def test_truncation_export_flags_outer_edges():
    t = build_truncation(ladder("nst"), 3)
    doc = truncation_to_json(t)
    outer = [e for e in doc["edges"] if e.get("outer")]
    assert len(outer) == 1 and outer[0]["len"] == ["3/256", "3/256"]
    assert all(isinstance(e["len"], str) for e in doc["edges"] if not e.get("outer"))
    dot = to_dot(t.hat, truncation=t)
    assert dot.count("style=dashed") == 1
    assert dot.startswith("graph") and dot.rstrip().endswith("}")


def test_family_specs():
    assert family_from_spec({"family": "ladder", "lengths": "nst"}).distance is not None
    assert family_from_spec('{"family": "strip", "params": {"width": 3}}').name == "strip[3]"
    g = {"edges": [{"id": "a", "u": "p", "v": "q", "len": "1"}, {"id": "b", "u": "q", "v": "p", "len": "1"}]}
    f = family_from_spec({"family": "finite", "lengths": "explicit", "params": {"graph": g, "lengths": {"a": "1/3"}}})
    assert f.distance("p", "q") == Fraction(1, 3)
    with pytest.raises(InputError):
        family_from_spec({"family": "moebius"})
    with pytest.raises(InputError):
        family_from_spec({"family": "subdivided_ladder", "lengths": "dyadic_harmonic"})
