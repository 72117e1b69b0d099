"""
Tests for plane graphs, face tracing, pasting-scheme validation and the
scheme file format.
"""

import json
import logging
import os
import sys

import pytest

# Add the repository root to sys.path to import the modules
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from modules.errors import (
    CycleFound,
    EmbeddingError,
    EmptyWidths,
    InvalidSchemeError,
    MultipleSources,
    ParseError,
    StructureError,
    UnknownVertex,
)
from modules.scheme_core import (
    build_theta2,
    edge_geq,
    find_violations,
    in_out_order,
    pred_succ,
    reachable,
    to_networkx,
    trace_faces,
    validate_pasting_scheme,
)
from modules.scheme_io import parse_scheme, scheme_fingerprint, serialize_scheme, to_dot

# Configure logging
logger = logging.getLogger(__name__)


def scheme_text(objects, edges, rotation, exterior=None):
    data = {
        "objects": objects,
        "edges": [{"id": e, "src": s, "tgt": t} for e, s, t in edges],
        "rotation": rotation,
        "exterior": exterior or {"edge": edges[0][0], "side": "left"},
    }
    return json.dumps(data)


TWO_SOURCES = scheme_text(
    ["u", "v", "w"],
    [("a", "u", "w"), ("b", "v", "w")],
    {"u": ["out:a"], "v": ["out:b"], "w": ["in:a", "in:b"]},
)

TWO_CYCLE = scheme_text(
    ["u", "v"],
    [("a", "u", "v"), ("b", "v", "u")],
    {"u": ["out:a", "in:b"], "v": ["in:a", "out:b"]},
)

# Same incoming order as the outgoing one at the sink: not a plane embedding
TWISTED = scheme_text(
    ["0", "1"],
    [("e1_0", "0", "1"), ("e1_1", "0", "1"), ("e1_2", "0", "1")],
    {"0": ["out:e1_0", "out:e1_1", "out:e1_2"], "1": ["in:e1_0", "in:e1_1", "in:e1_2"]},
)


def test_theta2_census():
    ps = build_theta2([2, 0, 3, 0])
    assert len(ps.objects) == 5
    assert len(ps.edges) == 9
    assert len(ps.faces) == 5
    assert len(ps.dom) == 4 and len(ps.cod) == 4
    assert (ps.s, ps.t) == ("0", "4")
    assert ps.dom.to_list() == ["e1_0", "e2_0", "e3_0", "e4_0"]
    assert ps.cod.to_list() == ["e1_2", "e2_0", "e3_3", "e4_0"]
    assert ps.cut_edges() == frozenset({"e2_0", "e4_0"})


def test_theta2_faces_and_partition():
    ps = build_theta2([2])
    assert ps.face_ids == ("F[e1_0]", "F[e1_1]")
    upper = ps.face("F[e1_0]")
    assert upper.source == "0" and upper.target == "1"
    assert upper.dom.to_list() == ["e1_0"] and upper.cod.to_list() == ["e1_1"]
    # every edge is in exactly one source path and one target path
    assert sorted(ps.dom_face_of) == ["e1_0", "e1_1"]
    assert sorted(ps.cod_face_of) == ["e1_1", "e1_2"]
    assert find_violations(ps.graph) == []


def test_theta2_rejects_empty_widths():
    with pytest.raises(EmptyWidths):
        build_theta2([])


def test_trace_faces_marks_exterior():
    ps = build_theta2([1, 1])
    faces = trace_faces(ps.graph)
    exterior = [f for f in faces if f.is_exterior]
    assert len(exterior) == 1
    assert exterior[0].dom.to_list() == ["e1_0", "e2_0"]
    assert exterior[0].cod.to_list() == ["e1_1", "e2_1"]
    assert len(faces) == len(ps.edges) - len(ps.objects) + 2


def test_in_out_orders_are_ascending():
    ps = build_theta2([2])
    ins, outs = in_out_order(ps, "0")
    assert ins == ()
    assert outs == ("e1_2", "e1_1", "e1_0")
    ins, outs = in_out_order(ps, "1")
    assert ins == ("e1_2", "e1_1", "e1_0")
    assert outs == ()


def test_middle_vertex_orders():
    ps = build_theta2([1, 1])
    ins, outs = in_out_order(ps, "1")
    assert ins == ("e1_1", "e1_0")
    assert outs == ("e2_1", "e2_0")


def test_pred_succ_and_edge_geq():
    ps = build_theta2([1, 1])
    p = ps.path(["e1_0", "e2_1"])
    assert pred_succ(ps, p, "1") == ("e1_0", "e2_1")
    assert pred_succ(ps, p, "0") == (None, "e1_0")
    assert pred_succ(ps, p, "2") == ("e2_1", None)
    assert edge_geq(ps, "1", "e1_0", "e1_1", incoming=True)
    assert not edge_geq(ps, "1", "e2_1", "e2_0", incoming=False)
    assert edge_geq(ps, "0", None, None, incoming=True)
    assert not edge_geq(ps, "1", None, "e2_0", incoming=False)


def test_reachable_and_unknown_vertex():
    ps = build_theta2([1, 1])
    assert reachable(ps, "0", "2")
    assert reachable(ps, "1", "1")
    assert not reachable(ps, "2", "0")
    with pytest.raises(UnknownVertex):
        reachable(ps, "0", "nowhere")


def test_to_networkx_keeps_edge_ids():
    graph = to_networkx(build_theta2([2]))
    assert graph.number_of_edges("0", "1") == 3
    assert set(graph["0"]["1"]) == {"e1_0", "e1_1", "e1_2"}


def test_multiple_sources_are_collected():
    with pytest.raises(InvalidSchemeError) as info:
        validate_pasting_scheme(parse_scheme(TWO_SOURCES))
    assert any(isinstance(v, MultipleSources) for v in info.value.violations)


def test_cycle_is_reported():
    violations = find_violations(parse_scheme(TWO_CYCLE))
    assert any(isinstance(v, CycleFound) for v in violations)


def test_non_planar_rotation():
    with pytest.raises(EmbeddingError):
        validate_pasting_scheme(parse_scheme(TWISTED))


@pytest.mark.parametrize("text", [
    "",
    "not json",
    "[]",
    json.dumps({"objects": ["0"], "edges": []}),
    scheme_text(["0", "1"], [("e", "0", "1")], {"0": ["sideways:e"], "1": ["in:e"]}),
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_scheme(text)


def test_parse_rejects_invalid_utf8():
    with pytest.raises(ParseError):
        parse_scheme(b"\xff\xfe{}")


@pytest.mark.parametrize("text", [
    scheme_text(["0", "1"], [("e", "0", "2")], {"0": ["out:e"], "1": []}),
    scheme_text(["0", "1"], [("e", "0", "1"), ("e", "0", "1")], {"0": ["out:e"], "1": ["in:e"]}),
    scheme_text(["0", "1"], [("e", "0", "1")], {"0": ["out:e"], "1": ["in:e", "in:e"]}),
    scheme_text(["0", "1"], [("e", "0", "1")], {"0": ["out:e"], "1": ["in:e"]},
                exterior={"edge": "e", "side": "up"}),
])
def test_structure_errors(text):
    with pytest.raises(StructureError):
        parse_scheme(text)


def test_serialization_is_canonical():
    ps = build_theta2([1, 2])
    text = serialize_scheme(ps.graph)
    assert text.endswith("\n")
    again = serialize_scheme(parse_scheme(text))
    assert again == text
    assert scheme_fingerprint(parse_scheme(text)) == scheme_fingerprint(ps.graph)
    assert json.loads(text)["exterior"] == {"edge": "e1_0", "side": "left"}


def test_serialization_with_parent_face_map():
    ps = build_theta2([1])
    data = json.loads(serialize_scheme(ps.graph, {"F[e1_0]": "F[e1_0]"}))
    assert data["parent_face_map"] == {"F[e1_0]": "F[e1_0]"}


def test_to_dot_lists_edges_and_faces():
    text = to_dot(build_theta2([1]))
    assert text.startswith("digraph pasting_scheme {")
    assert '"0" -> "1" [label="e1_0"];' in text
    assert "// face F[e1_0]: e1_0 => e1_1" in text
