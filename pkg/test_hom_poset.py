"""
Tests for hom-posets and their cube coordinates.
"""

import logging
import os
import sys

import pytest

# Add the repository root to sys.path to import the modules
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from modules.errors import NotFullPath, NotInPge, NotParallel
from modules.hom_poset import (
    CubePoint,
    coordinatize,
    cube_table,
    edge_coloring,
    enumerate_paths,
    hom_poset,
    join,
    meet,
    pathify,
    pge_points,
    composite_chain,
    verify_concat_ff,
)
from modules.scheme_core import Path, build_theta2

# Configure logging
logger = logging.getLogger(__name__)


def labels(paths):
    return [p.to_list() for p in paths]


def test_enumerate_paths_topmost_first():
    ps = build_theta2([2])
    assert labels(enumerate_paths(ps, "0", "1")) == [["e1_0"], ["e1_1"], ["e1_2"]]
    assert enumerate_paths(ps, "1", "1") == [Path.empty("1")]
    assert enumerate_paths(ps, "1", "0") == []
    square = build_theta2([1, 1])
    assert labels(enumerate_paths(square, "0", "2")) == [
        ["e1_0", "e2_0"], ["e1_0", "e2_1"], ["e1_1", "e2_0"], ["e1_1", "e2_1"],
    ]


def test_column_hom_is_a_chain():
    ps = build_theta2([2])
    hom = hom_poset(ps, "0", "1")
    assert len(hom) == 3
    assert hom.top().to_list() == ["e1_0"]
    assert hom.bottom().to_list() == ["e1_2"]
    assert [(p.to_list(), q.to_list()) for p, q in hom.hasse_edges()] == [
        (["e1_0"], ["e1_1"]),
        (["e1_1"], ["e1_2"]),
    ]


def test_four_chain():
    ps = build_theta2([3])
    hom = hom_poset(ps, "0", "1")
    assert len(hom) == 4
    assert hom.poset.height() == 3
    assert all(hom.above(p, q) or hom.above(q, p) for p in hom.elements for q in hom.elements)


def test_three_composable_cells_give_a_cube():
    ps = build_theta2([1, 1, 1])
    hom = hom_poset(ps, "0", "3")
    assert len(hom) == 8
    table = cube_table(ps, "0", "3")
    assert table.faces == ("F[e1_0]", "F[e2_0]", "F[e3_0]")
    assert table.constraints == ()
    assert {point.bits for _, point in table.rows} == {
        (a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)
    }


def test_coordinatize_middle_of_column():
    ps = build_theta2([2])
    point = coordinatize(ps, ps.path(["e1_1"]))
    assert point.as_dict() == {"F[e1_0]": 1, "F[e1_1]": 0}
    assert coordinatize(ps, ps.dom).bits == (0, 0)
    assert coordinatize(ps, ps.cod).bits == (1, 1)


def test_coordinatize_needs_a_full_path():
    ps = build_theta2([1, 1])
    with pytest.raises(NotFullPath):
        coordinatize(ps, ps.path(["e1_0"]))


def test_pathify_inverts_coordinatize():
    ps = build_theta2([2, 1])
    for p in enumerate_paths(ps, ps.s, ps.t):
        assert pathify(ps, coordinatize(ps, p)) == p


def test_pathify_rejects_points_outside_the_subposet():
    ps = build_theta2([2])
    point = CubePoint(("F[e1_0]", "F[e1_1]"), (0, 1))
    with pytest.raises(NotInPge):
        pathify(ps, point)


def test_edge_coloring_gold_is_the_path():
    ps = build_theta2([2])
    coloring = edge_coloring(ps, CubePoint(("F[e1_0]", "F[e1_1]"), (1, 0)))
    assert coloring.gold == frozenset({"e1_1"})
    assert coloring.color("e1_0") == "silver"


def test_pge_points_respect_constraints():
    points = pge_points(["a", "b"], [("a", "b")])
    assert {p.bits for p in points} == {(0, 0), (1, 0), (1, 1)}


def test_cube_table_on_a_column():
    table = cube_table(build_theta2([2]), "0", "1")
    assert table.constraints == (("F[e1_0]", "F[e1_1]"),)
    assert [point.label() for _, point in table.rows] == ["00", "10", "11"]
    data = table.to_json()
    assert data["points"][1] == {"path": ["e1_1"], "point": {"F[e1_0]": 1, "F[e1_1]": 0}}


def test_cube_table_of_identity_and_unreachable():
    ps = build_theta2([1, 1])
    table = cube_table(ps, "1", "1")
    assert len(table.rows) == 1 and table.faces == ()
    assert cube_table(ps, "2", "0").rows == ()


def test_cube_table_on_an_inner_hom():
    ps = build_theta2([1, 2, 1])
    table = cube_table(ps, "1", "2")
    assert table.faces == ("F[e2_0]", "F[e2_1]")
    assert len(table.rows) == 3


def test_meet_and_join():
    ps = build_theta2([1, 1])
    p = ps.path(["e1_0", "e2_1"])
    q = ps.path(["e1_1", "e2_0"])
    assert meet(ps, p, q).to_list() == ["e1_0", "e2_0"]
    assert join(ps, p, q).to_list() == ["e1_1", "e2_1"]
    assert meet(ps, p, p) == p
    with pytest.raises(NotParallel):
        meet(ps, p, ps.path(["e1_0"]))


def test_concatenation_is_fully_faithful():
    ps = build_theta2([1, 2])
    check = verify_concat_ff(ps, "0", "1", "2")
    assert check.ok and check.witness is None


def test_composite_chain():
    chain = composite_chain(build_theta2([2]))
    assert labels(chain) == [["e1_0"], ["e1_1"], ["e1_2"]]
    chain = composite_chain(build_theta2([1, 1]))
    assert len(chain) == 3
    assert chain[0].to_list() == ["e1_0", "e2_0"] and chain[-1].to_list() == ["e1_1", "e2_1"]


def test_hom_to_json():
    data = hom_poset(build_theta2([1]), "0", "1").to_json()
    assert data == {
        "x": "0",
        "y": "1",
        "elements": [["e1_0"], ["e1_1"]],
        "relation": [[1, 1], [0, 1]],
    }
