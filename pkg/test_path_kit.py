"""
Tests for the lies-above order, sub-schemes, cells, presentations and the
two scheme constructors.
"""

import logging
import os
import random
import sys

import pytest
from hypothesis import given, settings, strategies as st

# Add the repository root to sys.path to import the modules
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from modules.corpus import random_scheme
from modules.errors import NotAbove, NotAnEdge, NotParallel, NotReachable, NotTopCell, TrivialPath
from modules.hom_poset import enumerate_paths, hom_poset
from modules.path_kit import (
    attach_at_bottom,
    bottom_cells,
    check_presentation,
    delete_bottom_cell,
    delete_top_cell,
    directly_above_order,
    enumerate_presentations,
    extremal_paths,
    face_inclusion,
    lies_above,
    partition_parallel,
    presentation,
    replay_presentation,
    sub_scheme_between,
    sub_scheme_pq,
    subdivide_edge,
    top_cells,
    whisker_map,
)
from modules.scheme_core import Path, build_theta2

# Configure logging
logger = logging.getLogger(__name__)


@pytest.fixture
def column():
    return build_theta2([2])


@pytest.fixture
def square():
    return build_theta2([1, 1])


def test_lies_above_in_a_column(column):
    e0, e1, e2 = (column.path([e]) for e in ("e1_0", "e1_1", "e1_2"))
    assert lies_above(column, e0, e1)
    assert lies_above(column, e0, e2)
    assert lies_above(column, e1, e1)
    assert not lies_above(column, e2, e0)


def test_lies_above_modes_agree(square):
    paths = [square.path([a, b]) for a in ("e1_0", "e1_1") for b in ("e2_0", "e2_1")]
    for p in paths:
        for q in paths:
            full = lies_above(square, p, q)
            assert lies_above(square, p, q, mode="pred") == full
            assert lies_above(square, p, q, mode="succ") == full


def test_incomparable_paths(square):
    p = square.path(["e1_0", "e2_1"])
    q = square.path(["e1_1", "e2_0"])
    assert not lies_above(square, p, q)
    assert not lies_above(square, q, p)


def test_lies_above_needs_parallel_paths(square):
    with pytest.raises(NotParallel):
        lies_above(square, square.path(["e1_0"]), square.path(["e1_0", "e2_0"]))


def test_partition_parallel(square):
    p = square.path(["e1_0", "e2_0"])
    q = square.path(["e1_0", "e2_1"])
    factorization = partition_parallel(square, p, q)
    assert [s.to_list() for s in factorization.shared] == [["e1_0"], []]
    assert [(u.to_list(), w.to_list()) for u, w in factorization.blocks] == [(["e2_0"], ["e2_1"])]
    with pytest.raises(NotAbove):
        partition_parallel(square, q, p)


def test_extremal_paths(square):
    top, bottom = extremal_paths(square, "0", "2")
    assert top == square.dom and bottom == square.cod
    assert extremal_paths(square, "1", "1") == (Path.empty("1"), Path.empty("1"))
    with pytest.raises(NotReachable):
        extremal_paths(square, "2", "0")


def test_sub_scheme_between_keeps_face_ids(square):
    sub = sub_scheme_between(square, "1", "2")
    assert sub.face_ids == ("F[e2_0]",)
    assert sub.dom.to_list() == ["e2_0"] and sub.cod.to_list() == ["e2_1"]
    assert face_inclusion(sub, square) == {"F[e2_0]": "F[e2_0]"}


def test_sub_scheme_pq(column):
    sub = sub_scheme_pq(column, column.path(["e1_1"]), column.path(["e1_2"]))
    assert sub.face_ids == ("F[e1_1]",)
    with pytest.raises(TrivialPath):
        sub_scheme_pq(column, Path.empty("0"), Path.empty("0"))


def test_top_and_bottom_cells(column, square):
    assert top_cells(column) == ["F[e1_0]"]
    assert bottom_cells(column) == ["F[e1_1]"]
    assert top_cells(square) == ["F[e1_0]", "F[e2_0]"]
    assert bottom_cells(square) == ["F[e1_0]", "F[e2_0]"]


def test_delete_cells(column):
    smaller = delete_top_cell(column, "F[e1_0]")
    assert smaller.face_ids == ("F[e1_1]",)
    assert smaller.dom.to_list() == ["e1_1"]
    smaller = delete_bottom_cell(column, "F[e1_1]")
    assert smaller.face_ids == ("F[e1_0]",)
    assert smaller.cod.to_list() == ["e1_1"]
    with pytest.raises(NotTopCell):
        delete_top_cell(column, "F[e1_1]")


def test_presentation_of_square(square):
    pres = presentation(square)
    assert pres.faces() == ["F[e1_0]", "F[e2_0]"]
    first, second = pres.steps
    assert first.prefix.is_empty() and first.suffix.to_list() == ["e2_0"]
    assert second.prefix.to_list() == ["e1_1"] and second.suffix.is_empty()
    chain = replay_presentation(square, pres)
    assert [p.to_list() for p in chain] == [["e1_0", "e2_0"], ["e1_1", "e2_0"], ["e1_1", "e2_1"]]
    check_presentation(square, pres)


def test_enumerate_presentations(square, column):
    assert len(enumerate_presentations(square)) == 2
    assert len(enumerate_presentations(column)) == 1
    assert len(enumerate_presentations(build_theta2([1, 1, 1]))) == 6
    assert len(enumerate_presentations(build_theta2([1, 1, 1]), cap=4)) == 4


def test_directly_above_order(column, square):
    assert sorted(directly_above_order(column).edges) == [("F[e1_0]", "F[e1_1]")]
    assert list(directly_above_order(square).edges) == []


def test_attach_at_bottom():
    ps, face_id = attach_at_bottom(build_theta2([1, 1]), 0, 2)
    assert face_id == "F[e1_1]"
    face = ps.face(face_id)
    assert face.dom.to_list() == ["e1_1", "e2_1"]
    assert face.cod.to_list() == ["a0.0"]
    assert ps.cod.to_list() == ["a0.0"]
    assert len(ps.faces) == 3


def test_attach_with_longer_target():
    ps, face_id = attach_at_bottom(build_theta2([1]), 0, 1, cod_length=2)
    assert ps.face(face_id).cod.to_list() == ["a0.0", "a0.1"]
    assert "a0.v1" in ps.objects


def test_subdivide_edge(square):
    ps = subdivide_edge(square, "e2_1", 3)
    assert "e2_1.v1" in ps.objects
    assert ps.cod.to_list() == ["e1_1", "e2_1.1", "e2_1.2"]
    assert ps.face("F[e2_0]").cod.to_list() == ["e2_1.1", "e2_1.2"]
    assert subdivide_edge(square, "e2_1", 2) is square
    with pytest.raises(NotAnEdge):
        subdivide_edge(square, "nope", 3)


def test_subdivide_marker_edge(square):
    ps = subdivide_edge(square, "e1_0", 4)
    assert ps.dom.to_list() == ["e1_0.1", "e1_0.2", "e1_0.3", "e2_0"]
    assert ps.graph.exterior == ("e1_0.1", "left")


def test_whisker_map(square):
    ps = subdivide_edge(square, "e1_0", 3)
    image = whisker_map(square, "e1_0", 3)
    assert image(square.dom, ps) == ps.dom
    assert image(Path.empty("1"), ps) == Path.empty("1")


def reachable_pairs(ps):
    return [(x, y) for x in ps.objects for y in ps.objects if x != y and y in ps.descendants[x]]


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_lies_above_is_a_partial_order(seed):
    ps = random_scheme(random.Random(seed), 3)
    for x, y in reachable_pairs(ps):
        paths = enumerate_paths(ps, x, y)
        above = {(p, q): lies_above(ps, p, q) for p in paths for q in paths}
        for i, p in enumerate(paths):
            assert not any(above[(q, p)] for q in paths[i + 1:])
        for p in paths:
            assert above[(p, p)]
            for q in paths:
                if p != q:
                    assert not (above[(p, q)] and above[(q, p)])
                for r in paths:
                    if above[(p, q)] and above[(q, r)]:
                        assert above[(p, r)]


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_sub_scheme_pq_membership(seed):
    ps = random_scheme(random.Random(seed), 3)
    for x, y in reachable_pairs(ps):
        paths = enumerate_paths(ps, x, y)
        for p in paths:
            for q in paths:
                if not lies_above(ps, p, q):
                    continue
                sub = sub_scheme_pq(ps, p, q)
                between = [m for m in paths if lies_above(ps, p, m) and lies_above(ps, m, q)]
                vertices = set().union(*(m.vertices for m in between))
                edges = set().union(*(m.edges for m in between))
                assert set(sub.objects) == vertices
                assert {e.id for e in sub.edges} == edges
                assert set(enumerate_paths(sub, x, y)) == set(between)
                assert set(sub.face_ids) == {f.id for f in ps.faces
                                             if set(f.dom.edges) <= edges and set(f.cod.edges) <= edges}
                assert (sub.s, sub.t, sub.dom, sub.cod) == (x, y, p, q)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_sub_scheme_inclusions_are_locally_fully_faithful(seed):
    ps = random_scheme(random.Random(seed), 3)
    for x, y in reachable_pairs(ps):
        sub = sub_scheme_between(ps, x, y)
        assert set(face_inclusion(sub, ps)) == set(sub.face_ids)
        for u, w in reachable_pairs(sub):
            local = hom_poset(sub, u, w)
            assert set(local.elements) <= set(hom_poset(ps, u, w).elements)
            for p in local.elements:
                for q in local.elements:
                    assert local.above(p, q) == lies_above(ps, p, q)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_hom_is_the_maximal_hom_of_its_sub_scheme(seed):
    ps = random_scheme(random.Random(seed), 3)
    for x, y in reachable_pairs(ps):
        sub = sub_scheme_between(ps, x, y)
        local = hom_poset(sub, x, y).poset
        assert local.is_isomorphic_via(hom_poset(ps, x, y).poset, {p: p for p in local.elements})
        assert set(sub.objects) == {v for v in ps.objects if v in ps.descendants[x] and y in ps.descendants[v]}
