"""
Property tests over randomly generated pasting schemes.
"""

import logging
import os
import random
import sys

import pytest
from hypothesis import given, settings, strategies as st

# Add the repository root to sys.path to import the modules
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from modules.certifier import certify_inner_anodyne, verify_certificate
from modules.computad import build_bottom_cell_inclusion, certify_homwise, ordered_pairs, verify_hom_pushouts
from modules.corpus import generate_corpus, random_scheme, random_widths, write_corpus
from modules.hom_poset import coordinatize, cube_table, enumerate_paths, hom_poset, join, meet, pathify
from modules.invariant_suite import run_invariant_suite
from modules.path_kit import bottom_cells, delete_bottom_cell
from modules.scheme_core import find_violations
from modules.scheme_io import load_scheme, serialize_scheme

# Configure logging
logger = logging.getLogger(__name__)

MAX_FACES = 4
LARGE_MAX_FACES = 7
LARGE_COUNT = 200


@pytest.fixture(scope="session")
def corpus():
    return generate_corpus(2024, 12, MAX_FACES)


@pytest.fixture(scope="session")
def large_corpus():
    return generate_corpus(31, LARGE_COUNT, LARGE_MAX_FACES)


@pytest.fixture(scope="session")
def small_schemes(large_corpus):
    return [ps for ps in large_corpus if len(ps.faces) <= MAX_FACES]


def test_face_bound(corpus):
    assert len(corpus) == 12
    assert all(len(ps.faces) <= MAX_FACES for ps in corpus)


def test_same_seed_same_corpus(corpus):
    again = generate_corpus(2024, 12, MAX_FACES)
    assert [serialize_scheme(ps.graph) for ps in again] == [serialize_scheme(ps.graph) for ps in corpus]


def test_invariants_hold(corpus):
    for ps in corpus:
        assert run_invariant_suite(ps, 2) == [], serialize_scheme(ps.graph)


def test_large_corpus_invariants(large_corpus):
    assert len(large_corpus) == LARGE_COUNT
    assert all(len(ps.faces) <= LARGE_MAX_FACES for ps in large_corpus)
    assert max(len(ps.faces) for ps in large_corpus) > MAX_FACES
    for ps in large_corpus:
        assert run_invariant_suite(ps, 2) == [], serialize_scheme(ps.graph)


def test_small_schemes_certify_homwise(small_schemes):
    assert small_schemes
    for ps in small_schemes:
        report = certify_homwise(ps)
        assert report.is_subcomputad, serialize_scheme(ps.graph)
        assert report.unknown_pairs() == [], serialize_scheme(ps.graph)
        assert report.all_certified


def test_hom_pushouts_at_every_bottom_cell(small_schemes):
    checked = 0
    for ps in small_schemes:
        for face_id in bottom_cells(ps):
            base = delete_bottom_cell(ps, face_id)
            for a, z in ordered_pairs(base, include_identities=False):
                assert verify_hom_pushouts(ps, face_id, a, z), (serialize_scheme(ps.graph), face_id, a, z)
                checked += 1
    assert checked > 0


def test_bottom_cell_inclusions_are_inner_anodyne(small_schemes):
    for ps in small_schemes:
        for face_id in bottom_cells(ps):
            base = delete_bottom_cell(ps, face_id)
            for a, z in ordered_pairs(base, include_identities=False):
                inclusion = build_bottom_cell_inclusion(ps, face_id, a, z)
                certificate = certify_inner_anodyne(inclusion.sub)
                assert certificate is not None, (serialize_scheme(ps.graph), face_id, a, z)
                assert verify_certificate(inclusion.sub, certificate)
                assert len(certificate) <= inclusion.missing()


def test_write_corpus(corpus, tmp_path):
    paths = write_corpus(corpus[:3], str(tmp_path))
    assert [os.path.basename(p) for p in paths] == ["scheme_0000.json", "scheme_0001.json", "scheme_0002.json"]
    assert load_scheme(paths[0]).face_ids == corpus[0].face_ids


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 100_000), max_faces=st.integers(0, 5))
def test_random_widths_respect_the_bound(seed, max_faces):
    widths = random_widths(random.Random(seed), max_faces)
    assert widths and sum(widths) <= max_faces and min(widths) >= 0


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_random_schemes_are_valid(seed):
    ps = random_scheme(random.Random(seed), 3)
    assert len(ps.faces) <= 3
    assert find_violations(ps.graph) == []
    assert len(ps.faces) + 1 == len(ps.edges) - len(ps.objects) + 2
    for p in enumerate_paths(ps, ps.s, ps.t):
        assert pathify(ps, coordinatize(ps, p)) == p


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_every_hom_is_a_coordinatized_lattice(seed):
    ps = random_scheme(random.Random(seed), 3)
    for x, y in ordered_pairs(ps, include_identities=False):
        table = cube_table(ps, x, y)
        hom = hom_poset(ps, x, y)
        assert [p for p, _ in table.rows] == list(hom.elements)
        assert hom.top() == hom.elements[0]
        for p in hom.elements:
            for q in hom.elements:
                low, high = meet(ps, p, q), join(ps, p, q)
                assert hom.above(low, p) and hom.above(low, q)
                assert hom.above(p, high) and hom.above(q, high)
                assert meet(ps, q, p) == low and join(ps, q, p) == high
