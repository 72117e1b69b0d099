"""
Tests for nerves of posets and the inner-anodyne certifier.
"""

import logging
import os
import random
import sys

import pytest
from hypothesis import given, settings, strategies as st

# Add the repository root to sys.path to import the modules
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from modules.cat_kit import FinPoset, PosetInclusion, PosetMap, dwyer_witness, random_poset
from modules.certifier import (
    ChainComplexSSet,
    HornStep,
    InnerAnodyneCertificate,
    certify_inner_anodyne,
    generated_by,
    image_under,
    intersection,
    nerve,
    poset_id,
    pushout_of_nerves,
    union,
    verify_certificate,
)
from modules.errors import NotSubcomplex, PreconditionFailed

# Configure logging
logger = logging.getLogger(__name__)

SIMPLEX_2 = FinPoset.chain(3)
SIMPLEX_3 = FinPoset.chain(4)


def spine(P):
    n = len(P)
    return generated_by(P, [(i, i + 1) for i in range(n - 1)])


def test_nerve_census():
    assert nerve(SIMPLEX_2).census() == {0: 3, 1: 3, 2: 1}
    assert nerve(SIMPLEX_3, max_dim=1).census() == {0: 4, 1: 6}
    square = FinPoset.chain(2).product(FinPoset.chain(2))
    assert nerve(square).census() == {0: 4, 1: 5, 2: 2}


def test_subcomplexes_must_be_closed():
    with pytest.raises(NotSubcomplex):
        ChainComplexSSet(SIMPLEX_2, frozenset({(0, 1)}))
    with pytest.raises(NotSubcomplex):
        ChainComplexSSet(SIMPLEX_2, frozenset({(1, 0), (0,), (1,)}))


def test_union_and_intersection():
    left = generated_by(SIMPLEX_2, [(0, 1)])
    right = generated_by(SIMPLEX_2, [(1, 2)])
    assert union(left, right).chains == spine(SIMPLEX_2).chains
    assert intersection(left, right).chains == frozenset({(1,)})


def test_spine_of_two_simplex():
    sub = spine(SIMPLEX_2)
    certificate = certify_inner_anodyne(sub)
    assert certificate is not None
    assert certificate.steps == (HornStep((0, 1, 2), 1),)
    assert verify_certificate(sub, certificate)


def test_outer_horn_is_unknown():
    sub = generated_by(SIMPLEX_2, [(0, 1), (0, 2)])
    assert certify_inner_anodyne(sub) is None


def test_full_nerve_needs_no_steps():
    sub = nerve(SIMPLEX_3)
    certificate = certify_inner_anodyne(sub)
    assert certificate is not None and len(certificate) == 0
    assert verify_certificate(sub, certificate)


def test_spine_of_three_simplex():
    sub = spine(SIMPLEX_3)
    certificate = certify_inner_anodyne(sub)
    assert certificate is not None
    assert len(certificate) == 4
    assert verify_certificate(sub, certificate)
    assert all(0 < step.k < step.dim for step in certificate.steps)


def test_reordered_certificate_fails():
    sub = spine(SIMPLEX_3)
    certificate = certify_inner_anodyne(sub)
    shuffled = InnerAnodyneCertificate(certificate.ambient, certificate.ambient_id,
                                       tuple(reversed(certificate.steps)))
    check = verify_certificate(sub, shuffled)
    assert not check
    assert check.failed_step == 0


def test_truncated_certificate_does_not_reach_the_nerve():
    sub = spine(SIMPLEX_3)
    certificate = certify_inner_anodyne(sub)
    partial = InnerAnodyneCertificate(certificate.ambient, certificate.ambient_id, certificate.steps[:-1])
    check = verify_certificate(sub, partial)
    assert not check.ok and check.failed_step == 3


def test_outer_step_is_rejected():
    sub = generated_by(SIMPLEX_2, [(0, 1), (0, 2)])
    bogus = InnerAnodyneCertificate(SIMPLEX_2, poset_id(SIMPLEX_2), (HornStep((0, 1, 2), 0),))
    check = verify_certificate(sub, bogus)
    assert not check and check.reason == "horn index is not inner"


def test_budget_exhaustion_is_unknown():
    assert certify_inner_anodyne(spine(SIMPLEX_3), budget=1) is None


def test_truncation_can_block_a_certificate():
    # seven chains are missing below dimension 3 and every filling adds two
    truncated = ChainComplexSSet(SIMPLEX_3, spine(SIMPLEX_3).chains, max_dim=2)
    assert certify_inner_anodyne(truncated) is None


def test_truncation_above_the_height_changes_nothing():
    truncated = ChainComplexSSet(SIMPLEX_3, spine(SIMPLEX_3).chains, max_dim=4)
    certificate = certify_inner_anodyne(truncated)
    assert certificate is not None and verify_certificate(truncated, certificate)


def test_certificate_json():
    certificate = certify_inner_anodyne(spine(SIMPLEX_2), ambient_id="delta2")
    assert certificate.to_json() == {"ambient": "delta2", "steps": [{"chain": [0, 1, 2], "k": 1}]}


def test_image_under_collapses_degenerate_chains():
    collapse = PosetMap(SIMPLEX_2, FinPoset.chain(2), (0, 0, 1))
    image = image_under(collapse, nerve(SIMPLEX_2))
    assert image.chains == nerve(FinPoset.chain(2)).chains


def test_pushout_of_nerves_is_mono():
    one, two = FinPoset.chain(1), FinPoset.chain(2)
    result = pushout_of_nerves(PosetMap(one, two, (0,)), PosetInclusion(one, two, (0,)))
    assert result.is_mono
    assert len(result.subcomplex) == 5
    assert len(result.pushout.poset) == 3
    assert result.subcomplex.is_full()


def test_pushout_of_nerves_needs_a_full_injective_leg():
    one, two, pair = FinPoset.chain(1), FinPoset.chain(2), FinPoset.discrete(2)
    with pytest.raises(PreconditionFailed):
        pushout_of_nerves(PosetMap(pair, two, (0, 1)), PosetInclusion(pair, FinPoset.discrete(3), (0, 1)))
    result = pushout_of_nerves(PosetMap(one, two, (1,)), PosetInclusion(one, two, (0,)), max_dim=1)
    assert result.is_mono
    assert result.subcomplex.max_dim == 1


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(2, 5))
def test_pushout_of_nerves_over_random_sieves(seed, n):
    rng = random.Random(seed)
    B = random_poset(rng, n, density=0.4)
    sieve = sorted(set().union(*(B.down_set(i) for i in rng.sample(range(n), 2))))
    A = FinPoset(tuple(B.elements[i] for i in sieve), tuple(tuple(B.le[i][j] for j in sieve) for i in sieve))
    incl = PosetInclusion(A, B, tuple(sieve))
    if dwyer_witness(incl) is None:
        return
    C = A.product(FinPoset.chain(2))
    F = PosetMap(A, C, tuple(C.index[(a, 0)] for a in A.elements))
    result = pushout_of_nerves(F, incl, max_dim=3)
    expected = len(nerve(C, 3)) + len(nerve(B, 3)) - len(nerve(A, 3))
    assert result.is_mono
    assert len(result.subcomplex) == expected
