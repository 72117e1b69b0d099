"""
Structural checks run before certification.
"""

import logging
from typing import Callable, List, Tuple

from modules.computad import is_subcomputad, ordered_pairs
from modules.errors import PastelabError
from modules.hom_poset import composite_chain, cube_table, hom_poset, join, meet
from modules.path_kit import check_presentation, presentation
from modules.scheme_core import PastingScheme, find_violations
from modules.scheme_io import parse_scheme, serialize_scheme

# Configure logging
logger = logging.getLogger(__name__)


def _partition(ps: PastingScheme, level: int) -> None:
    violations = find_violations(ps.graph)
    assert not violations, ", ".join(v.message for v in violations)


def _round_trip(ps: PastingScheme, level: int) -> None:
    text = serialize_scheme(ps.graph)
    assert serialize_scheme(parse_scheme(text)) == text, "scheme file does not round-trip"


def _presentation(ps: PastingScheme, level: int) -> None:
    check_presentation(ps, presentation(ps))
    composite_chain(ps)


def _coordinates(ps: PastingScheme, level: int) -> None:
    for x, y in ordered_pairs(ps, include_identities=False):
        cube_table(ps, x, y)
        paths = hom_poset(ps, x, y).elements
        for i, p in enumerate(paths):
            for q in paths[i + 1:]:
                meet(ps, p, q)
                join(ps, p, q)


def _subcomputad(ps: PastingScheme, level: int) -> None:
    assert is_subcomputad(ps, max(level, 1)), "graph_scat is not a subcomputad"


CHECKS: List[Tuple[str, Callable[[PastingScheme, int], None]]] = [
    ("partition", _partition),
    ("round_trip", _round_trip),
    ("presentation", _presentation),
    ("coordinatization", _coordinates),
    ("subcomputad", _subcomputad),
]


def run_invariant_suite(ps: PastingScheme, level: int) -> List[str]:
    """
    Run every structural check.

    Args:
        ps: pasting scheme
        level: truncation level for the subcomputad check

    Returns:
        list of failure strings (empty when everything holds)
    """
    failures = []
    for name, check in CHECKS:
        try:
            check(ps, level)
        except (AssertionError, PastelabError) as e:
            failures.append(f"{name}: {str(e) or e.__class__.__name__}")
    if failures:
        logger.warning(f"Invariant suite found {len(failures)} failures")
    return failures
