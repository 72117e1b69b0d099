"""
Random pasting schemes for property tests and the corpus command.

Every scheme starts as a random theta2 shape and then takes a few random
bottom attachments and edge subdivisions, the two moves that generate all
pasting schemes. Everything is driven by one random.Random, so a seed fixes
the corpus byte for byte.
"""

import logging
import os
import random
from typing import List

from modules.errors import PreconditionFailed
from modules.path_kit import attach_at_bottom, subdivide_edge
from modules.scheme_core import PastingScheme, build_theta2, validate_pasting_scheme
from modules.scheme_io import parse_scheme, serialize_scheme

# Configure logging
logger = logging.getLogger(__name__)

MAX_COLUMNS = 3
MAX_WIDTH = 2
MAX_MOVES = 3


def random_widths(rng: random.Random, max_faces: int) -> List[int]:
    widths = [rng.randint(0, MAX_WIDTH) for _ in range(rng.randint(1, MAX_COLUMNS))]
    while sum(widths) > max_faces:
        j = rng.choice([i for i, k in enumerate(widths) if k > 0])
        widths[j] -= 1
    return widths


def random_scheme(rng: random.Random, max_faces: int) -> PastingScheme:
    """
    A random pasting scheme with at most max_faces interior faces.

    Args:
        rng: random source
        max_faces: face bound (0 gives a path)

    Returns:
        PastingScheme
    """
    ps = build_theta2(random_widths(rng, max_faces))
    for _ in range(rng.randint(0, MAX_MOVES)):
        if len(ps.faces) < max_faces and rng.random() < 0.6:
            start = rng.randrange(len(ps.cod))
            length = rng.randint(1, min(3, len(ps.cod) - start))
            ps, _ = attach_at_bottom(ps, start, length, rng.randint(1, 2))
        else:
            edge = rng.choice(ps.edges)
            try:
                ps = subdivide_edge(ps, edge.id, rng.choice((3, 4)))
            except PreconditionFailed as e:
                logger.debug(f"Skipped subdivision of {edge.id}: {e.message}")
    return ps


def generate_corpus(seed: int, count: int, max_faces: int) -> List[PastingScheme]:
    """
    Generate count random schemes from one seed.
    """
    rng = random.Random(seed)
    schemes = [random_scheme(rng, max_faces) for _ in range(count)]
    logger.info(f"Generated {count} schemes from seed {seed} (max {max_faces} faces)")
    return schemes


def corpus_file_name(index: int) -> str:
    return f"scheme_{index:04d}.json"


def write_corpus(schemes: List[PastingScheme], out_dir: str) -> List[str]:
    """
    Write schemes as canonical scheme files; each file is re-read and
    re-validated after writing.

    Returns:
        list of written paths
    """
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for i, ps in enumerate(schemes):
        text = serialize_scheme(ps.graph)
        path = os.path.join(out_dir, corpus_file_name(i))
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        with open(path, "r", encoding="utf-8") as f:
            reread = parse_scheme(f.read())
        validate_pasting_scheme(reread)
        assert serialize_scheme(reread) == text, f"{path} does not round-trip"
        paths.append(path)
    return paths
