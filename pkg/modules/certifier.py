"""
Nerves of finite posets as chain complexes, and a search for inner-anodyne
certificates.

A simplicial subset of the nerve of a poset is stored by its nondegenerate
simplices: strictly increasing chains of element indices, closed under
taking subchains. A certificate is a sequence of inner horn fillings, each
adding one missing chain together with one missing inner face, that grows a
subcomplex into the full nerve. Finding one proves the inclusion is inner
anodyne; failing to find one within budget proves nothing.
"""

import hashlib
import itertools
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, FrozenSet, Hashable, Iterable, Iterator, List, Optional, Set, Tuple

from modules.cat_kit import FinPoset, PosetInclusion, PosetMap, PosetPushout, pushout_along_dwyer
from modules.errors import NotSubcomplex, PreconditionFailed

# Configure logging
logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 1_000_000

Chain = Tuple[int, ...]


def element_label(element: Hashable) -> Any:
    """JSON-friendly label for a poset element (paths print as their edge lists)."""
    if hasattr(element, "to_list"):
        return element.to_list()
    if isinstance(element, tuple):
        return [element_label(e) for e in element]
    return element if isinstance(element, (str, int)) else str(element)


def poset_id(P: FinPoset) -> str:
    text = json.dumps(P.to_json(element_label), sort_keys=True)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def faces_of(chain: Chain) -> List[Chain]:
    """The codimension-one faces d_0 c, ..., d_n c."""
    return [chain[:i] + chain[i + 1:] for i in range(len(chain))]


@dataclass(frozen=True)
class ChainComplexSSet:
    """
    A simplicial subset of the nerve of a poset, given by its nondegenerate
    simplices. max_dim truncates: no chain has more than max_dim + 1 elements.
    """
    ambient: FinPoset
    chains: FrozenSet[Chain]
    max_dim: Optional[int] = None

    def __post_init__(self):
        for c in self.chains:
            if not c or any(not self.ambient.lt_indices(a, b) for a, b in zip(c, c[1:])):
                raise NotSubcomplex(f"{c} is not a strictly increasing chain")
            if self.max_dim is not None and len(c) > self.max_dim + 1:
                raise NotSubcomplex(f"{c} is above the truncation level {self.max_dim}")
            if len(c) > 1 and any(f not in self.chains for f in faces_of(c)):
                raise NotSubcomplex(f"a face of {c} is missing")

    def __len__(self) -> int:
        return len(self.chains)

    def __contains__(self, chain: Chain) -> bool:
        return chain in self.chains

    def simplices(self, n: int) -> List[Chain]:
        """Nondegenerate n-simplices, sorted."""
        return sorted(c for c in self.chains if len(c) == n + 1)

    def census(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for c in self.chains:
            counts[len(c) - 1] = counts.get(len(c) - 1, 0) + 1
        return dict(sorted(counts.items()))

    def labels(self, chain: Chain) -> Tuple[Hashable, ...]:
        return tuple(self.ambient.elements[i] for i in chain)

    def is_full(self) -> bool:
        return self.chains == nerve(self.ambient, self.max_dim).chains


def iter_chains(P: FinPoset, max_dim: Optional[int] = None) -> Iterator[Chain]:
    """Every strictly increasing chain of P, depth first."""
    limit = None if max_dim is None else max_dim + 1

    def extend(chain: Chain) -> Iterator[Chain]:
        yield chain
        if limit is not None and len(chain) >= limit:
            return
        for j in P.strictly_above[chain[-1]]:
            yield from extend(chain + (j,))

    for i in range(len(P)):
        yield from extend((i,))


def nerve(P: FinPoset, max_dim: Optional[int] = None) -> ChainComplexSSet:
    """
    The nerve of a poset, truncated at max_dim when given.
    """
    return ChainComplexSSet(P, frozenset(iter_chains(P, max_dim)), max_dim)


def generated_by(P: FinPoset, chains: Iterable[Chain], max_dim: Optional[int] = None) -> ChainComplexSSet:
    """The smallest subcomplex containing the given chains."""
    closed: Set[Chain] = set()
    for c in chains:
        for size in range(1, len(c) + 1):
            closed.update(itertools.combinations(c, size))
    return ChainComplexSSet(P, frozenset(closed), max_dim)


def _same_ambient(a: ChainComplexSSet, b: ChainComplexSSet) -> None:
    if a.ambient != b.ambient or a.max_dim != b.max_dim:
        raise PreconditionFailed("subcomplexes live in different nerves")


def union(a: ChainComplexSSet, b: ChainComplexSSet) -> ChainComplexSSet:
    _same_ambient(a, b)
    return ChainComplexSSet(a.ambient, a.chains | b.chains, a.max_dim)


def intersection(a: ChainComplexSSet, b: ChainComplexSSet) -> ChainComplexSSet:
    _same_ambient(a, b)
    return ChainComplexSSet(a.ambient, a.chains & b.chains, a.max_dim)


def image_under(f: PosetMap, X: ChainComplexSSet) -> ChainComplexSSet:
    """
    The image of a subcomplex under the nerve of a monotone map; degenerate
    images collapse to the chain of their distinct elements.
    """
    images = set()
    for c in X.chains:
        mapped = [f.mapping[i] for i in c]
        images.add(tuple(v for k, v in enumerate(mapped) if k == 0 or mapped[k - 1] != v))
    return ChainComplexSSet(f.target, frozenset(images), X.max_dim)


@dataclass(frozen=True)
class NervePushout:
    """The union of the two image subcomplexes inside the nerve of the poset pushout."""
    pushout: PosetPushout
    subcomplex: ChainComplexSSet
    is_mono: bool


def pushout_of_nerves(F: PosetMap, I: PosetInclusion, max_dim: Optional[int] = None) -> NervePushout:
    """
    Realize the pushout of nerves NC <- NA -> NB inside N(D).

    Args:
        F: A -> C, injective and full
        I: A -> B, a Dwyer inclusion
        max_dim: truncation level

    Raises:
        PreconditionFailed: if F is not injective and full
    """
    if not (F.is_injective() and F.is_full()):
        raise PreconditionFailed("the non-Dwyer leg must be injective and full")
    pushout = pushout_along_dwyer(F, I)
    from_c = image_under(pushout.j, nerve(F.target, max_dim))
    from_b = image_under(pushout.g, nerve(I.ambient, max_dim))
    sub = union(from_c, from_b)
    expected = len(nerve(F.target, max_dim)) + len(nerve(I.ambient, max_dim)) - len(nerve(I.sub, max_dim))
    is_mono = len(sub) == expected
    if not is_mono:
        logger.warning(f"comparison map is not a monomorphism: {len(sub)} chains, expected {expected}")
    return NervePushout(pushout, sub, is_mono)


@dataclass(frozen=True)
class HornStep:
    """Fill the inner horn of chain at index k: adds chain and its k-th face."""
    chain: Chain
    k: int

    @property
    def face(self) -> Chain:
        return self.chain[:self.k] + self.chain[self.k + 1:]

    @property
    def dim(self) -> int:
        return len(self.chain) - 1


@dataclass(frozen=True)
class InnerAnodyneCertificate:
    ambient: FinPoset = field(repr=False)
    ambient_id: str
    steps: Tuple[HornStep, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def to_json(self, label: Callable[[Hashable], Any] = element_label) -> Dict[str, Any]:
        return {
            "ambient": self.ambient_id,
            "steps": [{"chain": [label(self.ambient.elements[i]) for i in step.chain], "k": step.k}
                      for step in self.steps],
        }


def _horn_candidates(present: Set[Chain], missing: List[Chain], missing_set: Set[Chain]) -> List[HornStep]:
    candidates = []
    for c in missing:
        if len(c) < 3 or c not in missing_set:
            continue
        absent = [i for i, f in enumerate(faces_of(c)) if f not in present]
        if len(absent) == 1 and 0 < absent[0] < len(c) - 1:
            candidates.append(HornStep(c, absent[0]))
    return candidates


def certify_inner_anodyne(sub: ChainComplexSSet, budget: int = DEFAULT_BUDGET,
                          ambient_id: Optional[str] = None) -> Optional[InnerAnodyneCertificate]:
    """
    Search for inner horn fillings that grow sub into the full (truncated) nerve.

    Missing chains are tried by ascending dimension, then lexicographically;
    dead ends backtrack until budget step attempts are spent.

    Args:
        sub: subcomplex of the nerve of its ambient poset
        budget: maximum number of steps tried
        ambient_id: identifier recorded in the certificate

    Returns:
        InnerAnodyneCertificate, or None when the search gives up (unknown)
    """
    full = nerve(sub.ambient, sub.max_dim)
    if not sub.chains <= full.chains:
        raise NotSubcomplex("chains outside the ambient nerve")
    missing = sorted(full.chains - sub.chains, key=lambda c: (len(c), c))
    missing_set = set(missing)
    present = set(sub.chains)
    steps: List[HornStep] = []
    frames: List[List[Any]] = []
    used = 0

    while missing_set:
        frames.append([_horn_candidates(present, missing, missing_set), 0])
        while True:
            frame = frames[-1]
            candidates, index = frame
            if index < len(candidates):
                frame[1] += 1
                step = candidates[index]
                used += 1
                if used > budget:
                    logger.warning(f"Certifier budget of {budget} steps exhausted")
                    return None
                for c in (step.chain, step.face):
                    present.add(c)
                    missing_set.discard(c)
                steps.append(step)
                break
            frames.pop()
            if not frames:
                logger.info(f"Certifier found no certificate; {len(missing_set)} chains left")
                return None
            undone = steps.pop()
            for c in (undone.chain, undone.face):
                present.discard(c)
                missing_set.add(c)

    certificate = InnerAnodyneCertificate(sub.ambient, ambient_id or poset_id(sub.ambient), tuple(steps))
    logger.debug(f"Certificate of length {len(certificate)} after {used} attempts")
    return certificate


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    failed_step: Optional[int] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(sub: ChainComplexSSet, certificate: InnerAnodyneCertificate) -> CertificateCheck:
    """
    Replay a certificate step by step.

    Returns:
        CertificateCheck; failed_step is the index of the first bad step, or
        len(steps) when the replay does not end at the full nerve
    """
    full = nerve(sub.ambient, sub.max_dim)
    present = set(sub.chains)
    for i, step in enumerate(certificate.steps):
        c, k = step.chain, step.k
        if step.dim < 2 or not 0 < k < step.dim:
            return CertificateCheck(False, i, "horn index is not inner")
        if c not in full.chains:
            return CertificateCheck(False, i, "not a chain of the ambient nerve")
        if c in present or step.face in present:
            return CertificateCheck(False, i, "simplex or face already present")
        if any(f not in present for j, f in enumerate(faces_of(c)) if j != k):
            return CertificateCheck(False, i, "horn is not complete")
        present.add(c)
        present.add(step.face)
    if present != set(full.chains):
        return CertificateCheck(False, len(certificate.steps), "replay does not reach the full nerve")
    return CertificateCheck(True)
