"""
Truncated simplicial categories built from a pasting scheme.

nerve_f2cat takes the nerve of every hom-poset of the free 2-category;
graph_scat is the free simplicial category on the scheme's edges and faces,
realized inside it as the chains whose atomic factorization only uses edges
and single faces. An n-arrow is a weak chain p_0 >= ... >= p_n of parallel
paths (tuples of Path); homs store only the nondegenerate ones.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from modules.batch_processing import BatchProcessor
from modules.cat_kit import FinPoset, PosetInclusion, PosetMap, pushout_along_dwyer
from modules.certifier import (
    DEFAULT_BUDGET,
    ChainComplexSSet,
    InnerAnodyneCertificate,
    certify_inner_anodyne,
    image_under,
    nerve,
    union,
    verify_certificate,
)
from modules.errors import NotAnArrow, NotParallel, PreconditionFailed
from modules.hom_poset import hom_poset
from modules.path_kit import (
    check_parallel,
    delete_bottom_cell,
    lies_above,
    subdivide_edge,
    subdivision_path,
    subdivision_vertices,
    whisker_map,
)
from modules.scheme_core import Face, Path, PastingScheme, reachable

# Configure logging
logger = logging.getLogger(__name__)

DEFAULT_LEVEL = 4

Arrow = Tuple[Path, ...]
Pair = Tuple[str, str]


def ordered_pairs(ps: PastingScheme, include_identities: bool = True) -> List[Pair]:
    """Pairs (a, z) with z reachable from a, in object order."""
    return [(a, z) for a in ps.objects for z in ps.objects
            if z in ps.descendants[a] and (include_identities or a != z)]


def dedupe(arrow: Sequence[Any]) -> Tuple[Any, ...]:
    """Collapse repeated neighbours: the nondegenerate chain under a degenerate one."""
    return tuple(p for i, p in enumerate(arrow) if i == 0 or arrow[i - 1] != p)


@dataclass(frozen=True, eq=False)
class TruncSCat:
    """A simplicial category truncated at level; homs are chain complexes over hom-posets."""
    ps: PastingScheme = field(repr=False)
    level: int
    homs: Mapping[Pair, ChainComplexSSet] = field(repr=False)

    @property
    def objects(self) -> Tuple[str, ...]:
        return self.ps.objects

    def hom(self, a: str, z: str) -> Optional[ChainComplexSSet]:
        return self.homs.get((a, z))

    def contains(self, arrow: Sequence[Path]) -> bool:
        """Whether the (possibly degenerate) n-arrow lies in its hom."""
        if not arrow or len(arrow) > self.level + 1:
            return False
        cx = self.homs.get((arrow[0].start, arrow[0].end))
        if cx is None:
            return False
        index = cx.ambient.index
        try:
            chain = tuple(index[p] for p in dedupe(arrow))
        except KeyError:
            return False
        return chain in cx.chains

    def compose(self, first: Sequence[Path], second: Sequence[Path]) -> Arrow:
        """Pointwise concatenation of two n-arrows, first then second."""
        if len(first) != len(second):
            raise PreconditionFailed("only arrows of the same dimension compose")
        composite = tuple(p.then(q) for p, q in zip(first, second))
        assert self.contains(composite), "composite left the simplicial category"
        return composite

    def chain_count(self) -> int:
        return sum(len(cx) for cx in self.homs.values())


def nerve_f2cat(ps: PastingScheme, level: int = DEFAULT_LEVEL) -> TruncSCat:
    """
    Nerves of every hom-poset, truncated at level.

    Raises:
        PreconditionFailed: if level < 0
    """
    if level < 0:
        raise PreconditionFailed("truncation level must be non-negative", level=level)
    homs = {pair: nerve(hom_poset(ps, *pair).poset, level) for pair in ordered_pairs(ps)}
    return TruncSCat(ps, level, homs)


@dataclass(frozen=True)
class AtomicArrow:
    """An n-arrow whose outer paths share only their end vertices."""
    paths: Arrow

    @property
    def dim(self) -> int:
        return len(self.paths) - 1

    @property
    def start(self) -> str:
        return self.paths[0].start

    @property
    def end(self) -> str:
        return self.paths[0].end

    def is_degenerate(self) -> bool:
        return len(dedupe(self.paths)) < len(self.paths)

    def to_json(self) -> List[List[str]]:
        return [p.to_list() for p in self.paths]


def _factor(paths: Arrow) -> List[AtomicArrow]:
    top, bottom = paths[0], paths[-1]
    bottom_vertices = set(bottom.vertices)
    common = [v for v in top.vertices if v in bottom_vertices]
    return [AtomicArrow(tuple(p.between(u, w) for p in paths)) for u, w in zip(common, common[1:])]


def factor_atomic(ps: PastingScheme, arrow: Sequence[Path]) -> List[AtomicArrow]:
    """
    Split an n-arrow at every vertex its outer paths share.

    Returns:
        the atomic factors, left to right; [] for an identity on a vertex

    Raises:
        NotAnArrow: if the paths are not a weakly decreasing chain of parallel paths
    """
    paths = tuple(arrow)
    if not paths:
        raise NotAnArrow("an n-arrow has at least one path")
    try:
        for p in paths[1:]:
            check_parallel(paths[0], p)
    except NotParallel as e:
        raise NotAnArrow(e.message)
    for upper, lower in zip(paths, paths[1:]):
        if not lies_above(ps, upper, lower):
            raise NotAnArrow(f"{upper.label()} does not lie above {lower.label()}")
    bottom_vertices = set(paths[-1].vertices)
    for v in paths[0].vertices:
        if v in bottom_vertices and any(v not in p.vertices for p in paths):
            raise NotAnArrow(f"a middle path misses the shared vertex {v}")
    factors = _factor(paths)
    if paths[0].is_empty():
        return factors
    rebuilt = factors[0].paths
    for factor in factors[1:]:
        rebuilt = tuple(p.then(q) for p, q in zip(rebuilt, factor.paths))
    assert rebuilt == paths, "factors do not recompose to the arrow"
    return factors


def face_block(ps: PastingScheme, block: AtomicArrow) -> Optional[Face]:
    """The face an atomic block is a degeneracy of, if any."""
    top, bottom = block.paths[0], block.paths[-1]
    if top == bottom or top.is_empty():
        return None
    face_id = ps.dom_face_of.get(top.edges[0])
    if face_id is None:
        return None
    face = ps.face(face_id)
    if face.dom != top or face.cod != bottom:
        return None
    return face if all(p in (top, bottom) for p in block.paths) else None


def is_generator_block(ps: PastingScheme, block: AtomicArrow) -> bool:
    """Degenerate images of an edge or of a single face."""
    if len(set(block.paths)) == 1:
        return len(block.paths[0]) == 1
    return face_block(ps, block) is not None


def in_graph_scat(ps: PastingScheme, arrow: Sequence[Path]) -> bool:
    return all(is_generator_block(ps, block) for block in _factor(tuple(arrow)))


def graph_scat(ps: PastingScheme, level: int = DEFAULT_LEVEL) -> TruncSCat:
    """
    The free simplicial category on the scheme, as a subobject of nerve_f2cat.
    """
    full = nerve_f2cat(ps, level)
    homs = {}
    for pair, cx in full.homs.items():
        keep = frozenset(c for c in cx.chains if in_graph_scat(ps, cx.labels(c)))
        homs[pair] = ChainComplexSSet(cx.ambient, keep, level)
    return TruncSCat(ps, level, homs)


def weak_chains(P: FinPoset, n: int) -> Iterator[Tuple[int, ...]]:
    """Weakly increasing index sequences of length n + 1."""
    def extend(chain: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
        if len(chain) == n + 1:
            yield chain
            return
        for j in sorted(P.up_set(chain[-1])):
            yield from extend(chain + (j,))

    for i in range(len(P)):
        yield from extend((i,))


def weak_arrows(cx: ChainComplexSSet, n: int) -> Set[Arrow]:
    """Every n-arrow, degenerate ones included, of a hom complex."""
    return {cx.labels(c) for c in weak_chains(cx.ambient, n) if dedupe(c) in cx.chains}


def atomic_arrows(ps: PastingScheme, n: int, nondegenerate: bool = False) -> List[AtomicArrow]:
    """
    Every atomic n-arrow of nerve_f2cat; for n = 0 these are the edges.

    Args:
        ps: pasting scheme
        n: dimension
        nondegenerate: keep only strictly decreasing chains
    """
    if n < 0:
        raise PreconditionFailed("dimension must be non-negative", n=n)
    found = []
    for a, z in ordered_pairs(ps, include_identities=False):
        P = hom_poset(ps, a, z).poset
        for chain in weak_chains(P, n):
            if nondegenerate and len(set(chain)) < len(chain):
                continue
            top, bottom = P.elements[chain[0]], P.elements[chain[-1]]
            if set(top.vertices) & set(bottom.vertices) == {a, z}:
                found.append(AtomicArrow(tuple(P.elements[i] for i in chain)))
    return found


def generator_arrows(ps: PastingScheme, n: int) -> List[Tuple[str, str, Arrow]]:
    """The atomic n-arrows of graph_scat built straight from edges and faces."""
    gens = [(e.src, e.tgt, (ps.path([e.id]),) * (n + 1)) for e in ps.edges]
    for face in ps.faces:
        for j in range(1, n + 1):
            gens.append((face.source, face.target, (face.dom,) * j + (face.cod,) * (n + 1 - j)))
    return gens


def is_subcomputad(ps: PastingScheme, level: int = DEFAULT_LEVEL) -> bool:
    """
    Check that graph_scat sits in nerve_f2cat as a simplicial subcomputad: its
    generators are atomic arrows there, and degeneracies of generators are
    again atomic generators.
    """
    if level < 1:
        raise PreconditionFailed("subcomputad check needs level >= 1", level=level)
    G = graph_scat(ps, level)
    for n in range(level + 1):
        for a, z, arrow in generator_arrows(ps, n):
            if not G.contains(arrow):
                logger.warning(f"Generator {[p.label() for p in arrow]} missing from hom({a}, {z})")
                return False
            factors = factor_atomic(ps, arrow)
            if len(factors) != 1 or factors[0].paths != arrow:
                logger.warning(f"Generator {[p.label() for p in arrow]} is not atomic")
                return False
            if n < level:
                for i in range(n + 1):
                    degenerate = arrow[:i + 1] + arrow[i:]
                    blocks = factor_atomic(ps, degenerate)
                    if len(blocks) != 1 or not is_generator_block(ps, blocks[0]):
                        logger.warning(f"Degeneracy s_{i} of {[p.label() for p in arrow]} is not atomic")
                        return False
    return True


def graph_scat_levelwise_oracle(ps: PastingScheme, n: int) -> Dict[Pair, Set[Arrow]]:
    """
    The n-arrows of the free simplicial category, built by composing generators
    along every route; only meant for small schemes and n <= 2.
    """
    by_start: Dict[str, List[Tuple[str, Arrow]]] = {}
    for a, z, arrow in generator_arrows(ps, n):
        by_start.setdefault(a, []).append((z, arrow))
    arrows: Dict[Pair, Set[Arrow]] = {}

    def grow(start: str, at: str, arrow: Arrow) -> None:
        arrows.setdefault((start, at), set()).add(arrow)
        for end, gen in by_start.get(at, []):
            grow(start, end, tuple(p.then(q) for p, q in zip(arrow, gen)))

    for a in ps.objects:
        grow(a, a, (Path.empty(a),) * (n + 1))
    return arrows


def _concat_triple(label: Tuple[Tuple[Path, Path], Path]) -> Path:
    (r, p), q = label
    return q.then(p).then(r)


def _bottom_attachment(ps: PastingScheme, face_id: str, a: str, z: str) -> Tuple[PastingScheme, Face]:
    base = delete_bottom_cell(ps, face_id)
    for v in (a, z):
        if v not in base.descendants:
            raise PreconditionFailed(f"{v} is not a vertex of the scheme without {face_id}", vertex=v)
    return base, ps.face(face_id)


def verify_hom_pushouts(ps: PastingScheme, face_id: str, a: str, z: str) -> bool:
    """
    Compare hom-posets of P with a bottom cell attached against pushouts of hom-posets of P.

    The first square glues the new path cod_alpha below dom_alpha in hom(x, y);
    the second extends it along whiskering to hom(a, z).

    Raises:
        NotBottomCell: if face_id is not a bottom cell of ps
    """
    base, alpha = _bottom_attachment(ps, face_id, a, z)
    return _cell_square(base, ps, alpha) and _composition_square(base, ps, alpha, a, z)


def _cell_square(base: PastingScheme, ps: PastingScheme, alpha: Face) -> bool:
    C = hom_poset(base, alpha.source, alpha.target).poset
    one, two = FinPoset.chain(1), FinPoset.chain(2)
    F = PosetMap(one, C, (C.index[alpha.dom],))
    pushout = pushout_along_dwyer(F, PosetInclusion(one, two, (0,)))
    mapping: Dict[Any, Path] = {("C", p): p for p in C.elements}
    mapping[("B", 1)] = alpha.cod
    ok = pushout.poset.is_isomorphic_via(hom_poset(ps, alpha.source, alpha.target).poset, mapping)
    if not ok:
        logger.warning(f"Cell square fails for {alpha.id}")
    return ok


def _composition_square(base: PastingScheme, ps: PastingScheme, alpha: Face, a: str, z: str) -> bool:
    x, y = alpha.source, alpha.target
    C = hom_poset(base, a, z).poset
    target = hom_poset(ps, a, z).poset
    if not (reachable(base, a, x) and reachable(base, y, z)):
        return target.is_isomorphic_via(C, {p: p for p in target.elements})
    left = hom_poset(base, y, z).poset
    right = hom_poset(base, a, x).poset
    A = left.product(hom_poset(base, x, y).poset).product(right)
    B = left.product(hom_poset(ps, x, y).poset).product(right)
    I = PosetInclusion(A, B, tuple(B.index[label] for label in A.elements))
    F = PosetMap(A, C, tuple(C.index[_concat_triple(label)] for label in A.elements))
    pushout = pushout_along_dwyer(F, I)
    mapping: Dict[Any, Path] = {}
    for tag, label in pushout.poset.elements:
        mapping[(tag, label)] = label if tag == "C" else _concat_triple(label)
    ok = pushout.poset.is_isomorphic_via(target, mapping)
    if not ok:
        logger.warning(f"Composition square fails for {alpha.id} at ({a}, {z})")
    return ok


@dataclass(frozen=True)
class SubcomplexInclusion:
    sub: ChainComplexSSet
    full: ChainComplexSSet

    def missing(self) -> int:
        return len(self.full) - len(self.sub)


def build_bottom_cell_inclusion(ps: PastingScheme, face_id: str, a: str, z: str,
                           level: int = DEFAULT_LEVEL) -> SubcomplexInclusion:
    """
    The inclusion into N hom(a, z) of the union of N hom_P(a, z) and the image
    of N(hom_P(y, z) x 2 x hom_P(a, x)), where P is ps without its bottom cell
    face_id running from x to y.

    Raises:
        NotBottomCell
    """
    base, alpha = _bottom_attachment(ps, face_id, a, z)
    ambient = hom_poset(ps, a, z).poset
    old = hom_poset(base, a, z).poset
    parts = [image_under(PosetMap(old, ambient, tuple(ambient.index[p] for p in old.elements)), nerve(old, level))]
    x, y = alpha.source, alpha.target
    if reachable(base, a, x) and reachable(base, y, z):
        product = hom_poset(base, y, z).poset.product(FinPoset.chain(2)).product(hom_poset(base, a, x).poset)
        mapping = []
        for (r, i), q in product.elements:
            mapping.append(ambient.index[q.then(alpha.dom if i == 0 else alpha.cod).then(r)])
        parts.append(image_under(PosetMap(product, ambient, tuple(mapping)), nerve(product, level)))
    sub = parts[0] if len(parts) == 1 else union(parts[0], parts[1])
    return SubcomplexInclusion(sub, nerve(ambient, level))


def verify_edge_subdivision(ps: PastingScheme, edge_id: str, n: int, level: int = 2) -> bool:
    """
    Subdivide edge_id into n - 1 edges and check the hom-posets and the
    chains of both simplicial categories match up under whiskering.

    Raises:
        NotAnEdge
    """
    sub = subdivide_edge(ps, edge_id, n)
    image = whisker_map(ps, edge_id, n)
    chain = subdivision_vertices(ps, edge_id, n)
    x, y = chain[0], chain[-1]

    def along(i: int, j: int) -> Path:
        return sub.path(subdivision_path(edge_id, n, i, j), start=chain[i])

    def matches(old: FinPoset, new: FinPoset, send) -> bool:
        return old.is_isomorphic_via(new, {p: send(p) for p in old.elements})

    for a, z in ordered_pairs(ps):
        if not matches(hom_poset(ps, a, z).poset, hom_poset(sub, a, z).poset, lambda p: image(p, sub)):
            logger.warning(f"hom({a}, {z}) changed under subdivision of {edge_id}")
            return False
    for i in range(1, n - 1):
        v = chain[i]
        for a in ps.objects:
            if not reachable(ps, a, x):
                continue
            if not matches(hom_poset(ps, a, x).poset, hom_poset(sub, a, v).poset,
                           lambda p, i=i: image(p, sub).then(along(0, i))):
                return False
        for z in ps.objects:
            if not reachable(ps, y, z):
                continue
            if not matches(hom_poset(ps, y, z).poset, hom_poset(sub, v, z).poset,
                           lambda p, i=i: along(i, n - 1).then(image(p, sub))):
                return False
        for j in range(i + 1, n - 1):
            if hom_poset(sub, v, chain[j]).elements != (along(i, j),) or len(hom_poset(sub, chain[j], v)) != 0:
                return False

    for build in (graph_scat, nerve_f2cat):
        before, after = build(ps, level), build(sub, level)
        for pair, cx in before.homs.items():
            mapped = {tuple(image(p, sub) for p in cx.labels(c)) for c in cx.chains}
            target = after.homs[pair]
            if mapped != {target.labels(c) for c in target.chains}:
                logger.warning(f"{build.__name__} chains of {pair} differ after subdivision")
                return False
    return True


@dataclass
class PairResult:
    pair: Pair
    g_chain_count: int
    nf_chain_count: int
    certificate: Optional[InnerAnodyneCertificate]
    verified: bool
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "pair": list(self.pair),
            "g_chain_count": self.g_chain_count,
            "nf_chain_count": self.nf_chain_count,
            "certificate_length": len(self.certificate) if self.certificate is not None else "unknown",
            "verified": self.verified,
        }
        if self.error:
            data["error"] = self.error
        return data


@dataclass
class HomwiseReport:
    rows: List[PairResult]
    is_subcomputad: bool

    @property
    def all_certified(self) -> bool:
        return self.is_subcomputad and all(row.verified for row in self.rows)

    def unknown_pairs(self) -> List[Pair]:
        return [row.pair for row in self.rows if row.certificate is None]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pairs": [row.to_dict() for row in self.rows],
            "is_subcomputad": self.is_subcomputad,
            "certified": self.all_certified,
        }


def certify_homwise(ps: PastingScheme, level: int = DEFAULT_LEVEL, budget: int = DEFAULT_BUDGET,
                                processor: Optional[BatchProcessor] = None) -> HomwiseReport:
    """
    Certify every inclusion graph_scat(a, z) -> nerve_f2cat(a, z) as inner anodyne.

    Args:
        ps: pasting scheme
        level: truncation level
        budget: certifier step budget per pair
        processor: worker pool for the per-pair searches

    Returns:
        HomwiseReport with one row per pair (a, z), a != z, in object order
    """
    G = graph_scat(ps, level)
    NF = nerve_f2cat(ps, level)
    processor = processor or BatchProcessor(max_workers=1)

    def certify_pair(pair: Pair) -> PairResult:
        sub, full = G.homs[pair], NF.homs[pair]
        assert sub.simplices(0) == full.simplices(0), f"hom{pair} vertex sets differ"
        certificate = certify_inner_anodyne(sub, budget, ambient_id=f"hom({pair[0]},{pair[1]})")
        verified = certificate is not None and verify_certificate(sub, certificate).ok
        return PairResult(pair, len(sub), len(full), certificate, verified)

    rows = []
    for pair, result, error in processor.process_batch(ordered_pairs(ps, include_identities=False), certify_pair):
        if error is not None:
            rows.append(PairResult(pair, len(G.homs[pair]), len(NF.homs[pair]), None, False, str(error)))
        else:
            if result.certificate is None:
                logger.warning(f"hom{pair}: certification unknown")
            rows.append(result)
    report = HomwiseReport(rows, is_subcomputad(ps, max(level, 1)))
    logger.info(f"Certified {sum(r.verified for r in rows)} of {len(rows)} hom pairs")
    return report
