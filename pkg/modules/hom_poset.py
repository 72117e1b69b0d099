"""
Hom-posets of the free 2-category on a pasting scheme.

The hom from x to y has every directed path x -> y as an object and a single
arrow p -> q exactly when p lies above q. It is computed two independent ways:
by enumerating paths and comparing them with lies_above, and by the
coordinatization isomorphism with the subposet of the cube {0,1}^faces cut
out by the directly-above constraints.

Orientation: a cube point assigns 1 to the faces lying between the path and
dom_P, so coordinatize(dom_P) is all zeros and coordinatize(cod_P) all ones.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.utils import UnionFind

from modules.cache import memoize, scheme_cache
from modules.cat_kit import FinPoset
from modules.errors import NotFullPath, NotInPge, PreconditionFailed
from modules.path_kit import (
    check_parallel,
    directly_above_order,
    enumerate_presentations,
    lies_above,
    presentation,
    replay_presentation,
    sub_scheme_between,
)
from modules.scheme_core import Path, PastingScheme, to_networkx

# Configure logging
logger = logging.getLogger(__name__)

# The two extra regions of the augmented scheme: above dom_P and below cod_P
TOP_REGION = "<top>"
BOTTOM_REGION = "<bottom>"

# Skip the exhaustive cube census above this many faces
CUBE_CENSUS_LIMIT = 16


def enumerate_paths(ps: PastingScheme, x: str, y: str) -> List[Path]:
    """
    Every directed path from x to y, topmost first.

    Two paths first differ at the vertex where they split, so sorting on the
    reversed out-ranks of their edges lists the topmost path first.

    Args:
        ps: pasting scheme
        x, y: vertex ids

    Returns:
        list of Path; [empty path] when x == y, [] when y is unreachable
    """
    ps.check_vertex(x)
    ps.check_vertex(y)
    if y not in ps.descendants[x]:
        return []
    if x == y:
        return [Path.empty(x)]
    walks = [[key for _, _, key in walk] for walk in nx.all_simple_edge_paths(to_networkx(ps), x, y)]
    rank, edge_map = ps.out_rank, ps.edge_map
    walks.sort(key=lambda edges: [-rank[edge_map[e].src][e] for e in edges])
    return [ps.path(edges) for edges in walks]


@dataclass(frozen=True)
class HomPoset:
    """
    The hom from x to y. poset.leq(p, q) means p lies above q, so the
    topmost path is the least element.
    """
    x: str
    y: str
    poset: FinPoset

    @property
    def elements(self) -> Tuple[Path, ...]:
        return self.poset.elements

    def __len__(self) -> int:
        return len(self.poset)

    def above(self, p: Path, q: Path) -> bool:
        return self.poset.leq(p, q)

    def top(self) -> Optional[Path]:
        i = self.poset.least()
        return None if i is None else self.elements[i]

    def bottom(self) -> Optional[Path]:
        i = self.poset.greatest()
        return None if i is None else self.elements[i]

    def hasse_edges(self) -> List[Tuple[Path, Path]]:
        """Pairs (p, q) with p directly above q."""
        return [(self.elements[i], self.elements[j]) for i, j in self.poset.covers()]

    def to_json(self) -> Dict[str, object]:
        return {
            "x": self.x,
            "y": self.y,
            "elements": [p.to_list() for p in self.elements],
            "relation": [[int(b) for b in row] for row in self.poset.le],
        }


@memoize(scheme_cache, "hom_poset")
def hom_poset(ps: PastingScheme, x: str, y: str) -> HomPoset:
    """
    The hom-poset from x to y, ordered by lies_above.

    Args:
        ps: pasting scheme
        x, y: vertex ids

    Returns:
        HomPoset (empty when y is unreachable from x)
    """
    paths = enumerate_paths(ps, x, y)
    le = tuple(tuple(lies_above(ps, p, q) for q in paths) for p in paths)
    hom = HomPoset(x, y, FinPoset(tuple(paths), le))
    logger.debug(f"hom({x}, {y}): {len(paths)} paths")
    return hom


@memoize(scheme_cache, "between")
def scheme_between(ps: PastingScheme, x: str, y: str) -> PastingScheme:
    return sub_scheme_between(ps, x, y)


@dataclass(frozen=True)
class CubePoint:
    """A 0/1 value per face, in the face order of the scheme it belongs to."""
    faces: Tuple[str, ...]
    bits: Tuple[int, ...]

    def __getitem__(self, face: str) -> int:
        return self.bits[self.faces.index(face)]

    def as_dict(self) -> Dict[str, int]:
        return dict(zip(self.faces, self.bits))

    def leq(self, other: "CubePoint") -> bool:
        self._check_same_cube(other)
        return all(a <= b for a, b in zip(self.bits, other.bits))

    def meet(self, other: "CubePoint") -> "CubePoint":
        self._check_same_cube(other)
        return CubePoint(self.faces, tuple(min(a, b) for a, b in zip(self.bits, other.bits)))

    def join(self, other: "CubePoint") -> "CubePoint":
        self._check_same_cube(other)
        return CubePoint(self.faces, tuple(max(a, b) for a, b in zip(self.bits, other.bits)))

    def label(self) -> str:
        return "".join(str(b) for b in self.bits)

    def _check_same_cube(self, other: "CubePoint") -> None:
        if self.faces != other.faces:
            raise PreconditionFailed("cube points over different faces")


@dataclass(frozen=True)
class EdgeColoring:
    """Gold edges form the path of a cube point; all others are silver."""
    gold: FrozenSet[str]
    silver: FrozenSet[str]

    def color(self, edge_id: str) -> str:
        return "gold" if edge_id in self.gold else "silver"


def left_region(ps: PastingScheme, edge_id: str) -> str:
    return ps.cod_face_of.get(edge_id, TOP_REGION)


def right_region(ps: PastingScheme, edge_id: str) -> str:
    return ps.dom_face_of.get(edge_id, BOTTOM_REGION)


def coordinatize(ps: PastingScheme, p: Path) -> CubePoint:
    """
    The cube point of a path from s_P to t_P.

    Regions of the augmented scheme are joined across every edge not on p;
    a face gets 1 when it ends up with the region above dom_P.

    Raises:
        NotFullPath: if p does not run from s_P to t_P
    """
    if p.start != ps.s or p.end != ps.t:
        raise NotFullPath(f"{p.label()} does not run from {ps.s} to {ps.t}", path=p.to_list())
    on_path = set(p.edges)
    regions = UnionFind([TOP_REGION, BOTTOM_REGION, *ps.face_ids])
    for e in ps.edges:
        if e.id not in on_path:
            regions.union(left_region(ps, e.id), right_region(ps, e.id))
    top = regions[TOP_REGION]
    assert top != regions[BOTTOM_REGION], f"{p.label()} does not separate dom_P from cod_P"
    return CubePoint(ps.face_ids, tuple(1 if regions[f] == top else 0 for f in ps.face_ids))


def check_in_pge(ps: PastingScheme, point: CubePoint) -> None:
    """
    Raises:
        NotInPge: if a face directly above another has the smaller value
    """
    if set(point.faces) != set(ps.face_ids):
        raise PreconditionFailed("cube point is over the wrong faces", faces=list(point.faces))
    values = point.as_dict()
    for upper, lower in directly_above_order(ps).edges:
        if values[upper] < values[lower]:
            raise NotInPge(f"{upper} lies directly above {lower} but gets the smaller value",
                           upper=upper, lower=lower)


def edge_coloring(ps: PastingScheme, point: CubePoint) -> EdgeColoring:
    values = dict(point.as_dict())
    values[TOP_REGION] = 1
    values[BOTTOM_REGION] = 0
    gold = frozenset(e.id for e in ps.edges
                     if values[left_region(ps, e.id)] > values[right_region(ps, e.id)])
    return EdgeColoring(gold, frozenset(e.id for e in ps.edges) - gold)


def pathify(ps: PastingScheme, point: CubePoint) -> Path:
    """
    The path s_P -> t_P made of the gold edges of a cube point.

    Raises:
        NotInPge: if the point breaks a directly-above constraint
    """
    check_in_pge(ps, point)
    coloring = edge_coloring(ps, point)
    for v in ps.objects:
        assert sum(1 for e in ps.in_orders[v] if e in coloring.gold) <= 1, f"two gold edges enter {v}"
    edges: List[str] = []
    v = ps.s
    while v != ps.t:
        gold_out = [e for e in ps.out_orders[v] if e in coloring.gold]
        assert len(gold_out) == 1, f"{len(gold_out)} gold edges leave {v}"
        edges.append(gold_out[0])
        v = ps.edge_map[gold_out[0]].tgt
    assert set(edges) == coloring.gold, "gold edges off the gold path"
    return ps.path(edges, start=ps.s)


def pge_points(faces: Sequence[str], constraints: Iterable[Tuple[str, str]]) -> List[CubePoint]:
    """Every cube point with f(upper) >= f(lower) for each (upper, lower) constraint."""
    pairs = [(faces.index(a), faces.index(b)) for a, b in constraints]
    points = []
    for bits in itertools.product((0, 1), repeat=len(faces)):
        if all(bits[a] >= bits[b] for a, b in pairs):
            points.append(CubePoint(tuple(faces), bits))
    return points


@dataclass(frozen=True)
class CubeTable:
    """The coordinatization of a hom-poset inside the cube of P_{x,y}."""
    faces: Tuple[str, ...]
    constraints: Tuple[Tuple[str, str], ...]
    rows: Tuple[Tuple[Path, CubePoint], ...]

    def to_json(self) -> Dict[str, object]:
        return {
            "faces": list(self.faces),
            "constraints": [list(c) for c in self.constraints],
            "points": [{"path": p.to_list(), "point": point.as_dict()} for p, point in self.rows],
        }


def cube_table(ps: PastingScheme, x: str, y: str) -> CubeTable:
    """
    Coordinatize every path of hom(x, y) in P_{x,y} and check the result is
    an order isomorphism onto the cube subposet.

    Raises:
        AssertionError: if coordinatization and pathification disagree
    """
    hom = hom_poset(ps, x, y)
    if len(hom) == 0:
        return CubeTable((), (), ())
    if x == y:
        return CubeTable((), (), ((hom.elements[0], CubePoint((), ())),))
    sub = scheme_between(ps, x, y)
    constraints = tuple(sorted(directly_above_order(sub).edges))
    rows = tuple((p, coordinatize(sub, p)) for p in hom.elements)
    for p, point in rows:
        assert pathify(sub, point) == p, f"pathify does not invert coordinatize at {p.label()}"
    points = [point for _, point in rows]
    assert len(set(points)) == len(points), "coordinatize is not injective"
    if len(sub.face_ids) <= CUBE_CENSUS_LIMIT:
        assert set(points) == set(pge_points(sub.face_ids, constraints)), "coordinatize is not onto the cube subposet"
    for p, a in rows:
        for q, b in rows:
            assert hom.above(p, q) == a.leq(b), f"order mismatch at {p.label()}, {q.label()}"
    return CubeTable(sub.face_ids, constraints, rows)


def _combine(ps: PastingScheme, p: Path, q: Path, op: Callable[[CubePoint, CubePoint], CubePoint],
             upward: bool) -> Path:
    check_parallel(p, q)
    if p == q:
        return p
    sub = scheme_between(ps, p.start, p.end)
    result = ps.path(pathify(sub, op(coordinatize(sub, p), coordinatize(sub, q))).edges)
    hom = hom_poset(ps, p.start, p.end)
    if upward:
        bounds = [r for r in hom.elements if hom.above(r, p) and hom.above(r, q)]
        assert result in bounds and all(hom.above(r, result) for r in bounds), "meet is not the greatest lower bound"
    else:
        bounds = [r for r in hom.elements if hom.above(p, r) and hom.above(q, r)]
        assert result in bounds and all(hom.above(result, r) for r in bounds), "join is not the least upper bound"
    return result


def meet(ps: PastingScheme, p: Path, q: Path) -> Path:
    """
    Greatest lower bound in the hom-poset: the lowest path lying above both.

    Raises:
        NotParallel
    """
    return _combine(ps, p, q, CubePoint.meet, upward=True)


def join(ps: PastingScheme, p: Path, q: Path) -> Path:
    """
    Least upper bound in the hom-poset: the highest path lying below both.

    Raises:
        NotParallel
    """
    return _combine(ps, p, q, CubePoint.join, upward=False)


@dataclass(frozen=True)
class ConcatCheck:
    ok: bool
    witness: Optional[Dict[str, object]] = None


def verify_concat_ff(ps: PastingScheme, x: str, y: str, z: str) -> ConcatCheck:
    """
    Check that concatenation hom(y,z) x hom(x,y) -> hom(x,z) is injective
    and fully faithful.

    Returns:
        ConcatCheck with a counterexample when it fails
    """
    first, second, whole = hom_poset(ps, x, y), hom_poset(ps, y, z), hom_poset(ps, x, z)
    composites: Dict[Path, Tuple[Path, Path]] = {}
    for p in first.elements:
        for p2 in second.elements:
            c = p.then(p2)
            if c not in whole.poset.index:
                return ConcatCheck(False, {"reason": "missing", "path": c.to_list()})
            if c in composites:
                return ConcatCheck(False, {"reason": "not injective", "path": c.to_list()})
            composites[c] = (p, p2)
    for c, (p, p2) in composites.items():
        for d, (q, q2) in composites.items():
            if (first.above(p, q) and second.above(p2, q2)) != whole.above(c, d):
                return ConcatCheck(False, {"reason": "not full", "pair": [c.to_list(), d.to_list()]})
    return ConcatCheck(True)


def composite_chain(ps: PastingScheme, cap: int = 500) -> List[Path]:
    """
    The chain dom_P = m_0 > ... > m_n = cod_P of the scheme's composite 2-cell.

    Every presentation found by the bounded enumerator is replayed and must
    give a chain of the same length with the same ends.
    """
    chain = replay_presentation(ps, presentation(ps))
    n = len(ps.faces)
    checked = 0
    for other in enumerate_presentations(ps, cap):
        replayed = replay_presentation(ps, other)
        assert replayed[0] == ps.dom and replayed[-1] == ps.cod and len(replayed) == n + 1
        checked += 1
    for upper, lower in zip(chain, chain[1:]):
        assert upper != lower and lies_above(ps, upper, lower)
    logger.info(f"Composite chain of length {n} agrees across {checked} presentations")
    return chain
