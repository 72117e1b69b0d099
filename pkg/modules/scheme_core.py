"""
Plane graphs with rotation systems and their validation as pasting schemes.

A plane graph is stored combinatorially: every vertex lists its darts
(edge id plus 'out' or 'in') in clockwise drawn order, and one dart-side is
marked as lying on the exterior face. Faces are traced from the rotation
system; validation derives the source and target of every face, the global
source and sink, the exterior source/target paths and the per-vertex total
orders on incoming and outgoing edges.

Face-side convention: the face traced through the forward dart of an edge is
that edge's left face. An interior face F has dom_F made of the edges with F
on their right and cod_F made of the edges with F on their left; the exterior
face has dom_P on its right side (its forward darts) and cod_P on its left.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from modules.errors import (
    CycleFound,
    EmbeddingError,
    EmptyWidths,
    InvalidSchemeError,
    MultipleSinks,
    MultipleSources,
    NotAnchorable,
    PartitionViolation,
    PreconditionFailed,
    ProhibitedConfiguration,
    SchemeViolation,
    StructureError,
    UnknownVertex,
)

# Configure logging
logger = logging.getLogger(__name__)

OUT = "out"
IN = "in"
LEFT = "left"
RIGHT = "right"
EXTERIOR_ID = "exterior"

Dart = Tuple[str, str]
# (edge id, True when walked from src to tgt)
WalkDart = Tuple[str, bool]


@dataclass(frozen=True)
class Edge:
    """A directed edge of a plane graph."""
    id: str
    src: str
    tgt: str


@dataclass(frozen=True)
class Path:
    """
    A directed path, stored as its vertex and edge sequences.
    The empty path at v has vertices (v,) and no edges.
    """
    vertices: Tuple[str, ...]
    edges: Tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.vertices) != len(self.edges) + 1:
            raise PreconditionFailed("a path has exactly one more vertex than edges")

    @classmethod
    def empty(cls, v: str) -> "Path":
        return cls((v,), ())

    @property
    def start(self) -> str:
        return self.vertices[0]

    @property
    def end(self) -> str:
        return self.vertices[-1]

    def __len__(self) -> int:
        return len(self.edges)

    def is_empty(self) -> bool:
        return not self.edges

    def then(self, other: "Path") -> "Path":
        """Concatenate in diagrammatic order: self first, then other."""
        if self.end != other.start:
            raise PreconditionFailed(f"cannot concatenate {self.label()} and {other.label()}")
        return Path(self.vertices + other.vertices[1:], self.edges + other.edges)

    def segment(self, i: int, j: int) -> "Path":
        """The subpath between the i-th and j-th vertices (inclusive, i <= j)."""
        return Path(self.vertices[i:j + 1], self.edges[i:j])

    def between(self, u: str, w: str) -> "Path":
        """The subpath from vertex u to vertex w."""
        return self.segment(self.vertices.index(u), self.vertices.index(w))

    def find_edges(self, edges: Sequence[str]) -> int:
        """Position of a contiguous run of edges inside this path, or -1."""
        n = len(edges)
        for i in range(len(self.edges) - n + 1):
            if self.edges[i:i + n] == tuple(edges):
                return i
        return -1

    def label(self) -> str:
        if not self.edges:
            return f"({self.start})"
        return "·".join(self.edges)

    def to_list(self) -> List[str]:
        return list(self.edges)


@dataclass(frozen=True, eq=False)
class PlaneGraph:
    """
    A finite connected directed graph with a rotation system.

    Args (fields):
        objects: vertex ids in file order
        edges: edges in file order
        rotation: vertex id -> clockwise darts (edge id, 'out'|'in')
        exterior: (edge id, 'left'|'right') naming a dart-side on the exterior face
        coords: optional vertex id -> (x, y), rendering only
    """
    objects: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    rotation: Mapping[str, Tuple[Dart, ...]]
    exterior: Tuple[str, str]
    coords: Optional[Mapping[str, Tuple[float, float]]] = None

    def __post_init__(self):
        _check_structure(self)

    @cached_property
    def edge_map(self) -> Dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def dart_position(self) -> Dict[str, Dict[Dart, int]]:
        return {v: {d: i for i, d in enumerate(darts)} for v, darts in self.rotation.items()}

    def next_walk_dart(self, w: WalkDart) -> WalkDart:
        """Face-tracing permutation: leave by the dart clockwise after the one we arrived on."""
        edge_id, forward = w
        edge = self.edge_map[edge_id]
        v = edge.tgt if forward else edge.src
        arrived = (edge_id, IN if forward else OUT)
        darts = self.rotation[v]
        nxt_id, kind = darts[(self.dart_position[v][arrived] + 1) % len(darts)]
        return (nxt_id, kind == OUT)


def _check_structure(g: PlaneGraph) -> None:
    if not g.edges:
        raise StructureError("a plane graph needs at least one edge")
    if len(set(g.objects)) != len(g.objects):
        raise StructureError("duplicate vertex id", objects=list(g.objects))
    ids = [e.id for e in g.edges]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise StructureError(f"duplicate edge id {dupes[0]}", edges=dupes)
    objects = set(g.objects)
    for e in g.edges:
        if e.src not in objects or e.tgt not in objects:
            raise StructureError(f"edge {e.id} references a missing vertex", edge=e.id)
    if set(g.rotation) != objects:
        missing = sorted(objects - set(g.rotation))
        extra = sorted(set(g.rotation) - objects)
        raise StructureError("rotation keys do not match the vertex set", missing=missing, extra=extra)

    expected = {}
    for e in g.edges:
        expected[(e.id, OUT)] = e.src
        expected[(e.id, IN)] = e.tgt
    seen = set()
    for v, darts in g.rotation.items():
        for dart in darts:
            if dart not in expected:
                raise StructureError(f"unknown dart {dart[1]}:{dart[0]} at {v}", vertex=v)
            if dart in seen:
                raise StructureError(f"dart {dart[1]}:{dart[0]} listed twice", vertex=v)
            if expected[dart] != v:
                raise StructureError(f"dart {dart[1]}:{dart[0]} listed at the wrong endpoint {v}", vertex=v)
            seen.add(dart)
    if len(seen) != len(expected):
        missing = sorted(f"{k}:{e}" for e, k in set(expected) - seen)
        raise StructureError("darts missing from the rotation", darts=missing)

    marker_edge, side = g.exterior
    if marker_edge not in expected_edge_ids(g) or side not in (LEFT, RIGHT):
        raise StructureError("exterior marker must name an edge and a side left|right",
                             exterior=list(g.exterior))

    undirected = nx.MultiGraph()
    undirected.add_nodes_from(g.objects)
    undirected.add_edges_from((e.src, e.tgt) for e in g.edges)
    if not nx.is_connected(undirected):
        raise StructureError("graph is disconnected")


def expected_edge_ids(g: PlaneGraph) -> FrozenSet[str]:
    return frozenset(e.id for e in g.edges)


@dataclass(frozen=True)
class Face:
    """
    A face of a plane graph: a closed walk of walk-darts.
    Anchored faces carry their source, target, dom and cod paths.
    """
    id: str
    kind: str
    boundary: Tuple[WalkDart, ...]
    source: Optional[str] = None
    target: Optional[str] = None
    dom: Optional[Path] = None
    cod: Optional[Path] = None

    @property
    def anchored(self) -> bool:
        return self.dom is not None

    @property
    def is_exterior(self) -> bool:
        return self.kind == EXTERIOR_ID

    def to_dict(self) -> Dict[str, object]:
        data: Dict[str, object] = {
            "id": self.id,
            "kind": self.kind,
            "boundary": [f"{e}{'+' if fwd else '-'}" for e, fwd in self.boundary],
        }
        if self.anchored:
            data.update({"source": self.source, "target": self.target,
                         "dom": self.dom.to_list(), "cod": self.cod.to_list()})
        return data


def _orbits(g: PlaneGraph) -> List[List[WalkDart]]:
    orbits: List[List[WalkDart]] = []
    visited = set()
    for e in g.edges:
        for forward in (True, False):
            start = (e.id, forward)
            if start in visited:
                continue
            orbit = []
            w = start
            while w not in visited:
                visited.add(w)
                orbit.append(w)
                w = g.next_walk_dart(w)
            orbits.append(orbit)
    return orbits


def _anchor(g: PlaneGraph, orbit: Sequence[WalkDart], exterior: bool):
    """
    Split a face boundary into its forward and backward runs.

    Returns:
        (source, target, dom, cod) or a string describing why the face is not anchorable
    """
    kinds = [fwd for _, fwd in orbit]
    n = len(orbit)
    switches = sum(1 for i in range(n) if kinds[i] != kinds[i - 1])
    if switches != 2:
        return f"boundary has {switches} direction changes"
    first = next(i for i in range(n) if kinds[i] and not kinds[i - 1])
    walk = list(orbit[first:]) + list(orbit[:first])
    forward_run = [e for e, fwd in walk if fwd]
    backward_run = [e for e, fwd in walk if not fwd]
    try:
        forward_path = _path_from_edges(g, forward_run)
        backward_path = _path_from_edges(g, list(reversed(backward_run)))
    except PreconditionFailed as e:
        return e.message
    if forward_path.start != backward_path.start or forward_path.end != backward_path.end:
        return "source and target paths are not parallel"
    if forward_path.start == forward_path.end:
        return "source equals target"
    if exterior:
        dom, cod = forward_path, backward_path
    else:
        dom, cod = backward_path, forward_path
        inner_dom = set(dom.vertices[1:-1])
        inner_cod = set(cod.vertices[1:-1])
        if (len(set(dom.vertices)) != len(dom.vertices)
                or len(set(cod.vertices)) != len(cod.vertices)
                or inner_dom & set(cod.vertices) or inner_cod & set(dom.vertices)):
            return "source and target paths are not internally disjoint"
    return (dom.start, dom.end, dom, cod)


def _path_from_edges(g: PlaneGraph, edge_ids: Sequence[str], start: Optional[str] = None) -> Path:
    if not edge_ids:
        if start is None:
            raise PreconditionFailed("empty path needs a start vertex")
        return Path.empty(start)
    edges = [g.edge_map[e] for e in edge_ids]
    vertices = [edges[0].src]
    for edge in edges:
        if edge.src != vertices[-1]:
            raise PreconditionFailed(f"edges do not compose at {edge.id}")
        vertices.append(edge.tgt)
    if start is not None and vertices[0] != start:
        raise PreconditionFailed(f"path does not start at {start}")
    return Path(tuple(vertices), tuple(edge_ids))


def trace_faces(g: PlaneGraph) -> List[Face]:
    """
    Trace the faces of a plane graph from its rotation system.

    Args:
        g: plane graph

    Returns:
        list of Face; the face through the exterior marker comes back with kind 'exterior'

    Raises:
        EmbeddingError: if V - E + F != 2
    """
    orbits = _orbits(g)
    euler = len(g.objects) - len(g.edges) + len(orbits)
    if euler != 2:
        raise EmbeddingError(f"V - E + F = {euler}, rotation data is not a plane embedding",
                             vertices=len(g.objects), edges=len(g.edges), faces=len(orbits))

    marker_edge, side = g.exterior
    marker = (marker_edge, side == LEFT)

    faces = []
    for index, orbit in enumerate(orbits):
        exterior = marker in orbit
        anchor = _anchor(g, orbit, exterior)
        kind = EXTERIOR_ID if exterior else "interior"
        if isinstance(anchor, str):
            face_id = EXTERIOR_ID if exterior else f"F#{index}"
            faces.append(Face(face_id, kind, tuple(orbit)))
            continue
        source, target, dom, cod = anchor
        face_id = EXTERIOR_ID if exterior else f"F[{dom.edges[0]}]"
        faces.append(Face(face_id, kind, tuple(orbit), source, target, dom, cod))
    return faces


@dataclass(frozen=True, eq=False)
class PastingScheme:
    """A validated pasting scheme with its derived structure."""
    graph: PlaneGraph
    faces: Tuple[Face, ...]
    exterior_face: Face
    s: str
    t: str
    dom: Path
    cod: Path
    in_orders: Mapping[str, Tuple[str, ...]]
    out_orders: Mapping[str, Tuple[str, ...]]
    descendants: Mapping[str, FrozenSet[str]] = field(repr=False)

    @property
    def objects(self) -> Tuple[str, ...]:
        return self.graph.objects

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return self.graph.edges

    @cached_property
    def edge_map(self) -> Dict[str, Edge]:
        return self.graph.edge_map

    @cached_property
    def face_map(self) -> Dict[str, Face]:
        return {f.id: f for f in self.faces}

    @cached_property
    def face_ids(self) -> Tuple[str, ...]:
        return tuple(f.id for f in self.faces)

    @cached_property
    def dom_face_of(self) -> Dict[str, str]:
        """edge id -> interior face whose source path contains it"""
        return {e: f.id for f in self.faces for e in f.dom.edges}

    @cached_property
    def cod_face_of(self) -> Dict[str, str]:
        """edge id -> interior face whose target path contains it"""
        return {e: f.id for f in self.faces for e in f.cod.edges}

    @cached_property
    def in_rank(self) -> Dict[str, Dict[str, int]]:
        return {v: {e: i for i, e in enumerate(order)} for v, order in self.in_orders.items()}

    @cached_property
    def out_rank(self) -> Dict[str, Dict[str, int]]:
        return {v: {e: i for i, e in enumerate(order)} for v, order in self.out_orders.items()}

    @cached_property
    def fingerprint(self) -> str:
        from modules.scheme_io import scheme_fingerprint
        return scheme_fingerprint(self.graph)

    def face(self, face_id: str) -> Face:
        return self.face_map[face_id]

    def check_vertex(self, v: str) -> None:
        if v not in self.descendants:
            raise UnknownVertex(f"unknown vertex {v}", vertex=v)

    def path(self, edge_ids: Sequence[str], start: Optional[str] = None) -> Path:
        """Build a path from edge ids (start is needed only for the empty path)."""
        return _path_from_edges(self.graph, list(edge_ids), start)

    def cut_edges(self) -> FrozenSet[str]:
        return frozenset(self.dom.edges) & frozenset(self.cod.edges)

    def __repr__(self) -> str:
        return (f"PastingScheme(objects={len(self.objects)}, edges={len(self.edges)}, "
                f"faces={len(self.faces)}, s={self.s}, t={self.t})")


def _local_sources_and_sinks(g: PlaneGraph) -> Tuple[List[str], List[str]]:
    has_in = {e.tgt for e in g.edges}
    has_out = {e.src for e in g.edges}
    sources = [v for v in g.objects if v not in has_in]
    sinks = [v for v in g.objects if v not in has_out]
    return sources, sinks


def _kind_switches(darts: Sequence[Dart]) -> int:
    kinds = [k for _, k in darts]
    return sum(1 for i in range(len(kinds)) if kinds[i] != kinds[i - 1])


def _rotate_to(seq: Sequence[Dart], index: int) -> List[Dart]:
    return list(seq[index:]) + list(seq[:index])


def _vertex_orders(g: PlaneGraph, v: str, s: str, t: str, dom: Path) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    darts = g.rotation[v]
    position = g.dart_position[v]
    if v == s:
        seq = _rotate_to(darts, position[(dom.edges[0], OUT)])
        return (), tuple(reversed([e for e, _ in seq]))
    if v == t:
        seq = _rotate_to(darts, position[(dom.edges[-1], IN)] + 1)
        return tuple(e for e, _ in seq), ()
    kinds = [k for _, k in darts]
    first_out = next(i for i in range(len(darts)) if kinds[i] == OUT and kinds[i - 1] == IN)
    seq = _rotate_to(darts, first_out)
    outs = [e for e, k in seq if k == OUT]
    ins = [e for e, k in seq if k == IN]
    return tuple(ins), tuple(reversed(outs))


@dataclass
class _Analysis:
    faces: List[Face]
    violations: List[SchemeViolation]
    sources: List[str]
    sinks: List[str]
    digraph: nx.MultiDiGraph


def _analyze(g: PlaneGraph) -> _Analysis:
    faces = trace_faces(g)
    violations: List[SchemeViolation] = []

    for face in faces:
        if not face.anchored:
            violations.append(NotAnchorable(f"face {face.id} is not anchorable", face=face.id,
                                            boundary=face.to_dict()["boundary"]))

    sources, sinks = _local_sources_and_sinks(g)
    if len(sources) != 1:
        violations.append(MultipleSources(f"{len(sources)} local sources", sources=sources))
    if len(sinks) != 1:
        violations.append(MultipleSinks(f"{len(sinks)} local sinks", sinks=sinks))

    digraph = nx.MultiDiGraph()
    digraph.add_nodes_from(g.objects)
    for e in g.edges:
        digraph.add_edge(e.src, e.tgt, key=e.id)
    if not nx.is_directed_acyclic_graph(digraph):
        cycle = [(u, v, k) for u, v, k, *_ in nx.find_cycle(digraph)]
        violations.append(CycleFound("directed cycle", cycle=[k for _, _, k in cycle]))

    for v in g.objects:
        darts = g.rotation[v]
        if {k for _, k in darts} == {IN, OUT} and _kind_switches(darts) > 2:
            violations.append(ProhibitedConfiguration(
                f"darts alternate out/in around {v}", vertex=v,
                rotation=[f"{k}:{e}" for e, k in darts]))

    exterior = next(f for f in faces if f.is_exterior)
    interior = [f for f in faces if not f.is_exterior]
    if exterior.anchored and len(sources) == 1 and len(sinks) == 1:
        if exterior.source != sources[0] or exterior.target != sinks[0]:
            violations.append(NotAnchorable("exterior face is not anchored at the source and sink",
                                            face=EXTERIOR_ID))
    if exterior.anchored and all(f.anchored for f in interior):
        violations.extend(_partition_violations(g, interior, exterior))
    return _Analysis(faces, violations, sources, sinks, digraph)


def _partition_violations(g: PlaneGraph, interior: Sequence[Face], exterior: Face) -> List[SchemeViolation]:
    found: List[SchemeViolation] = []
    edge_ids = [e.id for e in g.edges]
    for name, parts in (("dom", [f.dom.edges for f in interior] + [exterior.cod.edges]),
                        ("cod", [f.cod.edges for f in interior] + [exterior.dom.edges])):
        counts: Dict[str, int] = {e: 0 for e in edge_ids}
        for part in parts:
            for e in part:
                counts[e] += 1
        for e in edge_ids:
            if counts[e] != 1:
                found.append(PartitionViolation(
                    f"edge {e} appears {counts[e]} times in the {name} partition", edge=e, partition=name))
    return found


def find_violations(g: PlaneGraph) -> List[SchemeViolation]:
    """
    Collect every reason the plane graph fails to be a pasting scheme.

    Args:
        g: plane graph

    Returns:
        list of violations (empty when g is a pasting scheme)
    """
    return _analyze(g).violations


def validate_pasting_scheme(g: PlaneGraph) -> PastingScheme:
    """
    Validate a plane graph and derive its pasting-scheme structure.

    Args:
        g: plane graph

    Returns:
        PastingScheme

    Raises:
        InvalidSchemeError: carrying every violation found
        EmbeddingError: if the rotation data is not planar
    """
    analysis = _analyze(g)
    if analysis.violations:
        logger.info(f"Validation found {len(analysis.violations)} violations")
        raise InvalidSchemeError(analysis.violations)

    exterior = next(f for f in analysis.faces if f.is_exterior)
    interior = tuple(f for f in analysis.faces if not f.is_exterior)
    s, t = analysis.sources[0], analysis.sinks[0]

    in_orders: Dict[str, Tuple[str, ...]] = {}
    out_orders: Dict[str, Tuple[str, ...]] = {}
    for v in g.objects:
        in_orders[v], out_orders[v] = _vertex_orders(g, v, s, t, exterior.dom)

    descendants = {v: frozenset(nx.descendants(analysis.digraph, v)) | {v} for v in g.objects}
    ps = PastingScheme(
        graph=g,
        faces=interior,
        exterior_face=exterior,
        s=s,
        t=t,
        dom=exterior.dom,
        cod=exterior.cod,
        in_orders=in_orders,
        out_orders=out_orders,
        descendants=descendants,
    )
    _assert_tie_rules(ps)
    _assert_global_bounds(ps)
    logger.debug(f"Validated {ps!r}")
    return ps


def _assert_tie_rules(ps: PastingScheme) -> None:
    outs = ps.out_orders[ps.s]
    ins = ps.in_orders[ps.t]
    assert outs[0] in ps.cod.edges or outs[-1] in ps.dom.edges, "tie rule at the source"
    assert ins[0] in ps.cod.edges or ins[-1] in ps.dom.edges, "tie rule at the sink"


def _assert_global_bounds(ps: PastingScheme) -> None:
    for v in ps.objects:
        assert v in ps.descendants[ps.s] and ps.t in ps.descendants[v], f"{v} not between s and t"


def in_out_order(ps: PastingScheme, v: str) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    """
    Ascending total orders on in(v) and out(v); the last element is the topmost edge.

    Args:
        ps: pasting scheme
        v: vertex id

    Returns:
        (in(v) ascending, out(v) ascending)
    """
    ps.check_vertex(v)
    return ps.in_orders[v], ps.out_orders[v]


def pred_succ(ps: PastingScheme, p: Path, v: str) -> Tuple[Optional[str], Optional[str]]:
    """
    The edges by which p enters and leaves v; None stands for the null point.
    """
    pred = succ = None
    if v in p.vertices:
        i = p.vertices.index(v)
        if i > 0:
            pred = p.edges[i - 1]
        if i < len(p.edges):
            succ = p.edges[i]
    return pred, succ


def edge_geq(ps: PastingScheme, v: str, e: Optional[str], f: Optional[str], incoming: bool) -> bool:
    """
    Compare two elements of in(v)+ (or out(v)+); the null point is only comparable with itself.
    """
    if e is None or f is None:
        return e is None and f is None
    rank = ps.in_rank[v] if incoming else ps.out_rank[v]
    return rank[e] >= rank[f]


def reachable(ps: PastingScheme, x: str, y: str) -> bool:
    """True iff there is a directed (possibly empty) path from x to y."""
    ps.check_vertex(x)
    ps.check_vertex(y)
    return y in ps.descendants[x]


def to_networkx(ps: PastingScheme) -> nx.MultiDiGraph:
    """The underlying directed multigraph, edges keyed by edge id."""
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(ps.objects)
    for e in ps.edges:
        graph.add_edge(e.src, e.tgt, key=e.id)
    return graph


def theta2_edge_id(column: int, index: int) -> str:
    return f"e{column}_{index}"


def build_theta2(widths: Sequence[int]) -> PastingScheme:
    """
    Build the pasting scheme of the theta2 object [n]([k_1],...,[k_n]).

    Column j runs from vertex j-1 to vertex j and holds edges e{j}_0 (topmost)
    down to e{j}_{k_j}.

    Args:
        widths: [k_1, ..., k_n]

    Returns:
        PastingScheme

    Raises:
        EmptyWidths: if widths is empty
    """
    if not widths:
        raise EmptyWidths("theta2 needs at least one column")
    if any(k < 0 for k in widths):
        raise PreconditionFailed("theta2 widths must be non-negative", widths=list(widths))
    n = len(widths)
    objects = tuple(str(v) for v in range(n + 1))
    edges = []
    for j, k in enumerate(widths, start=1):
        for i in range(k + 1):
            edges.append(Edge(theta2_edge_id(j, i), str(j - 1), str(j)))
    rotation: Dict[str, Tuple[Dart, ...]] = {}
    for v in range(n + 1):
        darts: List[Dart] = []
        if v < n:
            darts.extend((theta2_edge_id(v + 1, i), OUT) for i in range(widths[v] + 1))
        if v > 0:
            darts.extend((theta2_edge_id(v, i), IN) for i in reversed(range(widths[v - 1] + 1)))
        rotation[str(v)] = tuple(darts)
    graph = PlaneGraph(objects, tuple(edges), rotation, (theta2_edge_id(1, 0), LEFT))
    return validate_pasting_scheme(graph)

