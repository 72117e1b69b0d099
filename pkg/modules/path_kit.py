"""
Path orders and sub pasting schemes.

Covers the lies-above order on parallel paths, the factorization of two
parallel paths into shared segments and disjoint blocks, the sub-scheme p/q
between two paths, top and bottom cells, presentations, the directly-above
order on faces, and the two constructors (bottom attachment and edge
subdivision) that generate every pasting scheme from theta2 shapes.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from modules.errors import (
    CycleFound,
    NotAbove,
    NotAnEdge,
    NotBottomCell,
    NotParallel,
    NotReachable,
    NotTopCell,
    PreconditionFailed,
    TrivialPath,
)
from modules.scheme_core import (
    IN,
    LEFT,
    OUT,
    Edge,
    Face,
    Path,
    PastingScheme,
    PlaneGraph,
    edge_geq,
    pred_succ,
    reachable,
    validate_pasting_scheme,
)

# Configure logging
logger = logging.getLogger(__name__)

LIES_ABOVE_MODES = ("full", "pred", "succ")


def check_parallel(p: Path, q: Path) -> None:
    if p.start != q.start or p.end != q.end:
        raise NotParallel(f"{p.label()} and {q.label()} are not parallel",
                          p=p.to_list(), q=q.to_list())


def lies_above(ps: PastingScheme, p: Path, q: Path, mode: str = "full") -> bool:
    """
    Decide whether p lies above q.

    Args:
        ps: pasting scheme
        p, q: parallel paths
        mode: 'full' tests pred and succ at every common vertex; 'pred' or
            'succ' tests one half only (the two halves always agree)

    Returns:
        bool
    """
    check_parallel(p, q)
    if mode not in LIES_ABOVE_MODES:
        raise PreconditionFailed(f"unknown lies_above mode {mode!r}")
    q_vertices = set(q.vertices)
    for v in p.vertices:
        if v not in q_vertices:
            continue
        p_pred, p_succ = pred_succ(ps, p, v)
        q_pred, q_succ = pred_succ(ps, q, v)
        if mode != "succ" and not edge_geq(ps, v, p_pred, q_pred, incoming=True):
            return False
        if mode != "pred" and not edge_geq(ps, v, p_succ, q_succ, incoming=False):
            return False
    return True


@dataclass(frozen=True)
class ParallelFactorization:
    """p = r_0 p_1 r_1 ... p_n r_n and q = r_0 q_1 r_1 ... q_n r_n"""
    shared: Tuple[Path, ...]
    blocks: Tuple[Tuple[Path, Path], ...]

    def upper(self) -> Path:
        return self._assemble(0)

    def lower(self) -> Path:
        return self._assemble(1)

    def _assemble(self, side: int) -> Path:
        path = self.shared[0]
        for block, shared in zip(self.blocks, self.shared[1:]):
            path = path.then(block[side]).then(shared)
        return path


def partition_parallel(ps: PastingScheme, p: Path, q: Path) -> ParallelFactorization:
    """
    Factor p above q into shared segments and blocks meeting only at their ends.

    Raises:
        NotAbove: if p does not lie above q
    """
    if not lies_above(ps, p, q):
        raise NotAbove(f"{p.label()} does not lie above {q.label()}")
    q_vertices = set(q.vertices)
    common = [v for v in p.vertices if v in q_vertices]
    shared = [Path.empty(p.start)]
    blocks = []
    for u, w in zip(common, common[1:]):
        upper, lower = p.between(u, w), q.between(u, w)
        if upper == lower:
            shared[-1] = shared[-1].then(upper)
        else:
            blocks.append((upper, lower))
            shared.append(Path.empty(w))
    factorization = ParallelFactorization(tuple(shared), tuple(blocks))
    assert factorization.upper() == p and factorization.lower() == q
    return factorization


def extremal_paths(ps: PastingScheme, x: str, y: str) -> Tuple[Path, Path]:
    """
    The topmost and bottommost paths from x to y, built greedily.

    Raises:
        NotReachable: if there is no path from x to y
    """
    if not reachable(ps, x, y):
        raise NotReachable(f"no path from {x} to {y}", x=x, y=y)
    if x == y:
        return Path.empty(x), Path.empty(x)
    return _greedy_path(ps, x, y, top=True), _greedy_path(ps, x, y, top=False)


def _greedy_path(ps: PastingScheme, x: str, y: str, top: bool) -> Path:
    edges: List[str] = []
    v = x
    while v != y:
        candidates = [e for e in ps.out_orders[v] if y in ps.descendants[ps.edge_map[e].tgt]]
        chosen = candidates[-1] if top else candidates[0]
        edges.append(chosen)
        v = ps.edge_map[chosen].tgt
    return ps.path(edges)


def _neighbour_across(ps: PastingScheme, face: Face, edge_id: str) -> Optional[str]:
    """The face on the other side of edge_id, or None for the exterior."""
    if edge_id in face.dom.edges:
        return ps.cod_face_of.get(edge_id)
    return ps.dom_face_of.get(edge_id)


def _restrict(ps: PastingScheme, keep_edges: set, marker_edge: str) -> PlaneGraph:
    edges = tuple(e for e in ps.edges if e.id in keep_edges)
    vertices = {e.src for e in edges} | {e.tgt for e in edges}
    objects = tuple(v for v in ps.objects if v in vertices)
    rotation = {v: tuple(d for d in ps.graph.rotation[v] if d[0] in keep_edges) for v in objects}
    coords = None
    if ps.graph.coords is not None:
        coords = {v: xy for v, xy in ps.graph.coords.items() if v in vertices}
    return PlaneGraph(objects, edges, rotation, (marker_edge, LEFT), coords)


def sub_scheme_pq(ps: PastingScheme, p: Path, q: Path) -> PastingScheme:
    """
    The pasting scheme p/q of everything between p and q.

    Args:
        ps: pasting scheme
        p, q: non-empty parallel paths with p above q

    Returns:
        PastingScheme with dom = p and cod = q; faces keep their ids

    Raises:
        TrivialPath, NotParallel, NotAbove
    """
    if p.is_empty() or q.is_empty():
        raise TrivialPath("p/q needs non-empty paths")
    factorization = partition_parallel(ps, p, q)

    region = set()
    for upper, lower in factorization.blocks:
        wall = set(upper.edges) | set(lower.edges)
        start = ps.dom_face_of.get(upper.edges[0])
        assert start is not None, f"no interior face below {upper.edges[0]}"
        stack = [start]
        while stack:
            face_id = stack.pop()
            if face_id in region:
                continue
            region.add(face_id)
            face = ps.face(face_id)
            for edge_id in face.dom.edges + face.cod.edges:
                if edge_id in wall:
                    continue
                other = _neighbour_across(ps, face, edge_id)
                assert other is not None, f"region between paths leaks through {edge_id}"
                stack.append(other)

    keep = set(p.edges) | set(q.edges)
    for face_id in region:
        face = ps.face(face_id)
        keep.update(face.dom.edges)
        keep.update(face.cod.edges)

    sub = validate_pasting_scheme(_restrict(ps, keep, p.edges[0]))
    assert sub.dom.edges == p.edges and sub.cod.edges == q.edges
    assert set(sub.face_ids) == region
    return sub


def sub_scheme_between(ps: PastingScheme, x: str, y: str) -> PastingScheme:
    """
    The sub pasting scheme P_{x,y} of everything between x and y.

    Raises:
        NotReachable: if x does not strictly precede y
    """
    if x == y:
        ps.check_vertex(x)
        raise NotReachable(f"{x} does not strictly precede itself", x=x, y=y)
    top, bottom = extremal_paths(ps, x, y)
    return sub_scheme_pq(ps, top, bottom)


def face_inclusion(sub: PastingScheme, ps: PastingScheme) -> Dict[str, str]:
    """Sub face id -> parent face id; sub-schemes keep face ids."""
    mapping = {}
    for face in sub.faces:
        parent = ps.face(face.id)
        assert parent.dom == face.dom and parent.cod == face.cod
        mapping[face.id] = parent.id
    return mapping


def top_cells(ps: PastingScheme) -> List[str]:
    """Faces whose source path is a subpath of dom_P, ordered along dom_P."""
    found = [(ps.dom.find_edges(f.dom.edges), f.id) for f in ps.faces]
    cells = [face_id for pos, face_id in sorted(found) if pos >= 0]
    assert cells or not ps.faces, "a scheme with faces has a top cell"
    return cells


def bottom_cells(ps: PastingScheme) -> List[str]:
    """Faces whose target path is a subpath of cod_P, ordered along cod_P."""
    found = [(ps.cod.find_edges(f.cod.edges), f.id) for f in ps.faces]
    cells = [face_id for pos, face_id in sorted(found) if pos >= 0]
    assert cells or not ps.faces, "a scheme with faces has a bottom cell"
    return cells


def _rewrite(path: Path, old: Path, new: Path) -> Path:
    i = path.find_edges(old.edges)
    assert i >= 0
    return path.segment(0, i).then(new).then(path.segment(i + len(old), len(path)))


def delete_top_cell(ps: PastingScheme, face_id: str) -> PastingScheme:
    """
    Remove a top cell: the edges and interior vertices of its source path go.

    Raises:
        NotTopCell
    """
    if face_id not in top_cells(ps):
        raise NotTopCell(f"{face_id} is not a top cell", face=face_id)
    face = ps.face(face_id)
    new_dom = _rewrite(ps.dom, face.dom, face.cod)
    result = sub_scheme_pq(ps, new_dom, ps.cod)
    assert len(result.faces) == len(ps.faces) - 1
    return result


def delete_bottom_cell(ps: PastingScheme, face_id: str) -> PastingScheme:
    """
    Remove a bottom cell: the edges and interior vertices of its target path go.

    Raises:
        NotBottomCell
    """
    if face_id not in bottom_cells(ps):
        raise NotBottomCell(f"{face_id} is not a bottom cell", face=face_id)
    face = ps.face(face_id)
    new_cod = _rewrite(ps.cod, face.cod, face.dom)
    result = sub_scheme_pq(ps, ps.dom, new_cod)
    assert len(result.faces) == len(ps.faces) - 1
    return result


@dataclass(frozen=True)
class PresentationStep:
    face: str
    prefix: Path
    suffix: Path

    def to_dict(self) -> Dict[str, object]:
        return {"face": self.face, "prefix": self.prefix.to_list(), "suffix": self.suffix.to_list()}


@dataclass(frozen=True)
class Presentation:
    """An ordering of the faces with the whiskering paths of each step."""
    steps: Tuple[PresentationStep, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def faces(self) -> List[str]:
        return [step.face for step in self.steps]

    def to_json(self) -> List[Dict[str, object]]:
        return [step.to_dict() for step in self.steps]


def presentation(ps: PastingScheme) -> Presentation:
    """
    Present the scheme by repeatedly deleting the top cell that starts earliest along dom.

    Returns:
        Presentation with one step per face
    """
    steps = []
    current = ps
    while current.faces:
        face_id = top_cells(current)[0]
        face = current.face(face_id)
        i = current.dom.find_edges(face.dom.edges)
        steps.append(PresentationStep(
            face_id,
            current.dom.segment(0, i),
            current.dom.segment(i + len(face.dom), len(current.dom)),
        ))
        current = delete_top_cell(current, face_id)
    result = Presentation(tuple(steps))
    check_presentation(ps, result)
    return result


def replay_presentation(ps: PastingScheme, pres: Presentation) -> List[Path]:
    """The paths m_0 = dom_P, ..., m_n = cod_P visited by a presentation."""
    chain = [ps.dom]
    for step in pres.steps:
        face = ps.face(step.face)
        before = step.prefix.then(face.dom).then(step.suffix)
        if before != chain[-1]:
            raise PreconditionFailed(f"presentation step {step.face} does not match the current path")
        chain.append(step.prefix.then(face.cod).then(step.suffix))
    return chain


def check_presentation(ps: PastingScheme, pres: Presentation) -> None:
    """Assert every invariant of a presentation."""
    assert sorted(pres.faces()) == sorted(ps.face_ids), "each face appears exactly once"
    chain = replay_presentation(ps, pres)
    assert chain[-1] == ps.cod, "presentation ends at cod_P"


def enumerate_presentations(ps: PastingScheme, cap: int = 500) -> List[Presentation]:
    """
    Enumerate presentations by path rewriting.

    Starting from dom_P, every face whose source path occurs in the current
    path may be rewritten next; branches are explored in order of where the
    source path starts.

    Args:
        ps: pasting scheme
        cap: stop after this many presentations

    Returns:
        list of Presentation, each ending at cod_P
    """
    results: List[Presentation] = []
    faces = [ps.face(f) for f in ps.face_ids]

    def extend(current: Path, remaining: Tuple[Face, ...], steps: Tuple[PresentationStep, ...]) -> None:
        if len(results) >= cap:
            return
        if not remaining:
            results.append(Presentation(steps))
            return
        options = sorted((current.find_edges(f.dom.edges), f.id, f) for f in remaining)
        for i, face_id, face in options:
            if i < 0:
                continue
            prefix = current.segment(0, i)
            suffix = current.segment(i + len(face.dom), len(current))
            rest = tuple(f for f in remaining if f.id != face_id)
            extend(prefix.then(face.cod).then(suffix), rest, steps + (PresentationStep(face_id, prefix, suffix),))

    extend(ps.dom, tuple(faces), ())
    return results


def directly_above_order(ps: PastingScheme) -> nx.DiGraph:
    """The directly-above relation on faces: alpha -> beta iff cod_alpha meets dom_beta."""
    order = nx.DiGraph()
    order.add_nodes_from(ps.face_ids)
    for e, upper in ps.cod_face_of.items():
        lower = ps.dom_face_of.get(e)
        if lower is not None:
            order.add_edge(upper, lower)
    if not nx.is_directed_acyclic_graph(order):
        raise CycleFound("directly-above relation has a cycle",
                         cycle=[u for u, _ in nx.find_cycle(order)])
    return order


def _fresh_prefix(ps: PastingScheme) -> str:
    edge_ids = {e.id for e in ps.edges}
    k = 0
    while any(i.startswith(f"a{k}.") for i in edge_ids) or any(v.startswith(f"a{k}.") for v in ps.objects):
        k += 1
    return f"a{k}"


def attach_at_bottom(ps: PastingScheme, start: int, length: int, cod_length: int = 1) -> Tuple[PastingScheme, str]:
    """
    Attach a new face below a stretch of cod_P.

    The stretch of cod_P from edge start to edge start + length - 1 becomes
    the source path of the new face. Its target path is a fresh chain of
    cod_length edges from the same endpoints, placed just below the stretch
    in the rotation at both ends, so it becomes part of the new cod_P. New
    edges are named 'a<k>.<i>' and new vertices 'a<k>.v<i>' with the
    smallest k not already in use. The result is validated from scratch.

    Args:
        ps: pasting scheme
        start: index of the first edge of cod_P that becomes the new face's source
        length: number of cod_P edges in the new face's source path
        cod_length: number of new edges in the new face's target path

    Returns:
        (P with the new face, id of the new face)

    Raises:
        PreconditionFailed: if the stretch is empty or runs past cod_P, or
            cod_length < 1
    """
    if length < 1 or cod_length < 1 or start < 0 or start + length > len(ps.cod):
        raise PreconditionFailed("attachment must cover a non-empty stretch of cod_P",
                                 start=start, length=length, cod_length=cod_length)
    dom_alpha = ps.cod.segment(start, start + length)
    x, y = dom_alpha.start, dom_alpha.end
    prefix = _fresh_prefix(ps)
    new_vertices = [f"{prefix}.v{i}" for i in range(1, cod_length)]
    chain = [x] + new_vertices + [y]
    new_edges = [Edge(f"{prefix}.{i}", chain[i], chain[i + 1]) for i in range(cod_length)]

    rotation = {v: list(darts) for v, darts in ps.graph.rotation.items()}
    at_x = rotation[x]
    at_x.insert(at_x.index((dom_alpha.edges[0], OUT)) + 1, (new_edges[0].id, OUT))
    at_y = rotation[y]
    at_y.insert(at_y.index((dom_alpha.edges[-1], IN)), (new_edges[-1].id, IN))
    for i, v in enumerate(new_vertices):
        rotation[v] = [(new_edges[i + 1].id, OUT), (new_edges[i].id, IN)]

    graph = PlaneGraph(
        ps.objects + tuple(new_vertices),
        ps.edges + tuple(new_edges),
        {v: tuple(d) for v, d in rotation.items()},
        (ps.dom.edges[0], LEFT),
    )
    result = validate_pasting_scheme(graph)
    face_id = result.dom_face_of[dom_alpha.edges[0]]
    assert result.face(face_id).cod.edges == tuple(e.id for e in new_edges)
    logger.debug(f"Attached {face_id} below {dom_alpha.label()}")
    return result, face_id


def subdivide_edge(ps: PastingScheme, edge_id: str, n: int) -> PastingScheme:
    """
    Replace an edge by a path through n vertices (n - 1 edges).

    Args:
        ps: pasting scheme
        edge_id: edge to subdivide
        n: number of vertices on the replacement path; 2 leaves ps unchanged

    Raises:
        NotAnEdge
    """
    if edge_id not in ps.edge_map:
        raise NotAnEdge(f"unknown edge {edge_id}", edge=edge_id)
    if n < 2:
        raise PreconditionFailed("subdivision length must be at least 2", n=n)
    if n == 2:
        return ps
    old = ps.edge_map[edge_id]
    new_vertices = [f"{edge_id}.v{i}" for i in range(1, n - 1)]
    chain = [old.src] + new_vertices + [old.tgt]
    new_edges = [Edge(f"{edge_id}.{i}", chain[i - 1], chain[i]) for i in range(1, n)]
    taken = {e.id for e in ps.edges} | set(ps.objects)
    if any(e.id in taken for e in new_edges) or any(v in taken for v in new_vertices):
        raise PreconditionFailed(f"subdivision ids for {edge_id} are already taken")

    edges: List[Edge] = []
    for e in ps.edges:
        edges.extend(new_edges if e.id == edge_id else [e])
    rotation = {}
    for v, darts in ps.graph.rotation.items():
        replaced = []
        for dart in darts:
            if dart == (edge_id, OUT):
                dart = (new_edges[0].id, OUT)
            elif dart == (edge_id, IN):
                dart = (new_edges[-1].id, IN)
            replaced.append(dart)
        rotation[v] = tuple(replaced)
    for i, v in enumerate(new_vertices):
        rotation[v] = ((new_edges[i + 1].id, OUT), (new_edges[i].id, IN))

    marker_edge, side = ps.graph.exterior
    if marker_edge == edge_id:
        marker_edge = new_edges[0].id
    graph = PlaneGraph(ps.objects + tuple(new_vertices), tuple(edges), rotation, (marker_edge, side))
    return validate_pasting_scheme(graph)


def whisker_map(ps: PastingScheme, edge_id: str, n: int):
    """
    Send paths of ps to the matching paths of subdivide_edge(ps, edge_id, n).

    Returns:
        image(path, target) replacing edge_id by its subdivision, built as a
        Path of target
    """
    replacement = tuple(f"{edge_id}.{i}" for i in range(1, n)) if n > 2 else (edge_id,)

    def image(path: Path, target: PastingScheme) -> Path:
        edges: List[str] = []
        for e in path.edges:
            edges.extend(replacement if e == edge_id else (e,))
        return target.path(edges, start=path.start)

    return image


def subdivision_path(edge_id: str, n: int, i: int, j: int) -> Sequence[str]:
    """Edges of the subdivided edge between its i-th and j-th vertices (0 = src)."""
    return [f"{edge_id}.{k}" for k in range(i + 1, j + 1)] if n > 2 else ([edge_id] if (i, j) == (0, 1) else [])


def subdivision_vertices(ps: PastingScheme, edge_id: str, n: int) -> List[str]:
    """The n vertices along edge_id once it is subdivided, src first."""
    old = ps.edge_map[edge_id]
    return [old.src] + [f"{edge_id}.v{i}" for i in range(1, n - 1)] + [old.tgt]
