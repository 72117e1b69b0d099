"""
Scheme file reading and writing.

A scheme file is UTF-8 JSON:
    {"objects": [...], "edges": [{"id", "src", "tgt"}, ...],
     "rotation": {vertex: ["out:<edge>" | "in:<edge>", ...]},   clockwise
     "exterior": {"edge": id, "side": "left" | "right"},
     "coords": {vertex: [x, y]}}                                 optional
Serialization is canonical: keys sorted, arrays kept in input order.
"""

import hashlib
import json
import logging
from typing import Any, Dict, Mapping, Optional, Union

from modules.errors import ParseError
from modules.scheme_core import (
    IN,
    OUT,
    Edge,
    PastingScheme,
    PlaneGraph,
    validate_pasting_scheme,
)

# Configure logging
logger = logging.getLogger(__name__)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ParseError(message)


def _parse_dart(text: Any, vertex: str):
    _require(isinstance(text, str) and ":" in text, f"bad dart {text!r} at vertex {vertex}")
    kind, _, edge_id = text.partition(":")
    _require(kind in (OUT, IN) and edge_id != "", f"bad dart {text!r} at vertex {vertex}")
    return (edge_id, kind)


def parse_scheme(text: Union[str, bytes]) -> PlaneGraph:
    """
    Parse a scheme file into a plane graph.

    Args:
        text: file contents

    Returns:
        PlaneGraph

    Raises:
        ParseError: malformed file
        StructureError: well-formed file describing an impossible graph
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(f"scheme file is not UTF-8: {str(e)}")
    if not text.strip():
        raise ParseError("empty scheme file")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {str(e)}", line=e.lineno, column=e.colno)

    _require(isinstance(data, dict), "top level must be an object")
    for key in ("objects", "edges", "rotation", "exterior"):
        _require(key in data, f"missing key {key!r}")

    objects = data["objects"]
    _require(isinstance(objects, list) and all(isinstance(v, str) for v in objects),
             "objects must be an array of strings")

    edges = []
    _require(isinstance(data["edges"], list), "edges must be an array")
    for item in data["edges"]:
        _require(isinstance(item, dict) and all(isinstance(item.get(k), str) for k in ("id", "src", "tgt")),
                 f"bad edge entry {item!r}")
        edges.append(Edge(item["id"], item["src"], item["tgt"]))

    rotation_data = data["rotation"]
    _require(isinstance(rotation_data, dict), "rotation must be an object")
    rotation = {}
    for vertex, darts in rotation_data.items():
        _require(isinstance(darts, list), f"rotation of {vertex} must be an array")
        rotation[vertex] = tuple(_parse_dart(d, vertex) for d in darts)

    exterior = data["exterior"]
    _require(isinstance(exterior, dict) and isinstance(exterior.get("edge"), str)
             and isinstance(exterior.get("side"), str), "exterior must be {edge, side}")

    coords = None
    if "coords" in data:
        _require(isinstance(data["coords"], dict), "coords must be an object")
        coords = {}
        for vertex, xy in data["coords"].items():
            _require(isinstance(xy, list) and len(xy) == 2 and all(isinstance(c, (int, float)) for c in xy),
                     f"bad coordinates for {vertex}")
            coords[vertex] = (xy[0], xy[1])

    return PlaneGraph(tuple(objects), tuple(edges), rotation,
                      (exterior["edge"], exterior["side"]), coords)


def scheme_to_dict(g: PlaneGraph, parent_face_map: Optional[Mapping[str, str]] = None) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "objects": list(g.objects),
        "edges": [{"id": e.id, "src": e.src, "tgt": e.tgt} for e in g.edges],
        "rotation": {v: [f"{kind}:{edge_id}" for edge_id, kind in g.rotation[v]] for v in g.objects},
        "exterior": {"edge": g.exterior[0], "side": g.exterior[1]},
    }
    if g.coords is not None:
        data["coords"] = {v: list(xy) for v, xy in g.coords.items()}
    if parent_face_map is not None:
        data["parent_face_map"] = dict(parent_face_map)
    return data


def serialize_scheme(g: PlaneGraph, parent_face_map: Optional[Mapping[str, str]] = None) -> str:
    """
    Canonical text of a plane graph.

    Args:
        g: plane graph
        parent_face_map: optional sub-scheme face id -> parent face id

    Returns:
        str: JSON text with sorted keys and a trailing newline
    """
    return json.dumps(scheme_to_dict(g, parent_face_map), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def scheme_fingerprint(g: PlaneGraph) -> str:
    return hashlib.sha256(serialize_scheme(g).encode("utf-8")).hexdigest()


def load_scheme(path: str) -> PastingScheme:
    """
    Read, parse and validate a scheme file.

    Args:
        path: file path

    Returns:
        PastingScheme
    """
    with open(path, "rb") as f:
        raw = f.read()
    graph = parse_scheme(raw)
    ps = validate_pasting_scheme(graph)
    logger.info(f"Loaded {path}: {len(ps.objects)} objects, {len(ps.edges)} edges, {len(ps.faces)} faces")
    return ps


def _quote(name: str) -> str:
    return '"' + name.replace('"', '\\"') + '"'


def to_dot(ps: PastingScheme) -> str:
    """
    DOT text for a pasting scheme; faces are listed as comments.
    """
    lines = ["digraph pasting_scheme {", "  rankdir=LR;"]
    for v in ps.objects:
        lines.append(f"  {_quote(v)};")
    for e in ps.edges:
        lines.append(f"  {_quote(e.src)} -> {_quote(e.tgt)} [label={_quote(e.id)}];")
    for face in ps.faces:
        lines.append(f"  // face {face.id}: {face.dom.label()} => {face.cod.label()}")
    lines.append(f"  // exterior: dom {ps.dom.label()} cod {ps.cod.label()}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def hasse_dot(hom) -> str:
    """
    DOT text for the Hasse diagram of a hom-poset; arrows point from a path
    to the paths directly below it.
    """
    lines = [f"digraph hom_{_dot_id(hom.x)}_{_dot_id(hom.y)} {{", "  rankdir=TB;"]
    for i, p in enumerate(hom.elements):
        lines.append(f"  n{i} [label={_quote(p.label())}];")
    for i, j in hom.poset.covers():
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_id(name: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in name)

