"""
Finite posets, Dwyer maps and pushouts, and one-way categories.

Posets are stored as a tuple of hashable element labels plus a boolean order
matrix. Maps between posets are tuples of target indices. Every category the
pasting-scheme pipeline produces is a poset, so Dwyer detection and pushouts
along Dwyer maps are done for posets; one-way categories get their own small
representation for the hom-set pushout formula.
"""

import itertools
import logging
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
from networkx.utils import UnionFind

from modules.errors import (
    NotDwyer,
    NotFull,
    NotMonotone,
    NotOneWay,
    NotStrictlyBelow,
    PosetError,
    PreconditionFailed,
)

# Configure logging
logger = logging.getLogger(__name__)

TERMINAL = "⊤"


@dataclass(frozen=True)
class FinPoset:
    """A finite poset: element labels and le[i][j] meaning elements[i] <= elements[j]."""
    elements: Tuple[Hashable, ...]
    le: Tuple[Tuple[bool, ...], ...] = field(repr=False)

    def __post_init__(self):
        n = len(self.elements)
        if len(set(self.elements)) != n:
            raise PosetError("duplicate element labels")
        if len(self.le) != n or any(len(row) != n for row in self.le):
            raise PosetError("order matrix has the wrong shape")
        for i in range(n):
            if not self.le[i][i]:
                raise PosetError(f"not reflexive at {self.elements[i]!r}")
            for j in range(n):
                if i != j and self.le[i][j] and self.le[j][i]:
                    raise PosetError(f"not antisymmetric: {self.elements[i]!r}, {self.elements[j]!r}")
                if self.le[i][j]:
                    for k in range(n):
                        if self.le[j][k] and not self.le[i][k]:
                            raise PosetError("not transitive")

    @classmethod
    def from_relation(cls, elements: Sequence[Hashable], pairs: Iterable[Tuple[Hashable, Hashable]]) -> "FinPoset":
        """Reflexive-transitive closure of a relation given on labels."""
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(elements)))
        index = {label: i for i, label in enumerate(elements)}
        graph.add_edges_from((index[a], index[b]) for a, b in pairs)
        closure = nx.transitive_closure(graph, reflexive=True)
        n = len(elements)
        le = tuple(tuple(closure.has_edge(i, j) for j in range(n)) for i in range(n))
        return cls(tuple(elements), le)

    @classmethod
    def from_leq(cls, elements: Sequence[Hashable], leq: Callable[[Any, Any], bool]) -> "FinPoset":
        items = tuple(elements)
        return cls(items, tuple(tuple(bool(leq(a, b)) for b in items) for a in items))

    @classmethod
    def chain(cls, n: int) -> "FinPoset":
        """The chain 0 < 1 < ... < n-1."""
        return cls.from_leq(range(n), lambda a, b: a <= b)

    @classmethod
    def discrete(cls, n: int) -> "FinPoset":
        return cls.from_leq(range(n), lambda a, b: a == b)

    @cached_property
    def index(self) -> Dict[Hashable, int]:
        return {label: i for i, label in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    def leq(self, a: Hashable, b: Hashable) -> bool:
        return self.le[self.index[a]][self.index[b]]

    def lt_indices(self, i: int, j: int) -> bool:
        return i != j and self.le[i][j]

    @cached_property
    def strictly_above(self) -> Tuple[Tuple[int, ...], ...]:
        """For each index, the indices strictly greater than it."""
        n = len(self)
        return tuple(tuple(j for j in range(n) if self.lt_indices(i, j)) for i in range(n))

    def down_set(self, i: int) -> FrozenSet[int]:
        return frozenset(j for j in range(len(self)) if self.le[j][i])

    def up_set(self, i: int) -> FrozenSet[int]:
        return frozenset(j for j in range(len(self)) if self.le[i][j])

    def greatest(self, indices: Optional[Iterable[int]] = None) -> Optional[int]:
        """The greatest element among the given indices (all elements by default), if any."""
        pool = list(range(len(self))) if indices is None else list(indices)
        for i in pool:
            if all(self.le[j][i] for j in pool):
                return i
        return None

    def least(self, indices: Optional[Iterable[int]] = None) -> Optional[int]:
        pool = list(range(len(self))) if indices is None else list(indices)
        for i in pool:
            if all(self.le[i][j] for j in pool):
                return i
        return None

    def height(self) -> int:
        """Number of elements in a longest chain, minus one (-1 when empty)."""
        longest = [1] * len(self)
        order = sorted(range(len(self)), key=lambda i: len(self.down_set(i)))
        for i in order:
            for j in self.strictly_above[i]:
                longest[j] = max(longest[j], longest[i] + 1)
        return max(longest, default=0) - 1

    def covers(self) -> List[Tuple[int, int]]:
        """Hasse diagram edges as index pairs."""
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(self)))
        graph.add_edges_from((i, j) for i in range(len(self)) for j in self.strictly_above[i])
        return sorted(nx.transitive_reduction(graph).edges())

    def product(self, other: "FinPoset") -> "FinPoset":
        """Product order on pairs (a, b)."""
        pairs = [(a, b) for a in self.elements for b in other.elements]
        idx = [(i, j) for i in range(len(self)) for j in range(len(other))]
        le = tuple(tuple(self.le[i][k] and other.le[j][l] for k, l in idx) for i, j in idx)
        return FinPoset(tuple(pairs), le)

    def opposite(self) -> "FinPoset":
        n = len(self)
        return FinPoset(self.elements, tuple(tuple(self.le[j][i] for j in range(n)) for i in range(n)))

    def is_isomorphic_via(self, other: "FinPoset", mapping: Mapping[Hashable, Hashable]) -> bool:
        """True iff mapping (labels to labels) is an order isomorphism onto other."""
        if len(self) != len(other) or set(mapping) != set(self.elements):
            return False
        image = [mapping[a] for a in self.elements]
        if len(set(image)) != len(image) or set(image) != set(other.elements):
            return False
        return all(self.le[i][j] == other.leq(image[i], image[j])
                   for i in range(len(self)) for j in range(len(self)))

    def to_json(self, label: Callable[[Hashable], Any] = str) -> Dict[str, Any]:
        return {"elements": [label(a) for a in self.elements], "covers": [list(c) for c in self.covers()]}


def enumerate_posets(n: int) -> List[FinPoset]:
    """Every partial order on the labels 0..n-1 (brute force, small n only)."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    found = []
    for bits in itertools.product((False, True), repeat=len(pairs)):
        chosen = {p for p, b in zip(pairs, bits) if b}
        if any((j, i) in chosen for i, j in chosen):
            continue
        if any((i, k) not in chosen for i, j in chosen for j2, k in chosen if j == j2 and i != k):
            continue
        le = tuple(tuple(i == j or (i, j) in chosen for j in range(n)) for i in range(n))
        found.append(FinPoset(tuple(range(n)), le))
    return found


def random_poset(rng: random.Random, n: int, density: float = 0.3) -> FinPoset:
    """A random poset on 0..n-1 (closure of a random DAG that respects label order)."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return FinPoset.from_relation(list(range(n)), pairs)


@dataclass(frozen=True)
class PosetMap:
    """A monotone map: element i of source goes to element mapping[i] of target."""
    source: FinPoset
    target: FinPoset
    mapping: Tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != len(self.source):
            raise PreconditionFailed("map must be defined on every element")
        for i in range(len(self.source)):
            for j in self.source.strictly_above[i]:
                if not self.target.le[self.mapping[i]][self.mapping[j]]:
                    raise NotMonotone(f"{self.source.elements[i]!r} <= {self.source.elements[j]!r} is not preserved")

    def __call__(self, label: Hashable) -> Hashable:
        return self.target.elements[self.mapping[self.source.index[label]]]

    def is_injective(self) -> bool:
        return len(set(self.mapping)) == len(self.mapping)

    def is_full(self) -> bool:
        n = len(self.source)
        return all(self.source.le[i][j] == self.target.le[self.mapping[i]][self.mapping[j]]
                   for i in range(n) for j in range(n))

    def image(self) -> FrozenSet[int]:
        return frozenset(self.mapping)


class PosetInclusion(PosetMap):
    """An injective monotone map, read as the inclusion of a subposet."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_injective():
            raise PreconditionFailed("an inclusion must be injective")

    @property
    def sub(self) -> FinPoset:
        return self.source

    @property
    def ambient(self) -> FinPoset:
        return self.target


@dataclass(frozen=True)
class DwyerWitness:
    """
    chi: ambient index -> 0 on the sieve, 1 elsewhere
    cosieve: ambient indices of the minimal cosieve W containing the sieve
    retraction: ambient index in W -> sub index (greatest sub element below it)
    """
    chi: Tuple[int, ...]
    cosieve: FrozenSet[int]
    retraction: Mapping[int, int]


def dwyer_witness(incl: PosetInclusion) -> Optional[DwyerWitness]:
    """
    Find the Dwyer witness of a full inclusion, if there is one.

    Args:
        incl: full inclusion A -> B

    Returns:
        DwyerWitness, or None when A is not a sieve or some w in W has no
        greatest element of A below it

    Raises:
        NotFull: if the inclusion is not full
    """
    if not incl.is_full():
        raise NotFull("inclusion is not full")
    ambient = incl.ambient
    image = incl.image()
    back = {b: a for a, b in enumerate(incl.mapping)}
    for a in image:
        if not ambient.down_set(a) <= image:
            return None
    cosieve = frozenset(b for b in range(len(ambient)) if any(ambient.le[a][b] for a in image))
    retraction = {}
    for w in sorted(cosieve):
        below = [a for a in image if ambient.le[a][w]]
        top = ambient.greatest(below)
        if top is None:
            return None
        retraction[w] = back[top]
    chi = tuple(0 if b in image else 1 for b in range(len(ambient)))
    return DwyerWitness(chi, cosieve, retraction)


def check_witness(incl: PosetInclusion, witness: DwyerWitness) -> bool:
    """Re-verify every Dwyer witness axiom."""
    ambient = incl.ambient
    image = incl.image()
    if {b for b, c in enumerate(witness.chi) if c == 0} != set(image):
        return False
    for b in range(len(ambient)):
        for c in ambient.strictly_above[b]:
            if witness.chi[b] > witness.chi[c]:
                return False
    if witness.cosieve != frozenset(b for b in range(len(ambient)) if any(ambient.le[a][b] for a in image)):
        return False
    if set(witness.retraction) != set(witness.cosieve):
        return False
    for sub_index, b in enumerate(incl.mapping):
        if witness.retraction[b] != sub_index:
            return False
    for w, r in witness.retraction.items():
        for sub_index, a in enumerate(incl.mapping):
            if ambient.le[a][w] != incl.sub.le[sub_index][r]:
                return False
    return True


def adjoin_terminal(A: FinPoset, label: Hashable = TERMINAL) -> Tuple[FinPoset, PosetInclusion]:
    """A with a new top element, and the inclusion of A."""
    if label in A.index:
        raise PreconditionFailed(f"label {label!r} already used")
    n = len(A)
    le = tuple(tuple(A.le[i]) + (True,) for i in range(n)) + (tuple(False for _ in range(n)) + (True,),)
    extended = FinPoset(A.elements + (label,), le)
    incl = PosetInclusion(A, extended, tuple(range(n)))
    if A.greatest() is not None:
        assert dwyer_witness(incl) is not None, "adjoining a terminal to a poset with a top is Dwyer"
    return extended, incl


def poset_product(C: FinPoset, incl: PosetInclusion) -> PosetInclusion:
    """
    C x A -> C x B for a Dwyer inclusion A -> B.

    Raises:
        NotDwyer: if A -> B has no witness
    """
    witness = dwyer_witness(incl)
    if witness is None:
        raise NotDwyer("the inclusion is not a Dwyer map")
    source = C.product(incl.sub)
    target = C.product(incl.ambient)
    m = len(incl.ambient)
    mapping = tuple(c * m + incl.mapping[a] for c in range(len(C)) for a in range(len(incl.sub)))
    product = PosetInclusion(source, target, mapping)
    expected_chi = tuple(witness.chi[b] for _ in range(len(C)) for b in range(m))
    product_witness = dwyer_witness(product)
    assert product_witness is not None and product_witness.chi == expected_chi
    assert product_witness.cosieve == frozenset(c * m + w for c in range(len(C)) for w in witness.cosieve)
    assert check_witness(product, product_witness)
    return product


@dataclass(frozen=True)
class PosetPushout:
    """D with its legs j: C -> D and g: B -> D."""
    poset: FinPoset
    j: PosetMap
    g: PosetMap


def pushout_along_dwyer(F: PosetMap, I: PosetInclusion) -> PosetPushout:
    """
    Pushout of C <- A -> B along a Dwyer inclusion, computed as a poset.

    D has elements ("C", c) for c in C and ("B", b) for b in B outside A.

    Raises:
        NotDwyer: if A -> B has no witness
    """
    if F.source != I.sub:
        raise PreconditionFailed("the span's two maps must share their source")
    witness = dwyer_witness(I)
    if witness is None:
        raise NotDwyer("the inclusion is not a Dwyer map")
    C, B = F.target, I.ambient
    image = I.image()
    outside = [b for b in range(len(B)) if b not in image]
    elements = [("C", c) for c in C.elements] + [("B", B.elements[b]) for b in outside]
    pairs = []
    for c in range(len(C)):
        for d in C.strictly_above[c]:
            pairs.append((elements[c], elements[d]))
    b_index = {b: len(C) + k for k, b in enumerate(outside)}
    for b in outside:
        for b2 in B.strictly_above[b]:
            if b2 in b_index:
                pairs.append((elements[b_index[b]], elements[b_index[b2]]))
    for a_sub, a in enumerate(I.mapping):
        for b in B.strictly_above[a]:
            if b in b_index:
                pairs.append((elements[F.mapping[a_sub]], elements[b_index[b]]))
    try:
        D = FinPoset.from_relation(elements, pairs)
    except PosetError as e:
        raise PreconditionFailed(f"pushout is not a poset: {e.message}")

    j = PosetMap(C, D, tuple(range(len(C))))
    back = {b: a for a, b in enumerate(I.mapping)}
    g_map = tuple(F.mapping[back[b]] if b in back else b_index[b] for b in range(len(B)))
    g = PosetMap(B, D, g_map)
    j_incl = PosetInclusion(C, D, j.mapping)
    assert dwyer_witness(j_incl) is not None, "pushouts of Dwyer maps are Dwyer"
    for w, r in witness.retraction.items():
        if w in b_index:
            c = F.mapping[r]
            for c2 in range(len(C)):
                assert D.le[c2][b_index[w]] == C.le[c2][c]
    return PosetPushout(D, j, g)


def monotone_maps(source: FinPoset, target: FinPoset) -> Iterable[Tuple[int, ...]]:
    """All monotone maps between two small posets, as index tuples."""
    for mapping in itertools.product(range(len(target)), repeat=len(source)):
        if all(target.le[mapping[i]][mapping[j]] for i in range(len(source)) for j in source.strictly_above[i]):
            yield mapping


def check_pushout_universal(F: PosetMap, I: PosetInclusion, pushout: PosetPushout,
                            test_posets: Sequence[FinPoset]) -> bool:
    """
    Brute-force universal property: every cocone into a test poset factors
    uniquely through D by a monotone map.
    """
    D = pushout.poset
    for X in test_posets:
        for v in monotone_maps(I.ambient, X):
            for u in monotone_maps(F.target, X):
                if any(u[F.mapping[a]] != v[I.mapping[a]] for a in range(len(I.sub))):
                    continue
                h: Dict[int, int] = {}
                for c in range(len(F.target)):
                    h[pushout.j.mapping[c]] = u[c]
                for b in range(len(I.ambient)):
                    d = pushout.g.mapping[b]
                    if h.setdefault(d, v[b]) != v[b]:
                        return False
                if len(h) != len(D):
                    return False
                if not all(X.le[h[i]][h[j]] for i in range(len(D)) for j in D.strictly_above[i]):
                    return False
    return True


# One-way categories

@dataclass(frozen=True)
class Identity:
    object: Hashable


@dataclass(frozen=True, eq=False)
class FinCategory:
    """
    A finite category given by objects, non-identity hom-sets and a
    composition table (g, f) -> g o f for composable non-identity pairs.
    Identities are implicit.
    """
    objects: Tuple[Hashable, ...]
    homs: Mapping[Tuple[Hashable, Hashable], Tuple[Hashable, ...]]
    composition: Mapping[Tuple[Hashable, Hashable], Hashable]

    @cached_property
    def ends(self) -> Dict[Hashable, Tuple[Hashable, Hashable]]:
        return {m: pair for pair, arrows in self.homs.items() for m in arrows}

    def hom(self, a: Hashable, b: Hashable) -> Tuple[Hashable, ...]:
        arrows = tuple(self.homs.get((a, b), ()))
        return (Identity(a),) + arrows if a == b else arrows

    def compose(self, g: Hashable, f: Hashable) -> Hashable:
        """g o f (f first)."""
        if isinstance(f, Identity):
            return g
        if isinstance(g, Identity):
            return f
        return self.composition[(g, f)]

    def is_one_way(self) -> bool:
        if any(self.homs.get((a, a)) for a in self.objects):
            return False
        graph = nx.DiGraph()
        graph.add_nodes_from(self.objects)
        graph.add_edges_from(pair for pair, arrows in self.homs.items() if arrows)
        return nx.is_directed_acyclic_graph(graph)

    def precedes(self, a: Hashable, b: Hashable) -> bool:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.objects)
        graph.add_edges_from(pair for pair, arrows in self.homs.items() if arrows)
        return a == b or nx.has_path(graph, a, b)

    def hom_sizes(self) -> Dict[Tuple[Hashable, Hashable], int]:
        return {(a, b): len(self.hom(a, b)) for a in self.objects for b in self.objects}


def free_category(objects: Sequence[Hashable], arrows: Mapping[Hashable, Tuple[Hashable, Hashable]]) -> FinCategory:
    """
    The free category on an acyclic quiver; morphisms are tuples of arrow
    names in diagrammatic order.
    """
    quiver = nx.MultiDiGraph()
    quiver.add_nodes_from(objects)
    quiver.add_edges_from(arrows.values())
    if not nx.is_directed_acyclic_graph(quiver):
        raise NotOneWay("quiver has a cycle")
    out: Dict[Hashable, List[Hashable]] = {a: [] for a in objects}
    for name, (src, _) in arrows.items():
        out[src].append(name)
    homs: Dict[Tuple[Hashable, Hashable], List[Tuple[Hashable, ...]]] = {}

    def walk(start: Hashable, at: Hashable, word: Tuple[Hashable, ...]) -> None:
        for name in out[at]:
            nxt = word + (name,)
            homs.setdefault((start, arrows[name][1]), []).append(nxt)
            walk(start, arrows[name][1], nxt)

    for a in objects:
        walk(a, a, ())
    composition = {}
    for (a, b), fs in homs.items():
        for (b2, c), gs in homs.items():
            if b2 == b:
                for f in fs:
                    for g in gs:
                        composition[(g, f)] = f + g
    return FinCategory(tuple(objects), {k: tuple(v) for k, v in homs.items()}, composition)


def one_way_pushout(C: FinCategory, c0: Hashable, c1: Hashable, S: Sequence[Hashable],
                    T: Sequence[Hashable], f: Mapping[Hashable, Hashable],
                    g: Mapping[Hashable, Hashable]) -> FinCategory:
    """
    Glue T as new arrows c0 -> c1 along f: S -> T, identifying f(s) with g(s) in C(c0, c1).

    D(a, b) is C(a, b) plus the triples (q, t, p) with p in C(a, c0),
    t in T, q in C(c1, b), modulo (q, f(s), p) ~ q o g(s) o p.

    Raises:
        NotOneWay, NotStrictlyBelow
    """
    if not C.is_one_way():
        raise NotOneWay("category is not one-way")
    if c0 == c1 or not C.precedes(c0, c1):
        raise NotStrictlyBelow(f"{c0!r} is not strictly below {c1!r}")
    if any(f[s] not in T for s in S) or any(g[s] not in C.hom(c0, c1) for s in S):
        raise PreconditionFailed("f must land in T and g in C(c0, c1)")

    homs: Dict[Tuple[Hashable, Hashable], Tuple[Hashable, ...]] = {}
    classes: Dict[Tuple[Hashable, Hashable], Dict[Hashable, Hashable]] = {}
    for a in C.objects:
        for b in C.objects:
            members: List[Hashable] = [("C", m) for m in C.hom(a, b)]
            triples = [("T", q, t, p) for p in C.hom(a, c0) for t in T for q in C.hom(c1, b)]
            members.extend(triples)
            if not members:
                continue
            uf = UnionFind(members)
            for s in S:
                for p in C.hom(a, c0):
                    for q in C.hom(c1, b):
                        uf.union(("T", q, f[s], p), ("C", C.compose(q, C.compose(g[s], p))))
            representative = {}
            for block in uf.to_sets():
                c_members = [m for m in block if m[0] == "C"]
                chosen = c_members[0] if c_members else min(block, key=repr)
                for m in block:
                    representative[m] = chosen
            classes[(a, b)] = representative
            homs[(a, b)] = tuple(sorted(set(representative.values()), key=repr))

    def compose(second: Hashable, first: Hashable, a: Hashable, b: Hashable, c: Hashable) -> Hashable:
        if first[0] == "C" and second[0] == "C":
            result: Hashable = ("C", C.compose(second[1], first[1]))
        elif first[0] == "T" and second[0] == "C":
            _, q, t, p = first
            result = ("T", C.compose(second[1], q), t, p)
        elif first[0] == "C" and second[0] == "T":
            _, q, t, p = second
            result = ("T", q, t, C.compose(p, first[1]))
        else:
            raise NotOneWay("two glued arrows can never compose in a one-way category")
        return classes[(a, c)][result]

    composition = {}
    for (a, b), firsts in homs.items():
        for (b2, c), seconds in homs.items():
            if b2 != b:
                continue
            for first in firsts:
                for second in seconds:
                    if _is_identity(first) or _is_identity(second):
                        continue
                    composition[(second, first)] = compose(second, first, a, b, c)

    D_homs = {pair: tuple(m for m in arrows if not _is_identity(m)) for pair, arrows in homs.items()}
    logger.debug(f"One-way pushout: {sum(len(v) for v in D_homs.values())} non-identity arrows")
    return _TaggedCategory(C.objects, D_homs, composition)


def _is_identity(m: Hashable) -> bool:
    return isinstance(m, tuple) and m[0] == "C" and isinstance(m[1], Identity)


class _TaggedCategory(FinCategory):
    """Morphisms are tagged ("C", m) or ("T", q, t, p); identities are ("C", Identity(a))."""

    def hom(self, a: Hashable, b: Hashable) -> Tuple[Hashable, ...]:
        arrows = tuple(self.homs.get((a, b), ()))
        return (("C", Identity(a)),) + arrows if a == b else arrows

    def compose(self, g: Hashable, f: Hashable) -> Hashable:
        if _is_identity(f):
            return g
        if _is_identity(g):
            return f
        return self.composition[(g, f)]


def free_words_coequalizer(C: FinCategory, c0: Hashable, c1: Hashable, S: Sequence[Hashable],
                           T: Sequence[Hashable], f: Mapping[Hashable, Hashable],
                           g: Mapping[Hashable, Hashable]) -> Dict[Tuple[Hashable, Hashable], List[FrozenSet[Tuple]]]:
    """
    Brute-force oracle for one_way_pushout.

    Every composable word in the generators (C's non-identity arrows tagged
    "C", the new arrows c0 -> c1 tagged "T") is listed per pair of objects,
    up to the longest word a one-way category allows. Words are then merged
    with a union-find under two moves: contract two adjacent C letters to
    their composite, and swap a letter f(s) for g(s). The merged blocks are
    the arrows of the pushout.

    Args:
        C: one-way category
        c0, c1: objects with c0 strictly below c1
        S, T: index sets of the glued and the new arrows
        f: S -> T
        g: S -> C(c0, c1)

    Returns:
        dict: (a, b) -> list of word classes; the empty word is the identity
    """
    generators: Dict[Hashable, Tuple[Hashable, Hashable]] = {("C", m): ends for m, ends in C.ends.items()}
    for t in T:
        generators[("T", t)] = (c0, c1)
    by_source: Dict[Hashable, List[Hashable]] = {}
    for gen, (src, _) in generators.items():
        by_source.setdefault(src, []).append(gen)

    words: Dict[Tuple[Hashable, Hashable], List[Tuple]] = {}
    limit = len(C.objects)

    def grow(start: Hashable, at: Hashable, word: Tuple) -> None:
        words.setdefault((start, at), []).append(word)
        if len(word) >= limit:
            return
        for gen in by_source.get(at, []):
            grow(start, generators[gen][1], word + (gen,))

    for a in C.objects:
        grow(a, a, ())

    result = {}
    for pair, ws in words.items():
        uf = UnionFind(ws)
        known = set(ws)
        for w in ws:
            for i in range(len(w) - 1):
                first, second = w[i], w[i + 1]
                if first[0] == "C" and second[0] == "C":
                    composite = C.compose(second[1], first[1])
                    contracted = w[:i] + (("C", composite),) + w[i + 2:]
                    if contracted in known:
                        uf.union(w, contracted)
            for i, gen in enumerate(w):
                if gen[0] != "T":
                    continue
                for s in S:
                    if f[s] == gen[1]:
                        swapped = w[:i] + (("C", g[s]),) + w[i + 1:]
                        if swapped in known:
                            uf.union(w, swapped)
        result[pair] = [frozenset(block) for block in uf.to_sets()]
    return result


def check_one_way_pushout(C: FinCategory, c0: Hashable, c1: Hashable, S: Sequence[Hashable],
                          T: Sequence[Hashable], f: Mapping[Hashable, Hashable],
                          g: Mapping[Hashable, Hashable]) -> bool:
    """Compare one_way_pushout with the free-words oracle hom by hom."""
    D = one_way_pushout(C, c0, c1, S, T, f, g)
    oracle = free_words_coequalizer(C, c0, c1, S, T, f, g)
    for a in C.objects:
        for b in C.objects:
            classes = oracle.get((a, b), [])
            arrows = D.hom(a, b)
            if len(arrows) != len(classes):
                return False
            hit = set()
            for m in arrows:
                word = _word_of(m)
                owners = [k for k, block in enumerate(classes) if word in block]
                if len(owners) != 1:
                    return False
                hit.add(owners[0])
            if len(hit) != len(classes):
                return False
    return True


def _word_of(m: Hashable) -> Tuple:
    if m[0] == "C":
        return () if isinstance(m[1], Identity) else (("C", m[1]),)
    _, q, t, p = m
    word: Tuple = ()
    if not isinstance(p, Identity):
        word += (("C", p),)
    word += (("T", t),)
    if not isinstance(q, Identity):
        word += (("C", q),)
    return word
