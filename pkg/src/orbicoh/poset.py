# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Face posets of nice manifolds with corners.

A face is identified by its facet set ``I`` together with a component index, since
an intersection of facets may be disconnected. Facets are indexed ``0 .. m - 1``
and carry string labels for display.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product
from typing import Hashable, Iterable, Mapping, Sequence
import logging

import networkx as nx

logger = logging.getLogger(__name__)


class NotNice(ValueError):
    """Raised when a face poset is not the poset of a nice manifold with corners."""

    pass


class InconsistentInput(ValueError):
    """Raised when vertex or face data do not describe a graded face poset."""

    pass


class CollapseNotNice(ValueError):
    """Raised when collapsing facets leaves the setting of nice manifolds."""

    pass


class NotAVertex(ValueError):
    """Raised when a vertex cut is requested at a face of positive dimension."""

    pass


class PosetKind(Enum):
    SIMPLEX = "simplex"
    DIAMOND = "diamond"
    PRISM = "prism"
    OTHER = "other"


@dataclass(frozen=True)
class PosetClass:
    """The result of :func:`classify`, e.g. ``Prism(3)``."""

    kind: PosetKind
    n: int | None = None

    def __str__(self):
        if self.kind == PosetKind.OTHER:
            return "Other"
        return f"{self.kind.value.capitalize()}({self.n})"


@dataclass(frozen=True)
class Face:
    """A face ``Q_I`` of dimension ``n - |I|``.

    :param dim: the dimension of the face
    :param facets: the facet set ``I``
    :param component: which connected component of the intersection this face is
    """

    dim: int
    facets: frozenset
    component: int = 0


def _sort_key(face: Face):
    return (-face.dim, sorted(face.facets), face.component)


def _close(relation: Mapping[Face, Iterable[Face]]) -> dict[Face, frozenset]:
    """Return the transitive closure of a strict "is below" relation."""
    relation = {face: set(lower) for face, lower in relation.items()}
    for lower in list(relation.values()):
        for face in lower:
            relation.setdefault(face, set())

    closed: dict[Face, frozenset] = {}

    def down(face):
        if face not in closed:
            closed[face] = frozenset()
            result = set()
            for lower in relation[face]:
                result.add(lower)
                result |= down(lower)
            closed[face] = frozenset(result)
        return closed[face]

    for face in relation:
        down(face)
    return closed


class FacePoset:
    """The poset of faces of an n-dimensional nice manifold with corners.

    :param n: the dimension of ``Q``
    :param facet_labels: display labels for facets ``0 .. m - 1``
    :param below: for each face, faces strictly contained in it (closed transitively)
    :param contractible_faces: True when every face is known to be contractible
    """

    def __init__(
        self,
        n: int,
        facet_labels: Sequence[str],
        below: Mapping[Face, Iterable[Face]],
        contractible_faces: bool = False,
    ):
        self.n = n
        self.facet_labels = tuple(str(label) for label in facet_labels)
        self.contractible_faces = contractible_faces
        self._below = _close(below)
        self.faces = tuple(sorted(self._below, key=_sort_key))
        self._above: dict[Face, set] = {face: set() for face in self.faces}
        for face, lower in self._below.items():
            for other in lower:
                self._above[other].add(face)
        self._index = {(face.facets, face.component): face for face in self.faces}

    def __repr__(self):
        return f"<FacePoset: n={self.n} m={self.m} faces={len(self.faces)}>"

    def __len__(self):
        return len(self.faces)

    def __iter__(self):
        return iter(self.faces)

    def __contains__(self, face):
        return face in self._below

    def __eq__(self, other):
        if not isinstance(other, FacePoset):
            return NotImplemented
        return (self.n, self.facet_labels, self._below) == (
            other.n,
            other.facet_labels,
            other._below,
        )

    def __hash__(self):
        return hash((self.n, self.facet_labels, len(self.faces)))

    @classmethod
    def from_hasse(
        cls,
        n: int,
        facet_labels: Sequence[str],
        faces: Sequence[tuple[Hashable, Iterable[int]]],
        boundaries: Mapping[Hashable, Iterable[Hashable]],
        contractible_faces: bool = False,
    ) -> FacePoset:
        """Build a poset from explicit faces and their covering relations.

        ``Q`` itself is implicit: it covers every face with a single facet.

        :param faces: pairs of face id and facet indices, ``Q`` excluded
        :param boundaries: for a face id, the ids of the faces it covers
        """
        nodes = {}
        for key, facets in faces:
            if key in nodes:
                raise InconsistentInput(f"Face {key} is listed twice.")
            nodes[key] = frozenset(facets)
        top = object()
        below = {}
        for key in nodes:
            covered = list(boundaries.get(key, ()))
            unknown = [c for c in covered if c not in nodes]
            if unknown:
                raise InconsistentInput(f"Face {key} has unknown boundary {unknown}.")
            below[key] = set(covered)
        below[top] = {key for key, facets in nodes.items() if len(facets) == 1}
        nodes = {top: frozenset(), **nodes}
        poset = _assemble(n, facet_labels, nodes, below, contractible_faces)
        _raise_if_not_nice(poset)
        return poset

    @property
    def m(self) -> int:
        return len(self.facet_labels)

    @property
    def top(self) -> Face:
        return self.find(())

    def find(self, facets: Iterable[int], component: int = 0) -> Face:
        """Return the face with the given facet indices and component."""
        return self._index[(frozenset(facets), component)]

    def find_by_labels(self, labels: Iterable[str], component: int = 0) -> Face:
        return self.find((self.facet_index(label) for label in labels), component)

    def facet_index(self, label: str) -> int:
        return self.facet_labels.index(str(label))

    def components(self, facets: Iterable[int]) -> list[Face]:
        facets = frozenset(facets)
        return [face for face in self.faces if face.facets == facets]

    def faces_of_dim(self, dim: int) -> list[Face]:
        return [face for face in self.faces if face.dim == dim]

    def facets(self) -> list[Face]:
        return sorted(
            (face for face in self.faces_of_dim(self.n - 1) if len(face.facets) == 1),
            key=lambda face: (min(face.facets), face.component),
        )

    def vertices(self) -> list[Face]:
        return self.faces_of_dim(0)

    def vertex_count(self) -> int:
        return len(self.vertices())

    def enumerate_faces(self) -> list[Face]:
        """Return every face, ``Q`` first, in order of decreasing dimension."""
        return list(self.faces)

    def below(self, face: Face) -> frozenset:
        """Faces strictly contained in `face`."""
        return self._below[face]

    def above(self, face: Face) -> frozenset:
        """Faces strictly containing `face`."""
        return frozenset(self._above[face])

    def leq(self, lower: Face, upper: Face) -> bool:
        return lower == upper or lower in self._below[upper]

    def covers(self, face: Face) -> list[Face]:
        """Faces of dimension one less contained in `face`."""
        return sorted(
            (f for f in self._below[face] if f.dim == face.dim - 1), key=_sort_key
        )

    def face_label(self, face: Face) -> str:
        if not face.facets:
            return "Q"
        labels = ",".join(self.facet_labels[i] for i in sorted(face.facets))
        suffix = ""
        if len(self.components(face.facets)) > 1:
            suffix = f"#{face.component + 1}"
        return f"Q_{{{labels}}}{suffix}"

    def hasse_graph(self) -> nx.DiGraph:
        """Return the Hasse diagram with edges pointing down, nodes tagged with dim."""
        graph = nx.DiGraph()
        for face in self.faces:
            graph.add_node(face, dim=face.dim)
        for face in self.faces:
            graph.add_edges_from((face, lower) for lower in self.covers(face))
        return graph

    def niceness_errors(self) -> list[str]:
        """Check the poset against the niceness conditions.

        :returns: a list of human readable violations, empty if the poset is nice
        """
        errors = []
        tops = [face for face in self.faces if not face.facets]
        if len(tops) != 1:
            errors.append(f"Expected one face with no facets, found {len(tops)}.")

        for face in self.faces:
            label = self.face_label(face)
            if not face.facets <= set(range(self.m)):
                errors.append(f"{label} refers to unknown facets.")
            if face.dim != self.n - len(face.facets) or face.dim < 0:
                errors.append(f"{label} has dimension {face.dim}.")
            for lower in self._below[face]:
                if lower.dim >= face.dim:
                    errors.append(
                        f"{self.face_label(lower)} lies in {label} "
                        "without lower dimension."
                    )
                if not face.facets <= lower.facets:
                    errors.append(
                        f"{self.face_label(lower)} lies in {label} "
                        "but misses some of its facets."
                    )
        if errors:
            return errors

        top = tops[0]
        for face in self.faces:
            if face != top and face not in self._below[top]:
                errors.append(f"{self.face_label(face)} is not contained in Q.")

        for i, label in enumerate(self.facet_labels):
            count = len(self.components({i}))
            if count != 1:
                errors.append(f"Facet {label} appears as {count} faces.")

        for face in self.faces:
            upper = self._above[face] | {face}
            meeting = {next(iter(g.facets)) for g in upper if len(g.facets) == 1}
            if meeting != face.facets:
                errors.append(
                    f"{self.face_label(face)} lies in facets "
                    f"{sorted(self.facet_labels[i] for i in meeting)}."
                )
                continue
            for size in range(len(face.facets)):
                for subset in combinations(sorted(face.facets), size):
                    count = sum(1 for g in upper if g.facets == frozenset(subset))
                    if count != 1:
                        labels = [self.facet_labels[i] for i in subset]
                        errors.append(
                            f"{self.face_label(face)} lies in {count} faces "
                            f"with facets {labels}."
                        )
        return errors

    def is_nice(self) -> bool:
        return not self.niceness_errors()


def _assemble(
    n: int,
    facet_labels: Sequence[str],
    nodes: Mapping[Hashable, frozenset],
    below: Mapping[Hashable, Iterable[Hashable]],
    contractible_faces: bool,
) -> FacePoset:
    """Turn keyed facet sets into faces, numbering components in insertion order."""
    counts = defaultdict(int)
    faces = {}
    for key, facets in nodes.items():
        faces[key] = Face(n - len(facets), frozenset(facets), counts[facets])
        counts[facets] += 1
    relation = {faces[key]: {faces[k] for k in below[key]} for key in nodes}
    return FacePoset(n, facet_labels, relation, contractible_faces)


def _raise_if_not_nice(poset: FacePoset, error=NotNice):
    errors = poset.niceness_errors()
    if errors:
        raise error(" ".join(errors))


def _default_labels(m: int) -> tuple[str, ...]:
    return tuple(str(i + 1) for i in range(m))


def from_vertex_facets(
    n: int,
    vertex_facet_sets: Sequence[Iterable[int]],
    facet_labels: Sequence[str] | None = None,
) -> FacePoset:
    """Build the face poset spanned by vertices, each given by the facets meeting it.

    A face ``Q_J`` is a connected component of the vertices containing ``J``, joined
    along the edges whose facet sets contain ``J``. All faces are flagged contractible.

    :raises InconsistentInput: if vertices or edges are malformed
    :raises NotNice: if the resulting poset is not nice
    """
    raw = [list(vs) for vs in vertex_facet_sets]
    vertex_sets = [frozenset(int(i) for i in vs) for vs in raw]
    if not vertex_sets:
        raise InconsistentInput("No vertices given.")
    for index, (listed, facets) in enumerate(zip(raw, vertex_sets)):
        if len(listed) != n or len(facets) != n:
            raise InconsistentInput(
                f"Vertex {index + 1} lists {listed}, expected {n} distinct facets."
            )

    used = frozenset().union(*vertex_sets)
    m = len(facet_labels) if facet_labels is not None else max(used) + 1
    labels = tuple(facet_labels) if facet_labels is not None else _default_labels(m)
    if not used <= set(range(m)):
        raise InconsistentInput(f"Facet indices {sorted(used)} exceed {m} facets.")
    unused = [labels[i] for i in range(m) if i not in used]
    if unused:
        raise InconsistentInput(f"Facets {unused} contain no vertex.")

    supports = defaultdict(list)
    for index, facets in enumerate(vertex_sets):
        for size in range(n + 1):
            for subset in combinations(sorted(facets), size):
                supports[frozenset(subset)].append(index)

    edges = {}
    for facets, vertices in supports.items():
        if len(facets) == n - 1:
            if len(vertices) != 2:
                names = [labels[i] for i in sorted(facets)]
                raise InconsistentInput(
                    f"Edge with facets {names} meets {len(vertices)} vertices, "
                    "expected 2."
                )
            edges[facets] = tuple(vertices)

    spans = {}
    for facets, vertices in sorted(
        supports.items(), key=lambda item: (len(item[0]), sorted(item[0]))
    ):
        if len(facets) == n:
            components = [{v} for v in vertices]
        else:
            graph = nx.Graph()
            graph.add_nodes_from(vertices)
            graph.add_edges_from(e for k, e in edges.items() if facets <= k)
            components = sorted(nx.connected_components(graph), key=min)
        for component, members in enumerate(components):
            spans[Face(n - len(facets), facets, component)] = frozenset(members)

    relation = {
        upper: {
            lower
            for lower, lower_span in spans.items()
            if lower != upper
            and upper.facets <= lower.facets
            and lower_span <= upper_span
        }
        for upper, upper_span in spans.items()
    }
    poset = FacePoset(n, labels, relation, contractible_faces=True)
    _raise_if_not_nice(poset)
    logger.debug(f"Built {poset} from {len(vertex_sets)} vertices.")
    return poset


def simplex(n: int) -> FacePoset:
    """The n-simplex; vertex ``q_i`` is the one missing facet ``i``."""
    return from_vertex_facets(
        n, [[j for j in range(n + 1) if j != i] for i in range(n + 1)]
    )


def diamond(n: int) -> FacePoset:
    """The suspension of an (n-1)-simplex: n facets meeting in two vertices."""
    return from_vertex_facets(n, [range(n), range(n)])


def prism(n: int) -> FacePoset:
    """The prism over an (n-1)-simplex, with caps labelled ``+`` and ``-``."""
    caps = (n, n + 1)
    vertices = [
        [j for j in range(n) if j != i] + [cap] for cap in caps for i in range(n)
    ]
    return from_vertex_facets(n, vertices, _default_labels(n) + ("+", "-"))


def cube() -> FacePoset:
    """The 3-cube, opposite facets being 1/2, 3/4 and 5/6."""
    return from_vertex_facets(3, [list(c) for c in product((0, 1), (2, 3), (4, 5))])


def reference_poset(kind: PosetKind, n: int) -> FacePoset:
    """Return the reference poset of the given kind and dimension."""
    builders = {
        PosetKind.SIMPLEX: simplex,
        PosetKind.DIAMOND: diamond,
        PosetKind.PRISM: prism,
    }
    if kind not in builders:
        raise ValueError(f"There is no reference poset of kind {kind.value}.")
    if n < 2:
        raise ValueError(f"Reference posets need dimension at least 2, got {n}.")
    return builders[kind](n)


def _next_label(labels: Sequence[str]) -> str:
    candidate = len(labels) + 1
    while str(candidate) in labels:
        candidate += 1
    return str(candidate)


def vertex_cut(poset: FacePoset, vertex: Face, label: str | None = None) -> FacePoset:
    """Cut off `vertex`, adding a new facet that is an (n-1)-simplex.

    :param label: the label of the new facet
    :raises NotAVertex: if `vertex` is not a vertex of `poset`
    """
    if vertex not in poset or vertex.dim != 0:
        raise NotAVertex(f"{vertex} is not a vertex of {poset}.")
    label = label or _next_label(poset.facet_labels)
    if label in poset.facet_labels:
        raise ValueError(f"Facet label {label} is already in use.")

    new = poset.m
    raised = poset.above(vertex)
    nodes = {}
    below = {}
    for face in poset.faces:
        if face == vertex:
            continue
        nodes[face] = face.facets
        below[face] = {f for f in poset.below(face) if f != vertex}
        if face in raised:
            below[face] |= {("cut", g) for g in raised if poset.leq(g, face)}
    for face in poset.faces:
        if face in raised:
            nodes[("cut", face)] = face.facets | {new}
            below[("cut", face)] = {
                ("cut", g) for g in poset.below(face) if g in raised
            }

    result = _assemble(
        poset.n,
        poset.facet_labels + (label,),
        nodes,
        below,
        poset.contractible_faces,
    )
    _raise_if_not_nice(result)
    logger.debug(f"Cut {poset.face_label(vertex)} to get facet {label}.")
    return result


def collapse_facets(poset: FacePoset, collapsed: Iterable[int]) -> FacePoset:
    """Collapse the union of the given facets to a single vertex.

    :raises CollapseNotNice: if the union is disconnected or the result is not nice
    """
    collapsed = frozenset(collapsed)
    if not collapsed or not collapsed <= set(range(poset.m)):
        raise ValueError(f"Cannot collapse facets {sorted(collapsed)}.")
    names = [poset.facet_labels[i] for i in sorted(collapsed)]

    region = {face for face in poset.faces if face.facets & collapsed}
    graph = nx.Graph()
    graph.add_nodes_from(region)
    graph.add_edges_from(
        (face, lower) for face in region for lower in poset.covers(face)
    )
    if not nx.is_connected(graph):
        raise CollapseNotNice(f"The union of facets {names} is not connected.")

    meeting = frozenset().union(*(face.facets for face in region)) - collapsed
    if len(meeting) != poset.n:
        raise CollapseNotNice(
            f"The union of facets {names} meets {len(meeting)} facets, "
            f"a vertex needs {poset.n}."
        )

    kept = [i for i in range(poset.m) if i not in collapsed]
    reindex = {old: new for new, old in enumerate(kept)}
    point = "collapsed"
    nodes = {point: frozenset(reindex[i] for i in meeting)}
    below = {point: set()}
    for face in poset.faces:
        if face in region:
            continue
        nodes[face] = frozenset(reindex[i] for i in face.facets)
        below[face] = set(poset.below(face)) - region
        if poset.below(face) & region:
            below[face].add(point)

    result = _assemble(
        poset.n,
        [poset.facet_labels[i] for i in kept],
        nodes,
        below,
        poset.contractible_faces,
    )
    _raise_if_not_nice(result, CollapseNotNice)
    logger.debug(f"Collapsed facets {names} of {poset}.")
    return result


def isomorphic(first: FacePoset, second: FacePoset) -> bool:
    """Return True if the two posets are isomorphic as graded posets."""
    if first.n != second.n or len(first) != len(second):
        return False
    for dim in range(first.n + 1):
        if len(first.faces_of_dim(dim)) != len(second.faces_of_dim(dim)):
            return False
    return nx.is_isomorphic(
        first.hasse_graph(),
        second.hasse_graph(),
        node_match=lambda a, b: a["dim"] == b["dim"],
    )


def classify(poset: FacePoset) -> PosetClass:
    """Decide whether `poset` is a simplex, a suspension of a simplex, or a prism."""
    n, m, vertices = poset.n, poset.m, poset.vertex_count()
    kind = None
    if n >= 2:
        if m == n and vertices == 2:
            kind = PosetKind.DIAMOND
        elif m == n + 1 and vertices == n + 1:
            kind = PosetKind.SIMPLEX
        elif m == n + 2 and vertices == 2 * n:
            kind = PosetKind.PRISM
    if kind and isomorphic(poset, reference_poset(kind, n)):
        return PosetClass(kind, n)
    return PosetClass(PosetKind.OTHER)


def prism_caps(poset: FacePoset) -> list[tuple[int, int]]:
    """Return the facet pairs that can serve as the two caps of a prism.

    A pair qualifies when the two facets are disjoint and every vertex lies on
    exactly one of them.
    """
    pairs = []
    vertices = poset.vertices()
    for i, j in combinations(range(poset.m), 2):
        if any({i, j} <= face.facets for face in poset.faces):
            continue
        if all(len({i, j} & v.facets) == 1 for v in vertices):
            pairs.append((i, j))
    return pairs
