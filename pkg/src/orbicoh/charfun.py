# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Characteristic functions and their lattice invariants.

A characteristic function assigns a primitive vector of ``Z^n`` to every facet
such that the vectors of the facets meeting at any face are linearly independent.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence
import logging
import random

import sympy

from orbicoh.lattice import (
    Index,
    from_columns,
    is_primitive,
    is_unimodular,
    lattice_index,
    primitivize,
    quotient_projection,
    rank,
)
from orbicoh.poset import Face, FacePoset

logger = logging.getLogger(__name__)


class ZeroDimensionalFace(ValueError):
    """Raised when a characteristic function is induced on a vertex."""

    pass


class SamplingExhausted(RuntimeError):
    """Raised when no valid characteristic function was drawn in time."""

    pass


@dataclass(frozen=True)
class CharacteristicFunction:
    """Vectors ``v_i`` in ``Z^n``, indexed like the facets of a poset."""

    n: int
    vectors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "vectors", tuple(tuple(int(x) for x in v) for v in self.vectors)
        )

    def __len__(self):
        return len(self.vectors)

    def __getitem__(self, index: int) -> tuple[int, ...]:
        return self.vectors[index]

    def matrix(self, indices: Iterable[int] | None = None) -> sympy.Matrix:
        """Return the vectors with the given facet indices as matrix columns."""
        if indices is None:
            indices = range(len(self.vectors))
        return from_columns([self.vectors[i] for i in indices], self.n)

    def transform(self, unimodular) -> CharacteristicFunction:
        """Apply an integer change of basis of ``Z^n`` to every vector."""
        image = sympy.Matrix(unimodular) * self.matrix()
        return CharacteristicFunction(
            self.n, [tuple(image.col(j)) for j in range(image.cols)]
        )


def validate(poset: FacePoset, charfun: CharacteristicFunction) -> list[str]:
    """Check that `charfun` is a characteristic function on `poset`.

    :returns: a list of violations, naming the facet or face at fault
    """
    errors = []
    if charfun.n != poset.n:
        return [f"Vectors live in Z^{charfun.n} but the poset has dimension {poset.n}."]
    if len(charfun) != poset.m:
        return [f"Got {len(charfun)} vectors for {poset.m} facets."]

    for label, vector in zip(poset.facet_labels, charfun.vectors):
        if len(vector) != poset.n:
            errors.append(f"Vector {list(vector)} of facet {label} has wrong length.")
        elif not is_primitive(vector):
            errors.append(f"Vector {list(vector)} of facet {label} is not primitive.")
    if errors:
        return errors

    for face in poset.faces:
        if face.facets and rank(charfun.matrix(sorted(face.facets))) < len(face.facets):
            errors.append(
                f"Vectors at {poset.face_label(face)} are linearly dependent."
            )
    return errors


def nhat_index(charfun: CharacteristicFunction) -> Index:
    """Return the index of the lattice spanned by all vectors."""
    return lattice_index(charfun.matrix())


def _induced_vectors(
    poset: FacePoset, charfun: CharacteristicFunction, face: Face
) -> list[tuple[Face, tuple[int, ...]]]:
    """Pair each facet of `face` with its primitive vector in ``Z^n / N_I``."""
    projection = quotient_projection(charfun.matrix(sorted(face.facets)), poset.n)
    pairs = []
    for facet in poset.covers(face):
        (j,) = facet.facets - face.facets
        image = projection * sympy.Matrix(charfun.vectors[j])
        pairs.append((facet, primitivize(list(image))[0]))
    return pairs


def induced(
    poset: FacePoset, charfun: CharacteristicFunction, face: Face
) -> tuple[FacePoset, CharacteristicFunction]:
    """Restrict `charfun` to the face `face`, regraded to its own dimension.

    :raises ZeroDimensionalFace: if `face` is a vertex
    """
    if face == poset.top:
        return poset, charfun
    if face.dim == 0:
        raise ZeroDimensionalFace(f"{poset.face_label(face)} is a vertex.")

    pairs = _induced_vectors(poset, charfun, face)
    raw_labels = []
    for facet, _ in pairs:
        (j,) = facet.facets - face.facets
        raw_labels.append(poset.facet_labels[j])
    seen = defaultdict(int)
    labels = []
    for label in raw_labels:
        seen[label] += 1
        if raw_labels.count(label) > 1:
            label = f"{label}#{seen[label]}"
        labels.append(label)

    owner = {facet: index for index, (facet, _) in enumerate(pairs)}
    inner = sorted(
        poset.below(face), key=lambda f: (-f.dim, sorted(f.facets), f.component)
    )
    facets_of = {
        f: frozenset(i for facet, i in owner.items() if poset.leq(f, facet))
        for f in inner
    }
    counts = defaultdict(int)
    faces = {face: Face(face.dim, frozenset(), 0)}
    for f in inner:
        faces[f] = Face(f.dim, facets_of[f], counts[facets_of[f]])
        counts[facets_of[f]] += 1
    relation = {faces[f]: {faces[g] for g in poset.below(f)} for f in [face] + inner}
    sub = FacePoset(face.dim, labels, relation, poset.contractible_faces)
    return sub, CharacteristicFunction(face.dim, [v for _, v in pairs])


def mu(poset: FacePoset, charfun: CharacteristicFunction, face: Face) -> Index:
    """Return the order of ``N(I) / N̂(I)`` at `face`, 1 for vertices."""
    if face.dim == 0:
        return 1
    vectors = [v for _, v in _induced_vectors(poset, charfun, face)]
    return lattice_index(from_columns(vectors, face.dim))


def mu_table(poset: FacePoset, charfun: CharacteristicFunction) -> dict[Face, Index]:
    return {face: mu(poset, charfun, face) for face in poset.faces}


def vertex_dets(poset: FacePoset, charfun: CharacteristicFunction) -> dict[Face, int]:
    """Return ``|det|`` of the vectors meeting at each vertex."""
    return {
        vertex: abs(int(charfun.matrix(sorted(vertex.facets)).det()))
        for vertex in poset.vertices()
    }


def exists_coprime_vertex(
    poset: FacePoset, charfun: CharacteristicFunction, p: int
) -> Face | None:
    """Return a vertex whose determinant is coprime to `p`, if there is one."""
    for vertex, det in vertex_dets(poset, charfun).items():
        if gcd(det, p) == 1:
            return vertex
    return None


def random_primitive_vector(n: int, rng: random.Random, bound: int) -> tuple[int, ...]:
    while True:
        vector = tuple(rng.randint(-bound, bound) for _ in range(n))
        if is_primitive(vector):
            return vector


def random_characteristic_function(
    poset: FacePoset,
    rng: random.Random,
    bound: int = 5,
    attempts: int = 10_000,
) -> CharacteristicFunction:
    """Draw primitive vectors with entries in ``[-bound, bound]`` until valid.

    :raises SamplingExhausted: after `attempts` rejected draws
    """
    for _ in range(attempts):
        charfun = CharacteristicFunction(
            poset.n,
            [random_primitive_vector(poset.n, rng, bound) for _ in range(poset.m)],
        )
        if not validate(poset, charfun):
            return charfun
    raise SamplingExhausted(f"No characteristic function on {poset} found.")


def from_labelled(
    poset: FacePoset, vectors: dict[str, Sequence[int]]
) -> CharacteristicFunction:
    """Order a label to vector mapping along the facets of `poset`."""
    return CharacteristicFunction(
        poset.n, [vectors[label] for label in poset.facet_labels]
    )


def apply_unimodular(
    charfun: CharacteristicFunction, unimodular
) -> CharacteristicFunction:
    """Change the basis of ``Z^n``, which leaves every invariant unchanged.

    :raises ValueError: if `unimodular` is not invertible over the integers
    """
    if not is_unimodular(unimodular):
        raise ValueError(f"{unimodular} is not unimodular.")
    return charfun.transform(unimodular)
