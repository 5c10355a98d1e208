# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Input documents: parsing, schema checks and conversion to library objects.

A document is YAML or JSON and holds exactly one of three sections::

    n: 3
    polytope:
      labels: ["1", "2", "3", "4"]
      vertices: [["2", "3", "4"], ["1", "3", "4"], ["1", "2", "4"], ["1", "2", "3"]]
    vectors:
      "1": [1, 0, 0]
      "2": [0, 1, 0]
      "3": [0, 0, 1]
      "4": [-1, -1, -1]
    assumptions:
      face_acyclic: true
    primes: [2, 3]

A ``poset`` section lists faces instead, each with an ``id``, its ``facets`` and
the ``boundary`` ids it covers. A ``fan`` section holds ``rays`` by label and
``cones`` as lists of ray labels, and replaces ``vectors``. Integers may be given
as decimal strings.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Any, Mapping
import logging

from ruamel.yaml.error import YAMLError

from orbicoh.charfun import CharacteristicFunction, from_labelled
from orbicoh.cohomology import AssumptionFlags
from orbicoh.fan import Fan, fan_to_pair
from orbicoh.poset import FacePoset, from_vertex_facets
from orbicoh.utils import check_primes, parse_int
from orbicoh.yaml import safe_yaml

logger = logging.getLogger(__name__)

TOP_LEVEL_KEYS = ("n", "poset", "polytope", "fan", "vectors", "assumptions", "primes")


class MalformedInput(ValueError):
    """Raised when an input document does not follow the schema."""

    def __init__(self, location: str, message: str):
        self.location = location
        self.message = message
        super().__init__(f"{location}: {message}")


class InputKind(Enum):
    POSET = "poset"
    POLYTOPE = "polytope"
    FAN = "fan"


@dataclass(frozen=True)
class FaceEntry:
    """A face of an explicit poset, ``Q`` excluded."""

    id: str
    facets: tuple[str, ...]
    boundary: tuple[str, ...] = ()


@dataclass
class InputDocument:
    """A parsed input document.

    :param labels: facet labels in order, ray labels for a fan
    :param vectors: the characteristic vector or ray of each label
    :param assumptions: overrides for :class:`AssumptionFlags`
    :param primes: primes to check besides those read off the invariants
    """

    n: int
    kind: InputKind
    labels: tuple[str, ...]
    vectors: dict[str, tuple[int, ...]]
    vertices: tuple[tuple[str, ...], ...] = ()
    faces: tuple[FaceEntry, ...] = ()
    cones: tuple[tuple[str, ...], ...] = ()
    assumptions: dict = field(default_factory=dict)
    primes: tuple[int, ...] | None = None

    @classmethod
    def from_pair(
        cls,
        poset: FacePoset,
        charfun: CharacteristicFunction,
        assumptions: dict | None = None,
        primes=None,
    ) -> InputDocument:
        """Describe a pair by its vertices.

        Vertices determine the poset when every face is contractible, as for every
        built-in example.
        """
        labels = poset.facet_labels
        vertices = tuple(
            tuple(labels[i] for i in sorted(vertex.facets))
            for vertex in poset.vertices()
        )
        return cls(
            n=poset.n,
            kind=InputKind.POLYTOPE,
            labels=labels,
            vectors=dict(zip(labels, charfun.vectors)),
            vertices=vertices,
            assumptions=dict(assumptions or {}),
            primes=tuple(primes) if primes is not None else None,
        )

    @classmethod
    def from_fan(
        cls, fan: Fan, assumptions: dict | None = None, primes=None
    ) -> InputDocument:
        return cls(
            n=fan.n,
            kind=InputKind.FAN,
            labels=fan.labels,
            vectors=dict(zip(fan.labels, fan.rays)),
            cones=tuple(
                tuple(fan.labels[i] for i in sorted(cone)) for cone in fan.max_cones
            ),
            assumptions=dict(assumptions or {}),
            primes=tuple(primes) if primes is not None else None,
        )

    def to_fan(self) -> Fan:
        if self.kind != InputKind.FAN:
            raise ValueError(f"A {self.kind.value} document does not describe a fan.")
        return Fan.from_labelled(
            self.n, {label: self.vectors[label] for label in self.labels}, self.cones
        )

    def to_pair(self) -> tuple[FacePoset, CharacteristicFunction]:
        """Build the face poset and characteristic function.

        :raises NotNice: if the described poset is not nice
        :raises InconsistentInput: if vertices or faces are malformed
        """
        if self.kind == InputKind.FAN:
            return fan_to_pair(self.to_fan())

        index = {label: i for i, label in enumerate(self.labels)}
        if self.kind == InputKind.POLYTOPE:
            poset = from_vertex_facets(
                self.n,
                [[index[label] for label in vertex] for vertex in self.vertices],
                self.labels,
            )
        else:
            poset = FacePoset.from_hasse(
                self.n,
                self.labels,
                [(f.id, [index[label] for label in f.facets]) for f in self.faces],
                {f.id: f.boundary for f in self.faces},
            )
        return poset, from_labelled(poset, self.vectors)

    def flags(self, poset: FacePoset) -> AssumptionFlags:
        return AssumptionFlags.for_poset(poset, **self.assumptions)

    def serialize(self) -> dict:
        """Return the document in input form, parseable by :func:`parse_document`."""
        vectors = {label: list(self.vectors[label]) for label in self.labels}
        data: dict[str, Any] = {"n": self.n}
        if self.kind == InputKind.FAN:
            data["fan"] = {
                "labels": list(self.labels),
                "rays": vectors,
                "cones": [list(cone) for cone in self.cones],
            }
        else:
            section: dict[str, Any] = {"labels": list(self.labels)}
            if self.kind == InputKind.POLYTOPE:
                section["vertices"] = [list(vertex) for vertex in self.vertices]
            else:
                section["faces"] = [
                    {"id": f.id, "facets": list(f.facets), "boundary": list(f.boundary)}
                    for f in self.faces
                ]
            data[self.kind.value] = section
            data["vectors"] = vectors
        if self.assumptions:
            data["assumptions"] = {
                key: sorted(value) if key == "face_p_acyclic" else value
                for key, value in self.assumptions.items()
            }
        if self.primes is not None:
            data["primes"] = list(self.primes)
        return data


def _expect(value, kind, location: str, what: str):
    if not isinstance(value, kind):
        raise MalformedInput(location, f"expected {what}, got {value!r}")
    return value


def _integer(value, location: str) -> int:
    try:
        return parse_int(value)
    except ValueError:
        raise MalformedInput(location, f"expected an integer, got {value!r}")


def _label_list(value, location: str) -> tuple[str, ...]:
    _expect(value, list, location, "a list of labels")
    labels = []
    for i, label in enumerate(value):
        if isinstance(label, (dict, list)) or label is None:
            raise MalformedInput(f"{location}[{i}]", f"expected a label, got {label!r}")
        labels.append(str(label))
    return tuple(labels)


def _vectors(value, n: int, location: str) -> dict[str, tuple[int, ...]]:
    _expect(value, Mapping, location, "a mapping of labels to vectors")
    vectors = {}
    for label, vector in value.items():
        where = f"{location}.{label}"
        _expect(vector, list, where, "a list of integers")
        if len(vector) != n:
            raise MalformedInput(where, f"expected {n} coordinates, got {len(vector)}")
        vectors[str(label)] = tuple(
            _integer(x, f"{where}[{i}]") for i, x in enumerate(vector)
        )
    return vectors


def _ordered_labels(section: Mapping, vectors: dict, location: str) -> tuple:
    if "labels" not in section:
        return tuple(vectors)
    labels = _label_list(section["labels"], f"{location}.labels")
    if sorted(labels) != sorted(vectors) or len(set(labels)) != len(labels):
        raise MalformedInput(
            f"{location}.labels", f"{list(labels)} do not match {list(vectors)}"
        )
    return labels


def _check_references(rows, known, location: str):
    for i, row in enumerate(rows):
        unknown = [label for label in row if label not in known]
        if unknown:
            raise MalformedInput(f"{location}[{i}]", f"unknown labels {unknown}")


def _faces(value, labels, location: str) -> tuple[FaceEntry, ...]:
    _expect(value, list, location, "a list of faces")
    faces = []
    for i, entry in enumerate(value):
        where = f"{location}[{i}]"
        _expect(entry, Mapping, where, "a face with id, facets and boundary")
        unknown = set(entry) - {"id", "facets", "boundary"}
        if unknown or "id" not in entry or "facets" not in entry:
            raise MalformedInput(where, "expected keys id, facets and boundary")
        facets = _label_list(entry["facets"], f"{where}.facets")
        _check_references([facets], labels, f"{where}.facets")
        boundary = _label_list(entry.get("boundary", []), f"{where}.boundary")
        faces.append(FaceEntry(str(entry["id"]), facets, boundary))
    return tuple(faces)


def _assumptions(value, location: str) -> dict:
    _expect(value, Mapping, location, "a mapping of assumption flags")
    known = {f.name for f in fields(AssumptionFlags)}
    result = {}
    for key, flag in value.items():
        where = f"{location}.{key}"
        if key not in known:
            raise MalformedInput(where, f"unknown assumption, expected {sorted(known)}")
        if key == "face_p_acyclic":
            result[key] = tuple(_primes(flag, where))
        else:
            result[key] = _expect(flag, bool, where, "true or false")
    return result


def _primes(value, location: str) -> list[int]:
    _expect(value, list, location, "a list of primes")
    try:
        return check_primes(value)
    except ValueError as e:
        raise MalformedInput(location, str(e))


def parse_document(data, source: str = "<input>") -> InputDocument:
    """Check `data` against the schema and build an :class:`InputDocument`.

    :param source: a name for the input, used as the root of error locations
    :raises MalformedInput: naming the location of the first violation
    """
    _expect(data, Mapping, source, "a mapping")
    unknown = sorted(str(key) for key in set(data) - set(TOP_LEVEL_KEYS))
    if unknown:
        raise MalformedInput(source, f"unknown keys {unknown}")
    if "n" not in data:
        raise MalformedInput(source, "missing the dimension n")
    n = _integer(data["n"], f"{source}.n")
    if n < 1:
        raise MalformedInput(f"{source}.n", f"expected a positive dimension, got {n}")

    kinds = [kind for kind in InputKind if kind.value in data]
    if len(kinds) != 1:
        names = [kind.value for kind in InputKind]
        raise MalformedInput(source, f"expected exactly one of {names}")
    kind = kinds[0]
    location = f"{source}.{kind.value}"
    section = _expect(data[kind.value], Mapping, location, "a mapping")

    values = {"n": n, "kind": kind}
    if kind == InputKind.FAN:
        if "vectors" in data:
            raise MalformedInput(f"{source}.vectors", "a fan carries its own rays")
        if "rays" not in section or "cones" not in section:
            raise MalformedInput(location, "expected rays and cones")
        vectors = _vectors(section["rays"], n, f"{location}.rays")
        labels = _ordered_labels(section, vectors, location)
        _expect(section["cones"], list, f"{location}.cones", "a list of cones")
        cones = tuple(
            _label_list(cone, f"{location}.cones[{i}]")
            for i, cone in enumerate(section["cones"])
        )
        _check_references(cones, vectors, f"{location}.cones")
        values["cones"] = cones
    else:
        if "vectors" not in data:
            raise MalformedInput(source, "missing vectors")
        vectors = _vectors(data["vectors"], n, f"{source}.vectors")
        labels = _ordered_labels(section, vectors, location)
        if kind == InputKind.POLYTOPE:
            if "vertices" not in section:
                raise MalformedInput(location, "expected vertices")
            _expect(section["vertices"], list, f"{location}.vertices", "a list")
            vertices = tuple(
                _label_list(vertex, f"{location}.vertices[{i}]")
                for i, vertex in enumerate(section["vertices"])
            )
            _check_references(vertices, vectors, f"{location}.vertices")
            values["vertices"] = vertices
        else:
            if "faces" not in section:
                raise MalformedInput(location, "expected faces")
            values["faces"] = _faces(section["faces"], vectors, f"{location}.faces")

    if "assumptions" in data:
        values["assumptions"] = _assumptions(
            data["assumptions"], f"{source}.assumptions"
        )
    if "primes" in data:
        values["primes"] = tuple(_primes(data["primes"], f"{source}.primes"))

    document = InputDocument(labels=labels, vectors=vectors, **values)
    logger.debug(f"Parsed a {kind.value} document from {source}.")
    return document


def load_document(path: Path) -> InputDocument:
    """Read and parse the document at `path`.

    :raises MalformedInput: if the file cannot be read or parsed
    """
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as f:
            data = safe_yaml.load(f)
    except OSError as e:
        raise MalformedInput(str(path), f"cannot read file ({e.strerror})")
    except YAMLError as e:
        raise MalformedInput(str(path), f"cannot parse document: {e}")
    return parse_document(data, str(path))
