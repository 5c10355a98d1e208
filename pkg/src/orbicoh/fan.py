# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Complete simplicial fans, their dual pairs, and the built-in examples.

A fan is given by its rays and its maximal cones, each cone a set of ``n`` ray
indices. Completeness is checked in two ways: every wall lies in exactly two
maximal cones, and random integer directions each lie in exactly one cone.
Cone membership is decided exactly, with the adjugate of the cone matrix.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence
import logging
import random

import sympy

from orbicoh.charfun import CharacteristicFunction, from_labelled
from orbicoh.lattice import (
    FinAbGroup,
    cokernel,
    from_columns,
    is_primitive,
    is_unimodular,
    to_matrix,
    wedge,
)
from orbicoh.poset import (
    Face,
    FacePoset,
    PosetKind,
    collapse_facets,
    cube,
    reference_poset,
    simplex,
)
from orbicoh.settings import settings

logger = logging.getLogger(__name__)

# Boundary samples are redrawn at most this many times per trial.
MAX_RESAMPLES = 100

# Failed samples kept in a completeness report.
MAX_EXAMPLES = 5


class IncompleteFan(ValueError):
    """Raised when a fan is not a complete simplicial fan."""

    pass


def _default_labels(count: int) -> tuple[str, ...]:
    return tuple(str(i + 1) for i in range(count))


@dataclass(frozen=True)
class Fan:
    """A simplicial fan in ``R^n``.

    :param rays: primitive ray generators
    :param max_cones: sets of ``n`` ray indices
    :param labels: display labels of the rays, ``1 .. k`` when omitted
    """

    n: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[frozenset, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in ray) for ray in self.rays)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(
            self, "max_cones", tuple(frozenset(c) for c in self.max_cones)
        )
        labels = tuple(str(label) for label in self.labels)
        object.__setattr__(self, "labels", labels or _default_labels(len(rays)))

    @classmethod
    def from_labelled(
        cls,
        n: int,
        rays: dict[str, Sequence[int]],
        max_cones: Iterable[Iterable[str]],
    ) -> Fan:
        """Build a fan from labelled rays and cones given by ray labels."""
        labels = tuple(str(label) for label in rays)
        index = {label: i for i, label in enumerate(labels)}
        cones = []
        for cone in max_cones:
            unknown = [label for label in cone if str(label) not in index]
            if unknown:
                raise ValueError(f"Cone {list(cone)} uses unknown rays {unknown}.")
            cones.append(frozenset(index[str(label)] for label in cone))
        return cls(n, tuple(rays.values()), tuple(cones), labels)

    def cone_label(self, cone: Iterable[int]) -> str:
        return "{" + ",".join(self.labels[i] for i in sorted(cone)) + "}"

    def cone_matrix(self, cone: Iterable[int]) -> sympy.Matrix:
        return from_columns([self.rays[i] for i in sorted(cone)], self.n)

    def cones(self) -> set[frozenset]:
        """Every cone of the fan, the zero cone included, as sets of ray indices."""
        result = set()
        for cone in self.max_cones:
            for size in range(len(cone) + 1):
                result.update(frozenset(s) for s in combinations(sorted(cone), size))
        return result

    def without_cone(self, index: int) -> Fan:
        cones = self.max_cones[:index] + self.max_cones[index + 1 :]
        return Fan(self.n, self.rays, cones, self.labels)

    def validate(self) -> list[str]:
        """Check that rays and cones describe a simplicial fan.

        :returns: a list of violations, empty if the fan is simplicial
        """
        errors = []
        if len(self.labels) != len(self.rays):
            errors.append(f"Got {len(self.labels)} labels for {len(self.rays)} rays.")
            return errors
        if len(set(self.labels)) != len(self.labels):
            errors.append(f"Ray labels {list(self.labels)} are not distinct.")

        for label, ray in zip(self.labels, self.rays):
            if len(ray) != self.n:
                errors.append(f"Ray {label} = {list(ray)} is not in Z^{self.n}.")
            elif not is_primitive(ray):
                errors.append(f"Ray {label} = {list(ray)} is not primitive.")
        repeated = [ray for ray, count in Counter(self.rays).items() if count > 1]
        for ray in repeated:
            errors.append(f"Ray {list(ray)} is listed more than once.")
        if errors:
            return errors

        for cone in self.max_cones:
            if len(cone) != self.n or not cone <= set(range(len(self.rays))):
                errors.append(f"Cone {sorted(cone)} is not n distinct ray indices.")
            elif not self.cone_matrix(cone).det():
                errors.append(f"Cone {self.cone_label(cone)} is not simplicial.")
        if len(set(self.max_cones)) != len(self.max_cones):
            errors.append("A maximal cone is listed more than once.")

        used = frozenset().union(*self.max_cones) if self.max_cones else frozenset()
        unused = [self.labels[i] for i in range(len(self.rays)) if i not in used]
        if unused:
            errors.append(f"Rays {unused} are in no maximal cone.")
        return errors


@dataclass(frozen=True)
class WallCheck:
    """For every wall, the number of maximal cones containing it."""

    counts: dict

    @property
    def passed(self) -> bool:
        return all(count == 2 for count in self.counts.values())

    def failures(self) -> dict:
        return {wall: c for wall, c in self.counts.items() if c != 2}


def wall_check(fan: Fan) -> WallCheck:
    counts = Counter()
    for cone in fan.max_cones:
        for wall in combinations(sorted(cone), len(cone) - 1):
            counts[frozenset(wall)] += 1
    return WallCheck(dict(counts))


@dataclass(frozen=True)
class Membership:
    """Where a point lies in a fan.

    :param interior: maximal cones containing the point in their interior
    :param boundary: maximal cones containing the point on their boundary
    """

    interior: tuple[int, ...]
    boundary: tuple[int, ...]


def _cone_solvers(fan: Fan) -> list[tuple[int, list[list[int]]]]:
    """Return ``det`` and adjugate rows of every maximal cone matrix."""
    solvers = []
    for cone in fan.max_cones:
        matrix = fan.cone_matrix(cone)
        adjugate = matrix.adjugate()
        rows = [[int(x) for x in adjugate.row(i)] for i in range(adjugate.rows)]
        solvers.append((int(matrix.det()), rows))
    return solvers


def ray_cone_membership(
    fan: Fan, point: Sequence[int], solvers: list | None = None
) -> Membership:
    """Locate `point` among the maximal cones of `fan`.

    The point is ``M * x`` with ``x = adj(M) * point / det(M)``, so it lies in the
    cone iff every numerator of ``x`` has the sign of ``det(M)`` or is zero.
    """
    solvers = solvers if solvers is not None else _cone_solvers(fan)
    interior, boundary = [], []
    for index, (det, adjugate) in enumerate(solvers):
        numerators = [sum(a * x for a, x in zip(row, point)) for row in adjugate]
        if any(num * det < 0 for num in numerators):
            continue
        if all(numerators):
            interior.append(index)
        else:
            boundary.append(index)
    return Membership(tuple(interior), tuple(boundary))


@dataclass
class CompletenessReport:
    """The outcome of :func:`completeness_check`.

    :param errors: violations of the simplicial invariants, sampling is skipped if any
    :param misses: samples in no maximal cone
    :param overlaps: samples in more than one maximal cone
    :param skipped: trials that found only boundary points
    """

    walls: WallCheck
    trials: int = 0
    errors: list[str] = field(default_factory=list)
    misses: int = 0
    overlaps: int = 0
    skipped: int = 0
    examples: list[str] = field(default_factory=list)

    @property
    def sampling_passed(self) -> bool:
        return not self.errors and not self.misses and not self.overlaps

    @property
    def passed(self) -> bool:
        return self.walls.passed and self.sampling_passed

    def summary(self) -> list[str]:
        lines = list(self.errors)
        for wall, count in sorted(
            self.walls.failures().items(), key=lambda item: sorted(item[0])
        ):
            lines.append(f"Wall {sorted(wall)} lies in {count} maximal cones.")
        if self.misses:
            lines.append(f"{self.misses} of {self.trials} samples lie in no cone.")
        if self.overlaps:
            lines.append(f"{self.overlaps} of {self.trials} samples lie in 2+ cones.")
        return lines + self.examples


def completeness_check(
    fan: Fan,
    trials: int | None = None,
    seed: int | None = None,
    bound: int | None = None,
) -> CompletenessReport:
    """Check that `fan` covers ``R^n`` by its wall counts and by random sampling.

    :param trials: number of sampled directions, ``TRIALS`` by default
    :param seed: seed for the sampler, ``SEED`` by default
    :param bound: entries lie in ``[-bound, bound]``, ``SAMPLE_BOUND`` by default
    """
    trials = settings.TRIALS if trials is None else trials
    seed = settings.SEED if seed is None else seed
    bound = settings.SAMPLE_BOUND if bound is None else bound

    report = CompletenessReport(walls=wall_check(fan), trials=trials)
    report.errors = fan.validate()
    if report.errors:
        return report

    rng = random.Random(seed)
    solvers = _cone_solvers(fan)
    for _ in range(trials):
        for _ in range(MAX_RESAMPLES):
            point = [rng.randint(-bound, bound) for _ in range(fan.n)]
            if not any(point):
                continue
            membership = ray_cone_membership(fan, point, solvers)
            if not membership.boundary:
                break
        else:
            report.skipped += 1
            continue

        located = len(membership.interior)
        if located == 1:
            continue
        if located == 0:
            report.misses += 1
        else:
            report.overlaps += 1
        if len(report.examples) < MAX_EXAMPLES:
            cones = [fan.cone_label(fan.max_cones[i]) for i in membership.interior]
            report.examples.append(f"Sample {point} lies in {', '.join(cones)}.")

    if report.skipped:
        logger.warning(f"{report.skipped} samples stayed on cone boundaries.")
    logger.debug(
        f"Sampled {trials} points with seed {seed}: {report.misses} misses, "
        f"{report.overlaps} overlaps."
    )
    return report


def _raise_if_incomplete(fan: Fan):
    errors = fan.validate()
    walls = wall_check(fan)
    if errors or not walls.passed:
        report = CompletenessReport(walls=walls, errors=errors)
        raise IncompleteFan(" ".join(report.summary()))


def fan_to_pair(fan: Fan) -> tuple[FacePoset, CharacteristicFunction]:
    """Return the face poset dual to `fan` with the rays as characteristic vectors.

    Facets correspond to rays and faces to cones, ``Q`` being the zero cone. The
    sampling half of :func:`completeness_check` is left to the caller.

    :raises IncompleteFan: if `fan` is not simplicial or fails the wall condition
    """
    _raise_if_incomplete(fan)
    cones = fan.cones()
    faces = {cone: Face(fan.n - len(cone), cone) for cone in cones}
    relation = {
        faces[cone]: {faces[other] for other in cones if cone < other} for cone in cones
    }
    poset = FacePoset(fan.n, fan.labels, relation, contractible_faces=True)
    errors = poset.niceness_errors()
    if errors:
        raise IncompleteFan(" ".join(errors))
    logger.debug(f"Dual of a fan with {len(fan.max_cones)} cones: {poset}.")
    return poset, CharacteristicFunction(fan.n, fan.rays)


def delta_cokernels(
    fan: Fan, signs: Sequence[int] | None = None
) -> tuple[FinAbGroup, FinAbGroup]:
    """Return the cokernels of the first two coboundaries of the orbit filtration.

    They compute ``H^{2n-1}`` and the torsion of ``H^{2n-2}``. The first matrix has
    the rays as columns, the second every ``v ∧ e_j`` in ``∧²Z^n``.

    :param signs: a sign per ray for the identifications, all positive by default
    :raises IncompleteFan: if `fan` is not simplicial or fails the wall condition
    """
    _raise_if_incomplete(fan)
    if fan.n < 2:
        raise IncompleteFan(f"A fan in R^{fan.n} has no second coboundary.")
    signs = list(signs) if signs is not None else [1] * len(fan.rays)
    if len(signs) != len(fan.rays) or any(s not in (1, -1) for s in signs):
        raise ValueError(f"Expected {len(fan.rays)} signs of 1 or -1, got {signs}.")

    rays = [[s * x for x in ray] for s, ray in zip(signs, fan.rays)]
    basis = [[int(i == j) for i in range(fan.n)] for j in range(fan.n)]
    first = cokernel(from_columns(rays, fan.n))
    columns = [wedge(ray, e) for ray in rays for e in basis]
    second = cokernel(from_columns(columns, fan.n * (fan.n - 1) // 2))
    logger.debug(f"Coboundary cokernels: {first}, {second}.")
    return first, second


def apply_unimodular(fan: Fan, unimodular) -> Fan:
    """Apply an integer change of basis of ``Z^n`` to every ray.

    :raises ValueError: if `unimodular` is not invertible over the integers
    """
    U = to_matrix(unimodular)
    if U.shape != (fan.n, fan.n) or not is_unimodular(U):
        raise ValueError(f"{U.tolist()} is not a unimodular {fan.n} x {fan.n} matrix.")
    rays = [tuple(int(x) for x in U * sympy.Matrix(ray)) for ray in fan.rays]
    return Fan(fan.n, rays, fan.max_cones, fan.labels)


def random_unimodular(n: int, rng: random.Random, steps: int = 6) -> sympy.Matrix:
    """Compose random elementary integer row operations and sign changes."""
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        target, source = rng.sample(range(n), 2)
        k = rng.randint(-2, 2)
        rows[target] = [x + k * y for x, y in zip(rows[target], rows[source])]
    for row in rows:
        if rng.random() < 0.5:
            row[:] = [-x for x in row]
    return sympy.Matrix(rows)


def _check_parameter(name: str, value: int):
    if value < 1:
        raise ValueError(f"{name} must be at least 1, got {value}.")


def weighted_triangle(a: int) -> tuple[FacePoset, CharacteristicFunction]:
    """The triangle with vectors ``(2a, 1), (0, 1), (-a, -1)``, where ``µ(Q) = a``."""
    _check_parameter("a", a)
    return simplex(2), CharacteristicFunction(2, [(2 * a, 1), (0, 1), (-a, -1)])


def simplex3_example() -> tuple[FacePoset, CharacteristicFunction]:
    """A 3-simplex whose vectors span an index 2 sublattice."""
    vectors = [(0, 0, 1), (2, 0, 1), (0, 1, 1), (-2, -1, -1)]
    return simplex(3), CharacteristicFunction(3, vectors)


def fibration_fan(a: int) -> Fan:
    """A fan whose toric variety fibres over ``CP^1`` with fibre the weighted triangle.

    The six cones join each cone of the fibre fan to one of ``+`` and ``-``.
    """
    _check_parameter("a", a)
    rays = {
        "1": (2 * a, 1, 0),
        "2": (0, 1, 0),
        "3": (-a, -1, 0),
        "+": (0, 0, 1),
        "-": (1, 0, -1),
    }
    cones = [
        (end, *pair)
        for end in ("+", "-")
        for pair in (("1", "2"), ("1", "3"), ("2", "3"))
    ]
    return Fan.from_labelled(3, rays, cones)


def fibration_fiber(a: int) -> tuple[FacePoset, CharacteristicFunction]:
    """The fibre of :func:`fibration_fan`, read off the first two coordinates."""
    _check_parameter("a", a)
    fan = Fan.from_labelled(
        2,
        {"1": (2 * a, 1), "2": (0, 1), "3": (-a, -1)},
        [("1", "2"), ("1", "3"), ("2", "3")],
    )
    return fan_to_pair(fan)


COUNTEREXAMPLE_LABELS = ("1", "2", "3", "4", "5", "+", "-")


def counterexample_fan(d: int) -> Fan:
    """A fan with ``µ = 1`` on every face whose cohomology still has ``Z/d`` torsion.

    Its rays satisfy ``d * v4 = v1 + v2 + d * v+`` and ``-d * v+ = 2 v1 + v2 + v3``.
    """
    _check_parameter("d", d)
    vectors = [
        (1, 0, 0),
        (-1, d, -d),
        (-1, -d, 0),
        (0, 1, 0),
        (d, 1 - d, -d),
        (0, 0, 1),
        (1, -1, -1),
    ]
    cones = [
        ("1", "4", "+"),
        ("2", "4", "+"),
        ("1", "5", "-"),
        ("1", "2", "4"),
        ("1", "3", "+"),
        ("1", "3", "-"),
        ("1", "2", "5"),
        ("2", "5", "-"),
        ("2", "3", "-"),
        ("2", "3", "+"),
    ]
    return Fan.from_labelled(3, dict(zip(COUNTEREXAMPLE_LABELS, vectors)), cones)


def counterexample_vertex_table(d: int) -> dict[frozenset, int]:
    """Closed forms of ``|det|`` at the vertices of :func:`counterexample_fan`."""
    _check_parameter("d", d)
    table = {
        ("1", "4", "+"): 1,
        ("2", "4", "+"): 1,
        ("1", "5", "-"): 1,
        ("1", "2", "4"): d,
        ("1", "3", "+"): d,
        ("1", "3", "-"): d,
        ("1", "2", "5"): d * (2 * d - 1),
        ("2", "5", "-"): d + 1,
        ("2", "3", "-"): d * (d + 3),
        ("2", "3", "+"): 2 * d,
    }
    return {frozenset(labels): value for labels, value in table.items()}


def counterexample_pair(d: int) -> tuple[FacePoset, CharacteristicFunction]:
    return fan_to_pair(counterexample_fan(d))


def collapsed_counterexample(d: int) -> tuple[FacePoset, CharacteristicFunction]:
    """Collapse facets ``4, +`` and then ``5, -`` of the counterexample.

    What is left is a suspension of a triangle carrying ``v1, v2, v3``.
    """
    poset, charfun = counterexample_pair(d)
    vectors = dict(zip(poset.facet_labels, charfun.vectors))
    for pair in (("4", "+"), ("5", "-")):
        poset = collapse_facets(poset, [poset.facet_index(label) for label in pair])
    return poset, from_labelled(poset, vectors)


def reference_example(
    kind: PosetKind, n: int
) -> tuple[FacePoset, CharacteristicFunction]:
    """A reference poset with coordinate vectors, unimodular at every vertex."""
    poset = reference_poset(kind, n)
    basis = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    if kind == PosetKind.DIAMOND:
        vectors = basis
    elif kind == PosetKind.SIMPLEX:
        vectors = basis + [tuple(-1 for _ in range(n))]
    else:
        closing = tuple(-1 for _ in range(n - 1)) + (0,)
        vectors = basis[:-1] + [closing, basis[-1], tuple(-x for x in basis[-1])]
    return poset, CharacteristicFunction(n, vectors)


def cube_example() -> tuple[FacePoset, CharacteristicFunction]:
    """The 3-cube with ``±e_i`` on opposite facets."""
    vectors = []
    for i in range(3):
        e = tuple(int(i == j) for j in range(3))
        vectors += [e, tuple(-x for x in e)]
    return cube(), CharacteristicFunction(3, vectors)
