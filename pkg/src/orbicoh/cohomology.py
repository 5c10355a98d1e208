# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Cohomology groups of torus orbifolds and per-prime torsion verdicts.

Only the degrees with closed formulas are computed: the top three degrees,
degrees 1 and 2, and every degree when ``Q`` has dimension 2 or 3 (degree 3 of a
3-dimensional ``Q`` is known to be finite, nothing more). Topological facts about
``Q`` cannot be read off a poset, so they are passed in as
:class:`AssumptionFlags`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Union
import logging

from sympy import primefactors

from orbicoh.charfun import CharacteristicFunction, mu, mu_table, vertex_dets
from orbicoh.lattice import (
    INFINITE,
    FinAbGroup,
    Index,
    cokernel,
    rank,
    wedge_square_quotient,
)
from orbicoh.poset import Face, FacePoset, PosetKind, classify, prism_caps
from orbicoh.settings import settings
from orbicoh.utils import parse_prime_list

logger = logging.getLogger(__name__)


class MissingAssumption(ValueError):
    """Raised when a formula needs a topological hypothesis that was not declared."""

    pass


class Marker(Enum):
    ZERO_OR_TORSION = "zero-or-torsion"

    def __str__(self):
        return "0 or torsion"


Group = Union[FinAbGroup, Marker]

Z = FinAbGroup(1)
ZERO = FinAbGroup()

NOT_CHECKED = "The companion condition H_1(Q_I; Z/p) = 0 was not checked."


@dataclass(frozen=True)
class AssumptionFlags:
    """Declared topology of ``Q``.

    :param face_acyclic: every face, ``Q`` included, is acyclic over ``Z``
    :param q_acyclic: ``Q`` itself is acyclic over ``Z``; read by
        :func:`boundary_degrees` when not every face is declared acyclic
    :param facet_h1_trivial: ``H_1(Q_i) = 0`` for every facet
    :param face_p_acyclic: primes p for which every face is acyclic over ``Z/p``
    """

    face_acyclic: bool = False
    q_acyclic: bool = False
    facet_h1_trivial: bool = False
    face_p_acyclic: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "face_p_acyclic", frozenset(self.face_p_acyclic))

    @classmethod
    def for_poset(cls, poset: FacePoset, **overrides) -> AssumptionFlags:
        """Flags known for `poset`, updated with explicit `overrides`."""
        return replace(cls(face_acyclic=poset.contractible_faces), **overrides)

    @classmethod
    def deserialize(cls, data: dict) -> AssumptionFlags:
        data = dict(data)
        data["face_p_acyclic"] = frozenset(data.get("face_p_acyclic", ()))
        return cls(**data)

    def serialize(self) -> dict:
        return {
            "face_acyclic": self.face_acyclic,
            "q_acyclic": self.q_acyclic,
            "facet_h1_trivial": self.facet_h1_trivial,
            "face_p_acyclic": sorted(self.face_p_acyclic),
        }

    @property
    def acyclic_q(self) -> bool:
        return self.face_acyclic or self.q_acyclic

    @property
    def acyclic_facets(self) -> bool:
        return self.face_acyclic or self.facet_h1_trivial

    def p_acyclic(self, p: int) -> bool:
        return self.face_acyclic or p in self.face_p_acyclic


@dataclass
class CohomologyReport:
    """Integral cohomology of ``X(Q, v)`` by degree.

    Degrees whose hypotheses were not met are listed in `missing` with the reason.
    """

    n: int
    groups: dict[int, Group] = field(default_factory=dict)
    missing: dict[int, str] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def group(self, degree: int) -> Group:
        if not 0 <= degree <= 2 * self.n:
            raise ValueError(f"Degree {degree} is outside 0 .. {2 * self.n}.")
        if degree in self.groups:
            return self.groups[degree]
        reason = f"H^{degree} has no formula in dimension {self.n}."
        raise MissingAssumption(self.missing.get(degree, reason))

    def serialize(self) -> dict:
        return {
            "groups": {
                str(k): g.value if isinstance(g, Marker) else g.serialize()
                for k, g in sorted(self.groups.items())
            },
            "missing": {str(k): v for k, v in sorted(self.missing.items())},
            "notes": list(self.notes),
        }


def boundary_degrees(
    poset: FacePoset, charfun: CharacteristicFunction, flags: AssumptionFlags
) -> CohomologyReport:
    """Compute ``H^0``, ``H^1``, ``H^2`` and the top three degrees where possible."""
    n, m = poset.n, poset.m
    if n < 2:
        raise ValueError(f"Boundary degrees need dimension at least 2, got {n}.")
    report = CohomologyReport(n, groups={0: Z, 2 * n: Z})
    vectors = charfun.matrix()

    if flags.acyclic_q:
        report.groups[2 * n - 1] = cokernel(vectors)
    else:
        report.missing[2 * n - 1] = f"H^{2 * n - 1} needs H_1(Q) = 0."

    if flags.acyclic_q and flags.acyclic_facets:
        free = FinAbGroup(m - rank(vectors))
        report.groups[2 * n - 2] = free + wedge_square_quotient(charfun.vectors, n)
    else:
        report.missing[2 * n - 2] = (
            f"H^{2 * n - 2} needs H_1(Q) = H_2(Q) = 0 and H_1 = 0 for every facet."
        )

    if flags.acyclic_q and poset.vertices():
        report.groups[1] = ZERO
        report.groups[2] = FinAbGroup(m - n)
    else:
        for degree in (1, 2):
            if degree not in report.groups:
                report.missing[degree] = (
                    f"H^{degree} needs H_1(Q) = H_2(Q) = 0 and a vertex."
                )
    for degree in report.groups:
        report.missing.pop(degree, None)
    return report


def full_report_low_dim(
    poset: FacePoset,
    charfun: CharacteristicFunction,
    flags: AssumptionFlags,
    fiber: tuple[FacePoset, CharacteristicFunction] | None = None,
) -> CohomologyReport:
    """Return every degree for a face-acyclic ``Q`` of dimension 2 or 3.

    :param fiber: for a fibration over ``CP^1``, the 2-dimensional pair of the
        fiber, whose ``H^3`` then gives ``H^3`` of the total space
    :raises MissingAssumption: if `flags` does not declare face acyclicity
    """
    if poset.n not in (2, 3):
        raise ValueError(f"Full reports exist in dimension 2 and 3, not {poset.n}.")
    if not flags.face_acyclic:
        raise MissingAssumption("A full report needs every face to be acyclic.")

    report = boundary_degrees(poset, charfun, flags)
    if poset.n == 3:
        report.groups[3] = Marker.ZERO_OR_TORSION
        if fiber is not None:
            fiber_report = full_report_low_dim(*fiber, AssumptionFlags(True))
            report.groups[3] = fiber_report.group(3)
            report.notes.append("H^3 agrees with H^3 of the fiber.")
        elif 2 * poset.m - 4 != poset.vertex_count():
            logger.warning(
                f"{poset} has {poset.vertex_count()} vertices, "
                f"expected {2 * poset.m - 4}."
            )
    return report


class Decision(Enum):
    HAS_P_TORSION = "HasPTorsion"
    NO_P_TORSION = "NoPTorsion"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class TorsionVerdict:
    """Whether ``H^*(X(Q, v))`` has p-torsion.

    :param witness: the face whose ``µ`` is infinite or divisible by p
    :param case: the poset class whose sufficiency result applied
    """

    prime: int
    decision: Decision
    witness: Face | None = None
    case: PosetKind | None = None
    notes: tuple[str, ...] = ()


def _divides(p: int, value: Index) -> bool:
    return value is INFINITE or value % p == 0


def necessary_condition(
    poset: FacePoset, charfun: CharacteristicFunction, p: int
) -> TorsionVerdict | None:
    """Look for a face with ``µ`` infinite or divisible by `p`, largest faces first.

    :returns: a :data:`Decision.HAS_P_TORSION` verdict, or None if every face passes
    """
    for face in poset.faces:
        value = mu(poset, charfun, face)
        if _divides(p, value):
            logger.debug(f"µ({poset.face_label(face)}) = {value} obstructs p = {p}.")
            return TorsionVerdict(
                prime=p,
                decision=Decision.HAS_P_TORSION,
                witness=face,
                notes=(
                    f"µ({poset.face_label(face)}) = {value}, "
                    f"so H^odd(X; Z/{p}) is nonzero.",
                ),
            )
    return None


def sufficient_condition(
    poset: FacePoset,
    charfun: CharacteristicFunction,
    p: int,
    flags: AssumptionFlags,
) -> TorsionVerdict:
    """Decide p-torsion freeness for simplices, suspensions of simplices and prisms.

    :raises MissingAssumption: if the faces are not declared p-acyclic
    """
    if not flags.p_acyclic(p):
        raise MissingAssumption(f"Faces are not declared acyclic over Z/{p}.")

    kind = classify(poset).kind
    top = mu(poset, charfun, poset.top)

    def inconclusive(reason):
        return TorsionVerdict(p, Decision.INCONCLUSIVE, case=None, notes=(reason,))

    if kind == PosetKind.OTHER:
        return inconclusive("No sufficiency result covers this poset.")
    if _divides(p, top):
        return inconclusive(f"µ(Q) = {top} is not coprime to {p}.")
    if kind in (PosetKind.DIAMOND, PosetKind.SIMPLEX):
        return TorsionVerdict(p, Decision.NO_P_TORSION, case=kind)

    for first, second in prism_caps(poset):
        caps = [poset.find({first}), poset.find({second})]
        values = [mu(poset, charfun, cap) for cap in caps]
        if not any(_divides(p, value) for value in values):
            names = ", ".join(poset.face_label(cap) for cap in caps)
            return TorsionVerdict(
                p,
                Decision.NO_P_TORSION,
                case=kind,
                notes=(f"Caps {names} have µ coprime to {p}.",),
            )
    return inconclusive(f"No pair of prism caps has µ coprime to {p}.")


def relevant_primes(
    poset: FacePoset,
    charfun: CharacteristicFunction,
    extra: Iterable[int] = (),
) -> list[int]:
    """Primes dividing a finite ``µ`` or a vertex determinant, plus `extra`."""
    values = [v for v in mu_table(poset, charfun).values() if v is not INFINITE]
    values += list(vertex_dets(poset, charfun).values())
    primes = set(extra)
    for value in values:
        if value > 1:
            primes.update(int(q) for q in primefactors(value))
    return sorted(primes)


def analyze(
    poset: FacePoset,
    charfun: CharacteristicFunction,
    flags: AssumptionFlags,
    primes: Iterable[int] | None = None,
) -> list[TorsionVerdict]:
    """Issue a verdict for every relevant prime.

    :param primes: primes to check beyond those read off the invariants, the
        ``DEFAULT_PRIMES`` setting when omitted
    """
    if primes is None:
        primes = parse_prime_list(settings.DEFAULT_PRIMES)
    verdicts = []
    for p in relevant_primes(poset, charfun, primes):
        verdict = necessary_condition(poset, charfun, p)
        if verdict is None:
            try:
                verdict = sufficient_condition(poset, charfun, p, flags)
            except MissingAssumption as e:
                verdict = TorsionVerdict(p, Decision.INCONCLUSIVE, notes=(str(e),))
            if verdict.decision == Decision.INCONCLUSIVE:
                verdict = replace(verdict, notes=verdict.notes + (NOT_CHECKED,))
        logger.debug(f"p = {p}: {verdict.decision.value}")
        verdicts.append(verdict)
    return verdicts
