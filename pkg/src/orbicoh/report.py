# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Assemble analysis reports and render them as text or JSON."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib.resources import files
import json
import logging

import jinja2

from orbicoh.charfun import CharacteristicFunction, mu_table, validate, vertex_dets
from orbicoh.cohomology import (
    AssumptionFlags,
    CohomologyReport,
    TorsionVerdict,
    analyze,
    boundary_degrees,
    full_report_low_dim,
)
from orbicoh.document import InputDocument
from orbicoh.fan import (
    CompletenessReport,
    Fan,
    completeness_check,
    delta_cokernels,
    fan_to_pair,
)
from orbicoh.lattice import INFINITE, FinAbGroup, cokernel, wedge_square_quotient
from orbicoh.poset import FacePoset, classify
from orbicoh.settings import OUTPUT_FORMATS

logger = logging.getLogger(__name__)


@dataclass
class FanCheck:
    """Completeness of a fan and its torsion computed along two routes.

    :param coboundaries: cokernels of the first two coboundaries of the fan
    :param lattice: ``N / N̂`` and ``∧²N / (N̂ ∧ N)`` of the rays
    """

    completeness: CompletenessReport
    coboundaries: tuple[FinAbGroup, FinAbGroup] | None = None
    lattice: tuple[FinAbGroup, FinAbGroup] | None = None

    @property
    def agree(self) -> bool:
        return self.coboundaries == self.lattice

    @property
    def passed(self) -> bool:
        return self.completeness.passed and self.agree

    def serialize(self) -> dict:
        def groups(pair):
            return [g.serialize() for g in pair] if pair is not None else None

        return {
            "complete": self.completeness.passed,
            "walls": self.completeness.walls.passed,
            "trials": self.completeness.trials,
            "problems": self.completeness.summary(),
            "coboundaries": groups(self.coboundaries),
            "lattice": groups(self.lattice),
            "agree": self.agree,
        }


@dataclass
class ReportDocument:
    """Everything computed for one input, ready to be rendered."""

    input: dict
    poset_class: str = ""
    errors: list[str] = field(default_factory=list)
    mu: dict[str, object] = field(default_factory=dict)
    vertex_dets: dict[str, int] = field(default_factory=dict)
    cohomology: CohomologyReport | None = None
    verdicts: list[TorsionVerdict] = field(default_factory=list)
    fan: FanCheck | None = None
    witnesses: dict[int, str] = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return not self.errors

    @property
    def passed(self) -> bool:
        return self.valid and (self.fan is None or self.fan.passed)

    def serialize(self) -> dict:
        return {
            "input": self.input,
            "class": self.poset_class,
            "valid": self.valid,
            "errors": list(self.errors),
            "mu": {label: _index_value(value) for label, value in self.mu.items()},
            "vertex_dets": dict(self.vertex_dets),
            "cohomology": self.cohomology.serialize() if self.cohomology else None,
            "verdicts": [
                {
                    "prime": v.prime,
                    "decision": v.decision.value,
                    "witness": self.witnesses.get(v.prime),
                    "case": v.case.value if v.case else None,
                    "notes": list(v.notes),
                }
                for v in self.verdicts
            ],
            "fan": self.fan.serialize() if self.fan else None,
        }


def _index_value(value):
    return "inf" if value is INFINITE else value


def cohomology_report(
    poset: FacePoset,
    charfun: CharacteristicFunction,
    flags: AssumptionFlags,
    fiber: tuple[FacePoset, CharacteristicFunction] | None = None,
) -> CohomologyReport | None:
    """Return the full report where one exists, else the boundary degrees."""
    if poset.n < 2:
        return None
    if poset.n in (2, 3) and flags.face_acyclic:
        return full_report_low_dim(poset, charfun, flags, fiber)
    return boundary_degrees(poset, charfun, flags)


def assemble(
    document: InputDocument,
    poset: FacePoset,
    charfun: CharacteristicFunction,
    primes=None,
    fiber: tuple[FacePoset, CharacteristicFunction] | None = None,
) -> ReportDocument:
    """Validate a pair and compute its invariants, cohomology and verdicts.

    :param primes: primes to check, the document's primes or the default list
        when omitted
    """
    report = ReportDocument(input=document.serialize())
    report.poset_class = str(classify(poset))
    report.errors = validate(poset, charfun)
    if report.errors:
        return report

    flags = document.flags(poset)
    report.mu = {poset.face_label(f): v for f, v in mu_table(poset, charfun).items()}
    report.vertex_dets = {
        poset.face_label(v): det for v, det in vertex_dets(poset, charfun).items()
    }
    report.cohomology = cohomology_report(poset, charfun, flags, fiber)
    if primes is None:
        primes = document.primes
    report.verdicts = analyze(poset, charfun, flags, primes)
    report.witnesses = {
        v.prime: poset.face_label(v.witness) for v in report.verdicts if v.witness
    }
    return report


def check_fan(
    document: InputDocument,
    fan: Fan,
    primes=None,
    trials: int | None = None,
    seed: int | None = None,
    fiber: tuple[FacePoset, CharacteristicFunction] | None = None,
) -> ReportDocument:
    """Check completeness of `fan`, then analyze its dual pair.

    The cokernels of the coboundaries are compared with the lattice quotients of
    the rays.
    """
    completeness = completeness_check(fan, trials=trials, seed=seed)
    if not completeness.passed:
        report = ReportDocument(input=document.serialize())
        report.errors = completeness.summary()
        report.fan = FanCheck(completeness)
        return report

    poset, charfun = fan_to_pair(fan)
    report = assemble(document, poset, charfun, primes, fiber)
    report.fan = FanCheck(
        completeness,
        coboundaries=delta_cokernels(fan),
        lattice=(
            cokernel(charfun.matrix()),
            wedge_square_quotient(charfun.vectors, fan.n),
        ),
    )
    if not report.fan.agree:
        logger.error(
            f"Coboundaries give {report.fan.coboundaries}, "
            f"lattice quotients give {report.fan.lattice}."
        )
    return report


def format_pair(pair) -> str:
    """Print two groups, e.g. ``(Z/2, 0)``."""
    if pair is None:
        return "not computed"
    return f"({pair[0]}, {pair[1]})"


def format_index(value) -> str:
    return "∞" if value is INFINITE else str(value)


class Renderer:
    """A helper class that renders reports to various formats."""

    @staticmethod
    def _get_env() -> jinja2.Environment:
        """Return a Jinja2 environment preloaded with a FileSystemLoader."""
        loader = jinja2.FileSystemLoader(searchpath=files("orbicoh") / "templates")
        env = jinja2.Environment(loader=loader, trim_blocks=True, lstrip_blocks=True)
        env.filters["format_pair"] = format_pair
        env.filters["format_index"] = format_index
        return env

    def __init__(self, report: ReportDocument):
        self.report = report
        self.env = self._get_env()

    def _render_text(self) -> str:
        template = self.env.get_template("report.template.txt")
        out = template.render(report=self.report)
        return f"{out.strip()}\n"

    def _render_json(self) -> str:
        out = json.dumps(
            self.report.serialize(), sort_keys=True, indent=2, ensure_ascii=False
        )
        return f"{out}\n"


def render(report: ReportDocument, frmt: str = "text") -> str:
    """Render `report` in a supported format."""
    if frmt not in OUTPUT_FORMATS:
        raise ValueError(f"{frmt} not one of {list(OUTPUT_FORMATS)}.")
    return getattr(Renderer(report), f"_render_{frmt}")()
