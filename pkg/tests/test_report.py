# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Tests for report module."""

import json

import pytest

from orbicoh.charfun import CharacteristicFunction
from orbicoh.document import InputDocument, parse_document
from orbicoh.fan import (
    counterexample_fan,
    fibration_fan,
    fibration_fiber,
    weighted_triangle,
)
from orbicoh.lattice import INFINITE, FinAbGroup
from orbicoh.poset import simplex
from orbicoh.report import (
    ReportDocument,
    assemble,
    check_fan,
    format_index,
    format_pair,
    render,
)


@pytest.fixture
def triangle_report():
    poset, charfun = weighted_triangle(6)
    document = InputDocument.from_pair(poset, charfun)
    return assemble(document, poset, charfun, [5])


def test_assemble(triangle_report):
    assert triangle_report.valid
    assert triangle_report.passed
    assert triangle_report.poset_class == "Simplex(2)"
    assert triangle_report.mu["Q"] == 6
    assert triangle_report.vertex_dets == {"Q_{1,2}": 12, "Q_{1,3}": 6, "Q_{2,3}": 6}
    assert [v.prime for v in triangle_report.verdicts] == [2, 3, 5]
    assert triangle_report.witnesses == {2: "Q", 3: "Q"}


def test_render__text(triangle_report):
    out = render(triangle_report)
    assert out.startswith("Input: polytope of dimension 2 with 3 facets\n")
    assert "Class: Simplex(2)" in out
    assert "  Q: 6" in out
    assert "  H^3 = Z/6" in out
    assert "  p = 2: HasPTorsion at Q" in out
    assert "  p = 5: NoPTorsion (simplex)" in out
    assert "Invalid input" not in out


def test_render__json(triangle_report):
    out = render(triangle_report, "json")
    assert out == render(triangle_report, "json")
    data = json.loads(out)
    assert data["class"] == "Simplex(2)"
    assert data["valid"]
    assert data["mu"]["Q"] == 6
    assert data["cohomology"]["groups"]["3"] == {"rank": 0, "factors": [6]}
    verdict = data["verdicts"][0]
    assert verdict == {
        "prime": 2,
        "decision": "HasPTorsion",
        "witness": "Q",
        "case": None,
        "notes": verdict["notes"],
    }
    vertices = parse_document(data["input"]).vertices
    assert sorted(vertices) == [("1", "2"), ("1", "3"), ("2", "3")]


def test_render__unsupported_format(triangle_report):
    with pytest.raises(ValueError):
        render(triangle_report, "xml")


def test_infinite_index():
    report = ReportDocument(input={}, mu={"Q": INFINITE, "Q_{1}": 1})
    assert report.serialize()["mu"] == {"Q": "inf", "Q_{1}": 1}
    assert format_index(INFINITE) == "∞"
    assert format_index(3) == "3"


def test_format_pair():
    assert format_pair((FinAbGroup(0, (2,)), FinAbGroup())) == "(Z/2, 0)"
    assert format_pair(None) == "not computed"


def test_assemble__invalid():
    charfun = CharacteristicFunction(2, [(2, 2), (0, 1), (-1, -1)])
    document = InputDocument.from_pair(simplex(2), charfun)
    report = assemble(document, simplex(2), charfun)
    assert not report.valid
    assert not report.passed
    assert report.errors == ["Vector [2, 2] of facet 1 is not primitive."]
    assert report.verdicts == []
    out = render(report)
    assert "Invalid input" in out
    assert "  - Vector [2, 2] of facet 1 is not primitive." in out
    assert "Torsion verdicts" not in out
    assert json.loads(render(report, "json"))["valid"] is False


def test_check_fan__fibration():
    fan = fibration_fan(3)
    document = InputDocument.from_fan(fan)
    report = check_fan(document, fan, trials=500, seed=1, fiber=fibration_fiber(3))
    assert report.passed
    assert report.fan.agree
    assert report.fan.coboundaries == (FinAbGroup(), FinAbGroup())
    assert report.poset_class == "Prism(3)"
    assert report.cohomology.group(3) == FinAbGroup(0, (3,))

    out = render(report)
    assert out.startswith("Input: fan of dimension 3 with 5 rays\n")
    assert "  complete: yes (500 samples)" in out
    assert "  routes agree: yes" in out
    data = json.loads(render(report, "json"))
    assert data["fan"]["complete"]
    assert data["fan"]["problems"] == []


def test_check_fan__counterexample():
    fan = counterexample_fan(2)
    report = check_fan(InputDocument.from_fan(fan), fan, trials=500)
    assert report.passed
    assert report.fan.coboundaries[0].is_trivial
    assert set(report.mu.values()) == {1}


def test_check_fan__incomplete():
    fan = counterexample_fan(2).without_cone(0)
    report = check_fan(InputDocument.from_fan(fan), fan, trials=500)
    assert not report.passed
    assert report.errors
    assert report.fan.coboundaries is None
    assert report.fan.lattice is None
    out = render(report)
    assert "  complete: no (500 samples)" in out
    assert "Invalid input" in out
    assert "Wall [0, 3] lies in 1 maximal cones." in out
