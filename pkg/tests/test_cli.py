# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Test various CLI commands."""

import json
import logging
import subprocess
from unittest.mock import patch

import pytest

from orbicoh.cli import INVALID, MALFORMED, OK, create_parser, run, version
from orbicoh.logging import console_level
from orbicoh.settings import settings


@pytest.fixture(autouse=True)
def startup():
    """Skip the startup commands that touch the resource directory."""
    with patch("orbicoh.cli.init_logging") as init_logging, patch(
        "orbicoh.cli.mkdir_if_not_exists"
    ), patch("orbicoh.cli.touch_if_not_exists"):
        yield init_logging


def test__cli__version():
    out = subprocess.check_output(["orbicoh", "--version"])
    assert out.decode("utf-8").strip() == version()


def test__cli__example(capsys, startup):
    assert run(["example", "weighted-triangle", "--param", "6", "--json"]) == OK
    data = json.loads(capsys.readouterr().out)
    assert data["mu"]["Q"] == 6
    assert data["cohomology"]["groups"]["3"] == {"rank": 0, "factors": [6]}
    startup.assert_called_once_with(debug=False, quiet=True)


def test__cli__example__text(capsys):
    assert run(["example", "simplex3", "--prime", "3"]) == OK
    out = capsys.readouterr().out
    assert "Class: Simplex(3)" in out
    assert "  H^5 = Z/2" in out
    assert "p = 3: NoPTorsion" in out


def test__cli__example__counterexample(capsys):
    args = ["example", "counterexample", "-k", "3", "--json", "--trials", "1000"]
    assert run(args) == OK
    data = json.loads(capsys.readouterr().out)
    assert set(data["mu"].values()) == {1}
    assert data["fan"]["complete"]
    assert data["fan"]["agree"]
    verdicts = {v["prime"]: v for v in data["verdicts"]}
    assert verdicts[3]["decision"] == "Inconclusive"


def test__cli__example__fibration(capsys):
    assert run(["example", "fibration", "-k", "4", "--trials", "500"]) == OK
    out = capsys.readouterr().out
    assert "Class: Prism(3)" in out
    assert "  H^3 = Z/4" in out


def test__cli__analyze(capsys, write_document, simplex3_data):
    path = write_document(simplex3_data)
    assert run(["analyze", str(path), "--json", "--prime", "11"]) == OK
    data = json.loads(capsys.readouterr().out)
    assert [v["prime"] for v in data["verdicts"]] == [2, 11]
    assert data["verdicts"][0]["decision"] == "HasPTorsion"


def test__cli__analyze__invalid(capsys, write_document, simplex3_data):
    simplex3_data["vectors"]["1"] = [0, 0, 2]
    path = write_document(simplex3_data)
    assert run(["analyze", str(path)]) == INVALID
    out = capsys.readouterr().out
    assert "Invalid input" in out
    assert "Vector [0, 0, 2] of facet 1 is not primitive." in out


def test__cli__analyze__inconsistent_vertices(write_document, simplex3_data):
    simplex3_data["polytope"]["vertices"] = [["1", "2"], ["1", "2"], ["1", "2"]]
    path = write_document(simplex3_data)
    assert run(["analyze", str(path)]) == INVALID


def test__cli__analyze__malformed(tmp_path, write_document):
    path = write_document({"n": 2, "vectors": {}})
    assert run(["analyze", str(path)]) == MALFORMED
    assert run(["analyze", str(tmp_path / "missing.yaml")]) == MALFORMED


def test__cli__fan(capsys, write_document, fibration_data, simplex3_data):
    path = write_document(fibration_data, "fan.json")
    assert run(["fan", str(path), "--trials", "500", "--json"]) == OK
    data = json.loads(capsys.readouterr().out)
    assert data["class"] == "Prism(3)"
    assert data["fan"]["coboundaries"] == data["fan"]["lattice"]

    path = write_document(simplex3_data, "polytope.json")
    assert run(["fan", str(path)]) == MALFORMED


def test__cli__fan__incomplete(capsys, write_document, fibration_data):
    fibration_data["fan"]["cones"].pop()
    path = write_document(fibration_data)
    assert run(["fan", str(path), "--trials", "200"]) == INVALID
    assert "complete: no (200 samples)" in capsys.readouterr().out


def test__cli__analyze__fan_document(capsys, write_document, fibration_data):
    path = write_document(fibration_data)
    assert run(["analyze", str(path), "--json"]) == OK
    data = json.loads(capsys.readouterr().out)
    assert data["fan"] is None
    assert data["class"] == "Prism(3)"


@pytest.mark.parametrize(
    "argv",
    [
        ["example", "simplex", "--prime", "4"],
        ["example", "simplex", "--param", "0"],
        ["example", "nope"],
        ["analyze"],
    ],
)
def test__cli__bad_arguments(argv):
    with pytest.raises(SystemExit):
        run(argv)


def test__cli__no_command(capsys):
    assert run([]) == OK
    assert "commands" in capsys.readouterr().out


def test_create_parser():
    assert create_parser("example").prog.endswith("example")
    with pytest.raises(ValueError):
        create_parser("nope")


def test_console_level():
    assert console_level() == logging.INFO
    assert console_level(quiet=True) == logging.WARNING
    assert console_level(debug=True, quiet=True) == logging.DEBUG


def test__cli__reports_bad_settings(caplog):
    with patch.dict(settings.settings, {"TRIALS": 0}):
        with caplog.at_level(logging.WARNING, logger="orbicoh.cli"):
            assert run([]) == OK
    assert "Invalid setting: TRIALS must be at least 1, got 0." in caplog.text


@pytest.fixture
def overrides_file(tmp_path, monkeypatch):
    path = tmp_path / "settings.yaml"
    path.touch()
    monkeypatch.setattr(settings, "OVERRIDES_FILE", path)
    return path


def test__cli__settings_write(overrides_file):
    assert run(["settings", "write", "TRIALS", "500"]) == OK
    assert overrides_file.read_text(encoding="utf-8") == "TRIALS: 500\n"
    with pytest.raises(ValueError, match="already set"):
        run(["settings", "write", "TRIALS", "500"])
    with pytest.raises(ValueError, match="TRIALS must be at least 1"):
        run(["settings", "write", "TRIALS", "0"])
    with pytest.raises(ValueError, match="is not a prime"):
        run(["settings", "write", "DEFAULT_PRIMES", "2,4"])
    with pytest.raises(ValueError, match="does not exist"):
        run(["settings", "write", "NOPE", "1"])
    assert overrides_file.read_text(encoding="utf-8") == "TRIALS: 500\n"


def test__cli__settings_read(capsys):
    with patch.dict(settings.settings, {"DEFAULT_PRIMES": "2,3"}):
        assert run(["settings", "read", "DEFAULT_PRIMES"]) == OK
    assert capsys.readouterr().out == "DEFAULT_PRIMES: 2,3 (str)\n"
    assert run(["settings", "read"]) == OK
    assert "TRIALS: " in capsys.readouterr().out
    with pytest.raises(ValueError):
        run(["settings", "read", "NOPE"])
