# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Test configuration and fixtures."""

import json
import random

import pytest


@pytest.fixture
def rng():
    """A seeded random generator, so that sampled tests are reproducible."""
    return random.Random(20240101)


@pytest.fixture
def simplex3_data():
    return {
        "n": 3,
        "polytope": {
            "labels": ["1", "2", "3", "4"],
            "vertices": [
                ["2", "3", "4"],
                ["1", "3", "4"],
                ["1", "2", "4"],
                ["1", "2", "3"],
            ],
        },
        "vectors": {
            "1": [0, 0, 1],
            "2": [2, 0, 1],
            "3": [0, 1, 1],
            "4": [-2, -1, -1],
        },
        "assumptions": {"face_acyclic": True},
    }


@pytest.fixture
def bigon_data():
    """Diamond(2) as an explicit poset: two edges meeting in two vertices."""
    return {
        "n": 2,
        "poset": {
            "labels": ["a", "b"],
            "faces": [
                {"id": "A", "facets": ["a"], "boundary": ["p", "q"]},
                {"id": "B", "facets": ["b"], "boundary": ["p", "q"]},
                {"id": "p", "facets": ["a", "b"], "boundary": []},
                {"id": "q", "facets": ["a", "b"], "boundary": []},
            ],
        },
        "vectors": {"a": [1, 0], "b": [0, 1]},
    }


@pytest.fixture
def fibration_data():
    return {
        "n": 3,
        "fan": {
            "rays": {
                "1": [4, 1, 0],
                "2": [0, 1, 0],
                "3": [-2, -1, 0],
                "+": [0, 0, 1],
                "-": [1, 0, -1],
            },
            "cones": [
                ["+", "1", "2"],
                ["+", "1", "3"],
                ["+", "2", "3"],
                ["-", "1", "2"],
                ["-", "1", "3"],
                ["-", "2", "3"],
            ],
        },
    }


@pytest.fixture
def write_document(tmp_path):
    """Write a document to a temporary JSON file and return its path."""

    def _write_document(data, name="input.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write_document
