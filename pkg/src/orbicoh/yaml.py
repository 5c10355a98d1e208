# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""YAML parsers for the settings file and for input documents.

Input documents may also be written as JSON, which YAML 1.2 reads unchanged.
"""

import logging

from ruamel.yaml import YAML

logger = logging.getLogger(__name__)


def load_yaml() -> YAML:
    """Load and return a round-trip ruamel.yaml.YAML instance."""
    yaml = YAML()
    yaml.indent(
        mapping=2,
        sequence=4,
        offset=2,
    )
    return yaml


def load_safe_yaml() -> YAML:
    """Return a parser that builds plain dicts and lists only."""
    return YAML(typ="safe", pure=True)


yaml = load_yaml()
safe_yaml = load_safe_yaml()
