# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Set up the orbicoh environment.

Defaults for sampling, prime selection, output and logging are read here. Each
of them may be overridden by an ``ORBICOH_<KEY>`` environment variable or in the
overrides file.
"""

import os
from pathlib import Path

from orbicoh import __version__
from orbicoh.utils import parse_prime_list
from orbicoh.yaml import yaml

HOME_DIRECTORY = Path.home()
RESOURCE_DIRECTORY = HOME_DIRECTORY / ".orbicoh"
OVERRIDES_FILE = RESOURCE_DIRECTORY / "settings.yaml"

OUTPUT_FORMATS = ("text", "json")


class Settings:
    """Helper class to convert settings dict to object."""

    DEFAULTS = {
        "DEBUG": 0,
        "DEFAULT_OUTPUT": "text",
        "DEFAULT_PRIMES": "2,3,5,7",
        "LOG_BACKUPS": 5,
        "LOG_FILE": RESOURCE_DIRECTORY / "orbicoh.log",
        "LOG_MAX_SIZE": 1024 * 1024 * 10,
        "OVERRIDES_FILE": OVERRIDES_FILE,
        "RESOURCE_DIRECTORY": RESOURCE_DIRECTORY,
        "SAMPLE_BOUND": 1000,
        "SEED": 0,
        "TRIALS": 10_000,
        "VERSION": __version__,
    }

    def __init__(self, **kwargs):
        self.settings = {}
        self.overrides = kwargs
        self.load()
        self.set_attributes()

    def load(self):
        """Load settings from environment where possible, or use defaults."""
        # The type of each default is used to coerce the environment value.
        self.settings = {
            k: type(v)(os.getenv(f"ORBICOH_{k}", v)) for k, v in self.DEFAULTS.items()
        }
        self.settings.update(self.overrides)

    def set_attributes(self):
        """Set attributes on instance using settings dict."""
        for k, v in self.settings.items():
            setattr(self, k, v)

    def validate(self) -> list[str]:
        """Check the values that sampling, prime selection and output rely on.

        :returns: a list of problems, empty if every value is usable
        """
        errors = []
        for key in ("TRIALS", "SAMPLE_BOUND"):
            value = self.settings.get(key)
            if value is not None and value < 1:
                errors.append(f"{key} must be at least 1, got {value}.")
        if "DEFAULT_PRIMES" in self.settings:
            try:
                parse_prime_list(self.settings["DEFAULT_PRIMES"])
            except ValueError as e:
                errors.append(f"DEFAULT_PRIMES: {e}")
        output = self.settings.get("DEFAULT_OUTPUT")
        if output is not None and output not in OUTPUT_FORMATS:
            errors.append(
                f"DEFAULT_OUTPUT {output} is not one of {list(OUTPUT_FORMATS)}."
            )
        return errors


if OVERRIDES_FILE.exists():
    with OVERRIDES_FILE.open("r") as f:
        overrides = yaml.load(f) or {}
else:
    overrides = {}
settings = Settings(**overrides)
