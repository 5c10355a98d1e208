# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Utility helper functions."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable
import logging

from sympy import isprime

logger = logging.getLogger(__name__)


def mkdir_if_not_exists(path: Path):
    """Check if a directory exists, if not, create it."""
    if not path.exists():
        path.mkdir()
    elif path.exists() and not path.is_dir():
        logger.warning(f"{path} exists but is not a directory.")


def touch_if_not_exists(path: Path):
    """Check if a file exists, if not, create it."""
    if not path.exists():
        path.touch()
    elif path.exists() and not path.is_file():
        logger.warning(f"{path} exists but is not a file.")


def parse_int(value, name: str = "value") -> int:
    """Parse an exact integer given as an int or a decimal string.

    Booleans and floats are rejected, a float cannot carry a large integer exactly.
    """
    if isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got {value!r}.")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        text = value.strip().replace("_", "")
        if text.lstrip("+-").isdigit():
            return int(text)
    raise ValueError(f"{name} must be an integer, got {value!r}.")


def check_primes(values: Iterable) -> list[int]:
    """Return `values` as a sorted list of distinct primes.

    :raises ValueError: if a value is not a prime number
    """
    primes = set()
    for value in values:
        p = parse_int(value, "prime")
        if not isprime(p):
            raise ValueError(f"{p} is not a prime.")
        primes.add(p)
    return sorted(primes)


def parse_prime_list(text: str) -> list[int]:
    """Parse a comma separated list of primes such as ``"2,3,5"``."""
    return check_primes(e.strip() for e in str(text).split(",") if e.strip())
