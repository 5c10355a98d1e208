# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""This module sets up parsers and maps cli commands to methods.

Every command returns an exit status: 0 on success, 1 when the input is invalid
or a check fails, 2 when the input document is malformed.
"""

from __future__ import annotations

from datetime import datetime
from pathlib import Path
from typing import Sequence
import argparse
import logging
import sys

from sympy import isprime

from orbicoh import __version__
from orbicoh.document import InputDocument, InputKind, MalformedInput, load_document
from orbicoh.fan import (
    collapsed_counterexample,
    counterexample_fan,
    cube_example,
    fibration_fan,
    fibration_fiber,
    reference_example,
    simplex3_example,
    weighted_triangle,
)
from orbicoh.logging import init_logging
from orbicoh.poset import PosetKind
from orbicoh.report import ReportDocument, assemble, check_fan, render
from orbicoh.settings import Settings, settings
from orbicoh.utils import mkdir_if_not_exists, touch_if_not_exists
from orbicoh.yaml import yaml

logger = logging.getLogger(__name__)

OK, INVALID, MALFORMED = 0, 1, 2

EXAMPLES = {
    "weighted-triangle": "the triangle with µ(Q) = k",
    "simplex3": "a 3-simplex with N/N̂ = Z/2",
    "fibration": "a fan fibred over CP^1 with H^3 = Z/k",
    "counterexample": "µ = 1 on every face, yet Z/k torsion",
    "collapsed-counterexample": "the counterexample with two facet pairs collapsed",
    "simplex": "the k-simplex with coordinate vectors",
    "diamond": "the suspension of a (k-1)-simplex",
    "prism": "the prism over a (k-1)-simplex",
    "cube": "the 3-cube with ±e_i on opposite facets",
}


def _output(report: ReportDocument, args: argparse.Namespace) -> int:
    frmt = "json" if args.json else settings.DEFAULT_OUTPUT
    print(render(report, frmt), end="")
    for error in report.errors:
        logger.error(error)
    return OK if report.passed else INVALID


def _primes(args: argparse.Namespace, document: InputDocument):
    """Primes given on the command line replace those of the document."""
    if args.prime:
        return sorted(set(args.prime))
    return document.primes


def analyze(args: argparse.Namespace) -> int:
    """Validate a pair and report its invariants, cohomology and verdicts."""
    document = load_document(args.file)
    poset, charfun = document.to_pair()
    report = assemble(document, poset, charfun, _primes(args, document))
    return _output(report, args)


def fan(args: argparse.Namespace) -> int:
    """Check a fan for completeness and compare both torsion computations."""
    document = load_document(args.file)
    if document.kind != InputKind.FAN:
        raise MalformedInput(str(args.file), "expected a fan section")
    report = check_fan(
        document,
        document.to_fan(),
        _primes(args, document),
        trials=args.trials,
        seed=args.seed,
    )
    return _output(report, args)


def example(args: argparse.Namespace) -> int:
    """Analyze one of the built-in examples."""
    k = args.param
    family = args.name not in ("simplex3", "cube")
    if family and k is None:
        k = 3 if args.name in ("simplex", "diamond", "prism") else 1
    primes = sorted(set(args.prime)) if args.prime else None

    if args.name in ("fibration", "counterexample"):
        if args.name == "fibration":
            built, fiber = fibration_fan(k), fibration_fiber(k)
        else:
            built, fiber = counterexample_fan(k), None
        document = InputDocument.from_fan(built)
        report = check_fan(
            document, built, primes, trials=args.trials, seed=args.seed, fiber=fiber
        )
        return _output(report, args)

    if args.name == "weighted-triangle":
        poset, charfun = weighted_triangle(k)
    elif args.name == "simplex3":
        poset, charfun = simplex3_example()
    elif args.name == "collapsed-counterexample":
        poset, charfun = collapsed_counterexample(k)
    elif args.name == "cube":
        poset, charfun = cube_example()
    else:
        poset, charfun = reference_example(PosetKind(args.name), k)
    document = InputDocument.from_pair(poset, charfun)
    return _output(assemble(document, poset, charfun, primes), args)


def version():
    """Return version information."""
    return __version__


def write(args: argparse.Namespace) -> int:
    """Set a specified settings variable to the provided value."""
    key = args.key[0]

    with settings.OVERRIDES_FILE.open("r", encoding="utf-8") as f:
        overrides = yaml.load(f) or {}

    if key not in settings.DEFAULTS:
        raise ValueError(f"{key} does not exist in defaults.")

    value = args.value if args.value is not None else input(f"Enter value for {key}: ")
    _type = type(settings.DEFAULTS[key])

    if _type(value) == overrides.get(key):
        raise ValueError(f"{key} is already set to {value} in overrides file.")

    overrides[key] = _type(value)
    problems = Settings(**overrides).validate()
    if problems:
        raise ValueError(" ".join(problems))
    logger.info(f"{key} is now set to {value} ({_type.__name__}) in overrides file.")

    with settings.OVERRIDES_FILE.open("w", encoding="utf-8", newline="\n") as f:
        yaml.dump(overrides, f)
    return OK


def read(args: argparse.Namespace) -> int:
    """Print the value of a specified settings variable.

    If no key is provided, prints all available settings variables.
    """

    def out_template(key: str, value: str):
        return f"{key}: {value} ({type(value).__name__})"

    if not args.key:
        for key, value in settings.settings.items():
            print(out_template(key, value))
        return OK

    key = args.key

    if key not in settings.settings:
        raise ValueError(f"{key} does not exist in defaults.")
    print(out_template(key, settings.settings[key]))
    return OK


def prime(value: str) -> int:
    """Parse a --prime argument."""
    try:
        p = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value} is not an integer")
    if not isprime(p):
        raise argparse.ArgumentTypeError(f"{p} is not a prime")
    return p


def positive(value: str) -> int:
    try:
        k = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value} is not an integer")
    if k < 1:
        raise argparse.ArgumentTypeError(f"{k} is not positive")
    return k


def call_main_with_args():
    """Run the command line interface with the arguments of this process."""
    sys.exit(run(sys.argv[1:]))


def run(argv: Sequence[str] | None = None) -> int:
    """Parse `argv` and run the selected command, returning its exit status."""
    parser = create_parser()
    args = parser.parse_args(argv)
    return main(args)


def main(args: argparse.Namespace) -> int:
    """Run startup commands and redirect to appropriate function."""
    mkdir_if_not_exists(settings.RESOURCE_DIRECTORY)
    touch_if_not_exists(settings.OVERRIDES_FILE)
    init_logging(
        debug=getattr(args, "debug", False) or bool(settings.DEBUG),
        quiet=getattr(args, "json", False),
    )
    for problem in settings.validate():
        logger.warning(f"Invalid setting: {problem}")

    if not hasattr(args, "func"):
        # By default, print help to screen.
        create_parser().print_help()
        return OK

    logger.debug(f"Calling {args.func} with {args}...")
    st = datetime.now()
    try:
        status = args.func(args)
    except MalformedInput as e:
        logger.error(f"Malformed input at {e}")
        status = MALFORMED
    except ValueError as e:
        logger.error(e)
        status = INVALID
    et = datetime.now()
    logger.debug(f"{args.func} took {(et - st).total_seconds()} seconds.")
    return status


def _add_output_arguments(_parser):
    _parser.add_argument(
        "--prime",
        type=prime,
        action="append",
        help="a prime to check, may be repeated",
    )
    _parser.add_argument("--json", action="store_true", help="print the report as JSON")


def _add_sampling_arguments(_parser):
    _parser.add_argument(
        "--seed",
        type=int,
        default=settings.SEED,
        help="the seed of the completeness sampler",
    )
    _parser.add_argument(
        "--trials",
        type=int,
        default=settings.TRIALS,
        help="the number of directions sampled for completeness",
    )


def create_parser(subcommand=None):
    """Create parser, subparsers, and arguments."""
    parsers = {}

    parser = argparse.ArgumentParser(
        description="cohomology and torsion of torus orbifolds"
    )
    parser.add_argument("--debug", action="store_true", help="enable debug output")
    parser.add_argument("--version", action="version", version=version())

    main_cli = parser.add_subparsers(title="commands")

    settings_parser = main_cli.add_parser("settings", help="settings operations")
    settings_cli = settings_parser.add_subparsers(title="settings")

    for _cli, func, help_text in (
        (main_cli, analyze, "analyze a poset or polytope document"),
        (main_cli, fan, "check a fan and analyze its dual pair"),
        (main_cli, example, "analyze a built-in example"),
        (settings_cli, write, "update settings variable and save to disk"),
        (settings_cli, read, "get settings variable, or all if no key is provided"),
    ):
        name = func.__name__.replace("_", "-")
        parsers[name] = _cli.add_parser(name, help=help_text)
        parsers[name].set_defaults(func=func)

    for name in ("analyze", "fan"):
        parsers[name].add_argument("file", type=Path, help="a YAML or JSON document")
        _add_output_arguments(parsers[name])
    for name in ("fan", "example"):
        _add_sampling_arguments(parsers[name])

    parsers["example"].add_argument(
        "name",
        choices=tuple(EXAMPLES),
        help="; ".join(f"{key}: {text}" for key, text in EXAMPLES.items()),
    )
    parsers["example"].add_argument(
        "--param", "-k", type=positive, help="the parameter of the example family"
    )
    _add_output_arguments(parsers["example"])

    parsers["write"].add_argument("key", nargs=1, help="the settings key to set")
    parsers["write"].add_argument(
        "value", nargs="?", help="the value to set key to if present"
    )

    parsers["read"].add_argument(
        "key",
        nargs="?",
        help="fetch the value of key if provided, or all keys otherwise",
    )

    if not subcommand:
        return parser
    if subcommand == "settings":
        return settings_parser
    if subcommand not in parsers:
        raise ValueError(f"{subcommand} not found.")
    return parsers[subcommand]
