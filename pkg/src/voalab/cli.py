"""Command-line front end: run scenarios and targeted single computations."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .autos import first_difference, trace_on_grade
from .config import EngineConfig, get_default_config
from .exceptions import ScenarioError, VoalabError
from .lattice import Sublattice, parent_of
from .parsing import constant, parse_expression, vector
from .qseries import voa_character
from .scalar import format_scalar
from .scenario import Scenario, Session, builtin_scenario

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-weight", type=int, default=None, help="weight cutoff W (default: 4)")
    common.add_argument("--jobs", type=int, default=None, help="worker threads for grade-parallel passes")
    common.add_argument("--output", choices=("text", "json"), default="text", help="report format")
    common.add_argument("--scenario", type=Path, default=None, help="scenario file (default: the shipped scenario)")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    verbosity.add_argument("--quiet", action="store_true", help="log warnings only")
    return common


def build_parser() -> argparse.ArgumentParser:
    """The voalab argument parser."""
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="voalab",
        description="Exact lattice vertex operator algebra computations driven by scenario files.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", parents=[common], help="run every check of a scenario")
    run.add_argument("path", nargs="?", type=Path, default=None, help="scenario file (default: the shipped scenario)")
    run.add_argument("--check", action="append", default=None, help="run only checks of this kind or name")
    run.add_argument("--strict-annihilation", action="store_true", help="also run the full annihilation cross-check")
    run.add_argument("--report", type=Path, default=None, help="also write the report to this file")

    dims = commands.add_parser("dims", parents=[common], help="graded dimensions of a lattice VOA or named space")
    dims.add_argument("name", help="lattice (optionally written V_<lattice>) or named space")

    character = commands.add_parser("character", parents=[common], help="character of a (coset of a) lattice VOA")
    character.add_argument("name", help="lattice or sublattice")
    character.add_argument("--shift", default=None, help="coset shift: a vector, or a multiple of a rank-one generator")

    commutant = commands.add_parser("commutant", parents=[common], help="graded dimensions of Com_V(state)")
    commutant.add_argument("state", help="named state")

    auto_check = commands.add_parser("auto-check", parents=[common], help="compare two automorphism expressions")
    auto_check.add_argument("lhs")
    auto_check.add_argument("rhs")
    auto_check.add_argument("--lattice", required=True, help="lattice the automorphisms act on")

    commands.add_parser("show-scenario", parents=[common], help="print the scenario in canonical form")
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _load(path: Optional[Path]) -> Scenario:
    return Scenario.from_file(path) if path is not None else builtin_scenario()


def _config(args: argparse.Namespace) -> EngineConfig:
    return get_default_config().with_overrides(
        max_weight=args.max_weight,
        jobs=args.jobs,
        strict_annihilation=getattr(args, "strict_annihilation", False) or None,
    )


def _emit(args: argparse.Namespace, payload: dict, text: str) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True) if args.output == "json" else text)


def _dims_table(name: str, dims: Sequence) -> str:
    return "\n".join([f"{name}:"] + [f"  {n}: {d}" for n, d in enumerate(dims)])


def cmd_run(args: argparse.Namespace) -> int:
    scenario = _load(args.path or args.scenario)
    report = Session(scenario, _config(args)).run(args.check)
    text = report.to_json() if args.output == "json" else report.to_text()
    sys.stdout.write(text)
    if args.report is not None:
        args.report.write_text(text, encoding="utf-8")
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_dims(args: argparse.Namespace) -> int:
    scenario = _load(args.scenario)
    session = Session(scenario, _config(args))
    name = args.name
    if name not in scenario.definitions["space"]:
        if name not in scenario.lattice_file.lattices and name.startswith("V_"):
            name = name[2:]
        dims = session.voa(scenario.lattice(name).name).basis.dims()[: session.max_weight + 1]
    else:
        dims = session.space(name).dims()
    _emit(args, {"name": args.name, "max_weight": session.max_weight, "dims": dims}, _dims_table(args.name, dims))
    return EXIT_OK


def cmd_character(args: argparse.Namespace) -> int:
    scenario = _load(args.scenario)
    w = _config(args).max_weight
    space = scenario.space_like(args.name)
    shift = None
    if args.shift is not None:
        node = parse_expression(args.shift)
        factor = constant(node)
        if factor is not None and isinstance(space, Sublattice) and space.rank == 1:
            shift = tuple(factor * c for c in space.basis[0])
        else:
            parent = parent_of(space)
            shift = vector(node, parent, scenario.named_vectors(parent), args.shift)
    series = voa_character(space, shift, w)
    terms = [{"exponent": str(e), "coefficient": format_scalar(c)} for e, c in series.items()]
    _emit(args, {"name": args.name, "shift": args.shift, "max_weight": w, "terms": terms}, series.format())
    return EXIT_OK


def cmd_commutant(args: argparse.Namespace) -> int:
    scenario = _load(args.scenario)
    session = Session(scenario, _config(args))
    lattice = session.lattice_of("state", args.state)
    dims = session.evaluate("space", lattice, f"commutant({args.state})").dims()
    label = f"Com({args.state})"
    _emit(args, {"state": args.state, "max_weight": session.max_weight, "dims": dims}, _dims_table(label, dims))
    return EXIT_OK


def cmd_auto_check(args: argparse.Namespace) -> int:
    scenario = _load(args.scenario)
    session = Session(scenario, _config(args))
    a = session.evaluate("auto", args.lattice, args.lhs)
    b = session.evaluate("auto", args.lattice, args.rhs)
    w = session.max_weight
    grade = first_difference(a, b, w)
    traces = [[format_scalar(trace_on_grade(x, n)) for n in range(w + 1)] for x in (a, b)]
    verdict = "EQUAL" if grade is None else f"DIFFERENT at grade {grade}"
    _emit(args, {"lhs": args.lhs, "rhs": args.rhs, "max_weight": w, "equal": grade is None, "first_difference": grade,
                 "traces": traces}, verdict)
    return EXIT_OK if grade is None else EXIT_FAILED


def cmd_show_scenario(args: argparse.Namespace) -> int:
    scenario = _load(args.scenario)
    if args.output == "json":
        _emit(args, {"sha256": scenario.digest, "text": scenario.to_text()}, "")
    else:
        sys.stdout.write(scenario.to_text())
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "dims": cmd_dims,
    "character": cmd_character,
    "commutant": cmd_commutant,
    "auto-check": cmd_auto_check,
    "show-scenario": cmd_show_scenario,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point of the voalab command.

    Returns
    -------
    int
        0 if everything passed, 1 if a check failed, 2 on scenario, input or file errors.
    """
    args = build_parser().parse_args(argv)
    _configure_logging(args)
    try:
        return COMMANDS[args.command](args)
    except (ScenarioError, OSError) as error:
        print(f"voalab: error: {error}", file=sys.stderr)
        return EXIT_USAGE
    except (VoalabError, ValueError) as error:
        logger.debug("command failed", exc_info=True)
        print(f"voalab: error: {error}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
