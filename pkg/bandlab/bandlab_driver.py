"""
Bandlab Driver
==============

Command-line front end. Each subcommand wraps one part of the package:

- ``wp``: word problem in :math:`L`, :math:`G_1(n)` or :math:`E`.
- ``fill``: van Kampen diagram for a word, exported as JSON or DOT.
- ``bands``: band report for a diagram file.
- ``ball``: ball of the Cayley 2-complex, exported as JSON or DOT.
- ``experiment``: the push-out experiment, with JSON and ECSV reports.
- ``ext``: canonical form and abelian image in :math:`E`.
- ``k``: the star radius ``K`` for one or more levels.

Exit codes: 0 trivial / success, 1 nontrivial / not found, 2 usage or input
error, 3 I/O error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from .bands import band_report_json
from .cayley import build_ball, k_table
from .extended_lamplighter import abelian_image, e_from_word
from .group_core import (
    GROUP_LETTERS,
    LAMP_LETTERS,
    eval_word,
    expand_powers,
    format_word,
    normal_word,
    parse_word,
)
from .presented_group import dinfty_certificate, g1_from_word, g1_is_identity
from .semistability import ExperimentConfig, run_experiment
from .van_kampen import Diagram, DiagramError, area, fill, validate

# Configure logger
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NONTRIVIAL = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _target(text: str) -> tuple[str, int | None]:
    """Parse ``L``, ``E`` or ``G1:n``."""
    if text in ("L", "E"):
        return text, None
    if text.startswith("G1:"):
        try:
            n = int(text[3:])
        except ValueError:
            n = 0
        if n >= 1:
            return "G1", n
    raise argparse.ArgumentTypeError(f"expected L, E or G1:<n> with n >= 1, got {text!r}")


def _read_word(text: str, alphabet=LAMP_LETTERS) -> str:
    return parse_word(expand_powers(text), alphabet)


def _emit(text: str, destination: str | None) -> None:
    if destination in (None, "-"):
        sys.stdout.write(text.rstrip("\n") + "\n")
    else:
        Path(destination).write_text(text.rstrip("\n") + "\n")
        logger.info(f"Wrote {destination}")


# ---------------- Commands ----------------
def _cmd_wp(args) -> int:
    target, n = args.target
    if target == "L":
        element = eval_word(_read_word(args.word))
        trivial = element.is_identity()
        detail = f"{element.to_text()} normal_word={format_word(normal_word(element))}"
    elif target == "G1":
        word = _read_word(args.word)
        element = g1_from_word(word, n)
        trivial = g1_is_identity(element)
        detail = element.to_json()
        certificate = dinfty_certificate(word, n)
        if certificate is not None:
            i, j, image = certificate
            detail += f" dinfty(i={i}, j={j})={image}"
    else:
        element = e_from_word(_read_word(args.word, GROUP_LETTERS))
        trivial = element.is_identity()
        detail = element.to_text()
    print(f"{'trivial' if trivial else 'nontrivial'} {detail}")
    return EXIT_OK if trivial else EXIT_NONTRIVIAL


def _cmd_fill(args) -> int:
    word = _read_word(args.word)
    result = fill(word, args.level, args.max_area, max_nodes=args.max_nodes)
    if not result.found:
        print(f"not found within area {args.max_area}: {result.reason}")
        return EXIT_NONTRIVIAL
    print(f"area={area(result)} boundary={format_word(result.outer_word())}")
    if args.json:
        _emit(result.to_json(), args.json)
    if args.dot:
        _emit(result.to_dot(), args.dot)
    return EXIT_OK


def _cmd_bands(args) -> int:
    text = Path(args.diagram).read_text()
    try:
        diagram = Diagram.from_json(text)
    except (ValueError, KeyError, TypeError) as err:
        logger.error(f"Cannot read diagram {args.diagram}: {err}")
        return EXIT_USAGE
    violations = validate(diagram)
    if violations:
        for violation in violations:
            logger.error(violation)
        return EXIT_USAGE
    try:
        _emit(band_report_json(diagram), args.json)
    except DiagramError as err:
        logger.error(str(err))
        return EXIT_USAGE
    return EXIT_OK


def _cmd_ball(args) -> int:
    ball = build_ball(args.radius, args.level)
    if args.dot:
        _emit(ball.to_dot(), args.dot)
    if args.json:
        _emit(ball.to_json(), args.json)
    if not (args.dot or args.json):
        print(
            f"radius={args.radius} level={args.level} vertices={len(ball.vertices)} "
            f"edges={len(ball.edges)} cells={len(ball.cells)}"
        )
    return EXIT_OK


def _cmd_experiment(args) -> int:
    cfg = ExperimentConfig(
        n=args.level,
        m=args.base,
        k=args.push,
        beta_len_max=args.beta_len,
        N=args.ball,
        area_bound=args.area_bound,
        ball=args.use_ball,
        materialize=args.materialize_diagrams,
    )
    report = run_experiment(cfg, workers=args.workers, progress=not args.no_progress)
    print(report.summary())
    if args.json:
        _emit(report.to_json(), args.json)
    if args.outdir:
        report.write(args.outdir)
    return EXIT_OK


def _cmd_ext(args) -> int:
    element = e_from_word(_read_word(args.word, GROUP_LETTERS))
    m, q = abelian_image(element)
    print(f"{element.to_text()} abelian_image=({m}, {q})")
    if args.json:
        _emit(element.to_json(), args.json)
    return EXIT_OK


def _cmd_k(args) -> int:
    table = k_table(args.level, args.radius)
    if args.json:
        _emit(json.dumps(table.to_dict(orient="records"), indent=2), args.json)
    else:
        print(table.to_string(index=False))
    return EXIT_OK


# ---------------- CLI ----------------
def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bandlab",
        description="Word problems, van Kampen diagrams and a-bands for the Lamplighter group.",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging.")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings only.")
    sub = parser.add_subparsers(dest="command", required=True)

    wp = sub.add_parser("wp", help="Decide whether a word is trivial.")
    wp.add_argument("--word", required=True, help="Word, e.g. 'a X^2 a x^2'.")
    wp.add_argument(
        "--in", dest="target", type=_target, default=("L", None), help="L, G1:<n> or E."
    )
    wp.set_defaults(func=_cmd_wp)

    fill_cmd = sub.add_parser("fill", help="Search for a van Kampen diagram.")
    fill_cmd.add_argument("--word", required=True, help="Boundary word.")
    fill_cmd.add_argument("--level", type=int, default=2, help="Level n (relators R_{n-1}).")
    fill_cmd.add_argument("--max-area", type=int, default=16, help="Area bound.")
    fill_cmd.add_argument("--max-nodes", type=int, default=200_000, help="Search budget.")
    fill_cmd.add_argument("--json", help="Write the diagram as JSON ('-' for stdout).")
    fill_cmd.add_argument("--dot", help="Write the diagram as DOT ('-' for stdout).")
    fill_cmd.set_defaults(func=_cmd_fill)

    bands = sub.add_parser("bands", help="Band report for a diagram.")
    bands.add_argument("--diagram", required=True, help="Diagram JSON file.")
    bands.add_argument("--json", default="-", help="Output path ('-' for stdout).")
    bands.set_defaults(func=_cmd_bands)

    ball = sub.add_parser("ball", help="Export a ball of the Cayley 2-complex.")
    ball.add_argument("--radius", type=int, default=2, help="Ball radius.")
    ball.add_argument("--level", type=int, default=2, help="Level n.")
    ball.add_argument("--dot", help="Write DOT ('-' for stdout).")
    ball.add_argument("--json", help="Write JSON ('-' for stdout).")
    ball.set_defaults(func=_cmd_ball)

    exp = sub.add_parser("experiment", help="Run the push-out experiment.")
    exp.add_argument("--level", type=int, default=2, help="Level n.")
    exp.add_argument("--base", type=int, default=15, help="Base offset m (v = x^m).")
    exp.add_argument("--push", type=int, default=6, help="Push distance k.")
    exp.add_argument("--beta-len", type=int, default=8, help="Longest candidate loop.")
    exp.add_argument("--ball", type=int, default=12, help="Forbidden ball radius N.")
    exp.add_argument(
        "--no-ball",
        dest="use_ball",
        action="store_false",
        help="Drop the ball constraint (positive control).",
    )
    exp.set_defaults(use_ball=True)
    exp.add_argument("--area-bound", type=int, default=24, help="Area bound for diagrams.")
    exp.add_argument(
        "--materialize-diagrams",
        action="store_true",
        help="Build diagrams for fillable candidates.",
    )
    exp.add_argument("--workers", type=int, default=1, help="Worker pool size.")
    exp.add_argument("--json", help="Write the report as JSON ('-' for stdout).")
    exp.add_argument("--outdir", help="Write JSON and ECSV reports to this directory.")
    exp.add_argument("--no-progress", action="store_true", help="Hide the progress bar.")
    exp.set_defaults(func=_cmd_experiment)

    ext = sub.add_parser("ext", help="Evaluate a word in the Extended Lamplighter group.")
    ext.add_argument("--word", required=True, help="Word over a, x, t.")
    ext.add_argument("--json", help="Write the element as JSON ('-' for stdout).")
    ext.set_defaults(func=_cmd_ext)

    k = sub.add_parser("k", help="Star radius K swallowing the finite subgroup.")
    k.add_argument("--level", type=int, nargs="+", default=[1, 2], help="Levels n.")
    k.add_argument("--radius", type=int, default=None, help="Ambient ball radius.")
    k.add_argument("--json", help="Write the table as JSON ('-' for stdout).")
    k.set_defaults(func=_cmd_k)
    return parser


def _parse_args(argv=None):
    return _build_parser().parse_args(argv)


def main(argv=None) -> int:
    args = _parse_args(argv)

    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)-8s %(message)s",
        datefmt="%H:%M:%S",
    )

    try:
        return args.func(args)
    except OSError as err:
        logger.error(f"I/O error: {err}")
        return EXIT_IO
    except ValueError as err:
        logger.error(str(err))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
