"""Command line entry point: ``dpdescent <subcommand> ...``.

Exit status: 0 on success, 2 on invalid input, 3 when a computation exceeds
its feasibility bound.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import FeasibilityError, ValidationError
from .jobs import dumps, job_from_dict, parse_job, run_job

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_FEASIBILITY = 3


def _json_arg(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"not valid JSON: {exc}") from None


def _lattice_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--degree", type=int, required=True, help="degree d = K^2, 1..9")
    p.add_argument("--kind", choices=("blowup", "product"), default="blowup")


def _generator_args(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--perm", type=_json_arg, action="append", default=[], metavar="JSON",
        help='line permutation, e.g. \'{"E1": "E2", "E2": "E1"}\' (repeatable)',
    )
    p.add_argument(
        "--matrix", type=_json_arg, action="append", default=[], metavar="JSON",
        help="integer matrix acting on column vectors, as nested lists (repeatable)",
    )
    p.add_argument("--swap", action="store_true", help="add the factor swap (product kind)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpdescent",
        description="Galois descent data for del Pezzo surfaces from the action on the Picard lattice.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="classify one Galois image")
    _lattice_args(p)
    _generator_args(p)

    p = sub.add_parser("survey", help="classify every conjugacy class of subgroups of W")
    _lattice_args(p)
    p.add_argument("--max-subgroup-order", type=int, default=None, metavar="N")

    p = sub.add_parser("lines", help="enumerate the exceptional classes")
    _lattice_args(p)

    p = sub.add_parser("h1", help="H^1 of a Galois image on the Picard lattice")
    _lattice_args(p)
    _generator_args(p)

    p = sub.add_parser("degeneracy", help="degeneracy quintic of a pencil of quadrics in five variables")
    p.add_argument("--q0", type=_json_arg, required=True, metavar="JSON", help="symmetric 5x5 integer matrix")
    p.add_argument("--q1", type=_json_arg, required=True, metavar="JSON", help="symmetric 5x5 integer matrix")

    p = sub.add_parser("run", help="run a JSON job document ('-' for stdin)")
    p.add_argument("job", metavar="FILE")

    for name, sp in sub.choices.items():
        sp.add_argument("--out", default=None, metavar="PATH", help="write the report here instead of stdout")
    return parser


def _job_doc(args: argparse.Namespace) -> dict:
    doc: dict = {"mode": args.command}
    if args.command == "degeneracy":
        doc["q0"], doc["q1"] = args.q0, args.q1
        return doc
    doc["degree"], doc["kind"] = args.degree, args.kind
    if args.command in ("analyze", "h1"):
        gens: list = [{"perm": p} for p in args.perm] + [{"matrix": m} for m in args.matrix]
        if args.swap:
            gens.append("swap")
        doc["generators"] = gens
    if args.command == "survey" and args.max_subgroup_order is not None:
        doc["options"] = {"max_order": args.max_subgroup_order}
    return doc


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            text = sys.stdin.read() if args.job == "-" else open(args.job, encoding="utf-8").read()
            job = parse_job(text)
        else:
            job = job_from_dict(_job_doc(args))
        out = args.out or job.out
        text = dumps(run_job(job))
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FeasibilityError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_FEASIBILITY
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
