"""Command line: ``cfxsim run|validate|list-presets``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import scenario as sc

EXIT_OK, EXIT_RUNTIME, EXIT_PARSE, EXIT_INVALID = 0, 1, 2, 3


def _load(source, overrides=()):
    raw, name, base = sc.load_raw(source)
    raw = sc.apply_overrides(raw, overrides)
    return sc.from_raw(raw, name, base)


def cmd_run(args) -> int:
    try:
        scen = _load(args.scenario, args.override)
    except sc.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.seed is not None:
        scen.seed = args.seed
    problems = sc.validate(scen)
    if problems:
        for d in problems:
            print(f"invalid: {d}", file=sys.stderr)
        return EXIT_INVALID
    try:
        meta = sc.execute(scen, Path(args.out) if args.out else None)
    except Exception as exc:  # noqa: BLE001
        logging.getLogger(__name__).debug("run failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    for name in meta["outputs"]:
        print(name)
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        scen = _load(args.scenario)
    except sc.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    problems = sc.validate(scen)
    for d in problems:
        print(d)
    return EXIT_INVALID if problems else EXIT_OK


def cmd_list(args) -> int:
    for name in sc.preset_names():
        print(name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cfxsim", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario file or bundled preset")
    run.add_argument("scenario")
    run.add_argument("--seed", type=int)
    run.add_argument("--out", help="output directory (default out/<name>)")
    run.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                     help="dotted scenario key, e.g. params.num_nodes=50")
    run.set_defaults(func=cmd_run)

    val = sub.add_parser("validate", help="report schema and range problems")
    val.add_argument("scenario")
    val.set_defaults(func=cmd_validate)

    ls = sub.add_parser("list-presets", help="list bundled presets")
    ls.set_defaults(func=cmd_list)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
