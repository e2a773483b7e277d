"""Command-line front end: count tables and optional lattice streams."""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from typing import Sequence

from .core import N_MAX
from .enumeration import MODES, EnumConfig, enumerate_lattices

logger = logging.getLogger("latticegen")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit code 2 with a one-line message
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _bounded(lo: int, hi: int | None = None):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if value < lo or (hi is not None and value > hi):
            rng = f"{lo}..{hi}" if hi is not None else f">= {lo}"
            raise argparse.ArgumentTypeError(f"{value} outside {rng}")
        return value

    return parse


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="latticegen", description="Count (and optionally list) unlabelled lattices up to a given size.")
    p.add_argument("--max-n", type=_bounded(2, N_MAX), required=True, help=f"largest lattice size, 2..{N_MAX}")
    p.add_argument("--mode", choices=MODES, default="all")
    p.add_argument("--threads", type=_bounded(1), default=os.cpu_count() or 1)
    p.add_argument("--emit", metavar="PATH", help="write one lattice record per line to PATH")
    p.add_argument("--counts-out", metavar="PATH", help="write the count table to PATH instead of stdout")
    p.add_argument("--seed-size", type=_bounded(2, N_MAX), help="size of the frontier handed out to workers")
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    if args.seed_size is not None and args.seed_size > args.max_n:
        parser.error(f"--seed-size {args.seed_size} exceeds --max-n {args.max_n}")

    emit_file = None
    try:
        if args.emit:
            emit_file = open(args.emit, "w", encoding="utf-8", newline="\n")
        sink = None
        if emit_file is not None:
            write = emit_file.write

            def sink(record: str) -> None:
                write(record + "\n")

        config = EnumConfig(args.max_n, args.mode, args.threads, args.seed_size, sink)
        t0 = time.perf_counter()
        table = enumerate_lattices(config)
        logger.info("%d lattices in %.2fs", table.total, time.perf_counter() - t0)
        text = table.to_tsv()
        if args.counts_out:
            with open(args.counts_out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
    except OSError as exc:
        print(f"latticegen: {exc}", file=sys.stderr)
        return 1
    finally:
        if emit_file is not None:
            emit_file.close()
    return 0


def main() -> None:
    sys.exit(run())
