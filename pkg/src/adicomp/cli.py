"""Command line front end: ``adicomp --gallery Z-at-2 --format json``."""
from __future__ import annotations

import argparse
import os
import sys
from importlib import resources
from typing import List, Optional

from .dsl import parse_scenario
from .expr import ParseError
from .report import emit, exit_code, run_scenario


def gallery_names() -> List[str]:
    files = resources.files("adicomp") / "gallery"
    return sorted(p.name[:-4] for p in files.iterdir() if p.name.endswith(".scn"))


def gallery_text(name: str) -> str:
    for n in gallery_names():
        if n.lower() == name.lower():
            return (resources.files("adicomp") / "gallery" / f"{n}.scn").read_text(encoding="utf-8")
    raise KeyError(f"no gallery scenario {name!r}; available: {', '.join(gallery_names())}")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adicomp", description="Run adic completion scenarios and print certified verdicts.")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--scenario", metavar="PATH", help="scenario file")
    src.add_argument("--gallery", metavar="NAME", help="shipped example scenario")
    src.add_argument("--list-gallery", action="store_true", help="list shipped scenarios and exit")
    p.add_argument("--depth", type=int, help="override the depth of every task")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--strict", action="store_true", help="stop at the first task error; exit 2 on any failure verdict")
    p.add_argument("--timing", action="store_true", help="record wall-clock time per task")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = _parser().parse_args(argv)
    if args.list_gallery:
        print("\n".join(gallery_names()))
        return 0
    if args.depth is not None and args.depth < 2:
        print("adicomp: error: --depth must be at least 2", file=sys.stderr)
        return 1
    try:
        if args.scenario:
            label = args.scenario
            with open(args.scenario, encoding="utf-8") as fh:
                text = fh.read()
            name = os.path.splitext(os.path.basename(args.scenario))[0]
        else:
            text = gallery_text(args.gallery)
            name = label = next(n for n in gallery_names() if n.lower() == args.gallery.lower())
    except (OSError, KeyError) as exc:
        print(f"adicomp: error: {exc}", file=sys.stderr)
        return 1
    try:
        scn = parse_scenario(text)
    except ParseError as exc:
        print(f"{label}:{exc.line}:{exc.col}: error: {exc.message}", file=sys.stderr)
        return 1
    try:
        report = run_scenario(scn, name, depth=args.depth, strict=args.strict, timing=args.timing)
    except Exception as exc:
        print(f"adicomp: error while building declarations: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    color = args.format == "text" and sys.stdout.isatty() and "NO_COLOR" not in os.environ
    try:
        text_out = emit(report, args.format, args.out, color=color)
    except OSError as exc:
        print(f"adicomp: error: cannot write report: {exc}", file=sys.stderr)
        return 1
    if not args.out:
        sys.stdout.write(text_out)
    return exit_code(report, args.strict)


if __name__ == "__main__":
    sys.exit(main())
