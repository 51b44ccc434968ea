import argparse
import sys

from .plots import KINDS, plot


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figplots",
        description="Render figures from treescope CSV reports.",
    )
    parser.add_argument("kind", choices=sorted(KINDS), help="figure kind")
    parser.add_argument("csv", help="input CSV report")
    parser.add_argument("-o", "--output", required=True, help="output image file")
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        plot(args.kind, args.csv, args.output)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())
