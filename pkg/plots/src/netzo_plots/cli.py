"""``netzo-plot <spec-file>``: render one figure from experiment CSVs."""

import argparse
import sys

from .csvdata import SchemaError
from .render import render
from .specfile import SpecError, load_spec


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="netzo-plot",
        description="Render loss-curve, trajectory, or concentration figures "
                    "from netzo experiment CSVs.",
    )
    parser.add_argument("spec", help="plot spec file (kind, output, input.N, label.N)")
    parser.add_argument("--quiet", action="store_true")
    args = parser.parse_args(argv)
    try:
        spec = load_spec(args.spec)
        render(spec)
    except (SpecError, SchemaError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    if not args.quiet:
        print(spec.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
