"""Expected-area table for the convex, star and topological hulls.

    python scripts/reproduce_table1.py                 # desk scale, minutes
    python scripts/reproduce_table1.py --preset paper  # hours to days

Writes the JSON document to results/table1_<preset>.json and prints the
human-readable table to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from diskhull.cli import main


def run():
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--preset", choices=["desk", "paper"], default="desk")
    parser.add_argument("--workers", type=int)
    parser.add_argument("--outdir", default="results")
    args = parser.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    argv = ["table1", "--preset", args.preset, "--out", str(out / f"table1_{args.preset}.json")]
    if args.workers:
        argv += ["--workers", str(args.workers)]
    return main(argv)


if __name__ == "__main__":
    sys.exit(run())
