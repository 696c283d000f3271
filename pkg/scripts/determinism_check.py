"""Run one simulate command under several worker counts and report whether
the numeric payloads of the result documents are identical.

Flags after ``--`` are passed through to ``diskhull simulate``."""

from __future__ import annotations

import argparse
import json
import sys
import tempfile
from pathlib import Path

from diskhull.cli import SIMULATE_TARGETS, main
from diskhull.report import ResultDocument


def run():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("which", choices=SIMULATE_TARGETS)
    parser.add_argument("--workers", type=int, nargs="+", default=[1, 4, 8])
    argv = sys.argv[1:]
    cut = argv.index("--") if "--" in argv else len(argv)
    args = parser.parse_args(argv[:cut])
    extra = argv[cut + 1:]
    payloads = {}
    with tempfile.TemporaryDirectory() as tmp:
        for w in args.workers:
            out = Path(tmp) / f"w{w}.json"
            main(["simulate", args.which, "-q", "--workers", str(w), "--out", str(out), *extra])
            payloads[w] = ResultDocument.from_json(out.read_text()).numeric_payload()
    first = payloads[args.workers[0]]
    same = all(p == first for p in payloads.values())
    print(json.dumps({"identical": same, "workers": args.workers}))
    return 0 if same else 1


if __name__ == "__main__":
    sys.exit(run())
