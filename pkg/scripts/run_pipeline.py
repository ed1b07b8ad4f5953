#!/usr/bin/env python3
"""End-to-end desk run: generate, certify, estimate, and trace.

Writes all artifacts under out/pipeline (override with --out).  This is the
experiment driver for the doubling-power family; swap the config for other
growth bases.
"""

import argparse
import json
import sys
from pathlib import Path

from laminatron.cli import cmd_all


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="out/pipeline")
    ap.add_argument("--a", default="2")
    ap.add_argument("--prefix", type=int, default=7)
    args = ap.parse_args()
    cfg = {
        "a": args.a,
        "e0": 1,
        "n_powers": max(14, args.prefix + 4),
        "prefix": args.prefix,
        "check_upto": min(args.prefix, 6),
        "m": 2,
        "trace_m": 3,
        "windows": 6,
        "samples_per_window": 7,
    }
    print(json.dumps(cfg, indent=1, sort_keys=True))
    return cmd_all(cfg, Path(args.out))


if __name__ == "__main__":
    sys.exit(main())
