"""Run the two-application pipeline on every 4-colouring of the pairs of N vertices."""

from __future__ import annotations

import argparse
import collections
import json
import time

from redlab import ramsey as R
from redlab.problems import counted


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=5)
    ap.add_argument("--m", type=int, default=2)
    args = ap.parse_args()
    t = time.perf_counter()
    outcomes = collections.Counter()
    sizes = collections.Counter()
    for f in R.all_colorings(args.N, 4):
        solver = counted(R.max_homogeneous)
        try:
            h = R.rt24_via_two_rt22(f, solver, args.m)
        except R.SolverFailure as exc:
            outcomes[f"failure at stage {exc.stage}"] += 1
            continue
        ok = solver.count == 2 and R.is_homogeneous(f, h.vertices, h.color)
        outcomes["ok" if ok else "wrong"] += 1
        sizes[len(h)] += 1
    out = {
        "N": args.N,
        "m": args.m,
        "outcomes": dict(outcomes),
        "output_sizes": {str(k): v for k, v in sorted(sizes.items())},
        "seconds": round(time.perf_counter() - t, 1),
    }
    print(json.dumps(out, sort_keys=True, indent=2))


if __name__ == "__main__":
    main()
