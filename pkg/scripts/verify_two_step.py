"""Check both reduction clauses for the two-step reduction, quantifying over every solution pair.

At N=5 the full space is 4^10 colourings and takes hours on one core; use
--sample for a seeded subset or --jobs to spread the work.
"""

from __future__ import annotations

import argparse
import json
import time

from redlab import ramsey as R
from redlab.reductions import verify


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=5)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--sample", type=int)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--one-use", action="store_true", help="verify the advice-based single-use reduction instead")
    args = ap.parse_args()
    r = R.one_use_reduction(args.N, args.m, args.m) if args.one_use else R.two_step_reduction(args.N, args.m)
    t = time.perf_counter()
    rep = verify(r, sample=args.sample, seed=args.seed, jobs=args.jobs)
    out = {**rep.to_json(), "reduction": r.name, "seconds": round(time.perf_counter() - t, 1)}
    print(json.dumps(out, sort_keys=True, indent=2))
    raise SystemExit(0 if rep.passed else 1)


if __name__ == "__main__":
    main()
