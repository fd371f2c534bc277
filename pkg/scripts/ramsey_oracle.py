"""Count k-colourings of pairs with no homogeneous m-set, for a range of vertex counts."""

from __future__ import annotations

import argparse
import json
import time

from redlab.ramsey import ramsey_oracle


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-N", type=int, default=6)
    ap.add_argument("--m", type=int, default=3)
    ap.add_argument("--k", type=int, default=2)
    args = ap.parse_args()
    rows = []
    for N in range(args.m, args.max_N + 1):
        t = time.perf_counter()
        res = ramsey_oracle(N, args.m, args.k)
        rows.append({**res.to_json(), "seconds": round(time.perf_counter() - t, 2)})
        print(f"N={N}: {res.without}/{res.colorings} without a homogeneous {args.m}-set")
    print(json.dumps(rows, sort_keys=True, indent=2))


if __name__ == "__main__":
    main()
