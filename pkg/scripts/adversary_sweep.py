"""Counter-witness rate of the guessing backward map as its use cap varies, against the information bound."""

from __future__ import annotations

import argparse
import json

from redlab.adversary import secret_trials


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--bits", type=int, default=8)
    ap.add_argument("--depth", type=int, default=32)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rows = []
    for cap in range(args.bits + 2):
        s = secret_trials(args.trials, args.bits, args.depth, cap, args.seed, keep=0)
        rows.append({"use_cap": cap, "rate": s.rate, "bound": s.bound, "reverified": s.reverified == s.witnesses})
        print(f"use cap {cap:2d}: rate {s.rate:.4f}  bound {s.bound:.4f}")
    print(json.dumps(rows, sort_keys=True, indent=2))


if __name__ == "__main__":
    main()
