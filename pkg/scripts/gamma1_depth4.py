"""Compare the Gamma1 and exists-free classifiers with the generative oracle on all formulas of depth <= 4.

About three million formulas; expect several minutes and a few GB of memory.
"""

from __future__ import annotations

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from oracles import formula_layers  # noqa: E402

from redlab.formula import is_exists_free, is_gamma1, to_text  # noqa: E402


def main():
    depth = int(sys.argv[1]) if len(sys.argv) > 1 else 4
    t = time.perf_counter()
    formulas, ef, gamma = formula_layers(depth)
    bad = 0
    for f in formulas:
        if is_gamma1(f) != (f in gamma) or is_exists_free(f) != (f in ef):
            bad += 1
            if bad <= 5:
                print("disagreement:", to_text(f))
    print(f"{len(formulas)} formulas of depth <= {depth}: {bad} disagreements ({time.perf_counter() - t:.0f}s)")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
