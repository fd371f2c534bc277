"""Finite-use defeat of backward maps for the path-or-escape problem.

The target problem is trivial, so a backward map ψ must answer every input u
from ψ(u, 0...) alone.  On an input u0 that follows a path of the tree, ψ
cannot claim an escape, so it must output a path.  It does so after reading
finitely many positions of u0; the all-zero continuation s0 of exactly those
positions forces the same output, and when the guessed path is not a path of
the tree that output fails on s0.

Trees whose paths are all extensions of a hidden secret stand in for trees
without computable paths: a ψ that reads k bits of the secret can only guess
the rest.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .functionals import DEFAULT_BUDGET, QueryOutOfRange, TrackedFunctional, evaluate
from .trees import (
    ExplicitTree,
    SecretPrefixTree,
    Tree,
    Verdict,
    binary_words,
    check_downward_closed,
    collapse,
    full_tree,
    mu_witness,
    path_failure_depth,
    q2_verdict,
    secret_prefix_tree,
    tree_from_json,
)

__all__ = [
    "Tree",
    "ExplicitTree",
    "SecretPrefixTree",
    "Verdict",
    "CounterWitness",
    "Survived",
    "check_downward_closed",
    "full_tree",
    "secret_prefix_tree",
    "tree_from_json",
    "q2_verdict",
    "probe",
    "guessing_backward",
    "honest_backward",
    "secret_trials",
]


@dataclass(frozen=True)
class CounterWitness:
    use: tuple
    s0: tuple
    v0: tuple
    failure_depth: int
    reason: str

    @property
    def k(self) -> int:
        return max(self.use) if self.use else -1

    def to_json(self) -> dict:
        return {
            "use": list(self.use),
            "s0": list(self.s0),
            "v0": list(self.v0),
            "failure_depth": self.failure_depth,
            "reason": self.reason,
        }

    def reverify(self, psi: TrackedFunctional, tree: Tree, depth: int, u0: Sequence[int], budget: int = DEFAULT_BUDGET) -> bool:
        """Independently recheck agreement on the use, the output, and the failed verdict."""
        if any(self.s0[p] != u0[p] for p in self.use):
            return False
        empty = (0,) * len(self.s0)
        if evaluate(psi, self.s0, empty, budget=budget)[0] != self.v0:
            return False
        return _verdict(self.s0, self.v0, tree, depth)[0] is Verdict.FAIL


@dataclass(frozen=True)
class Survived:
    use: tuple
    output: tuple | None
    note: str = ""

    def to_json(self) -> dict:
        return {"survived": True, "use": list(self.use), "output": None if self.output is None else list(self.output), "note": self.note}


def _verdict(u, v, tree, depth) -> tuple[Verdict, int]:
    """Verdict plus the depth at which the output fails (or -1)."""
    try:
        verdict = q2_verdict(u, v, tree, depth)
    except ValueError:
        return Verdict.FAIL, v[0] if v else 0
    if verdict is not Verdict.FAIL:
        return verdict, -1
    if v[0] == 0:
        return verdict, path_failure_depth(v, tree, depth)
    return verdict, v[0]


def probe(
    psi: TrackedFunctional,
    tree: Tree,
    u0_prefix: Sequence[int],
    depth: int,
    budget: int = DEFAULT_BUDGET,
) -> CounterWitness | Survived:
    """Run ψ on the path prefix u0 and on its all-zero continuation past ψ's use."""
    bits = collapse(u0_prefix)
    if any(bits[:i] not in tree for i in range(min(len(bits), depth) + 1)):
        raise ValueError("u0 prefix is not a path prefix of the tree")
    length = max(len(u0_prefix), depth + 1)
    u0 = tuple(u0_prefix) + (0,) * (length - len(u0_prefix))
    empty = (0,) * length
    try:
        v, use = evaluate(psi, u0, empty, budget=budget)
    except QueryOutOfRange:
        return Survived((), None, "ψ searched past the input: no witness that u0 leaves the tree")
    used = tuple(use.positions)
    verdict, at = _verdict(u0, v, tree, depth)
    if verdict is Verdict.FAIL:
        return CounterWitness(used, u0, tuple(v), at, "fails on u0 itself")
    k = max(used) if used else -1
    s0 = u0[: k + 1] + (0,) * (length - k - 1)
    try:
        v0, _ = evaluate(psi, s0, empty, budget=budget)
    except QueryOutOfRange:
        return Survived(used, tuple(v), "ψ searched past the continuation s0")
    verdict, at = _verdict(s0, v0, tree, depth)
    if verdict is Verdict.FAIL:
        return CounterWitness(used, s0, tuple(v0), at, "fails on the continuation s0")
    return Survived(used, tuple(v0), f"output {verdict.value} on s0")


def guessing_backward(use_cap: int, length: int) -> TrackedFunctional:
    """Read u(0..use_cap-1) and claim the path u(0), ..., u(use_cap-1), 0, 0, ..."""

    def compute(o, y):
        seen = tuple(collapse(o[i] for i in range(use_cap)))
        return ((0,) + seen + (0,) * length)[:length]

    return TrackedFunctional(f"guess-after-{use_cap}", compute, 2)


def honest_backward(tree: Tree, depth: int) -> TrackedFunctional:
    """A correct backward map at finite depth: an escape witness when there is one,
    otherwise the lexicographically least path of the tree."""
    path = next((w for w in binary_words(depth) if all(w[:i] in tree for i in range(depth + 1))), None)

    def compute(o, y):
        w = mu_witness(o.read_all(), tree, depth)
        if w is not None:
            return (w,) + (0,) * depth
        if path is None:
            raise ValueError("tree has no path of the declared depth")
        return (0,) + path

    return TrackedFunctional("honest", compute, 2)


@dataclass
class TrialStats:
    trials: int
    bits: int
    depth: int
    use_cap: int
    seed: int
    witnesses: int = 0
    reverified: int = 0
    samples: list = field(default_factory=list)

    @property
    def rate(self) -> float:
        return self.witnesses / self.trials if self.trials else 0.0

    @property
    def bound(self) -> float:
        return 1 - 2.0 ** -(self.bits - self.use_cap) if self.bits > self.use_cap else 0.0

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "secret_bits": self.bits,
            "depth": self.depth,
            "use_cap": self.use_cap,
            "seed": self.seed,
            "witnesses": self.witnesses,
            "reverified": self.reverified,
            "rate": self.rate,
            "information_bound": self.bound,
            "samples": self.samples,
        }


def secret_trials(trials: int, bits: int = 8, depth: int = 32, use_cap: int = 4, seed: int = 0, keep: int = 3) -> TrialStats:
    """Probe the guessing ψ against random secret-prefix trees.

    Each probe input is the secret followed by random bits, so it is a path
    of the tree.
    """
    rng = random.Random(seed)
    stats = TrialStats(trials, bits, depth, use_cap, seed)
    psi = guessing_backward(use_cap, depth + 1)
    for _ in range(trials):
        secret = tuple(rng.randint(0, 1) for _ in range(bits))
        tree = SecretPrefixTree(secret, depth)
        u0 = secret + tuple(rng.randint(0, 1) for _ in range(depth + 1 - bits))
        result = probe(psi, tree, u0, depth)
        if isinstance(result, CounterWitness):
            stats.witnesses += 1
            stats.reverified += result.reverify(psi, tree, depth, u0)
            if len(stats.samples) < keep:
                stats.samples.append({"secret": list(secret), **result.to_json()})
    return stats
