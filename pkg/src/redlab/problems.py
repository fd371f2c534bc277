"""Problems as instance/solution relations over finite encodings, plus counted solvers."""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Sequence

from .trees import Tree, mu_witness, q2_verdict

__all__ = [
    "Problem",
    "CountedSolver",
    "counted",
    "words",
    "check_word",
    "trivial_problem",
    "path_problem",
    "mu_witness",
]


def words(length: int, bound: int) -> Iterator[tuple[int, ...]]:
    """All words of ``length`` over ``range(bound)`` in lexicographic order."""
    return itertools.product(range(bound), repeat=length)


def check_word(w: Sequence[int], length: int, bound: int) -> bool:
    return len(w) == length and all(isinstance(a, int) and 0 <= a < bound for a in w)


@dataclass(frozen=True)
class Problem:
    name: str
    instance_valid: Callable[[Any], bool]
    is_solution: Callable[[Any, Any], bool]
    instances: Callable[..., Iterable] = field(repr=False)
    solutions: Callable[..., Iterable] = field(repr=False)
    params: dict = field(default_factory=dict, compare=False)

    def enumerate_instances(self, **overrides) -> Iterator:
        return iter(self.instances(**{**self.params, **overrides}))

    def enumerate_solutions(self, instance, **overrides) -> Iterator:
        return iter(self.solutions(instance, **{**self.params, **overrides}))


class CountedSolver:
    """Forwards to ``solver`` and counts invocations; the count is what "one use" means."""

    def __init__(self, solver: Callable[[Any], Any]):
        self.solver = solver
        self._count = 0
        self._lock = threading.Lock()

    def __call__(self, instance):
        with self._lock:
            self._count += 1
        return self.solver(instance)

    @property
    def count(self) -> int:
        return self._count

    def __repr__(self):
        return f"CountedSolver({self.solver!r}, count={self._count})"


def counted(solver: Callable[[Any], Any]) -> CountedSolver:
    return CountedSolver(solver)


def trivial_problem(length: int = 1, bound: int = 2, solution_length: int = 1, solution_bound: int = 2) -> Problem:
    """Every word is an instance and every word solves every instance."""

    def instances(L=length, B=bound, **_):
        return words(L, B)

    def solutions(x, SL=solution_length, SB=solution_bound, **_):
        return words(SL, SB)

    return Problem(
        "trivial",
        lambda x: True,
        lambda x, y: True,
        instances,
        solutions,
        {"L": length, "B": bound, "SL": solution_length, "SB": solution_bound},
    )


def path_problem(tree: Tree, depth: int, bound: int = 2) -> Problem:
    """Every input is valid; a solution is either a path through ``tree`` (v(0)=0)
    or a positive escape witness that the input leaves the tree (v(0)>0).

    Instances are words of length depth+1 over ``range(bound)``; solutions are
    words of length depth+1 over ``range(depth + 2)``.
    """

    def is_solution(u, v) -> bool:
        if v and v[0] > depth:
            raise ValueError(f"v(0)={v[0]} exceeds the depth bound {depth}")
        return q2_verdict(u, v, tree, depth).ok

    def instances(B=bound, **_):
        return words(depth + 1, B)

    def solutions(u, **_):
        # escape witnesses first; then every path word
        for v0 in range(1, depth + 1):
            if q2_verdict(u, (v0,) + (0,) * depth, tree, depth).ok:
                for rest in words(depth, depth + 2):
                    yield (v0,) + rest
        for rest in words(depth, 2):
            if q2_verdict(u, (0,) + rest, tree, depth).ok:
                yield (0,) + rest

    return Problem(
        f"path[{type(tree).__name__},D={depth}]",
        lambda u: True,
        is_solution,
        instances,
        solutions,
        {"D": depth, "B": bound},
    )
