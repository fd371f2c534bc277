"""Computations that see their inputs only through instrumented oracles.

Every positional input of a :class:`TrackedFunctional` is wrapped in an
:class:`Oracle`.  Each query costs one step of a shared budget and is
recorded, so an evaluation returns its output together with its *use*: the
finite set of input positions it actually looked at.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from .trees import Tree, collapse

DEFAULT_BUDGET = 100_000


class BudgetExhausted(RuntimeError):
    pass


class QueryOutOfRange(IndexError):
    pass


class ArityMismatch(ValueError):
    pass


class Budget:
    def __init__(self, steps: int):
        self.remaining = steps

    def spend(self, n: int = 1) -> None:
        self.remaining -= n
        if self.remaining < 0:
            raise BudgetExhausted("step budget exhausted")


def oracle_view(value) -> tuple[tuple, Any]:
    """The indexable content of ``value`` and its public shape metadata."""
    if hasattr(value, "oracle_view"):
        return value.oracle_view()
    if isinstance(value, (tuple, list)):
        return tuple(value), None
    return (value,), "opaque"


class Oracle:
    __slots__ = ("data", "meta", "budget", "answers")

    def __init__(self, value, budget: Budget):
        self.data, self.meta = oracle_view(value)
        self.budget = budget
        self.answers: dict[int, Any] = {}

    def __getitem__(self, i: int):
        self.budget.spend()
        if not isinstance(i, int) or not 0 <= i < len(self.data):
            raise QueryOutOfRange(f"query {i!r} outside an input of length {len(self.data)}")
        a = self.data[i]
        self.answers[i] = a
        return a

    def __len__(self) -> int:
        return len(self.data)

    def tick(self, n: int = 1) -> None:
        self.budget.spend(n)

    def read_all(self) -> tuple:
        return tuple(self[i] for i in range(len(self.data)))


@dataclass(frozen=True)
class UseRecord:
    answers: tuple  # one {position: value} dict per input

    @property
    def positions(self) -> list[int]:
        return self.positions_of(0)

    def positions_of(self, i: int) -> list[int]:
        return sorted(self.answers[i]) if i < len(self.answers) else []

    @property
    def size(self) -> int:
        return len(self.answers[0]) if self.answers else 0

    def to_json(self) -> list[list[int]]:
        return [sorted(a) for a in self.answers]


def _freeze(value):
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    return value


@dataclass(frozen=True)
class TrackedFunctional:
    name: str
    compute: Callable[..., Any]
    arity: int = 1

    def __call__(self, *args, budget: int = DEFAULT_BUDGET):
        return evaluate(self, *args, budget=budget)[0]


def evaluate(f: TrackedFunctional, *args, budget: int = DEFAULT_BUDGET) -> tuple[Any, UseRecord]:
    if budget <= 0:
        raise ValueError("budget must be positive")
    if len(args) != f.arity:
        raise ArityMismatch(f"{f.name} takes {f.arity} input(s), got {len(args)}")
    shared = Budget(budget)
    oracles = [Oracle(a, shared) for a in args]
    out = _freeze(f.compute(*oracles))
    return out, UseRecord(tuple(dict(o.answers) for o in oracles))


def agrees_on_use(args: Sequence, use: UseRecord) -> bool:
    for value, answers in zip(args, use.answers):
        data, _ = oracle_view(value)
        if any(p >= len(data) or data[p] != a for p, a in answers.items()):
            return False
    return True


def consistency_check(f: TrackedFunctional, u, u_prime, budget: int = DEFAULT_BUDGET) -> bool:
    """Re-evaluate on ``u_prime``, which must agree with ``u`` on the recorded use.

    For a functional of several inputs pass ``u`` and ``u_prime`` as tuples.
    """
    args = (u,) if f.arity == 1 else tuple(u)
    args_prime = (u_prime,) if f.arity == 1 else tuple(u_prime)
    out, use = evaluate(f, *args, budget=budget)
    if not agrees_on_use(args_prime, use):
        raise ValueError("second input does not agree with the first on the recorded use")
    if any(oracle_view(a)[1] != oracle_view(b)[1] for a, b in zip(args, args_prime)):
        raise ValueError("inputs differ in shape")
    return evaluate(f, *args_prime, budget=budget) == (out, use)


def as_reduction_pair(forward: TrackedFunctional, backward: TrackedFunctional, source, target, name: str = ""):
    """Package (forward, backward) as a :class:`~redlab.reductions.Reduction` from ``source`` to ``target``."""
    from .reductions import Reduction

    if forward.arity != 1:
        raise ArityMismatch(f"forward map {forward.name} must take one input, takes {forward.arity}")
    if backward.arity != 2:
        raise ArityMismatch(f"backward map {backward.name} must take two inputs, takes {backward.arity}")
    return Reduction(forward, backward, source, target, name or f"({forward.name}, {backward.name})")


# --- combinators -----------------------------------------------------------


def constant(word: Sequence, arity: int = 1, name: str = "") -> TrackedFunctional:
    word = tuple(word)
    return TrackedFunctional(name or f"const{list(word)}", lambda *o: word, arity)


def identity() -> TrackedFunctional:
    return TrackedFunctional("id", lambda o: o.read_all())


def second() -> TrackedFunctional:
    """(u, y) -> y, the backward map of an identity reduction."""
    return TrackedFunctional("snd", lambda o, y: y.read_all(), 2)


def read(i: int) -> TrackedFunctional:
    return TrackedFunctional(f"read{i}", lambda o: (o[i],))


def window(start: int, length: int) -> TrackedFunctional:
    return TrackedFunctional(f"window{start}+{length}", lambda o: tuple(o[start + j] for j in range(length)))


def pointwise(fn: Callable[[int], int], positions: Sequence[int], name: str = "map") -> TrackedFunctional:
    positions = tuple(positions)
    return TrackedFunctional(f"{name}{list(positions)}", lambda o: tuple(fn(o[p]) for p in positions))


def search(pred: Callable[[int], bool], limit: int, name: str = "search") -> TrackedFunctional:
    """Least i < limit with pred(u(i)), else limit."""

    def compute(o):
        for i in range(limit):
            o.tick()
            if pred(o[i]):
                return (i,)
        return (limit,)

    return TrackedFunctional(f"{name}<{limit}", compute)


def branch(i: int, if_zero: TrackedFunctional, otherwise: TrackedFunctional) -> TrackedFunctional:
    def compute(o):
        chosen = if_zero if o[i] == 0 else otherwise
        return tuple(chosen.compute(o))

    return TrackedFunctional(f"branch{i}({if_zero.name}|{otherwise.name})", compute)


def concat(*parts: TrackedFunctional) -> TrackedFunctional:
    def compute(o):
        out: tuple = ()
        for p in parts:
            out += tuple(p.compute(o))
        return out

    return TrackedFunctional("concat(" + ", ".join(p.name for p in parts) + ")", compute)


def postcompose(h: Callable[[tuple], tuple], f: TrackedFunctional, name: str = "h") -> TrackedFunctional:
    return TrackedFunctional(f"{name}.{f.name}", lambda *o: tuple(h(tuple(f.compute(*o)))), f.arity)


def ignore_second(f: TrackedFunctional) -> TrackedFunctional:
    """Lift a one-input functional to (u, y) -> f(u)."""
    return TrackedFunctional(f"{f.name}∘fst", lambda o, y: f.compute(o), 2)


def mu_backward(tree: Tree, length: int) -> TrackedFunctional:
    """(u, y) -> the constant word 1 + least m with <u(0),...,u(m)> outside ``tree``.

    Every output position searches afresh; the search is unbounded and runs off
    the end of the input when ``u`` stays inside the tree.
    """

    def witness(o) -> int:
        bits: list[int] = []
        m = 0
        while True:
            bits.append(collapse((o[m],))[0])
            if tuple(bits) not in tree:
                return 1 + m
            m += 1

    return TrackedFunctional("mu-witness", lambda o, y: tuple(witness(o) for _ in range(length)), 2)


def random_functional(rng: random.Random, length: int, depth: int = 3) -> TrackedFunctional:
    """A random one-input functional over words of ``length`` built from the combinators above."""
    kinds = ["const", "read", "window", "map", "search"]
    if depth > 0:
        kinds += ["branch", "concat", "post"]
    kind = rng.choice(kinds)
    if kind == "const":
        return constant([rng.randrange(4) for _ in range(rng.randint(0, 3))])
    if kind == "read":
        return read(rng.randrange(length))
    if kind == "window":
        start = rng.randrange(length)
        return window(start, rng.randint(0, length - start))
    if kind == "map":
        a, b = rng.randint(1, 3), rng.randrange(5)
        return pointwise(lambda x, a=a, b=b: (a * x + b) % 7, rng.sample(range(length), rng.randint(1, length)), f"aff{a},{b}")
    if kind == "search":
        t = rng.randrange(3)
        return search(lambda x, t=t: x == t, rng.randint(1, length), f"eq{t}")
    if kind == "branch":
        return branch(rng.randrange(length), random_functional(rng, length, depth - 1), random_functional(rng, length, depth - 1))
    if kind == "concat":
        return concat(*(random_functional(rng, length, depth - 1) for _ in range(rng.randint(2, 3))))
    return postcompose(lambda w: tuple(reversed(w)) + (len(w),), random_functional(rng, length, depth - 1), "rev")
