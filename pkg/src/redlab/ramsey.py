"""Finite Ramsey colourings, homogeneous-set search, and reductions of RT(n,k) to RT(n,2).

A colouring assigns a colour to every n-element subset of ``range(N)``; the
table is stored in the lexicographic order of ``itertools.combinations``.
"Infinite" homogeneous sets become sets of at least a declared size.

Three ways of getting a homogeneous set for a 4-colouring of pairs:

* :func:`rt24_via_two_rt22` -- halve the colours, solve, split by parity,
  solve again.  Two solver applications.
* :func:`classical_one_use_rt24` -- first decide by exhaustive search whether
  a large 2-mono set exists (the non-uniform *advice*), then make a single
  solver application.
* :func:`generalized_one_use` -- the same idea for k colours and exponent n,
  descending a hierarchy of colour classes halved at each level.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Callable, Iterator, Optional, Sequence

from .functionals import TrackedFunctional
from .problems import CountedSolver, Problem
from .reductions import Reduction, SeqInstance, seq_use2

MAX_EXPONENT = 3


class NotHomogeneous(ValueError):
    pass


class SolverFailure(RuntimeError):
    def __init__(self, stage, message: str):
        super().__init__(f"stage {stage}: {message}")
        self.stage = stage


class InsufficientSolution(SolverFailure):
    """The solver answered correctly but too small for the requested size."""


class AdviceContradiction(RuntimeError):
    """The solver produced a set the advice search certified does not exist."""

    def __init__(self, witness, message: str):
        super().__init__(message)
        self.witness = witness


def truncate_color(m: int, k: int) -> int:
    if k < 1:
        raise ValueError("k must be positive")
    return m if m < k else 0


@lru_cache(maxsize=None)
def subsets(N: int, n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.combinations(range(N), n))


@lru_cache(maxsize=None)
def subset_index(N: int, n: int) -> dict:
    return {s: i for i, s in enumerate(subsets(N, n))}


@lru_cache(maxsize=None)
def _pair_index(N: int) -> tuple[tuple[int, ...], ...]:
    idx = subset_index(N, 2)
    return tuple(tuple(idx.get((min(i, j), max(i, j)), -1) for j in range(N)) for i in range(N))


@dataclass(frozen=True)
class Coloring:
    n: int
    N: int
    k: int
    table: tuple

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))
        if not 1 <= self.n <= MAX_EXPONENT:
            raise ValueError(f"exponent {self.n} outside 1..{MAX_EXPONENT}")
        if self.k < 1 or self.N < 0:
            raise ValueError("need k >= 1 and N >= 0")
        if len(self.table) != comb(self.N, self.n):
            raise ValueError(f"table has {len(self.table)} entries, expected C({self.N},{self.n})")
        if any(not 0 <= c < self.k for c in self.table):
            raise ValueError(f"colour outside range({self.k})")

    def color(self, subset: Sequence[int]) -> int:
        if self.n == 2:
            i, j = subset
            return self.table[_pair_index(self.N)[i][j]]
        return self.table[subset_index(self.N, self.n)[tuple(sorted(subset))]]

    def oracle_view(self):
        return self.table, ("coloring", self.n, self.N, self.k)

    def to_json(self) -> dict:
        return {"n": self.n, "N": self.N, "k": self.k, "table": list(self.table)}

    @classmethod
    def from_json(cls, obj: dict) -> "Coloring":
        return cls(obj.get("n", 2), obj["N"], obj["k"], tuple(obj["table"]))

    @classmethod
    def from_function(cls, N: int, k: int, fn: Callable[[tuple], int], n: int = 2) -> "Coloring":
        """Colour each subset by ``fn``, truncating values outside ``range(k)`` to 0."""
        return cls(n, N, k, tuple(truncate_color(fn(s), k) for s in subsets(N, n)))

    @classmethod
    def constant(cls, N: int, k: int, c: int, n: int = 2) -> "Coloring":
        return cls(n, N, k, (c,) * comb(N, n))


def random_coloring(rng: random.Random, N: int, k: int, n: int = 2) -> Coloring:
    return Coloring(n, N, k, tuple(rng.randrange(k) for _ in range(comb(N, n))))


def all_colorings(N: int, k: int, n: int = 2) -> Iterator[Coloring]:
    for table in itertools.product(range(k), repeat=comb(N, n)):
        yield Coloring(n, N, k, table)


@dataclass(frozen=True)
class HomSet:
    vertices: tuple
    color: int

    def __len__(self):
        return len(self.vertices)

    def oracle_view(self):
        # colour first, then the elements, as in the formalised statement
        return (self.color,) + self.vertices, ("homset",)

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "color": self.color}


def is_homogeneous(c: Coloring, vertices: Sequence[int], color: int) -> bool:
    vertices = tuple(vertices)
    if any(b <= a for a, b in zip(vertices, vertices[1:])):
        return False
    if vertices and not (0 <= vertices[0] and vertices[-1] < c.N):
        return False
    return all(c.color(s) == color for s in itertools.combinations(vertices, c.n))


def homset(c: Coloring, vertices: Sequence[int], color: int | None = None) -> HomSet:
    """Checked constructor; the colour defaults to that of the first n-subset."""
    vertices = tuple(vertices)
    if color is None:
        if len(vertices) < c.n:
            raise NotHomogeneous("colour is undetermined for fewer than n vertices")
        color = c.color(vertices[: c.n])
    if not is_homogeneous(c, vertices, color):
        raise NotHomogeneous(f"{list(vertices)} is not homogeneous of colour {color}")
    return HomSet(vertices, color)


# --- search ----------------------------------------------------------------


def _adjacency(c: Coloring, allowed: frozenset) -> list[int]:
    adj = [0] * c.N
    for (i, j), col in zip(subsets(c.N, 2), c.table):
        if col in allowed:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return adj


def _initial(c: Coloring, allowed: frozenset) -> list[int]:
    if c.n == 1:
        return [v for v in range(c.N) if c.table[v] in allowed]
    return list(range(c.N))


def _narrow(c: Coloring, allowed: frozenset, current: tuple, v: int, cands: list[int]) -> list[int]:
    """Candidates w > v that keep current + (v, w) within the allowed colours."""
    if c.n == 1:
        return [w for w in cands if w > v]
    rests = list(itertools.combinations(current, c.n - 2))
    return [w for w in cands if w > v and all(c.color(r + (v, w)) in allowed for r in rests)]


def _search(c: Coloring, allowed: frozenset, target: int | None) -> tuple:
    """Lexicographically least set of size ``target`` whose n-subsets use only
    ``allowed`` colours, or the lexicographically least largest such set."""
    best: tuple = ()
    if c.n == 2:
        adj = _adjacency(c, allowed)

        def rec(cur: tuple, cand: int) -> bool:
            nonlocal best
            if len(cur) > len(best):
                best = cur
                if target is not None and len(cur) >= target:
                    return True
            goal = len(best) if target is None else target - 1
            while cand:
                if len(cur) + cand.bit_count() <= goal:
                    return False
                low = cand & -cand
                v = low.bit_length() - 1
                cand ^= low
                if rec(cur + (v,), cand & adj[v]):
                    return True
            return False

        rec((), (1 << c.N) - 1)
    else:

        def rec(cur: tuple, cands: list[int]) -> bool:
            nonlocal best
            if len(cur) > len(best):
                best = cur
                if target is not None and len(cur) >= target:
                    return True
            goal = len(best) if target is None else target - 1
            for idx, v in enumerate(cands):
                if len(cur) + len(cands) - idx <= goal:
                    return False
                if rec(cur + (v,), _narrow(c, allowed, cur, v, cands[idx + 1 :])):
                    return True
            return False

        rec((), _initial(c, allowed))
    if target is not None and len(best) < target:
        return ()
    return best


def _all_sets(c: Coloring, allowed: frozenset, min_size: int) -> Iterator[tuple]:
    def rec(cur: tuple, cands: list[int]):
        if len(cur) >= min_size:
            yield cur
        for idx, v in enumerate(cands):
            if len(cur) + len(cands) - idx < min_size:
                return
            yield from rec(cur + (v,), _narrow(c, allowed, cur, v, cands[idx + 1 :]))

    yield from rec((), _initial(c, allowed))


def homogeneous_sets(c: Coloring, min_size: int) -> Iterator[HomSet]:
    """Every homogeneous set of size >= ``min_size`` (>= n), ordered by vertices then colour."""
    min_size = max(min_size, c.n)
    found = [HomSet(v, col) for col in range(c.k) for v in _all_sets(c, frozenset((col,)), min_size)]
    return iter(sorted(found, key=lambda h: (h.vertices, h.color)))


def find_homogeneous(c: Coloring, m: int) -> Optional[HomSet]:
    """Lexicographically least homogeneous set of size m, ties broken by smallest colour."""
    if m < c.n:
        raise ValueError(f"size {m} below the exponent {c.n}")
    best = None
    for col in range(c.k):
        v = _search(c, frozenset((col,)), m)
        if v and (best is None or v < best.vertices):
            best = HomSet(v, col)
    return best


def max_homogeneous(c: Coloring) -> Optional[HomSet]:
    """A largest homogeneous set: lexicographically least, then smallest colour.

    This is the default RT(n,2) solver: a finite stand-in for "an infinite
    homogeneous set" is "as large a homogeneous set as exists".
    """
    best = None
    for col in range(c.k):
        v = _search(c, frozenset((col,)), None)
        if len(v) >= c.n and (best is None or (-len(v), v) < (-len(best), best.vertices)):
            best = HomSet(v, col)
    return best


def _checked_answer(c: Coloring, y, stage) -> HomSet:
    if y is None:
        raise SolverFailure(stage, "solver returned no solution")
    if not isinstance(y, HomSet) or not is_homogeneous(c, y.vertices, y.color):
        raise SolverFailure(stage, f"solver returned a non-homogeneous set {y!r}")
    return y


# --- two applications ------------------------------------------------------


def color_halving_forward(f: Coloring) -> Coloring:
    """Colour 1 where f > 1, else 0."""
    if f.n != 2:
        raise ValueError("colour halving is defined for pairs only")
    if f.k != 4:
        raise ValueError(f"expected a 4-colouring, got k={f.k}")
    return Coloring(2, f.N, 2, tuple(1 if a > 1 else 0 for a in f.table))


def parity_forward(f: Coloring, x) -> Coloring:
    """Parity of f on the pairs of x, indexed by positions in x."""
    xs = tuple(x.vertices if isinstance(x, HomSet) else x)
    if len(xs) < 2:
        raise ValueError("need at least two vertices")
    g1 = color_halving_forward(f)
    if not is_homogeneous(g1, xs, g1.color(xs[:2])):
        raise NotHomogeneous(f"{list(xs)} is not homogeneous for the halved colouring")
    return Coloring(2, len(xs), 2, tuple(f.color((xs[a], xs[b])) % 2 for a, b in subsets(len(xs), 2)))


def two_step_backward(x, y) -> tuple:
    """The elements of x at the positions listed in y."""
    xs = tuple(x.vertices if isinstance(x, HomSet) else x)
    ys = tuple(y.vertices if isinstance(y, HomSet) else y)
    if any(not 0 <= i < len(xs) for i in ys):
        raise IndexError(f"index outside the {len(xs)} elements of x")
    z = tuple(xs[i] for i in sorted(ys))
    if len(set(z)) != len(z):
        raise ValueError("repeated index")
    return z


def rt24_via_two_rt22(f: Coloring, solver: CountedSolver, m: int) -> HomSet:
    if f.n != 2:
        raise ValueError("pairs only")
    g1 = color_halving_forward(f)
    x = _checked_answer(g1, solver(g1), 1)
    if len(x) < 2:
        raise InsufficientSolution(1, f"homogeneous set of size {len(x)} cannot be split by parity")
    g2 = parity_forward(f, x)
    y = _checked_answer(g2, solver(g2), 2)
    z = two_step_backward(x, y)
    if len(z) < m:
        raise InsufficientSolution(2, f"result has {len(z)} < {m} elements")
    return homset(f, z)


# --- one application with advice ------------------------------------------


def find_2mono(f: Coloring, s: int) -> Optional[tuple[tuple, tuple[int, int]]]:
    """Largest set on which f uses at most two colours, if it has >= s elements.

    Ties: lexicographically least set, then least colour pair.  A set using one
    colour c is reported with the pair {c, (c+1) mod k}.
    """
    if s < 2:
        raise ValueError("s must be at least 2")
    best = None
    for a0, a1 in itertools.combinations(range(f.k), 2):
        v = _search(f, frozenset((a0, a1)), None)
        if best is None or (-len(v), v) < (-len(best[0]), best[0]):
            best = (v, (a0, a1))
    if best is None or len(best[0]) < s:
        return None
    x = best[0]
    used = sorted({f.color(p) for p in itertools.combinations(x, f.n)})
    if len(used) == 2:
        pair = (used[0], used[1])
    elif len(used) == 1:
        pair = tuple(sorted((used[0], (used[0] + 1) % f.k)))
    else:
        pair = best[1]
    return x, pair


def _advice_g(f: Coloring, x: tuple, split: Callable[[int], int]) -> Coloring:
    return Coloring(f.n, len(x), 2, tuple(split(f.color(tuple(x[i] for i in s))) for s in subsets(len(x), f.n)))


def classical_one_use_rt24(f: Coloring, solver: CountedSolver, s_advice: int, m: int) -> HomSet:
    """Either a 2-mono set of size >= s_advice exists (j=0) or not (j=1); one solver call either way."""
    if f.n != 2 or f.k != 4:
        raise ValueError("expects a 4-colouring of pairs")
    if s_advice < m:
        raise ValueError("s_advice must be at least m")
    advice = find_2mono(f, s_advice)
    if advice is not None:
        x, (a0, a1) = advice
        g = _advice_g(f, x, lambda col: 0 if col == a0 else 1)
        y = _checked_answer(g, solver(g), "j=0")
        z = two_step_backward(x, y)
        if len(z) < m:
            raise InsufficientSolution("j=0", f"result has {len(z)} < {m} elements")
        return homset(f, z, a0 if y.color == 0 else a1)
    x = tuple(range(f.N))
    g = _advice_g(f, x, lambda col: 0 if col <= 1 else 1)
    y = _checked_answer(g, solver(g), "j=1")
    if len(y) >= s_advice:
        raise AdviceContradiction(y, f"2-mono set {list(y.vertices)} of size {len(y)} >= {s_advice} after advice found none")
    raise InsufficientSolution("j=1", f"no 2-mono set of size {s_advice}; solver set has {len(y)} elements")


def _next_power_of_two(k: int) -> int:
    p = 1
    while p < k:
        p *= 2
    return p


def find_multimono(f: Coloring, c: int, s: int) -> Optional[tuple[tuple, tuple]]:
    """Largest set whose n-subsets use at most ``c`` colours, with a class of exactly
    ``c`` colours (padded cyclically modulo the next power of two), if of size >= s."""
    K = _next_power_of_two(f.k)
    best = None
    for cls in itertools.combinations(range(f.k), min(c, f.k)):
        v = _search(f, frozenset(cls), None)
        if best is None or (-len(v), v) < (-len(best[0]), best[0]):
            best = (v, cls)
    if best is None or len(best[0]) < s:
        return None
    x = best[0]
    used = sorted({f.color(p) for p in itertools.combinations(x, f.n)})
    if not used:
        return x, best[1]
    cls_set = set(used)
    nxt = used[-1]
    while len(cls_set) < c:
        nxt = (nxt + 1) % K
        cls_set.add(nxt)
    return x, tuple(sorted(cls_set))


def generalized_one_use(f: Coloring, solver: CountedSolver, s_advice: int, m: int) -> HomSet:
    """One RT(n,2) application for a k-colouring, after exhaustive advice.

    Colour classes have size K, K/2, ..., 2 where K is k rounded up to a power
    of two.  The advice is the smallest class size c for which a c-mono set of
    size >= s_advice exists (c = K always holds with the whole vertex set).
    That set's class is split in half, the solver is applied once, and the
    answer lies inside one half.  When c = 2 the half is a single colour.
    """
    if f.k < 2:
        raise ValueError("need at least two colours")
    if s_advice < m:
        raise ValueError("s_advice must be at least m")
    K = _next_power_of_two(f.k)
    x, cls = tuple(range(f.N)), tuple(range(K))
    c = K
    size = 2
    while size < K:
        found = find_multimono(f, size, s_advice)
        if found is not None:
            (x, cls), c = found, size
            break
        size *= 2
    lower = frozenset(cls[: c // 2])
    g = _advice_g(f, x, lambda col: 0 if col in lower else 1)
    y = _checked_answer(g, solver(g), f"c={c}")
    z = two_step_backward(x, y)
    if c == 2:
        if len(z) < m:
            raise InsufficientSolution(f"c={c}", f"result has {len(z)} < {m} elements")
        return homset(f, z, cls[y.color])
    if len(z) >= s_advice:
        raise AdviceContradiction(HomSet(z, y.color), f"{c // 2}-mono set of size {len(z)} >= {s_advice} after advice found none")
    raise InsufficientSolution(f"c={c}", f"no {c // 2}-mono set of size {s_advice}; solver set has {len(z)} elements")


# --- brute-force oracle ----------------------------------------------------


@dataclass
class OracleResult:
    N: int
    k: int
    m: int
    colorings: int
    without: int
    counterexample: Optional[Coloring]

    @property
    def all_have(self) -> bool:
        return self.without == 0

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "k": self.k,
            "m": self.m,
            "colorings": self.colorings,
            "without_homogeneous": self.without,
            "all_have": self.all_have,
            "counterexample": self.counterexample.to_json() if self.counterexample else None,
        }


def ramsey_oracle(N: int, m: int, k: int = 2) -> OracleResult:
    """Enumerate every k-colouring of the pairs of N vertices and count those
    without a homogeneous m-set; the first such colouring is kept."""
    count = without = 0
    first = None
    for c in all_colorings(N, k):
        count += 1
        if find_homogeneous(c, m) is None:
            without += 1
            first = first or c
    return OracleResult(N, k, m, count, without, first)


# --- problems and reductions -----------------------------------------------


def ramsey_problem(n: int, k: int, N: int, m: int) -> Problem:
    """Instances: k-colourings of n-subsets (any vertex count; ``N`` for enumeration).
    Solutions: homogeneous sets of size >= m."""

    def instance_valid(c) -> bool:
        return isinstance(c, Coloring) and c.n == n and c.k == k

    def is_solution(c, h) -> bool:
        return isinstance(h, HomSet) and len(h) >= m and is_homogeneous(c, h.vertices, h.color)

    def instances(N=N, **_):
        return all_colorings(N, k, n)

    def solutions(c, **_):
        return homogeneous_sets(c, m)

    return Problem(f"RT({n},{k})[m={m}]", instance_valid, is_solution, instances, solutions, {"N": N})


def _coloring_from_oracle(o) -> Coloring:
    _, n, N, k = o.meta
    return Coloring(n, N, k, o.read_all())


def _pair_color(o, z: tuple) -> int:
    _, _, N, _ = o.meta
    return o[_pair_index(N)[z[0]][z[1]]] if len(z) >= 2 else 0


@dataclass(frozen=True)
class _ParityStage:
    """Continuation of the two-step instance; a value, so equal inputs give equal images."""

    f: Coloring

    def __call__(self, so) -> Coloring:
        return parity_forward(self.f, so[0])


def two_step_reduction(N: int, m: int = 2) -> Reduction:
    """RT(2,4) reduced to two sequential uses of RT(2,2)."""
    if m < 2:
        raise ValueError("m must be at least 2")
    source = ramsey_problem(2, 4, N, m)
    target = seq_use2(ramsey_problem(2, 2, N, m))

    def forward(fo):
        f = _coloring_from_oracle(fo)
        kappa = TrackedFunctional("parity", _ParityStage(f))
        return SeqInstance(color_halving_forward(f), (kappa,))

    def backward(fo, so):
        z = two_step_backward(so[0], so[1])
        return HomSet(z, _pair_color(fo, z))

    return Reduction(
        TrackedFunctional("halve", forward),
        TrackedFunctional("reindex", backward, 2),
        source,
        target,
        "two-step",
    )


def one_use_reduction(N: int, m: int = 2, s_advice: int = 2) -> Reduction:
    """RT(2,4) reduced to a single use of RT(2,2), with advice computed by brute force."""
    source = ramsey_problem(2, 4, N, m)
    target = ramsey_problem(2, 2, N, m)

    def advice(f: Coloring):
        found = find_2mono(f, s_advice)
        if found is None:
            return tuple(range(f.N)), None
        return found

    def forward(fo):
        f = _coloring_from_oracle(fo)
        x, pair = advice(f)
        if pair is None:
            return _advice_g(f, x, lambda col: 0 if col <= 1 else 1)
        return _advice_g(f, x, lambda col: 0 if col == pair[0] else 1)

    def backward(fo, yo):
        f = _coloring_from_oracle(fo)
        x, _ = advice(f)
        y = yo.read_all()[1:]
        z = two_step_backward(x, y)
        return HomSet(z, f.color(z[:2]) if len(z) >= 2 else 0)

    return Reduction(
        TrackedFunctional("advice-split", forward),
        TrackedFunctional("advice-reindex", backward, 2),
        source,
        target,
        "one-use",
    )
