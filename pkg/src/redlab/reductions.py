"""Weihrauch-style reductions between problems: verification, composition, sequential use.

A reduction of Q to P is a forward map taking Q-instances to P-instances and
a backward map taking (Q-instance, P-solution) to a Q-solution.  It is
correct when, for every Q-instance u,

* q1(u) implies p1(forward(u)), and
* for every y with p2(forward(u), y), q2(u, backward(u, y)) holds.

:func:`verify` checks both clauses over the enumerated spaces, quantifying
over *all* enumerated solutions y rather than solver-produced ones.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .functionals import (
    DEFAULT_BUDGET,
    BudgetExhausted,
    Oracle,
    QueryOutOfRange,
    TrackedFunctional,
    evaluate,
    identity,
    second,
)
from .problems import CountedSolver, Problem, counted


class ProblemMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Reduction:
    forward: TrackedFunctional
    backward: TrackedFunctional
    source: Problem
    target: Problem
    name: str = ""


def identity_reduction(problem: Problem) -> Reduction:
    return Reduction(identity(), second(), problem, problem, f"id[{problem.name}]")


def to_jsonable(value):
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, (tuple, list)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (int, float, str, bool)) or value is None:
        return value
    return repr(value)


@dataclass
class VerificationReport:
    source: str
    target: str
    params: dict
    seed: int | None
    exhaustive: bool
    checked: int = 0
    backward_checked: int = 0
    forward_failures: list = field(default_factory=list)
    backward_failures: list = field(default_factory=list)
    max_use: int = 0

    @property
    def passed(self) -> bool:
        return not self.forward_failures and not self.backward_failures

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "params": to_jsonable(self.params),
            "seed": self.seed,
            "exhaustive": self.exhaustive,
            "checked": self.checked,
            "forward_failures": self.forward_failures,
            "backward_failures": self.backward_failures,
            "max_use": self.max_use,
            "counter": self.backward_checked,
            "passed": self.passed,
        }


def _sort_key(entry: dict) -> str:
    return json.dumps(entry, sort_keys=True)


def _check_instance(r: Reduction, u, budget: int):
    """Both clauses for one Q-instance; returns (forward failures, backward failures, checks, max use)."""
    fwd: list = []
    bwd: list = []
    if not r.source.instance_valid(u):
        return fwd, bwd, 0, 0
    try:
        x, use = evaluate(r.forward, u, budget=budget)
    except (BudgetExhausted, QueryOutOfRange) as exc:
        fwd.append({"instance": to_jsonable(u), "error": f"{type(exc).__name__}: {exc}"})
        return fwd, bwd, 0, 0
    max_use = use.size
    if not r.target.instance_valid(x):
        fwd.append({"instance": to_jsonable(u), "image": to_jsonable(x), "use": use.to_json()})
        return fwd, bwd, 0, max_use
    checks = 0
    for y in r.target.enumerate_solutions(x):
        if not r.target.is_solution(x, y):
            continue
        checks += 1
        entry = {"instance": to_jsonable(u), "solution": to_jsonable(y)}
        try:
            v, buse = evaluate(r.backward, u, y, budget=budget)
        except (BudgetExhausted, QueryOutOfRange) as exc:
            bwd.append({**entry, "error": f"{type(exc).__name__}: {exc}"})
            continue
        max_use = max(max_use, buse.size)
        try:
            ok = r.source.is_solution(u, v)
        except ValueError as exc:
            bwd.append({**entry, "output": to_jsonable(v), "error": str(exc)})
            continue
        if not ok:
            bwd.append({**entry, "output": to_jsonable(v), "use": buse.to_json()})
    return fwd, bwd, checks, max_use


def verify(
    r: Reduction,
    params: dict | None = None,
    sample: int | None = None,
    seed: int | None = None,
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
    instances: Sequence | None = None,
) -> VerificationReport:
    """Check both reduction clauses on every enumerated source instance.

    With ``sample`` set, ``sample`` instances are drawn from the enumeration
    using ``random.Random(seed)`` and the report is marked non-exhaustive.
    ``params`` override the source problem's enumeration parameters.
    """
    params = dict(params or {})
    pool = list(instances) if instances is not None else list(r.source.enumerate_instances(**params))
    exhaustive = sample is None or sample >= len(pool)
    if not exhaustive:
        seed = 0 if seed is None else seed
        rng = random.Random(seed)
        pool = [pool[i] for i in sorted(rng.sample(range(len(pool)), sample))]
    report = VerificationReport(r.source.name, r.target.name, params, seed, exhaustive)

    def run(chunk):
        return [_check_instance(r, u, budget) for u in chunk]

    if jobs > 1 and len(pool) > 1:
        size = -(-len(pool) // jobs)
        chunks = [pool[i : i + size] for i in range(0, len(pool), size)]
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            results = [res for part in ex.map(run, chunks) for res in part]
    else:
        results = run(pool)
    for fwd, bwd, checks, use in results:
        report.checked += 1
        report.backward_checked += checks
        report.forward_failures.extend(fwd)
        report.backward_failures.extend(bwd)
        report.max_use = max(report.max_use, use)
    report.forward_failures.sort(key=_sort_key)
    report.backward_failures.sort(key=_sort_key)
    return report


def compose(r1: Reduction, r2: Reduction) -> Reduction:
    """From Q <= P and P <= S build Q <= S."""
    if r1.target is not r2.source and r1.target.name != r2.source.name:
        raise ProblemMismatch(f"cannot compose: {r1.target.name} is not {r2.source.name}")

    def forward(uo):
        x = r1.forward.compute(uo)
        return r2.forward.compute(Oracle(x, uo.budget))

    def backward(uo, yo):
        x = r1.forward.compute(uo)
        w = r2.backward.compute(Oracle(x, uo.budget), yo)
        return r1.backward.compute(uo, Oracle(w, uo.budget))

    return Reduction(
        TrackedFunctional(f"{r2.forward.name}∘{r1.forward.name}", forward),
        TrackedFunctional(f"compose({r1.backward.name}, {r2.backward.name})", backward, 2),
        r1.source,
        r2.target,
        f"{r1.name or 'r1'};{r2.name or 'r2'}",
    )


# --- sequential use --------------------------------------------------------


@dataclass(frozen=True)
class SeqInstance:
    """A first instance and, for each later stage, a map from earlier solutions to the next instance."""

    first: Any
    continuations: tuple

    def next_instance(self, stage: int, solutions: tuple, budget: int = DEFAULT_BUDGET):
        kappa = self.continuations[stage - 1]
        return evaluate(kappa, solutions, budget=budget)[0]

    def to_json(self):
        return {"first": to_jsonable(self.first), "continuations": [k.name for k in self.continuations]}


def seq_use(p: Problem, uses: int, continuations: Callable[[Any], Sequence] | None = None) -> Problem:
    """Problem of solving ``uses`` P-instances in sequence, each built from the previous solutions.

    An instance is a :class:`SeqInstance`; a solution is a tuple of ``uses``
    P-solutions.  The k-th continuation reads the tuple of the first k
    solutions.  ``continuations(x1)`` supplies continuation families for
    instance enumeration.
    """
    if uses < 1:
        raise ValueError("uses must be positive")

    def stage_instances(inst: SeqInstance, prefix: tuple):
        return inst.first if not prefix else inst.next_instance(len(prefix), prefix)

    def instance_valid(inst) -> bool:
        if not isinstance(inst, SeqInstance) or len(inst.continuations) != uses - 1:
            return False
        if not p.instance_valid(inst.first):
            return False

        def valid_from(prefix: tuple) -> bool:
            if len(prefix) == uses:
                return True
            x = stage_instances(inst, prefix)
            if prefix and not p.instance_valid(x):
                return False
            return all(valid_from(prefix + (y,)) for y in p.enumerate_solutions(x))

        return valid_from(())

    def is_solution(inst, ys) -> bool:
        if len(ys) != uses:
            return False
        for k in range(uses):
            x = stage_instances(inst, tuple(ys[:k]))
            if not p.instance_valid(x) or not p.is_solution(x, ys[k]):
                return False
        return True

    def instances(**kw):
        if continuations is None:
            return iter(())
        return (
            SeqInstance(x1, tuple(ks))
            for x1 in p.enumerate_instances(**kw)
            for ks in continuations(x1)
        )

    def solutions(inst, **_):
        def extend(prefix: tuple):
            if len(prefix) == uses:
                yield prefix
                return
            x = stage_instances(inst, prefix)
            for y in p.enumerate_solutions(x):
                yield from extend(prefix + (y,))

        return extend(())

    return Problem(f"seq{uses}[{p.name}]", instance_valid, is_solution, instances, solutions, dict(p.params))


def seq_use2(p: Problem, continuations=None) -> Problem:
    return seq_use(p, 2, continuations)


def solve_sequential(inst: SeqInstance, solver: CountedSolver, uses: int | None = None) -> tuple:
    """Apply ``solver`` once per stage; returns the tuple of stage solutions."""
    uses = len(inst.continuations) + 1 if uses is None else uses
    ys: tuple = ()
    for k in range(uses):
        x = inst.first if k == 0 else inst.next_instance(k, ys)
        y = solver(x)
        if y is None:
            raise RuntimeError(f"solver failed at stage {k + 1}")
        ys += (y,)
    return ys


def application_count(run, solver: Callable | None = None) -> int:
    """Number of solver applications made by ``run``.

    ``run`` is either a :class:`CountedSolver` that has already been used, or a
    callable taking a counted solver, which is executed with ``solver`` wrapped.
    """
    if isinstance(run, CountedSolver):
        return run.count
    c = counted(solver if solver is not None else (lambda x: None))
    run(c)
    return c.count
