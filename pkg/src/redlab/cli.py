"""Command-line front end.  Reports are JSON on stdout (or ``--out``); summaries go to stderr.

Exit status: 0 on success, 1 when a counterexample or failure was verified,
2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import adversary, formula, ramsey
from .functionals import constant, mu_backward
from .problems import counted, path_problem, trivial_problem
from .reductions import Reduction, identity_reduction, verify

OUTPUT_DIR_ENV = "REDLAB_OUTPUT_DIR"


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a report: the subcommand, its parameters, the seed."""

    command: str
    params: dict = field(default_factory=dict)
    seed: int | None = None
    out: str | None = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        skip = {"func", "group", "cmd", "out", "seed"}
        params = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
        return cls(f"{args.group} {args.cmd}", params, getattr(args, "seed", None), args.out)

    def output_path(self) -> str | None:
        if self.out:
            return self.out
        base = os.environ.get(OUTPUT_DIR_ENV)
        return os.path.join(base, self.command.replace(" ", "-") + ".json") if base else None


def _load_json(path: str, flag: str = "--in"):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"{flag} {path}: {exc}") from exc


def _formula_text(args) -> str:
    if args.file:
        try:
            return Path(args.file).read_text()
        except OSError as exc:
            raise UsageError(f"--file {args.file}: {exc}") from exc
    if args.text is None:
        raise UsageError("give a formula or --file")
    return args.text


def _parse(args) -> formula.Formula:
    try:
        return formula.parse(_formula_text(args))
    except formula.FormulaError as exc:
        raise UsageError(f"formula: {exc}") from exc


def cmd_formula_classify(args):
    f = _parse(args)
    report = {
        "exists_free": formula.is_exists_free(f),
        "exists_free_matrix": formula.is_exists_free(formula.matrix(f)),
        "gamma1": formula.is_gamma1(f),
    }
    return report, 0


def cmd_formula_shape(args):
    f = _parse(args)
    try:
        shape = formula.problem_shape(f)
    except formula.ShapeMismatch as exc:
        return {"matches": False, "error": str(exc), "path": exc.path}, 1
    return {
        "matches": True,
        "instance_var": shape.instance_var,
        "instance_sort": shape.instance_sort,
        "instance_pred": formula.to_text(shape.instance_pred),
        "solution_var": shape.solution_var,
        "solution_sort": shape.solution_sort,
        "solution_pred": formula.to_text(shape.solution_pred),
    }, 0


def _broken_path(params) -> Reduction:
    secret = tuple(params.get("secret", [1, 0, 1]))
    depth = params.get("D", 4)
    tree = adversary.secret_prefix_tree(secret, depth)
    zero = constant((0,) * (depth + 1), arity=2, name="zero")
    return Reduction(constant((0,)), zero, path_problem(tree, depth), trivial_problem(), "broken-path")


def _mu_path(params) -> Reduction:
    secret = tuple(params.get("secret", [1, 0, 1]))
    depth = params.get("D", 4)
    tree = adversary.secret_prefix_tree(secret, depth)
    return Reduction(constant((0,)), mu_backward(tree, depth + 1), path_problem(tree, depth), trivial_problem(), "mu-path")


REDUCTIONS = {
    "identity-trivial": lambda p: identity_reduction(trivial_problem(p.get("L", 2), p.get("B", 2), p.get("L", 2), p.get("B", 2))),
    "broken-path": _broken_path,
    "mu-path": _mu_path,
    "two-step": lambda p: ramsey.two_step_reduction(p.get("N", 4), p.get("m", 2)),
    "one-use": lambda p: ramsey.one_use_reduction(p.get("N", 4), p.get("m", 2), p.get("s_advice", 2)),
}


def cmd_reduce_verify(args):
    try:
        params = json.loads(args.params)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--params: {exc}") from exc
    if args.reduction not in REDUCTIONS:
        raise UsageError(f"--reduction: unknown reduction {args.reduction!r}")
    r = REDUCTIONS[args.reduction](params)
    rep = verify(r, sample=args.sample, seed=args.seed, budget=args.budget, jobs=args.jobs)
    out = rep.to_json()
    out["reduction"] = args.reduction
    out["params"] = params
    print(f"{args.reduction}: checked {rep.checked} instances, passed={rep.passed}", file=sys.stderr)
    return out, 0 if rep.passed else 1


def _coloring(args, k_default: int = 4) -> ramsey.Coloring:
    if args.input:
        try:
            return ramsey.Coloring.from_json(_load_json(args.input))
        except (KeyError, ValueError) as exc:
            raise UsageError(f"--in {args.input}: {exc}") from exc
    rng = random.Random(args.seed)
    return ramsey.random_coloring(rng, args.N, args.k or k_default, args.n)


def cmd_ramsey_solve(args):
    f = _coloring(args, 2)
    h = ramsey.find_homogeneous(f, args.m) if args.m else ramsey.max_homogeneous(f)
    return {"coloring": f.to_json(), "homogeneous": h.to_json() if h else None}, 0 if h else 1


def _run_pipeline(args, run) -> tuple[dict, int]:
    f = _coloring(args)
    solver = counted(ramsey.max_homogeneous)
    report = {"coloring": f.to_json(), "m": args.m}
    try:
        h = run(f, solver)
    except ramsey.AdviceContradiction as exc:
        report.update(status="advice-contradiction", error=str(exc), applications=solver.count)
        return report, 1
    except ramsey.SolverFailure as exc:
        report.update(status="insufficient" if isinstance(exc, ramsey.InsufficientSolution) else "solver-failure")
        report.update(stage=str(exc.stage), error=str(exc), applications=solver.count)
        return report, 1
    verified = ramsey.is_homogeneous(f, h.vertices, h.color)
    report.update(status="ok", homogeneous=h.to_json(), verified=verified, applications=solver.count)
    return report, 0 if verified else 1


def cmd_ramsey_two_step(args):
    return _run_pipeline(args, lambda f, s: ramsey.rt24_via_two_rt22(f, s, args.m))


def cmd_ramsey_one_use(args):
    rep, code = _run_pipeline(args, lambda f, s: ramsey.classical_one_use_rt24(f, s, args.s_advice, args.m))
    advice = ramsey.find_2mono(ramsey.Coloring.from_json(rep["coloring"]), args.s_advice)
    rep["advice"] = {"j": 1} if advice is None else {"j": 0, "x": list(advice[0]), "pair": list(advice[1])}
    rep["s_advice"] = args.s_advice
    return rep, code


def cmd_ramsey_general(args):
    rep, code = _run_pipeline(args, lambda f, s: ramsey.generalized_one_use(f, s, args.s_advice, args.m))
    rep["s_advice"] = args.s_advice
    return rep, code


def cmd_adversary_probe(args):
    if args.tree:
        try:
            tree = adversary.tree_from_json(_load_json(args.tree, "--tree"))
        except (KeyError, ValueError) as exc:
            raise UsageError(f"--tree {args.tree}: {exc}") from exc
        depth = tree.depth
        try:
            u0 = tuple(json.loads(args.u0)) if args.u0 else ()
        except json.JSONDecodeError as exc:
            raise UsageError(f"--u0: {exc}") from exc
        psi = {
            "guess": lambda: adversary.guessing_backward(args.use_cap, depth + 1),
            "mu": lambda: mu_backward(tree, depth + 1),
            "honest": lambda: adversary.honest_backward(tree, depth),
        }[args.psi]()
        try:
            result = adversary.probe(psi, tree, u0, depth, budget=args.budget)
        except ValueError as exc:
            raise UsageError(f"--u0: {exc}") from exc
        report = {"tree": tree.to_json(), "u0": list(u0), "psi": psi.name, "result": result.to_json()}
        found = isinstance(result, adversary.CounterWitness)
        if found:
            report["reverified"] = result.reverify(psi, tree, depth, u0 + (0,) * (len(result.s0) - len(u0)))
        return report, 1 if found else 0
    stats = adversary.secret_trials(args.trials, args.bits, args.depth, args.use_cap, args.seed)
    print(f"{stats.witnesses}/{stats.trials} counter-witnesses (bound {stats.bound:.4f})", file=sys.stderr)
    return stats.to_json(), 1 if stats.witnesses else 0


def cmd_ramsey_oracle(args):
    res = ramsey.ramsey_oracle(args.N, args.m, args.k)
    print(f"N={args.N}: {res.without} of {res.colorings} colourings lack a homogeneous {args.m}-set", file=sys.stderr)
    return res.to_json(), 0 if res.all_have else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="redlab", description=__doc__.splitlines()[0])
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    groups = parser.add_subparsers(dest="group", required=True)

    def common(p, seed=True):
        p.add_argument("--out", default=argparse.SUPPRESS)
        p.add_argument("--jobs", type=int, default=1)
        if seed:
            p.add_argument("--seed", type=int, default=0)

    fml = groups.add_parser("formula").add_subparsers(dest="cmd", required=True)
    for name, fn in (("classify", cmd_formula_classify), ("problem-shape", cmd_formula_shape)):
        p = fml.add_parser(name)
        p.add_argument("text", nargs="?")
        p.add_argument("--file")
        common(p, seed=False)
        p.set_defaults(func=fn)

    red = groups.add_parser("reduce").add_subparsers(dest="cmd", required=True)
    p = red.add_parser("verify")
    p.add_argument("--reduction", required=True, help=", ".join(REDUCTIONS))
    p.add_argument("--params", default="{}", help="JSON object of reduction parameters")
    p.add_argument("--sample", type=int)
    p.add_argument("--budget", type=int, default=100_000)
    common(p)
    p.set_defaults(func=cmd_reduce_verify)

    ram = groups.add_parser("ramsey").add_subparsers(dest="cmd", required=True)
    for name, fn, advice in (
        ("solve", cmd_ramsey_solve, False),
        ("two-step", cmd_ramsey_two_step, False),
        ("one-use", cmd_ramsey_one_use, True),
        ("general", cmd_ramsey_general, True),
    ):
        p = ram.add_parser(name)
        p.add_argument("--in", dest="input", help="colouring JSON file")
        p.add_argument("--N", type=int, default=8, help="vertex count for a random colouring")
        p.add_argument("--k", type=int, help="colour count for a random colouring")
        p.add_argument("--n", type=int, default=2, help="exponent for a random colouring")
        p.add_argument("--m", type=int, default=None if name == "solve" else 2)
        if advice:
            p.add_argument("--s-advice", type=int, default=2)
        common(p)
        p.set_defaults(func=fn)

    adv = groups.add_parser("adversary").add_subparsers(dest="cmd", required=True)
    p = adv.add_parser("probe")
    p.add_argument("--tree", help="tree JSON file; without it, run random secret trials")
    p.add_argument("--u0", help="JSON list: path prefix for --tree")
    p.add_argument("--psi", choices=("guess", "mu", "honest"), default="guess")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--bits", type=int, default=8)
    p.add_argument("--depth", type=int, default=32)
    p.add_argument("--use-cap", type=int, default=4)
    p.add_argument("--budget", type=int, default=100_000)
    common(p)
    p.set_defaults(func=cmd_adversary_probe)

    enum = groups.add_parser("enumerate").add_subparsers(dest="cmd", required=True)
    p = enum.add_parser("ramsey-oracle")
    p.add_argument("--N", type=int, default=6)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--k", type=int, default=2)
    common(p, seed=False)
    p.set_defaults(func=cmd_ramsey_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("argument --jobs: must be at least 1")
    try:
        report, code = args.func(args)
    except UsageError as exc:
        print(f"redlab: error: {exc}", file=sys.stderr)
        return 2
    config = RunConfig.from_args(args)
    report = {**report, "command": config.command, "config": config.params, "seed": config.seed}
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    out = config.output_path()
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
