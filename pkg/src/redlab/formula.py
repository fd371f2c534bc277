"""Small two-sorted formula language: parser, printer, and syntactic classes.

Sorts are ``0`` (numbers) and ``1`` (functions from numbers to numbers).
Negation is sugar: ``!A`` parses to ``A -> bot``.

Grammar::

    formula  := disj ('->' formula)?            right associative
    disj     := conj ('|' conj)*
    conj     := unary ('&' unary)*
    unary    := '!' unary | quant | atom
    quant    := ('forall' | 'exists') NAME ':' SORT '.' formula
    atom     := 'bot' | '(' formula ')' | term '=' term | NAME ('(' terms ')')?
    term     := NUM | NAME ('(' terms ')')?

A name applied to arguments is a type-1 variable when bound, otherwise a
function constant (``S``, ``t4``, ...).  Quantifier bodies extend as far to
the right as possible.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union


class FormulaError(ValueError):
    pass


class FormulaSyntaxError(FormulaError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class UnboundVariable(FormulaError):
    pass


class SortMismatch(FormulaError):
    pass


class VariableRebound(FormulaError):
    pass


class ShapeMismatch(FormulaError):
    def __init__(self, message: str, path: str, node: "Formula"):
        super().__init__(f"{message} at {path or '<root>'}: {to_text(node)}")
        self.path = path
        self.node = node


# --- terms -----------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Const:
    """A function symbol that is not a variable (successor, truncation, ...)."""

    name: str


@dataclass(frozen=True)
class App:
    head: Union[Var, Const]
    args: tuple


Term = Union[Var, Num, App]


# --- formulas --------------------------------------------------------------


@dataclass(frozen=True)
class Prime:
    name: str
    terms: tuple = ()


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    sort: int
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    sort: int
    body: "Formula"


Formula = Union[Prime, Bot, Eq, And, Or, Implies, Forall, Exists]
ATOMIC = (Prime, Bot, Eq)
BINARY = (And, Or, Implies)
QUANTIFIERS = (Forall, Exists)


def Not(f: Formula) -> Implies:
    return Implies(f, Bot())


# --- tokenizer -------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<sym>->|→|[()&|!=.,:∧∨¬⊥∀∃]))"
)
_ALIASES = {"→": "->", "∧": "&", "∨": "|", "¬": "!", "⊥": "bot", "∀": "forall", "∃": "exists"}
_KEYWORDS = {"forall", "exists", "bot"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        value = m.group(kind)
        start = m.start(kind)
        value = _ALIASES.get(value, value)
        if value in _KEYWORDS:
            kind = "kw"
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, free: Mapping[str, int]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.scope: dict[str, int] = dict(free)

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> tuple[str, str, int]:
        tok = self.take()
        if tok[1] != value or tok[0] == "eof":
            raise FormulaSyntaxError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def at(self, value: str) -> bool:
        kind, v, _ = self.peek()
        return kind in ("sym", "kw") and v == value

    def formula(self) -> Formula:
        left = self.disj()
        if self.at("->"):
            self.take()
            return Implies(left, self.formula())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.at("|"):
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.at("&"):
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.at("!"):
            self.take()
            return Not(self.unary())
        if self.at("forall") or self.at("exists"):
            return self.quantifier()
        return self.atom()

    def quantifier(self) -> Formula:
        _, q, _ = self.take()
        kind, name, pos = self.take()
        if kind != "name":
            raise FormulaSyntaxError("expected a variable name", pos)
        self.expect(":")
        kind, sort, spos = self.take()
        if kind != "num" or sort not in ("0", "1"):
            raise FormulaSyntaxError("sort must be 0 or 1", spos)
        self.expect(".")
        if name in self.scope:
            raise VariableRebound(f"variable {name!r} rebound at position {pos}")
        self.scope[name] = int(sort)
        try:
            body = self.formula()
        finally:
            del self.scope[name]
        return (Forall if q == "forall" else Exists)(name, int(sort), body)

    def atom(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "kw" and value == "bot":
            self.take()
            return Bot()
        if self.at("("):
            self.take()
            f = self.formula()
            self.expect(")")
            return f
        if kind == "num":
            left = self.term()
            self.expect("=")
            return Eq(left, self.term())
        if kind != "name":
            raise FormulaSyntaxError(f"unexpected {value or 'end of input'!r}", pos)
        # a name: either the left side of an equation or a prime formula
        save = self.i
        self.take()
        args: tuple = ()
        if self.at("("):
            args = self.arguments()
        if self.at("="):
            self.i = save
            left = self.term()
            self.take()
            return Eq(left, self.term())
        if value in self.scope:
            raise SortMismatch(f"variable {value!r} used as a formula at position {pos}")
        return Prime(value, tuple(self.check_prime_arg(a, pos) for a in args))

    def arguments(self) -> tuple:
        self.expect("(")
        args = [self.raw_term()]
        while self.at(","):
            self.take()
            args.append(self.raw_term())
        self.expect(")")
        return tuple(args)

    def raw_term(self):
        kind, value, pos = self.take()
        if kind == "num":
            return ("num", int(value), pos)
        if kind != "name":
            raise FormulaSyntaxError(f"expected a term, found {value or 'end of input'!r}", pos)
        if self.at("("):
            return ("app", value, self.arguments(), pos)
        return ("name", value, pos)

    def term(self) -> Term:
        return self.number_term(self.raw_term())

    def check_prime_arg(self, raw, pos) -> Term:
        # primes accept variables of either sort
        if raw[0] == "name":
            if raw[1] not in self.scope:
                raise UnboundVariable(f"unbound variable {raw[1]!r} at position {raw[2]}")
            return Var(raw[1])
        return self.number_term(raw)

    def number_term(self, raw) -> Term:
        if raw[0] == "num":
            return Num(raw[1])
        if raw[0] == "name":
            name, pos = raw[1], raw[2]
            if name not in self.scope:
                raise UnboundVariable(f"unbound variable {name!r} at position {pos}")
            if self.scope[name] != 0:
                raise SortMismatch(f"type-1 variable {name!r} used as a number at position {pos}")
            return Var(name)
        _, name, args, pos = raw
        if name in self.scope:
            if self.scope[name] != 1:
                raise SortMismatch(f"number variable {name!r} applied to arguments at position {pos}")
            head: Union[Var, Const] = Var(name)
        else:
            head = Const(name)
        return App(head, tuple(self.number_term(a) for a in args))


def parse(text: str, free: Mapping[str, int] | None = None) -> Formula:
    """Parse ``text``; ``free`` declares the sorts of permitted free variables."""
    p = _Parser(text, free or {})
    f = p.formula()
    kind, value, pos = p.peek()
    if kind != "eof":
        raise FormulaSyntaxError(f"unexpected trailing {value!r}", pos)
    return f


# --- printing --------------------------------------------------------------


def term_text(t: Term) -> str:
    if isinstance(t, Num):
        return str(t.value)
    if isinstance(t, Var):
        return t.name
    return f"{t.head.name}({', '.join(term_text(a) for a in t.args)})"


_OPS = {And: "&", Or: "|", Implies: "->"}


def to_text(f: Formula) -> str:
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Prime):
        if not f.terms:
            return f.name
        return f"{f.name}({', '.join(term_text(t) for t in f.terms)})"
    if isinstance(f, Eq):
        return f"{term_text(f.left)} = {term_text(f.right)}"
    if isinstance(f, QUANTIFIERS):
        q = "forall" if isinstance(f, Forall) else "exists"
        return f"{q} {f.var}:{f.sort} . {to_text(f.body)}"

    def side(g: Formula) -> str:
        return to_text(g) if isinstance(g, ATOMIC) else f"({to_text(g)})"

    return f"{side(f.left)} {_OPS[type(f)]} {side(f.right)}"


# --- traversal helpers -----------------------------------------------------


def _term_vars(t: Term) -> Iterator[str]:
    if isinstance(t, Var):
        yield t.name
    elif isinstance(t, App):
        if isinstance(t.head, Var):
            yield t.head.name
        for a in t.args:
            yield from _term_vars(a)


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Prime):
        return {v for t in f.terms for v in _term_vars(t)}
    if isinstance(f, Eq):
        return set(_term_vars(f.left)) | set(_term_vars(f.right))
    if isinstance(f, Bot):
        return set()
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    return free_vars(f.left) | free_vars(f.right)


def all_vars(f: Formula) -> set[str]:
    """Every variable name occurring in ``f``, free or bound."""
    if isinstance(f, QUANTIFIERS):
        return {f.var} | all_vars(f.body)
    if isinstance(f, BINARY):
        return all_vars(f.left) | all_vars(f.right)
    return free_vars(f)


def _rename_term(t: Term, m: Mapping[str, str]) -> Term:
    if isinstance(t, Var):
        return Var(m.get(t.name, t.name))
    if isinstance(t, App):
        head = Var(m.get(t.head.name, t.head.name)) if isinstance(t.head, Var) else t.head
        return App(head, tuple(_rename_term(a, m) for a in t.args))
    return t


def rename(f: Formula, mapping: Mapping[str, str]) -> Formula:
    """Rename variables everywhere (free and bound occurrences alike)."""
    if isinstance(f, Prime):
        return Prime(f.name, tuple(_rename_term(t, mapping) for t in f.terms))
    if isinstance(f, Eq):
        return Eq(_rename_term(f.left, mapping), _rename_term(f.right, mapping))
    if isinstance(f, Bot):
        return f
    if isinstance(f, QUANTIFIERS):
        return type(f)(mapping.get(f.var, f.var), f.sort, rename(f.body, mapping))
    return type(f)(rename(f.left, mapping), rename(f.right, mapping))


def depth(f: Formula) -> int:
    if isinstance(f, ATOMIC):
        return 1
    if isinstance(f, QUANTIFIERS):
        return 1 + depth(f.body)
    return 1 + max(depth(f.left), depth(f.right))


# --- classes ---------------------------------------------------------------


def is_exists_free(f: Formula) -> bool:
    """Built from primes with only forall, conjunction and implication."""
    if isinstance(f, ATOMIC):
        return True
    if isinstance(f, (Exists, Or)):
        return False
    if isinstance(f, Forall):
        return is_exists_free(f.body)
    return is_exists_free(f.left) and is_exists_free(f.right)


def strip_exists(f: Formula) -> tuple[list[tuple[str, int]], Formula]:
    block = []
    while isinstance(f, Exists):
        block.append((f.var, f.sort))
        f = f.body
    return block, f


def is_gamma1(f: Formula) -> bool:
    if isinstance(f, ATOMIC):
        return True
    if isinstance(f, (And, Or)):
        return is_gamma1(f.left) and is_gamma1(f.right)
    if isinstance(f, QUANTIFIERS):
        return is_gamma1(f.body)
    block, antecedent = strip_exists(f.left)
    if not is_exists_free(antecedent) or not is_gamma1(f.right):
        return False
    # variables of the existential block may not be captured by the consequent
    return not ({v for v, _ in block} & free_vars(f.right))


def matrix(f: Formula) -> Formula:
    """The solution predicate of a problem, else ``f`` minus its leading forall/exists prefix."""
    try:
        return problem_shape(f).solution_pred
    except ShapeMismatch:
        pass
    while isinstance(f, Forall):
        f = f.body
    while isinstance(f, Exists):
        f = f.body
    return f


# --- problem shape ---------------------------------------------------------


@dataclass(frozen=True)
class ProblemShape:
    instance_var: str
    instance_sort: int
    instance_pred: Formula
    solution_var: str
    solution_sort: int
    solution_pred: Formula

    def reassemble(self) -> Formula:
        return Forall(
            self.instance_var,
            self.instance_sort,
            Implies(self.instance_pred, Exists(self.solution_var, self.solution_sort, self.solution_pred)),
        )

    def variables(self) -> set[str]:
        return {self.instance_var, self.solution_var} | all_vars(self.instance_pred) | all_vars(self.solution_pred)

    def rename(self, mapping: Mapping[str, str]) -> "ProblemShape":
        return ProblemShape(
            mapping.get(self.instance_var, self.instance_var),
            self.instance_sort,
            rename(self.instance_pred, mapping),
            mapping.get(self.solution_var, self.solution_var),
            self.solution_sort,
            rename(self.solution_pred, mapping),
        )


def problem_shape(f: Formula) -> ProblemShape:
    if not isinstance(f, Forall):
        raise ShapeMismatch("expected a universal quantifier", "", f)
    if not isinstance(f.body, Implies):
        raise ShapeMismatch("expected an implication", "body", f.body)
    if not isinstance(f.body.right, Exists):
        raise ShapeMismatch("expected an existential quantifier", "body.right", f.body.right)
    ex = f.body.right
    return ProblemShape(f.var, f.sort, f.body.left, ex.var, ex.sort, ex.body)


def _fresh(name: str, taken: set[str]) -> str:
    for i in itertools.count(1):
        candidate = f"{name}_{i}"
        if candidate not in taken:
            return candidate
    raise AssertionError("unreachable")


def rename_apart(p: ProblemShape, avoid: set[str]) -> ProblemShape:
    taken = set(avoid) | p.variables()
    mapping = {}
    for v in sorted(p.variables()):
        if v in avoid:
            mapping[v] = _fresh(v, taken)
            taken.add(mapping[v])
    return p.rename(mapping)


def reduction_predicate(q: ProblemShape, p: ProblemShape) -> Formula:
    """``q1(u) -> (p1(x) & (p2(x, y) -> q2(u, v)))`` with ``p`` renamed apart from ``q``."""
    p = rename_apart(p, q.variables())
    return Implies(q.instance_pred, And(p.instance_pred, Implies(p.solution_pred, q.solution_pred)))


def reduction_free_sorts(q: ProblemShape, p: ProblemShape) -> dict[str, int]:
    """Sorts of the free variables x, y, u, v of the reduction predicate, for re-parsing."""
    p = rename_apart(p, q.variables())
    return {
        q.instance_var: q.instance_sort,
        q.solution_var: q.solution_sort,
        p.instance_var: p.instance_sort,
        p.solution_var: p.solution_sort,
    }


# --- Ramsey formulas -------------------------------------------------------


def ramsey_text(k: int, problem_format: bool = False) -> str:
    """Pairs, ``k`` colours; the colour of the homogeneous set is stored at x(0)."""
    body = (
        f"forall m:0 . (lt(x(m), x(S(m))) & forall i:0 . forall j:0 . "
        f"(lt(0, i) & lt(i, j) & lt(j, m) -> t{k}(f(x(i), x(j))) = x(0)))"
    )
    if problem_format:
        return f"forall f:1 . (0 = 0 -> exists x:1 . {body})"
    return f"forall f:1 . exists x:1 . {body}"


def ramsey_formula(k: int, problem_format: bool = False) -> Formula:
    return parse(ramsey_text(k, problem_format))
