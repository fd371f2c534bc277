"""Binary trees truncated at a declared depth, and the path/escape semantics over them.

A tree is a set of 0/1 words.  Inputs ``u`` are arbitrary words of naturals;
they are read as 0/1 words by sending every nonzero entry to 1.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence


def collapse(word: Sequence[int]) -> tuple[int, ...]:
    return tuple(0 if a == 0 else 1 for a in word)


def _is_binary(word: Sequence[int]) -> bool:
    return all(a in (0, 1) for a in word)


class Tree:
    """Membership on 0/1 words; ``depth`` is the bound up to which claims are made."""

    depth: int

    def __contains__(self, word: Sequence[int]) -> bool:
        word = tuple(word)
        return _is_binary(word) and self._member(word)

    def _member(self, word: tuple[int, ...]) -> bool:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ExplicitTree(Tree):
    words: frozenset
    depth: int

    def __init__(self, words: Iterable[Sequence[int]], depth: int):
        object.__setattr__(self, "words", frozenset(tuple(w) for w in words))
        object.__setattr__(self, "depth", depth)

    def _member(self, word):
        return word in self.words

    def to_json(self) -> dict:
        return {"kind": "explicit", "depth": self.depth, "words": sorted(list(w) for w in self.words)}


@dataclass(frozen=True)
class SecretPrefixTree(Tree):
    """Words agreeing with ``secret`` on their common length; paths are extensions of the secret."""

    secret: tuple
    depth: int

    def __post_init__(self):
        object.__setattr__(self, "secret", tuple(self.secret))
        if not _is_binary(self.secret):
            raise ValueError("secret must be a 0/1 word")
        if len(self.secret) > self.depth:
            raise ValueError(f"secret of length {len(self.secret)} exceeds depth {self.depth}")

    def _member(self, word):
        n = min(len(word), len(self.secret))
        return word[:n] == self.secret[:n]

    def to_json(self) -> dict:
        return {"kind": "secret", "secret": list(self.secret), "depth": self.depth}


@dataclass(frozen=True)
class ProgramTree(Tree):
    member: Callable[[tuple], bool] = field(compare=False)
    depth: int = 0

    def _member(self, word):
        return bool(self.member(word))

    def to_json(self) -> dict:
        raise TypeError("program trees have no serial form")


def full_tree(depth: int) -> SecretPrefixTree:
    return SecretPrefixTree((), depth)


def secret_prefix_tree(secret: Sequence[int], depth: int) -> SecretPrefixTree:
    return SecretPrefixTree(tuple(secret), depth)


def tree_from_json(obj: dict) -> Tree:
    kind = obj.get("kind")
    if kind == "explicit":
        return ExplicitTree(obj["words"], obj["depth"])
    if kind == "secret":
        return SecretPrefixTree(tuple(obj["secret"]), obj["depth"])
    raise ValueError(f"unknown tree kind {kind!r}")


def binary_words(length: int) -> Iterable[tuple[int, ...]]:
    return itertools.product((0, 1), repeat=length)


def check_downward_closed(tree: Tree, depth: int, samples: int | None = None, seed: int = 0) -> bool:
    """True iff every member of length <= ``depth`` has all its prefixes in the tree.

    Explicit trees are checked on their word list.  Other trees are checked
    exhaustively over all 0/1 words, or on ``samples`` random words when given.
    """
    if isinstance(tree, ExplicitTree):
        return all(w[:i] in tree for w in tree.words if len(w) <= depth for i in range(len(w)))
    if samples is not None:
        rng = random.Random(seed)
        for _ in range(samples):
            n = rng.randint(1, depth) if depth else 0
            w = tuple(rng.randint(0, 1) for _ in range(n))
            if w in tree and any(w[:i] not in tree for i in range(n)):
                return False
        return True
    # every member's parent is a member
    for n in range(1, depth + 1):
        for w in binary_words(n):
            if w in tree and w[:-1] not in tree:
                return False
    return True


def mu_witness(u: Sequence[int], tree: Tree, depth: int) -> int | None:
    """``1 + m`` for the least ``m <= depth`` whose (m+1)-prefix of ``u`` leaves the tree."""
    bits = collapse(u)
    for m in range(min(depth, len(bits) - 1) + 1):
        if bits[: m + 1] not in tree:
            return 1 + m
    return None


class Verdict(str, enum.Enum):
    PASS_PATH = "pass-path"
    PASS_ESCAPE = "pass-escape"
    FAIL = "fail"

    @property
    def ok(self) -> bool:
        return self is not Verdict.FAIL


def path_failure_depth(v: Sequence[int], tree: Tree, depth: int) -> int | None:
    """Least prefix length at which ``n -> v(n+1)`` leaves the tree, or None."""
    path = tuple(v[1:])
    if len(path) < depth:
        raise ValueError(f"solution word of length {len(v)} cannot certify a path of depth {depth}")
    for n in range(depth + 1):
        if path[:n] not in tree:
            return n
    return None


def q2_verdict(u: Sequence[int], v: Sequence[int], tree: Tree, depth: int) -> Verdict:
    """Either v(0)=0 and v shifted by one is a path through depth ``depth``,
    or v(0)>0 and the (v(0)+1)-prefix of u is outside the tree."""
    if not v:
        raise ValueError("empty solution word")
    if v[0] == 0:
        return Verdict.PASS_PATH if path_failure_depth(v, tree, depth) is None else Verdict.FAIL
    if v[0] + 1 > len(u):
        raise ValueError(f"v(0)={v[0]} exceeds the {len(u)} available input positions")
    return Verdict.PASS_ESCAPE if collapse(u[: v[0] + 1]) not in tree else Verdict.FAIL
