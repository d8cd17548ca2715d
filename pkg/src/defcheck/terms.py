"""Terms, atoms and body literals.

Ground terms double as the elements of term-generated structures, so ``Fn``
caches its hash and depth; extensional structures use plain strings as
elements.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

NIL = "nil"
CONS = "cons"
TIMES = "times"
PLUS = "plus"

_PLAIN = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
_LOOSE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_NUMERAL = re.compile(r"[0-9]+\Z")


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __repr__(self):
        return self.name


class Fn:
    """Application of a function symbol; constants are ``Fn(name)``."""

    __slots__ = ("name", "args", "depth", "ground", "_hash")

    def __init__(self, name: str, args=()):
        args = tuple(args)
        self.name = name
        self.args = args
        self._hash = hash((name, args))
        if args:
            self.depth = 1 + max(getattr(a, "depth", 0) for a in args)
            self.ground = all(isinstance(a, Fn) and a.ground for a in args)
        else:
            self.depth = 0
            self.ground = True

    @property
    def arity(self):
        return len(self.args)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Fn):
            return NotImplemented
        return self._hash == other._hash and self.name == other.name and self.args == other.args

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return sort_key(self) < sort_key(other)

    def __repr__(self):
        return format_term(self)


Term = Union[Var, Fn]
Element = Union[str, Fn]


def const(name) -> Fn:
    return Fn(str(name))


def numeral_value(t):
    """Integer denoted by a numeral constant, or None."""
    if isinstance(t, Fn) and not t.args and _NUMERAL.match(t.name):
        return int(t.name)
    return None


def make_list(items, tail=None) -> Fn:
    out = tail if tail is not None else Fn(NIL)
    for item in reversed(list(items)):
        out = Fn(CONS, (item, out))
    return out


def variables(t) -> Iterator[Var]:
    if isinstance(t, Var):
        yield t
    elif isinstance(t, Fn):
        if not t.ground:
            for a in t.args:
                yield from variables(a)


def subterms(t) -> Iterator[Fn]:
    """All subterms of ``t`` (including ``t``), pre-order."""
    yield t
    if isinstance(t, Fn):
        for a in t.args:
            yield from subterms(a)


def sort_key(x):
    """Total order over elements: strings and terms, numerals numerically."""
    if isinstance(x, Fn):
        n = numeral_value(x)
        head = (0, n, "") if n is not None else (1, 0, x.name)
        return (1, x.depth, head, tuple(sort_key(a) for a in x.args))
    if isinstance(x, Var):
        return (2, x.name)
    if _NUMERAL.match(x):
        return (0, 0, (0, int(x), ""), ())
    return (0, 0, (1, 0, x), ())


def format_name(name: str, loose=False) -> str:
    pattern = _LOOSE if loose else _PLAIN
    if pattern.match(name) or _NUMERAL.match(name):
        return name
    escaped = name.replace("\\", "\\\\").replace("'", "\\'")
    return f"'{escaped}'"


def format_term(t, loose=False) -> str:
    """Prolog-style rendering with list sugar; ``loose`` allows bare uppercase names."""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, str):
        return format_name(t, loose)
    if t.name == NIL and not t.args:
        return "[]"
    if t.name == CONS and len(t.args) == 2:
        items = []
        cur = t
        while isinstance(cur, Fn) and cur.name == CONS and len(cur.args) == 2:
            items.append(format_term(cur.args[0], loose))
            cur = cur.args[1]
        inner = ",".join(items)
        if isinstance(cur, Fn) and cur.name == NIL and not cur.args:
            return f"[{inner}]"
        return f"[{inner}|{format_term(cur, loose)}]"
    if t.name in (TIMES, PLUS) and len(t.args) == 2:
        op = "*" if t.name == TIMES else "+"
        return f"({format_term(t.args[0], loose)}{op}{format_term(t.args[1], loose)})"
    if not t.args:
        return format_name(t.name, loose)
    return f"{format_name(t.name, loose)}({','.join(format_term(a, loose) for a in t.args)})"


# -- literals ---------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()

    @property
    def arity(self):
        return len(self.args)

    def __str__(self):
        if not self.args:
            return format_name(self.pred)
        return f"{format_name(self.pred)}({','.join(format_term(a) for a in self.args)})"


@dataclass(frozen=True)
class Not:
    atom: Atom

    def __str__(self):
        return f"not {self.atom}"


@dataclass(frozen=True)
class Equals:
    left: Term
    right: Term

    def __str__(self):
        return f"{format_term(self.left)} = {format_term(self.right)}"


@dataclass(frozen=True)
class NotEquals:
    left: Term
    right: Term

    def __str__(self):
        return f"{format_term(self.left)} \\= {format_term(self.right)}"


@dataclass(frozen=True)
class Truth:
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


TOP = Truth(True)
BOTTOM = Truth(False)

Literal = Union[Atom, Not, Equals, NotEquals, Truth]


def literal_terms(lit):
    if isinstance(lit, Atom):
        return lit.args
    if isinstance(lit, Not):
        return lit.atom.args
    if isinstance(lit, (Equals, NotEquals)):
        return (lit.left, lit.right)
    return ()


def literal_vars(lit) -> set:
    out = set()
    for t in literal_terms(lit):
        out.update(variables(t))
    return out


def format_fact(pred, tup, loose=False) -> str:
    """Render a ground atom given as predicate name plus element tuple."""
    name = format_name(pred, loose)
    if not tup:
        return name
    return f"{name}({','.join(format_term(x, loose) for x in tup)})"
