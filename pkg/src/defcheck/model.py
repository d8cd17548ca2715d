"""First-order structures over a vocabulary, in two representations.

``ExtensionalStructure`` lists a finite domain of named elements and tabulates
every symbol. ``TermGeneratedStructure`` takes its domain to be the ground
terms over a constructor set up to a depth bound; constructors denote term
formation and other functions are tables or registered builtins.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field, replace
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Optional

from .errors import (
    DepthExceeded,
    EmptyUniverse,
    NumeralOverflow,
    TotalityError,
    UnknownElement,
    UnknownSymbol,
    UniverseTooLarge,
    UnsupportedForm,
)
from .terms import (
    Atom,
    Equals,
    Fn,
    Not,
    NotEquals,
    Truth,
    Var,
    numeral_value,
    sort_key,
)

CONSTANT = "constant"
FUNCTION = "function"
PREDICATE = "predicate"
KINDS = (CONSTANT, FUNCTION, PREDICATE)

SIZE_CAP = 10**18


class TruncationWarning(UserWarning):
    pass


@dataclass(frozen=True, order=True)
class Symbol:
    name: str
    kind: str
    arity: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        if self.arity < 0:
            raise ValueError("arity must be non-negative")
        if self.kind == CONSTANT and self.arity != 0:
            raise ValueError(f"constant {self.name} must have arity 0")

    def __str__(self):
        return f"{self.name}/{self.arity}"


def function_symbol(name, arity) -> Symbol:
    return Symbol(name, CONSTANT if arity == 0 else FUNCTION, arity)


@dataclass(frozen=True)
class Vocabulary:
    symbols: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "symbols", frozenset(self.symbols))
        for s in self.symbols:
            if not isinstance(s, Symbol):
                raise TypeError(f"not a Symbol: {s!r}")

    @classmethod
    def of(cls, predicates=None, functions=None, constants=()):
        syms = {Symbol(c, CONSTANT, 0) for c in constants}
        syms |= {function_symbol(f, n) for f, n in (functions or {}).items()}
        syms |= {Symbol(p, PREDICATE, n) for p, n in (predicates or {}).items()}
        return cls(frozenset(syms))

    @property
    def predicates(self):
        return frozenset(s for s in self.symbols if s.kind == PREDICATE)

    @property
    def functions(self):
        return frozenset(s for s in self.symbols if s.kind != PREDICATE)

    def __iter__(self):
        return iter(sorted(self.symbols))

    def __contains__(self, sym):
        return sym in self.symbols

    def __or__(self, other):
        return Vocabulary(self.symbols | other.symbols)

    def __len__(self):
        return len(self.symbols)


@dataclass(frozen=True)
class ConstructorSet:
    """Constant and function symbols acting as constructors of the universe."""

    members: frozenset = frozenset()

    def __post_init__(self):
        members = frozenset((str(n), int(a)) for n, a in self.members)
        object.__setattr__(self, "members", members)
        for _, a in members:
            if a < 0:
                raise ValueError("arity must be non-negative")

    @classmethod
    def of(cls, *specs, numerals=None):
        """``ConstructorSet.of("nil/0", "cons/2", "a", numerals=(0, 3))``."""
        members = set()
        for s in specs:
            if isinstance(s, tuple):
                members.add(s)
            elif "/" in s:
                name, _, arity = s.rpartition("/")
                members.add((name, int(arity)))
            else:
                members.add((s, 0))
        if numerals is not None:
            lo, hi = numerals
            members |= {(str(i), 0) for i in range(lo, hi + 1)}
        return cls(frozenset(members))

    @property
    def constants(self):
        return frozenset(n for n, a in self.members if a == 0)

    @property
    def functions(self):
        return frozenset((n, a) for n, a in self.members if a > 0)

    def symbols(self):
        return frozenset(function_symbol(n, a) for n, a in self.members)

    def __contains__(self, item):
        return item in self.members

    def __iter__(self):
        return iter(sorted(self.members, key=lambda m: (m[1], sort_key(m[0]))))

    def __len__(self):
        return len(self.members)

    def __str__(self):
        return ", ".join(f"{n}/{a}" for n, a in self)


def herbrand_size(cf: ConstructorSet, depth: int) -> int:
    """Number of ground terms over ``cf`` of depth at most ``depth`` (capped at SIZE_CAP)."""
    c = len(cf.constants)
    size = c
    for _ in range(depth):
        nxt = c
        for _, arity in cf.functions:
            nxt += size**arity
            if nxt > SIZE_CAP:
                return SIZE_CAP
        if nxt == size:
            break
        size = nxt
    return size


def herbrand_universe(cf: ConstructorSet, depth: int, limit: Optional[int] = None) -> frozenset:
    """All ground terms over ``cf`` of depth <= ``depth``; empty when cf has no constants."""
    if depth < 0:
        raise ValueError("depth bound must be non-negative")
    if limit is not None:
        size = herbrand_size(cf, depth)
        if size > limit:
            raise UniverseTooLarge(
                f"Herbrand universe at depth {depth} has {size if size < SIZE_CAP else 'over 10^18'} "
                f"terms (limit {limit})"
            )
    consts = [Fn(c) for c in sorted(cf.constants, key=sort_key)]
    level = set(consts)
    funcs = sorted(cf.functions)
    for _ in range(depth):
        nxt = set(consts)
        for name, arity in funcs:
            for args in itertools.product(level, repeat=arity):
                nxt.add(Fn(name, args))
        if nxt == level:
            break
        level = nxt
    return frozenset(level)


def constructor_subterms(t, cf: ConstructorSet):
    """Subterms of a ground term reachable through constructor applications."""
    yield t
    if isinstance(t, Fn) and (t.name, len(t.args)) in cf.members:
        for a in t.args:
            yield from constructor_subterms(a, cf)


# -- symbol values ----------------------------------------------------------


@dataclass(frozen=True)
class Relation:
    arity: int
    tuples: frozenset = frozenset()

    def __post_init__(self):
        tuples = frozenset(tuple(t) for t in self.tuples)
        for t in tuples:
            if len(t) != self.arity:
                raise ValueError(f"tuple {t} does not have arity {self.arity}")
        object.__setattr__(self, "tuples", tuples)

    def __contains__(self, tup):
        return tup in self.tuples

    def __iter__(self):
        return iter(self.tuples)

    def __len__(self):
        return len(self.tuples)

    def sorted(self):
        return sorted(self.tuples, key=lambda t: tuple(sort_key(x) for x in t))


@dataclass(frozen=True)
class FunctionTable:
    arity: int
    table: Mapping = field(default_factory=dict)
    default: object = None

    def __post_init__(self):
        object.__setattr__(self, "table", MappingProxyType(dict(self.table)))

    def lookup(self, args):
        try:
            return self.table[args]
        except KeyError:
            if self.default is None:
                raise TotalityError(f"function undefined on {args}") from None
            return self.default


BUILTINS = ("product", "sum")


@dataclass(frozen=True)
class Builtin:
    """Integer product or sum over numeral constants; any other argument yields ``default``."""

    operation: str
    default: Fn
    arity: int = 2

    def __post_init__(self):
        if self.operation not in BUILTINS:
            raise ValueError(f"unknown builtin {self.operation!r}")


def _relations(preds) -> Mapping:
    out = {}
    for key, value in (preds or {}).items():
        name, arity = key, None
        if "/" in key:
            name, _, a = key.rpartition("/")
            arity = int(a)
        if isinstance(value, Relation):
            out[name] = value
            continue
        tuples = [tuple(t) if isinstance(t, (tuple, list)) else (t,) for t in value]
        if arity is None:
            if not tuples:
                raise ValueError(f"cannot infer the arity of empty relation {name}; use {name}/n")
            arity = len(tuples[0])
        out[name] = Relation(arity, frozenset(tuples))
    return out


class Structure:
    """Shared interface of both structure forms."""

    predicates: Mapping
    functions: Mapping

    def relation(self, pred) -> Relation:
        try:
            return self.predicates[pred]
        except KeyError:
            raise UnknownSymbol(f"predicate {pred} is not interpreted") from None

    def holds(self, pred, tup) -> bool:
        return tuple(tup) in self.relation(pred).tuples

    def interprets_predicate(self, pred) -> bool:
        return pred in self.predicates

    def with_predicates(self, values: Mapping):
        merged = dict(self.predicates)
        merged.update(_relations(values))
        return replace(self, predicates=merged)

    def without_predicates(self, names: Iterable[str]):
        names = set(names)
        return replace(self, predicates={p: r for p, r in self.predicates.items() if p not in names})

    def _predicate_symbols(self):
        return {Symbol(p, PREDICATE, r.arity) for p, r in self.predicates.items()}


@dataclass(frozen=True)
class ExtensionalStructure(Structure):
    domain: tuple
    predicates: Mapping = field(default_factory=dict)
    functions: Mapping = field(default_factory=dict)

    def __post_init__(self):
        domain = tuple(sorted(set(self.domain), key=sort_key))
        if not domain:
            raise ValueError("a structure needs a non-empty universe")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "predicates", MappingProxyType(_relations(self.predicates)))
        object.__setattr__(self, "functions", MappingProxyType(dict(self.functions)))
        elems = set(domain)
        for p, rel in self.predicates.items():
            for tup in rel.tuples:
                for x in tup:
                    if x not in elems:
                        raise UnknownElement(f"{x!r} in {p} is not a domain element")
        for f, fn in self.functions.items():
            for key, val in fn.table.items():
                if len(key) != fn.arity or any(x not in elems for x in key) or val not in elems:
                    raise UnknownElement(f"entry {key} -> {val} of {f} leaves the domain")
            if fn.default is not None and fn.default not in elems:
                raise UnknownElement(f"default {fn.default!r} of {f} is not a domain element")
            if fn.default is None and len(fn.table) != len(domain) ** fn.arity:
                raise TotalityError(f"function {f}/{fn.arity} is not total on the domain")

    @classmethod
    def build(cls, domain, predicates=None, constants=None, functions=None):
        """Convenience constructor; ``functions`` maps name -> (arity, table[, default])."""
        funcs = {}
        for c, v in (constants or {}).items():
            funcs[c] = FunctionTable(0, {(): v})
        for f, spec in (functions or {}).items():
            arity, table, *rest = spec
            funcs[f] = FunctionTable(arity, {tuple(k): v for k, v in table.items()}, rest[0] if rest else None)
        return cls(tuple(domain), predicates or {}, funcs)

    @property
    def vocabulary(self) -> Vocabulary:
        syms = self._predicate_symbols()
        syms |= {function_symbol(f, t.arity) for f, t in self.functions.items()}
        return Vocabulary(frozenset(syms))

    @cached_property
    def _elements(self):
        return frozenset(self.domain)

    def is_element(self, x) -> bool:
        return x in self._elements

    def apply(self, name, args):
        fn = self.functions.get(name)
        if fn is None or fn.arity != len(args):
            raise UnknownSymbol(f"function {name}/{len(args)} is not interpreted")
        return fn.lookup(tuple(args))

    def constants(self) -> dict:
        return {f: t.lookup(()) for f, t in self.functions.items() if t.arity == 0}

    def reduct(self, symbols: Iterable[Symbol]):
        symbols = set(symbols)
        preds = {p: r for p, r in self.predicates.items() if Symbol(p, PREDICATE, r.arity) in symbols}
        funcs = {f: t for f, t in self.functions.items() if function_symbol(f, t.arity) in symbols}
        return ExtensionalStructure(self.domain, preds, funcs)


@dataclass(frozen=True)
class TermGeneratedStructure(Structure):
    """Domain = ground terms over ``constructors`` of depth <= ``depth``.

    ``focus`` lists terms of interest for evaluation; ``scope``, when set, is
    the finite sub-universe over which the defined predicate values were
    computed.
    """

    constructors: ConstructorSet
    depth: int
    predicates: Mapping = field(default_factory=dict)
    functions: Mapping = field(default_factory=dict)
    focus: frozenset = frozenset()
    scope: Optional[frozenset] = None

    def __post_init__(self):
        if not self.constructors.constants:
            raise EmptyUniverse("constructor set has no constants: the Herbrand universe is empty")
        if self.depth < 0:
            raise ValueError("depth bound must be non-negative")
        object.__setattr__(self, "predicates", MappingProxyType(_relations(self.predicates)))
        object.__setattr__(self, "functions", MappingProxyType(dict(self.functions)))
        object.__setattr__(self, "focus", frozenset(self.focus))
        if self.scope is not None:
            object.__setattr__(self, "scope", frozenset(self.scope))
        for f, fn in self.functions.items():
            if (f, fn.arity) in self.constructors.members:
                raise ValueError(f"{f}/{fn.arity} is a constructor and cannot be reinterpreted")
            default = getattr(fn, "default", None)
            if default is not None and not self.is_element(default):
                raise UnknownElement(f"default {default!r} of {f} is not in the universe")
            if isinstance(fn, FunctionTable):
                for key, val in fn.table.items():
                    if len(key) != fn.arity or not all(map(self.is_element, key)) or not self.is_element(val):
                        raise UnknownElement(f"entry of {f} leaves the universe")
                if fn.default is None:
                    size = herbrand_size(self.constructors, self.depth)
                    if len(fn.table) != size**fn.arity:
                        raise TotalityError(f"function {f}/{fn.arity} needs a default element")
        for p, rel in self.predicates.items():
            for tup in rel.tuples:
                for x in tup:
                    if not self.is_element(x):
                        raise UnknownElement(f"{x!r} in {p} is not in the depth-{self.depth} universe")
        for t in self.focus:
            if not self.is_element(t):
                raise DepthExceeded(f"focus term {t!r} is not in the depth-{self.depth} universe")

    @property
    def vocabulary(self) -> Vocabulary:
        syms = self._predicate_symbols() | self.constructors.symbols()
        syms |= {function_symbol(f, t.arity) for f, t in self.functions.items()}
        return Vocabulary(frozenset(syms))

    @property
    def finite_universe(self) -> bool:
        return not self.constructors.functions

    def is_element(self, x) -> bool:
        if not isinstance(x, Fn) or x.depth > self.depth:
            return False
        return self._constructor_term(x)

    def _constructor_term(self, t) -> bool:
        if (t.name, len(t.args)) not in self.constructors.members:
            return False
        return all(isinstance(a, Fn) and self._constructor_term(a) for a in t.args)

    def universe(self, limit=None) -> frozenset:
        return herbrand_universe(self.constructors, self.depth, limit)

    def apply(self, name, args):
        args = tuple(args)
        if (name, len(args)) in self.constructors.members:
            t = Fn(name, args)
            if t.depth > self.depth:
                raise DepthExceeded(f"{t!r} exceeds depth bound {self.depth}")
            return t
        fn = self.functions.get(name)
        if fn is None or fn.arity != len(args):
            raise UnknownSymbol(f"function {name}/{len(args)} is not interpreted")
        if isinstance(fn, Builtin):
            return self._builtin(fn, args)
        return fn.lookup(args)

    def _builtin(self, fn: Builtin, args):
        values = [numeral_value(a) for a in args]
        if any(v is None for v in values):
            return fn.default
        result = 1 if fn.operation == "product" else 0
        for v in values:
            result = result * v if fn.operation == "product" else result + v
        if (str(result), 0) not in self.constructors.members:
            raise NumeralOverflow(f"numeral {result} is outside the declared constructors")
        return Fn(str(result))

    def to_extensional(self) -> ExtensionalStructure:
        """Tabulate a structure whose universe is finite (constants only)."""
        if not self.finite_universe:
            raise UnsupportedForm("only constant-only constructor sets have a finite universe")
        dom = sorted(self.universe(), key=sort_key)
        name = {t: t.name for t in dom}
        funcs = {c: FunctionTable(0, {(): c}) for c in self.constructors.constants}
        for f, fn in self.functions.items():
            table = {}
            for args in itertools.product(dom, repeat=fn.arity):
                table[tuple(name[a] for a in args)] = name[self.apply(f, args)]
            funcs[f] = FunctionTable(fn.arity, table)
        preds = {
            p: Relation(r.arity, frozenset(tuple(name[x] for x in t) for t in r.tuples))
            for p, r in self.predicates.items()
        }
        return ExtensionalStructure(tuple(name.values()), preds, funcs)


# -- evaluation -------------------------------------------------------------


def evaluate_term(m: Structure, assignment: Mapping, t):
    """Value of ``t`` in ``m`` under a variable assignment."""
    if isinstance(t, Var):
        try:
            return assignment[t]
        except KeyError:
            raise UnknownSymbol(f"variable {t.name} is unassigned") from None
    if isinstance(m, TermGeneratedStructure) and t.ground and m.is_element(t):
        return t
    return m.apply(t.name, tuple(evaluate_term(m, assignment, a) for a in t.args))


def evaluate_atom(m: Structure, assignment: Mapping, lit) -> bool:
    """Truth value of a body literal (atom, t, f, =, distinct, or classical not)."""
    if isinstance(lit, Truth):
        return lit.value
    if isinstance(lit, Atom):
        return m.holds(lit.pred, tuple(evaluate_term(m, assignment, a) for a in lit.args))
    if isinstance(lit, Not):
        return not evaluate_atom(m, assignment, lit.atom)
    if isinstance(lit, Equals):
        return evaluate_term(m, assignment, lit.left) == evaluate_term(m, assignment, lit.right)
    if isinstance(lit, NotEquals):
        return evaluate_term(m, assignment, lit.left) != evaluate_term(m, assignment, lit.right)
    raise TypeError(f"not a literal: {lit!r}")


# -- isomorphism ------------------------------------------------------------


@dataclass(frozen=True)
class Bijection:
    pairs: tuple

    def __post_init__(self):
        pairs = tuple(sorted(self.pairs, key=lambda p: sort_key(p[0])))
        left = [a for a, _ in pairs]
        right = [b for _, b in pairs]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise ValueError("a bijection must be injective in both directions")
        object.__setattr__(self, "pairs", pairs)

    @property
    def mapping(self) -> dict:
        return dict(self.pairs)

    def __call__(self, x):
        return self.mapping[x]

    def inverse(self):
        return Bijection(tuple((b, a) for a, b in self.pairs))


def _symbols(sigma) -> list:
    if isinstance(sigma, Vocabulary):
        return sorted(sigma.symbols)
    return sorted(sigma)


def rename_elements(m: ExtensionalStructure, mapping: Mapping) -> ExtensionalStructure:
    """Image of ``m`` under a bijective renaming of its domain."""
    if sorted(mapping, key=sort_key) != list(m.domain) or len(set(mapping.values())) != len(m.domain):
        raise ValueError("renaming must be a bijection on the domain")
    preds = {
        p: Relation(r.arity, frozenset(tuple(mapping[x] for x in t) for t in r.tuples))
        for p, r in m.predicates.items()
    }
    funcs = {}
    for f, fn in m.functions.items():
        table = {
            tuple(mapping[x] for x in args): mapping[fn.lookup(args)]
            for args in itertools.product(m.domain, repeat=fn.arity)
        }
        funcs[f] = FunctionTable(fn.arity, table)
    return ExtensionalStructure(tuple(mapping[x] for x in m.domain), preds, funcs)


def find_isomorphism(m: Structure, n: Structure, sigma) -> Optional[Bijection]:
    """Bijection dom(m) -> dom(n) preserving every symbol in ``sigma``, or None.

    Exhaustive backtracking; constants force pairs, per-element occurrence
    counts prune candidates.
    """
    for s in (m, n):
        if not isinstance(s, ExtensionalStructure):
            raise UnsupportedForm("isomorphism search needs extensional structures")
    if len(m.domain) != len(n.domain):
        return None
    symbols = _symbols(sigma)
    preds = [s for s in symbols if s.kind == PREDICATE]
    funcs = [s for s in symbols if s.kind != PREDICATE]
    for s in symbols:
        for st in (m, n):
            if s.kind == PREDICATE:
                if st.relation(s.name).arity != s.arity:
                    raise UnknownSymbol(f"{s} is interpreted with another arity")
            elif s.name not in st.functions or st.functions[s.name].arity != s.arity:
                raise UnknownSymbol(f"{s} is not interpreted")
    for p in preds:
        if len(m.relation(p.name)) != len(n.relation(p.name)):
            return None

    forced = {}
    for c in (f for f in funcs if f.arity == 0):
        a, b = m.apply(c.name, ()), n.apply(c.name, ())
        if forced.setdefault(a, b) != b:
            return None
    if len(set(forced.values())) != len(forced):
        return None

    def signature(st, x):
        sig = []
        for p in preds:
            rel = st.relation(p.name)
            sig.append(tuple(sum(1 for t in rel.tuples if t[i] == x) for i in range(p.arity)))
        for f in funcs:
            if f.arity == 0:
                continue
            fn = st.functions[f.name]
            hits = [0] * (f.arity + 1)
            for args in itertools.product(st.domain, repeat=f.arity):
                for i, a in enumerate(args):
                    hits[i] += a == x
                hits[-1] += st.apply(f.name, args) == x
            sig.append(tuple(hits))
        return tuple(sig)

    sig_n = {y: signature(n, y) for y in n.domain}
    candidates = {}
    for x in m.domain:
        sx = signature(m, x)
        if x in forced:
            pool = [forced[x]] if sig_n[forced[x]] == sx else []
        else:
            pool = [y for y in n.domain if sig_n[y] == sx and y not in forced.values()]
        if not pool:
            return None
        candidates[x] = pool

    # constraints indexed by the elements they mention
    constraints = []
    for p in preds:
        target = n.relation(p.name).tuples
        for t in m.relation(p.name).tuples:
            constraints.append((set(t), ("p", t, target)))
    for f in funcs:
        if f.arity == 0:
            continue
        for args in itertools.product(m.domain, repeat=f.arity):
            val = m.apply(f.name, args)
            constraints.append((set(args) | {val}, ("f", f.name, args, val)))
    by_element = {x: [] for x in m.domain}
    for elems, c in constraints:
        for x in elems:
            by_element[x].append((elems, c))

    order = sorted(m.domain, key=lambda x: (x not in forced, len(candidates[x]), sort_key(x)))
    b = {}
    used = set()

    def consistent(x):
        for elems, c in by_element[x]:
            if not elems.issubset(b):
                continue
            if c[0] == "p":
                if tuple(b[e] for e in c[1]) not in c[2]:
                    return False
            else:
                _, name, args, val = c
                if n.apply(name, tuple(b[a] for a in args)) != b[val]:
                    return False
        return True

    def search(i):
        if i == len(order):
            return True
        x = order[i]
        for y in candidates[x]:
            if y in used:
                continue
            b[x] = y
            used.add(y)
            if consistent(x) and search(i + 1):
                return True
            del b[x]
            used.discard(y)
        return False

    if not search(0):
        return None
    return Bijection(tuple(b.items()))


# -- Herbrand axiom ---------------------------------------------------------


def herbrand_structure(cf: ConstructorSet) -> ExtensionalStructure:
    """The unique Herbrand structure of a constant-only constructor set."""
    if cf.functions:
        raise UnsupportedForm("only constant-only constructor sets have a finite Herbrand structure")
    consts = sorted(cf.constants, key=sort_key)
    return ExtensionalStructure(tuple(consts), {}, {c: FunctionTable(0, {(): c}) for c in consts})


def satisfies_herbrand_axiom(m: Structure, cf: ConstructorSet) -> bool:
    """Whether the universe of ``m`` is HU(cf) with cf as its constructors, up to isomorphism."""
    if not cf.constants:
        return False
    if isinstance(m, TermGeneratedStructure):
        if m.constructors == cf:
            if cf.functions:
                warnings.warn(
                    f"universe is HU(CF) truncated at depth {m.depth}", TruncationWarning, stacklevel=2
                )
            return True
        if not (cf.functions or m.constructors.functions):
            m = m.to_extensional()
        else:
            return False
    if cf.functions:
        return False
    symbols = cf.symbols()
    for s in symbols:
        if s.name not in m.functions or m.functions[s.name].arity != 0:
            return False
    return find_isomorphism(m.reduct(symbols), herbrand_structure(cf), symbols) is not None
