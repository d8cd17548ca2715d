"""Rules, definitions and their dependency structure."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Mapping, Optional

import networkx as nx

from .errors import ArityError, EmptyDefinition, NotAPartition, NotStratified
from .model import PREDICATE, ConstructorSet, Symbol, function_symbol
from .terms import (
    PLUS,
    TIMES,
    Atom,
    Equals,
    Fn,
    Not,
    NotEquals,
    Truth,
    Var,
    literal_terms,
    literal_vars,
    subterms,
    variables,
)

# function symbols produced by infix operators; never inferred as constructors
OPERATORS = frozenset({(TIMES, 2), (PLUS, 2)})


@dataclass(frozen=True)
class Rule:
    head: Atom
    body: tuple = ()

    def __post_init__(self):
        if not isinstance(self.head, Atom):
            raise TypeError("a rule head must be a predicate atom")
        body = tuple(self.body)
        for lit in body:
            if isinstance(lit, Not):
                if not isinstance(lit.atom, Atom):
                    raise TypeError("only predicate atoms may be negated")
            elif not isinstance(lit, (Atom, Equals, NotEquals, Truth)):
                raise TypeError(f"not a body literal: {lit!r}")
        object.__setattr__(self, "body", body)

    @cached_property
    def variables(self) -> frozenset:
        out = literal_vars(self.head)
        for lit in self.body:
            out |= literal_vars(lit)
        return frozenset(out)

    def __str__(self):
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(map(str, self.body))}."


def _body_atoms(rule):
    for lit in rule.body:
        if isinstance(lit, Atom):
            yield lit, True
        elif isinstance(lit, Not):
            yield lit.atom, False


def rule_symbols(rule) -> set:
    """Non-variable symbols of a rule as Symbol values."""
    out = {Symbol(rule.head.pred, PREDICATE, rule.head.arity)}
    for atom, _ in _body_atoms(rule):
        out.add(Symbol(atom.pred, PREDICATE, atom.arity))
    for lit in (rule.head,) + rule.body:
        for t in literal_terms(lit):
            for s in subterms(t):
                if isinstance(s, Fn):
                    out.add(function_symbol(s.name, len(s.args)))
    return out


def _check_arities(symbols):
    seen = {}
    for s in symbols:
        kind = "predicate" if s.kind == PREDICATE else "function"
        prev = seen.setdefault((kind, s.name), s.arity)
        if prev != s.arity:
            raise ArityError(f"{kind} {s.name} is used with arities {prev} and {s.arity}")


@dataclass(frozen=True)
class Definition:
    rules: tuple
    defined: frozenset = field(default=frozenset())
    parameters: frozenset = field(default=frozenset())

    @cached_property
    def symbols(self) -> frozenset:
        out = set()
        for r in self.rules:
            out |= rule_symbols(r)
        return frozenset(out)

    @cached_property
    def arities(self) -> dict:
        return {s.name: s.arity for s in self.symbols if s.kind == PREDICATE}

    @cached_property
    def parameter_predicates(self) -> frozenset:
        return frozenset(s.name for s in self.parameters if s.kind == PREDICATE)

    @cached_property
    def has_negation(self) -> bool:
        return any(isinstance(lit, Not) for r in self.rules for lit in r.body)

    def rules_for(self, preds) -> tuple:
        return tuple(r for r in self.rules if r.head.pred in preds)

    def __str__(self):
        return "\n".join(map(str, self.rules))


def classify(rules) -> Definition:
    """Build a Definition: defined = head predicates, parameters = every other symbol."""
    rules = tuple(rules)
    if not rules:
        raise EmptyDefinition("a definition needs at least one rule")
    symbols = set()
    for r in rules:
        symbols |= rule_symbols(r)
    _check_arities(symbols)
    defined = frozenset(r.head.pred for r in rules)
    params = frozenset(s for s in symbols if not (s.kind == PREDICATE and s.name in defined))
    return Definition(rules, defined, params)


# -- dependency analysis ----------------------------------------------------


@dataclass(frozen=True)
class DependencyGraph:
    """Edges (P, Q, positive): P occurs in the body of a rule with head Q."""

    vertices: frozenset
    edges: frozenset

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(sorted(self.vertices))
        for p, q, pos in sorted(self.edges):
            if g.has_edge(p, q):
                g[p][q]["negative"] = g[p][q]["negative"] or not pos
            else:
                g.add_edge(p, q, negative=not pos)
        return g


def dependency_graph(d: Definition) -> DependencyGraph:
    edges = set()
    vertices = set(d.defined)
    for r in d.rules:
        for atom, positive in _body_atoms(r):
            vertices.add(atom.pred)
            edges.add((atom.pred, r.head.pred, positive))
    return DependencyGraph(frozenset(vertices), frozenset(edges))


def is_inductive(d: Definition) -> bool:
    g = dependency_graph(d).to_networkx()
    try:
        nx.find_cycle(g)
    except nx.NetworkXNoCycle:
        return False
    return True


def _ordered_components(g: nx.DiGraph):
    cond = nx.condensation(g)
    members = cond.graph["mapping"]
    comps = {c: frozenset(n for n, k in members.items() if k == c) for c in cond.nodes}
    order = nx.lexicographical_topological_sort(cond, key=lambda c: min(comps[c]))
    return [comps[c] for c in order], members


@lru_cache(maxsize=4096)
def stratify(d: Definition) -> tuple:
    """Defined predicates grouped into strongly connected components, lowest first."""
    g = dependency_graph(d).to_networkx()
    comps, members = _ordered_components(g)
    for p, q, data in sorted(g.edges(data=True)):
        if data["negative"] and members[p] == members[q]:
            path = nx.shortest_path(g, q, p)
            cycle = [(a, b, not g[a][b]["negative"]) for a, b in zip(path, path[1:])]
            raise NotStratified(cycle + [(p, q, False)])
    strata = [c & d.defined for c in comps]
    return tuple(s for s in strata if s)


def is_stratified(d: Definition) -> bool:
    try:
        stratify(d)
    except NotStratified:
        return False
    return True


# -- partitions -------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str  # "scatter" or "cycle"
    predicates: tuple
    parts: tuple

    def __str__(self):
        if self.kind == "scatter":
            return f"rules for {', '.join(self.predicates)} are spread over parts {', '.join(self.parts)}"
        return f"dependency cycle across parts {' -> '.join(self.parts)}"


@dataclass(frozen=True)
class PartitionReport:
    ok: bool
    violations: tuple = ()


def _named_parts(parts) -> list:
    if isinstance(parts, Mapping):
        items = list(parts.items())
    else:
        items = [(f"D{i + 1}", p) for i, p in enumerate(parts)]
    return [(name, tuple(p.rules if isinstance(p, Definition) else p)) for name, p in items]


def validate_partition(d: Definition, parts) -> PartitionReport:
    """Check that every predicate lives in one part and parts depend acyclically."""
    named = _named_parts(parts)
    combined = Counter()
    for _, rules in named:
        combined.update(rules)
    if combined != Counter(d.rules):
        missing = Counter(d.rules) - combined
        extra = combined - Counter(d.rules)
        raise NotAPartition(
            f"parts do not partition the rules (missing {sum(missing.values())}, "
            f"duplicated or foreign {sum(extra.values())})"
        )
    violations = []
    home = {}
    for name, rules in named:
        for r in rules:
            home.setdefault(r.head.pred, [])
            if name not in home[r.head.pred]:
                home[r.head.pred].append(name)
    for pred in sorted(home):
        if len(home[pred]) > 1:
            violations.append(Violation("scatter", (pred,), tuple(home[pred])))

    g = nx.DiGraph()
    g.add_nodes_from(name for name, _ in named)
    for name, rules in named:
        for r in rules:
            for atom, _ in _body_atoms(r):
                for other in home.get(atom.pred, ()):
                    if other != name:
                        g.add_edge(other, name)
    for comp in sorted(nx.strongly_connected_components(g), key=min):
        if len(comp) > 1:
            cycle = nx.find_cycle(g.subgraph(comp))
            violations.append(Violation("cycle", (), tuple(a for a, _ in cycle) + (cycle[0][0],)))
    return PartitionReport(not violations, tuple(violations))


# -- programs ---------------------------------------------------------------


@dataclass(frozen=True)
class Program:
    """A definition together with the constructor set of its Herbrand axiom.

    ``universe_declared`` is False when the constructors were inferred from
    the rules; a program with no declared universe and no constant or
    function symbols is a bare definition (no Herbrand axiom applies).
    """

    definition: Definition
    constructors: ConstructorSet
    modules: Optional[tuple] = None
    universe_declared: bool = False

    def __post_init__(self):
        if not self.universe_declared:
            missing = [
                s for s in self.definition.parameters
                if s.kind != PREDICATE and (s.name, s.arity) not in self.constructors.members
                and (s.name, s.arity) not in OPERATORS
            ]
            if missing:
                raise ValueError(f"constructors do not cover {', '.join(map(str, sorted(missing)))}")
        if self.modules is not None:
            object.__setattr__(self, "modules", tuple(self.modules))

    @classmethod
    def from_rules(cls, rules, constructors=None, modules=None):
        d = classify(rules)
        declared = constructors is not None
        if constructors is None:
            constructors = infer_constructors(d)
        mods = None
        if modules is not None:
            mods = tuple((name, classify(rs)) for name, rs in _named_parts(modules))
        return cls(d, constructors, mods, declared)

    @property
    def bare(self) -> bool:
        return not self.universe_declared and not self.constructors.members

    @property
    def interpreted(self) -> frozenset:
        """Function symbols of the rules that are not constructors."""
        return frozenset(
            s for s in self.definition.parameters
            if s.kind != PREDICATE and (s.name, s.arity) not in self.constructors.members
        )

    def module(self, name) -> Definition:
        for n, d in self.modules or ():
            if n == name:
                return d
        raise KeyError(f"no module named {name!r}")

    @property
    def signature(self) -> frozenset:
        """All symbols of the program and its constructor set."""
        return self.definition.symbols | self.constructors.symbols()


def infer_constructors(d: Definition) -> ConstructorSet:
    return ConstructorSet(frozenset(
        (s.name, s.arity) for s in d.parameters
        if s.kind != PREDICATE and (s.name, s.arity) not in OPERATORS
    ))


# -- syntactic shape used for exactness ---------------------------------------


def computed_positions(d: Definition, cf: ConstructorSet) -> dict:
    """Per defined predicate, argument positions some head fills with a non-constructor term."""
    out = {p: set() for p in d.defined}
    for r in d.rules:
        for i, t in enumerate(r.head.args):
            if any(isinstance(s, Fn) and (s.name, len(s.args)) not in cf.members for s in subterms(t)):
                out[r.head.pred].add(i)
    return {p: frozenset(v) for p, v in out.items()}


def _constructor_paths(t, cf):
    yield t
    if isinstance(t, Fn) and (t.name, len(t.args)) in cf.members:
        for a in t.args:
            yield from _constructor_paths(a, cf)


def is_subterm_bounded(d: Definition, cf: ConstructorSet, computed=None) -> bool:
    """Whether every derivation of an atom only involves subterms of that atom.

    Holds when, in every rule, (i) each argument of a positive defined body atom
    at a non-computed position is a constructor-subterm of a head argument at a
    non-computed position, and (ii) each variable not bound by a positive body
    atom is such a subterm as well. Under this condition depth truncation and
    restriction to a subterm-closed universe are both exact.
    """
    if computed is None:
        computed = computed_positions(d, cf)
    for r in d.rules:
        structural = set()
        for i, t in enumerate(r.head.args):
            if i not in computed[r.head.pred]:
                structural.update(_constructor_paths(t, cf))
        bound = set()
        for lit in r.body:
            if isinstance(lit, Atom):
                bound |= literal_vars(lit)
                if lit.pred in d.defined:
                    for i, t in enumerate(lit.args):
                        if i not in computed[lit.pred] and t not in structural:
                            return False
        changed = True
        while changed:
            changed = False
            for lit in r.body:
                if isinstance(lit, Equals):
                    for a, b in ((lit.left, lit.right), (lit.right, lit.left)):
                        if isinstance(a, Var) and a not in bound and set(variables(b)) <= bound:
                            bound.add(a)
                            changed = True
        for v in r.variables - bound:
            if v not in structural:
                return False
    return True
