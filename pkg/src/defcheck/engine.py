"""Bottom-up evaluation of definitions.

All entry points are pure functions of their arguments. Evaluation runs over
an *active universe*: the whole domain of an extensional structure, the
depth-bounded Herbrand universe of a term-generated one, or, when that is too
large and focus terms are given, the constructor-subterm closure of the focus.
Every result carries an ``Exactness`` flag saying whether the finitization
could have changed it.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Mapping, Optional

from .errors import (
    DepthExceeded,
    EmptyUniverse,
    NotAPartition,
    NumeralOverflow,
    TruncatedUniverse,
    TruncationError,
    UndefinedPredicate,
    UnknownSymbol,
    UniverseTooLarge,
)
from .model import (
    ExtensionalStructure,
    Relation,
    Structure,
    TermGeneratedStructure,
    TruncationWarning,
    constructor_subterms,
    evaluate_term,
    find_isomorphism,
    herbrand_size,
    satisfies_herbrand_axiom,
)
from .syntax import (
    Definition,
    Program,
    computed_positions,
    is_subterm_bounded,
    stratify,
    validate_partition,
)
from .terms import (
    Atom,
    Equals,
    Fn,
    Not,
    NotEquals,
    Truth,
    Var,
    format_fact,
    literal_terms,
    sort_key,
    subterms,
    variables,
)

UNIVERSE_LIMIT = 20_000


@dataclass(frozen=True)
class Exactness:
    exact: bool = True
    reasons: tuple = ()

    def __and__(self, other):
        if self.exact and other.exact:
            return self
        reasons = tuple(dict.fromkeys(self.reasons + other.reasons))
        return Exactness(False, reasons)

    def __str__(self):
        return "exact" if self.exact else f"truncated ({'; '.join(self.reasons)})"


EXACT = Exactness()


def truncated(reason) -> Exactness:
    return Exactness(False, (reason,))


@dataclass(frozen=True, order=True)
class Fact:
    pred: str
    args: tuple

    def __str__(self):
        return format_fact(self.pred, self.args)

    def sort_key(self):
        return (self.pred, tuple(sort_key(a) for a in self.args))


@dataclass(frozen=True)
class GroundRule:
    head: Fact
    body: tuple = ()  # of (Fact, positive)

    def __str__(self):
        if not self.body:
            return f"{self.head}."
        lits = ", ".join(str(f) if pos else f"not {f}" for f, pos in self.body)
        return f"{self.head} :- {lits}."


@dataclass(frozen=True)
class Grounding:
    rules: tuple
    instantiations: int
    exactness: Exactness = EXACT


@dataclass(frozen=True)
class Verdict:
    holds: bool
    exactness: Exactness = EXACT

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class Expansion:
    structure: Structure
    defined: frozenset
    exactness: Exactness = EXACT

    def values(self) -> dict:
        return {p: self.structure.relation(p).tuples for p in sorted(self.defined)}

    def facts(self) -> list:
        out = [Fact(p, t) for p in sorted(self.defined) for t in self.structure.relation(p).tuples]
        return sorted(out, key=Fact.sort_key)


@dataclass(frozen=True)
class TraceStep:
    index: int
    stratum: int
    new: tuple
    fired: tuple


@dataclass(frozen=True)
class InductionTrace:
    states: tuple
    steps: tuple
    exactness: Exactness = EXACT

    @property
    def limit(self) -> Mapping:
        return self.states[-1]

    @property
    def order(self) -> tuple:
        """Facts in order of first derivation."""
        return tuple(f for step in self.steps for f in step.new)

    def first_step(self, fact) -> Optional[int]:
        for step in self.steps:
            if fact in step.new:
                return step.index
        return None


# -- the evaluation context ---------------------------------------------------


class _Evaluation:
    def __init__(self, d: Definition, m: Structure, focus=(), universe_limit=UNIVERSE_LIMIT):
        self.d = d
        self.m = m
        self.events = set()
        self._ground_values = {}
        self.restricted = False
        if isinstance(m, ExtensionalStructure):
            self.cf = None
            self.computed = {p: frozenset() for p in d.defined}
            self.universe = tuple(m.domain)
            self.base = EXACT
        else:
            self._term_universe(focus, universe_limit)
        self.universe_set = frozenset(self.universe)

    def _term_universe(self, focus, limit):
        m, d = self.m, self.d
        cf = self.cf = m.constructors
        self.computed = computed_positions(d, cf)
        bounded = is_subterm_bounded(d, cf, self.computed)
        focus = set(m.focus) | set(focus)
        for t in focus:
            if not m.is_element(t):
                raise DepthExceeded(f"{t!r} is not in the depth-{m.depth} universe")
        size = herbrand_size(cf, m.depth)
        self.base = EXACT
        if not (m.finite_universe or bounded):
            self.base = truncated(f"universe truncated at depth {m.depth}; rules are not subterm-bounded")
        if focus and (bounded or size > limit):
            self.universe = self._closure(focus)
            self.restricted = len(self.universe) < size
            if self.restricted and not bounded:
                self.base &= truncated("evaluated over focus terms only")
        else:
            if size > limit:
                raise UniverseTooLarge(
                    f"the depth-{m.depth} universe has {size if size < 10**18 else 'over 10^18'} terms "
                    f"(limit {limit}); supply focus terms or lower the depth"
                )
            self.universe = tuple(sorted(m.universe(), key=sort_key))

    def _closure(self, focus):
        m, cf = self.m, self.cf
        seeds = set(focus) | {Fn(c) for c in cf.constants}
        for r in self.d.rules:
            for lit in (r.head,) + r.body:
                for t in literal_terms(lit):
                    for s in subterms(t):
                        if isinstance(s, Fn) and s.ground and m.is_element(s):
                            seeds.add(s)
        for p, rel in m.predicates.items():
            if p not in self.d.defined:
                for tup in rel.tuples:
                    seeds.update(tup)
        out = set()
        for t in seeds:
            out.update(constructor_subterms(t, cf))
        return tuple(sorted(out, key=sort_key))

    @property
    def exactness(self) -> Exactness:
        out = self.base
        if "numeral" in self.events:
            out &= truncated("builtin results outside the declared numerals were dropped")
        return out

    @property
    def scope(self):
        return frozenset(self.universe) if self.restricted else None

    def note(self, err):
        self.events.add("numeral" if isinstance(err, NumeralOverflow) else "depth")

    def value(self, t, subst):
        if isinstance(t, Var):
            return subst[t]
        if t.ground:
            try:
                return self._ground_values[t]
            except KeyError:
                v = self._ground_values[t] = evaluate_term(self.m, {}, t)
                return v
        return evaluate_term(self.m, subst, t)

    def enumerate(self, free, subst):
        if not free:
            yield subst
            return
        for values in itertools.product(self.universe, repeat=len(free)):
            s = dict(subst)
            s.update(zip(free, values))
            yield s

    # matching a term pattern against an element
    def match(self, pattern, value, subst):
        if isinstance(pattern, Var):
            bound = subst.get(pattern, _MISSING)
            if bound is _MISSING:
                s = dict(subst)
                s[pattern] = value
                yield s
            elif bound == value:
                yield subst
            return
        free = [v for v in dict.fromkeys(variables(pattern)) if v not in subst]
        if not free:
            try:
                if self.value(pattern, subst) == value:
                    yield subst
            except TruncationError as e:
                self.note(e)
            return
        if self.cf is not None and (pattern.name, len(pattern.args)) in self.cf.members:
            if isinstance(value, Fn) and value.name == pattern.name and len(value.args) == len(pattern.args):
                yield from self.match_all(pattern.args, value.args, subst)
            return
        for s in self.enumerate(free, subst):
            try:
                if self.value(pattern, s) == value:
                    yield s
            except TruncationError as e:
                self.note(e)

    def match_all(self, patterns, values, subst):
        if not patterns:
            yield subst
            return
        for s in self.match(patterns[0], values[0], subst):
            yield from self.match_all(patterns[1:], values[1:], s)

    def solutions(self, rule, source):
        """Substitutions making the body true; ``source(i, pred)`` gives the
        relation consulted by the i-th body literal."""
        positives = [(i, lit) for i, lit in enumerate(rule.body) if isinstance(lit, Atom)]
        rest = [(i, lit) for i, lit in enumerate(rule.body) if not isinstance(lit, Atom)]
        all_vars = rule.variables

        def scan(k, subst):
            if k == len(positives):
                yield from self._finish(rest, subst, all_vars, source)
                return
            i, atom = positives[k]
            rel = source(i, atom.pred)
            if all(v in subst for a in atom.args for v in variables(a)):
                try:
                    tup = tuple(self.value(a, subst) for a in atom.args)
                except TruncationError as e:
                    self.note(e)
                    return
                if tup in rel:
                    yield from scan(k + 1, subst)
                return
            for tup in rel:
                for s in self.match_all(atom.args, tup, subst):
                    yield from scan(k + 1, s)

        yield from scan(0, {})

    def _finish(self, rest, subst, all_vars, source):
        subst = dict(subst)
        progress = True
        while progress:
            progress = False
            for _, lit in rest:
                if not isinstance(lit, Equals):
                    continue
                for a, b in ((lit.left, lit.right), (lit.right, lit.left)):
                    if isinstance(a, Var) and a not in subst and all(v in subst for v in variables(b)):
                        try:
                            subst[a] = self.value(b, subst)
                        except TruncationError as e:
                            self.note(e)
                            return
                        progress = True
                        break
        free = sorted((v for v in all_vars if v not in subst), key=lambda v: v.name)
        for s in self.enumerate(free, subst):
            if all(self._test(i, lit, s, source) for i, lit in rest):
                yield s

    def _test(self, i, lit, s, source):
        try:
            if isinstance(lit, Truth):
                return lit.value
            if isinstance(lit, Equals):
                return self.value(lit.left, s) == self.value(lit.right, s)
            if isinstance(lit, NotEquals):
                return self.value(lit.left, s) != self.value(lit.right, s)
            tup = tuple(self.value(a, s) for a in lit.atom.args)
            return tup not in source(i, lit.atom.pred)
        except TruncationError as e:
            self.note(e)
            return False

    def head(self, rule, s):
        """Head tuple for a solution, or None when it leaves the active universe."""
        args = rule.head.args
        computed = self.computed.get(rule.head.pred, frozenset())
        out = [None] * len(args)
        try:
            # positions checked against the scope first: an instance that
            # leaves it is dropped before any interpreted function runs
            for i in sorted(range(len(args)), key=lambda i: i in computed):
                out[i] = self.value(args[i], s)
                if self.restricted and i not in computed and out[i] not in self.universe_set:
                    return None
        except TruncationError as e:
            self.note(e)
            return None
        return tuple(out)

    def ground_body(self, rule, s):
        out = []
        for lit in rule.body:
            if isinstance(lit, Atom):
                out.append((Fact(lit.pred, tuple(self.value(a, s) for a in lit.args)), True))
            elif isinstance(lit, Not):
                out.append((Fact(lit.atom.pred, tuple(self.value(a, s) for a in lit.atom.args)), False))
        return tuple(out)

    def fire(self, rule, source):
        for s in self.solutions(rule, source):
            tup = self.head(rule, s)
            if tup is not None:
                yield tup, s


_MISSING = object()


def _parameter_values(d: Definition, m: Structure) -> dict:
    return {p: r.tuples for p, r in m.predicates.items() if p not in d.defined}


def _lookup(fixed):
    def base(pred):
        try:
            return fixed[pred]
        except KeyError:
            raise UnknownSymbol(f"predicate {pred} is not interpreted") from None

    return base


def _consequences(ev, rules, interp, base, record=False):
    """One application of all rules: heads whose bodies hold in (m, interp)."""
    out = {p: set() for p in interp}
    fired = []

    def source(i, pred):
        return interp[pred] if pred in interp else base(pred)

    for rule in rules:
        for tup, s in ev.fire(rule, source):
            out[rule.head.pred].add(tup)
            if record and tup not in interp[rule.head.pred]:
                fired.append(GroundRule(Fact(rule.head.pred, tup), ev.ground_body(rule, s)))
    return {p: frozenset(v) for p, v in out.items()}, fired


def _naive(ev, rules, preds, base):
    current = {p: frozenset() for p in preds}
    while True:
        nxt, _ = _consequences(ev, rules, current, base)
        if nxt == current:
            return current
        current = nxt


def _seminaive(ev, rules, preds, base):
    current = {p: set() for p in preds}
    delta, _ = _consequences(ev, rules, {p: frozenset() for p in preds}, base)
    delta = {p: set(v) for p, v in delta.items()}
    recursive = [
        (rule, [i for i, lit in enumerate(rule.body) if isinstance(lit, Atom) and lit.pred in preds])
        for rule in rules
    ]
    while any(delta.values()):
        for p in preds:
            current[p] |= delta[p]
        new = {p: set() for p in preds}
        for rule, positions in recursive:
            for j in positions:
                if not delta[rule.body[j].pred]:
                    continue

                def source(i, pred, j=j):
                    if i == j:
                        return delta[pred]
                    return current[pred] if pred in current else base(pred)

                for tup, _ in ev.fire(rule, source):
                    if tup not in current[rule.head.pred]:
                        new[rule.head.pred].add(tup)
        delta = new
    return {p: frozenset(v) for p, v in current.items()}


_METHODS = {"naive": _naive, "seminaive": _seminaive}


# -- public operations --------------------------------------------------------


def ground(d: Definition, m: Structure, focus=(), universe_limit=UNIVERSE_LIMIT) -> Grounding:
    """Instantiate every rule over the active universe.

    Equality, disequality, truth constants and parameter literals are
    evaluated in ``m`` and removed; instances with a false one are dropped.
    """
    ev = _Evaluation(d, m, focus, universe_limit)
    count = 0
    out = {}
    for rule in d.rules:
        rvars = sorted(rule.variables, key=lambda v: v.name)
        for values in itertools.product(ev.universe, repeat=len(rvars)):
            count += 1
            s = dict(zip(rvars, values))
            body = []
            try:
                for lit in rule.body:
                    atom = lit.atom if isinstance(lit, Not) else lit
                    if isinstance(atom, Atom) and atom.pred in d.defined:
                        f = Fact(atom.pred, tuple(ev.value(a, s) for a in atom.args))
                        body.append((f, isinstance(lit, Atom)))
                        continue
                    if isinstance(atom, Atom):
                        tup = tuple(ev.value(a, s) for a in atom.args)
                        if m.holds(atom.pred, tup) != isinstance(lit, Atom):
                            break
                    elif not ev._test(None, lit, s, None):
                        break
                else:
                    head = Fact(rule.head.pred, tuple(ev.value(a, s) for a in rule.head.args))
                    g = GroundRule(head, tuple(body))
                    out.setdefault(g, None)
            except TruncationError as e:
                ev.note(e)
    rules = tuple(sorted(out, key=str))
    return Grounding(rules, count, ev.exactness)


def immediate_consequence(d: Definition, m: Structure, s: Mapping, focus=(), universe_limit=UNIVERSE_LIMIT) -> dict:
    """Apply all rules once to the defined values ``s`` (parameters from ``m``)."""
    ev = _Evaluation(d, m, focus, universe_limit)
    interp = {p: frozenset(s.get(p, ())) for p in d.defined}
    out, _ = _consequences(ev, d.rules, interp, _lookup(_parameter_values(d, m)))
    return out


def induction_process(d: Definition, m: Structure, focus=(), universe_limit=UNIVERSE_LIMIT) -> InductionTrace:
    """States S0 (defined predicates empty), S1, ... up to the least fixpoint.

    Each step applies all applicable rules. A definition with negation is
    processed stratum by stratum, lower strata completed first.
    """
    ev = _Evaluation(d, m, focus, universe_limit)
    fixed = _parameter_values(d, m)
    groups = stratify(d) if d.has_negation else (d.defined,)
    state = {p: frozenset() for p in d.defined}
    states = [dict(state)]
    steps = []
    for k, stratum in enumerate(groups):
        rules = d.rules_for(stratum)
        base = _lookup({**fixed, **{p: v for p, v in state.items() if p not in stratum}})
        while True:
            current = {p: state[p] for p in stratum}
            nxt, fired = _consequences(ev, rules, current, base, record=True)
            new = sorted((Fact(p, t) for p in nxt for t in nxt[p] - current[p]), key=Fact.sort_key)
            if not new:
                break
            state.update(nxt)
            states.append(dict(state))
            fired = tuple(sorted(set(fired), key=lambda g: (g.head.sort_key(), str(g))))
            steps.append(TraceStep(len(steps) + 1, k, tuple(new), fired))
    return InductionTrace(tuple(states), tuple(steps), ev.exactness)


def unique_expansion(d: Definition, m: Structure, focus=(), method="seminaive", stratified=True,
                     universe_limit=UNIVERSE_LIMIT) -> Expansion:
    """Extend the parameter values of ``m`` with the defined values fixed by ``d``.

    Strata are evaluated lowest first, each one's least fixpoint taking the
    lower strata as given. ``stratified=False`` computes one joint fixpoint
    (only meaningful without negation).
    """
    values, ev = _expand(d, m, focus, method, stratified, universe_limit)
    arities = d.arities
    out = m.with_predicates({p: Relation(arities[p], values[p]) for p in d.defined})
    if isinstance(out, TermGeneratedStructure):
        out = replace(out, focus=out.focus | frozenset(focus), scope=ev.scope)
    return Expansion(out, d.defined, ev.exactness)


def _expand(d, m, focus, method="seminaive", stratified=True, universe_limit=UNIVERSE_LIMIT):
    """Defined values (ignoring any that ``m`` already carries) and the evaluation context."""
    ev = _Evaluation(d, m, focus, universe_limit)
    run = _METHODS[method]
    fixed = _parameter_values(d, m)
    if stratified or d.has_negation:
        groups = stratify(d)
    if not stratified:
        groups = (d.defined,)
    for stratum in groups:
        fixed.update(run(ev, d.rules_for(stratum), stratum, _lookup(fixed)))
    return {p: fixed[p] for p in d.defined}, ev


def is_derivation_sequence(d: Definition, m: Structure, facts, focus=()) -> bool:
    """Whether ``facts`` can be produced one at a time, each by a rule whose body
    holds among its predecessors."""
    ev = _Evaluation(d, m, focus)
    base = _lookup(_parameter_values(d, m))
    seen = {p: set() for p in d.defined}
    for f in facts:
        interp = {p: frozenset(v) for p, v in seen.items()}
        nxt, _ = _consequences(ev, d.rules_for({f.pred}) or (), interp, base)
        if f.args not in nxt.get(f.pred, ()):
            return False
        seen[f.pred].add(f.args)
    return True


def satisfies_fo(m: Structure, d: Definition, universe_limit=UNIVERSE_LIMIT) -> bool:
    """Every ground instance of every rule holds in ``m`` as a material implication."""
    ev = _Evaluation(d, m, (), universe_limit) if not getattr(m, "focus", None) else _Evaluation(d, m, m.focus, universe_limit)
    for p in d.defined:
        m.relation(p)

    def source(i, pred):
        return m.relation(pred).tuples

    for rule in d.rules:
        rel = m.relation(rule.head.pred).tuples
        for s in ev.solutions(rule, source):
            try:
                tup = tuple(ev.value(a, s) for a in rule.head.args)
            except TruncationError as e:
                ev.note(e)
                continue
            if tup not in rel:
                return False
    if ev.restricted:
        raise TruncatedUniverse("no violation among instances over the focus universe")
    return True


def _defined_terms(m, d):
    out = set()
    for p in d.defined:
        for tup in m.relation(p).tuples:
            out.update(tup)
    return out


def check_definition(m: Structure, d: Definition, universe_limit=UNIVERSE_LIMIT) -> Verdict:
    """Does ``m`` interpret the defined predicates exactly as ``d`` determines from its parameters?"""
    for p in d.defined:
        m.relation(p)
    focus = _defined_terms(m, d) if isinstance(m, TermGeneratedStructure) else ()
    values, ev = _expand(d, m, focus, universe_limit=universe_limit)
    agree = all(m.relation(p).tuples == values[p] for p in d.defined)
    exactness = ev.exactness
    if agree and ev.restricted:
        exactness &= truncated("agreement established over the focus universe only")
    return Verdict(agree, exactness)


def satisfies_def(m: Structure, d: Definition, universe_limit=UNIVERSE_LIMIT) -> bool:
    verdict = check_definition(m, d, universe_limit)
    if not verdict.exactness.exact:
        raise TruncatedUniverse(f"cannot decide satisfaction: {verdict.exactness}")
    return verdict.holds


@dataclass(frozen=True)
class ModelReport:
    herbrand: Optional[bool]  # None for a bare definition
    definition: Verdict
    modules: tuple = ()  # of (name, Verdict)
    notes: tuple = ()

    @property
    def ok(self) -> bool:
        return self.herbrand is not False and self.definition.holds


def _herbrand(m, p):
    if p.bare:
        return None, ()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TruncationWarning)
        ok = satisfies_herbrand_axiom(m, p.constructors)
    return ok, tuple(str(w.message) for w in caught)


def program_model_report(m: Structure, p: Program, module=None, universe_limit=UNIVERSE_LIMIT) -> ModelReport:
    """H(CF) and the definition (or one named module) checked separately."""
    herbrand, notes = _herbrand(m, p)
    d = p.module(module) if module else p.definition
    verdict = check_definition(m, d, universe_limit)
    mods = ()
    if p.modules and not module:
        mods = tuple((name, check_definition(m, sub, universe_limit)) for name, sub in p.modules)
    return ModelReport(herbrand, verdict, mods, notes)


def check_program_model(m: Structure, p: Program, universe_limit=UNIVERSE_LIMIT) -> bool:
    report = program_model_report(m, p, universe_limit=universe_limit)
    if report.herbrand is not False and not report.definition.exactness.exact:
        raise TruncatedUniverse(str(report.definition.exactness))
    return report.ok


def lhm(p: Program, depth: int, focus=(), functions=None, universe_limit=UNIVERSE_LIMIT) -> Expansion:
    """Least Herbrand model over the program's constructors, truncated at ``depth``."""
    base = herbrand_base(p, depth, focus, functions)
    return unique_expansion(p.definition, base, universe_limit=universe_limit)


def herbrand_base(p: Program, depth: int, focus=(), functions=None) -> TermGeneratedStructure:
    """The truncated Herbrand structure of the program with empty parameter predicates."""
    if not p.constructors.constants:
        raise EmptyUniverse("the constructor set has no constants: H(CF) is inconsistent")
    arities = p.definition.arities
    params = {q: Relation(arities[q]) for q in p.definition.parameter_predicates}
    return TermGeneratedStructure(p.constructors, depth, params, functions or {}, frozenset(focus))


@lru_cache(maxsize=64)
def _finite_lhm(p: Program) -> ExtensionalStructure:
    return lhm(p, 0).structure.to_extensional()


def entails_literal(p: Program, literal, depth: int, universe_limit=UNIVERSE_LIMIT) -> Verdict:
    """Truth of a ground literal over a defined predicate in the LHM (hence in every model)."""
    atom = literal.atom if isinstance(literal, Not) else literal
    if not isinstance(atom, Atom):
        raise TypeError("expected an atom or a negated atom")
    if atom.pred not in p.definition.defined:
        raise UndefinedPredicate(f"{atom.pred} is not defined by the program; its value is unconstrained")
    if any(not isinstance(t, Fn) or not t.ground for t in atom.args):
        raise ValueError("query literal must be ground")
    if not p.constructors.constants:
        raise EmptyUniverse("the constructor set has no constants: H(CF) is inconsistent")
    probe = TermGeneratedStructure(p.constructors, depth)
    tup = tuple(evaluate_term(probe, {}, t) for t in atom.args)
    exp = lhm(p, depth, focus=tup, universe_limit=universe_limit)
    value = exp.structure.holds(atom.pred, tup)
    return Verdict(value if isinstance(literal, Atom) else not value, exp.exactness)


@dataclass(frozen=True)
class SplitReport:
    partition_ok: bool
    herbrand: Optional[bool]
    isomorphic_to_lhm: Optional[bool]  # None when not checkable
    whole: Verdict  # D alone
    modules: tuple  # (name, Verdict) per module
    violations: tuple = ()

    @property
    def statement2(self) -> bool:
        return self.herbrand is not False and self.whole.holds

    @property
    def statement3(self) -> bool:
        return self.herbrand is not False and all(v.holds for _, v in self.modules)

    @property
    def agree(self) -> bool:
        same = self.statement2 == self.statement3
        if self.isomorphic_to_lhm is not None:
            same = same and self.isomorphic_to_lhm == self.statement2
        return same


def check_split_equivalence(p: Program, m: Structure, universe_limit=UNIVERSE_LIMIT) -> SplitReport:
    """Compare the whole definition against its declared modules on ``m``."""
    if p.modules is None:
        raise NotAPartition("the program declares no modules")
    report = validate_partition(p.definition, dict(p.modules))
    herbrand, _ = _herbrand(m, p)
    whole = check_definition(m, p.definition, universe_limit)
    mods = tuple((name, check_definition(m, d, universe_limit)) for name, d in p.modules)
    iso = None
    if (isinstance(m, ExtensionalStructure) and not p.bare and not p.constructors.functions
            and not p.interpreted):
        sigma = p.signature
        target = _finite_lhm(p)
        iso = herbrand is True and all(
            (s.name in m.predicates) if s.kind == "predicate" else (s.name in m.functions) for s in sigma
        ) and find_isomorphism(m, target, sigma) is not None
    return SplitReport(report.ok, herbrand, iso, whole, mods, report.violations)


def format_values(values: Mapping, loose=False) -> list:
    lines = []
    for p in sorted(values):
        for t in sorted(values[p], key=lambda t: tuple(sort_key(x) for x in t)):
            lines.append(format_fact(p, t, loose))
    return lines
