"""Brute-force checks that do not share code with the engine.

``brute_force_minimal_check`` transcribes minimal satisfaction directly: it
enumerates every value of the defined predicates over the domain and compares.
The Clark completion lives here too, with an enumerator of its models.
Candidate interpretations are encoded as bitmasks over the defined ground
atoms; every enumeration is bounded by an explicit budget.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Optional

from .errors import BudgetExceeded, UndefinedPredicate, UnsupportedForm
from .model import ExtensionalStructure, evaluate_term
from .syntax import Definition, Program
from .terms import (
    Atom,
    Equals,
    Fn,
    Not,
    NotEquals,
    Truth,
    Var,
    format_fact,
    format_term,
    literal_terms,
    sort_key,
    variables,
)

DEFAULT_BUDGET = 2**24


def default_budget() -> int:
    value = os.environ.get("DEFCHECK_BUDGET")
    return int(value) if value else DEFAULT_BUDGET


class _AtomIndex:
    """Bit positions of all ground atoms of the defined predicates over a domain."""

    def __init__(self, d: Definition, m: ExtensionalStructure):
        arities = d.arities
        self.atoms = [
            (p, tup) for p in sorted(d.defined) for tup in itertools.product(m.domain, repeat=arities[p])
        ]
        self.bit = {a: 1 << i for i, a in enumerate(self.atoms)}

    def __len__(self):
        return len(self.atoms)

    def encode(self, m) -> int:
        out = 0
        for (p, tup), b in self.bit.items():
            if tup in m.relation(p).tuples:
                out |= b
        return out

    def decode(self, mask) -> dict:
        out = {}
        for (p, tup), b in self.bit.items():
            out.setdefault(p, set())
            if mask & b:
                out[p].add(tup)
        return {p: frozenset(v) for p, v in out.items()}


def _check_budget(bits, budget):
    budget = default_budget() if budget is None else budget
    required = 2**bits
    if required > budget:
        raise BudgetExceeded(required, budget)


def _ground_literal(m, d, index, lit, env):
    """Returns True/False for literals fixed by m, else (bit, positive)."""
    if isinstance(lit, Truth):
        return lit.value
    if isinstance(lit, (Equals, NotEquals)):
        same = evaluate_term(m, env, lit.left) == evaluate_term(m, env, lit.right)
        return same if isinstance(lit, Equals) else not same
    atom = lit.atom if isinstance(lit, Not) else lit
    tup = tuple(env[a] if isinstance(a, Var) else evaluate_term(m, env, a) for a in atom.args)
    if atom.pred in d.defined:
        return (index.bit[(atom.pred, tup)], isinstance(lit, Atom))
    return (tup in m.relation(atom.pred).tuples) == isinstance(lit, Atom)


def _args_getter(args, names):
    """Function from an assignment tuple to the argument values."""
    if all(isinstance(a, Var) for a in args):
        idx = tuple(names.index(a) for a in args)
        return lambda m, values: tuple(values[i] for i in idx)
    return lambda m, values: tuple(evaluate_term(m, dict(zip(names, values)), a) for a in args)


def _rule_instances(m, d, index):
    """Each rule instance as (head bit, positive body mask, negative body mask)."""
    out = []
    for rule in d.rules:
        names = sorted(rule.variables, key=lambda v: v.name)
        head = _args_getter(rule.head.args, names)
        body = []
        for lit in rule.body:
            atom = lit.atom if isinstance(lit, Not) else lit
            if isinstance(atom, Atom):
                body.append((atom.pred, _args_getter(atom.args, names), isinstance(lit, Atom)))
            else:
                body.append((None, lit, None))
        for values in itertools.product(m.domain, repeat=len(names)):
            pos = neg = 0
            for pred, get, positive in body:
                if pred is None:
                    if not _ground_literal(m, d, index, get, dict(zip(names, values))):
                        break
                    continue
                tup = get(m, values)
                if pred in d.defined:
                    if positive:
                        pos |= index.bit[(pred, tup)]
                    else:
                        neg |= index.bit[(pred, tup)]
                elif (tup in m.relation(pred).tuples) != positive:
                    break
            else:
                out.append((index.bit[(rule.head.pred, head(m, values))], pos, neg))
    return out


def _is_model(mask, instances) -> bool:
    for head, pos, neg in instances:
        if mask & pos == pos and not mask & neg and not mask & head:
            return False
    return True


def brute_force_minimal_check(m: ExtensionalStructure, d: Definition, budget: Optional[int] = None) -> bool:
    """M satisfies D minimally: M is a model of the rules, and every structure N
    with the same domain and parameter values that is a model of the rules
    contains M's value of each defined predicate."""
    if not isinstance(m, ExtensionalStructure):
        raise UnsupportedForm("the brute-force oracle needs an extensional structure")
    if d.has_negation:
        raise UnsupportedForm("the brute-force oracle handles negation-free definitions only")
    index = _AtomIndex(d, m)
    _check_budget(len(index), budget)
    instances = _rule_instances(m, d, index)
    current = index.encode(m)
    if not _is_model(current, instances):
        return False
    for candidate in range(2 ** len(index)):
        if current & ~candidate and _is_model(candidate, instances):
            return False
    return True


# -- Clark completion ---------------------------------------------------------


@dataclass(frozen=True)
class Disjunct:
    exists: tuple  # existentially quantified variables
    equalities: tuple  # (Var, term) pairs
    body: tuple  # literals

    def __str__(self):
        parts = [f"{format_term(v)} = {format_term(t)}" for v, t in self.equalities]
        parts += [_render_literal(lit) for lit in self.body]
        inner = " ∧ ".join(parts) if parts else "true"
        if not self.exists:
            return inner
        if len(parts) > 1:
            inner = f"({inner})"
        return f"∃{','.join(v.name for v in self.exists)} {inner}"


def _render_literal(lit):
    if isinstance(lit, Not):
        return f"¬{lit.atom}"
    if isinstance(lit, NotEquals):
        return f"{format_term(lit.left)} ≠ {format_term(lit.right)}"
    return str(lit)


@dataclass(frozen=True)
class Completion:
    pred: str
    arity: int
    disjuncts: tuple

    @property
    def head(self) -> Atom:
        return Atom(self.pred, tuple(Var(f"X{i + 1}") for i in range(self.arity)))

    def __str__(self):
        parts = [str(x) for x in self.disjuncts]
        if len(parts) > 1:
            parts = [f"({x})" if " ∧ " in x and not x.startswith("∃") else x for x in parts]
        rhs = " ∨ ".join(parts) if parts else "false"
        return f"{self.head} <-> {rhs}"


@dataclass(frozen=True)
class CompletionTheory:
    definition: Definition
    equivalences: tuple

    def __str__(self):
        return "\n".join(str(e) for e in self.equivalences)


def _substitute(t, sub):
    if isinstance(t, Var):
        return sub.get(t, t)
    if t.ground:
        return t
    return Fn(t.name, tuple(_substitute(a, sub) for a in t.args))


def _substitute_literal(lit, sub):
    if isinstance(lit, Atom):
        return Atom(lit.pred, tuple(_substitute(a, sub) for a in lit.args))
    if isinstance(lit, Not):
        return Not(_substitute_literal(lit.atom, sub))
    if isinstance(lit, (Equals, NotEquals)):
        return type(lit)(_substitute(lit.left, sub), _substitute(lit.right, sub))
    return lit


def _complete_rule(rule, arity) -> Disjunct:
    heads = [Var(f"X{i + 1}") for i in range(arity)]
    head_names = {v.name for v in heads}
    used = head_names | {v.name for v in rule.variables}
    rename = {}
    for v in sorted(rule.variables, key=lambda v: v.name):
        if v.name in head_names:
            fresh = next(f"{v.name}_{k}" for k in itertools.count(1) if f"{v.name}_{k}" not in used)
            used.add(fresh)
            rename[v] = Var(fresh)
    bind, pending = {}, []
    for x, t in zip(heads, rule.head.args):
        t = _substitute(t, rename)
        if isinstance(t, Var) and t not in bind:
            bind[t] = x
        else:
            pending.append((x, t))
    equalities = tuple((x, _substitute(t, bind)) for x, t in pending)
    body = tuple(_substitute_literal(_substitute_literal(lit, rename), bind) for lit in rule.body)
    free = set()
    for _, t in equalities:
        free.update(variables(t))
    for lit in body:
        for t in literal_terms(lit):
            free.update(variables(t))
    exists = tuple(sorted((v for v in free if v not in heads), key=lambda v: v.name))
    return Disjunct(exists, equalities, body)


def clark_completion(d: Definition) -> CompletionTheory:
    """One equivalence per defined predicate, disjoining its rule bodies."""
    arities = d.arities
    out = []
    for p in sorted(d.defined):
        disjuncts = tuple(_complete_rule(r, arities[p]) for r in d.rules if r.head.pred == p)
        out.append(Completion(p, arities[p], disjuncts))
    return CompletionTheory(d, tuple(out))


def _ground_completion(ct, m, index):
    """Per defined atom bit, the list of (positive mask, negative mask) supports."""
    supports = {b: [] for b in index.bit.values()}
    for eq in ct.equivalences:
        heads = eq.head.args
        for tup in itertools.product(m.domain, repeat=eq.arity):
            bit = index.bit[(eq.pred, tup)]
            for disj in eq.disjuncts:
                for values in itertools.product(m.domain, repeat=len(disj.exists)):
                    env = dict(zip(heads, tup))
                    env.update(zip(disj.exists, values))
                    lits = [Equals(x, t) for x, t in disj.equalities] + list(disj.body)
                    pos = neg = 0
                    for lit in lits:
                        g = _ground_literal(m, ct.definition, index, lit, env)
                        if g is False:
                            break
                        if g is not True:
                            if g[1]:
                                pos |= g[0]
                            else:
                                neg |= g[0]
                    else:
                        supports[bit].append((pos, neg))
    return supports


def enumerate_completion_models(ct: CompletionTheory, m: ExtensionalStructure, budget: Optional[int] = None) -> list:
    """All values of the defined predicates satisfying every completed equivalence,
    parameters taken from ``m``; sorted by size, then by atoms."""
    if not isinstance(m, ExtensionalStructure):
        raise UnsupportedForm("completion models are enumerated over extensional structures")
    index = _AtomIndex(ct.definition, m)
    _check_budget(len(index), budget)
    supports = _ground_completion(ct, m, index)
    items = list(supports.items())
    found = []
    for mask in range(2 ** len(index)):
        ok = True
        for bit, sups in items:
            derived = any(mask & pos == pos and not mask & neg for pos, neg in sups)
            if derived != bool(mask & bit):
                ok = False
                break
        if ok:
            found.append(mask)
    models = [index.decode(mask) for mask in found]
    return sorted(models, key=_model_key)


def _model_key(values):
    facts = sorted(
        (p, tuple(sort_key(x) for x in t)) for p in values for t in values[p]
    )
    return (len(facts), facts)


def format_model(values, loose=True) -> str:
    facts = [
        format_fact(p, t, loose)
        for p in sorted(values)
        for t in sorted(values[p], key=lambda t: tuple(sort_key(x) for x in t))
    ]
    return "{" + ", ".join(facts) + "}"


# -- Horn reading versus definitional reading ---------------------------------


@dataclass(frozen=True)
class GapEntry:
    atom: Atom
    in_lhm: bool
    exact: bool
    true_in_some_horn_model: bool
    entailed_by_horn_theory: bool

    @property
    def gap(self) -> bool:
        """Definitionally false, yet the Horn theory cannot refute it."""
        return not self.in_lhm and self.true_in_some_horn_model


def horn_entailment_gap_report(p: Program, atoms, depth: int, universe_limit=None) -> list:
    """For each ground atom over a defined predicate: its truth in the least
    Herbrand model, and whether models of the rules read as a Horn theory can
    make it true (the interpretation with every atom true always can) or must
    make it true (exactly when it is in the least model)."""
    from .engine import UNIVERSE_LIMIT, entails_literal

    if p.definition.has_negation:
        raise UnsupportedForm("the Horn reading needs a negation-free program")
    out = []
    for atom in atoms:
        if atom.pred not in p.definition.defined:
            raise UndefinedPredicate(f"{atom.pred} is not defined by the program")
        verdict = entails_literal(p, atom, depth, universe_limit or UNIVERSE_LIMIT)
        out.append(GapEntry(atom, verdict.holds, verdict.exactness.exact, True, verdict.holds))
    return out
