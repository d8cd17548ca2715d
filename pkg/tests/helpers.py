"""Shared fixtures: sample files, random structures and definitions, the sweep."""

import itertools
import random
from pathlib import Path

from defcheck.model import ExtensionalStructure, FunctionTable, Relation
from defcheck.parser import parse_program, parse_structure
from defcheck.syntax import Rule, classify, is_stratified
from defcheck.terms import Atom, Equals, Fn, Not, NotEquals, Var

ROOT = Path(__file__).resolve().parent.parent
PROGRAMS = ROOT / "programs"


def load_program(name):
    path = PROGRAMS / name
    return parse_program(path.read_text(), str(path))


def load_structure(name):
    path = PROGRAMS / name
    return parse_structure(path.read_text(), str(path))


def facts(values):
    """Rendered facts of a {pred: tuples} mapping, sorted."""
    return sorted(f"{p}{t}" for p in values for t in values[p])


# -- random generation --------------------------------------------------------

X, Y, Z = Var("X"), Var("Y"), Var("Z")
VARS = (X, Y, Z)


def random_relation(rng, domain, arity, density=0.4):
    tuples = [t for t in itertools.product(domain, repeat=arity) if rng.random() < density]
    return Relation(arity, frozenset(tuples))


def random_structure(rng, signature, size=None, constants=()):
    """Extensional structure over ``size`` elements interpreting ``signature`` {pred: arity}."""
    size = size or rng.randint(1, 3)
    domain = tuple(f"e{i}" for i in range(size))
    preds = {p: random_relation(rng, domain, a, rng.choice((0.2, 0.4, 0.6))) for p, a in signature.items()}
    funcs = {c: FunctionTable(0, {(): rng.choice(domain)}) for c in constants}
    return ExtensionalStructure(domain, preds, funcs)


def random_atom(rng, preds, vars_=VARS):
    p, arity = rng.choice(preds)
    return Atom(p, tuple(rng.choice(vars_) for _ in range(arity)))


def random_definition(rng, defined, params, negation=False, equality=True, max_rules=4, max_body=3):
    """A stratified definition with heads over ``defined`` and bodies over all predicates.

    ``defined`` and ``params`` are lists of (name, arity); negated literals only
    point to predicates earlier in ``defined`` or to parameters, so the result
    is stratified.
    """
    while True:
        rules = []
        heads = list(defined)
        rng.shuffle(heads)
        for k in range(rng.randint(len(heads), max(max_rules, len(heads)))):
            head_pred = heads[k % len(heads)]
            head = random_atom(rng, [head_pred])
            body = []
            for _ in range(rng.randint(0, max_body)):
                roll = rng.random()
                if equality and roll < 0.12:
                    cls = Equals if rng.random() < 0.5 else NotEquals
                    body.append(cls(rng.choice(VARS), rng.choice(VARS)))
                elif negation and roll < 0.35:
                    lower = params + [d for d in defined if defined.index(d) < defined.index(head_pred)]
                    if lower:
                        body.append(Not(random_atom(rng, lower)))
                else:
                    body.append(random_atom(rng, params + defined))
            rules.append(Rule(head, tuple(body)))
        d = classify(rules)
        if is_stratified(d):
            return d


# -- exhaustive sweep ---------------------------------------------------------

SWEEP_PREDS = (("p", 1), ("q", 2))


def _sweep_atoms():
    return [Atom(p, args) for p, a in SWEEP_PREDS for args in itertools.product(VARS, repeat=a)]


def _canonical(rule):
    best = None
    for perm in itertools.permutations(VARS):
        m = dict(zip(VARS, perm))
        ren = lambda lit: Atom(lit.pred, tuple(m[a] for a in lit.args))
        r = Rule(ren(rule.head), tuple(sorted({ren(lit) for lit in rule.body}, key=str)))
        if best is None or str(r) < str(best):
            best = r
    return best


def sweep_rules():
    """Every rule with at most two body atoms over p/1 and q/2, up to renaming of X, Y, Z."""
    atoms = _sweep_atoms()
    out = set()
    for head in atoms:
        for n in range(3):
            for body in itertools.combinations_with_replacement(atoms, n):
                out.add(_canonical(Rule(head, body)))
    return sorted(out, key=str)


def sweep_definitions():
    rules = sweep_rules()
    for r in rules:
        yield classify([r])
    for a, b in itertools.combinations(rules, 2):
        yield classify([a, b])


def sweep_structures():
    """All 64 interpretations of p/1 and q/2 over a 2-element domain."""
    domain = ("0", "1")
    unary = [(x,) for x in domain]
    binary = list(itertools.product(domain, repeat=2))
    out = []
    for pm in range(4):
        for qm in range(16):
            p = frozenset(t for i, t in enumerate(unary) if pm >> i & 1)
            q = frozenset(t for i, t in enumerate(binary) if qm >> i & 1)
            out.append(ExtensionalStructure(domain, {"p": Relation(1, p), "q": Relation(2, q)}))
    return out


def shuffled(rng, d):
    rules = list(d.rules)
    rng.shuffle(rules)
    return classify(rules)


def family_sample(rng, program):
    """Random 3-element structure for the family program, biased towards models."""
    domain = tuple(rng.sample(["u", "v", "w", "x", "y"], 3))
    consts = {}
    if rng.random() < 0.6:
        consts = dict(zip(["tessa", "jonah", "david"], rng.sample(domain, 3)))
    else:
        consts = {c: rng.choice(domain) for c in ("tessa", "jonah", "david")}
    intended_child = {(consts["tessa"], consts["david"]), (consts["jonah"], consts["david"])}
    if rng.random() < 0.6:
        child = set(intended_child)
        if rng.random() < 0.3:
            child.symmetric_difference_update({rng.choice(list(itertools.product(domain, repeat=2)))})
    else:
        child = set(random_relation(rng, domain, 2).tuples)
    intended_sib = {(a, b) for a, p in child for b, q in child if p == q and a != b}
    if rng.random() < 0.6:
        sib = set(intended_sib)
        if rng.random() < 0.3:
            sib.symmetric_difference_update({rng.choice(list(itertools.product(domain, repeat=2)))})
    else:
        sib = set(random_relation(rng, domain, 2).tuples)
    funcs = {c: FunctionTable(0, {(): v}) for c, v in consts.items()}
    return ExtensionalStructure(
        domain, {"child_of": Relation(2, frozenset(child)), "sibling": Relation(2, frozenset(sib))}, funcs
    )


def list_term(items):
    out = Fn("nil")
    for x in reversed(items):
        out = Fn("cons", (Fn(str(x)), out))
    return out


def seeded(seed):
    return random.Random(seed)
