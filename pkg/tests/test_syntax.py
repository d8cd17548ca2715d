import pytest

from defcheck.errors import ArityError, EmptyDefinition, NotAPartition, NotStratified
from defcheck.model import ConstructorSet
from defcheck.parser import parse_program
from defcheck.syntax import (
    Program,
    Rule,
    classify,
    computed_positions,
    dependency_graph,
    is_inductive,
    is_stratified,
    is_subterm_bounded,
    stratify,
    validate_partition,
)
from defcheck.terms import Atom, Equals, Fn, Not, Var

X, Y, Z = Var("X"), Var("Y"), Var("Z")


def rules(text):
    return parse_program(text).definition.rules


def test_classify_splits_defined_and_parameters():
    d = classify(rules("r(X,Y) :- g(X,Y). r(X,Z) :- r(X,Y), g(Y,Z)."))
    assert d.defined == {"r"}
    assert d.parameter_predicates == {"g"}
    assert d.arities == {"r": 2, "g": 2}


def test_classify_rejects_bad_input():
    with pytest.raises(EmptyDefinition):
        classify([])
    with pytest.raises(ArityError):
        classify([Rule(Atom("p", (X,))), Rule(Atom("q"), (Atom("p", (X, Y)),))])
    with pytest.raises(TypeError):
        Rule(Atom("p"), (Not(Equals(X, Y)),))


def test_dependency_graph_and_induction():
    d = classify(rules("r(X,Y) :- g(X,Y). r(X,Z) :- r(X,Y), g(Y,Z)."))
    g = dependency_graph(d)
    assert ("g", "r", True) in g.edges and ("r", "r", True) in g.edges
    assert is_inductive(d)
    assert not is_inductive(classify(rules("p(X) :- q(X).")))


def test_stratification_orders_components():
    d = classify(rules("a(X) :- b(X), not c(X). c(X) :- e(X). b(X) :- a(X). b(X) :- e(X)."))
    assert stratify(d) == (frozenset({"c"}), frozenset({"a", "b"}))


def test_negative_cycle_is_reported():
    d = classify(rules("p :- not q. q :- not p."))
    assert not is_stratified(d)
    with pytest.raises(NotStratified) as err:
        stratify(d)
    edges = err.value.cycle
    assert any(not pos for _, _, pos in edges)
    assert edges[0][0] == edges[-1][1]


def test_partition_violations():
    d = classify(rules("a(X) :- e(X). b(X) :- a(X). a(X) :- b(X)."))
    r1, r2, r3 = d.rules
    assert validate_partition(d, [[r1, r3], [r2]]).violations[0].kind == "cycle"
    rep = validate_partition(d, {"one": [r1], "two": [r2, r3]})
    assert [v.kind for v in rep.violations][0] == "scatter"
    assert validate_partition(d, [[r1, r2, r3]]).ok
    with pytest.raises(NotAPartition):
        validate_partition(d, [[r1], [r2]])


def test_program_bare_and_inferred():
    bare = Program.from_rules(rules("r(X,Y) :- g(X,Y)."))
    assert bare.bare
    fam = Program.from_rules(rules("c(tessa, david)."))
    assert not fam.bare and fam.constructors.constants == {"tessa", "david"}
    with pytest.raises(ValueError):
        Program(classify(rules("p(f(a)).")), ConstructorSet.of("a"))


def test_computed_positions_and_boundedness():
    p = parse_program("#universe constructors: [], |/2, 0..3.\n"
                      "lp([], 1). lp([H|T], H * P) :- lp(T, P).")
    cp = computed_positions(p.definition, p.constructors)
    assert cp == {"lp": frozenset({1})}
    assert is_subterm_bounded(p.definition, p.constructors)
    m = parse_program("#universe constructors: [], |/2, 0..3.\n"
                      "member(X, [X|T]). member(X, [Y|T]) :- member(X, T).")
    assert is_subterm_bounded(m.definition, m.constructors)
    up = parse_program("#universe constructors: 0, s/1.\nsmall(X) :- big(s(X)). big(s(0)).")
    assert not is_subterm_bounded(up.definition, up.constructors)
