"""Readers and writers for program files (.lpd) and structure files (.fos).

Program grammar::

    program    := (directive | rule)*
    directive  := "#universe" "constructors" ":" cspec ("," cspec)* "."
                | "#module" name "{" rule* "}"
    cspec      := name "/" int | name | int | int ".." int | "[]" | "|" "/" "2"
    rule       := atom [":-" literal ("," literal)*] "."
    literal    := ("not" | "\\+") atom | term cmp term | atom | "true" | "false"
    cmp        := "=" | "==" | "\\=" | "\\==" | "!="
    term       := product ("+" product)*
    product    := primary ("*" primary)*
    primary    := Var | "_" | int | name ["(" term ("," term)* ")"] | list | "(" term ")"
    list       := "[" "]" | "[" term ("," term)* ["|" term] "]"

Structure grammar (one statement per ``.``)::

    domain: a, b, c.
    universe: constructors nil/0, cons/2, 0..5 depth 4.
    pred g/2 = { (a,b), (b,a) }.
    func f/1 = { (a) -> b } default a.
    func times/2 = builtin product default nil.
    const c = a.
    focus: [5,3,2].

Names are lowercase identifiers or single-quoted strings; identifiers starting
with an uppercase letter or ``_`` are variables in programs and plain names in
structure files. ``%`` starts a line comment in both.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Optional

from .errors import ArityError, ParseError
from .model import (
    PREDICATE,
    Builtin,
    ConstructorSet,
    ExtensionalStructure,
    FunctionTable,
    Relation,
    Structure,
    TermGeneratedStructure,
)
from .syntax import Definition, Program, Rule, classify, rule_symbols
from .terms import (
    CONS,
    NIL,
    PLUS,
    TIMES,
    Atom,
    Equals,
    Fn,
    Not,
    NotEquals,
    Truth,
    Var,
    format_name,
    format_term,
    numeral_value,
    sort_key,
)


@dataclass(frozen=True)
class SourceSpan:
    file: Optional[str]
    line: int
    column: int

    def __post_init__(self):
        if self.line < 1 or self.column < 1:
            raise ValueError("line and column are 1-based")

    def __str__(self):
        return f"{self.file or '<input>'}:{self.line}:{self.column}"


@dataclass(frozen=True)
class Token:
    kind: str  # name, var, int, quoted, punct, eof
    text: str
    span: SourceSpan


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|%[^\n]*)
  | (?P<directive>\#[a-z]+)
  | (?P<quoted>'(?:[^'\\\n]|\\.)*')
  | (?P<int>[0-9]+)
  | (?P<name>[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<punct>:-|\\==|\\=|\\\+|==|!=|->|\.\.|[=(),\[\]{}|/*+.:])
    """,
    re.VERBOSE,
)


def tokenize(text: str, file=None) -> list:
    out = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        span = SourceSpan(file, line, pos - line_start + 1)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", span)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            if kind == "quoted":
                chunk = re.sub(r"\\(.)", r"\1", chunk[1:-1])
            out.append(Token(kind, chunk, span))
        newlines = chunk.count("\n") if kind == "ws" else 0
        if newlines:
            line += newlines
            line_start = pos + m.group().rindex("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", SourceSpan(file, line, pos - line_start + 1)))
    return out


class _Reader:
    def __init__(self, text, file=None):
        self.tokens = tokenize(text, file)
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def ahead(self, k=1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, text, kind=None) -> bool:
        tok = self.peek
        return tok.text == text and tok.kind in ((kind,) if kind else ("punct", "name", "directive"))

    def accept(self, text, kind=None) -> bool:
        if self.at(text, kind):
            self.next()
            return True
        return False

    def expect(self, text, kind=None) -> Token:
        if not self.at(text, kind):
            self.fail(f"expected {text!r}")
        return self.next()

    def fail(self, message, tok=None):
        tok = tok or self.peek
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"{message}, found {found}", tok.span)

    def name(self, loose=False) -> str:
        tok = self.peek
        if tok.kind in ("name", "quoted") or (loose and tok.kind == "var"):
            return self.next().text
        if loose and tok.kind == "int":
            return str(int(self.next().text))
        self.fail("expected a name")

    def integer(self) -> int:
        if self.peek.kind != "int":
            self.fail("expected an integer")
        return int(self.next().text)


# -- terms ------------------------------------------------------------------


class _TermReader(_Reader):
    """Term syntax shared by both formats; ``ground`` forbids variables."""

    def __init__(self, text, file=None, ground=False):
        super().__init__(text, file)
        self.ground = ground
        self.fresh = itertools.count(1)

    def term(self):
        left = self.product()
        while self.accept("+"):
            left = Fn(PLUS, (left, self.product()))
        return left

    def product(self):
        left = self.primary()
        while self.accept("*"):
            left = Fn(TIMES, (left, self.primary()))
        return left

    def primary(self):
        tok = self.peek
        if tok.kind == "var" and not self.ground:
            self.next()
            if tok.text == "_":
                return Var(f"_{next(self.fresh)}")
            return Var(tok.text)
        if tok.kind == "int":
            return Fn(str(int(self.next().text)))
        if tok.kind in ("name", "quoted") or (tok.kind == "var" and self.ground):
            name = self.next().text
            if self.accept("("):
                args = [self.term()]
                while self.accept(","):
                    args.append(self.term())
                self.expect(")")
                return Fn(name, args)
            return Fn(name)
        if self.accept("["):
            if self.accept("]"):
                return Fn(NIL)
            items = [self.term()]
            while self.accept(","):
                items.append(self.term())
            tail = self.term() if self.accept("|") else Fn(NIL)
            self.expect("]")
            for item in reversed(items):
                tail = Fn(CONS, (item, tail))
            return tail
        if self.accept("("):
            t = self.term()
            self.expect(")")
            return t
        self.fail("expected a term")

    def cspecs(self) -> ConstructorSet:
        members = set()
        while True:
            tok = self.peek
            if self.accept("["):
                self.expect("]")
                members.add((NIL, 0))
            elif self.accept("|"):
                self.expect("/")
                if self.integer() != 2:
                    self.fail("'|' is binary", tok)
                members.add((CONS, 2))
            elif tok.kind == "int":
                lo = self.integer()
                if self.accept("/") and self.integer() != 0:
                    self.fail("numerals are constants", tok)
                hi = self.integer() if self.accept("..") else lo
                if hi < lo:
                    self.fail("empty numeral range", tok)
                members |= {(str(i), 0) for i in range(lo, hi + 1)}
            else:
                name = self.name()
                members.add((name, self.integer() if self.accept("/") else 0))
            if not self.accept(","):
                return ConstructorSet(frozenset(members))


# -- programs ---------------------------------------------------------------


class _ProgramReader(_TermReader):
    def program(self) -> Program:
        rules, modules, universe = [], None, None
        loose, checked = [], []
        self.arities = {}
        while self.peek.kind != "eof":
            tok = self.peek
            if tok.kind == "directive":
                self.next()
                if tok.text == "#universe":
                    if universe is not None:
                        self.fail("duplicate #universe directive", tok)
                    self.expect("constructors", "name")
                    self.expect(":")
                    universe = self.cspecs()
                    self.expect(".")
                elif tok.text == "#module":
                    name_tok = self.peek
                    name = self.name()
                    modules = modules if modules is not None else []
                    if any(n == name for n, _ in modules):
                        self.fail(f"duplicate module {name!r}", name_tok)
                    self.expect("{")
                    body = []
                    while not self.accept("}"):
                        body.append(self.rule())
                    if not body:
                        self.fail(f"empty #module block {name!r}", tok)
                    modules.append((name, body))
                    rules.extend(body)
                else:
                    self.fail("unknown directive", tok)
            else:
                loose.append(tok)
                rules.append(self.rule())
            self._check_arity(rules[len(checked):], tok)
            checked = list(rules)
        if modules is not None and loose:
            raise ParseError("rule outside every #module block in a modular program", loose[0].span)
        if not rules:
            raise ParseError("a program needs at least one rule", self.peek.span)
        if universe is None:
            return Program.from_rules(rules, modules=dict(modules) if modules is not None else None)
        mods = None if modules is None else tuple((name, classify(body)) for name, body in modules)
        return Program(classify(rules), universe, mods, True)

    def _check_arity(self, new_rules, tok):
        for r in new_rules:
            for s in sorted(rule_symbols(r)):
                key = (s.kind == PREDICATE, s.name)
                prev = self.arities.setdefault(key, s.arity)
                if prev != s.arity:
                    raise ArityError(f"{s.name} is used with arities {prev} and {s.arity}", tok.span)

    def rule(self) -> Rule:
        self.fresh = itertools.count(1)
        start = self.peek
        head = self.literal()
        if not isinstance(head, Atom):
            self.fail("rule head must be a predicate atom", start)
        body = []
        if self.accept(":-"):
            body.append(self.literal())
            while self.accept(","):
                body.append(self.literal())
        self.expect(".")
        return Rule(head, tuple(body))

    def literal(self):
        tok = self.peek
        if (tok.kind == "name" and tok.text == "not" and self.ahead().kind in ("name", "quoted")) or self.at("\\+"):
            self.next()
            inner = self.literal()
            if not isinstance(inner, Atom):
                self.fail("only predicate atoms may be negated (negated equality is not supported)", tok)
            return Not(inner)
        left = self.term()
        for ops, cls in (((("=", "=="), Equals)), (("\\=", "\\==", "!="), NotEquals)):
            for op in ops:
                if self.accept(op):
                    return cls(left, self.term())
        if isinstance(left, Var) or numeral_value(left) is not None:
            self.fail("expected a predicate atom", tok)
        if left.name in (TIMES, PLUS) and tok.kind == "punct":
            self.fail("expected a predicate atom", tok)
        if not left.args and left.name in ("true", "false") and tok.kind == "name":
            return Truth(left.name == "true")
        return Atom(left.name, left.args)


def parse_program(text: str, file=None) -> Program:
    return _ProgramReader(text, file).program()


def parse_term(text: str, ground=False):
    r = _TermReader(text, ground=ground)
    t = r.term()
    if r.peek.kind != "eof":
        r.fail("unexpected trailing input")
    return t


def parse_literal(text: str):
    """A single body literal, e.g. ``not member(0,[1,2,3])``; a trailing ``.`` is allowed."""
    r = _ProgramReader(text)
    lit = r.literal()
    r.accept(".")
    if r.peek.kind != "eof":
        r.fail("unexpected trailing input")
    return lit


# -- structures ---------------------------------------------------------------


class _StructureReader(_TermReader):
    def __init__(self, text, file=None):
        super().__init__(text, file, ground=True)
        self.domain = None
        self.universe = None
        self.preds = {}
        self.funcs = {}
        self.focus = []

    def element(self):
        tok = self.peek
        if self.universe is not None:
            return self.term()
        if tok.kind in ("name", "quoted", "var"):
            return self.next().text
        if tok.kind == "int":
            return str(int(self.next().text))
        self.fail("expected a domain element")

    def elements(self) -> list:
        out = [self.element()]
        while self.accept(","):
            out.append(self.element())
        return out

    def tuple_(self, arity):
        tok = self.peek
        if self.accept("("):
            items = [] if self.at(")") else self.elements()
            self.expect(")")
        else:
            items = [self.element()]
        if len(items) != arity:
            self.fail(f"tuple of length {len(items)} for arity {arity}", tok)
        return tuple(items)

    def signature(self):
        name = self.name(loose=True)
        self.expect("/")
        return name, self.integer()

    def require_universe(self, tok):
        if self.domain is None and self.universe is None:
            self.fail("declare 'domain' or 'universe' first", tok)

    def statement(self):
        tok = self.next()
        if tok.kind != "name":
            self.fail("expected a statement keyword", tok)
        kw = tok.text
        if kw == "domain":
            if self.domain is not None or self.universe is not None:
                self.fail("universe already declared", tok)
            self.expect(":")
            if self.at("."):
                self.fail("the domain must be non-empty")
            self.domain = self.elements()
        elif kw == "universe":
            if self.domain is not None or self.universe is not None:
                self.fail("universe already declared", tok)
            self.expect(":")
            self.expect("constructors", "name")
            cf = self.cspecs()
            self.expect("depth", "name")
            self.universe = (cf, self.integer())
        elif kw == "pred":
            self.require_universe(tok)
            name, arity = self.signature()
            self.expect("=")
            self.expect("{")
            tuples = []
            if not self.at("}"):
                tuples.append(self.tuple_(arity))
                while self.accept(","):
                    tuples.append(self.tuple_(arity))
            self.expect("}")
            if name in self.preds:
                self.fail(f"predicate {name} declared twice", tok)
            self.preds[name] = Relation(arity, frozenset(tuples))
        elif kw == "func":
            self.require_universe(tok)
            name, arity = self.signature()
            if name in self.funcs:
                self.fail(f"function {name} declared twice", tok)
            self.expect("=")
            if self.accept("builtin", "name"):
                op = self.name()
                self.expect("default", "name")
                self.funcs[name] = Builtin(op, self.element(), arity)
            else:
                self.expect("{")
                table = {}
                while not self.at("}"):
                    key = self.tuple_(arity)
                    self.expect("->")
                    table[key] = self.element()
                    if not self.accept(","):
                        break
                self.expect("}")
                default = self.element() if self.accept("default", "name") else None
                self.funcs[name] = FunctionTable(arity, table, default)
        elif kw == "const":
            self.require_universe(tok)
            if self.universe is not None:
                self.fail("constants of a term universe are its constructors", tok)
            name = self.name(loose=True)
            if name in self.funcs:
                self.fail(f"constant {name} declared twice", tok)
            self.expect("=")
            self.funcs[name] = FunctionTable(0, {(): self.element()})
        elif kw == "focus":
            if self.universe is None:
                self.fail("focus terms need a term universe", tok)
            self.expect(":")
            self.focus.extend(self.elements())
        else:
            self.fail("unknown statement", tok)
        self.expect(".")

    def structure(self) -> Structure:
        while self.peek.kind != "eof":
            self.statement()
        if self.domain is None and self.universe is None:
            raise ParseError("no 'domain' or 'universe' declaration", self.peek.span)
        if self.domain is not None:
            return ExtensionalStructure(tuple(self.domain), self.preds, self.funcs)
        cf, depth = self.universe
        return TermGeneratedStructure(cf, depth, self.preds, self.funcs, frozenset(self.focus))


def parse_structure(text: str, file=None) -> Structure:
    return _StructureReader(text, file).structure()


# -- writers ------------------------------------------------------------------


def format_constructors(cf: ConstructorSet) -> str:
    numerals = sorted(int(n) for n, a in cf.members if a == 0 and numeral_value(Fn(n)) is not None)
    parts = []
    for _, run in itertools.groupby(enumerate(numerals), lambda p: p[1] - p[0]):
        run = [n for _, n in run]
        parts.append(str(run[0]) if len(run) == 1 else f"{run[0]}..{run[-1]}")
    rest = sorted(
        ((n, a) for n, a in cf.members if not (a == 0 and numeral_value(Fn(n)) is not None)),
        key=lambda m: (m[1], m[0]),
    )
    parts.extend(f"{format_name(n)}/{a}" for n, a in rest)
    return ", ".join(parts)


def format_program(p: Program) -> str:
    lines = []
    if p.universe_declared:
        lines.append(f"#universe constructors: {format_constructors(p.constructors)}.")
        lines.append("")
    if p.modules:
        for name, d in p.modules:
            lines.append(f"#module {format_name(name)} {{")
            lines.extend(f"    {r}" for r in d.rules)
            lines.append("}")
    else:
        lines.extend(str(r) for r in p.definition.rules)
    return "\n".join(lines) + "\n"


def _format_tuple(tup, loose):
    inner = ",".join(format_term(x, loose) for x in tup)
    return f"({inner})"


def format_structure(m: Structure) -> str:
    lines = []
    if isinstance(m, ExtensionalStructure):
        lines.append(f"domain: {', '.join(format_term(x, True) for x in m.domain)}.")
    else:
        lines.append(f"universe: constructors {format_constructors(m.constructors)} depth {m.depth}.")
    for p in sorted(m.predicates):
        rel = m.predicates[p]
        body = ", ".join(_format_tuple(t, True) for t in rel.sorted())
        lines.append(f"pred {format_name(p, True)}/{rel.arity} = {{{body}}}.")
    for f in sorted(m.functions):
        fn = m.functions[f]
        if isinstance(fn, Builtin):
            lines.append(
                f"func {format_name(f, True)}/{fn.arity} = builtin {fn.operation} default {format_term(fn.default, True)}."
            )
        elif fn.arity == 0:
            lines.append(f"const {format_name(f, True)} = {format_term(fn.lookup(()), True)}.")
        else:
            entries = sorted(fn.table.items(), key=lambda kv: tuple(sort_key(x) for x in kv[0]))
            body = ", ".join(f"{_format_tuple(k, True)} -> {format_term(v, True)}" for k, v in entries)
            default = f" default {format_term(fn.default, True)}" if fn.default is not None else ""
            lines.append(f"func {format_name(f, True)}/{fn.arity} = {{{body}}}{default}.")
    focus = getattr(m, "focus", None)
    if focus:
        lines.append(f"focus: {', '.join(format_term(t) for t in sorted(focus, key=sort_key))}.")
    return "\n".join(lines) + "\n"


def format_definition(d: Definition) -> str:
    return "".join(f"{r}\n" for r in d.rules)
