"""Command-line interface.

Exit codes: 0 positive verdict, 1 negative verdict, 2 error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import engine, oracle
from .errors import DefcheckError, NotStratified
from .model import ExtensionalStructure, TermGeneratedStructure
from .parser import parse_literal, parse_program, parse_structure, parse_term
from .terms import Atom, format_fact, format_term, sort_key

DEFAULT_DEPTH = 6


class Failure(Exception):
    """Usage problem detected by the CLI itself."""


def _read(path, inputs):
    with open(path, "rb") as fh:
        data = fh.read()
    inputs.append({"path": path, "sha256": hashlib.sha256(data).hexdigest()})
    return data.decode("utf-8")


def _exactness(e: engine.Exactness) -> dict:
    return {"exact": e.exact, "reasons": list(e.reasons)}


def _facts(values) -> list:
    return [str(f) for f in values]


class Run:
    def __init__(self, args):
        self.args = args
        self.inputs = []
        self.lines = []
        self.warnings = []
        self.exactness = engine.EXACT

    def program(self, path):
        return parse_program(_read(path, self.inputs), path)

    def structure(self, path):
        m = parse_structure(_read(path, self.inputs), path)
        if isinstance(m, TermGeneratedStructure) and self.args.depth is not None:
            m = TermGeneratedStructure(m.constructors, self.args.depth, m.predicates, m.functions, m.focus)
        return m

    @property
    def depth(self):
        return DEFAULT_DEPTH if self.args.depth is None else self.args.depth

    @property
    def focus(self):
        return tuple(parse_term(t, ground=True) for t in self.args.focus or ())

    @property
    def budget(self):
        return self.args.budget if self.args.budget is not None else oracle.default_budget()

    def note(self, exactness):
        self.exactness &= exactness

    def base(self, p, structure_path):
        """Parameter structure: from a file (defined values dropped) or the truncated Herbrand base."""
        if structure_path:
            m = self.structure(structure_path)
            return m.without_predicates(p.definition.defined)
        if p.bare:
            raise Failure("a definition without constants needs a structure file")
        return engine.herbrand_base(p, self.depth, self.focus)

    def with_focus(self, m):
        if isinstance(m, TermGeneratedStructure) and self.focus:
            return TermGeneratedStructure(m.constructors, m.depth, m.predicates, m.functions, m.focus | set(self.focus))
        return m


# -- subcommands --------------------------------------------------------------


def cmd_check(run, a):
    p = run.program(a.program)
    m = run.with_focus(run.structure(a.structure))
    report = engine.program_model_report(m, p, module=a.module, universe_limit=a.universe_limit)
    run.note(report.definition.exactness)
    failed = []
    if report.herbrand is False:
        failed.append("H(CF)")
    if not report.definition.holds:
        failed.append(f"module {a.module}" if a.module else "D")
    for name, v in report.modules:
        run.note(v.exactness)
        if not v.holds:
            failed.append(f"module {name}")
    run.warnings.extend(report.notes)
    herbrand = "n/a (bare definition)" if report.herbrand is None else str(report.herbrand).lower()
    run.lines += [
        f"H(CF): {herbrand}",
        f"{'module ' + a.module if a.module else 'D'}: {str(report.definition.holds).lower()}",
    ]
    run.lines += [f"module {name}: {str(v.holds).lower()}" for name, v in report.modules]
    run.lines.append(f"model: {str(report.ok).lower()}" + (f" (failed: {', '.join(failed)})" if failed else ""))
    verdict = {
        "model": report.ok,
        "herbrand": report.herbrand,
        "definition": report.definition.holds,
        "modules": {name: v.holds for name, v in report.modules},
        "failed": failed,
    }
    return (0 if report.ok else 1), verdict


def cmd_eval(run, a):
    p = run.program(a.program)
    d = p.module(a.module) if a.module else p.definition
    m = run.base(p, a.structure)
    exp = engine.unique_expansion(d, m, focus=run.focus, universe_limit=a.universe_limit)
    run.note(exp.exactness)
    facts = _facts(exp.facts())
    run.lines += facts
    verdict = {"facts": facts}
    if getattr(exp.structure, "scope", None) is not None:
        run.lines.append(f"% values restricted to {len(exp.structure.scope)} focus-related terms")
        verdict["scope_size"] = len(exp.structure.scope)
    return 0, verdict


def cmd_trace(run, a):
    p = run.program(a.program)
    d = p.module(a.module) if a.module else p.definition
    m = run.base(p, a.structure)
    tr = engine.induction_process(d, m, focus=run.focus, universe_limit=a.universe_limit)
    run.note(tr.exactness)
    steps = []
    for step in tr.steps:
        new = _facts(step.new)
        fired = [str(g) for g in step.fired]
        steps.append({"step": step.index, "stratum": step.stratum, "new": new, "fired": fired})
        run.lines.append(f"step {step.index} (stratum {step.stratum}): {', '.join(new)}")
        run.lines += [f"    {g}" for g in fired]
    order = _facts(tr.order)
    run.lines.append(f"fixpoint after {len(tr.steps)} steps")
    return 0, {"steps": steps, "order": order}


def cmd_query(run, a):
    p = run.program(a.program)
    lit = parse_literal(a.literal)
    verdict = engine.entails_literal(p, lit, run.depth, universe_limit=a.universe_limit)
    run.note(verdict.exactness)
    text = str(lit)
    run.lines.append(f"{text}: {'entailed' if verdict.holds else 'not entailed'}")
    return (0 if verdict.holds else 1), {"literal": text, "entailed": verdict.holds}


def cmd_lhm(run, a):
    p = run.program(a.program)
    exp = engine.lhm(p, run.depth, focus=run.focus, universe_limit=a.universe_limit)
    run.note(exp.exactness)
    facts = _facts(exp.facts())
    run.lines += facts
    verdict = {"facts": facts, "depth": run.depth}
    if exp.structure.scope is not None:
        run.lines.append(f"% values restricted to {len(exp.structure.scope)} focus-related terms")
        verdict["scope_size"] = len(exp.structure.scope)
    return 0, verdict


def cmd_split(run, a):
    p = run.program(a.program)
    if not p.modules:
        raise Failure("the program declares no #module blocks")
    if a.structure:
        m = run.with_focus(run.structure(a.structure))
        source = a.structure
    else:
        m = engine.lhm(p, run.depth, focus=run.focus, universe_limit=a.universe_limit).structure
        if isinstance(m, TermGeneratedStructure) and m.finite_universe:
            m = m.to_extensional()
        source = "LHM"
    r = engine.check_split_equivalence(p, m, universe_limit=a.universe_limit)
    run.note(r.whole.exactness)
    for _, v in r.modules:
        run.note(v.exactness)
    b = lambda x: "n/a" if x is None else str(x).lower()
    run.lines.append(f"partition: {'valid' if r.partition_ok else 'invalid'}")
    run.lines += [f"    {v}" for v in r.violations]
    run.lines += [
        f"structure: {source}",
        f"H(CF): {b(r.herbrand)}",
        f"(1) isomorphic to LHM: {b(r.isomorphic_to_lhm)}",
        f"(2) D and H(CF): {b(r.statement2)}",
        f"(3) all modules and H(CF): {b(r.statement3)}",
    ]
    run.lines += [f"    module {name}: {b(v.holds)}" for name, v in r.modules]
    run.lines.append(f"agree: {b(r.agree)}")
    verdict = {
        "partition_ok": r.partition_ok,
        "violations": [str(v) for v in r.violations],
        "herbrand": r.herbrand,
        "statement1": r.isomorphic_to_lhm,
        "statement2": r.statement2,
        "statement3": r.statement3,
        "modules": {name: v.holds for name, v in r.modules},
        "agree": r.agree,
    }
    return (0 if r.partition_ok and r.agree else 1), verdict


def _diff(model, reference):
    extra, missing = [], []
    for pred in sorted(set(model) | set(reference)):
        for t in sorted(model.get(pred, frozenset()) - reference.get(pred, frozenset()), key=_tkey):
            extra.append(format_fact(pred, t, True))
        for t in sorted(reference.get(pred, frozenset()) - model.get(pred, frozenset()), key=_tkey):
            missing.append(format_fact(pred, t, True))
    return extra, missing


def _tkey(t):
    return tuple(sort_key(x) for x in t)


def cmd_completion(run, a):
    p = run.program(a.program)
    d = p.module(a.module) if a.module else p.definition
    m = run.structure(a.structure).without_predicates(d.defined)
    if not isinstance(m, ExtensionalStructure):
        raise Failure("completion models are enumerated over an extensional structure")
    ct = oracle.clark_completion(d)
    models = oracle.enumerate_completion_models(ct, m, run.budget)
    reference = engine.unique_expansion(d, m).values()
    run.lines.append("completion:")
    run.lines += [f"    {line}" for line in str(ct).splitlines()]
    run.lines.append(f"definitional model: {oracle.format_model(reference)}")
    run.lines.append(f"completion models: {len(models)}")
    entries = []
    for values in models:
        extra, missing = _diff(values, reference)
        tag = "= definitional model" if not extra and not missing else (
            " ".join([f"+{x}" for x in extra] + [f"-{x}" for x in missing])
        )
        run.lines.append(f"    {tag}")
        entries.append({"facts": _model_facts(values), "extra": extra, "missing": missing})
    agree = len(models) == 1 and models[0] == reference
    run.lines.append(f"completion agrees with the definition: {str(agree).lower()}")
    verdict = {
        "completion": str(ct).splitlines(),
        "definitional_model": _model_facts(reference),
        "models": entries,
        "contains_definitional_model": reference in models,
        "agree": agree,
    }
    return (0 if agree else 1), verdict


def _model_facts(values):
    return [format_fact(p, t, True) for p in sorted(values) for t in sorted(values[p], key=_tkey)]


def cmd_oracle(run, a):
    p = run.program(a.program)
    d = p.module(a.module) if a.module else p.definition
    m = run.structure(a.structure)
    minimal = oracle.brute_force_minimal_check(m, d, run.budget)
    reduced = engine.satisfies_def(m, d)
    run.lines += [
        f"brute-force minimal: {str(minimal).lower()}",
        f"unique-expansion check: {str(reduced).lower()}",
        f"agree: {str(minimal == reduced).lower()}",
    ]
    return (0 if minimal else 1), {"minimal": minimal, "satisfies_def": reduced, "agree": minimal == reduced}


# -- plumbing -----------------------------------------------------------------


def _common(sub):
    sub.add_argument("--depth", type=int, default=None, help=f"depth bound of term universes (default {DEFAULT_DEPTH})")
    sub.add_argument("--json", action="store_true", help="print a JSON report")
    sub.add_argument("--budget", type=int, default=None, help="candidate budget of brute-force enumerations")
    sub.add_argument("--module", default=None, help="restrict to one #module block")
    sub.add_argument("--focus", action="append", metavar="TERM", help="ground term of interest (repeatable)")
    sub.add_argument("--universe-limit", type=int, default=engine.UNIVERSE_LIMIT,
                     help="largest term universe evaluated in full")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="defcheck", description="Evaluate and model-check logic-program definitions.")
    subs = ap.add_subparsers(dest="command", required=True)

    s = subs.add_parser("check", help="is the structure a model of the program?")
    s.add_argument("program")
    s.add_argument("structure")
    s.set_defaults(func=cmd_check)

    for name, func, text in (("eval", cmd_eval, "unique expansion"), ("trace", cmd_trace, "induction process")):
        s = subs.add_parser(name, help=text)
        s.add_argument("program")
        s.add_argument("structure", nargs="?")
        s.set_defaults(func=func)

    s = subs.add_parser("query", help="is a ground literal entailed?")
    s.add_argument("program")
    s.add_argument("literal")
    s.set_defaults(func=cmd_query)

    s = subs.add_parser("lhm", help="least Herbrand model")
    s.add_argument("program")
    s.set_defaults(func=cmd_lhm)

    s = subs.add_parser("split", help="check the module partition")
    s.add_argument("program")
    s.add_argument("structure", nargs="?")
    s.set_defaults(func=cmd_split)

    s = subs.add_parser("completion", help="compare Clark completion models with the definition")
    s.add_argument("program")
    s.add_argument("structure")
    s.set_defaults(func=cmd_completion)

    s = subs.add_parser("oracle", help="brute-force oracles")
    osubs = s.add_subparsers(dest="oracle", required=True)
    s = osubs.add_parser("min-check", help="minimal satisfaction by exhaustive enumeration")
    s.add_argument("program")
    s.add_argument("structure")
    s.set_defaults(func=cmd_oracle)

    for sub in list(subs.choices.values()) + list(osubs.choices.values()):
        if sub.prog.split()[-1] != "oracle":
            _common(sub)
    return ap


def _digest(report) -> str:
    body = {k: v for k, v in report.items() if k not in ("timing", "digest")}
    blob = json.dumps(body, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    command = args.command if args.command != "oracle" else f"oracle {args.oracle}"
    run = Run(args)
    started = time.perf_counter()
    report = {"command": command, "inputs": run.inputs}
    flags = {"depth": args.depth, "budget": args.budget, "module": args.module, "focus": args.focus or []}
    report["flags"] = flags
    try:
        code, verdict = args.func(run, args)
        report["verdict"] = verdict
        report["exactness"] = _exactness(run.exactness)
    except (DefcheckError, Failure, OSError, KeyError, ValueError) as e:
        code = 2
        message = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        report["error"] = {"type": type(e).__name__, "message": str(message)}
        if isinstance(e, NotStratified):
            report["error"]["cycle"] = [[s, d, "+" if pos else "-"] for s, d, pos in e.cycle]
    report["exit_code"] = code
    report["warnings"] = list(run.warnings)
    if not run.exactness.exact:
        run.warnings.append(f"result is truncated: {'; '.join(run.exactness.reasons)}")
        report["warnings"] = list(run.warnings)
    report["digest"] = _digest(report)
    report["timing"] = {"seconds": round(time.perf_counter() - started, 6)}

    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False))
    elif code == 2:
        pass
    else:
        for line in run.lines:
            print(line)
        print(f"exactness: {run.exactness}")
    for w in run.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if code == 2:
        print(f"error: {report['error']['type']}: {report['error']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
