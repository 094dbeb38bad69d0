"""``ta``: command-line front end.

Reports are line-oriented ``key=value`` text (``--format kv``, the default)
starting with a schema version; ``--format human`` renders the same lines
for reading.  Exit status: 0 when the verdict holds, 1 on a counterexample
or violation, 2 on usage, input or resource errors.
"""
from __future__ import annotations

import argparse
import contextlib
import os
import signal
import sys
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .classes import (CTOR, FINITE, PLAIN, Derivation, check_cb_instance, check_derivation, check_fn_instance,
                      is_constructor_based, is_reachable, semantic_entails)
from .errors import MissingCtors, ResourceLimit, SpecError, TAError, UnknownFixture
from .finmod.model import FiniteModel, satisfies, validate_model
from .finmod.search import DEFAULT_BUDGET
from .fixtures import FIXTURES, fixture_spec
from .forcing import (Forcer, SearchBounds, extend_to_generic, generic_forces, generic_model, sentence_over,
                      validate_forcing_property, validate_generic)
from .gen import fuzz_satcond
from .institution import (apply_substitution, check_morphism, reduct_along_substitution, reduct_model,
                          translate_sentence)
from .kernel import Not, Signature, Variable, normalize
from .omitting import check_type, realizes, search_isolation
from .surface import SetRef, SpecFile, parse_file, parse_sentence, print_spec, show_sentence
from .surface.printer import show_term
from .surface.spec import CATEGORY

SCHEMA = "ta-report/1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FLAVOR_NAMES = {"plain": PLAIN, "ctor": CTOR, "fin": FINITE, "finite": FINITE}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# reports

class Report:
    def __init__(self, verb: str):
        self.verb = verb
        self.verdict = "unknown"
        self.items: List[Tuple[str, str]] = []

    def put(self, key: str, value) -> None:
        if isinstance(value, bool):
            value = "true" if value else "false"
        text = str(value).replace("\\", "\\\\").replace("\n", "\\n")
        self.items.append((key, text))

    def lines(self) -> List[Tuple[str, str]]:
        return [("schema", SCHEMA), ("verb", self.verb), ("verdict", self.verdict)] + self.items

    def render(self, fmt: str) -> str:
        if fmt == "kv":
            return "".join(f"{k}={v}\n" for k, v in self.lines())
        width = max((len(k) for k, _ in self.items), default=0)
        out = [f"{self.verb}: {self.verdict}"]
        out += [f"  {k.ljust(width)}  {v}" for k, v in self.items]
        return "\n".join(out) + "\n"


def _put_model(report: Report, prefix: str, m: FiniteModel) -> None:
    sig = m.sig
    for s in sig.sorts:
        report.put(f"{prefix}.carrier.{s}", " ".join(m.carrier(s)))
    for f in sig.funcs:
        name = f.name if len(sig.symbols(f.name)) == 1 else f"{f.name}[{' '.join(f.arity)}->{f.result}]"
        for args, v in sorted(m.tables.get(f, {}).items()):
            report.put(f"{prefix}.op.{name}({','.join(args)})", v)
    for l in sig.labels:
        for s in sig.sorts:
            pairs = sorted(m.relation(l, s))
            if pairs:
                report.put(f"{prefix}.label.{l}.{s}", " ".join(f"({a},{b})" for a, b in pairs))


# ---------------------------------------------------------------------------
# inputs

def _load(path: str) -> SpecFile:
    if path.startswith("fixture:"):
        parts = path.split(":")
        k = int(parts[2]) if len(parts) > 2 else 0
        return fixture_spec(parts[1], k)
    return parse_file(path)


def _bounds(text: Optional[str], default: int) -> object:
    if not text:
        return default
    if text.isdigit():
        return int(text)
    out: Dict[str, int] = {}
    for part in text.split(","):
        if "=" not in part:
            raise UsageError(f"bad bound {part!r}; expected SORT=N")
        s, n = part.split("=", 1)
        if not n.strip().isdigit():
            raise UsageError(f"bad bound {part!r}; expected SORT=N")
        out[s.strip()] = int(n)
    return out


def _check_bound_sorts(bounds, sig: Signature) -> None:
    if isinstance(bounds, dict):
        for s in bounds:
            if not sig.has_sort(s):
                raise UsageError(f"bound given for unknown sort {s!r}")


def _select(spec: SpecFile, sel: str, sig_name: Optional[str] = None) -> List[Tuple[str, object, str]]:
    """Sentences named by ``sel``: ``all``, a list name, ``LIST.item`` or a unique item name."""
    lists = spec.sentences
    if sel == "all":
        return [(f"{d.name}.{n}", phi, d.sig_name) for d in lists.values()
                if sig_name is None or d.sig_name == sig_name for n, phi in d.items]
    if sel in lists:
        d = lists[sel]
        return [(f"{d.name}.{n}", phi, d.sig_name) for n, phi in d.items]
    if "." in sel:
        name, item = sel.split(".", 1)
        if name in lists:
            try:
                return [(sel, lists[name].get(item), lists[name].sig_name)]
            except KeyError:
                raise UsageError(f"sentence list {name} has no item {item!r}") from None
    hits = [(f"{d.name}.{n}", phi, d.sig_name) for d in lists.values() for n, phi in d.items if n == sel]
    if len(hits) == 1:
        return hits
    if hits:
        raise UsageError(f"sentence name {sel!r} is ambiguous; use LIST.{sel}")
    raise UsageError(f"no sentence or sentence list named {sel!r}")


def _sentences(args, spec: SpecFile, sig: Signature, sig_name: Optional[str], default: str = "all",
               block: Sequence[Variable] = ()) -> List[Tuple[str, object]]:
    if getattr(args, "text", None):
        return [("text", parse_sentence(sig, args.text, block))]
    sel = getattr(args, "sentence", None) or default
    picked = _select(spec, sel, sig_name if sel == "all" else None)
    out = []
    for label, phi, sname in picked:
        if sig_name is not None and sname != sig_name and not sentence_over(sig, phi):
            raise UsageError(f"sentence {label} is over {sname}, not {sig_name}")
        out.append((label, phi))
    return out


def _model(spec: SpecFile, name: Optional[str]):
    if not name:
        models = spec.models
        if len(models) != 1:
            raise UsageError("--model is required when the file has several models")
        return next(iter(models.values()))
    return spec.lookup("model", name)


# ---------------------------------------------------------------------------
# verbs

def cmd_check(args, spec: SpecFile, report: Report) -> int:
    for kind in CATEGORY.values():
        report.put(f"decls.{kind}", sum(1 for d in spec.decls if CATEGORY[type(d)] == kind))
    bad = 0
    for d in spec.models.values():
        for v in validate_model(d.model):
            bad += 1
            report.put(f"violation.model.{d.name}", v)
    for d in spec.types.values():
        for v in check_type(d.ltype):
            bad += 1
            report.put(f"violation.type.{d.name}", v)
    for d in spec.morphisms.values():
        for v in check_morphism(d.morphism):
            bad += 1
            report.put(f"violation.morphism.{d.name}", v)
    for d in spec.forcings.values():
        for v in validate_forcing_property(d.prop, SearchBounds(term_depth=args.term_depth)):
            bad += 1
            report.put(f"violation.forcing.{d.name}", v)
    report.put("violations", bad)
    report.verdict = "ok" if not bad else "violation"
    return EXIT_OK if not bad else EXIT_FAIL


def cmd_sat(args, spec, report) -> int:
    md = _model(spec, args.model)
    report.put("model", md.name)
    phis = _sentences(args, spec, md.model.sig, md.sig_name)
    failed = 0
    for label, phi in phis:
        ok = satisfies(md.model, phi)
        failed += not ok
        report.put(f"sentence.{label}", ok)
    report.put("checked", len(phis))
    report.put("failed", failed)
    report.verdict = "holds" if not failed else "violation"
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_reduct(args, spec, report) -> int:
    md = spec.lookup("morphism", args.morphism)
    mm = _model(spec, args.model)
    if mm.model.sig != md.morphism.target:
        raise UsageError(f"model {mm.name} is not over the target {md.target} of {md.name}")
    red = reduct_model(md.morphism, mm.model)
    report.put("morphism", md.name)
    report.put("model", mm.name)
    _put_model(report, "reduct", red)
    violations = validate_model(red)
    for v in violations:
        report.put("violation", v)
    report.verdict = "ok" if violations.ok else "violation"
    return EXIT_OK if violations.ok else EXIT_FAIL


def cmd_translate(args, spec, report) -> int:
    md = spec.lookup("morphism", args.morphism)
    chi = md.morphism
    phis = _sentences(args, spec, chi.source, md.source)
    report.put("morphism", md.name)
    for label, phi in phis:
        report.put(f"sentence.{label}", show_sentence(normalize(translate_sentence(chi, phi)), chi.target))
    mm = spec.models.get(args.model) if args.model else None
    if mm is not None:
        if mm.model.sig != chi.target:
            raise UsageError(f"model {mm.name} is not over the target {md.target} of {md.name}")
        red = reduct_model(chi, mm.model)
        bad = 0
        for label, phi in phis:
            a, b = satisfies(red, phi), satisfies(mm.model, translate_sentence(chi, phi))
            bad += a != b
            report.put(f"satcond.{label}", f"reduct={str(a).lower()} translated={str(b).lower()}")
        report.verdict = "holds" if not bad else "violation"
        return EXIT_OK if not bad else EXIT_FAIL
    report.verdict = "ok"
    return EXIT_OK


def cmd_subst(args, spec, report) -> int:
    sd = spec.lookup("subst", args.subst)
    th = sd.subst
    phis = _sentences(args, spec, th.source_signature, None)
    report.put("subst", sd.name)
    for label, phi in phis:
        report.put(f"sentence.{label}", show_sentence(normalize(apply_substitution(th, phi)), th.target_signature))
    if args.model:
        mm = spec.lookup("model", args.model)
        if mm.model.sig != th.target_signature:
            raise UsageError(f"model {mm.name} is not over the target signature of {sd.name}")
        red = reduct_along_substitution(th, mm.model)
        bad = 0
        for label, phi in phis:
            a, b = satisfies(red, phi), satisfies(mm.model, apply_substitution(th, phi))
            bad += a != b
            report.put(f"satcond.{label}", f"reduct={str(a).lower()} substituted={str(b).lower()}")
        report.verdict = "holds" if not bad else "violation"
        return EXIT_OK if not bad else EXIT_FAIL
    report.verdict = "ok"
    return EXIT_OK


def _closure_report(report, res) -> int:
    report.put("depth", res.depth)
    for (s, e), t in sorted(res.witnesses.items()):
        report.put(f"witness.{s}.{e}", show_term(t))
    for s, e in res.missing:
        report.put(f"missing.{s}", e)
    report.verdict = "holds" if res.holds else "violation"
    return EXIT_OK if res.holds else EXIT_FAIL


def cmd_reachable(args, spec, report) -> int:
    md = _model(spec, args.model)
    report.put("model", md.name)
    return _closure_report(report, is_reachable(md.model))


def cmd_ctor_based(args, spec, report) -> int:
    md = _model(spec, args.model)
    report.put("model", md.name)
    return _closure_report(report, is_constructor_based(md.model))


def _flavor(name: str) -> str:
    try:
        return FLAVOR_NAMES[name]
    except KeyError:
        raise UsageError(f"unknown flavor {name!r}") from None


def _premise_lists(spec: SpecFile, args) -> List:
    """``--phi``, or every other sentence list over the goal's signature."""
    if args.phi:
        return [spec.lookup("sentences", args.phi)]
    if not args.goal:
        raise UsageError("entails needs --phi when the goal is given with --text")
    picked = _select(spec, args.goal)
    owners = {label.split(".", 1)[0] for label, _, _ in picked}
    sig_names = {sname for _, _, sname in picked}
    if len(sig_names) != 1:
        raise UsageError("the goal sentences are over several signatures; pass --phi")
    sig_name = sig_names.pop()
    return [d for d in spec.sentences.values() if d.sig_name == sig_name and d.name not in owners]


def cmd_entails(args, spec, report) -> int:
    if not args.goal and not args.text:
        raise UsageError("entails needs --goal or --text")
    lists = _premise_lists(spec, args)
    if not lists:
        raise UsageError("no premise sentences; pass --phi")
    sig_name = lists[0].sig_name
    sig = spec.signature(sig_name)
    premises = [phi for d in lists for phi in d.sentences]
    flavor = _flavor(args.flavor)
    bounds = _bounds(args.bound, 2)
    _check_bound_sorts(bounds, sig)
    args.sentence = args.goal
    goals = _sentences(args, spec, sig, sig_name)
    report.put("phi", ",".join(d.name for d in lists))
    report.put("flavor", args.flavor)
    worst = EXIT_OK
    for label, goal in goals:
        v = semantic_entails(sig, premises, goal, flavor, bounds, args.budget)
        report.put(f"goal.{label}", v.kind)
        report.put(f"goal.{label}.nodes", v.nodes)
        if v.counterexample is not None and worst == EXIT_OK:
            worst = EXIT_FAIL
            report.put("counterexample.goal", label)
            report.put("counterexample.size", v.counterexample.size)
            _put_model(report, "counterexample", v.counterexample)
        bounds_used = v.bounds
    report.put("bounds", ",".join(f"{s}={k}" for s, k in sorted(bounds_used.items())))
    report.verdict = "holds-up-to-bound" if worst == EXIT_OK else "counterexample"
    return worst


def _resolve_elems(spec: SpecFile, elems) -> list:
    out = []
    for e in elems:
        if isinstance(e, SetRef):
            d = spec.lookup("sentences", e.name)
            out.extend(d.sentences if e.item is None else [d.get(e.item)])
        else:
            out.append(e)
    return out


def build_derivations(spec: SpecFile, proof, budget: int = DEFAULT_BUDGET) -> Dict[str, Derivation]:
    sig = spec.signature(proof.sig_name)
    done: Dict[str, Derivation] = {}
    for st in proof.steps:
        lhs, rhs = tuple(_resolve_elems(spec, st.lhs)), tuple(_resolve_elems(spec, st.rhs))
        for p in st.premises:
            if p not in done:
                raise UsageError(f"step {st.name}: premise {p!r} is not an earlier step")
        prem = tuple(done[p] for p in st.premises)
        morphism, instance, ssig = None, None, sig
        if st.rule == "translate":
            morphism = spec.lookup("morphism", st.along).morphism
            ssig = morphism.target
        elif st.rule in ("cb", "fn"):
            flavor = _flavor(st.flavor) if st.flavor else (CTOR if st.rule == "cb" else FINITE)
            bounds = dict(st.bounds) or 2
            if len(rhs) != 1:
                raise UsageError(f"step {st.name}: rule {st.rule} concludes exactly one sentence")
            goal = normalize(rhs[0])
            if st.rule == "cb":
                if not (isinstance(goal, Not) and hasattr(goal.body, "block") and isinstance(goal.body.body, Not)
                        and len(goal.body.block) == 1 and goal.body.block[0].name == st.var.name
                        and goal.body.block[0].sort == st.var.sort):
                    raise UsageError(f"step {st.name}: (cb) concludes 'forall {st.var} . psi'")
                instance = check_cb_instance(sig, lhs, goal.body.body.body, st.var, st.depth, flavor, bounds,
                                             st.prefix, budget)
            else:
                instance = check_fn_instance(sig, lhs, goal, dict(st.caps), flavor, bounds, budget)
        done[st.name] = Derivation(st.name, st.rule, ssig, lhs, rhs, prem, morphism, instance)
    return done


def cmd_check_proof(args, spec, report) -> int:
    proofs = [spec.lookup("proof", args.proof)] if args.proof else list(spec.proofs.values())
    if not proofs:
        raise UsageError("the file declares no proof")
    bad = 0
    for proof in proofs:
        ders = build_derivations(spec, proof, args.budget)
        for name, d in ders.items():
            r = check_derivation(d)
            own = [v for v in r if v.location == f"step {name}"]
            report.put(f"step.{proof.name}.{name}", f"{d.rule} " + ("ok" if not own else "invalid"))
            for v in own:
                report.put(f"violation.{proof.name}.{name}", v.message)
            if d.instance is not None:
                report.put(f"step.{proof.name}.{name}.premises", len(d.instance.premises))
                report.put(f"step.{proof.name}.{name}.bounded", True)
            bad += len(own)
    report.put("violations", bad)
    report.verdict = "valid-up-to-bound" if not bad else "invalid"
    return EXIT_OK if not bad else EXIT_FAIL


def cmd_realize(args, spec, report) -> int:
    md = _model(spec, args.model)
    td = spec.lookup("type", args.type)
    if td.ltype.sig != md.model.sig:
        raise UsageError(f"type {td.name} and model {md.name} have different signatures")
    env = realizes(md.model, td.ltype)
    report.put("model", md.name)
    report.put("type", td.name)
    if env is None:
        report.verdict = "omits"
        return EXIT_OK
    for v in td.ltype.block:
        report.put(f"realizer.{v.name}", env[v])
    report.verdict = "realizes"
    return EXIT_FAIL


def cmd_isolate(args, spec, report) -> int:
    sd = spec.lookup("sentences", args.phi)
    td = spec.lookup("type", args.type)
    sig = spec.signature(sd.sig_name)
    if args.pool in spec.types:
        pool = list(spec.types[args.pool].ltype.sentences)
    else:
        pool = list(spec.lookup("sentences", args.pool).sentences)
    bounds = _bounds(args.bound, 2)
    _check_bound_sorts(bounds, sig)
    res = search_isolation(sig, sd.sentences, td.ltype, pool, max_d=args.max_d, max_gamma=args.max_gamma,
                           bounds=bounds, flavor=_flavor(args.flavor), budget=args.budget)
    report.put("phi", sd.name)
    report.put("type", td.name)
    report.put("candidates", res.candidates)
    report.put("max_d", args.max_d)
    report.put("max_gamma", args.max_gamma)
    w = res.witness
    if w is None:
        report.verdict = "locally-omits-up-to-bound"
        return EXIT_OK
    report.put("witness.constants", " ".join(f"{c.name}:{c.result}" for c in w.constants))
    for v, c in sorted(w.theta.items()):
        report.put(f"witness.theta.{v.name}", c.name)
    for i, g in enumerate(w.gamma):
        report.put(f"witness.gamma.{i}", show_sentence(g))
    _put_model(report, "witness.model", w.model)
    report.verdict = "isolated"
    return EXIT_FAIL


def _forcing(args, spec):
    fd = spec.lookup("forcing", args.forcing)
    P = fd.prop
    p = args.condition or P.zero
    if p not in P:
        raise UsageError(f"unknown condition {p!r}")
    bounds = SearchBounds(term_depth=args.term_depth, star_cap=args.star_cap, budget=args.budget)
    return fd, P, p, bounds


def _force(args, spec, report, weak: bool) -> int:
    fd, P, p, bounds = _forcing(args, spec)
    phis = _sentences(args, spec, P.sig(p), None)
    fc = Forcer(P, bounds)
    report.put("forcing", fd.name)
    report.put("condition", p)
    failed = 0
    for label, phi in phis:
        phi = normalize(phi)
        if not sentence_over(P.sig(p), phi):
            raise UsageError(f"sentence {label} is not over the signature of {p}")
        ok = fc.weakly_forces(p, phi) if weak else fc.forces(p, phi)
        failed += not ok
        report.put(f"sentence.{label}", ok)
    for d in fc.diagnostics:
        report.put("diagnostic", f"{d.condition}: {show_sentence(d.sentence)}: {d.reason}")
    report.put("term_depth", bounds.term_depth)
    report.put("star_cap", "auto" if bounds.star_cap is None else bounds.star_cap)
    report.verdict = "forced" if not failed else "not-forced"
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_force(args, spec, report) -> int:
    return _force(args, spec, report, weak=False)


def cmd_wforce(args, spec, report) -> int:
    return _force(args, spec, report, weak=True)


def _pool(args, spec, P, p) -> list:
    args.sentence = args.pool
    return [normalize(phi) for _, phi in _sentences(args, spec, P.sig(p), None)]


def _extend(args, spec, report):
    fd, P, p, bounds = _forcing(args, spec)
    pool = _pool(args, spec, P, p)
    fc = Forcer(P, bounds)
    G = extend_to_generic(P, p, pool, bounds, fc)
    report.put("forcing", fd.name)
    report.put("start", p)
    report.put("members", " ".join(G.members))
    report.put("top", G.top)
    for i, d in enumerate(G.log):
        what = "complete" if d.sentence is None else ("forces " if d.positive else "forces not ") + \
            show_sentence(d.sentence)
        report.put(f"chain.{i}", f"{d.condition} {what}")
    check = validate_generic(P, G.members, pool, bounds, fc)
    for v in check:
        report.put("violation", v)
    return P, G, pool, fc, check


def cmd_generic_extend(args, spec, report) -> int:
    _, _, _, _, check = _extend(args, spec, report)
    report.verdict = "generic" if check.ok else "violation"
    return EXIT_OK if check.ok else EXIT_FAIL


def cmd_generic_model(args, spec, report) -> int:
    P, G, pool, fc, check = _extend(args, spec, report)
    M = generic_model(P, G, SearchBounds(term_depth=args.term_depth))
    for s in M.sig.sorts:
        classes = ["{" + " ".join(str(t) for t in cls) + "}" for cls in M.classes(s)]
        report.put(f"model.carrier.{s}", " ".join(classes))
    for (l, s), pairs in sorted(M.transitions.items()):
        report.put(f"model.label.{l}.{s}", " ".join(f"({a},{b})" for a, b in sorted(pairs, key=str)))
    bad = 0
    for i, phi in enumerate(pool):
        forced = generic_forces(P, G, phi, fc)
        neg = generic_forces(P, G, Not(phi), fc)
        sat = M.satisfies(phi)
        decided = forced or neg
        agree = (sat == forced) if decided else True
        bad += not agree
        report.put(f"pool.{i}", f"forced={str(forced).lower()} satisfied={str(sat).lower()} "
                                f"decided={str(decided).lower()}")
    ok = check.ok and not bad
    report.verdict = "holds" if ok else "violation"
    return EXIT_OK if ok else EXIT_FAIL


def cmd_fuzz_satcond(args, spec, report) -> int:
    kinds = ("morphism", "subst") if args.kind == "both" else (args.kind,)
    bad = 0
    for kind in kinds:
        st = fuzz_satcond(args.seed, args.cases, kind, args.max_size, args.depth)
        report.put(f"{kind}.cases", st.cases)
        report.put(f"{kind}.agree", st.agree)
        report.put(f"{kind}.empty_carriers", st.empty_carriers)
        report.put(f"{kind}.with_star", st.with_star)
        for f in st.failures[:5]:
            report.put(f"{kind}.failure.{f.case}", f"{show_sentence(f.sentence)}: {f.detail}")
        bad += len(st.failures)
    report.verdict = "holds" if not bad else "violation"
    return EXIT_OK if not bad else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing

def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ta", description="Transition algebra toolkit.")
    ap.add_argument("--version", action="version", version=f"ta {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("kv", "human"), default="kv")
    common.add_argument("--seed", type=int, default=0, help="random seed (TA_SEED overrides)")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search node budget")
    common.add_argument("--time-limit", type=float, default=600.0, help="wall-clock seconds (0 disables)")
    sub = ap.add_subparsers(dest="verb", required=True, metavar="VERB")

    def verb(name, fn, help_, file=True):
        p = sub.add_parser(name, parents=[common], help=help_)
        if file:
            p.add_argument("file", help=".ta file, or fixture:NAME[:K]")
        p.set_defaults(fn=fn)
        return p

    def sentence_flags(p):
        p.add_argument("--sentence", help="all | LIST | LIST.item | item")
        p.add_argument("--text", help="a sentence written inline")

    def forcing_flags(p):
        p.add_argument("--forcing", required=True)
        p.add_argument("--condition")
        p.add_argument("--term-depth", type=int, default=1)
        p.add_argument("--star-cap", type=int)

    p = verb("check", cmd_check, "parse and validate a file")
    p.add_argument("--term-depth", type=int, default=1)
    p = verb("sat", cmd_sat, "check a model against sentences")
    p.add_argument("--model")
    sentence_flags(p)
    p = verb("reduct", cmd_reduct, "reduct of a model along a morphism")
    p.add_argument("--morphism", required=True)
    p.add_argument("--model")
    p = verb("translate", cmd_translate, "translate sentences along a morphism")
    p.add_argument("--morphism", required=True)
    p.add_argument("--model", help="also check the satisfaction condition on this target model")
    sentence_flags(p)
    p = verb("subst", cmd_subst, "apply a substitution")
    p.add_argument("--subst", required=True)
    p.add_argument("--model", help="also check the satisfaction condition on this model")
    sentence_flags(p)
    p = verb("reachable", cmd_reachable, "is every element named by a ground term")
    p.add_argument("--model")
    p = verb("ctor-based", cmd_ctor_based, "is the model generated by its constructors")
    p.add_argument("--model")
    p = verb("entails", cmd_entails, "bounded semantic consequence")
    p.add_argument("--phi", help="premise list (default: the other lists over the goal's signature)")
    p.add_argument("--goal")
    p.add_argument("--text")
    p.add_argument("--flavor", default="plain", choices=sorted(FLAVOR_NAMES))
    p.add_argument("--bound", help="N or SORT=N,...")
    p = verb("check-proof", cmd_check_proof, "check proof steps")
    p.add_argument("--proof")
    p = verb("realize", cmd_realize, "does a model realize a type")
    p.add_argument("--model")
    p.add_argument("--type", required=True)
    p = verb("isolate", cmd_isolate, "bounded isolation search")
    p.add_argument("--phi", required=True)
    p.add_argument("--type", required=True)
    p.add_argument("--pool", required=True)
    p.add_argument("--bound", "--bounds", dest="bound")
    p.add_argument("--max-d", type=int, default=1)
    p.add_argument("--max-gamma", type=int, default=1)
    p.add_argument("--flavor", default="plain", choices=sorted(FLAVOR_NAMES))
    for name, fn, h in (("force", cmd_force, "forcing relation"), ("wforce", cmd_wforce, "weak forcing")):
        p = verb(name, fn, h)
        forcing_flags(p)
        sentence_flags(p)
    for name, fn, h in (("generic-extend", cmd_generic_extend, "extend a condition to a generic ideal"),
                        ("generic-model", cmd_generic_model, "generic model of an extended ideal")):
        p = verb(name, fn, h)
        forcing_flags(p)
        p.add_argument("--pool", default="all")
        p.set_defaults(text=None)
    p = verb("fixtures", None, "list fixtures or print one as .ta text", file=False)
    p.add_argument("name", nargs="?")
    p.add_argument("--k", type=int, default=0, help="truncation parameter")
    p = verb("fuzz-satcond", cmd_fuzz_satcond, "satisfaction-condition fuzz campaign", file=False)
    p.add_argument("--kind", choices=("morphism", "subst", "both"), default="both")
    p.add_argument("--cases", type=int, default=1000)
    p.add_argument("--max-size", type=int, default=3)
    p.add_argument("--depth", type=int, default=4)
    return ap


@contextlib.contextmanager
def _deadline(seconds: float):
    if seconds <= 0 or not hasattr(signal, "SIGALRM"):
        yield
        return

    def expire(signum, frame):
        raise ResourceLimit(f"wall-clock limit of {seconds:g} s exceeded")
    old = signal.signal(signal.SIGALRM, expire)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _fixtures(args, out) -> int:
    if not args.name:
        for n in FIXTURES:
            out.write(n + "\n")
        return EXIT_OK
    out.write(print_spec(fixture_spec(args.name, args.k)))
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    env_seed = os.environ.get("TA_SEED")
    if env_seed is not None:
        try:
            args.seed = int(env_seed)
        except ValueError:
            err.write(f"ta: TA_SEED must be an integer, got {env_seed!r}\n")
            return EXIT_USAGE
    try:
        if args.verb == "fixtures":
            return _fixtures(args, out)
        report = Report(args.verb)
        with _deadline(args.time_limit):
            spec = _load(args.file) if hasattr(args, "file") else None
            code = args.fn(args, spec, report)
        report.put("seed", args.seed)
        out.write(report.render(args.format))
        return code
    except SpecError as e:
        err.write(f"{e}\n")
        if args.verb == "check":
            report = Report("check")
            report.verdict = "invalid"
            report.put("error", e)
            out.write(report.render(args.format))
            return EXIT_FAIL
        return EXIT_USAGE
    except (UsageError, UnknownFixture, MissingCtors, ValueError, KeyError) as e:
        err.write(f"ta {args.verb}: {e}\n")
        return EXIT_USAGE
    except ResourceLimit as e:
        err.write(f"ta {args.verb}: resource limit: {e}\n")
        return EXIT_USAGE
    except TAError as e:
        err.write(f"ta {args.verb}: {type(e).__name__}: {e}\n")
        return EXIT_USAGE
    except OSError as e:
        err.write(f"ta {args.verb}: {e}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
