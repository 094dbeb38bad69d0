"""Semantic model classes, bounded semantic consequence, and the (CB)/(FN) rules."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import MissingCtors, ValidationReport
from .finmod.model import FiniteModel
from .finmod.search import Bounds, ModelSearch, resolve_bounds
from .institution import CTOR, FINITE, PLAIN, SignatureMorphism, check_morphism, translate_sentence
from .kernel import (App, Eq, Forall, Func, Not, Or, Signature, Var, Variable, free_variables, normalize,
                     subformulas, substitute, term_vars)

FLAVORS = (PLAIN, CTOR, FINITE)


# ---------------------------------------------------------------------------
# reachability

@dataclass
class ClosureResult:
    """Outcome of a generation check with its certificate.

    ``witnesses`` maps ``(sort, element)`` to a term denoting it (loose-sort
    parameters appear as variables named after the element); ``missing``
    lists elements outside the generated part; ``depth`` is the number of
    closure rounds needed.
    """

    holds: bool
    witnesses: Dict[Tuple[str, str], object]
    missing: List[Tuple[str, str]]
    depth: int

    def __bool__(self) -> bool:
        return self.holds


def _closure(sig: Signature, carriers: Mapping[str, Sequence[str]], tables, funcs: Sequence[Func],
             seeds: Dict[Tuple[str, str], object]) -> Tuple[Dict[Tuple[str, str], object], int]:
    reached = dict(seeds)
    depth = 0
    while True:
        fresh = {}
        for f in funcs:
            pools = [[e for e in carriers[s] if (s, e) in reached] for s in f.arity]
            for args in itertools.product(*pools):
                val = tables[f].get(tuple(args))
                if val is None:
                    continue
                key = (f.result, val)
                if key in reached or key in fresh:
                    continue
                fresh[key] = App(f, tuple(reached[(s, a)] for s, a in zip(f.arity, args)))
        if not fresh:
            return reached, depth
        reached.update(fresh)
        depth += 1


def _result(sig, carriers, reached, depth, sorts=None) -> ClosureResult:
    missing = [(s, e) for s in (sorts or sig.sorts) for e in carriers[s] if (s, e) not in reached]
    return ClosureResult(not missing, reached, missing, depth)


def is_reachable(m: FiniteModel) -> ClosureResult:
    """Every element is the value of a ground term."""
    sig = m.sig
    reached, depth = _closure(sig, m.carriers, m.tables, sig.funcs, {})
    return _result(sig, m.carriers, reached, depth)


def loose_parameter(sort: str, element: str) -> Var:
    return Var(Variable(f"y_{element}", sort))


def ctor_closure(sig: Signature, carriers, tables) -> ClosureResult:
    loose = sig.loose_sorts
    seeds = {(s, e): loose_parameter(s, e) for s in loose for e in carriers[s]}
    reached, depth = _closure(sig, carriers, tables, sig.ordered_ctors(), seeds)
    return _result(sig, carriers, reached, depth, sig.constrained_sorts)


def is_constructor_based(m: FiniteModel) -> ClosureResult:
    """Constrained carriers are generated by constructors from all loose elements."""
    if not m.sig.ctors:
        raise MissingCtors("the signature declares no constructors")
    return ctor_closure(m.sig, m.carriers, m.tables)


# ---------------------------------------------------------------------------
# cardinality sentences

def gamma_sentence(sort: str, n: int):
    """"At most ``n`` elements of ``sort``": forall x_1..x_{n+1}. or{x_i = x_j | i < j}."""
    xs = [Variable(f"x_{i}", sort) for i in range(1, n + 2)]
    eqs = tuple(Eq(Var(a), Var(b)) for i, a in enumerate(xs) for b in xs[i + 1:])
    return Forall(xs, Or(eqs))


# ---------------------------------------------------------------------------
# bounded semantic consequence

@dataclass
class Verdict:
    holds: bool
    counterexample: Optional[FiniteModel]
    bounds: Dict[str, int]
    flavor: str
    nodes: int = 0

    @property
    def kind(self) -> str:
        return "holds-up-to-bound" if self.holds else "counterexample"


def class_filters(sig: Signature, flavor: str):
    """Stage filters restricting a model search to the flavor's class."""
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}")
    if flavor == PLAIN:
        return [], None
    if not sig.ctors:
        raise MissingCtors(f"flavor {flavor} needs constructor symbols")
    if flavor == FINITE and not sig.finite_sorts:
        raise ValueError("flavor finite needs declared finite sorts")
    ctors = sig.ordered_ctors()
    order = ctors + tuple(f for f in sig.funcs if f not in sig.ctors)
    pred = lambda carriers, tables: ctor_closure(sig, carriers, tables).holds  # noqa: E731
    return [(ctors, pred)], order


def model_search(sig: Signature, constraints: Sequence, flavor: str, bounds: Bounds, budget: int) -> ModelSearch:
    filters, order = class_filters(sig, flavor)
    return ModelSearch(sig, bounds, constraints, budget=budget, stage_filters=filters, func_order=order)


def semantic_entails(sig: Signature, phis: Sequence, phi, flavor: str = PLAIN, bounds: Bounds = 2,
                     budget: int = 2_000_000) -> Verdict:
    """Search the flavor's models within ``bounds`` for one satisfying ``phis`` but not ``phi``.

    Never reports unbounded validity: a negative search yields
    ``holds=True`` meaning "no counterexample within the bounds".
    """
    search = model_search(sig, list(phis) + [Not(phi)], flavor, bounds, budget)
    m = next(iter(search.models()), None)
    return Verdict(m is None, m, dict(search.bounds), flavor, search.nodes)


def satisfiable(sig: Signature, phis: Sequence, flavor: str = PLAIN, bounds: Bounds = 2,
                budget: int = 2_000_000) -> Optional[FiniteModel]:
    return next(iter(model_search(sig, list(phis), flavor, bounds, budget).models()), None)


# ---------------------------------------------------------------------------
# (CB) and (FN)

def ctor_terms(sig: Signature, sort: str, depth: int, prefix: int = 0) -> List[object]:
    """Constructor terms of ``sort`` up to ``depth`` over loose variables.

    Loose positions take variables ``y_<sort>_<i>`` with ``i`` below
    ``prefix`` (default: ``depth``, at least 1); terms are deduplicated up
    to renaming of variables.
    """
    if not sig.ctors:
        raise MissingCtors("the signature declares no constructors")
    prefix = prefix or max(depth, 1)
    loose = set(sig.loose_sorts)
    ctors = sig.ordered_ctors()
    leaves: Dict[str, List[object]] = {}
    for s in sig.sorts:
        if s in loose:
            leaves[s] = [Var(Variable(f"y_{s}_{i}", s)) for i in range(1, prefix + 1)]
        else:
            leaves[s] = [App(f) for f in ctors if f.is_constant and f.result == s]
    levels = [leaves]
    for d in range(1, depth + 1):
        level: Dict[str, List[object]] = {s: [] for s in sig.sorts}
        for f in ctors:
            if f.is_constant:
                continue
            pools = []
            for s in f.arity:
                pools.append([t for lv in levels for t in lv.get(s, [])])
            for args in itertools.product(*pools):
                if not any(a in levels[d - 1].get(s, []) for a, s in zip(args, f.arity)):
                    continue
                level[f.result].append(App(f, tuple(args)))
        levels.append(level)
    seen = set()
    out = []
    for lv in levels:
        for t in lv.get(sort, []):
            if sort in loose:
                continue
            canon = _canon_vars(t)
            if canon in seen:
                continue
            seen.add(canon)
            out.append(canon)
    return out


def _canon_vars(t):
    counters: Dict[str, int] = {}
    ren = {}
    for v in term_vars(t):
        counters[v.sort] = counters.get(v.sort, 0) + 1
        ren[v] = Var(Variable(f"y_{v.sort}_{counters[v.sort]}", v.sort))
    from .kernel import subst_term
    return subst_term(t, ren)


@dataclass
class Premise:
    label: str
    sentence: object
    verdict: Verdict


@dataclass
class InstanceReport:
    rule: str
    phis: Tuple
    conclusion: object
    premises: List[Premise] = field(default_factory=list)
    params: Dict[str, object] = field(default_factory=dict)
    bounded: bool = True

    @property
    def all_hold(self) -> bool:
        return all(p.verdict.holds for p in self.premises)

    def first_failure(self) -> Optional[Premise]:
        return next((p for p in self.premises if not p.verdict.holds), None)


def _fresh_rename(t, avoid: Iterable[str]):
    avoid = set(avoid)
    ren = {}
    for v in term_vars(t):
        name = v.name
        while name in avoid:
            name += "_"
        ren[v] = Var(Variable(name, v.sort))
    from .kernel import subst_term
    return subst_term(t, ren)


def _variable_names(phi) -> set:
    from .kernel import Exists
    names = set()
    for p in subformulas(phi):
        if isinstance(p, Exists):
            names.update(v.name for v in p.block)
    names.update(v.name for v in free_variables(phi))
    return names


def cb_premise(psi, x: Variable, t):
    """``forall var(t) . psi(t)``."""
    t = _fresh_rename(t, _variable_names(psi))
    body = substitute(psi, {x: t})
    vs = term_vars(t)
    return normalize(Forall(vs, body) if vs else body)


def check_cb_instance(sig: Signature, phis: Sequence, psi, x: Variable, depth: int, flavor: str = CTOR,
                      bounds: Bounds = 2, prefix: int = 0, budget: int = 2_000_000) -> InstanceReport:
    if not sig.ctors:
        raise MissingCtors("(CB) needs constructor symbols")
    if x.sort not in sig.constrained_sorts:
        raise ValueError(f"variable {x} is not of a constrained sort")
    terms = ctor_terms(sig, x.sort, depth, prefix)
    report = InstanceReport("cb", tuple(phis), normalize(Forall([x], psi)),
                            params={"var": x, "depth": depth, "prefix": prefix or max(depth, 1),
                                    "flavor": flavor, "bounds": resolve_bounds(sig, bounds)})
    for t in terms:
        sent = cb_premise(psi, x, t)
        report.premises.append(Premise(str(t), sent, semantic_entails(sig, phis, sent, flavor, bounds, budget)))
    return report


def fn_tuples(sig: Signature, caps: Mapping[str, int]):
    sorts = [s for s in sig.sorts if s in sig.finite_sorts]
    for s in caps:
        if s not in sig.finite_sorts:
            raise ValueError(f"sort {s} is not declared finite")
    for combo in itertools.product(*(range(caps.get(s, 0) + 1) for s in sorts)):
        yield dict(zip(sorts, combo))


def check_fn_instance(sig: Signature, phis: Sequence, psi, caps: Mapping[str, int], flavor: str = FINITE,
                      bounds: Bounds = 2, budget: int = 2_000_000) -> InstanceReport:
    if not sig.finite_sorts:
        raise ValueError("(FN) needs declared finite sorts")
    report = InstanceReport("fn", tuple(phis), normalize(psi),
                            params={"caps": dict(caps), "flavor": flavor, "bounds": resolve_bounds(sig, bounds)})
    for nbar in fn_tuples(sig, caps):
        gammas = [gamma_sentence(s, n) for s, n in nbar.items()]
        label = ",".join(f"{s}={n}" for s, n in nbar.items())
        report.premises.append(Premise(label, psi, semantic_entails(sig, list(phis) + gammas, psi, flavor,
                                                                    bounds, budget)))
    return report


# ---------------------------------------------------------------------------
# derivations

RULES = ("mono", "trans", "union", "translate", "cb", "fn")


@dataclass
class Derivation:
    """A node concluding ``lhs |- rhs`` by ``rule`` from ``premises``."""

    name: str
    rule: str
    sig: Signature
    lhs: Tuple
    rhs: Tuple
    premises: Tuple["Derivation", ...] = ()
    morphism: Optional[SignatureMorphism] = None
    instance: Optional[InstanceReport] = None


@dataclass
class DerivationReport(ValidationReport):
    bounded: List[str] = field(default_factory=list)


def _sset(phis) -> frozenset:
    return frozenset(normalize(p) for p in phis)


def _morphism_flavor(sig: Signature) -> str:
    if sig.finite_sorts:
        return FINITE
    if sig.ctors:
        return CTOR
    return PLAIN


def check_derivation(d: Derivation) -> DerivationReport:
    report = DerivationReport()
    _check_node(d, report, set())
    return report


def _check_node(d: Derivation, report: DerivationReport, done: set) -> None:
    if id(d) in done:
        return
    done.add(id(d))
    for p in d.premises:
        _check_node(p, report, done)
    where = f"step {d.name}"
    lhs, rhs = _sset(d.lhs), _sset(d.rhs)
    prem = d.premises
    if d.rule not in RULES:
        report.add(where, f"unknown rule {d.rule!r}")
        return
    if d.rule == "mono":
        if prem:
            report.add(where, "monotonicity takes no premises")
        if not rhs <= lhs:
            report.add(where, "monotonicity needs the right-hand set to be included in the left-hand set")
    elif d.rule == "trans":
        if len(prem) != 2:
            report.add(where, "transitivity takes exactly two premises")
            return
        a, b = prem
        if _sset(a.rhs) != _sset(b.lhs):
            report.add(where, f"premises {a.name} and {b.name} do not chain")
        if _sset(a.lhs) != lhs or _sset(b.rhs) != rhs:
            report.add(where, "conclusion does not match the outer sets of the premises")
    elif d.rule == "union":
        collected = set()
        for p in prem:
            if _sset(p.lhs) != lhs:
                report.add(where, f"premise {p.name} has a different left-hand set")
            if len(p.rhs) != 1:
                report.add(where, f"premise {p.name} must conclude a single sentence")
            collected |= _sset(p.rhs)
        if collected != rhs:
            report.add(where, "right-hand set is not the union of the premises' sentences")
    elif d.rule == "translate":
        if len(prem) != 1 or d.morphism is None:
            report.add(where, "translation takes one premise and a morphism")
            return
        chi = d.morphism
        mreport = check_morphism(chi, _morphism_flavor(chi.source))
        for v in mreport:
            report.add(where, f"morphism: {v}")
        if not mreport.ok:
            return
        p = prem[0]
        if _sset(translate_sentence(chi, s) for s in p.lhs) != lhs or \
                _sset(translate_sentence(chi, s) for s in p.rhs) != rhs:
            report.add(where, "conclusion is not the translation of the premise")
    else:
        inst = d.instance
        if inst is None or inst.rule != d.rule:
            report.add(where, f"rule {d.rule} needs its bounded premise table")
            return
        if prem:
            report.add(where, f"rule {d.rule} takes its premises from the instance table")
        if _sset(inst.phis) != lhs or rhs != frozenset({normalize(inst.conclusion)}):
            report.add(where, "conclusion does not match the instance table")
        failing = inst.first_failure()
        if failing is not None:
            report.add(where, f"premise {failing.label} fails: bounded counterexample found")
        report.bounded.append(d.name)
