"""Signature morphisms, sentence translation, reducts and substitutions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .errors import SortError, UnboundVariable, ValidationReport
from .finmod.model import FiniteModel, eval_term
from .kernel import (App, Eq, Exists, Func, Not, Or, Signature, Trans, Var, Variable, map_action, requalify,
                     sort_of_term, substitute)

PLAIN, CTOR, FINITE = "plain", "ctor", "finite"


@dataclass(frozen=True)
class SignatureMorphism:
    source: Signature
    target: Signature
    sort_map: Mapping[str, str] = field(default_factory=dict)
    func_map: Mapping[Func, Func] = field(default_factory=dict)
    label_map: Mapping[str, str] = field(default_factory=dict)

    def sort(self, s: str) -> str:
        return self.sort_map[s]

    def func(self, f: Func) -> Func:
        return self.func_map[f]

    def label(self, l: str) -> str:
        return self.label_map[l]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignatureMorphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and dict(self.sort_map) == dict(other.sort_map)
                and dict(self.func_map) == dict(other.func_map)
                and dict(self.label_map) == dict(other.label_map))

    __hash__ = None  # type: ignore[assignment]


def make_morphism(source: Signature, target: Signature, sorts: Optional[Mapping[str, str]] = None,
                  ops: Optional[Mapping] = None, labels: Optional[Mapping[str, str]] = None) -> SignatureMorphism:
    """Build a morphism from partial name maps; unlisted items map to the same name.

    ``ops`` keys may be symbol names or full ``Func`` values; values are
    target names, resolved to the target symbol of the translated rank.
    Items that cannot be resolved are left out and show up in
    :func:`check_morphism`.
    """
    sorts = dict(sorts or {})
    ops = dict(ops or {})
    labels = dict(labels or {})
    sort_map = {s: sorts.get(s, s) for s in source.sorts}
    func_map: Dict[Func, Func] = {}
    for f in source.funcs:
        name = ops.get(f, ops.get(f.name, f.name))
        if isinstance(name, Func):
            func_map[f] = name
            continue
        arity = tuple(sort_map.get(s, s) for s in f.arity)
        result = sort_map.get(f.result, f.result)
        for g in target.symbols(name):
            if g.arity == arity and g.result == result:
                func_map[f] = g
                break
    label_map = {l: labels.get(l, l) for l in source.labels}
    return SignatureMorphism(source, target, sort_map, func_map, label_map)


def identity(sig: Signature) -> SignatureMorphism:
    return SignatureMorphism(sig, sig, {s: s for s in sig.sorts}, {f: f for f in sig.funcs},
                             {l: l for l in sig.labels})


def inclusion(small: Signature, big: Signature) -> SignatureMorphism:
    return SignatureMorphism(small, big, {s: s for s in small.sorts}, {f: f for f in small.funcs},
                             {l: l for l in small.labels})


def compose_morphisms(first: SignatureMorphism, second: SignatureMorphism) -> SignatureMorphism:
    """``second`` after ``first``, with flat composed maps."""
    return SignatureMorphism(
        first.source, second.target,
        {s: second.sort_map[t] for s, t in first.sort_map.items()},
        {f: second.func_map[g] for f, g in first.func_map.items()},
        {l: second.label_map[m] for l, m in first.label_map.items()},
    )


def check_morphism(chi: SignatureMorphism, flavor: str = PLAIN) -> ValidationReport:
    report = ValidationReport()
    src, tgt = chi.source, chi.target
    for s in src.sorts:
        t = chi.sort_map.get(s)
        if t is None:
            report.add(f"sort {s}", "sort is not mapped")
        elif not tgt.has_sort(t):
            report.add(f"sort {s}", f"image {t} is not a target sort")
    for f in src.funcs:
        g = chi.func_map.get(f)
        if g is None:
            report.add(f"op {f.name}", f"symbol {f} is not mapped")
            continue
        if not tgt.has_func(g):
            report.add(f"op {f.name}", f"image {g} is not a target symbol")
        want = (tuple(chi.sort_map.get(s, "?") for s in f.arity), chi.sort_map.get(f.result, "?"))
        if g.rank != want:
            report.add(f"op {f.name}", f"image {g} does not have the translated rank")
    for l in src.labels:
        m = chi.label_map.get(l)
        if m is None:
            report.add(f"label {l}", "label is not mapped")
        elif m not in tgt.labels:
            report.add(f"label {l}", f"image {m} is not a target label")
    if flavor in (CTOR, FINITE):
        for f in src.ordered_ctors():
            g = chi.func_map.get(f)
            if g is not None and g not in tgt.ctors:
                report.add(f"ctor {f.name}", f"constructor {f} maps to non-constructor {g} (not preserved)")
        for s in src.sorts:
            t = chi.sort_map.get(s)
            for g in tgt.ordered_ctors():
                if g.result != t:
                    continue
                if not any(chi.func_map.get(f) == g and f.result == s for f in src.ctors):
                    report.add(f"ctor {g.name}",
                               f"target constructor {g} has no source constructor of result {s} (not reflected)")
    if flavor == FINITE:
        for s in sorted(src.finite_sorts):
            t = chi.sort_map.get(s)
            if t not in tgt.finite_sorts:
                report.add(f"finite {s}", f"finite sort {s} maps to {t}, which is not finite (not preserved)")
    return report


# ---------------------------------------------------------------------------
# translation

def translate_term(chi: SignatureMorphism, t, env: Optional[Mapping[Variable, Variable]] = None):
    if isinstance(t, Var):
        v = t.var
        if env and v in env:
            return Var(env[v])
        return Var(Variable(v.name, chi.sort_map[v.sort], v.qualifier))
    return App(chi.func_map[t.func], tuple(translate_term(chi, a, env) for a in t.args))


def translate_action(chi: SignatureMorphism, a):
    return map_action(a, lambda l: chi.label_map[l])


def translate_sentence(chi: SignatureMorphism, phi):
    """Homomorphic translation; a block X becomes X' with every variable's sort translated."""
    return _translate(chi, requalify(phi), {})


def _translate(chi, phi, env):
    if isinstance(phi, Eq):
        return Eq(translate_term(chi, phi.lhs, env), translate_term(chi, phi.rhs, env))
    if isinstance(phi, Trans):
        return Trans(translate_action(chi, phi.action), translate_term(chi, phi.src, env),
                     translate_term(chi, phi.dst, env))
    if isinstance(phi, Not):
        return Not(_translate(chi, phi.body, env))
    if isinstance(phi, Or):
        return Or(tuple(_translate(chi, p, env) for p in phi.disjuncts))
    new_block = tuple(Variable(v.name, chi.sort_map[v.sort], v.qualifier) for v in phi.block)
    inner = dict(env)
    inner.update(zip(phi.block, new_block))
    return Exists(new_block, _translate(chi, phi.body, inner))


def reduct_model(chi: SignatureMorphism, m: FiniteModel) -> FiniteModel:
    src = chi.source
    carriers = {s: m.carrier(chi.sort_map[s]) for s in src.sorts}
    tables = {f: m.tables[chi.func_map[f]] for f in src.funcs}
    rels = {}
    for l in src.labels:
        for s in src.sorts:
            r = m.relation(chi.label_map[l], chi.sort_map[s])
            if r:
                rels[(l, s)] = r
    return FiniteModel(src, carriers, tables, rels)


# ---------------------------------------------------------------------------
# substitutions

@dataclass(frozen=True)
class Substitution:
    """Map from constants ``source`` to terms over ``base`` extended with ``target``."""

    base: Signature
    source: Tuple[Func, ...]
    target: Tuple[Func, ...]
    mapping: Mapping[Func, object]

    @property
    def source_signature(self) -> Signature:
        return self.base.with_constants(self.source)

    @property
    def target_signature(self) -> Signature:
        return self.base.with_constants(self.target)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Substitution):
            return NotImplemented
        return (self.base == other.base and self.source == other.source and self.target == other.target
                and dict(self.mapping) == dict(other.mapping))

    __hash__ = None  # type: ignore[assignment]


def check_substitution(theta: Substitution) -> ValidationReport:
    report = ValidationReport()
    base_consts = set(theta.base.funcs)
    tsig = theta.target_signature
    for c in theta.source + theta.target:
        if not c.is_constant:
            report.add(f"const {c.name}", "substitution domains must contain constants only")
        if c in base_consts:
            report.add(f"const {c.name}", "constant is not new for the base signature")
    for c in theta.source:
        if c not in theta.mapping:
            report.add(f"const {c.name}", "no image given")
            continue
        t = theta.mapping[c]
        try:
            s = sort_of_term(tsig, (), t)
        except (SortError, UnboundVariable) as e:
            report.add(f"const {c.name}", str(e))
            continue
        if s != c.result:
            report.add(f"const {c.name}", f"image has sort {s}, expected {c.result}")
    for c in theta.mapping:
        if c not in theta.source:
            report.add(f"const {c.name}", "image given for a constant outside the source set")
    return report


def identity_substitution(base: Signature, consts: Iterable[Func]) -> Substitution:
    consts = tuple(consts)
    return Substitution(base, consts, consts, {c: App(c) for c in consts})


def apply_substitution(theta: Substitution, phi):
    return substitute(phi, theta.mapping)


def reduct_along_substitution(theta: Substitution, m: FiniteModel) -> FiniteModel:
    sig = theta.source_signature
    tables = {f: m.tables[f] for f in theta.base.funcs}
    for c in theta.source:
        tables[c] = {(): eval_term(m, {}, theta.mapping[c])}
    rels = {k: r for k, r in m.rels.items() if k[0] in theta.base.labels}
    return FiniteModel(sig, {s: m.carrier(s) for s in sig.sorts}, tables, rels)
