"""Finite transition algebras and the satisfaction relation."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

from ..errors import UnboundVariable, ValidationReport
from ..kernel import Eq, Exists, Func, Label, Not, Or, Seq, Signature, Star, Trans, Union, Var, Variable

Pair = Tuple[str, str]
Relation = FrozenSet[Pair]


@dataclass(frozen=True)
class FiniteModel:
    """A model with finite carriers.

    ``carriers`` maps each sort to an ordered tuple of element ids (possibly
    empty); ``tables`` maps each function symbol to a dict from argument
    tuples to results; ``rels`` maps ``(label, sort)`` to a set of pairs.
    Missing relation entries stand for the empty relation.
    """

    sig: Signature
    carriers: Mapping[str, Tuple[str, ...]]
    tables: Mapping[Func, Mapping[Tuple[str, ...], str]]
    rels: Mapping[Tuple[str, str], Relation]

    def carrier(self, sort: str) -> Tuple[str, ...]:
        return self.carriers.get(sort, ())

    def relation(self, label: str, sort: str) -> Relation:
        return self.rels.get((label, sort), frozenset())

    def apply(self, f: Func, args: Tuple[str, ...]) -> str:
        return self.tables[f][args]

    def key(self) -> tuple:
        """Hashable structural identity, independent of dict ordering."""
        return (
            self.sig,
            tuple((s, self.carrier(s)) for s in self.sig.sorts),
            tuple((f, tuple(sorted(self.tables.get(f, {}).items()))) for f in self.sig.funcs),
            tuple(((l, s), tuple(sorted(self.relation(l, s))))
                  for l in self.sig.labels for s in self.sig.sorts),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteModel):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    @property
    def size(self) -> int:
        return sum(len(self.carrier(s)) for s in self.sig.sorts)

    def expand(self, sig: Signature, values: Mapping[Func, str]) -> "FiniteModel":
        """Expansion to ``sig`` (this signature plus new constants) interpreting them by ``values``."""
        tables = dict(self.tables)
        for f, v in values.items():
            tables[f] = {(): v}
        return FiniteModel(sig, self.carriers, tables, self.rels)

    def restrict(self, sig: Signature) -> "FiniteModel":
        """Reduct along the inclusion ``sig`` into this model's signature."""
        return FiniteModel(sig, {s: self.carrier(s) for s in sig.sorts},
                           {f: self.tables[f] for f in sig.funcs if f in self.tables},
                           {(l, s): r for (l, s), r in self.rels.items() if l in sig.labels and s in sig.sorts})

    def __str__(self) -> str:
        parts = [f"{s}={{{', '.join(self.carrier(s))}}}" for s in self.sig.sorts]
        return "model(" + "; ".join(parts) + ")"


def build_model(sig: Signature, carriers: Mapping[str, Iterable[str]],
                tables: Optional[Mapping[Func, Mapping]] = None,
                rels: Optional[Mapping[Tuple[str, str], Iterable[Pair]]] = None) -> FiniteModel:
    return FiniteModel(
        sig,
        {s: tuple(carriers.get(s, ())) for s in sig.sorts},
        {f: dict(tables[f]) for f in (tables or {})},
        {k: frozenset(v) for k, v in (rels or {}).items()},
    )


def validate_model(m: FiniteModel) -> ValidationReport:
    report = ValidationReport()
    sig = m.sig
    for s in sig.sorts:
        if s not in m.carriers:
            report.add(f"carrier {s}", "no carrier declared")
            continue
        elems = m.carriers[s]
        if len(set(elems)) != len(elems):
            report.add(f"carrier {s}", "duplicate element ids")
    for s in m.carriers:
        if s not in sig.sorts:
            report.add(f"carrier {s}", "carrier for undeclared sort")
    carrier_sets = {s: set(m.carrier(s)) for s in sig.sorts}
    for f in sig.funcs:
        where = f"op {f.name}" if len(sig.symbols(f.name)) == 1 else f"op {f}"
        table = m.tables.get(f)
        if table is None:
            if f.is_constant and not carrier_sets.get(f.result):
                report.add(where, f"constant of sort {f.result} but carrier({f.result}) is empty")
            else:
                report.add(where, "no interpretation given")
            continue
        expected = set(itertools.product(*(m.carrier(s) for s in f.arity)))
        got = set(table)
        for args in sorted(expected - got):
            if f.is_constant:
                report.add(where, f"constant of sort {f.result} has no value")
            else:
                report.add(where, f"missing row for arguments ({', '.join(args)})")
        for args in sorted(got - expected):
            report.add(where, f"row ({', '.join(args)}) lies outside the argument carriers")
        for args, val in sorted(table.items()):
            if val not in carrier_sets.get(f.result, ()):
                if f.is_constant and not carrier_sets.get(f.result):
                    report.add(where, f"constant of sort {f.result} but carrier({f.result}) is empty")
                else:
                    report.add(where, f"result {val} is not an element of {f.result}")
    for f in m.tables:
        if not sig.has_func(f):
            report.add(f"op {f.name}", "table for undeclared symbol")
    for (l, s), pairs in sorted(m.rels.items()):
        if l not in sig.labels or s not in sig.sorts:
            report.add(f"label {l}", f"relation for undeclared label/sort ({l}, {s})")
            continue
        for a, b in sorted(pairs):
            if a not in carrier_sets[s] or b not in carrier_sets[s]:
                report.add(f"label {l}", f"pair ({a}, {b}) lies outside carrier({s})")
    return report


# ---------------------------------------------------------------------------
# evaluation

def eval_term(m: FiniteModel, v: Mapping[Variable, str], t) -> str:
    if isinstance(t, Var):
        try:
            return v[t.var]
        except KeyError:
            raise UnboundVariable(f"variable {t.var} has no value") from None
    return m.tables[t.func][tuple(eval_term(m, v, a) for a in t.args)]


def compose(r1: Iterable[Pair], r2: Iterable[Pair]) -> Relation:
    """Diagrammatic composition: (a, c) when a r1 b and b r2 c."""
    succ: Dict[str, list] = {}
    for b, c in r2:
        succ.setdefault(b, []).append(c)
    return frozenset((a, c) for a, b in r1 for c in succ.get(b, ()))


def star(r: Iterable[Pair], carrier: Iterable[str]) -> Relation:
    """Reflexive-transitive closure on ``carrier`` by repeated squaring."""
    closure = frozenset((x, x) for x in carrier) | frozenset(r)
    while True:
        nxt = closure | compose(closure, closure)
        if nxt == closure:
            return closure
        closure = nxt


class Evaluator:
    """Satisfaction checker for one model; caches action relations."""

    def __init__(self, m: FiniteModel):
        self.m = m
        self._actions: Dict[tuple, Relation] = {}

    def action(self, a, sort: str) -> Relation:
        key = (a, sort)
        hit = self._actions.get(key)
        if hit is not None:
            return hit
        if isinstance(a, Label):
            rel = self.m.relation(a.name, sort)
        elif isinstance(a, Seq):
            rel = compose(self.action(a.first, sort), self.action(a.second, sort))
        elif isinstance(a, Union):
            rel = self.action(a.left, sort) | self.action(a.right, sort)
        elif isinstance(a, Star):
            rel = star(self.action(a.body, sort), self.m.carrier(sort))
        else:
            raise TypeError(f"not an action: {a!r}")
        self._actions[key] = rel
        return rel

    def term(self, t, env: Mapping[Variable, str]) -> str:
        if isinstance(t, Var):
            try:
                return env[t.var]
            except KeyError:
                raise UnboundVariable(f"variable {t.var} has no value") from None
        if not t.args:
            return self.m.tables[t.func][()]
        return self.m.tables[t.func][tuple(self.term(a, env) for a in t.args)]

    def sat(self, phi, env: Mapping[Variable, str]) -> bool:
        if isinstance(phi, Eq):
            return self.term(phi.lhs, env) == self.term(phi.rhs, env)
        if isinstance(phi, Trans):
            pair = (self.term(phi.src, env), self.term(phi.dst, env))
            return pair in self.action(phi.action, phi.src.sort)
        if isinstance(phi, Not):
            return not self.sat(phi.body, env)
        if isinstance(phi, Or):
            return any(self.sat(p, env) for p in phi.disjuncts)
        if isinstance(phi, Exists):
            for env2 in valuations(self.m, phi.block, env):
                if self.sat(phi.body, env2):
                    return True
            return False
        raise TypeError(f"not a sentence: {phi!r}")


def valuations(m: FiniteModel, block, base: Optional[Mapping[Variable, str]] = None):
    """All valuations of ``block`` extending ``base``, lexicographic in carrier order."""
    block = tuple(block)
    pools = [m.carrier(v.sort) for v in block]
    for combo in itertools.product(*pools):
        env = dict(base) if base else {}
        env.update(zip(block, combo))
        yield env


def eval_action(m: FiniteModel, a, sort: str) -> Relation:
    return Evaluator(m).action(a, sort)


def satisfies(m: FiniteModel, phi, valuation: Optional[Mapping[Variable, str]] = None) -> bool:
    return Evaluator(m).sat(phi, valuation or {})


def satisfies_all(m: FiniteModel, phis: Iterable, valuation: Optional[Mapping[Variable, str]] = None) -> bool:
    ev = Evaluator(m)
    env = valuation or {}
    return all(ev.sat(p, env) for p in phis)


def first_failure(m: FiniteModel, phis: Iterable) -> Optional[int]:
    """Index of the first sentence not satisfied by ``m``, or None."""
    ev = Evaluator(m)
    for i, p in enumerate(phis):
        if not ev.sat(p, {}):
            return i
    return None
