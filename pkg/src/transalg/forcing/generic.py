"""Generic ideals and the term-quotient generic model."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ..errors import DirectednessFailure, GenericityFailure, ResourceLimit, ValidationReport
from ..finmod.model import compose, star
from ..kernel import App, Eq, Exists, Label, Not, Or, Seq, Signature, Trans, Union, Variable, normalize, subst_term
from .congruence import CongruenceClosure
from .core import Forcer, ForcingProperty, SearchBounds, distance, flat, sentence_over, show, universe


@dataclass(frozen=True)
class Decision:
    sentence: object
    condition: str
    positive: bool
    step: str = "pool"


@dataclass
class GenericIdeal:
    members: Tuple[str, ...]
    top: str
    log: List[Decision] = field(default_factory=list)

    def __contains__(self, p: str) -> bool:
        return p in self.members

    def decided(self) -> List[Decision]:
        return [d for d in self.log if d.step == "pool"]


def _closest(P: ForcingProperty, cur: str, candidates: Sequence[str]) -> str:
    order = {n: i for i, n in enumerate(P.names)}
    return min(candidates, key=lambda r: (distance(P, cur, r), order[r]))


def extend_to_generic(P: ForcingProperty, p: str, pool: Sequence, bounds: SearchBounds = SearchBounds(),
                      forcer: Optional[Forcer] = None, complete: bool = True) -> GenericIdeal:
    """Chain construction from ``p`` through the pool, then up to a maximal condition.

    For each pool sentence, in order: keep the current condition if it
    forces the sentence, else move to the closest extension forcing it,
    else record that the current condition forces the negation.  With
    ``complete`` the chain finally climbs to a maximal condition, whose
    downward closure decides every sentence.
    """
    fc = forcer or Forcer(P, bounds)
    cur = p
    log: List[Decision] = []
    steps = 0
    for phi in pool:
        phi = normalize(phi)
        if not sentence_over(P.sig(cur), phi):
            raise GenericityFailure(f"pool sentence {show(phi)} is not over the signature of {cur}")
        if fc.forces(cur, phi):
            log.append(Decision(phi, cur, True))
            continue
        above = [r for r in P.up(cur) if r != cur and fc.forces(r, phi)]
        if above:
            cur = _closest(P, cur, above)
            log.append(Decision(phi, cur, True))
        else:
            log.append(Decision(phi, cur, False))
    while complete and not P.maximal(cur):
        steps += 1
        if steps > len(P.names):
            raise ResourceLimit("chain did not reach a maximal condition")
        cur = _closest(P, cur, [r for r in P.up(cur) if r != cur])
        log.append(Decision(None, cur, True, "complete"))
    return GenericIdeal(tuple(P.down(cur)), cur, log)


def validate_generic(P: ForcingProperty, members: Sequence[str], pool: Sequence,
                     bounds: SearchBounds = SearchBounds(), forcer: Optional[Forcer] = None) -> ValidationReport:
    """Ideal conditions plus: every pool sentence over a member is decided above it in the set."""
    fc = forcer or Forcer(P, bounds)
    report = ValidationReport()
    g = [m for m in P.names if m in set(members)]
    for m in members:
        if m not in P:
            report.add("ideal", f"unknown condition {m}")
    if not g:
        report.add("ideal", "empty set of conditions")
        return report
    for p in g:
        for q in P.down(p):
            if q not in g:
                report.add("ideal", f"{q} <= {p} but {q} is missing (not downward closed)")
    for p, q in itertools.combinations(g, 2):
        if not any(P.leq(p, r) and P.leq(q, r) for r in g):
            report.add("ideal", f"{p} and {q} have no common upper bound in the set (not directed)")
    for p in g:
        for phi in pool:
            phi = normalize(phi)
            if not sentence_over(P.sig(p), phi):
                continue
            if not any(P.leq(p, q) and (fc.forces(q, phi) or fc.forces(q, Not(phi))) for q in g):
                report.add(f"condition {p}", f"{show(phi, P.sig(p))} is not decided")
    return report


def require_generic(P: ForcingProperty, members: Sequence[str], pool: Sequence,
                    bounds: SearchBounds = SearchBounds()) -> None:
    report = validate_generic(P, members, pool, bounds)
    for v in report:
        if "directed" in v.message:
            raise DirectednessFailure(v.message)
    if report:
        raise GenericityFailure(str(report))


def generic_forces(P: ForcingProperty, G: GenericIdeal, phi, forcer: Forcer) -> bool:
    phi = normalize(phi)
    return any(forcer.forces(p, phi) for p in G.members if sentence_over(P.sig(p), phi))


# ---------------------------------------------------------------------------
# term-quotient model

class TermQuotientModel:
    """Ground terms of the colimit signature modulo the forced equations.

    Quantifiers range over the classes of the bounded term universe; terms
    outside it are added to the closure on demand.
    """

    def __init__(self, sig: Signature, atoms, term_depth: int):
        self.sig = sig
        self.atoms = frozenset(atoms)
        self.term_depth = term_depth
        self.universe = universe(sig, self.atoms, term_depth)
        eqs = [(a.lhs, a.rhs) for a in self.atoms if isinstance(a, Eq)]
        self.cc = CongruenceClosure(sorted(eqs, key=str), flat(self.universe))
        self.elements: Dict[str, List[App]] = {}
        for s in sig.sorts:
            reps = []
            for t in self.universe.get(s, []):
                r = self.cc.find(t)
                if r not in reps:
                    reps.append(r)
            self.elements[s] = reps
        self.transitions: Dict[Tuple[str, str], frozenset] = {}
        for a in sorted((a for a in self.atoms if isinstance(a, Trans)), key=str):
            key = (a.action.name, a.src.sort)
            pair = (self.cc.find(a.src), self.cc.find(a.dst))
            self.transitions[key] = self.transitions.get(key, frozenset()) | {pair}
        self._actions: Dict[tuple, frozenset] = {}

    def classes(self, sort: str) -> List[List[App]]:
        return [[t for t in self.universe.get(sort, []) if self.cc.find(t) == r] for r in self.elements[sort]]

    def rep(self, t: App) -> App:
        self.cc.add_term(t)
        return self.cc.find(t)

    def equal(self, a: App, b: App) -> bool:
        return self.cc.query(a, b)

    def action(self, a, sort: str) -> frozenset:
        key = (a, sort)
        hit = self._actions.get(key)
        if hit is not None:
            return hit
        if isinstance(a, Label):
            rel = self.transitions.get((a.name, sort), frozenset())
        elif isinstance(a, Seq):
            rel = compose(self.action(a.first, sort), self.action(a.second, sort))
        elif isinstance(a, Union):
            rel = self.action(a.left, sort) | self.action(a.right, sort)
        else:
            rel = star(self.action(a.body, sort), self.elements[sort])
        self._actions[key] = rel
        return rel

    def _term(self, t, env: Mapping[Variable, App]) -> App:
        return self.rep(subst_term(t, {v: r for v, r in env.items()}))

    def satisfies(self, phi, env: Optional[Mapping[Variable, App]] = None) -> bool:
        env = env or {}
        if isinstance(phi, Eq):
            return self._term(phi.lhs, env) == self._term(phi.rhs, env)
        if isinstance(phi, Trans):
            return (self._term(phi.src, env), self._term(phi.dst, env)) in self.action(phi.action, phi.src.sort)
        if isinstance(phi, Not):
            return not self.satisfies(phi.body, env)
        if isinstance(phi, Or):
            return any(self.satisfies(p, env) for p in phi.disjuncts)
        if isinstance(phi, Exists):
            pools = [self.elements.get(v.sort, []) for v in phi.block]
            for combo in itertools.product(*pools):
                env2 = dict(env)
                env2.update(zip(phi.block, combo))
                if self.satisfies(phi.body, env2):
                    return True
            return False
        raise TypeError(f"not a sentence: {phi!r}")

    def size(self) -> Dict[str, int]:
        return {s: len(self.elements[s]) for s in self.sig.sorts}


def generic_model(P: ForcingProperty, G: GenericIdeal, bounds: SearchBounds = SearchBounds()) -> TermQuotientModel:
    sig = P.sig(G.members[0])
    atoms = set()
    for p in G.members:
        sig = sig.union(P.sig(p))
        atoms |= P.atoms(p)
    return TermQuotientModel(sig, atoms, bounds.term_depth)
