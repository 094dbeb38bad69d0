"""Forcing properties over finite posets and the forcing relation."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from ..errors import NotComparable, ResourceLimit, ValidationReport
from ..kernel import (App, Eq, Exists, Label, Not, Or, Seq, Signature, Star, Trans, Union, check_sentence,
                      ground_terms, is_atomic, normalize, power, substitute, symbols_of)
from .congruence import atomic_consequences


@dataclass(frozen=True)
class SearchBounds:
    """``term_depth`` bounds ground-term witnesses; ``star_cap`` bounds a* unfolding.

    ``star_cap=None`` uses the number of universe terms of the sort, which
    is exact because a forced path can be shortened to visit each term once.
    """

    term_depth: int = 1
    star_cap: Optional[int] = None
    budget: int = 1_000_000

    def __post_init__(self):
        if self.term_depth < 0 or (self.star_cap is not None and self.star_cap < 0) or self.budget <= 0:
            raise ValueError("search bounds must be non-negative")


@dataclass(frozen=True)
class Condition:
    name: str
    sig: Signature
    atoms: FrozenSet = frozenset()
    gamma: FrozenSet = frozenset()


@dataclass(frozen=True)
class ForcingProperty:
    """Finite poset of conditions, each with a signature and a set of atoms.

    ``order`` lists generating pairs ``(p, q)`` for ``p <= q``; the
    reflexive-transitive closure is taken.
    """

    conditions: Tuple[Condition, ...]
    order: FrozenSet[Tuple[str, str]] = frozenset()
    zero: Optional[str] = None

    def __post_init__(self):
        names = [c.name for c in self.conditions]
        index = {n: i for i, n in enumerate(names)}
        reach = {n: {n} for n in names}
        for p, q in self.order:
            if p in index and q in index:
                reach[p].add(q)
        for k in names:
            for n in names:
                if k in reach[n]:
                    reach[n] |= reach[k]
        leq = frozenset((p, q) for p in names for q in reach[p])
        object.__setattr__(self, "_leq", leq)
        object.__setattr__(self, "_up", {p: [q for q in names if q in reach[p]] for p in names})
        object.__setattr__(self, "_index", index)
        if self.zero is None and names:
            object.__setattr__(self, "zero", names[0])

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(c.name for c in self.conditions)

    def __getitem__(self, name: str) -> Condition:
        return self.conditions[self._index[name]]

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def leq(self, p: str, q: str) -> bool:
        return (p, q) in self._leq

    def up(self, p: str) -> List[str]:
        """Conditions ``q >= p`` in declaration order."""
        return self._up[p]

    def down(self, p: str) -> List[str]:
        return [q for q in self.names if (q, p) in self._leq]

    def maximal(self, p: str) -> bool:
        return self.up(p) == [p]

    def sig(self, p: str) -> Signature:
        return self[p].sig

    def atoms(self, p: str) -> FrozenSet:
        return self[p].atoms


def universe(sig: Signature, atoms: Iterable, depth: int) -> Dict[str, List[App]]:
    """Ground terms up to ``depth`` plus every subterm of the atoms, grouped by sort."""
    out = {s: list(ts) for s, ts in ground_terms(sig, depth).items()}
    seen = {t for ts in out.values() for t in ts}

    def add(t):
        for a in t.args:
            add(a)
        if t not in seen:
            seen.add(t)
            out.setdefault(t.sort, []).append(t)
    for a in atoms:
        if isinstance(a, Eq):
            add(a.lhs)
            add(a.rhs)
        else:
            add(a.src)
            add(a.dst)
    return out


def show(phi, sig: Optional[Signature] = None) -> str:
    from ..surface.printer import show_sentence
    return show_sentence(phi, sig)


def flat(u: Mapping[str, List[App]]) -> List[App]:
    return [t for ts in u.values() for t in ts]


def validate_forcing_property(P: ForcingProperty, bounds: SearchBounds = SearchBounds()) -> ValidationReport:
    report = ValidationReport()
    names = P.names
    if not names:
        report.add("conditions", "no conditions")
        return report
    if len(set(names)) != len(names):
        report.add("conditions", "duplicate condition names")
    for p, q in sorted(P.order):
        for n in (p, q):
            if n not in P:
                report.add(f"order {p} <= {q}", f"unknown condition {n}")
    for p in names:
        for q in names:
            if p != q and P.leq(p, q) and P.leq(q, p):
                report.add(f"order {p} <= {q}", "order is not antisymmetric")
    if P.zero not in P:
        report.add("zero", f"unknown least condition {P.zero}")
    else:
        for p in names:
            if not P.leq(P.zero, p):
                report.add(f"condition {p}", f"{P.zero} is not below {p} (no least element)")
    for p in names:
        c = P[p]
        for i, a in enumerate(sorted(c.atoms, key=str)):
            if not is_atomic(a):
                report.add(f"condition {p}", f"{show(a, c.sig)} is not atomic")
                continue
            report.extend(check_sentence(c.sig, a), f"condition {p} atom {i}")
        for q in P.up(p):
            if q == p:
                continue
            d = P[q]
            if not c.sig.is_subsignature(d.sig):
                report.add(f"order {p} <= {q}", "signature of the smaller condition is not included")
            if not c.atoms <= d.atoms:
                report.add(f"order {p} <= {q}", "atom sets are not monotone")
            if not c.gamma <= d.gamma:
                report.add(f"order {p} <= {q}", "sentence sets are not monotone")
    if report:
        return report
    # axiom 4 within the atomic universe of each condition
    for p in names:
        c = P[p]
        u = flat(universe(c.sig, c.atoms, bounds.term_depth))
        above = [P[q].atoms for q in P.up(p)]
        for a in atomic_consequences(c.atoms, u):
            if isinstance(a, Eq) and a.lhs == a.rhs:
                continue
            if not any(a in atoms for atoms in above):
                report.add(f"condition {p}", f"entailed atom {show(a, c.sig)} is in no condition above {p}")
    return report


def distance(P: ForcingProperty, p: str, q: str) -> int:
    """Symbols plus sentences added from ``p`` to ``q``."""
    if not P.leq(p, q):
        raise NotComparable(f"{p} is not below {q}")
    a, b = P[p], P[q]
    return b.sig.difference_size(a.sig) + len(b.gamma - a.gamma)


@dataclass
class Diagnostic:
    condition: str
    sentence: object
    reason: str


class Forcer:
    """Memoized forcing relation of one property under fixed bounds.

    Reflexive equations ``t = t`` count as members of every atom set.
    With ``open_witnesses`` every failed witness search is flagged, for
    properties whose conditions could name more elements than the poset
    provides (semantic forcing over a finite pool of fresh constants).
    """

    def __init__(self, P: ForcingProperty, bounds: SearchBounds = SearchBounds(), open_witnesses: bool = False):
        self.P = P
        self.bounds = bounds
        self.open_witnesses = open_witnesses
        self._memo: Dict[Tuple[str, object], bool] = {}
        self._universes: Dict[str, Dict[str, List[App]]] = {}
        self.diagnostics: List[Diagnostic] = []
        self._diag_seen = set()
        self._tainted = set()
        self._stack: List[list] = []
        self.nodes = 0

    def universe(self, p: str) -> Dict[str, List[App]]:
        u = self._universes.get(p)
        if u is None:
            c = self.P[p]
            u = universe(c.sig, c.atoms, self.bounds.term_depth)
            self._universes[p] = u
        return u

    def _truncated(self, p: str) -> bool:
        return self.open_witnesses or any(f.arity for f in self.P.sig(p).funcs)

    def _taint(self) -> None:
        for frame in self._stack:
            frame[0] = True

    def _note(self, p, phi, reason):
        self._taint()
        key = (p, phi, reason)
        if key not in self._diag_seen:
            self._diag_seen.add(key)
            self.diagnostics.append(Diagnostic(p, phi, reason))

    def diagnosed(self, p: str, phi) -> bool:
        """Whether evaluating ``p |- phi`` ran into a bound anywhere below it."""
        return (p, normalize(phi)) in self._tainted

    def forces(self, p: str, phi) -> bool:
        key = (p, phi)
        hit = self._memo.get(key)
        if hit is None:
            self.nodes += 1
            if self.nodes > self.bounds.budget:
                raise ResourceLimit(f"forcing evaluation exceeded its budget of {self.bounds.budget}")
            self._stack.append([False])
            try:
                hit = self._forces(p, phi)
            finally:
                frame = self._stack.pop()
            if frame[0]:
                self._tainted.add(key)
                self._taint()
            self._memo[key] = hit
        elif key in self._tainted:
            self._taint()
        return hit

    def _forces(self, p: str, phi) -> bool:
        if isinstance(phi, Eq):
            return phi.lhs == phi.rhs or phi in self.P.atoms(p)
        if isinstance(phi, Trans):
            return self._trans(p, phi.action, phi.src, phi.dst, phi)
        if isinstance(phi, Not):
            return not any(self.forces(q, phi.body) for q in self.P.up(p))
        if isinstance(phi, Or):
            return any(self.forces(p, d) for d in phi.disjuncts)
        if isinstance(phi, Exists):
            u = self.universe(p)
            pools = [u.get(v.sort, []) for v in phi.block]
            for combo in itertools.product(*pools):
                if self.forces(p, normalize(substitute(phi.body, dict(zip(phi.block, combo))))):
                    return True
            if self._truncated(p):
                self._note(p, phi, self._witness_reason("witness"))
            return False
        raise TypeError(f"not a sentence: {phi!r}")

    def _trans(self, p, a, t1, t2, phi) -> bool:
        if isinstance(a, Label):
            return Trans(a, t1, t2) in self.P.atoms(p)
        if isinstance(a, Union):
            return self.forces(p, Trans(a.left, t1, t2)) or self.forces(p, Trans(a.right, t1, t2))
        if isinstance(a, Seq):
            for t in self.universe(p).get(t1.sort, []):
                if self.forces(p, Trans(a.first, t1, t)) and self.forces(p, Trans(a.second, t, t2)):
                    return True
            if self._truncated(p):
                self._note(p, phi, self._witness_reason("intermediate term"))
            return False
        if isinstance(a, Star):
            cap = self.bounds.star_cap
            exact = len(self.universe(p).get(t1.sort, []))
            if cap is None:
                cap = exact
            if self.forces(p, Eq(t1, t2)):
                return True
            for n in range(1, cap + 1):
                if self.forces(p, Trans(power(a.body, n), t1, t2)):
                    return True
            if cap < exact or self._truncated(p):
                self._note(p, phi, f"no unfolding up to n = {cap}")
            return False
        raise TypeError(f"not an action: {a!r}")

    def _witness_reason(self, what: str) -> str:
        if self.open_witnesses:
            return f"no {what} among the constants of the condition or its extensions"
        return f"no {what} among ground terms of depth <= {self.bounds.term_depth}"

    def weakly_forces(self, p: str, phi) -> bool:
        return all(any(self.forces(r, phi) for r in self.P.up(q)) for q in self.P.up(p))


def forces(P: ForcingProperty, p: str, phi, bounds: SearchBounds = SearchBounds()) -> bool:
    return Forcer(P, bounds).forces(p, normalize(phi))


def weakly_forces(P: ForcingProperty, p: str, phi, bounds: SearchBounds = SearchBounds()) -> bool:
    return Forcer(P, bounds).weakly_forces(p, normalize(phi))


def sentence_over(sig: Signature, phi) -> bool:
    funcs, labels = symbols_of(phi)
    return all(sig.has_func(f) for f in funcs) and all(l in sig.labels for l in labels)
