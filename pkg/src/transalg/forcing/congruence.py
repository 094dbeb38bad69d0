"""Congruence closure of ground equations over a finite term universe."""
from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..errors import ResourceLimit
from ..kernel import App, Eq, Label, Trans


class CongruenceClosure:
    """Least congruence containing ``equations`` on the terms seen so far.

    Terms outside the current universe are added (with their subterms) on
    demand by :meth:`add_term` and :meth:`query`.  Class representatives are
    the earliest inserted members, so results are deterministic.
    """

    def __init__(self, equations: Iterable[Tuple[App, App]] = (), universe: Iterable[App] = (),
                 max_terms: int = 100_000):
        self._parent: Dict[App, App] = {}
        self._order: Dict[App, int] = {}
        self.max_terms = max_terms
        self.equations: List[Tuple[App, App]] = []
        for t in universe:
            self._add(t)
        for a, b in equations:
            self._add(a)
            self._add(b)
            self.equations.append((a, b))
            self._union(a, b)
        self._close()

    def _add(self, t: App) -> None:
        if t in self._parent:
            return
        for a in t.args:
            self._add(a)
        if len(self._parent) >= self.max_terms:
            raise ResourceLimit(f"congruence closure exceeded {self.max_terms} terms")
        self._parent[t] = t
        self._order[t] = len(self._order)

    def find(self, t: App) -> App:
        root = t
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[t] != root:
            self._parent[t], t = root, self._parent[t]
        return root

    def _union(self, a: App, b: App) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self._order[rb] < self._order[ra]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        return True

    def _close(self) -> None:
        changed = True
        while changed:
            changed = False
            table: Dict[tuple, App] = {}
            for t in self._order:
                if not t.args:
                    continue
                key = (t.func, tuple(self.find(a) for a in t.args))
                other = table.get(key)
                if other is None:
                    table[key] = t
                elif self._union(other, t):
                    changed = True

    def add_term(self, t: App) -> None:
        if t not in self._parent:
            self._add(t)
            self._close()

    def query(self, a: App, b: App) -> bool:
        self.add_term(a)
        self.add_term(b)
        return self.find(a) == self.find(b)

    def terms(self) -> List[App]:
        return list(self._order)

    def classes(self, sort: Optional[str] = None) -> List[List[App]]:
        groups: Dict[App, List[App]] = {}
        for t in self._order:
            if sort is not None and t.sort != sort:
                continue
            groups.setdefault(self.find(t), []).append(t)
        return sorted(groups.values(), key=lambda g: self._order[g[0]])


def congruence_closure(equations: Iterable[Tuple[App, App]], universe: Iterable[App] = ()) -> CongruenceClosure:
    return CongruenceClosure(equations, universe)


def atomic_consequences(atoms: Iterable, universe: Sequence[App]) -> List:
    """Ground atoms over ``universe`` entailed by the atomic set ``atoms``.

    Entailment between atomic sets is decided exactly by congruence closure:
    the quotient term model is a countermodel for everything else.
    """
    atoms = list(atoms)
    eqs = [(a.lhs, a.rhs) for a in atoms if isinstance(a, Eq)]
    trans = [a for a in atoms if isinstance(a, Trans)]
    extra = [t for a in trans for t in (a.src, a.dst)]
    cc = CongruenceClosure(eqs, list(universe) + extra)
    terms = cc.terms()
    out = []
    for t1 in terms:
        for t2 in terms:
            if t1.sort == t2.sort and cc.find(t1) == cc.find(t2):
                out.append(Eq(t1, t2))
    seen = set()
    for a in trans:
        key = (a.action.name, cc.find(a.src), cc.find(a.dst))
        if key in seen:
            continue
        seen.add(key)
        for t1 in terms:
            if t1.sort != a.src.sort or cc.find(t1) != key[1]:
                continue
            for t2 in terms:
                if t2.sort == a.dst.sort and cc.find(t2) == key[2]:
                    out.append(Trans(Label(key[0]), t1, t2))
    return list(dict.fromkeys(out))

