"""Bounded exhaustive model search.

Models are built cell by cell (function-table rows in declaration order,
then label pairs) by depth-first search.  After each assignment every
constraint is evaluated in three-valued logic over the partial model; a
definite ``False`` prunes the branch.  Unknown table cells make terms
unknown, and actions are bracketed between the relation generated by pairs
known to be present and the one generated by pairs not known to be absent.
Both brackets are monotone in the label relations, so pruning is sound and
the enumeration stays exhaustive.
"""
from __future__ import annotations

import itertools
import math
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union as U

from ..errors import ResourceLimit
from ..kernel import Eq, Exists, Func, Label, Not, Or, Seq, Signature, Trans, Union, Var
from .model import FiniteModel, compose, star

Bounds = U[int, Mapping[str, int]]

DEFAULT_BUDGET = 2_000_000


def element_name(sort: str, i: int) -> str:
    return f"{sort}_{i}"


def resolve_bounds(sig: Signature, bounds: Bounds, default: int = 1) -> Dict[str, int]:
    if isinstance(bounds, int):
        return {s: bounds for s in sig.sorts}
    out = {s: int(bounds.get(s, default)) for s in sig.sorts}
    for s, k in out.items():
        if k < 0:
            raise ValueError(f"negative size bound for sort {s}")
    return out


def size_combinations(sig: Signature, bounds: Mapping[str, int],
                      min_sizes: Optional[Mapping[str, int]] = None) -> Iterator[Dict[str, int]]:
    """Carrier-size vectors in product order over the declared sorts."""
    lows = {}
    for s in sig.sorts:
        lo = (min_sizes or {}).get(s, 0)
        if sig.constants(s):
            lo = max(lo, 1)
        lows[s] = lo
    ranges = [range(lows[s], bounds[s] + 1) for s in sig.sorts]
    for combo in itertools.product(*ranges):
        yield dict(zip(sig.sorts, combo))


class _Partial:
    """Three-valued evaluation over a partially filled model."""

    def __init__(self, carriers, tables, known):
        self.carriers = carriers
        self.tables = tables
        self.known = known
        self._cache: Dict[tuple, Tuple[FrozenSet, FrozenSet]] = {}

    def term(self, t, env):
        if isinstance(t, Var):
            return env[t.var]
        if t.args:
            args = []
            for a in t.args:
                v = self.term(a, env)
                if v is None:
                    return None
                args.append(v)
            return self.tables[t.func].get(tuple(args))
        return self.tables[t.func].get(())

    def action(self, a, sort):
        key = (a, sort)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if isinstance(a, Label):
            cells = self.known.get((a.name, sort), {})
            lower = frozenset(p for p, v in cells.items() if v)
            carrier = self.carriers[sort]
            upper = frozenset(p for p in itertools.product(carrier, carrier) if cells.get(p, True))
            out = (lower, upper)
        elif isinstance(a, Seq):
            l1, u1 = self.action(a.first, sort)
            l2, u2 = self.action(a.second, sort)
            out = (compose(l1, l2), compose(u1, u2))
        elif isinstance(a, Union):
            l1, u1 = self.action(a.left, sort)
            l2, u2 = self.action(a.right, sort)
            out = (l1 | l2, u1 | u2)
        else:
            l1, u1 = self.action(a.body, sort)
            carrier = self.carriers[sort]
            out = (star(l1, carrier), star(u1, carrier))
        self._cache[key] = out
        return out

    def sat(self, phi, env):
        if isinstance(phi, Eq):
            a = self.term(phi.lhs, env)
            if a is None:
                return None
            b = self.term(phi.rhs, env)
            if b is None:
                return None
            return a == b
        if isinstance(phi, Trans):
            a = self.term(phi.src, env)
            if a is None:
                return None
            b = self.term(phi.dst, env)
            if b is None:
                return None
            lower, upper = self.action(phi.action, phi.src.sort)
            if (a, b) in lower:
                return True
            if (a, b) not in upper:
                return False
            return None
        if isinstance(phi, Not):
            r = self.sat(phi.body, env)
            return None if r is None else not r
        if isinstance(phi, Or):
            unknown = False
            for p in phi.disjuncts:
                r = self.sat(p, env)
                if r:
                    return True
                if r is None:
                    unknown = True
            return None if unknown else False
        if isinstance(phi, Exists):
            block = phi.block
            pools = [self.carriers[v.sort] for v in block]
            unknown = False
            for combo in itertools.product(*pools):
                env2 = dict(env)
                env2.update(zip(block, combo))
                r = self.sat(phi.body, env2)
                if r:
                    return True
                if r is None:
                    unknown = True
            return None if unknown else False
        raise TypeError(f"not a sentence: {phi!r}")


class ModelSearch:
    """Depth-first enumeration of the models of ``constraints`` within ``bounds``.

    ``stage_filters`` is a list of ``(funcs, predicate)``: once every table
    cell of the listed symbols is assigned, ``predicate(carriers, tables)``
    must hold or the branch is cut.  ``leaf_filter`` sees finished models.
    """

    def __init__(self, sig: Signature, bounds: Bounds, constraints: Sequence = (), *,
                 budget: int = DEFAULT_BUDGET, min_sizes: Optional[Mapping[str, int]] = None,
                 stage_filters: Sequence[Tuple[Iterable[Func], Callable]] = (),
                 leaf_filter: Optional[Callable[[FiniteModel], bool]] = None,
                 func_order: Optional[Sequence[Func]] = None, default_bound: int = 1):
        self.sig = sig
        self.bounds = resolve_bounds(sig, bounds, default_bound)
        self.constraints = tuple(constraints)
        self.budget = budget
        self.min_sizes = min_sizes
        self.stage_filters = [(frozenset(fs), pred) for fs, pred in stage_filters]
        self.leaf_filter = leaf_filter
        self.func_order = tuple(func_order) if func_order is not None else sig.funcs
        self.nodes = 0

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise ResourceLimit(f"model search exceeded its node budget of {self.budget}")

    def models(self) -> Iterator[FiniteModel]:
        for sizes in size_combinations(self.sig, self.bounds, self.min_sizes):
            yield from self._models_of_size(sizes)

    def _models_of_size(self, sizes: Mapping[str, int]) -> Iterator[FiniteModel]:
        sig = self.sig
        carriers = {s: tuple(element_name(s, i) for i in range(sizes[s])) for s in sig.sorts}
        cells: List[tuple] = []
        for f in self.func_order:
            for args in itertools.product(*(carriers[s] for s in f.arity)):
                cells.append(("f", f, args, carriers[f.result]))
        # a function with an empty result carrier but inhabited arguments has no model
        for kind, f, args, dom in cells:
            if not dom:
                return
        func_cells = len(cells)
        for l in sig.labels:
            for s in sig.sorts:
                for p in itertools.product(carriers[s], carriers[s]):
                    cells.append(("r", (l, s), p, (False, True)))
        # stage index: position after which a filter's symbols are fully assigned
        stages: Dict[int, List[Callable]] = {}
        for fs, pred in self.stage_filters:
            idx = 0
            for i, c in enumerate(cells[:func_cells]):
                if c[1] in fs:
                    idx = i + 1
            stages.setdefault(idx, []).append(pred)

        tables: Dict[Func, Dict[tuple, str]] = {f: {} for f in sig.funcs}
        known: Dict[Tuple[str, str], Dict[tuple, bool]] = {(l, s): {} for l in sig.labels for s in sig.sorts}

        def consistent() -> bool:
            ev = _Partial(carriers, tables, known)
            for phi in self.constraints:
                if ev.sat(phi, {}) is False:
                    return False
            return True

        def stage_ok(i: int) -> bool:
            for pred in stages.get(i, ()):
                if not pred(carriers, tables):
                    return False
            return True

        n = len(cells)

        def dfs(i: int):
            if not stage_ok(i):
                return
            if i == n:
                m = FiniteModel(sig, dict(carriers), {f: dict(t) for f, t in tables.items()},
                                {k: frozenset(p for p, v in d.items() if v) for k, d in known.items()
                                 if any(d.values())})
                if self.leaf_filter is None or self.leaf_filter(m):
                    yield m
                return
            kind, key, args, dom = cells[i]
            for val in dom:
                self._tick()
                if kind == "f":
                    tables[key][args] = val
                else:
                    known[key][args] = val
                if consistent():
                    yield from dfs(i + 1)
                if kind == "f":
                    del tables[key][args]
                else:
                    del known[key][args]

        if not consistent():
            return
        yield from dfs(0)


def canonical_key(m: FiniteModel, max_perms: int = 200_000) -> tuple:
    """Isomorphism-invariant key: the least relabelled serialization."""
    sig = m.sig
    sorts = [s for s in sig.sorts if m.carrier(s)]
    total = math.prod(math.factorial(len(m.carrier(s))) for s in sorts)
    if total > max_perms:
        raise ResourceLimit(f"isomorphism pruning needs {total} relabellings")
    best = None
    for perms in itertools.product(*(itertools.permutations(range(len(m.carrier(s)))) for s in sorts)):
        ren: Dict[Tuple[str, str], int] = {}
        for s, perm in zip(sorts, perms):
            for e, j in zip(m.carrier(s), perm):
                ren[(s, e)] = j
        parts = []
        for f in sig.funcs:
            rows = sorted((tuple(ren[(a_s, a)] for a_s, a in zip(f.arity, args)), ren[(f.result, v)])
                          for args, v in m.tables.get(f, {}).items())
            parts.append(tuple(rows))
        for l in sig.labels:
            for s in sig.sorts:
                parts.append(tuple(sorted((ren[(s, a)], ren[(s, b)]) for a, b in m.relation(l, s))))
        key = tuple(parts)
        if best is None or key < best:
            best = key
    return (tuple(len(m.carrier(s)) for s in sig.sorts), best)


def enumerate_models(sig: Signature, size_bound: Bounds, constraints: Sequence = (), *,
                     iso: bool = False, budget: int = DEFAULT_BUDGET, **kwargs) -> Iterator[FiniteModel]:
    """Every model with carriers within ``size_bound`` satisfying ``constraints``.

    Deterministic order: carrier-size vectors in product order, then table
    rows row-major with values in carrier order, then label pairs.  With
    ``iso=True`` only the first model of each isomorphism class is yielded.
    Raises ResourceLimit past ``budget`` search nodes.
    """
    search = ModelSearch(sig, size_bound, constraints, budget=budget, **kwargs)
    if not iso:
        yield from search.models()
        return
    seen = set()
    for m in search.models():
        k = canonical_key(m)
        if k in seen:
            continue
        seen.add(k)
        yield m


def find_model(sig: Signature, size_bound: Bounds, constraints: Sequence = (), **kwargs) -> Optional[FiniteModel]:
    return next(iter(enumerate_models(sig, size_bound, constraints, **kwargs)), None)
