"""Abstract syntax of transition algebra: signatures, terms, actions, sentences.

The core sentence AST has exactly five constructors (``Eq``, ``Trans``,
``Not``, ``Or``, ``Exists``); conjunction, implication, universal
quantification, truth and falsity are helper functions that build core
nodes.

Variables carry a ``qualifier``: the number of quantifier blocks enclosing
their binder.  Two variables with the same name and sort bound at different
depths are therefore distinct, which keeps sentence translation along
sort-collapsing morphisms capture free.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .errors import ResourceLimit, SortError, UnboundVariable, ValidationReport


# ---------------------------------------------------------------------------
# signatures

@dataclass(frozen=True, order=True)
class Func:
    name: str
    arity: Tuple[str, ...]
    result: str

    @property
    def is_constant(self) -> bool:
        return not self.arity

    @property
    def rank(self) -> Tuple[Tuple[str, ...], str]:
        return (self.arity, self.result)

    def __str__(self) -> str:
        if not self.arity:
            return f"{self.name} : -> {self.result}"
        return f"{self.name} : {' '.join(self.arity)} -> {self.result}"


def const(name: str, sort: str) -> Func:
    return Func(name, (), sort)


@dataclass(frozen=True)
class Signature:
    sorts: Tuple[str, ...] = ()
    funcs: Tuple[Func, ...] = ()
    labels: Tuple[str, ...] = ()
    ctors: FrozenSet[Func] = frozenset()
    finite_sorts: FrozenSet[str] = frozenset()

    @cached_property
    def _by_name(self) -> Dict[str, Tuple[Func, ...]]:
        out: Dict[str, List[Func]] = {}
        for f in self.funcs:
            out.setdefault(f.name, []).append(f)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def _func_set(self) -> FrozenSet[Func]:
        return frozenset(self.funcs)

    def symbols(self, name: str) -> Tuple[Func, ...]:
        return self._by_name.get(name, ())

    def has_func(self, f: Func) -> bool:
        return f in self._func_set

    def has_sort(self, s: str) -> bool:
        return s in self.sorts

    def constants(self, sort: Optional[str] = None) -> Tuple[Func, ...]:
        return tuple(f for f in self.funcs if f.is_constant and (sort is None or f.result == sort))

    @property
    def constrained_sorts(self) -> Tuple[str, ...]:
        res = {f.result for f in self.ctors}
        return tuple(s for s in self.sorts if s in res)

    @property
    def loose_sorts(self) -> Tuple[str, ...]:
        res = {f.result for f in self.ctors}
        return tuple(s for s in self.sorts if s not in res)

    def ordered_ctors(self) -> Tuple[Func, ...]:
        return tuple(f for f in self.funcs if f in self.ctors)

    def extend(self, sorts: Iterable[str] = (), funcs: Iterable[Func] = (), labels: Iterable[str] = (),
               ctors: Iterable[Func] = (), finite_sorts: Iterable[str] = ()) -> "Signature":
        new_sorts = list(self.sorts)
        for s in sorts:
            if s not in new_sorts:
                new_sorts.append(s)
        new_funcs = list(self.funcs)
        seen = set(new_funcs)
        for f in funcs:
            if f not in seen:
                new_funcs.append(f)
                seen.add(f)
        new_labels = list(self.labels)
        for l in labels:
            if l not in new_labels:
                new_labels.append(l)
        return Signature(tuple(new_sorts), tuple(new_funcs), tuple(new_labels),
                         self.ctors | frozenset(ctors), self.finite_sorts | frozenset(finite_sorts))

    def with_constants(self, consts: Iterable[Func]) -> "Signature":
        return self.extend(funcs=consts)

    def union(self, other: "Signature") -> "Signature":
        return self.extend(other.sorts, other.funcs, other.labels, other.ctors, other.finite_sorts)

    def is_subsignature(self, other: "Signature") -> bool:
        return (set(self.sorts) <= set(other.sorts) and self._func_set <= other._func_set
                and set(self.labels) <= set(other.labels))

    def ctor_signature(self) -> "Signature":
        """The constructor sub-signature: all sorts, constructor symbols only, no labels."""
        return Signature(self.sorts, self.ordered_ctors(), (), self.ctors, self.finite_sorts)

    def difference_size(self, smaller: "Signature") -> int:
        """Number of sorts, symbols and labels present here but not in ``smaller``."""
        return (len(set(self.sorts) - set(smaller.sorts)) + len(self._func_set - smaller._func_set)
                + len(set(self.labels) - set(smaller.labels)))


def check_signature(sig: Signature) -> ValidationReport:
    report = ValidationReport()
    seen_sorts = set()
    for s in sig.sorts:
        if s in seen_sorts:
            report.add(f"sort {s}", "duplicate sort declaration")
        seen_sorts.add(s)
    seen_funcs = set()
    for f in sig.funcs:
        if f in seen_funcs:
            report.add(f"op {f.name}", f"duplicate rank {f}")
        seen_funcs.add(f)
        for s in f.arity + (f.result,):
            if s not in seen_sorts:
                report.add(f"op {f.name}", f"undeclared sort {s!r} in rank {f}")
    if len(set(sig.labels)) != len(sig.labels):
        report.add("labels", "duplicate label declaration")
    for f in sorted(sig.ctors - seen_funcs):
        report.add(f"ctor {f.name}", f"constructor {f} is not a declared operation")
    for s in sorted(sig.finite_sorts - seen_sorts):
        report.add(f"finite {s}", "finite sort is not declared")
    return report


# ---------------------------------------------------------------------------
# terms

@dataclass(frozen=True, order=True)
class Variable:
    name: str
    sort: str
    qualifier: int = 0

    def __str__(self) -> str:
        return f"{self.name}:{self.sort}"


@dataclass(frozen=True)
class Var:
    var: Variable

    @property
    def sort(self) -> str:
        return self.var.sort

    def __str__(self) -> str:
        return self.var.name


@dataclass(frozen=True)
class App:
    func: Func
    args: Tuple["Term", ...] = ()

    @property
    def sort(self) -> str:
        return self.func.result

    def __str__(self) -> str:
        if not self.args:
            return self.func.name
        return f"{self.func.name}({', '.join(str(a) for a in self.args)})"


Term = "Var | App"


def var(name: str, sort: str, qualifier: int = 0) -> Var:
    return Var(Variable(name, sort, qualifier))


def app(f: Func, *args) -> App:
    return App(f, tuple(args))


def sort_of_term(sig: Signature, ctx: Iterable[Variable], t) -> str:
    """Sort of ``t`` over ``sig`` with free variables from ``ctx``.

    Raises SortError on ill-sorted applications or unknown symbols, and
    UnboundVariable for variables outside ``ctx``.
    """
    ctx = ctx if isinstance(ctx, (set, frozenset)) else frozenset(ctx)
    return _sort_of(sig, ctx, t)


def _sort_of(sig: Signature, ctx, t) -> str:
    if isinstance(t, Var):
        if t.var not in ctx:
            raise UnboundVariable(f"variable {t.var} is not in scope")
        return t.var.sort
    f = t.func
    if not sig.has_func(f):
        raise SortError(f"symbol {f} is not declared in the signature")
    if len(t.args) != len(f.arity):
        raise SortError(f"{f.name} expects {len(f.arity)} arguments, got {len(t.args)}")
    for i, (a, s) in enumerate(zip(t.args, f.arity)):
        got = _sort_of(sig, ctx, a)
        if got != s:
            raise SortError(f"argument {i + 1} of {f.name} has sort {got}, expected {s}")
    return f.result


def is_ground(t) -> bool:
    if isinstance(t, Var):
        return False
    return all(is_ground(a) for a in t.args)


def term_depth(t) -> int:
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(term_depth(a) for a in t.args)


def term_vars(t) -> Tuple[Variable, ...]:
    """Variables of ``t`` in order of first occurrence."""
    out: List[Variable] = []

    def walk(u):
        if isinstance(u, Var):
            if u.var not in out:
                out.append(u.var)
        else:
            for a in u.args:
                walk(a)
    walk(t)
    return tuple(out)


def subst_term(t, mapping: Mapping):
    """Replace variables (keys of type Variable) or constants (keys of type Func)."""
    if isinstance(t, Var):
        return mapping.get(t.var, t)
    if not t.args:
        return mapping.get(t.func, t)
    return App(t.func, tuple(subst_term(a, mapping) for a in t.args))


def ground_terms(sig: Signature, depth: int, limit: Optional[int] = None) -> Dict[str, List[App]]:
    """All ground terms of depth at most ``depth``, grouped by sort.

    Order is deterministic: by depth, then declaration order of the head
    symbol, then argument tuples in product order.
    """
    by_sort: Dict[str, List[App]] = {s: [] for s in sig.sorts}
    count = 0
    for f in sig.funcs:
        if f.is_constant:
            by_sort.setdefault(f.result, []).append(App(f, ()))
            count += 1
    for d in range(1, depth + 1):
        fresh: Dict[str, List[App]] = {s: [] for s in sig.sorts}
        for f in sig.funcs:
            if f.is_constant:
                continue
            pools = [by_sort.get(s, []) for s in f.arity]
            for args in itertools.product(*pools):
                if max(term_depth(a) for a in args) != d - 1:
                    continue
                fresh.setdefault(f.result, []).append(App(f, tuple(args)))
                count += 1
                if limit is not None and count > limit:
                    raise ResourceLimit(f"more than {limit} ground terms at depth {d}")
        if not any(fresh.values()):
            break
        for s, ts in fresh.items():
            by_sort.setdefault(s, []).extend(ts)
    return by_sort


# ---------------------------------------------------------------------------
# actions

@dataclass(frozen=True)
class Label:
    name: str


@dataclass(frozen=True)
class Seq:
    first: "Action"
    second: "Action"


@dataclass(frozen=True)
class Union:
    left: "Action"
    right: "Action"


@dataclass(frozen=True)
class Star:
    body: "Action"


Action = "Label | Seq | Union | Star"


def power(a, n: int):
    """``a^n`` for n >= 1 as a left-nested composition."""
    if n < 1:
        raise ValueError("power of an action needs n >= 1; use an equation for n = 0")
    out = a
    for _ in range(n - 1):
        out = Seq(out, a)
    return out


def action_labels(a) -> Tuple[str, ...]:
    out: List[str] = []

    def walk(b):
        if isinstance(b, Label):
            if b.name not in out:
                out.append(b.name)
        elif isinstance(b, Seq):
            walk(b.first)
            walk(b.second)
        elif isinstance(b, Union):
            walk(b.left)
            walk(b.right)
        else:
            walk(b.body)
    walk(a)
    return tuple(out)


def map_action(a, label_fn: Callable[[str], str]):
    if isinstance(a, Label):
        return Label(label_fn(a.name))
    if isinstance(a, Seq):
        return Seq(map_action(a.first, label_fn), map_action(a.second, label_fn))
    if isinstance(a, Union):
        return Union(map_action(a.left, label_fn), map_action(a.right, label_fn))
    return Star(map_action(a.body, label_fn))


# ---------------------------------------------------------------------------
# sentences

@dataclass(frozen=True)
class Eq:
    lhs: "Term"
    rhs: "Term"


@dataclass(frozen=True)
class Trans:
    action: "Action"
    src: "Term"
    dst: "Term"


@dataclass(frozen=True)
class Not:
    body: "Sentence"


@dataclass(frozen=True)
class Or:
    disjuncts: Tuple["Sentence", ...] = ()


@dataclass(frozen=True)
class Exists:
    block: Tuple[Variable, ...]
    body: "Sentence"


Sentence = "Eq | Trans | Not | Or | Exists"

FALSE = Or(())
TRUE = Not(FALSE)


def And(*phis) -> Not:
    if len(phis) == 1 and isinstance(phis[0], (list, tuple)):
        phis = tuple(phis[0])
    return Not(Or(tuple(Not(p) for p in phis)))


def Implies(a, b) -> Or:
    return Or((Not(a), b))


def Forall(block: Sequence[Variable], body) -> Not:
    return Not(Exists(tuple(block), Not(body)))


def Neq(a, b) -> Not:
    return Not(Eq(a, b))


def Disj(*phis) -> Or:
    if len(phis) == 1 and isinstance(phis[0], (list, tuple)):
        phis = tuple(phis[0])
    return Or(tuple(phis))


def is_atomic(phi) -> bool:
    """Ground equation or ground transition along a single label."""
    if isinstance(phi, Eq):
        return is_ground(phi.lhs) and is_ground(phi.rhs)
    if isinstance(phi, Trans):
        return isinstance(phi.action, Label) and is_ground(phi.src) and is_ground(phi.dst)
    return False


def transform(phi, term_fn: Callable, action_fn: Callable = lambda a: a,
              block_fn: Optional[Callable] = None):
    """Homomorphic rewrite of a sentence.

    ``block_fn(block)`` returns the new block and a term-function to use
    inside its scope; by default blocks are kept and ``term_fn`` is reused.
    """
    if isinstance(phi, Eq):
        return Eq(term_fn(phi.lhs), term_fn(phi.rhs))
    if isinstance(phi, Trans):
        return Trans(action_fn(phi.action), term_fn(phi.src), term_fn(phi.dst))
    if isinstance(phi, Not):
        return Not(transform(phi.body, term_fn, action_fn, block_fn))
    if isinstance(phi, Or):
        return Or(tuple(transform(p, term_fn, action_fn, block_fn) for p in phi.disjuncts))
    if isinstance(phi, Exists):
        if block_fn is None:
            return Exists(phi.block, transform(phi.body, term_fn, action_fn, block_fn))
        new_block, inner_fn = block_fn(phi.block, term_fn)
        return Exists(tuple(new_block), transform(phi.body, inner_fn, action_fn, block_fn))
    raise TypeError(f"not a sentence: {phi!r}")


def substitute(phi, mapping: Mapping):
    """Replace free variables / constants by terms, respecting binders.

    Keys may be ``Variable`` (free variables) or ``Func`` (constants).
    Bound variables shadow keys equal to them.  Callers are responsible for
    replacement terms not containing variables bound inside ``phi``.
    """
    def go(p, m):
        if isinstance(p, Eq):
            return Eq(subst_term(p.lhs, m), subst_term(p.rhs, m))
        if isinstance(p, Trans):
            return Trans(p.action, subst_term(p.src, m), subst_term(p.dst, m))
        if isinstance(p, Not):
            return Not(go(p.body, m))
        if isinstance(p, Or):
            return Or(tuple(go(q, m) for q in p.disjuncts))
        inner = {k: v for k, v in m.items() if k not in p.block} if any(k in p.block for k in m) else m
        return Exists(p.block, go(p.body, inner))
    return go(phi, dict(mapping))


def free_variables(phi) -> Tuple[Variable, ...]:
    out: List[Variable] = []

    def walk(p, bound: FrozenSet[Variable]):
        if isinstance(p, Eq):
            ts = (p.lhs, p.rhs)
        elif isinstance(p, Trans):
            ts = (p.src, p.dst)
        elif isinstance(p, Not):
            walk(p.body, bound)
            return
        elif isinstance(p, Or):
            for q in p.disjuncts:
                walk(q, bound)
            return
        else:
            walk(p.body, bound | frozenset(p.block))
            return
        for t in ts:
            for v in term_vars(t):
                if v not in bound and v not in out:
                    out.append(v)
    walk(phi, frozenset())
    return tuple(out)


def symbols_of(phi) -> Tuple[FrozenSet[Func], FrozenSet[str]]:
    """Function symbols and labels occurring in ``phi``."""
    funcs = set()
    labels = set()

    def term(t):
        if isinstance(t, App):
            funcs.add(t.func)
            for a in t.args:
                term(a)

    def walk(p):
        if isinstance(p, Eq):
            term(p.lhs)
            term(p.rhs)
        elif isinstance(p, Trans):
            labels.update(action_labels(p.action))
            term(p.src)
            term(p.dst)
        elif isinstance(p, Not):
            walk(p.body)
        elif isinstance(p, Or):
            for q in p.disjuncts:
                walk(q)
        else:
            walk(p.body)
    walk(phi)
    return frozenset(funcs), frozenset(labels)


def sentence_depth(phi) -> int:
    if isinstance(phi, (Eq, Trans)):
        return 0
    if isinstance(phi, Not):
        return 1 + sentence_depth(phi.body)
    if isinstance(phi, Or):
        return 1 + max((sentence_depth(p) for p in phi.disjuncts), default=0)
    return 1 + sentence_depth(phi.body)


def subformulas(phi) -> Iterator:
    yield phi
    if isinstance(phi, Not):
        yield from subformulas(phi.body)
    elif isinstance(phi, Or):
        for p in phi.disjuncts:
            yield from subformulas(p)
    elif isinstance(phi, Exists):
        yield from subformulas(phi.body)


def requalify(phi, depth: int = 0):
    """Canonical qualifiers: a bound variable's qualifier is the number of
    blocks enclosing its binder.  Free variables are left untouched."""
    def go(p, env: Dict[Variable, Variable], d: int):
        def tf(t):
            if isinstance(t, Var):
                return Var(env.get(t.var, t.var))
            if not t.args:
                return t
            return App(t.func, tuple(tf(a) for a in t.args))
        if isinstance(p, Eq):
            return Eq(tf(p.lhs), tf(p.rhs))
        if isinstance(p, Trans):
            return Trans(p.action, tf(p.src), tf(p.dst))
        if isinstance(p, Not):
            return Not(go(p.body, env, d))
        if isinstance(p, Or):
            return Or(tuple(go(q, env, d) for q in p.disjuncts))
        new_block = tuple(Variable(v.name, v.sort, d) for v in p.block)
        inner = dict(env)
        inner.update(zip(p.block, new_block))
        return Exists(new_block, go(p.body, inner, d + 1))
    return go(phi, {}, depth)


def normalize(phi):
    """Normal form of a core sentence (canonical variable qualifiers)."""
    return requalify(phi)


def check_block(sig: Signature, block: Sequence[Variable], where: str, report: ValidationReport) -> None:
    names: Dict[str, str] = {}
    for v in block:
        if not sig.has_sort(v.sort):
            report.add(where, f"variable {v.name} has undeclared sort {v.sort}")
        prev = names.get(v.name)
        if prev is not None:
            report.add(where, f"duplicate variable name {v.name} in block ({prev} and {v.sort})")
        names[v.name] = v.sort


def check_term(sig: Signature, ctx, t, where: str, report: ValidationReport) -> Optional[str]:
    try:
        return _sort_of(sig, ctx, t)
    except (SortError, UnboundVariable) as e:
        report.add(where, str(e))
        return None


def check_action(sig: Signature, a, where: str, report: ValidationReport) -> None:
    for name in action_labels(a):
        if name not in sig.labels:
            report.add(where, f"undeclared transition label {name}")


def check_sentence(sig: Signature, phi, ctx: Iterable[Variable] = ()) -> ValidationReport:
    """Well-formedness of ``phi`` over ``sig`` with free variables ``ctx``."""
    report = ValidationReport()
    _check(sig, phi, frozenset(ctx), type(phi).__name__, report)
    return report


def _check(sig, phi, ctx, where, report):
    if isinstance(phi, Eq):
        a = check_term(sig, ctx, phi.lhs, where, report)
        b = check_term(sig, ctx, phi.rhs, where, report)
        if a is not None and b is not None and a != b:
            report.add(where, f"sort mismatch in equation: {a} vs {b}")
    elif isinstance(phi, Trans):
        check_action(sig, phi.action, where, report)
        a = check_term(sig, ctx, phi.src, where, report)
        b = check_term(sig, ctx, phi.dst, where, report)
        if a is not None and b is not None and a != b:
            report.add(where, f"sort mismatch in transition: {a} vs {b}")
    elif isinstance(phi, Not):
        _check(sig, phi.body, ctx, where + "/Not", report)
    elif isinstance(phi, Or):
        for i, p in enumerate(phi.disjuncts):
            _check(sig, p, ctx, f"{where}/Or[{i}]", report)
    elif isinstance(phi, Exists):
        check_block(sig, phi.block, where, report)
        _check(sig, phi.body, ctx | frozenset(phi.block), where + "/Exists", report)
    else:
        report.add(where, f"not a sentence: {phi!r}")
