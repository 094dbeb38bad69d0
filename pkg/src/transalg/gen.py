"""Seeded random generators for signatures, models, sentences, morphisms,
substitutions and forcing properties (used by the fuzz campaigns)."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .finmod.model import FiniteModel
from .forcing.congruence import atomic_consequences
from .forcing.core import Condition, ForcingProperty
from .finmod.model import satisfies
from .institution import (SignatureMorphism, Substitution, apply_substitution, reduct_along_substitution,
                          reduct_model, translate_sentence)
from .kernel import (App, Eq, Exists, FALSE, Func, Label, Not, Or, Seq, Signature, Star, TRUE, Trans, Union, Var,
                     Variable, ground_terms, normalize)


def random_signature(rng: random.Random, max_sorts: int = 2, prefix: str = "") -> Signature:
    sorts = tuple(f"{prefix}s{i}" for i in range(rng.randint(1, max_sorts)))
    funcs: List[Func] = []
    for i in range(rng.randint(0, 3)):
        funcs.append(Func(f"{prefix}c{i}", (), rng.choice(sorts)))
    for i in range(rng.randint(0, 2)):
        arity = tuple(rng.choice(sorts) for _ in range(rng.randint(1, 2)))
        funcs.append(Func(f"{prefix}f{i}", arity, rng.choice(sorts)))
    labels = tuple(f"{prefix}l{i}" for i in range(rng.randint(0, 2)))
    return Signature(sorts, tuple(funcs), labels)


def _fix_sizes(sig: Signature, sizes: Dict[str, int]) -> Dict[str, int]:
    changed = True
    while changed:
        changed = False
        for f in sig.funcs:
            if all(sizes[s] > 0 for s in f.arity) and sizes[f.result] == 0:
                sizes[f.result] = 1
                changed = True
    return sizes


def random_model(rng: random.Random, sig: Signature, max_size: int = 3, empty_bias: float = 0.2) -> FiniteModel:
    sizes = {s: 0 if rng.random() < empty_bias else rng.randint(1, max_size) for s in sig.sorts}
    sizes = _fix_sizes(sig, sizes)
    carriers = {s: tuple(f"{s}_{i}" for i in range(sizes[s])) for s in sig.sorts}
    tables = {}
    for f in sig.funcs:
        tables[f] = {args: rng.choice(carriers[f.result])
                     for args in itertools.product(*(carriers[s] for s in f.arity))}
    rels = {}
    for l in sig.labels:
        for s in sig.sorts:
            pairs = [p for p in itertools.product(carriers[s], carriers[s]) if rng.random() < 0.35]
            if pairs:
                rels[(l, s)] = frozenset(pairs)
    return FiniteModel(sig, carriers, tables, rels)


def random_term(rng: random.Random, sig: Signature, sort: str, env: Sequence[Variable], depth: int):
    vs = [v for v in env if v.sort == sort]
    consts = [f for f in sig.funcs if f.is_constant and f.result == sort]
    ops = [f for f in sig.funcs if f.arity and f.result == sort] if depth > 0 else []
    choices = [("v", v) for v in vs] + [("c", f) for f in consts] + [("f", f) for f in ops]
    rng.shuffle(choices)
    for kind, x in choices:
        if kind == "v":
            return Var(x)
        if kind == "c":
            return App(x)
        args = []
        for s in x.arity:
            a = random_term(rng, sig, s, env, depth - 1)
            if a is None:
                break
            args.append(a)
        else:
            return App(x, tuple(args))
    return None


def random_action(rng: random.Random, labels: Sequence[str], depth: int):
    if depth <= 0 or rng.random() < 0.4:
        return Label(rng.choice(labels))
    k = rng.randrange(3)
    if k == 0:
        return Seq(random_action(rng, labels, depth - 1), random_action(rng, labels, depth - 1))
    if k == 1:
        return Union(random_action(rng, labels, depth - 1), random_action(rng, labels, depth - 1))
    return Star(random_action(rng, labels, depth - 1))


def random_sentence(rng: random.Random, sig: Signature, depth: int = 3, env: Sequence[Variable] = (),
                    term_depth: int = 1, counter: Optional[List[int]] = None):
    counter = counter if counter is not None else [0]
    if depth <= 0 or rng.random() < 0.25:
        for _ in range(4):
            s = rng.choice(sig.sorts)
            a = random_term(rng, sig, s, env, term_depth)
            b = random_term(rng, sig, s, env, term_depth)
            if a is None or b is None:
                continue
            if sig.labels and rng.random() < 0.5:
                return Trans(random_action(rng, sig.labels, 2), a, b)
            return Eq(a, b)
        return rng.choice([TRUE, FALSE])
    k = rng.randrange(3)
    if k == 0:
        return Not(random_sentence(rng, sig, depth - 1, env, term_depth, counter))
    if k == 1:
        n = rng.randint(0, 3)
        return Or(tuple(random_sentence(rng, sig, depth - 1, env, term_depth, counter) for _ in range(n)))
    block = []
    for _ in range(rng.randint(1, 2)):
        counter[0] += 1
        block.append(Variable(f"v{counter[0]}", rng.choice(sig.sorts)))
    return Exists(tuple(block), random_sentence(rng, sig, depth - 1, tuple(env) + tuple(block), term_depth, counter))


def random_morphism(rng: random.Random, source: Signature) -> SignatureMorphism:
    """A morphism into a fresh target signature; sorts and labels may collapse."""
    n_target = rng.randint(1, len(source.sorts) + 1)
    tsorts = tuple(f"t{i}" for i in range(n_target))
    sort_map = {s: rng.choice(tsorts) for s in source.sorts}
    tfuncs: List[Func] = []
    func_map: Dict[Func, Func] = {}
    for f in source.funcs:
        rank = (tuple(sort_map[s] for s in f.arity), sort_map[f.result])
        same = [g for g in tfuncs if (g.arity, g.result) == rank]
        if same and rng.random() < 0.3:
            func_map[f] = rng.choice(same)
            continue
        g = Func(f"g{len(tfuncs)}", rank[0], rank[1])
        tfuncs.append(g)
        func_map[f] = g
    for i in range(rng.randint(0, 2)):
        tfuncs.append(Func(f"h{i}", (), rng.choice(tsorts)))
    tlabels = tuple(f"m{i}" for i in range(max(1, len(source.labels))))
    label_map = {l: rng.choice(tlabels) for l in source.labels}
    target = Signature(tsorts, tuple(tfuncs), tlabels)
    return SignatureMorphism(source, target, sort_map, func_map, label_map)


def random_substitution(rng: random.Random, base: Signature, tries: int = 20) -> Optional[Substitution]:
    for _ in range(tries):
        c1 = tuple(Func(f"k{i}", (), rng.choice(base.sorts)) for i in range(rng.randint(1, 2)))
        c2 = tuple(Func(f"j{i}", (), rng.choice(base.sorts)) for i in range(rng.randint(0, 2)))
        tsig = base.with_constants(c2)
        terms = ground_terms(tsig, 2)
        mapping = {}
        for c in c1:
            pool = terms.get(c.result, [])
            if not pool:
                break
            mapping[c] = rng.choice(pool)
        else:
            return Substitution(base, c1, c2, mapping)
    return None


def random_forcing_property(rng: random.Random, max_conditions: int = 6, max_terms: int = 12) -> ForcingProperty:
    """Constants-only forcing property with closed atom sets (axiom 4 holds at each condition)."""
    n = rng.randint(1, max_conditions)
    labels = ("lam", "mu")[: rng.randint(1, 2)]
    base_consts = [Func(f"c{i}", (), "s") for i in range(rng.randint(1, 3))]
    extra = [Func(f"d{i}", (), "s") for i in range(max_terms - len(base_consts))]
    sigs: List[Signature] = []
    atoms: List[frozenset] = []
    order = set()
    used = 0
    for i in range(n):
        parents = [] if i == 0 else sorted(rng.sample(range(i), rng.randint(1, min(2, i))))
        sig = Signature(("s",), tuple(base_consts), labels)
        inherited = set()
        for p in parents:
            sig = sig.union(sigs[p])
            inherited |= atoms[p]
            order.add((f"q{p}", f"q{i}"))
        if i > 0 and used < len(extra) and rng.random() < 0.5:
            sig = sig.with_constants([extra[used]])
            used += 1
        terms = [App(c) for c in sig.funcs]
        new = set()
        for _ in range(rng.randint(0, 2)):
            a, b = rng.choice(terms), rng.choice(terms)
            if rng.random() < 0.5:
                new.add(Eq(a, b))
            else:
                new.add(Trans(Label(rng.choice(labels)), a, b))
        closed = frozenset(atomic_consequences(inherited | new, terms))
        closed = frozenset(a for a in closed if not (isinstance(a, Eq) and a.lhs == a.rhs)) | frozenset(inherited)
        sigs.append(sig)
        atoms.append(closed)
    conds = tuple(Condition(f"q{i}", sigs[i], atoms[i]) for i in range(n))
    for i in range(1, n):
        order.add(("q0", f"q{i}"))
    return ForcingProperty(conds, frozenset(order), "q0")


# ---------------------------------------------------------------------------
# satisfaction-condition campaigns

@dataclass
class FuzzFailure:
    case: int
    kind: str
    sentence: object
    detail: str


@dataclass
class FuzzStats:
    kind: str
    cases: int = 0
    agree: int = 0
    empty_carriers: int = 0
    with_star: int = 0
    failures: List[FuzzFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.cases == self.agree


def _has_star(phi) -> bool:
    from .kernel import subformulas

    def act(a):
        if isinstance(a, Star):
            return True
        if isinstance(a, (Seq, Union)):
            return act(a.first if isinstance(a, Seq) else a.left) or act(a.second if isinstance(a, Seq) else a.right)
        return False
    return any(isinstance(p, Trans) and act(p.action) for p in subformulas(phi))


def morphism_case(rng: random.Random, max_size: int = 3, depth: int = 4):
    """(chi, target model, source sentence)."""
    source = random_signature(rng)
    chi = random_morphism(rng, source)
    m = random_model(rng, chi.target, max_size)
    phi = normalize(random_sentence(rng, source, depth))
    return chi, m, phi


def substitution_case(rng: random.Random, max_size: int = 3, depth: int = 4):
    """(theta, model over the target signature, sentence over the source signature) or None."""
    base = random_signature(rng)
    theta = random_substitution(rng, base)
    if theta is None:
        return None
    m = random_model(rng, theta.target_signature, max_size)
    phi = normalize(random_sentence(rng, theta.source_signature, depth))
    return theta, m, phi


def fuzz_satcond(seed: int, cases: int, kind: str = "morphism", max_size: int = 3, depth: int = 4) -> FuzzStats:
    """Check reduct satisfaction against translated satisfaction on ``cases`` random triples."""
    rng = random.Random(seed)
    stats = FuzzStats(kind)
    i = 0
    while stats.cases < cases:
        i += 1
        if kind == "morphism":
            chi, m, phi = morphism_case(rng, max_size, depth)
            red = reduct_model(chi, m)
            a, b = satisfies(red, phi), satisfies(m, translate_sentence(chi, phi))
        else:
            case = substitution_case(rng, max_size, depth)
            if case is None:
                continue
            theta, m, phi = case
            red = reduct_along_substitution(theta, m)
            a, b = satisfies(red, phi), satisfies(m, apply_substitution(theta, phi))
        stats.cases += 1
        stats.empty_carriers += any(not m.carrier(s) for s in m.sig.sorts)
        stats.with_star += _has_star(phi)
        if a == b:
            stats.agree += 1
        else:
            stats.failures.append(FuzzFailure(i, kind, phi, f"reduct={a} translated={b}"))
    return stats
