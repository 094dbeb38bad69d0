"""Types over Sigma[X]: realization, omission, isolation search and the named type families.

The variables of a type's block occur free in its sentences and play the
role of the new constants of Sigma[X]; an expansion of a model to Sigma[X]
is therefore just a valuation of the block.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .classes import ctor_terms, model_search, semantic_entails
from .errors import MissingCtors, ValidationReport
from .finmod.model import Evaluator, FiniteModel, valuations
from .finmod.search import Bounds
from .fixtures import INF_Y, distinct, inf_sentences, inf_signature, inf_type_sentences
from .institution import PLAIN
from .kernel import (App, And, Exists, Forall, Func, Neq, Signature, Var, Variable, check_sentence, normalize,
                     substitute, term_vars)


@dataclass(frozen=True)
class LogicType:
    sig: Signature
    block: Tuple[Variable, ...]
    sentences: Tuple
    name: str = "T"
    params: Tuple[Tuple[str, object], ...] = ()

    def __len__(self) -> int:
        return len(self.sentences)


def check_type(t: LogicType) -> ValidationReport:
    report = ValidationReport()
    for i, phi in enumerate(t.sentences):
        report.extend(check_sentence(t.sig, phi, t.block), f"{t.name}[{i}]")
    return report


def realizes(m: FiniteModel, t: LogicType) -> Optional[Dict[Variable, str]]:
    """First valuation of the block (lexicographic) whose expansion satisfies every sentence."""
    ev = Evaluator(m)
    for env in valuations(m, t.block):
        if all(ev.sat(phi, env) for phi in t.sentences):
            return env
    return None


def omits(m: FiniteModel, t: LogicType) -> bool:
    return realizes(m, t) is None


# ---------------------------------------------------------------------------
# named families

def _fresh_var(sort: str, avoid) -> Variable:
    name = "x"
    while name in avoid:
        name += "_"
    return Variable(name, sort)


def build_Tc(sig: Signature, depth: int, sort: Optional[str] = None, prefix: int = 0) -> LogicType:
    """{forall var(t) . x != t | t constructor term of depth <= depth} for one constrained sort."""
    if not sig.ctors:
        raise MissingCtors("the signature declares no constructors")
    constrained = sig.constrained_sorts
    if sort is None:
        if len(constrained) != 1:
            raise ValueError("several constrained sorts; pick one or use build_Tc_types")
        sort = constrained[0]
    if sort not in constrained:
        raise ValueError(f"sort {sort} is not constrained")
    x = _fresh_var(sort, ())
    prefix = prefix or max(depth, 1)
    sents = []
    for t in ctor_terms(sig, sort, depth, prefix):
        vs = term_vars(t)
        body = Neq(Var(x), t)
        sents.append(normalize(Forall(vs, body) if vs else body))
    return LogicType(sig, (x,), tuple(sents), f"Tc_{sort}", (("depth", depth), ("prefix", prefix)))


def build_Tc_types(sig: Signature, depth: int, prefix: int = 0) -> List[LogicType]:
    return [build_Tc(sig, depth, s, prefix) for s in sig.constrained_sorts]


def omits_Tc(m: FiniteModel, depth: int, prefix: int = 0) -> bool:
    return all(omits(m, t) for t in build_Tc_types(m.sig, depth, prefix))


def at_least(sort: str, n: int):
    xs = [Variable(f"x_{i}", sort) for i in range(1, n + 1)]
    return Exists(tuple(xs), And(*distinct(xs)))


def build_Tf(sig: Signature, sort: str, n_max: int) -> LogicType:
    """Closed sentences "at least n elements of sort" for 1 <= n <= n_max."""
    if sort not in sig.sorts:
        raise ValueError(f"unknown sort {sort}")
    return LogicType(sig, (), tuple(normalize(at_least(sort, n)) for n in range(1, n_max + 1)),
                     f"Tf_{sort}", (("n_max", n_max),))


def build_inf_type(k: int) -> Tuple[Signature, List, LogicType]:
    """Signature, Phi = {phi_n | n <= k} and the type over {y : s_1} for the sort-chain fixture."""
    sig = inf_signature(k)
    phis = [p for _, p in inf_sentences(k)]
    t = LogicType(sig, (INF_Y,), tuple(p for _, p in inf_type_sentences(k)), "T_inf", (("k", k),))
    return sig, phis, t


def inf_pool(k: int) -> List:
    """Sentences over Sigma[y] used as the isolation pool for the sort-chain fixture."""
    y = Var(INF_Y)
    pool = [Exists((Variable("z", f"s_{n}"),), And()) for n in range(1, k + 1)]
    pool.append(Exists((Variable("x", "s_1"),), Neq(Var(Variable("x", "s_1")), y)))
    return pool


# ---------------------------------------------------------------------------
# isolation

@dataclass
class IsolationWitness:
    constants: Tuple[Func, ...]
    gamma: Tuple
    theta: Dict[Variable, Func]
    model: FiniteModel
    checked: int = 0


@dataclass
class IsolationSearch:
    witness: Optional[IsolationWitness]
    candidates: int = 0
    params: Dict[str, object] = field(default_factory=dict)


def _block_maps(block: Sequence[Variable], max_d: int, taken) -> Iterator[Tuple[Tuple[Func, ...], Dict]]:
    """Maps X -> D onto fresh constants, D ranging over same-sort partitions of X."""
    block = list(block)
    taken = set(taken)

    def names(sort):
        i = 1
        while True:
            n = f"d_{sort}_{i}"
            if n not in taken:
                yield n
            i += 1

    def rec(i, classes):
        if i == len(block):
            yield classes
            return
        v = block[i]
        for j, cls in enumerate(classes):
            if cls[0].sort == v.sort:
                yield from rec(i + 1, classes[:j] + [cls + [v]] + classes[j + 1:])
        if len(classes) < max_d:
            yield from rec(i + 1, classes + [[v]])

    for classes in rec(0, []):
        gens: Dict[str, Iterator[str]] = {}
        consts = []
        theta = {}
        for cls in classes:
            s = cls[0].sort
            gen = gens.setdefault(s, names(s))
            c = Func(next(gen), (), s)
            consts.append(c)
            for v in cls:
                theta[v] = c
        yield tuple(consts), theta


def search_isolation(sig: Signature, phis: Sequence, t: LogicType, pool: Sequence, *, max_d: int = 1,
                     max_gamma: int = 1, bounds: Bounds = 2, flavor: str = PLAIN,
                     budget: int = 2_000_000) -> IsolationSearch:
    """Look for D, Gamma from ``pool`` (size <= max_gamma) and theta : X -> D with
    Phi u theta(Gamma) |= theta(T) up to ``bounds`` and Phi u theta(Gamma) u theta(T)
    satisfiable within ``bounds``.

    Pool sentences are over Sigma[X] and travel through theta like T.
    """
    taken = {f.name for f in sig.funcs}
    found = IsolationSearch(None, 0, {"max_d": max_d, "max_gamma": max_gamma, "bounds": bounds})
    for consts, theta in _block_maps(t.block, max(max_d, 0), taken):
        dsig = sig.with_constants(consts)
        tmap = {v: App(c) for v, c in theta.items()}
        ttheta = [normalize(substitute(p, tmap)) for p in t.sentences]
        for r in range(0, max_gamma + 1):
            for gamma in itertools.combinations(pool, r):
                found.candidates += 1
                gtheta = [normalize(substitute(p, tmap)) for p in gamma]
                base = list(phis) + gtheta
                search = model_search(dsig, base + ttheta, flavor, bounds, budget)
                model = next(iter(search.models()), None)
                if model is None:
                    continue
                if all(semantic_entails(dsig, base, phi, flavor, bounds, budget).holds for phi in ttheta):
                    found.witness = IsolationWitness(consts, tuple(gtheta), theta, model, found.candidates)
                    return found
    return found
