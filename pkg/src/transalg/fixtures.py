"""Builders for the named example theories and models.

Each builder returns kernel/finmod objects; :func:`fixture_spec` packages
them as a :class:`~transalg.surface.spec.SpecFile` for the CLI.
"""
from __future__ import annotations

from typing import Dict, List, Tuple

from .errors import UnknownFixture
from .finmod.model import FiniteModel, build_model
from .kernel import (And, App, Eq, Exists, Forall, Func, Implies, Label, Neq, Not, Signature, Star, TRUE, Trans,
                     Var, Variable, power)

# ---------------------------------------------------------------------------
# lists

EMPTY = Func("empty", (), "List")
CONS = Func("cons", ("List", "Elt"), "List")
ADD = Func("add", ("List", "List"), "List")


def list_signature(ctors: bool = True) -> Signature:
    return Signature(("Elt", "List"), (EMPTY, CONS, ADD), (),
                     frozenset({EMPTY, CONS}) if ctors else frozenset())


def _v(name, sort, q=0):
    return Var(Variable(name, sort, q))


def list_axioms() -> List[Tuple[str, object]]:
    x, y, e = _v("x", "List"), _v("y", "List"), _v("e", "Elt")
    add_empty = Forall([x.var], Eq(App(ADD, (x, App(EMPTY))), x))
    add_cons = Forall([x.var, y.var, e.var],
                      Eq(App(ADD, (x, App(CONS, (y, e)))), App(CONS, (App(ADD, (x, y)), e))))
    return [("add_empty", add_empty), ("add_cons", add_cons)]


def list_assoc():
    x, y, z = _v("x", "List"), _v("y", "List"), _v("z", "List")
    return Forall([x.var, y.var, z.var],
                  Eq(App(ADD, (App(ADD, (x, y)), z)), App(ADD, (x, App(ADD, (y, z))))))


def _saturated_cons(k: int, cap: int) -> int:
    return min(k + 1, cap)


def list_ctor_model() -> FiniteModel:
    """Constructor-generated lists over one element, truncated at length 2.

    List = {E0, E1, E2} where Ek is the list of length k and E2 absorbs
    further ``cons``; ``add`` follows the recursive definition on its
    second argument.
    """
    sig = list_signature()
    lists = ["E0", "E1", "E2"]
    cons = {(f"E{k}", "e"): f"E{_saturated_cons(k, 2)}" for k in range(3)}
    add = {}
    for k in range(3):
        for m in range(3):
            add[(f"E{k}", f"E{m}")] = f"E{min(k + m, 2)}"
    return build_model(sig, {"Elt": ["e"], "List": lists},
                       {EMPTY: {(): "E0"}, CONS: cons, ADD: add})


def list_saturated_model() -> FiniteModel:
    """The 7-element quotient of the non-standard list model with a ``nil`` root.

    Elt = {e}; List = {E0, E1, E2, N0, N1, N2} where Ek is ``empty`` followed
    by k elements and Nk is ``nil`` followed by k elements, both saturating
    at length 2.  ``add`` satisfies ``add(l, empty) = l`` and
    ``add(l, cons(l', e)) = cons(add(l, l'), e)``; on a ``nil``-rooted second
    argument it appends one element to ``empty`` and leaves non-empty lists
    unchanged, which breaks associativity.
    """
    sig = list_signature()
    lists = ["E0", "E1", "E2", "N0", "N1", "N2"]

    def cons_of(l: str) -> str:
        return f"{l[0]}{_saturated_cons(int(l[1]), 2)}"

    cons = {(l, "e"): cons_of(l) for l in lists}
    add: Dict[Tuple[str, str], str] = {}
    for l in lists:
        # second argument nil: empty gains an element, anything else is kept
        if l == "E0":
            base = "E1"
        else:
            base = l
        for k in range(3):
            add[(l, f"E{k}")] = l
            add[(l, f"N{k}")] = base
        # second argument of length k: k conses applied to the base value
        for root, start in (("E", l), ("N", base)):
            acc = start
            for k in range(1, 3):
                acc = cons_of(acc)
                add[(l, f"{root}{k}")] = acc
    return build_model(sig, {"Elt": ["e"], "List": lists},
                       {EMPTY: {(): "E0"}, CONS: cons, ADD: add})


# ---------------------------------------------------------------------------
# one element per sort

def uls_signature(k: int) -> Signature:
    sorts = tuple(f"s_{n}" for n in range(k))
    funcs = tuple(Func(f"c_{n}", (), f"s_{n}") for n in range(k))
    return Signature(sorts, funcs, ())


def uls_sentences(k: int) -> List[Tuple[str, object]]:
    out = []
    for n in range(k):
        x = _v(f"x_{n}", f"s_{n}")
        out.append((f"one_{n}", Forall([x.var], Eq(x, App(Func(f"c_{n}", (), f"s_{n}"))))))
    return out


def uls_model(k: int) -> FiniteModel:
    sig = uls_signature(k)
    return build_model(sig, {f"s_{n}": [f"a_{n}"] for n in range(k)},
                       {Func(f"c_{n}", (), f"s_{n}"): {(): f"a_{n}"} for n in range(k)})


# ---------------------------------------------------------------------------
# paths of forbidden lengths

C0 = Func("c", (), "s_0")
D0 = Func("d", (), "s_0")


def example28_signature(k: int) -> Signature:
    return Signature(tuple(f"s_{n}" for n in range(k)), (C0, D0), ("lam",))


def power_atom(label: str, n: int, t1, t2):
    """``label^n(t1, t2)``; the zero power is the equation ``t1 = t2``."""
    if n == 0:
        return Eq(t1, t2)
    return Trans(power(Label(label), n), t1, t2)


def example28_sentences(k: int) -> List[Tuple[str, object]]:
    c, d = App(C0), App(D0)
    out: List[Tuple[str, object]] = [("reach", Trans(Star(Label("lam")), c, d))]
    for n in range(k):
        x = Variable(f"x_{n}", f"s_{n}")
        out.append((f"no_path_{n}", Implies(Exists((x,), TRUE), Not(power_atom("lam", n, c, d)))))
    return out


def inhabited_sentences(sig: Signature) -> List[Tuple[str, object]]:
    return [(f"inhabited_{s}", Exists((Variable("z", s),), TRUE)) for s in sig.sorts]


def example28_model(k: int) -> FiniteModel:
    sig = example28_signature(k)
    carriers = {f"s_{n}": [] for n in range(k)}
    carriers["s_0"] = ["c0", "d0"]
    return build_model(sig, carriers, {C0: {(): "c0"}, D0: {(): "d0"}},
                       {("lam", "s_0"): [("c0", "d0")]})


# ---------------------------------------------------------------------------
# infinitely many elements, truncated

def inf_signature(k: int) -> Signature:
    return Signature(tuple(f"s_{n}" for n in range(1, k + 1)), (), ())


def distinct(vs) -> list:
    return [Neq(Var(a), Var(b)) for i, a in enumerate(vs) for b in vs[i + 1:]]


def inf_sentences(k: int) -> List[Tuple[str, object]]:
    out = []
    for n in range(1, k + 1):
        z = Variable(f"z_{n}", f"s_{n}")
        xs = [Variable(f"x_{i}", "s_1") for i in range(1, n + 1)]
        out.append((f"phi_{n}", Implies(Exists((z,), TRUE), Exists(tuple(xs), And(*distinct(xs))))))
    return out


INF_Y = Variable("y", "s_1")


def inf_type_sentences(k: int) -> List[Tuple[str, object]]:
    out = []
    y = Var(INF_Y)
    for n in range(1, k + 1):
        xs = [Variable(f"x_{i}", "s_1") for i in range(1, n + 1)]
        body = And(*(distinct(xs) + [Neq(y, Var(x)) for x in xs]))
        out.append((f"more_{n}", Exists(tuple(xs), body)))
    return out


FIXTURES = ("list", "list-saturated", "list-ctor", "uls", "example28", "inf", "forcing")
DEFAULT_K = {"uls": 4, "example28": 3, "inf": 3}


def require_fixture(name: str) -> None:
    if name not in FIXTURES:
        raise UnknownFixture(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}")


# ---------------------------------------------------------------------------
# packaged as spec files

def _norm(items):
    from .kernel import normalize
    return tuple((n, normalize(p)) for n, p in items)


def _list_decls(which: str) -> list:
    from .institution import make_morphism, translate_sentence, Substitution
    from .kernel import normalize
    from .surface.spec import (ModelDecl, MorphismDecl, ProofDecl, SentencesDecl, SetRef, SigDecl, StepDecl,
                               SubstDecl)
    sig = list_signature()
    decls = [SigDecl("LIST", sig)]
    if which == "list-saturated":
        return decls + [ModelDecl("B", "LIST", list_saturated_model())]
    phi = _norm(list_axioms())
    decls.append(SentencesDecl("PHI", "LIST", phi))
    if which == "list-ctor":
        return decls + [ModelDecl("C", "LIST", list_ctor_model())]
    decls.append(SentencesDecl("GOAL", "LIST", _norm([("assoc", list_assoc())])))
    decls.append(ModelDecl("B", "LIST", list_saturated_model()))
    decls.append(ModelDecl("C", "LIST", list_ctor_model()))
    from .omitting import LogicType, build_Tc
    from .surface.spec import TypeDecl
    tc = build_Tc(sig, 3)
    tc = LogicType(sig, tc.block, tc.sentences, "Tc")
    decls.append(TypeDecl("Tc", "LIST", tc, tuple(f"not_{i}" for i in range(len(tc.sentences)))))
    nil, push = Func("nil", (), "Seq"), Func("push", ("Seq", "Item"), "Seq")
    cat = Func("cat", ("Seq", "Seq"), "Seq")
    rsig = Signature(("Item", "Seq"), (nil, push, cat), (), frozenset({nil, push}))
    decls.append(SigDecl("SEQ", rsig))
    chi = make_morphism(sig, rsig, {"Elt": "Item", "List": "Seq"}, {"empty": "nil", "cons": "push", "add": "cat"})
    decls.append(MorphismDecl("ren", "LIST", "SEQ", chi))
    decls.append(SentencesDecl("PHI_SEQ", "SEQ", tuple((n, normalize(translate_sentence(chi, p))) for n, p in phi)))
    k = Func("k", (), "List")
    decls.append(SubstDecl("th", "LIST", Substitution(sig, (k,), (), {k: App(ADD, (App(EMPTY), App(EMPTY)))})))
    x = _v("x", "List")
    left_unit = normalize(Forall([x.var], Eq(App(ADD, (App(EMPTY), x)), x)))
    steps = (
        StepDecl("s1", (SetRef("PHI"),), (SetRef("PHI", "add_empty"),), "mono"),
        StepDecl("s2", (SetRef("PHI_SEQ"),), (SetRef("PHI_SEQ", "add_empty"),), "translate", ("s1",), "ren"),
        StepDecl("s3", (SetRef("PHI"),), (left_unit,), "cb", var=x.var, depth=2,
                 bounds=(("Elt", 1), ("List", 3))),
    )
    decls.append(ProofDecl("P", "LIST", steps))
    return decls


def _forcing_decls() -> list:
    from .forcing.core import Condition, ForcingProperty
    from .surface.spec import ForcingDecl, SentencesDecl, SigDecl
    c, d, e = Func("c", (), "s"), Func("d", (), "s"), Func("e", (), "s")
    sig = Signature(("s",), (c, d), ("lam",))
    sig_e = sig.with_constants([e])
    lam = Label("lam")
    conds = (
        Condition("p0", sig),
        Condition("p1", sig_e, frozenset({Trans(lam, App(c), App(e))})),
        Condition("p2", sig_e, frozenset({Trans(lam, App(c), App(e)), Trans(lam, App(e), App(d))})),
    )
    prop = ForcingProperty(conds, frozenset({("p0", "p1"), ("p1", "p2")}), "p0")
    pool = _norm([("reach", Trans(Star(lam), App(c), App(d))), ("step", Trans(lam, App(c), App(d))),
                  ("neq", Neq(App(c), App(d)))])
    return [SigDecl("S", sig), ForcingDecl("F", "S", prop), SentencesDecl("POOL", "S", pool)]


def fixture_spec(name: str, k: int = 0):
    """The named fixture as a checked spec file; ``k`` is the truncation (0 picks the default)."""
    from .surface.spec import ModelDecl, SentencesDecl, SigDecl, SpecFile, TypeDecl
    require_fixture(name)
    k = k or DEFAULT_K.get(name, 0)
    if name.startswith("list"):
        decls = _list_decls(name)
    elif name == "uls":
        decls = [SigDecl("ULS", uls_signature(k)), ModelDecl("M", "ULS", uls_model(k)),
                 SentencesDecl("GAMMA", "ULS", _norm(uls_sentences(k)))]
    elif name == "example28":
        sig = example28_signature(k)
        decls = [SigDecl("EX", sig), SentencesDecl("PHI", "EX", _norm(example28_sentences(k))),
                 SentencesDecl("INHABITED", "EX", _norm(inhabited_sentences(sig))),
                 ModelDecl("M", "EX", example28_model(k))]
    elif name == "inf":
        from .omitting import LogicType, build_inf_type, inf_pool
        from .kernel import normalize
        sig, _, t = build_inf_type(k)
        t = LogicType(sig, t.block, tuple(normalize(p) for p in t.sentences), "T")
        pool = tuple(normalize(p) for p in inf_pool(k))
        pool_t = LogicType(sig, t.block, pool, "POOL")
        decls = [SigDecl("INF", sig), SentencesDecl("PHI", "INF", _norm(inf_sentences(k))),
                 TypeDecl("T", "INF", t, tuple(n for n, _ in inf_type_sentences(k))),
                 TypeDecl("POOL", "INF", pool_t, tuple(f"g_{i}" for i in range(len(pool))))]
    else:
        decls = _forcing_decls()
    return SpecFile(decls, f"<fixture {name}>")
