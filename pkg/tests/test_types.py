import pytest

from transalg.classes import is_constructor_based
from transalg.errors import MissingCtors
from transalg.finmod.model import build_model, satisfies_all
from transalg.fixtures import list_ctor_model, list_saturated_model, list_signature, uls_signature
from transalg.gen import random_model, random_signature
from transalg.kernel import App, Eq, Forall, Func, Neq, Signature, Var, Variable, normalize
from transalg.omitting import (LogicType, build_Tc, build_Tf, build_inf_type, check_type, inf_pool, omits,
                               realizes, search_isolation)
from transalg.surface import show_sentence

LIST = list_signature()


def test_Tc_depth_one_over_lists():
    t = build_Tc(LIST, 1)
    assert t.block == (Variable("x", "List"),)
    shown = [show_sentence(s, t.sig, t.block) for s in t.sentences]
    assert shown == ["x != empty", "forall y_Elt_1:Elt . x != cons(empty, y_Elt_1)"]
    assert check_type(t).ok


def test_Tc_degenerate_signatures():
    f = Func("f", ("s",), "t")
    sig = Signature(("s", "t"), (f,), (), frozenset({f}))
    assert len(build_Tc(sig, 0)) == 0

    uls = uls_signature(1)
    ctor_uls = Signature(uls.sorts, uls.funcs, (), frozenset(uls.funcs))
    t = build_Tc(ctor_uls, 2)
    assert [show_sentence(s, t.sig, t.block) for s in t.sentences] == ["x != c_0"]

    with pytest.raises(MissingCtors):
        build_Tc(uls, 1)


def test_realization_of_Tc():
    assert realizes(list_ctor_model(), build_Tc(LIST, 3)) is None
    v = realizes(list_saturated_model(), build_Tc(LIST, 3))
    assert v == {Variable("x", "List"): "N0"}


def test_finite_models_omit_Tf():
    import random
    rng = random.Random(5)
    for _ in range(30):
        sig = random_signature(rng)
        m = random_model(rng, sig, 3)
        for s in sig.sorts:
            assert omits(m, build_Tf(sig, s, len(m.carrier(s)) + 1))


def test_inf_fixture_shapes():
    sig, phis, t = build_inf_type(2)
    assert len(phis) == 2 and len(t) == 2
    bad = build_model(sig, {"s_1": ["a"], "s_2": ["b"]}, {})
    assert not satisfies_all(bad, phis)
    good = build_model(sig, {"s_1": ["a"], "s_2": []}, {})
    assert satisfies_all(good, phis) and omits(good, t)


def test_omission_is_inherited_by_supersets():
    t = build_Tc(LIST, 1)
    bigger = LogicType(LIST, t.block, t.sentences + build_Tc(LIST, 2).sentences)
    for m in (list_ctor_model(), list_saturated_model()):
        if omits(m, t):
            assert omits(m, bigger)
        assert (realizes(m, bigger) is None) or (realizes(m, t) is not None)


def _constant_theory():
    c = Func("c", (), "s")
    sig = Signature(("s",), (c,))
    x = Variable("x", "s")
    phis = [normalize(Forall([x], Eq(Var(x), App(c))))]
    return sig, c, x, phis


def test_isolation_positive_and_negative():
    sig, c, x, phis = _constant_theory()
    pos = search_isolation(sig, phis, LogicType(sig, (x,), (Eq(Var(x), App(c)),)), [], bounds=3)
    w = pos.witness
    assert w is not None and w.gamma == () and len(w.constants) == 1
    assert w.theta[x] == w.constants[0]

    neg = search_isolation(sig, phis, LogicType(sig, (x,), (Neq(Var(x), App(c)),)), [], bounds=3)
    assert neg.witness is None and neg.candidates == 1


def test_isolation_needs_satisfiable_type():
    sig, c, x, phis = _constant_theory()
    t = LogicType(sig, (x,), (Neq(Var(x), Var(x)),))
    pool = [Eq(Var(x), App(c)), Neq(Var(x), App(c))]
    r = search_isolation(sig, [], t, pool, max_gamma=2, bounds=2)
    assert r.witness is None and r.candidates == 4


def test_inf_type_is_locally_omitted_within_bounds():
    sig, phis, t = build_inf_type(3)
    r = search_isolation(sig, phis, t, inf_pool(3), max_d=1, max_gamma=2, bounds=3)
    assert r.witness is None and r.candidates > 0


def test_Tc_matches_constructor_generation_on_small_models():
    from transalg.finmod.search import enumerate_models
    t = build_Tc(LIST, 3)
    seen = 0
    for m in enumerate_models(LIST, {"List": 2, "Elt": 1}):
        seen += 1
        assert bool(is_constructor_based(m)) == omits(m, t)
    assert seen > 0
