import random

from hypothesis import given, strategies as st

from transalg.finmod.model import satisfies, validate_model
from transalg.fixtures import ADD, EMPTY, list_saturated_model, list_signature
from transalg.gen import random_model, random_morphism, random_sentence, random_signature
from transalg.institution import (CTOR, FINITE, Substitution, apply_substitution, check_morphism, compose_morphisms,
                                  identity, identity_substitution, inclusion, make_morphism,
                                  reduct_along_substitution, reduct_model, translate_sentence)
from transalg.kernel import (App, Eq, Exists, Func, Label, Signature, Star, TRUE, Trans, Var, Variable, normalize)

LIST = list_signature()


def test_identity_is_a_ctor_morphism():
    assert check_morphism(identity(LIST), CTOR).ok


def test_new_target_constructor_is_not_reflected():
    nil = Func("nil", (), "List")
    target = Signature(LIST.sorts, LIST.funcs + (nil,), (), LIST.ctors | {nil})
    report = check_morphism(inclusion(LIST, target), CTOR)
    assert len(report) == 1
    assert "nil" in str(report)


def test_finite_marking_must_be_preserved():
    src = Signature(("s",), (), (), frozenset(), frozenset({"s"}))
    tgt = Signature(("s",))
    assert not check_morphism(make_morphism(src, tgt), FINITE).ok


def test_translation_examples():
    phi = normalize(Exists((Variable("x", "List"),), Eq(Var(Variable("x", "List")), App(EMPTY))))
    assert translate_sentence(identity(LIST), phi) == phi

    src = Signature(("s",), (Func("c", (), "s"), Func("d", (), "s")), ("lam",))
    tgt = Signature(("u",), (Func("c", (), "u"), Func("d", (), "u")), ("mu",))
    chi = make_morphism(src, tgt, {"s": "u"}, {}, {"lam": "mu"})
    ex = Exists((Variable("x", "s"),), TRUE)
    assert translate_sentence(chi, ex) == Exists((Variable("x", "u"),), TRUE)
    c, d = src.funcs
    star = Trans(Star(Label("lam")), App(c), App(d))
    assert translate_sentence(chi, star) == Trans(Star(Label("mu")), App(tgt.funcs[0]), App(tgt.funcs[1]))


def test_reduct_examples():
    m = list_saturated_model()
    assert reduct_model(identity(LIST), m) == m
    k = Func("k", (), "List")
    big = LIST.with_constants([k])
    expanded = m.expand(big, {k: "N1"})
    assert reduct_model(inclusion(LIST, big), expanded) == m

    src = Signature(("a", "b"), (Func("f", ("a",), "b"),))
    tgt = Signature(("u",), (Func("g", ("u",), "u"),))
    chi = make_morphism(src, tgt, {"a": "u", "b": "u"}, {"f": "g"})
    mt = random_model(random.Random(3), tgt, 3, 0.0)
    red = reduct_model(chi, mt)
    assert red.carrier("a") == red.carrier("b") == mt.carrier("u")
    assert validate_model(red).ok


def test_substitution_examples():
    x = Func("x", (), "List")
    phi = Eq(App(ADD, (App(x), App(EMPTY))), App(x))
    ident = identity_substitution(LIST, [x])
    assert apply_substitution(ident, phi) == phi
    th = Substitution(LIST, (x,), (), {x: App(EMPTY)})
    assert apply_substitution(th, phi) == Eq(App(ADD, (App(EMPTY), App(EMPTY))), App(EMPTY))

    c = Func("c", (), "List")
    th = Substitution(LIST, (c,), (), {c: App(ADD, (App(EMPTY), App(EMPTY)))})
    red = reduct_along_substitution(th, list_saturated_model())
    assert red.tables[c][()] == "E0"


def test_grounding_substitution_to_no_constants():
    c = Func("c", (), "List")
    th = Substitution(LIST, (c,), (), {c: App(EMPTY)})
    assert th.target_signature == LIST
    m = list_saturated_model()
    phi = Exists((Variable("e", "Elt"),), Eq(App(c), App(EMPTY)))
    assert satisfies(reduct_along_substitution(th, m), phi) == satisfies(m, apply_substitution(th, phi))


@given(st.integers(0, 100_000))
def test_functoriality(seed):
    rng = random.Random(seed)
    src = random_signature(rng)
    chi1 = random_morphism(rng, src)
    chi2 = random_morphism(rng, chi1.target)
    both = compose_morphisms(chi1, chi2)
    phi = random_sentence(rng, src, 3)
    assert normalize(translate_sentence(both, phi)) == \
        normalize(translate_sentence(chi2, translate_sentence(chi1, phi)))
    m = random_model(rng, chi2.target)
    assert reduct_model(both, m) == reduct_model(chi1, reduct_model(chi2, m))
