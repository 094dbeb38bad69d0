import random

import numpy as np
from hypothesis import given, strategies as st

from transalg.finmod.model import (build_model, eval_action, eval_term, satisfies, validate_model)
from transalg.finmod.search import enumerate_models
from transalg.fixtures import (ADD, EMPTY, example28_signature, example28_sentences, inhabited_sentences,
                               list_axioms, list_saturated_model, list_signature, uls_model, uls_sentences)
from transalg.gen import random_model, random_sentence, random_signature
from transalg.kernel import App, Exists, FALSE, Forall, Func, Label, Not, Seq, Signature, Star, TRUE, Var, Variable

ONE = Signature(("s",), (), ("a", "b"))


def rel_model(carrier, a=(), b=()):
    return build_model(ONE, {"s": carrier}, {}, {("a", "s"): a, ("b", "s"): b})


def test_uls_model_is_valid_and_satisfies_gamma():
    m = uls_model(4)
    assert validate_model(m).ok
    for _, phi in uls_sentences(4):
        assert satisfies(m, phi)
    c3 = Func("c_3", (), "s_3")
    assert eval_term(m, {}, App(c3)) == m.carrier("s_3")[0]


def test_missing_row_and_empty_constant_sort():
    sig = Signature(("s",), (Func("f", ("s",), "s"), Func("c", (), "s")))
    f, c = sig.funcs
    partial = build_model(sig, {"s": ["a", "b"]}, {f: {("a",): "a"}, c: {(): "a"}})
    assert not validate_model(partial).ok
    empty = build_model(sig, {"s": []}, {f: {}, c: {}})
    assert not validate_model(empty).ok


def test_eval_term_examples():
    m = list_saturated_model()
    assert eval_term(m, {}, App(ADD, (App(EMPTY), App(EMPTY)))) == "E0"
    x = Variable("x", "List")
    assert eval_term(m, {x: "E1"}, Var(x)) == "E1"


def test_action_examples():
    m = rel_model(["a", "b"])
    assert eval_action(m, Star(Label("a")), "s") == {("a", "a"), ("b", "b")}
    m = rel_model(["c", "x", "d"], [("c", "x")], [("x", "d")])
    assert eval_action(m, Seq(Label("a"), Label("b")), "s") == {("c", "d")}
    m = rel_model(["c", "d"], [("c", "d")])
    assert eval_action(m, Star(Label("a")), "s") == {("c", "c"), ("d", "d"), ("c", "d")}


def test_empty_carrier_quantifiers():
    m = rel_model([])
    z = Variable("z", "s")
    assert not satisfies(m, Exists((z,), TRUE))
    assert satisfies(m, Forall([z], FALSE))


def test_saturated_list_model():
    m = list_saturated_model()
    assert validate_model(m).ok
    assert m.size == 7
    for _, phi in list_axioms():
        assert satisfies(m, phi)


def test_enumerate_small_list_models():
    sig = list_signature()
    models = list(enumerate_models(sig, {"Elt": 0, "List": 1}, [p for _, p in list_axioms()]))
    assert len(models) == 1
    assert models[0].carrier("Elt") == () and len(models[0].carrier("List")) == 1


def test_enumerate_all_zero_bounds():
    sig = Signature(("s", "t"), (), ("l",))
    models = list(enumerate_models(sig, 0))
    assert len(models) == 1 and models[0].size == 0


def test_example28_inhabited_has_no_small_model():
    sig = example28_signature(3)
    cons = [p for _, p in example28_sentences(3)] + [p for _, p in inhabited_sentences(sig)]
    assert list(enumerate_models(sig, {"s_0": 3, "s_1": 1, "s_2": 1}, cons)) == []


def matrix_star(pairs, carrier):
    idx = {a: i for i, a in enumerate(carrier)}
    n = len(carrier)
    r = np.zeros((n, n), dtype=bool)
    for a, b in pairs:
        r[idx[a], idx[b]] = True
    acc = np.eye(n, dtype=bool)
    power = np.eye(n, dtype=bool)
    for _ in range(n):
        power = (power.astype(int) @ r.astype(int)) > 0
        acc |= power
    return {(carrier[i], carrier[j]) for i in range(n) for j in range(n) if acc[i, j]}


@given(st.integers(0, 6), st.data())
def test_star_matches_matrix_oracle_and_laws(n, data):
    carrier = [f"e{i}" for i in range(n)]
    pairs = data.draw(st.sets(st.tuples(st.sampled_from(carrier), st.sampled_from(carrier))) if n else st.just(set()))
    m = rel_model(carrier, sorted(pairs))
    a = Label("a")
    star = eval_action(m, Star(a), "s")
    assert star == matrix_star(pairs, carrier)
    assert eval_action(m, a, "s") <= star
    assert eval_action(m, Star(Star(a)), "s") == star
    assert eval_action(m, Seq(Star(a), Star(a)), "s") == star


@given(st.integers(0, 5), st.data())
def test_star_is_monotone(n, data):
    carrier = [f"e{i}" for i in range(n)]
    pair = st.tuples(st.sampled_from(carrier), st.sampled_from(carrier)) if n else st.nothing()
    small = data.draw(st.sets(pair))
    big = small | data.draw(st.sets(pair))
    m = rel_model(carrier, sorted(small), sorted(big))
    assert eval_action(m, Star(Label("a")), "s") <= eval_action(m, Star(Label("b")), "s")


@given(st.integers(0, 10_000))
def test_quantifier_duality(seed):
    rng = random.Random(seed)
    sig = random_signature(rng)
    m = random_model(rng, sig)
    phi = random_sentence(rng, sig, 3)
    block = (Variable("q1", sig.sorts[0]),)
    assert satisfies(m, Forall(block, phi)) == (not satisfies(m, Exists(block, Not(phi))))
