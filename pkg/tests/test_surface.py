import random
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from transalg.errors import CheckError, ParseError, ResolveError, SpecError
from transalg.finmod.model import satisfies
from transalg.fixtures import FIXTURES, fixture_spec
from transalg.gen import random_model, random_sentence, random_signature
from transalg.kernel import (App, Eq, Exists, Func, Label, Not, Or, Seq, Signature, Star, Trans, Union, Var,
                             Variable, normalize)
from transalg.surface import SpecFile, parse_file, parse_sentence, parse_spec, print_spec, show_action, show_sentence

ROOT = Path(__file__).resolve().parent.parent
LIST_SRC = """
sig LIST {
  sorts Elt List
  ops
    empty : -> List [ctor]
    cons : List Elt -> List [ctor]
    add : List List -> List
}
"""


def test_empty_file():
    assert parse_spec("") == SpecFile()
    assert parse_spec("-- only a comment\n") == SpecFile()


def test_ctor_markers():
    sig = parse_spec(LIST_SRC).signatures["LIST"].sig
    assert sorted(f.name for f in sig.ctors) == ["cons", "empty"]
    assert sig.loose_sorts == ("Elt",)


def test_forall_is_sugar():
    sig = parse_spec(LIST_SRC).signatures["LIST"].sig
    phi = parse_sentence(sig, "forall x:List . add(x, empty) = x")
    assert isinstance(phi, Not) and isinstance(phi.body, Exists)
    assert isinstance(phi.body.body, Not)
    assert show_sentence(phi, sig) == "forall x:List . add(x, empty) = x"


@pytest.mark.parametrize("name", FIXTURES)
def test_shipped_fixtures_round_trip(name):
    spec = parse_file(str(ROOT / "fixtures" / f"{name}.ta"))
    assert spec == fixture_spec(name)
    text = print_spec(spec)
    assert parse_spec(text) == spec
    assert print_spec(parse_spec(text)) == text


def test_action_round_trip():
    sig = Signature(("s",), (Func("c", (), "s"),), ("a", "b", "c"))
    a, b, c = Label("a"), Label("b"), Label("c")
    act = Star(Union(Seq(a, b), c))
    assert show_action(act) == "(a ; b | c)*"
    phi = Trans(act, App(sig.funcs[0]), App(sig.funcs[0]))
    assert parse_sentence(sig, show_sentence(phi, sig)) == normalize(phi)
    assert show_action(Seq(a, Union(b, c))) == "a ; (b | c)"


def test_three_condition_forcing_round_trip():
    spec = fixture_spec("forcing")
    prop = spec.forcings["F"].prop
    assert prop.names == ("p0", "p1", "p2")
    again = parse_spec(print_spec(spec)).forcings["F"].prop
    assert again == prop


def _error(src):
    with pytest.raises(SpecError) as info:
        parse_spec(src, "t.ta")
    return info.value


def test_parse_error_location():
    err = _error("sig S {\n  sorts s\n  ops c : -> \n}\n")
    assert isinstance(err, ParseError)
    assert (err.span.file, err.span.line) == ("t.ta", 4)


def test_resolve_errors():
    err = _error(LIST_SRC + "sentences P over LIST {\n  a : add(x, empty) = empty ;\n}\n")
    assert isinstance(err, ResolveError)
    assert (err.span.line, err.span.column) == (10, 11)
    assert "x" in err.message

    # the other side of the equation picks the overload
    ok = parse_spec("sig S {\n  sorts a b\n  ops\n    c : -> a\n    c : -> b\n}\n"
                    "sentences P over S {\n  q : exists x:a . x = c ;\n}\n")
    phi = ok.sentences["P"].sentences[0]
    assert show_sentence(phi, ok.signatures["S"].sig) == "exists x:a . x = (c : a)"

    err = _error("sig S {\n  sorts a b\n  ops\n    c : -> a\n    c : -> b\n}\n"
                 "sentences P over S {\n  q : c = c ;\n}\n")
    assert isinstance(err, ResolveError) and "c" in err.message


def test_check_errors():
    err = _error("sig S {\n  sorts s\n  ops\n    c : -> t\n}\n")
    assert isinstance(err, CheckError) and err.span.line == 1
    err = _error("sig S {\n  sorts s\n  ops\n    c : -> s\n}\n"
                 "model M : S {\n  carrier s = { a b }\n}\n")
    assert isinstance(err, CheckError) and err.span.line == 6


def test_labels_require_same_sort_endpoints():
    src = "sig S {\n  sorts a b\n  ops\n    c : -> a\n    d : -> b\n  labels l\n}\n" \
          "sentences P over S {\n  q : l(c, d) ;\n}\n"
    assert isinstance(_error(src), (ResolveError, CheckError))


# ---------------------------------------------------------------------------
# printing and reparsing random sentences

@settings(max_examples=200)
@given(st.integers(0, 10**9))
def test_random_sentences_round_trip(seed):
    rng = random.Random(seed)
    sig = random_signature(rng)
    phi = normalize(random_sentence(rng, sig, 4))
    text = show_sentence(phi, sig)
    assert parse_sentence(sig, text) == phi


NAMES = ("x", "y", "c0")


def _shadowing_sentence(rng, sig, depth, env):
    if depth == 0 or rng.random() < 0.3:
        s = rng.choice(sig.sorts)
        pool = [Var(v) for v in env if v.sort == s] + [App(f) for f in sig.funcs if f.is_constant and f.result == s]
        if not pool:
            return Or(())
        return Eq(rng.choice(pool), rng.choice(pool))
    k = rng.randrange(3)
    if k == 0:
        return Not(_shadowing_sentence(rng, sig, depth - 1, env))
    if k == 1:
        return Or((_shadowing_sentence(rng, sig, depth - 1, env), _shadowing_sentence(rng, sig, depth - 1, env)))
    v = Variable(rng.choice(NAMES), rng.choice(sig.sorts))
    inner = [w for w in env if w.name != v.name] + [v]
    return Exists((v,), _shadowing_sentence(rng, sig, depth - 1, inner))


@settings(max_examples=200)
@given(st.integers(0, 10**9))
def test_shadowing_round_trip_up_to_renaming(seed):
    rng = random.Random(seed)
    sig = Signature(("s", "t"), (Func("c0", (), "s"), Func("d", (), "t")), ())
    phi = normalize(_shadowing_sentence(rng, sig, 5, []))
    text = show_sentence(phi, sig)
    back = parse_sentence(sig, text)
    assert show_sentence(back, sig) == text
    if "'" not in text:
        assert back == phi
    for _ in range(3):
        m = random_model(rng, sig, 2)
        assert satisfies(m, back) == satisfies(m, phi)


def test_capture_introduces_primes():
    sig = Signature(("s",), (Func("c", (), "s"),), ())
    x0, x1 = Variable("x", "s", 0), Variable("x", "s", 1)
    phi = Exists((x0,), Exists((x1,), Eq(Var(x0), Var(x1))))
    text = show_sentence(phi, sig)
    assert text == "exists x:s . exists x':s . x = x'"
    assert satisfies(random_model(random.Random(1), sig, 2), parse_sentence(sig, text))


def test_variable_named_like_a_constant():
    sig = Signature(("s",), (Func("c", (), "s"),), ())
    c = Variable("c", "s")
    phi = normalize(Exists((c,), Not(Eq(Var(c), App(sig.funcs[0])))))
    text = show_sentence(phi, sig)
    assert text == "exists c:s . c != c()"
    assert parse_sentence(sig, text) == phi


def test_overloaded_symbols_are_annotated():
    sig = Signature(("a", "b"), (Func("c", (), "a"), Func("c", (), "b")), ())
    phi = normalize(Eq(App(sig.funcs[1]), App(sig.funcs[1])))
    text = show_sentence(phi, sig)
    assert text == "(c : b) = (c : b)"
    assert parse_sentence(sig, text) == phi


# ---------------------------------------------------------------------------
# totality on damaged input

SOURCES = [(ROOT / "fixtures" / f"{n}.ta").read_text() for n in FIXTURES]
ALPHABET = "{}()[];:,.=!*|^-> \nabcxyz01_"


@settings(max_examples=300)
@given(st.integers(0, 10**9))
def test_parser_is_total(seed):
    rng = random.Random(seed)
    text = rng.choice(SOURCES)
    chars = list(text)
    for _ in range(rng.randint(1, 4)):
        i = rng.randrange(len(chars) + 1)
        op = rng.randrange(3)
        if op == 0 and i < len(chars):
            del chars[i]
        elif op == 1:
            chars.insert(i, rng.choice(ALPHABET))
        elif i < len(chars):
            chars[i] = rng.choice(ALPHABET)
    try:
        parse_spec("".join(chars), "fuzz.ta")
    except (ParseError, ResolveError, CheckError) as exc:
        assert exc.span is None or exc.span.file == "fuzz.ta"
