import random

import pytest
from hypothesis import given, settings, strategies as st

from transalg.errors import DirectednessFailure, NotComparable
from transalg.finmod.model import build_model
from transalg.forcing import (DLS, OTT, Condition, Forcer, ForcingProperty, SearchBounds, build_semantic_forcing,
                              compare_sfp, congruence_closure, distance, extend_to_generic, forces, generic_forces,
                              generic_model, require_generic, validate_forcing_property, validate_generic,
                              weakly_forces)
from transalg.gen import random_forcing_property, random_sentence
from transalg.kernel import (App, Eq, Exists, Func, Label, Not, Signature, Star, Trans, TRUE, Var, Variable,
                             ground_terms, normalize)

C, D, E = (Func(n, (), "s") for n in "cde")
c, d, e = App(C), App(D), App(E)
F = Func("f", ("s",), "s")
LAM = Label("lam")


def sig(*consts, funcs=()):
    return Signature(("s",), tuple(consts) + tuple(funcs), ("lam",))


def lam(a, b):
    return Trans(LAM, a, b)


def chain(*steps):
    """Linear poset p0 <= p1 <= ... from (signature, atoms, gamma) triples."""
    conds = tuple(Condition(f"p{i}", s, frozenset(a), frozenset(g)) for i, (s, a, g) in enumerate(steps))
    order = frozenset((f"p{i}", f"p{i + 1}") for i in range(len(steps) - 1))
    return ForcingProperty(conds, order, "p0")


def diamond(top: bool, mid_atoms):
    s = sig(C, D)
    conds = [Condition("z", s), Condition("a", s, frozenset(mid_atoms)), Condition("b", s, frozenset(mid_atoms))]
    order = {("z", "a"), ("z", "b")}
    if top:
        conds.append(Condition("t", s, frozenset(mid_atoms)))
        order |= {("a", "t"), ("b", "t")}
    return ForcingProperty(tuple(conds), frozenset(order), "z")


def test_validation_examples():
    assert validate_forcing_property(chain((sig(), (), ()))).ok
    shrinking = chain((sig(C, D), [lam(c, d)], ()), (sig(C, D), [], ()))
    assert any("monotone" in v.message for v in validate_forcing_property(shrinking))
    unhoused = chain((sig(C, D, E), [Eq(c, d), Eq(d, e)], ()))
    report = validate_forcing_property(unhoused)
    assert not report.ok
    assert any("c = e" in v.message or "e = c" in v.message for v in report)


def test_forcing_examples():
    P = chain((sig(C, D), [Eq(c, d)], ()))
    assert forces(P, "p0", Eq(c, d))

    P = chain((sig(C, D, E), [lam(c, e), lam(e, d)], ()))
    assert forces(P, "p0", Trans(Star(LAM), c, d))
    assert not forces(P, "p0", lam(c, d))

    P = chain((sig(C, D), [], ()), (sig(C, D), [lam(c, d)], ()))
    assert not forces(P, "p0", Not(lam(c, d)))
    assert not forces(P, "p0", lam(c, d))
    assert forces(P, "p1", lam(c, d))


def test_star_zero_power_is_equality():
    P = chain((sig(C, D), [Eq(c, d)], ()))
    assert forces(P, "p0", Trans(Star(LAM), c, d))
    assert forces(P, "p0", Trans(Star(LAM), c, c))


def test_distance():
    s0 = sig(C)
    s1 = sig(C, D)
    s2 = sig(C, D, E)
    P = chain((s0, (), ()), (s1, (), (TRUE,)), (s2, (), (TRUE, Exists((Variable("x", "s"),), TRUE))))
    assert distance(P, "p1", "p1") == 0
    assert distance(P, "p0", "p1") == 2
    assert distance(P, "p0", "p2") == distance(P, "p0", "p1") + distance(P, "p1", "p2")
    with pytest.raises(NotComparable):
        distance(P, "p2", "p0")


def test_weak_forcing_examples():
    P = chain((sig(C, D), [lam(c, d)], ()))
    assert forces(P, "p0", lam(c, d)) and weakly_forces(P, "p0", lam(c, d))

    s = sig(C, D)
    conds = (Condition("z", s), Condition("a", s, frozenset({lam(c, d)})), Condition("b", s),
             Condition("t", s, frozenset({lam(c, d)})))
    P = ForcingProperty(conds, frozenset({("z", "a"), ("z", "b"), ("a", "t"), ("b", "t")}), "z")
    assert validate_forcing_property(P).ok
    assert not forces(P, "z", lam(c, d))
    assert weakly_forces(P, "z", lam(c, d))

    P = chain((sig(C, D), [], ()), (sig(C, D), [], ()))
    assert not weakly_forces(P, "p0", lam(c, d))


def test_generic_extension_examples():
    P = chain((sig(C, D), [lam(c, d)], ()))
    G = extend_to_generic(P, "p0", [lam(c, d), Eq(c, d)])
    assert G.members == ("p0",)
    assert [x.positive for x in G.decided()] == [True, False]

    s = sig(C, D, E)
    atoms = [lam(c, d), lam(d, e), lam(c, e)]
    P = chain((s, [], ()), (s, atoms[:1], ()), (s, atoms[:2], ()), (s, atoms, ()))
    assert validate_forcing_property(P).ok
    G = extend_to_generic(P, "p0", atoms)
    assert G.members == ("p0", "p1", "p2", "p3")
    assert all(x.positive for x in G.decided())
    assert validate_generic(P, G.members, atoms).ok


def test_diamond_without_top_is_not_directed():
    P = diamond(False, [lam(c, d)])
    with pytest.raises(DirectednessFailure):
        require_generic(P, ["z", "a", "b"], [lam(c, d)])
    G = extend_to_generic(P, "z", [lam(c, d)])
    assert G.members == ("z", "a")
    require_generic(P, G.members, [lam(c, d)])


def test_generic_model_examples():
    P = chain((sig(C, D), [Eq(c, d)], ()))
    G = extend_to_generic(P, "p0", [])
    m = generic_model(P, G)
    assert m.size() == {"s": 1} and m.satisfies(Eq(c, d))

    s = sig(C, D, E, funcs=(F,))
    fc_ = App(F, (c,))
    P = chain((s, [Eq(fc_, d), Eq(c, e), Eq(App(F, (e,)), d)], ()))
    m = generic_model(P, extend_to_generic(P, "p0", []))
    assert m.equal(App(F, (e,)), d)

    P = chain((sig(C, D, E), [lam(c, d), lam(d, e)], ()))
    m = generic_model(P, extend_to_generic(P, "p0", []))
    assert m.satisfies(Trans(Star(LAM), c, e))
    assert not m.satisfies(lam(c, e))


def test_congruence_closure_examples():
    s = sig(C, D, funcs=(F,))
    u = [t for ts in ground_terms(s, 2).values() for t in ts]
    cc = congruence_closure([], u)
    assert all(len(k) == 1 for k in cc.classes())

    cc = congruence_closure([(c, d)], u)
    assert cc.query(App(F, (c,)), App(F, (d,)))
    assert not cc.query(c, App(F, (c,)))

    cc = congruence_closure([(App(F, (c,)), c)], u)
    assert cc.query(c, App(F, (App(F, (c,)),)))
    # outside the universe, answered on demand
    assert cc.query(c, App(F, (App(F, (App(F, (c,)),)),)))


def _two_point_model():
    s = Signature(("s",), (C,), ("lam",))
    return s, build_model(s, {"s": ["u", "v"]}, {C: {(): "u"}}, {("lam", "s"): [("u", "v")]})


def test_semantic_forcing_dls_enumeration():
    base, m = _two_point_model()
    k = Func("k", (), "s")
    sf = build_semantic_forcing(base, [k], [m], [], DLS)
    assert len(sf.prop.names) == 3
    vals = sorted(sf.describe[p] for p in sf.prop.names)
    assert vals == ["{k=u} with 0 sentence(s)", "{k=v} with 0 sentence(s)", "{} with 0 sentence(s)"]


def test_semantic_forcing_ott_excludes_empty_classes():
    base, m = _two_point_model()
    k = Func("k", (), "s")
    bad = normalize(Not(Eq(App(k), App(k))))
    good = lam(App(C), App(k))
    sf = build_semantic_forcing(base, [k], [m], [bad, good], OTT)
    for p in sf.prop.names:
        assert bad not in sf.prop[p].gamma
        assert sf.mods[p]
    zero = sf.prop.zero
    assert sf.prop.atoms(zero) == frozenset({Eq(App(C), App(C))})
    assert validate_forcing_property(sf.prop).ok


def test_semantic_forcing_agrees_with_truth_at_small_scale():
    base, m = _two_point_model()
    k = Func("k", (), "s")
    x = Variable("x", "s")
    pool = [lam(App(C), App(k)), Eq(App(k), App(C)), Exists((x,), lam(App(C), Var(x)))]
    sf = build_semantic_forcing(base, [k], [m], pool[:2], DLS)
    report = compare_sfp(sf, pool)
    assert report.ok
    assert len(report.checked) == 10
    # the existential needs a name for v, and k=u uses up the only fresh constant
    assert len(report.disagreements) == 3
    assert all(r.diagnosed and r.holds and not r.weakly_forced for r in report.disagreements)


def _laws(P, pool):
    fc = Forcer(P, SearchBounds(term_depth=0))
    for p in P.names:
        for phi in pool:
            phi = normalize(phi)
            yes, no = fc.forces(p, phi), fc.forces(p, Not(phi))
            assert not (yes and no)
            if yes:
                assert all(fc.forces(q, phi) for q in P.up(p))
                assert fc.forces(p, Not(Not(phi)))
                assert fc.weakly_forces(p, phi)
            assert fc.forces(p, Not(Not(Not(phi)))) == no
            assert fc.forces(p, Not(Not(phi))) == all(any(fc.forces(r, phi) for r in P.up(q)) for q in P.up(p))


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_forcing_laws_on_random_properties(seed):
    rng = random.Random(seed)
    P = random_forcing_property(rng)
    assert validate_forcing_property(P, SearchBounds(term_depth=0)).ok
    base = P.sig(P.zero)
    pool = [random_sentence(rng, base, 3) for _ in range(6)]
    _laws(P, pool)

    fc = Forcer(P, SearchBounds(term_depth=0))
    G = extend_to_generic(P, P.zero, pool, forcer=fc)
    assert validate_generic(P, G.members, pool, forcer=fc).ok
    m = generic_model(P, G, SearchBounds(term_depth=0))
    for x in G.decided():
        assert m.satisfies(x.sentence) == generic_forces(P, G, x.sentence, fc)
