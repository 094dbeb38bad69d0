"""Acceptance suite: one test per criterion, each reported as a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py`` and read the "acceptance criteria"
section at the end of the output.
"""
import functools
import random
import subprocess
import sys
from pathlib import Path

import numpy as np

from transalg.classes import CTOR, PLAIN, gamma_sentence, is_constructor_based, semantic_entails
from transalg.finmod.model import build_model, eval_action, satisfies, satisfies_all
from transalg.finmod.search import ModelSearch, enumerate_models
from transalg.fixtures import (FIXTURES, example28_sentences, example28_signature, fixture_spec,
                               inhabited_sentences, list_assoc, list_axioms, list_saturated_model, list_signature,
                               uls_sentences, uls_signature)
from transalg.forcing import (Forcer, SearchBounds, extend_to_generic, generic_forces, generic_model,
                              validate_forcing_property, validate_generic)
from transalg.forcing.core import flat, universe
from transalg.gen import fuzz_satcond, random_forcing_property, random_sentence
from transalg.kernel import (App, Exists, FALSE, Forall, Func, Label, Not, Seq, Signature, Star, TRUE, Trans, Var,
                             Variable, normalize)
from transalg.omitting import build_Tc, realizes
from transalg.surface import parse_file, parse_spec, print_spec

ROOT = Path(__file__).resolve().parent.parent
SEED = 0
CASES = 1000


@functools.lru_cache(maxsize=None)
def fuzz(kind):
    return fuzz_satcond(SEED, CASES, kind, max_size=3, depth=4)


def _fuzz_criterion(c, kind):
    stats = fuzz(kind)
    c.note(f"{stats.agree}/{stats.cases} agree, {stats.empty_carriers} with an empty carrier, "
           f"{stats.with_star} with star")
    assert stats.cases >= CASES
    assert stats.ok, stats.failures[:3]
    assert stats.with_star > 0


def test_satisfaction_condition_for_morphisms(criterion):
    with criterion(1, "satisfaction condition along signature morphisms", 60) as c:
        _fuzz_criterion(c, "morphism")


def test_satisfaction_condition_for_substitutions(criterion):
    with criterion(2, "satisfaction condition along substitutions", 60) as c:
        _fuzz_criterion(c, "subst")


def test_empty_carriers(criterion):
    with criterion(3, "empty-carrier semantics") as c:
        a = Func("a", (), "s")
        sig = Signature(("s", "t"), (a,), ("l",))
        m = build_model(sig, {"s": ["u"], "t": []}, {a: {(): "u"}}, {("l", "t"): []})
        x, y = Variable("x", "t"), Variable("y", "s")
        checks = {
            "exists over empty sort": (Exists((x,), TRUE), False),
            "forall over empty sort": (Forall([x], FALSE), True),
            "no loops on the empty sort": (Forall([x], Not(Exists((), Trans(Label("l"), Var(x), Var(x))))), True),
            "mixed block": (Exists((y, x), TRUE), False),
            "mixed forall": (Forall([y, x], FALSE), True),
            "exists over inhabited sort": (Exists((y,), TRUE), True),
        }
        for name, (phi, expected) in checks.items():
            assert satisfies(m, normalize(phi)) == expected, name
        assert eval_action(m, Star(Label("l")), "t") == frozenset()
        c.note(f"{len(checks)} unit checks")
        total = fuzz("morphism").empty_carriers + fuzz("subst").empty_carriers
        assert fuzz("morphism").empty_carriers > 0
        assert fuzz("morphism").ok and fuzz("subst").ok
        c.note(f"{total} fuzz cases with an empty carrier, all agree")


def matrix_star(pairs, carrier):
    idx = {e: i for i, e in enumerate(carrier)}
    n = len(carrier)
    r = np.zeros((n, n), dtype=np.int64)
    for p, q in pairs:
        r[idx[p], idx[q]] = 1
    acc = np.eye(n, dtype=np.int64)
    power = np.eye(n, dtype=np.int64)
    for _ in range(n):
        power = np.minimum(power @ r, 1)
        acc = np.maximum(acc, power)
    return frozenset((carrier[i], carrier[j]) for i in range(n) for j in range(n) if acc[i, j])


def test_star_algebra(criterion):
    with criterion(4, "star against the matrix-power oracle and its laws") as c:
        rng = random.Random(SEED)
        sig = Signature(("s",), (), ("a",))
        a = Label("a")
        cases = 0
        for n in range(7):
            carrier = [f"e{i}" for i in range(n)]
            for _ in range(150):
                density = rng.random()
                pairs = [(p, q) for p in carrier for q in carrier if rng.random() < density]
                m = build_model(sig, {"s": carrier}, {}, {("a", "s"): pairs})
                star = eval_action(m, Star(a), "s")
                assert star == matrix_star(pairs, carrier)
                assert eval_action(m, a, "s") <= star
                assert eval_action(m, Star(Star(a)), "s") == star
                assert eval_action(m, Seq(Star(a), Star(a)), "s") == star
                cases += 1
        c.note(f"{cases} random relations on carriers of size 0..6")


def test_lists(criterion):
    with criterion(5, "lists: saturated counterexample, no constructor-based one", 300) as c:
        sig = list_signature()
        phis = [p for _, p in list_axioms()]
        b = list_saturated_model()
        assert b.size == 7
        assert satisfies_all(b, phis)
        assert not satisfies(b, list_assoc())
        c.note("7-element model satisfies the axioms and falsifies associativity")
        plain = semantic_entails(sig, phis, list_assoc(), PLAIN, {"List": 6, "Elt": 1})
        assert not plain.holds
        c.note(f"plain search: first counterexample has {plain.counterexample.size} elements")
        ctor = semantic_entails(sig, phis, list_assoc(), CTOR, {"List": 4, "Elt": 1})
        assert ctor.holds
        c.note(f"constructor-based search List<=4, Elt<=1: none ({ctor.nodes} nodes)")


def test_one_element_per_sort(criterion):
    with criterion(6, "one element per sort, k=4, carriers <= 3") as c:
        sig = uls_signature(4)
        gamma = [p for _, p in uls_sentences(4)]
        models = list(enumerate_models(sig, 3, gamma))
        assert models
        for m in models:
            assert satisfies_all(m, gamma)
            for s in sig.sorts:
                assert len(m.carrier(s)) in (0, 1)
        c.note(f"{len(models)} model(s), every inhabited sort has one element")


def test_forbidden_path_lengths(criterion):
    with criterion(7, "forbidden path lengths, k=3", 120) as c:
        k = 3
        sig = example28_signature(k)
        phis = [p for _, p in example28_sentences(k)]
        loose = next(m for m in enumerate_models(sig, k, phis)
                     if not m.carrier("s_1") and not m.carrier("s_2"))
        assert satisfies_all(loose, phis)
        c.note(f"model with empty s_1, s_2 and |s_0| = {len(loose.carrier('s_0'))}")
        inhabited = phis + [p for _, p in inhabited_sentences(sig)]
        none = ModelSearch(sig, k, inhabited, budget=10**8)
        assert next(iter(none.models()), None) is None
        c.note(f"all sorts inhabited: none with every carrier <= {k} ({none.nodes} nodes)")
        bounds = {s: k for s in sig.sorts}
        bounds["s_0"] = k + 1
        one = ModelSearch(sig, bounds, inhabited, min_sizes={"s_0": k + 1}, budget=10**8)
        m = next(iter(one.models()), None)
        assert m is not None and satisfies_all(m, inhabited)
        c.note(f"found one with |s_0| = {k + 1}")


PROPERTIES = 120
POOL = 8


@functools.lru_cache(maxsize=None)
def forcing_cases():
    rng = random.Random(SEED)
    out = []
    for _ in range(PROPERTIES):
        P = random_forcing_property(rng, max_conditions=6, max_terms=12)
        base = P.sig(P.zero)
        pool = tuple(normalize(random_sentence(rng, base, 3)) for _ in range(POOL))
        out.append((P, pool))
    return out


def test_forcing_laws(criterion):
    with criterion(8, "forcing laws on random forcing properties", 60) as c:
        bounds = SearchBounds(term_depth=0)
        pairs = 0
        for P, pool in forcing_cases():
            assert len(P.names) <= 6
            assert all(len(flat(universe(P.sig(p), P.atoms(p), 0))) <= 12 for p in P.names)
            assert validate_forcing_property(P, bounds).ok
            fc = Forcer(P, bounds)
            for p in P.names:
                for phi in pool:
                    pairs += 1
                    yes, no = fc.forces(p, phi), fc.forces(p, Not(phi))
                    assert not (yes and no)
                    if yes:
                        assert all(fc.forces(q, phi) for q in P.up(p))
                        assert fc.forces(p, Not(Not(phi)))
                        assert fc.weakly_forces(p, phi)
                    dense = all(any(fc.forces(r, phi) for r in P.up(q)) for q in P.up(p))
                    assert fc.forces(p, Not(Not(phi))) == dense
        c.note(f"{len(forcing_cases())} properties, {pairs} condition/sentence pairs")


def test_generic_model_adequacy(criterion):
    with criterion(9, "generic models satisfy exactly what the ideal forces", 60) as c:
        bounds = SearchBounds(term_depth=0)
        decided = 0
        for P, pool in forcing_cases():
            fc = Forcer(P, bounds)
            G = extend_to_generic(P, P.zero, pool, forcer=fc)
            assert validate_generic(P, G.members, pool, forcer=fc).ok
            m = generic_model(P, G, bounds)
            for s, elems in m.elements.items():
                assert all(isinstance(t, App) for t in elems)
            for d in G.decided():
                decided += 1
                assert m.satisfies(d.sentence) == generic_forces(P, G, d.sentence, fc)
                assert m.satisfies(d.sentence) == d.positive
        c.note(f"{len(forcing_cases())} generic ideals, {decided} decided sentences")


def test_gamma_semantics(criterion):
    with criterion(10, "at-most-n sentences, carriers <= 4, n <= 4") as c:
        f = Func("f", ("s",), "s")
        sig = Signature(("s",), (f,))
        checked = 0
        for m in enumerate_models(sig, 4):
            size = len(m.carrier("s"))
            for n in range(5):
                assert satisfies(m, gamma_sentence("s", n)) == (size <= n)
                checked += 1
        c.note(f"{checked} model/n pairs")


def test_Tc_correspondence(criterion):
    with criterion(11, "constructor-based iff the constructor type is omitted", 300) as c:
        sig = list_signature()
        t = build_Tc(sig, 3)
        ctors = sig.ordered_ctors()
        # both sides only read the constructor tables, so verdicts are shared per reduct
        seen = {}
        models = based = spot = 0
        for m in enumerate_models(sig, {"List": 3, "Elt": 1}, budget=10**8):
            models += 1
            key = (tuple(m.carriers.items()), tuple(tuple(sorted(m.tables[f].items())) for f in ctors))
            hit = seen.get(key)
            if hit is None or models % 997 == 0:
                cb = bool(is_constructor_based(m))
                pair = (cb, realizes(m, t) is None)
                assert pair[0] == pair[1]
                assert hit is None or hit == pair
                spot += hit is not None
                seen[key] = hit = pair
            based += hit[0]
        c.note(f"{models} models, {based} constructor-based, {len(seen)} constructor reducts, "
               f"{spot} cache spot checks")


CLI_RUNS = [
    ["fuzz-satcond", "--cases", "100", "--seed", "5"],
    ["entails", "fixtures/list.ta", "--phi", "PHI", "--goal", "GOAL", "--bound", "List=6,Elt=1"],
    ["generic-model", "fixtures/forcing.ta", "--forcing", "F", "--pool", "POOL"],
    ["isolate", "fixtures/inf.ta", "--phi", "PHI", "--type", "T", "--pool", "POOL", "--bound", "3"],
    ["check", "fixtures/list.ta", "--format", "human"],
]


def test_round_trip_and_determinism(criterion):
    with criterion(12, "print/parse round trip and CLI determinism", 120) as c:
        for name in FIXTURES:
            spec = parse_file(str(ROOT / "fixtures" / f"{name}.ta"))
            assert spec == fixture_spec(name)
            text = print_spec(spec)
            assert parse_spec(text) == spec
            assert print_spec(parse_spec(text)) == text
        c.note(f"{len(FIXTURES)} fixtures round-trip")
        for argv in CLI_RUNS:
            outs = [subprocess.run([sys.executable, "-m", "transalg.cli", *argv], capture_output=True,
                                   cwd=ROOT, check=False) for _ in range(2)]
            assert outs[0].stdout and outs[0].stdout == outs[1].stdout, argv
            assert outs[0].returncode == outs[1].returncode
        c.note(f"{len(CLI_RUNS)} CLI commands byte-identical across runs")


if __name__ == "__main__":
    import pytest
    sys.exit(pytest.main([__file__, "-q"]))
