"""Semantic forcing properties built from finite model classes."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import ResourceLimit
from ..finmod.model import FiniteModel, satisfies, satisfies_all
from ..kernel import Eq, Func, Label, Signature, Trans, ground_terms, normalize
from .core import Condition, Forcer, ForcingProperty, SearchBounds, sentence_over

OTT, DLS = "ott", "dls"


@dataclass(frozen=True)
class SemanticForcing:
    """A forcing property together with the model class of each condition."""

    prop: ForcingProperty
    mods: Dict[str, Tuple[FiniteModel, ...]]
    describe: Dict[str, str]
    mode: str
    atom_depth: int

    def mod_satisfies(self, p: str, phi) -> bool:
        return all(satisfies(m, phi) for m in self.mods[p])


def ground_atoms(sig: Signature, depth: int) -> List:
    terms = ground_terms(sig, depth)
    out = []
    for s in sig.sorts:
        ts = terms.get(s, [])
        for a in ts:
            for b in ts:
                out.append(Eq(a, b))
        for l in sig.labels:
            for a in ts:
                for b in ts:
                    out.append(Trans(Label(l), a, b))
    return out


def _expansions(m: FiniteModel, sig: Signature, consts: Sequence[Func]):
    pools = [m.carrier(c.result) for c in consts]
    for combo in itertools.product(*pools):
        yield m.expand(sig, dict(zip(consts, combo)))


def build_semantic_forcing(base: Signature, fresh: Sequence[Func], models: Sequence[FiniteModel],
                           pool: Sequence, mode: str = OTT, atom_depth: int = 1,
                           max_conditions: int = 5000) -> SemanticForcing:
    """Conditions are pairs (kappa, Phi') with a nonempty model class.

    ``ott``: kappa is a subset C' of ``fresh`` and the class is every
    expansion of the given models to Sigma[C'] satisfying Phi'.
    ``dls``: kappa is C' with a valuation into the single model, whose
    expansion is the only member of the class.
    """
    if mode not in (OTT, DLS):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == DLS and len(models) != 1:
        raise ValueError("dls mode takes exactly one model")
    pool = [normalize(p) for p in pool]
    kappas = []  # (consts, valuation or None, signature, class)
    for r in range(len(fresh) + 1):
        for consts in itertools.combinations(fresh, r):
            sig = base.with_constants(consts)
            if mode == OTT:
                cls = tuple(e for m in models for e in _expansions(m, sig, consts))
                kappas.append((consts, None, sig, cls))
            else:
                for e in _expansions(models[0], sig, consts):
                    val = tuple((c, e.tables[c][()]) for c in consts)
                    kappas.append((consts, val, sig, (e,)))
    conds: List[Condition] = []
    mods: Dict[str, Tuple[FiniteModel, ...]] = {}
    describe: Dict[str, str] = {}
    meta = []
    for consts, val, sig, cls in kappas:
        local = [phi for phi in pool if sentence_over(sig, phi)]
        atoms = ground_atoms(sig, atom_depth)
        for r in range(len(local) + 1):
            for phis in itertools.combinations(local, r):
                mod = tuple(m for m in cls if satisfies_all(m, phis))
                if not mod:
                    continue
                if len(conds) >= max_conditions:
                    raise ResourceLimit(f"more than {max_conditions} semantic conditions")
                name = f"p{len(conds)}"
                f = frozenset(a for a in atoms if all(satisfies(m, a) for m in mod))
                conds.append(Condition(name, sig, f, frozenset(phis)))
                mods[name] = mod
                cs = ",".join(c.name if val is None else f"{c.name}={v}"
                              for c, v in (zip(consts, [None] * len(consts)) if val is None else val))
                describe[name] = f"{{{cs}}} with {len(phis)} sentence(s)"
                meta.append((frozenset(consts), frozenset(val or ()), frozenset(phis)))
    order = set()
    for i, (c1, v1, g1) in enumerate(meta):
        for j, (c2, v2, g2) in enumerate(meta):
            if i != j and c1 <= c2 and v1 <= v2 and g1 <= g2:
                order.add((conds[i].name, conds[j].name))
    prop = ForcingProperty(tuple(conds), frozenset(order), conds[0].name if conds else None)
    return SemanticForcing(prop, mods, describe, mode, atom_depth)


@dataclass
class SfpRow:
    condition: str
    sentence: object
    holds: bool
    weakly_forced: bool
    diagnosed: bool

    @property
    def agrees(self) -> bool:
        return self.holds == self.weakly_forced


@dataclass
class SfpReport:
    rows: List[SfpRow] = field(default_factory=list)

    @property
    def checked(self) -> List[SfpRow]:
        return [r for r in self.rows if not r.diagnosed]

    @property
    def disagreements(self) -> List[SfpRow]:
        return [r for r in self.rows if not r.agrees]

    @property
    def ok(self) -> bool:
        return all(r.agrees for r in self.checked)


def compare_sfp(sf: SemanticForcing, sentences: Sequence, bounds: Optional[SearchBounds] = None) -> SfpReport:
    """Class satisfaction against weak forcing on every condition and sentence over it.

    Witness searches are bounded by the finite pool of fresh constants, so
    a failed search marks the row as diagnosed.
    """
    bounds = bounds or SearchBounds(term_depth=sf.atom_depth)
    fc = Forcer(sf.prop, bounds, open_witnesses=True)
    report = SfpReport()
    for p in sf.prop.names:
        for phi in sentences:
            phi = normalize(phi)
            if not sentence_over(sf.prop.sig(p), phi):
                continue
            w = fc.weakly_forces(p, phi)
            diag = any(fc.diagnosed(r, phi) for q in sf.prop.up(p) for r in sf.prop.up(q))
            report.rows.append(SfpRow(p, phi, sf.mod_satisfies(p, phi), w, diag))
    return report
