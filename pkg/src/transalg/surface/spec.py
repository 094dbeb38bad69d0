"""Declarations of a ``.ta`` file."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union as U

from ..errors import SourceSpan
from ..finmod.model import FiniteModel
from ..forcing.core import ForcingProperty
from ..institution import SignatureMorphism, Substitution
from ..kernel import Signature, Variable
from ..omitting import LogicType


def _span():
    return field(default=None, compare=False, repr=False)


@dataclass
class SigDecl:
    name: str
    sig: Signature
    span: Optional[SourceSpan] = _span()


@dataclass
class ModelDecl:
    name: str
    sig_name: str
    model: FiniteModel
    span: Optional[SourceSpan] = _span()


@dataclass
class SentencesDecl:
    name: str
    sig_name: str
    items: Tuple[Tuple[str, object], ...]
    span: Optional[SourceSpan] = _span()

    @property
    def sentences(self) -> List:
        return [phi for _, phi in self.items]

    def get(self, item: str):
        for n, phi in self.items:
            if n == item:
                return phi
        raise KeyError(item)


@dataclass
class TypeDecl:
    name: str
    sig_name: str
    ltype: LogicType
    names: Tuple[str, ...] = ()
    span: Optional[SourceSpan] = _span()


@dataclass
class MorphismDecl:
    name: str
    source: str
    target: str
    morphism: SignatureMorphism
    span: Optional[SourceSpan] = _span()


@dataclass
class SubstDecl:
    name: str
    sig_name: str
    subst: Substitution
    span: Optional[SourceSpan] = _span()


@dataclass
class ForcingDecl:
    name: str
    sig_name: str
    prop: ForcingProperty
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SetRef:
    """Reference to a whole sentence list, or to one named item of it."""

    name: str
    item: Optional[str] = None


SetElem = U[SetRef, object]


@dataclass
class StepDecl:
    name: str
    lhs: Tuple[SetElem, ...]
    rhs: Tuple[SetElem, ...]
    rule: str
    premises: Tuple[str, ...] = ()
    along: Optional[str] = None
    var: Optional[Variable] = None
    depth: int = 0
    caps: Tuple[Tuple[str, int], ...] = ()
    bounds: Tuple[Tuple[str, int], ...] = ()
    flavor: Optional[str] = None
    prefix: int = 0
    span: Optional[SourceSpan] = _span()


@dataclass
class ProofDecl:
    name: str
    sig_name: str
    steps: Tuple[StepDecl, ...]
    span: Optional[SourceSpan] = _span()


@dataclass
class QueryDecl:
    name: str
    text: str
    span: Optional[SourceSpan] = _span()


Decl = U[SigDecl, ModelDecl, SentencesDecl, TypeDecl, MorphismDecl, SubstDecl, ForcingDecl, ProofDecl, QueryDecl]

CATEGORY = {
    SigDecl: "sig", ModelDecl: "model", SentencesDecl: "sentences", TypeDecl: "type",
    MorphismDecl: "morphism", SubstDecl: "subst", ForcingDecl: "forcing", ProofDecl: "proof", QueryDecl: "query",
}


@dataclass
class SpecFile:
    decls: List[Decl] = field(default_factory=list)
    file: str = field(default="<input>", compare=False)

    def _cat(self, kind: str) -> Dict[str, Decl]:
        return {d.name: d for d in self.decls if CATEGORY[type(d)] == kind}

    @property
    def signatures(self) -> Dict[str, SigDecl]:
        return self._cat("sig")

    @property
    def models(self) -> Dict[str, ModelDecl]:
        return self._cat("model")

    @property
    def sentences(self) -> Dict[str, SentencesDecl]:
        return self._cat("sentences")

    @property
    def types(self) -> Dict[str, TypeDecl]:
        return self._cat("type")

    @property
    def morphisms(self) -> Dict[str, MorphismDecl]:
        return self._cat("morphism")

    @property
    def substs(self) -> Dict[str, SubstDecl]:
        return self._cat("subst")

    @property
    def forcings(self) -> Dict[str, ForcingDecl]:
        return self._cat("forcing")

    @property
    def proofs(self) -> Dict[str, ProofDecl]:
        return self._cat("proof")

    @property
    def queries(self) -> Dict[str, QueryDecl]:
        return self._cat("query")

    def signature(self, name: str) -> Signature:
        return self.signatures[name].sig

    def lookup(self, kind: str, name: str) -> Decl:
        table = self._cat(kind)
        if name not in table:
            from ..errors import ResolveError
            known = ", ".join(table) or "none"
            raise ResolveError(f"no {kind} named {name!r} (known: {known})")
        return table[name]
