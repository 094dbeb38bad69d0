"""Parser for the ``.ta`` specification language."""
from __future__ import annotations

import itertools
import json
from typing import Dict, List, Optional, Sequence, Tuple

import lark
from lark import Lark, Token, Tree

from ..errors import (AmbiguousSymbol, CheckError, ParseError, ResolveError, SortError, SourceSpan,
                      TAError, UnboundVariable, ValidationReport)
from ..finmod.model import FiniteModel, validate_model
from ..forcing.core import Condition, ForcingProperty
from ..institution import Substitution, check_morphism, check_substitution, make_morphism
from ..kernel import (And, App, Eq, Exists, FALSE, Forall, Func, Implies, Label, Neq, Not, Or, Seq, Signature,
                      Star, TRUE, Trans, Union, Var, Variable, check_sentence, check_signature,
                      is_atomic, normalize, power)
from ..omitting import LogicType
from .spec import (ForcingDecl, ModelDecl, MorphismDecl, ProofDecl, QueryDecl, SentencesDecl, SetRef, SigDecl,
                   SpecFile, StepDecl, SubstDecl, TypeDecl)

GRAMMAR = r"""
start: decl*

?decl: sigdecl | modeldecl | sentdecl | typedecl | morphdecl | substdecl | forcingdecl | proofdecl | querydecl

sigdecl: "sig" NAME "{" sigitem* "}"
sigitem: "sorts" NAME*              -> sorts_item
       | "ops" opdecl*              -> ops_item
       | "labels" NAME*             -> labels_item
       | "finite" NAME*             -> finite_item
opdecl: NAME ":" NAME* "->" NAME ctormark?
ctormark: "[" "ctor" "]"

modeldecl: "model" NAME ":" NAME "{" mitem* "}"
mitem: "carrier" NAME "=" "{" NAME* "}"                                 -> carrier_item
     | "op" NAME rank? ("(" [NAME ("," NAME)*] ")")? "=" NAME          -> row_item
     | "label" NAME ["on" NAME] ":" "(" NAME "," NAME ")"              -> pair_item
rank: "[" NAME* "->" NAME "]"

sentdecl: "sentences" NAME "over" NAME "{" items "}"
typedecl: "type" NAME "over" NAME "[" [vdecl ("," vdecl)*] "]" "{" items "}"
items: [item (";" item)* ";"?]
item: NAME ":" sentence

morphdecl: "morphism" NAME ":" NAME "->" NAME "{" mapitem* "}"
mapitem: "sort" NAME "->" NAME               -> sort_map
       | "op" NAME rank? "->" NAME            -> op_map
       | "label" NAME "->" NAME               -> label_map

substdecl: "subst" NAME ":" cset "->" cset "over" NAME "{" [sitem (";" sitem)* ";"?] "}"
cset: "{" [vdecl ("," vdecl)*] "}"
sitem: NAME "->" term

forcingdecl: "forcing" NAME "over" NAME "{" fitem* "}"
fitem: "condition" NAME "{" citem* "}"        -> cond_item
     | "order" [opair ("," opair)*]            -> order_item
     | "zero" NAME                             -> zero_item
opair: NAME "<=" NAME
citem: "consts" cset                          -> consts_item
     | "atoms" "{" slist "}"                  -> atoms_item
     | "gamma" "{" slist "}"                  -> gamma_item
slist: [sentence (";" sentence)* ";"?]

proofdecl: "proof" NAME "over" NAME "{" step* "}"
step: "step" NAME ":" sset "|-" sset "by" rule
sset: "{" [selem ("," selem)*] "}"
selem: NAME                                   -> sref
     | NAME "." NAME                          -> sref_item
     | "(" sentence ")"                       -> sinline
rule: "mono"                                  -> r_mono
    | "trans" NAME NAME                       -> r_trans
    | "union" NAME*                           -> r_union
    | "translate" NAME "along" NAME           -> r_translate
    | "cb" "on" vdecl "depth" INT ropt*       -> r_cb
    | "fn" "caps" kvlist ropt*                -> r_fn
ropt: "bound" kvlist                          -> o_bound
    | "flavor" NAME                           -> o_flavor
    | "prefix" INT                            -> o_prefix
kvlist: kv ("," kv)*
kv: NAME "=" INT

querydecl: "query" NAME ESCAPED_STRING

?sentence: imp
?imp: unary
    | unary "=>" imp                          -> implies
?unary: "not" unary                           -> neg
      | "exists" vblock "." sentence          -> exists
      | "forall" vblock "." sentence          -> forall
      | "or" "{" [sentence ("," sentence)*] "}"   -> disj
      | "and" "{" [sentence ("," sentence)*] "}"  -> conj
      | "true"                                -> true
      | "false"                               -> false
      | "(" sentence ")"
      | atom
atom: term "=" term                           -> eq
    | term "!=" term                          -> neq
    | term                                    -> label_atom
    | "[" action "]" "(" term "," term ")"    -> act_atom
    | NAME "*" "(" term "," term ")"          -> star_atom
    | NAME "^" INT "(" term "," term ")"      -> pow_atom
vblock: vdecl ("," vdecl)*
vdecl: NAME ":" NAME

term: NAME                                    -> name
    | NAME "(" [term ("," term)*] ")"         -> call
    | "(" term ":" NAME ")"                   -> annot

?action: aseq
       | action "|" aseq                      -> a_union
?aseq: apost
     | aseq ";" apost                         -> a_seq
?apost: aprim
      | apost "*"                             -> a_star
      | aprim "^" INT                         -> a_pow
?aprim: NAME                                  -> a_label
      | "(" action ")"

NAME: /[A-Za-z_][A-Za-z0-9_']*/
COMMENT: /--[^\n]*/
%import common.INT
%import common.ESCAPED_STRING
%import common.WS
%ignore WS
%ignore COMMENT
"""

_PARSER = Lark(GRAMMAR, parser="lalr", propagate_positions=True, maybe_placeholders=True)


def _span(node, file: str) -> Optional[SourceSpan]:
    meta = getattr(node, "meta", None)
    if isinstance(node, Token):
        return SourceSpan(file, node.line, node.column, node.end_line or node.line, node.end_column or node.column)
    if meta is None or getattr(meta, "empty", True):
        return None
    return SourceSpan(file, meta.line, meta.column, meta.end_line, meta.end_column)


def _names(nodes) -> List[str]:
    return [str(n) for n in nodes if n is not None]


class _TermResolver:
    """Resolve raw name/call trees to sorted terms, handling overloading."""

    def __init__(self, sig: Signature, file: str):
        self.sig = sig
        self.file = file

    def candidates(self, node: Tree, env: Dict[str, Variable]) -> List:
        kind = node.data
        if kind == "annot":
            inner, sort = node.children
            out = [t for t in self.candidates(inner, env) if t.sort == str(sort)]
            if not out:
                raise SortError(f"no reading of the term has sort {sort}")
            return out
        name = str(node.children[0])
        if kind == "name":
            if name in env:
                return [Var(env[name])]
            consts = [f for f in self.sig.symbols(name) if f.is_constant]
            if not consts:
                raise ResolveError(f"unknown symbol {name!r}", _span(node, self.file))
            return [App(f) for f in consts]
        args = [a for a in node.children[1:] if a is not None]
        funcs = [f for f in self.sig.symbols(name) if len(f.arity) == len(args)]
        if not funcs:
            if self.sig.symbols(name):
                raise SortError(f"{name} does not take {len(args)} argument(s)")
            raise ResolveError(f"unknown symbol {name!r}", _span(node, self.file))
        arg_cands = [self.candidates(a, env) for a in args]
        out = []
        for f in funcs:
            pools = [[t for t in cands if t.sort == s] for cands, s in zip(arg_cands, f.arity)]
            for combo in itertools.product(*pools):
                out.append(App(f, tuple(combo)))
        if not out:
            got = ", ".join("/".join(sorted({t.sort for t in c})) for c in arg_cands)
            raise SortError(f"arguments of {name} have sorts ({got}), which match no declared rank")
        return out

    def term(self, node: Tree, env: Dict[str, Variable], expected: Optional[str] = None):
        cands = self.candidates(node, env)
        if expected is not None:
            cands = [t for t in cands if t.sort == expected]
            if not cands:
                raise SortError(f"term does not have the expected sort {expected}")
        if len(cands) > 1:
            sorts = "/".join(sorted({t.sort for t in cands}))
            raise AmbiguousSymbol(f"{cands[0]} could have sort {sorts}; annotate it as (term : sort)")
        return cands[0]

    def pair(self, a: Tree, b: Tree, env):
        ca, cb = self.candidates(a, env), self.candidates(b, env)
        pairs = [(x, y) for x in ca for y in cb if x.sort == y.sort]
        if not pairs:
            sa = "/".join(sorted({t.sort for t in ca}))
            sb = "/".join(sorted({t.sort for t in cb}))
            raise SortError(f"operands have different sorts ({sa} and {sb})")
        if len(pairs) > 1:
            sorts = "/".join(sorted({x.sort for x, _ in pairs}))
            raise AmbiguousSymbol(f"operands {pairs[0][0]} and {pairs[0][1]} could have sort {sorts}; "
                                  "annotate them as (term : sort)")
        return pairs[0]


class _Builder:
    def __init__(self, file: str):
        self.file = file
        self.spec = SpecFile(file=file)

    # -- helpers -----------------------------------------------------------

    def fail(self, exc_type, message, node):
        if not issubclass(exc_type, (ParseError, ResolveError, CheckError)):
            message = f"{exc_type.__name__}: {message}"
            exc_type = ResolveError
        raise exc_type(message, _span(node, self.file))

    def located(self, node, fn, *args):
        """Run ``fn`` and attach ``node``'s span to kernel errors."""
        try:
            return fn(*args)
        except (ParseError, ResolveError, CheckError) as e:
            if e.span is None:
                e.span = _span(node, self.file)
            raise
        except (AmbiguousSymbol, UnboundVariable) as e:
            raise ResolveError(f"{type(e).__name__}: {e}", _span(node, self.file)) from None
        except TAError as e:
            raise CheckError(f"{type(e).__name__}: {e}", _span(node, self.file)) from None

    def check(self, report: ValidationReport, node, what: str):
        if report:
            raise CheckError(f"{what}: {report.violations[0]}" +
                             (f" (+{len(report) - 1} more)" if len(report) > 1 else ""),
                             _span(node, self.file), report)

    def add(self, decl, node):
        kind = type(decl)
        for d in self.spec.decls:
            if type(d) is kind and d.name == decl.name:
                self.fail(ResolveError, f"duplicate declaration {decl.name!r}", node)
        decl.span = _span(node, self.file)
        self.spec.decls.append(decl)

    def sig(self, name_tok) -> Signature:
        name = str(name_tok)
        decl = self.spec.signatures.get(name)
        if decl is None:
            self.fail(ResolveError, f"unknown signature {name!r}", name_tok)
        return decl.sig

    # -- declarations ------------------------------------------------------

    def build(self, tree: Tree) -> SpecFile:
        for node in tree.children:
            getattr(self, node.data)(node)
        return self.spec

    def sigdecl(self, node):
        name = str(node.children[0])
        sorts: List[str] = []
        funcs: List[Func] = []
        ctors = []
        labels: List[str] = []
        finite: List[str] = []
        for item in node.children[1:]:
            if item.data == "sorts_item":
                sorts += _names(item.children)
            elif item.data == "labels_item":
                labels += _names(item.children)
            elif item.data == "finite_item":
                finite += _names(item.children)
            else:
                for op in item.children:
                    parts = op.children
                    ctor = parts and isinstance(parts[-1], Tree) and parts[-1].data == "ctormark"
                    toks = _names(p for p in parts if isinstance(p, Token))
                    f = Func(toks[0], tuple(toks[1:-1]), toks[-1])
                    funcs.append(f)
                    if ctor:
                        ctors.append(f)
        sig = Signature(tuple(sorts), tuple(funcs), tuple(labels), frozenset(ctors), frozenset(finite))
        self.check(check_signature(sig), node, f"signature {name}")
        self.add(SigDecl(name, sig), node)

    def _rank_func(self, sig: Signature, name: str, rank: Optional[Tree], nargs: Optional[int], node) -> Func:
        cands = list(sig.symbols(name))
        if rank is not None:
            toks = _names(rank.children)
            cands = [f for f in cands if f.arity == tuple(toks[:-1]) and f.result == toks[-1]]
        elif nargs is not None:
            cands = [f for f in cands if len(f.arity) == nargs]
        if not cands:
            self.fail(ResolveError, f"no operation {name!r} with that rank", node)
        if len(cands) > 1:
            self.fail(AmbiguousSymbol, f"operation {name!r} is overloaded; give its rank as [A B -> C]", node)
        return cands[0]

    def modeldecl(self, node):
        name, sig_name = str(node.children[0]), node.children[1]
        sig = self.sig(sig_name)
        carriers: Dict[str, List[str]] = {}
        tables: Dict[Func, Dict[tuple, str]] = {f: {} for f in sig.funcs}
        rels: Dict[Tuple[str, str], set] = {}
        for item in node.children[2:]:
            if item.data == "carrier_item":
                s = str(item.children[0])
                if not sig.has_sort(s):
                    self.fail(ResolveError, f"unknown sort {s!r}", item)
                carriers[s] = _names(item.children[1:])
        elem_sorts: Dict[str, List[str]] = {}
        for s, es in carriers.items():
            for e in es:
                elem_sorts.setdefault(e, []).append(s)
        for item in node.children[2:]:
            if item.data == "row_item":
                ch = item.children
                fname = str(ch[0])
                rank = next((c for c in ch[1:] if isinstance(c, Tree)), None)
                toks = [str(c) for c in ch[1:] if isinstance(c, Token)]
                value = toks[-1]
                args = tuple(toks[:-1])
                f = self._rank_func(sig, fname, rank, len(args), item)
                if args in tables[f]:
                    self.fail(CheckError, f"duplicate row for {fname}({', '.join(args)})", item)
                tables[f][args] = value
            elif item.data == "pair_item":
                ch = item.children
                label = str(ch[0])
                if label not in sig.labels:
                    self.fail(ResolveError, f"unknown label {label!r}", item)
                a, b = str(ch[2]), str(ch[3])
                if ch[1] is not None:
                    sort = str(ch[1])
                else:
                    common = [s for s in elem_sorts.get(a, []) if s in elem_sorts.get(b, [])]
                    if len(common) != 1:
                        self.fail(ResolveError, f"cannot infer the sort of ({a}, {b}); write 'label {label} on S'",
                                  item)
                    sort = common[0]
                rels.setdefault((label, sort), set()).add((a, b))
        for s in sig.sorts:
            carriers.setdefault(s, [])
        model = FiniteModel(sig, {s: tuple(carriers[s]) for s in sig.sorts},
                            {f: t for f, t in tables.items()},
                            {k: frozenset(v) for k, v in rels.items()})
        self.check(validate_model(model), node, f"model {name}")
        self.add(ModelDecl(name, str(sig_name), model), node)

    def _items(self, sig: Signature, node: Tree, env: Dict[str, Variable]):
        out = []
        seen = set()
        for item in node.children:
            if item is None:
                continue
            iname = str(item.children[0])
            if iname in seen:
                self.fail(ResolveError, f"duplicate sentence name {iname!r}", item)
            seen.add(iname)
            phi = self.sentence(sig, item.children[1], env)
            self.check(check_sentence(sig, phi, tuple(env.values())), item, f"sentence {iname}")
            out.append((iname, phi))
        return tuple(out)

    def sentdecl(self, node):
        name, sig_name, items = node.children
        sig = self.sig(sig_name)
        self.add(SentencesDecl(str(name), str(sig_name), self._items(sig, items, {})), node)

    def typedecl(self, node):
        ch = node.children
        name, sig_name = str(ch[0]), ch[1]
        sig = self.sig(sig_name)
        block = [self.vdecl(sig, v) for v in ch[2:-1] if v is not None]
        env = {v.name: v for v in block}
        if len(env) != len(block):
            self.fail(ResolveError, "duplicate variable in type block", node)
        items = self._items(sig, ch[-1], env)
        lt = LogicType(sig, tuple(block), tuple(phi for _, phi in items), name)
        self.add(TypeDecl(name, str(sig_name), lt, tuple(n for n, _ in items)), node)

    def vdecl(self, sig: Signature, node) -> Variable:
        vname, sort = str(node.children[0]), str(node.children[1])
        if not sig.has_sort(sort):
            self.fail(ResolveError, f"unknown sort {sort!r}", node)
        return Variable(vname, sort)

    def morphdecl(self, node):
        ch = node.children
        name = str(ch[0])
        src, tgt = self.sig(ch[1]), self.sig(ch[2])
        sorts, ops, labels = {}, {}, {}
        for item in ch[3:]:
            toks = item.children
            if item.data == "sort_map":
                sorts[str(toks[0])] = str(toks[1])
            elif item.data == "label_map":
                labels[str(toks[0])] = str(toks[1])
            else:
                rank = toks[1] if isinstance(toks[1], Tree) else None
                f = self._rank_func(src, str(toks[0]), rank, None, item)
                ops[f] = str(toks[-1])
        chi = make_morphism(src, tgt, sorts, ops, labels)
        self.check(check_morphism(chi), node, f"morphism {name}")
        self.add(MorphismDecl(name, str(ch[1]), str(ch[2]), chi), node)

    def _cset(self, sig: Signature, node) -> Tuple[Func, ...]:
        out = []
        for v in node.children:
            if v is None:
                continue
            var = self.vdecl(sig, v)
            out.append(Func(var.name, (), var.sort))
        return tuple(out)

    def substdecl(self, node):
        ch = node.children
        name = str(ch[0])
        base = self.sig(ch[3])
        c1, c2 = self._cset(base, ch[1]), self._cset(base, ch[2])
        tsig = base.with_constants(c2)
        mapping = {}
        res = _TermResolver(tsig, self.file)
        for item in ch[4:]:
            if item is None:
                continue
            cname = str(item.children[0])
            match = [c for c in c1 if c.name == cname]
            if not match:
                self.fail(ResolveError, f"{cname!r} is not a source constant", item)
            mapping[match[0]] = self.located(item, res.term, item.children[1], {}, match[0].result)
        theta = Substitution(base, c1, c2, mapping)
        self.check(check_substitution(theta), node, f"substitution {name}")
        self.add(SubstDecl(name, str(ch[3]), theta), node)

    def forcingdecl(self, node):
        ch = node.children
        name, sig_name = str(ch[0]), ch[1]
        base = self.sig(sig_name)
        conds: List[Condition] = []
        order = set()
        zero = None
        for item in ch[2:]:
            if item.data == "cond_item":
                cname = str(item.children[0])
                consts: Tuple[Func, ...] = ()
                atoms, gamma = [], []
                for ci in item.children[1:]:
                    if ci.data == "consts_item":
                        consts = self._cset(base, ci.children[0])
                csig = base.with_constants(consts)
                for ci in item.children[1:]:
                    if ci.data in ("atoms_item", "gamma_item"):
                        for s in ci.children[0].children:
                            if s is None:
                                continue
                            phi = self.sentence(csig, s, {})
                            self.check(check_sentence(csig, phi), s, f"condition {cname}")
                            if ci.data == "atoms_item":
                                if not is_atomic(phi):
                                    self.fail(CheckError, "atoms must be ground equations or single-label transitions", s)
                                atoms.append(phi)
                            else:
                                gamma.append(phi)
                if any(c.name == cname for c in conds):
                    self.fail(ResolveError, f"duplicate condition {cname!r}", item)
                conds.append(Condition(cname, csig, frozenset(atoms), frozenset(gamma)))
            elif item.data == "order_item":
                for pair in item.children:
                    if pair is None:
                        continue
                    p, q = str(pair.children[0]), str(pair.children[1])
                    order.add((p, q))
            else:
                zero = str(item.children[0])
        names = {c.name for c in conds}
        for p, q in sorted(order):
            for n in (p, q):
                if n not in names:
                    self.fail(ResolveError, f"unknown condition {n!r} in order", node)
        if zero is not None and zero not in names:
            self.fail(ResolveError, f"unknown condition {zero!r}", node)
        prop = ForcingProperty(tuple(conds), frozenset(order), zero)
        self.add(ForcingDecl(name, str(sig_name), prop), node)

    def proofdecl(self, node):
        ch = node.children
        name, sig_name = str(ch[0]), ch[1]
        sig = self.sig(sig_name)
        steps = []
        for st in ch[2:]:
            sname = str(st.children[0])
            lhs = self._sset(sig, st.children[1])
            rhs = self._sset(sig, st.children[2])
            steps.append(self._rule(sig, sname, lhs, rhs, st.children[3], st))
        names = [s.name for s in steps]
        if len(set(names)) != len(names):
            self.fail(ResolveError, "duplicate step names", node)
        self.add(ProofDecl(name, str(sig_name), tuple(steps)), node)

    def _sset(self, sig: Signature, node) -> tuple:
        out = []
        for el in node.children:
            if el is None:
                continue
            if el.data == "sref":
                out.append(SetRef(str(el.children[0])))
            elif el.data == "sref_item":
                out.append(SetRef(str(el.children[0]), str(el.children[1])))
            else:
                out.append(self.sentence(sig, el.children[0], {}))
        return tuple(out)

    def _rule(self, sig, sname, lhs, rhs, rule: Tree, node) -> StepDecl:
        kind = rule.data[2:]
        step = StepDecl(sname, lhs, rhs, kind)
        ch = rule.children
        if kind == "trans":
            step.premises = (str(ch[0]), str(ch[1]))
        elif kind == "union":
            step.premises = tuple(_names(ch))
        elif kind == "translate":
            step.premises = (str(ch[0]),)
            step.along = str(ch[1])
        elif kind in ("cb", "fn"):
            opts = ch[2:] if kind == "cb" else ch[1:]
            if kind == "cb":
                step.var = self.vdecl(sig, ch[0])
                step.depth = int(ch[1])
            else:
                step.caps = self._kv(ch[0])
            for o in opts:
                if o.data == "o_bound":
                    step.bounds = self._kv(o.children[0])
                elif o.data == "o_flavor":
                    step.flavor = str(o.children[0])
                else:
                    step.prefix = int(o.children[0])
        step.span = _span(node, self.file)
        return step

    @staticmethod
    def _kv(node) -> Tuple[Tuple[str, int], ...]:
        return tuple((str(kv.children[0]), int(kv.children[1])) for kv in node.children)

    def querydecl(self, node):
        name, text = node.children
        self.add(QueryDecl(str(name), json.loads(str(text))), node)

    # -- sentences ---------------------------------------------------------

    def sentence(self, sig: Signature, node, env: Dict[str, Variable]):
        return self.located(node, lambda: normalize(self._sent(sig, node, env)))

    def _sent(self, sig, node, env):
        kind = node.data
        ch = node.children
        res = _TermResolver(sig, self.file)
        if kind == "implies":
            return Implies(self._sent(sig, ch[0], env), self._sent(sig, ch[1], env))
        if kind == "neg":
            return Not(self._sent(sig, ch[0], env))
        if kind in ("exists", "forall"):
            block = tuple(self.vdecl(sig, v) for v in ch[0].children)
            if len({v.name for v in block}) != len(block):
                self.fail(CheckError, "duplicate variable name in block", ch[0])
            inner = dict(env)
            inner.update({v.name: v for v in block})
            body = self._sent(sig, ch[1], inner)
            return Exists(block, body) if kind == "exists" else Forall(block, body)
        if kind == "disj":
            return Or(tuple(self._sent(sig, c, env) for c in ch if c is not None))
        if kind == "conj":
            return And(*[self._sent(sig, c, env) for c in ch if c is not None])
        if kind == "true":
            return TRUE
        if kind == "false":
            return FALSE
        if kind == "eq":
            return Eq(*self.located(node, res.pair, ch[0], ch[1], env))
        if kind == "neq":
            return Neq(*self.located(node, res.pair, ch[0], ch[1], env))
        if kind == "label_atom":
            t = ch[0]
            if t.data != "call" or len([a for a in t.children[1:] if a is not None]) != 2 \
                    or str(t.children[0]) not in sig.labels:
                self.fail(ParseError, "expected a sentence; a bare term must be a transition l(t1, t2)", node)
            a, b = self.located(node, res.pair, t.children[1], t.children[2], env)
            return Trans(Label(str(t.children[0])), a, b)
        if kind == "act_atom":
            act = self.action(sig, ch[0])
            a, b = self.located(node, res.pair, ch[1], ch[2], env)
            return Trans(act, a, b)
        if kind == "star_atom":
            label = self._label(sig, ch[0])
            a, b = self.located(node, res.pair, ch[1], ch[2], env)
            return Trans(Star(Label(label)), a, b)
        if kind == "pow_atom":
            label = self._label(sig, ch[0])
            n = int(ch[1])
            a, b = self.located(node, res.pair, ch[2], ch[3], env)
            return Eq(a, b) if n == 0 else Trans(power(Label(label), n), a, b)
        raise ParseError(f"unexpected node {kind}", _span(node, self.file))

    def _label(self, sig, tok) -> str:
        name = str(tok)
        if name not in sig.labels:
            self.fail(ResolveError, f"unknown label {name!r}", tok)
        return name

    def action(self, sig, node):
        if isinstance(node, Token):
            return Label(self._label(sig, node))
        kind = node.data
        ch = node.children
        if kind == "a_label":
            return Label(self._label(sig, ch[0]))
        if kind == "a_union":
            return Union(self.action(sig, ch[0]), self.action(sig, ch[1]))
        if kind == "a_seq":
            return Seq(self.action(sig, ch[0]), self.action(sig, ch[1]))
        if kind == "a_star":
            return Star(self.action(sig, ch[0]))
        if kind == "a_pow":
            n = int(ch[1])
            if n < 1:
                self.fail(ParseError, "a^0 is only allowed as a whole atom l^0(t1, t2)", node)
            return power(self.action(sig, ch[0]), n)
        raise ParseError(f"unexpected action node {kind}", _span(node, self.file))


def _terminal_text(name: str) -> str:
    try:
        pat = _PARSER.get_terminal(name).pattern
    except KeyError:
        return name
    return repr(pat.value) if isinstance(pat, lark.lexer.PatternStr) else name


def parse_spec(text: str, file: str = "<input>") -> SpecFile:
    """Parse and check a ``.ta`` text. Raises ParseError / ResolveError / CheckError."""
    try:
        tree = _PARSER.parse(text)
    except lark.exceptions.UnexpectedInput as e:
        span = SourceSpan(file, e.line, e.column, e.line, e.column)
        if isinstance(e, lark.exceptions.UnexpectedToken):
            expected = ", ".join(sorted(_terminal_text(t) for t in e.expected)[:8])
            got = "end of input" if e.token.type == "$END" else repr(str(e.token))
            msg = f"unexpected {got}; expected one of: {expected}"
        elif isinstance(e, lark.exceptions.UnexpectedCharacters):
            msg = f"unexpected character {e.char!r}"
        else:
            msg = "unexpected end of input"
        raise ParseError(msg, span) from None
    return _Builder(file).build(tree)


def parse_file(path: str) -> SpecFile:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read(), path)


def parse_sentence(sig: Signature, text: str, block: Sequence[Variable] = ()) -> object:
    """Parse one sentence over ``sig`` (with ``block`` variables free)."""
    b = _Builder("<sentence>")
    try:
        tree = _SENTENCE_PARSER.parse(text)
    except lark.exceptions.UnexpectedInput as e:
        raise ParseError("malformed sentence", SourceSpan("<sentence>", e.line, e.column, e.line, e.column)) from None
    return b.sentence(sig, tree, {v.name: v for v in block})


_SENTENCE_PARSER = Lark(GRAMMAR, parser="lalr", propagate_positions=True, maybe_placeholders=True, start="sentence")
