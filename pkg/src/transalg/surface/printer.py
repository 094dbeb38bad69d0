"""Pretty printer producing text that :func:`parse_spec` reads back."""
from __future__ import annotations

import json
from typing import Dict, List, Optional

from ..kernel import Eq, Exists, Label, Not, Or, Seq, Signature, Star, Trans, Union, Var, Variable, free_variables
from .spec import (ForcingDecl, ModelDecl, MorphismDecl, ProofDecl, QueryDecl, SentencesDecl, SetRef, SigDecl,
                   SpecFile, StepDecl, SubstDecl, TypeDecl)


# -- terms and actions ------------------------------------------------------

def show_term(t, sig: Optional[Signature] = None, env: Optional[Dict[Variable, str]] = None) -> str:
    env = env or {}
    if isinstance(t, Var):
        return env.get(t.var, t.var.name)
    f = t.func
    if t.args:
        text = f"{f.name}({', '.join(show_term(a, sig, env) for a in t.args)})"
    elif f.name in env.values():
        text = f"{f.name}()"
    else:
        text = f.name
    if sig is not None and len(sig.symbols(f.name)) > 1:
        text = f"({text} : {f.result})"
    return text


def show_action(a, prec: int = 0) -> str:
    """``prec``: 0 union context, 1 sequence context, 2 postfix operand."""
    if isinstance(a, Label):
        return a.name
    if isinstance(a, Union):
        text = f"{show_action(a.left, 0)} | {show_action(a.right, 1)}"
        return text if prec == 0 else f"({text})"
    if isinstance(a, Seq):
        text = f"{show_action(a.first, 1)} ; {show_action(a.second, 2)}"
        return text if prec <= 1 else f"({text})"
    if isinstance(a, Star):
        return f"{show_action(a.body, 2)}*"
    raise TypeError(f"not an action: {a!r}")


# -- sentences --------------------------------------------------------------

def _is_not_of_or_of_nots(phi) -> bool:
    return (isinstance(phi, Not) and isinstance(phi.body, Or)
            and all(isinstance(d, Not) for d in phi.body.disjuncts))


class _Printer:
    def __init__(self, sig: Optional[Signature]):
        self.sig = sig

    def closed(self, phi) -> bool:
        """True if ``phi`` prints without a trailing ``=>`` or quantifier body."""
        if isinstance(phi, (Eq, Trans)):
            return True
        if isinstance(phi, Or):
            return not self._implication(phi)
        if isinstance(phi, Not):
            if _is_not_of_or_of_nots(phi):
                return True
            if isinstance(phi.body, Exists):
                return False
            return self.closed(phi.body)
        return False

    @staticmethod
    def _implication(phi) -> bool:
        return isinstance(phi, Or) and len(phi.disjuncts) == 2 and isinstance(phi.disjuncts[0], Not)

    def wrap(self, phi, env) -> str:
        text = self.show(phi, env)
        return text if self.closed(phi) else f"({text})"

    def bind(self, block, body, env):
        """Names for ``block``; primes are added only where an outer variable would be captured."""
        used = set(free_variables(body))
        env = dict(env)
        names = []
        for v in block:
            name = v.name
            while any(u != v and u in used and n == name for u, n in env.items()) or \
                    any(u != v and n == name for u, n in zip(block, names)):
                name += "'"
            env[v] = name
            names.append(name)
        return env, ", ".join(f"{n}:{v.sort}" for v, n in zip(block, names))

    def term(self, t, env):
        return show_term(t, self.sig, env)

    def show(self, phi, env: Dict[Variable, str]) -> str:
        if isinstance(phi, Eq):
            return f"{self.term(phi.lhs, env)} = {self.term(phi.rhs, env)}"
        if isinstance(phi, Trans):
            a, src, dst = phi.action, self.term(phi.src, env), self.term(phi.dst, env)
            if isinstance(a, Label):
                return f"{a.name}({src}, {dst})"
            if isinstance(a, Star) and isinstance(a.body, Label):
                return f"{a.body.name}*({src}, {dst})"
            return f"[{show_action(a)}]({src}, {dst})"
        if isinstance(phi, Or):
            if not phi.disjuncts:
                return "false"
            if self._implication(phi):
                return f"{self.wrap(phi.disjuncts[0].body, env)} => {self.show(phi.disjuncts[1], env)}"
            return "or{" + ", ".join(self.show(d, env) for d in phi.disjuncts) + "}"
        if isinstance(phi, Not):
            body = phi.body
            if isinstance(body, Or) and not body.disjuncts:
                return "true"
            if _is_not_of_or_of_nots(phi):
                return "and{" + ", ".join(self.show(d.body, env) for d in body.disjuncts) + "}"
            if isinstance(body, Exists) and isinstance(body.body, Not):
                env2, block = self.bind(body.block, body.body, env)
                return f"forall {block} . {self.show(body.body.body, env2)}"
            if isinstance(body, Eq):
                return f"{self.term(body.lhs, env)} != {self.term(body.rhs, env)}"
            if self._implication(body):
                return f"not ({self.show(body, env)})"
            return f"not {self.show(body, env)}"
        if isinstance(phi, Exists):
            env2, block = self.bind(phi.block, phi.body, env)
            return f"exists {block} . {self.show(phi.body, env2)}"
        raise TypeError(f"not a sentence: {phi!r}")


def show_sentence(phi, sig: Optional[Signature] = None, block=()) -> str:
    """Surface text of a core sentence.  Pass ``sig`` to annotate overloaded symbols."""
    return _Printer(sig).show(phi, {v: v.name for v in block})


# -- declarations -----------------------------------------------------------

def _sig(d: SigDecl) -> str:
    sig = d.sig
    lines = [f"sig {d.name} {{", f"  sorts {' '.join(sig.sorts)}"]
    if sig.funcs:
        lines.append("  ops")
        for f in sig.funcs:
            mark = " [ctor]" if f in sig.ctors else ""
            lines.append(f"    {f.name} : {' '.join(f.arity + ('->', f.result))}{mark}")
    if sig.labels:
        lines.append(f"  labels {' '.join(sig.labels)}")
    if sig.finite_sorts:
        lines.append(f"  finite {' '.join(s for s in sig.sorts if s in sig.finite_sorts)}")
    lines.append("}")
    return "\n".join(lines)


def _rank(f) -> str:
    return f"[{' '.join(f.arity + ('->', f.result))}]"


def _model(d: ModelDecl) -> str:
    m = d.model
    sig = m.sig
    lines = [f"model {d.name} : {d.sig_name} {{"]
    for s in sig.sorts:
        lines.append(f"  carrier {s} = {{ {' '.join(m.carrier(s))} }}".replace("{  }", "{ }"))
    for f in sig.funcs:
        rank = f" {_rank(f)}" if len(sig.symbols(f.name)) > 1 else ""
        for args, v in sorted(m.tables.get(f, {}).items()):
            call = f"({', '.join(args)})" if args else ""
            lines.append(f"  op {f.name}{rank}{call} = {v}")
    for l in sig.labels:
        for s in sig.sorts:
            for a, b in sorted(m.relation(l, s)):
                lines.append(f"  label {l} on {s} : ({a}, {b})")
    lines.append("}")
    return "\n".join(lines)


def _items(items, sig, block=()) -> List[str]:
    return [f"  {n} : {show_sentence(phi, sig, block)} ;" for n, phi in items]


def _sentences(d: SentencesDecl, spec: SpecFile) -> str:
    sig = spec.signature(d.sig_name)
    return "\n".join([f"sentences {d.name} over {d.sig_name} {{"] + _items(d.items, sig) + ["}"])


def _type(d: TypeDecl, spec: SpecFile) -> str:
    t = d.ltype
    block = ", ".join(f"{v.name}:{v.sort}" for v in t.block)
    names = d.names or tuple(f"t{i}" for i in range(len(t.sentences)))
    body = _items(zip(names, t.sentences), t.sig, t.block)
    return "\n".join([f"type {d.name} over {d.sig_name} [{block}] {{"] + body + ["}"])


def _morphism(d: MorphismDecl) -> str:
    chi = d.morphism
    lines = [f"morphism {d.name} : {d.source} -> {d.target} {{"]
    for s in chi.source.sorts:
        if s in chi.sort_map:
            lines.append(f"  sort {s} -> {chi.sort_map[s]}")
    for f in chi.source.funcs:
        if f in chi.func_map:
            lines.append(f"  op {f.name} {_rank(f)} -> {chi.func_map[f].name}")
    for l in chi.source.labels:
        if l in chi.label_map:
            lines.append(f"  label {l} -> {chi.label_map[l]}")
    lines.append("}")
    return "\n".join(lines)


def _cset(consts) -> str:
    return "{" + ", ".join(f"{c.name} : {c.result}" for c in consts) + "}"


def _subst(d: SubstDecl) -> str:
    th = d.subst
    tsig = th.base.with_constants(th.target)
    lines = [f"subst {d.name} : {_cset(th.source)} -> {_cset(th.target)} over {d.sig_name} {{"]
    for c in th.source:
        if c in th.mapping:
            lines.append(f"  {c.name} -> {show_term(th.mapping[c], tsig)} ;")
    lines.append("}")
    return "\n".join(lines)


def _forcing(d: ForcingDecl, spec: SpecFile) -> str:
    P = d.prop
    base = spec.signature(d.sig_name)
    lines = [f"forcing {d.name} over {d.sig_name} {{"]
    for c in P.conditions:
        lines.append(f"  condition {c.name} {{")
        extra = [f for f in c.sig.funcs if not base.has_func(f)]
        if extra:
            lines.append(f"    consts {_cset(extra)}")
        for key, group in (("atoms", c.atoms), ("gamma", c.gamma)):
            if group:
                body = " ; ".join(sorted(show_sentence(a, c.sig) for a in group))
                lines.append(f"    {key} {{ {body} }}")
        lines.append("  }")
    if P.order:
        lines.append("  order " + ", ".join(f"{p} <= {q}" for p, q in sorted(P.order)))
    if P.zero is not None:
        lines.append(f"  zero {P.zero}")
    lines.append("}")
    return "\n".join(lines)


def _elem(e, sig) -> str:
    if isinstance(e, SetRef):
        return e.name if e.item is None else f"{e.name}.{e.item}"
    return f"({show_sentence(e, sig)})"


def _kv(pairs) -> str:
    return ", ".join(f"{k}={v}" for k, v in pairs)


def _step(s: StepDecl, sig) -> str:
    lhs = "{" + ", ".join(_elem(e, sig) for e in s.lhs) + "}"
    rhs = "{" + ", ".join(_elem(e, sig) for e in s.rhs) + "}"
    rule = s.rule
    if rule == "trans":
        rule = f"trans {s.premises[0]} {s.premises[1]}"
    elif rule == "union":
        rule = " ".join(("union",) + tuple(s.premises))
    elif rule == "translate":
        rule = f"translate {s.premises[0]} along {s.along}"
    elif rule in ("cb", "fn"):
        if rule == "cb":
            rule = f"cb on {s.var.name}:{s.var.sort} depth {s.depth}"
        else:
            rule = f"fn caps {_kv(s.caps)}"
        if s.bounds:
            rule += f" bound {_kv(s.bounds)}"
        if s.flavor:
            rule += f" flavor {s.flavor}"
        if s.prefix:
            rule += f" prefix {s.prefix}"
    return f"  step {s.name} : {lhs} |- {rhs} by {rule}"


def _proof(d: ProofDecl, spec: SpecFile) -> str:
    sig = spec.signature(d.sig_name)
    return "\n".join([f"proof {d.name} over {d.sig_name} {{"] + [_step(s, sig) for s in d.steps] + ["}"])


def print_spec(spec: SpecFile) -> str:
    out = []
    for d in spec.decls:
        if isinstance(d, SigDecl):
            out.append(_sig(d))
        elif isinstance(d, ModelDecl):
            out.append(_model(d))
        elif isinstance(d, SentencesDecl):
            out.append(_sentences(d, spec))
        elif isinstance(d, TypeDecl):
            out.append(_type(d, spec))
        elif isinstance(d, MorphismDecl):
            out.append(_morphism(d))
        elif isinstance(d, SubstDecl):
            out.append(_subst(d))
        elif isinstance(d, ForcingDecl):
            out.append(_forcing(d, spec))
        elif isinstance(d, ProofDecl):
            out.append(_proof(d, spec))
        elif isinstance(d, QueryDecl):
            out.append(f"query {d.name} {json.dumps(d.text)}")
    return "\n\n".join(out) + "\n"
