"""Specification files (``.qsf``).

Layout::

    #qsf "name"
    interface {
        input  x1, x2;
        output y1 monitor x, ga;          // `monitor ...` annotations are ignored
        constant w = 8, eps = 2;
    }
    definitions {
        dc name(p1, p2) { formula; }      // parameterised macro
    }
    indefinitions {
        ga : formula;                     // ga becomes a witness variable
    }
    hardreq { formula; formula; }         // conjunction
    softreq {
        useind ga;
        (ga);                             // soft entry via its indicator
        formula : 2^3;                    // inline soft entry with weight
        lexicographic;                    // optional: weights 2^k..2^1 in order
    }
    assume { formula; }                   // extension: with --type the four
    commit { formula; }                   // derived specifications are built

Comments use ``//`` or ``/* */``; a line starting with ``#`` is a directive.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from ..qddc.parser import Macro, ParseError, Parser, Token, tokenize
from ..qddc.syntax import Formula, QddcError, Univ, VarRegistry, conj
from ..synth.arena import lex_weights
from ..synth.pipeline import SynthSpec, derive


@dataclass
class SoftEntry:
    formula: Formula
    weight: Optional[float]
    witness: Optional[str] = None
    source: str = ""


@dataclass
class QsfSpec:
    name: str
    inputs: Tuple[str, ...]
    outputs: Tuple[str, ...]
    constants: Dict[str, int]
    macros: Dict[str, Macro]
    indicators: Dict[str, Formula] = field(default_factory=dict)
    hard: Optional[Formula] = None
    soft: List[SoftEntry] = field(default_factory=list)
    lexicographic: bool = False
    assume: Optional[Formula] = None
    commit: Optional[Formula] = None

    @property
    def reg(self) -> VarRegistry:
        """Interface registry; indicator variables are moved to the witnesses."""
        outs = tuple(o for o in self.outputs if o not in self.indicators)
        return VarRegistry(self.inputs, outs, tuple(self.indicators))

    @property
    def base_reg(self) -> VarRegistry:
        return VarRegistry(self.inputs, tuple(o for o in self.outputs if o not in self.indicators))

    def parse(self, text: str) -> Formula:
        """Parse a formula in the context of this file's constants and macros."""
        p = Parser(tokenize(text), self.base_reg, self.constants, self.macros)
        f = p.parse_formula()
        if not p.at_end():
            raise p.error(f"unexpected trailing input {p.tok.text!r}")
        return f

    def soft_list(self) -> List[Tuple[Formula, float, str]]:
        n = len(self.soft)
        auto = lex_weights(n) if self.lexicographic else [1.0] * n
        return [(e.formula, e.weight if e.weight is not None else w, e.witness)
                for e, w in zip(self.soft, auto)]

    def synth_spec(self, kind: Optional[int] = None) -> SynthSpec:
        """The raw hardreq/softreq, or the derived Type`kind` specification."""
        reg = self.base_reg
        if kind is not None:
            if self.assume is None or self.commit is None:
                raise QddcError("--type needs assume{} and commit{} blocks")
            wit = None
            for w, f in self.indicators.items():
                if f == self.commit:
                    wit = w
            return derive(kind, reg, self.assume, self.commit, witness=wit or "ga",
                          name=f"{self.name}-type{kind}")
        hard = self.hard if self.hard is not None else Univ()
        soft = self.soft_list()
        names = []
        taken = set(reg.order) | {w for _, _, w in soft if w}
        for j, (_, _, w) in enumerate(soft):
            if w is None:
                k = j + 1
                while f"w{k}" in taken:
                    k += 1
                w = f"w{k}"
                taken.add(w)
            names.append(w)
        return SynthSpec(reg, hard, [(f, x) for f, x, _ in soft], names or None, self.name)


class _Reader:
    """Block-level reader over the token stream."""

    def __init__(self, tokens: List[Token]):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def at(self, text) -> bool:
        return self.tok.kind in ("sym", "name") and self.tok.text == text

    def accept(self, text) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}, found {self.tok.text or 'end of file'!r}")
        t = self.tok
        self.i += 1
        return t

    def name(self) -> Token:
        if self.tok.kind != "name":
            raise self.error(f"expected a name, found {self.tok.text or 'end of file'!r}")
        t = self.tok
        self.i += 1
        return t

    def until(self, stops=(";",), close="}") -> List[Token]:
        """Tokens up to (not including) a top-level stop symbol or `close`."""
        depth = 0
        out = []
        while True:
            t = self.tok
            if t.kind == "eof":
                raise self.error("unexpected end of file")
            if depth == 0 and t.kind == "sym" and (t.text in stops or t.text == close):
                return out
            if t.kind == "sym" and t.text in ("(", "{", "[", "[[", "{{"):
                depth += 1
            elif t.kind == "sym" and t.text in (")", "}", "]", "]]", "}}"):
                depth -= 1
            out.append(t)
            self.i += 1


def _strip_directives(text: str) -> Tuple[str, Optional[str]]:
    name = None
    lines = []
    for line in text.splitlines():
        s = line.strip()
        if s.startswith("#"):
            m = re.match(r'#\s*qsf\s+"([^"]*)"', s)
            if m:
                name = m.group(1)
            lines.append("")
        else:
            lines.append(line)
    return "\n".join(lines), name


def _eval_weight(toks: List[Token], constants: Dict[str, int]) -> float:
    """Integer expression with + - * ^ over numbers and constants."""
    pos = 0

    def atom():
        nonlocal pos
        t = toks[pos]
        pos += 1
        if t.kind == "num":
            return float(t.text)
        if t.kind == "name" and t.text in constants:
            return float(constants[t.text])
        if t.text == "(":
            v = add()
            if toks[pos].text != ")":
                raise ParseError("expected ')' in weight", t.line, t.col)
            pos += 1
            return v
        raise ParseError(f"bad weight token {t.text!r}", t.line, t.col)

    def power():
        nonlocal pos
        v = atom()
        if pos < len(toks) and toks[pos].text == "^":
            pos += 1
            v = v ** power()
        return v

    def mul():
        nonlocal pos
        v = power()
        while pos < len(toks) and toks[pos].text == "*":
            pos += 1
            v *= power()
        return v

    def add():
        nonlocal pos
        v = mul()
        while pos < len(toks) and toks[pos].text in ("+", "-"):
            op = toks[pos].text
            pos += 1
            v = v + mul() if op == "+" else v - mul()
        return v

    if not toks:
        raise ParseError("empty weight")
    v = add()
    if pos != len(toks):
        t = toks[pos]
        raise ParseError(f"unexpected {t.text!r} in weight", t.line, t.col)
    if v <= 0:
        raise ParseError(f"soft weights must be positive, got {v:g}", toks[0].line, toks[0].col)
    return v


def parse_qsf_text(text: str, name: str = "spec") -> QsfSpec:
    text, title = _strip_directives(text)
    toks = tokenize(text)
    rd = _Reader(toks)
    inputs: List[str] = []
    outputs: List[str] = []
    constants: Dict[str, int] = {}
    macros: Dict[str, Macro] = {}
    raw_ind: List[Tuple[Token, List[Token]]] = []
    raw_hard: List[List[Token]] = []
    raw_soft: List[Tuple[List[Token], Optional[List[Token]]]] = []
    useind: List[Token] = []
    lexi = False
    raw_assume: List[List[Token]] = []
    raw_commit: List[List[Token]] = []

    def eof(tk):
        return tk + [Token("eof", "", tk[-1].line if tk else 0, tk[-1].col if tk else 0)]

    while rd.tok.kind != "eof":
        kw = rd.name()
        rd.expect("{")
        if kw.text == "interface":
            while not rd.accept("}"):
                kind = rd.name()
                if kind.text not in ("input", "output", "constant"):
                    raise rd.error(f"unknown interface declaration {kind.text!r}", kind)
                while True:
                    nt = rd.name()
                    if kind.text == "constant":
                        rd.expect("=")
                        p = Parser(eof(rd.until((",", ";"))), None, constants)
                        constants[nt.text] = p.parse_int()
                        if not p.at_end():
                            raise p.error("bad constant expression")
                    else:
                        if rd.accept("monitor"):
                            rd.name()          # annotation, ignored
                        (inputs if kind.text == "input" else outputs).append(nt.text)
                    if rd.accept(";"):
                        break
                    rd.expect(",")
        elif kw.text == "definitions":
            while not rd.accept("}"):
                d = rd.name()
                if d.text != "dc":
                    raise rd.error("expected 'dc' macro definition", d)
                mname = rd.name()
                params: List[str] = []
                if rd.accept("("):
                    if not rd.accept(")"):
                        params.append(rd.name().text)
                        while rd.accept(","):
                            params.append(rd.name().text)
                        rd.expect(")")
                rd.expect("{")
                body = rd.until((";",))
                rd.accept(";")
                rd.expect("}")
                if mname.text in macros:
                    raise rd.error(f"macro {mname.text!r} defined twice", mname)
                macros[mname.text] = Macro(mname.text, tuple(params), body)
        elif kw.text == "indefinitions":
            while not rd.accept("}"):
                w = rd.name()
                rd.expect(":")
                raw_ind.append((w, rd.until()))
                rd.accept(";")
        elif kw.text in ("hardreq", "assume", "commit"):
            target = {"hardreq": raw_hard, "assume": raw_assume, "commit": raw_commit}[kw.text]
            while not rd.accept("}"):
                body = rd.until()
                if body:
                    target.append(body)
                rd.accept(";")
        elif kw.text == "softreq":
            while not rd.accept("}"):
                if rd.at("useind"):
                    rd.i += 1
                    useind.append(rd.name())
                    while rd.accept(","):
                        useind.append(rd.name())
                    rd.accept(";")
                    continue
                if rd.at("lexicographic"):
                    rd.i += 1
                    lexi = True
                    rd.accept(";")
                    continue
                body = rd.until((";", ":"))
                weight = None
                if rd.accept(":"):
                    weight = rd.until()
                rd.accept(";")
                if body:
                    raw_soft.append((body, weight))
        else:
            raise rd.error(f"unknown section {kw.text!r}", kw)

    dup = {v for v in inputs if v in outputs} | {v for v in inputs if inputs.count(v) > 1} \
        | {v for v in outputs if outputs.count(v) > 1}
    if dup:
        raise QddcError(f"variable(s) declared twice: {sorted(dup)}")
    spec = QsfSpec(title or name, tuple(inputs), tuple(outputs), constants, macros)

    for w, body in raw_ind:
        if w.text not in outputs:
            raise ParseError(f"indicator {w.text!r} must be declared as an output", w.line, w.col)
        spec.indicators[w.text] = _formula(spec, body)

    def conj_of(blocks):
        return conj([_formula(spec, b) for b in blocks]) if blocks else None

    spec.hard = conj_of(raw_hard)
    spec.assume = conj_of(raw_assume)
    spec.commit = conj_of(raw_commit)
    used = {t.text for t in useind}
    for t in useind:
        if t.text not in spec.indicators:
            raise ParseError(f"useind {t.text!r} has no binding in indefinitions", t.line, t.col)
    for body, wt in raw_soft:
        w = _indicator_ref(body)
        weight = _eval_weight(wt, constants) if wt is not None else None
        src = " ".join(t.text for t in body)
        if w is not None and w in spec.indicators:
            if w not in used:
                raise ParseError(f"indicator {w!r} used without 'useind {w};'", body[0].line, body[0].col)
            spec.soft.append(SoftEntry(spec.indicators[w], weight, w, src))
        elif w is not None and w in outputs:
            raise ParseError(f"unbound indicator {w!r} in softreq", body[0].line, body[0].col)
        else:
            spec.soft.append(SoftEntry(_formula(spec, body), weight, None, src))
    spec.lexicographic = lexi
    return spec


def _indicator_ref(body: List[Token]) -> Optional[str]:
    toks = [t for t in body]
    while len(toks) >= 3 and toks[0].text == "(" and toks[-1].text == ")":
        toks = toks[1:-1]
    if len(toks) == 1 and toks[0].kind == "name":
        return toks[0].text
    return None


def _formula(spec: QsfSpec, body: List[Token]) -> Formula:
    if not body:
        raise QddcError("empty formula")
    last = body[-1]
    p = Parser(body + [Token("eof", "", last.line, last.col + len(last.text))],
               spec.base_reg, spec.constants, spec.macros)
    f = p.parse_formula()
    if not p.at_end():
        raise p.error(f"unexpected {p.tok.text!r}")
    return f


def parse_qsf(path) -> QsfSpec:
    path = Path(path)
    return parse_qsf_text(path.read_text(), name=path.stem)
