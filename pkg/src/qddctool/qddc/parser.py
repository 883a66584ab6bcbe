"""Hand-written recursive-descent parser for the textual formula syntax.

Grammar (loosest binding first)::

    formula  := 'ex' NAME '.' formula | 'all' NAME '.' formula | iff
    iff      := imp ('<=>' imp)*
    imp      := or ('=>' imp)?                      right associative
    or       := and ('||' and)*
    and      := chop ('&&' chop)*
    chop     := unary ('^' unary)*
    unary    := '!' unary | '[]' unary | '<>' unary | atom
    atom     := '<' prop '>' | '[' prop ']' | '[[' prop ']]' | '{{' prop '}}'
              | 'true' | 'false' | 'pt' | 'ext'
              | 'pref' '(' formula ')' | 'EP' '(' prop ')'
              | 'slen' CMP int | ('scount'|'sdur') patom CMP int
              | NAME '(' args ')'                  macro call
              | '(' formula ')'
    int      := term (('+'|'-') term)*  with terms being numbers or constants

Propositional formulas use the same operators (`!`, `&&`, `||`, `=>`, `<=>`)
but never consume a bare `>`, so `<p && q>` closes correctly.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .syntax import (
    All, AllQ, And, Box, Chop, Diamond, EP, Ex, Ext, Formula, Front, Not, Or,
    PAnd, PFalse, PNot, POr, PTrue, PVar, Point, Pref, Prop, Pt, QddcError,
    ScountCmp, SdurCmp, SlenCmp, Unit, Univ, VarRegistry, iff, implies,
    p_iff, p_implies, rename,
)


class ParseError(QddcError):
    def __init__(self, msg, line=None, col=None):
        self.line, self.col = line, col
        where = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(f"{msg}{where}")


_SYMBOLS = ["<=>", "<>", "<=", ">=", "=>", "[[", "]]", "{{", "}}", "[]",
            "&&", "||", "^", "!", "<", ">", "=", "[", "]", "{", "}", "(", ")",
            ",", ".", "+", "-", ":", ";"]
_TOKEN_RE = re.compile(
    r"(?P<ws>\s+|//[^\n]*|/\*.*?\*/)"
    r"|(?P<num>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9']*)"
    r"|(?P<str>\"[^\"]*\")"
    r"|(?P<sym>" + "|".join(re.escape(s) for s in _SYMBOLS) + ")",
    re.S,
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'num', 'name', 'sym', 'str', 'eof'
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            out.append(Token(kind, tok, line, pos - line_start + 1))
        nl = tok.count("\n")
        if nl:
            line += nl
            line_start = pos + tok.rindex("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


@dataclass
class Macro:
    name: str
    params: Tuple[str, ...]
    tokens: List[Token]  # body tokens (without braces)


_CMP = ("<", "<=", "=", ">=", ">")
_KEYWORDS = {"true", "false", "pt", "ext", "pref", "EP", "slen", "scount", "sdur", "ex", "all"}


class Parser:
    """Token-stream parser.

    `reg` may be None, in which case variable names are not checked (used
    when parsing macro bodies before the interface is known).
    """

    def __init__(self, tokens: Sequence[Token], reg: Optional[VarRegistry] = None,
                 constants: Optional[Dict[str, int]] = None,
                 macros: Optional[Dict[str, Macro]] = None):
        self.toks = list(tokens)
        self.i = 0
        self.reg = reg
        self.constants = dict(constants or {})
        self.macros = dict(macros or {})
        self.bound: List[str] = []
        self._fresh = 0

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def at(self, *texts) -> bool:
        return self.tok.kind in ("sym", "name") and self.tok.text in texts

    def accept(self, text) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text) -> Token:
        if not self.at(text):
            shown = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {shown!r}")
        t = self.tok
        self.i += 1
        return t

    def expect_name(self) -> Token:
        if self.tok.kind != "name":
            raise self.error(f"expected a name, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t

    def at_end(self) -> bool:
        return self.tok.kind == "eof"

    # -- integers
    def parse_int(self) -> int:
        val = self._int_term()
        while self.at("+", "-"):
            op = self.tok.text
            self.i += 1
            rhs = self._int_term()
            val = val + rhs if op == "+" else val - rhs
        if val < 0:
            raise self.error(f"constant expression evaluates to negative value {val}")
        return val

    def _int_term(self) -> int:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return int(t.text)
        if t.kind == "name" and t.text in self.constants:
            self.i += 1
            return self.constants[t.text]
        if self.accept("("):
            v = self.parse_int()
            self.expect(")")
            return v
        raise self.error(f"expected integer constant, found {t.text or 'end of input'!r}")

    # -- propositions
    def parse_prop(self) -> Prop:
        left = self._prop_imp()
        while self.accept("<=>"):
            left = p_iff(left, self._prop_imp())
        return left

    def _prop_imp(self) -> Prop:
        left = self._prop_or()
        if self.accept("=>"):
            return p_implies(left, self._prop_imp())
        return left

    def _prop_or(self) -> Prop:
        left = self._prop_and()
        while self.accept("||"):
            left = POr(left, self._prop_and())
        return left

    def _prop_and(self) -> Prop:
        left = self.parse_prop_unary()
        while self.accept("&&"):
            left = PAnd(left, self.parse_prop_unary())
        return left

    def parse_prop_unary(self) -> Prop:
        t = self.tok
        if self.accept("!"):
            return PNot(self.parse_prop_unary())
        if self.accept("("):
            p = self.parse_prop()
            self.expect(")")
            return p
        if t.kind == "name":
            if t.text == "true":
                self.i += 1
                return PTrue()
            if t.text == "false":
                self.i += 1
                return PFalse()
            self.i += 1
            return PVar(self._check_var(t))
        raise self.error(f"expected propositional formula, found {t.text or 'end of input'!r}")

    def _check_var(self, t: Token) -> str:
        name = t.text
        if name in self.bound:
            return name
        if name in self.constants or name in self.macros or name in _KEYWORDS:
            raise self.error(f"{name!r} is not a propositional variable", t)
        if self.reg is not None and name not in self.reg:
            raise self.error(f"unknown variable {name!r}", t)
        return name

    # -- interval formulas
    def parse_formula(self) -> Formula:
        if self.at("ex", "all") and self.peek().kind == "name" and self.peek(2).text == ".":
            kw = self.tok.text
            self.i += 1
            nt = self.expect_name()
            name = nt.text
            if name in self.bound:
                raise self.error(f"quantified variable {name!r} re-bound in its own scope", nt)
            if self.reg is not None and name in self.reg:
                raise self.error(f"quantified variable {name!r} clashes with a declared variable", nt)
            self.expect(".")
            self.bound.append(name)
            try:
                body = self.parse_formula()
            finally:
                self.bound.pop()
            return Ex(name, body) if kw == "ex" else AllQ(name, body)
        return self._iff()

    def _iff(self) -> Formula:
        left = self._imp()
        while self.accept("<=>"):
            left = iff(left, self._imp_or_quant())
        return left

    def _imp(self) -> Formula:
        left = self._or()
        if self.accept("=>"):
            right = self._imp_or_quant()
            return implies(left, right)
        return left

    def _imp_or_quant(self) -> Formula:
        if self.at("ex", "all") and self.peek(2).text == ".":
            return self.parse_formula()
        return self._imp()

    def _or(self) -> Formula:
        left = self._and()
        while self.accept("||"):
            left = Or(left, self._and())
        return left

    def _and(self) -> Formula:
        left = self._chop()
        while self.accept("&&"):
            left = And(left, self._chop())
        return left

    def _chop(self) -> Formula:
        left = self._unary()
        while self.accept("^"):
            left = Chop(left, self._unary())
        return left

    def _unary(self) -> Formula:
        if self.accept("!"):
            return Not(self._unary())
        if self.accept("[]"):
            return Box(self._unary())
        if self.accept("<>"):
            return Diamond(self._unary())
        if self.at("ex", "all") and self.peek(2).text == ".":
            return self.parse_formula()
        return self._atom()

    def _atom(self) -> Formula:
        t = self.tok
        if self.accept("[["):
            p = self.parse_prop()
            self.expect("]]")
            return All(p)
        if self.accept("{{"):
            p = self.parse_prop()
            self.expect("}}")
            return Unit(p)
        if self.accept("<"):
            p = self.parse_prop()
            self.expect(">")
            return Point(p)
        if self.accept("["):
            p = self.parse_prop()
            self.expect("]")
            return Front(p)
        if self.accept("("):
            f = self.parse_formula()
            self.expect(")")
            return f
        if t.kind != "name":
            raise self.error(f"expected formula, found {t.text or 'end of input'!r}")
        word = t.text
        if word == "true":
            self.i += 1
            return Univ()
        if word == "false":
            self.i += 1
            return Not(Univ())
        if word == "pt":
            self.i += 1
            return Pt()
        if word == "ext":
            self.i += 1
            return Ext()
        if word == "pref":
            self.i += 1
            self.expect("(")
            f = self.parse_formula()
            self.expect(")")
            return Pref(f)
        if word == "EP":
            self.i += 1
            self.expect("(")
            p = self.parse_prop()
            self.expect(")")
            return EP(p)
        if word == "slen":
            self.i += 1
            op = self._cmp()
            return SlenCmp(op, self.parse_int())
        if word in ("scount", "sdur"):
            self.i += 1
            p = self.parse_prop_unary()
            op = self._cmp()
            c = self.parse_int()
            return ScountCmp(p, op, c) if word == "scount" else SdurCmp(p, op, c)
        if word in self.macros:
            return self._macro_call()
        raise self.error(f"unknown variable or formula {word!r} (variables must appear inside <>, [], [[]] or {{{{}}}})")

    def _cmp(self) -> str:
        t = self.tok
        if t.kind == "sym" and t.text in _CMP:
            self.i += 1
            return t.text
        raise self.error(f"expected comparison operator, found {t.text or 'end of input'!r}")

    # -- macros
    def _macro_call(self) -> Formula:
        nt = self.expect_name()
        m = self.macros[nt.text]
        args: List[Prop] = []
        if self.accept("("):
            if not self.at(")"):
                args.append(self.parse_prop())
                while self.accept(","):
                    args.append(self.parse_prop())
            self.expect(")")
        if len(args) != len(m.params):
            raise self.error(
                f"macro {m.name!r} expects {len(m.params)} argument(s), got {len(args)}", nt)
        # parse the body with params as temporary variables, then substitute
        sub = Parser(m.tokens + [Token("eof", "", nt.line, nt.col)], None,
                     self.constants, self.macros)
        placeholders = [f"__arg{self._next()}_{p}" for p in m.params]
        sub_tokens = []
        for tk in m.tokens:
            if tk.kind == "name" and tk.text in m.params:
                tk = Token("name", placeholders[m.params.index(tk.text)], tk.line, tk.col)
            sub_tokens.append(tk)
        sub.toks = sub_tokens + [Token("eof", "", nt.line, nt.col)]
        sub.bound = list(placeholders)
        sub.reg = None
        body = sub.parse_formula()
        if not sub.at_end():
            raise sub.error("trailing tokens in macro body")
        # hygiene: rename bound variables of the body that would clash
        body = _freshen_bound(body, set(self.bound) | _reg_names(self.reg), self)
        body = substitute(body, dict(zip(placeholders, args)))
        # check remaining free variables against the registry
        if self.reg is not None:
            for v in body.free_vars():
                if v not in self.reg and v not in self.bound:
                    raise self.error(f"unknown variable {v!r} in expansion of {m.name!r}", nt)
        return body

    def _next(self) -> int:
        self._fresh += 1
        return self._fresh


def _reg_names(reg):
    return set(reg.order) if reg is not None else set()


def _freshen_bound(f: Formula, avoid: set, parser: Parser) -> Formula:
    if isinstance(f, (Ex, AllQ)):
        body = _freshen_bound(f.body, avoid | {f.var}, parser)
        if f.var in avoid:
            new = f"{f.var}_{parser._next()}"
            return type(f)(new, rename(body, {f.var: new}))
        return type(f)(f.var, body)
    return _map_children(f, lambda c: _freshen_bound(c, avoid, parser))


def _map_children(f: Formula, fn) -> Formula:
    if isinstance(f, (Chop, And, Or)):
        return type(f)(fn(f.left), fn(f.right))
    if isinstance(f, (Not, Diamond, Box, Pref)):
        return type(f)(fn(f.arg))
    if isinstance(f, (Ex, AllQ)):
        return type(f)(f.var, fn(f.body))
    return f


def substitute_prop(p: Prop, mapping: Dict[str, Prop]) -> Prop:
    if isinstance(p, PVar):
        return mapping.get(p.name, p)
    if isinstance(p, PNot):
        return PNot(substitute_prop(p.arg, mapping))
    if isinstance(p, (PAnd, POr)):
        return type(p)(substitute_prop(p.left, mapping), substitute_prop(p.right, mapping))
    return p


def substitute(f: Formula, mapping: Dict[str, Prop]) -> Formula:
    """Replace free propositional variables by propositional formulas."""
    if isinstance(f, (Point, Front, All, Unit, EP)):
        return type(f)(substitute_prop(f.phi, mapping))
    if isinstance(f, (ScountCmp, SdurCmp)):
        return type(f)(substitute_prop(f.phi, mapping), f.op, f.c)
    if isinstance(f, (Ex, AllQ)):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        return type(f)(f.var, substitute(f.body, inner))
    return _map_children(f, lambda c: substitute(c, mapping))


def parse_formula(text: str, reg: Optional[VarRegistry] = None,
                  constants: Optional[Dict[str, int]] = None,
                  macros: Optional[Dict[str, Macro]] = None) -> Formula:
    """Parse `text` into a Formula, checking variables against `reg`."""
    p = Parser(tokenize(text), reg, constants, macros)
    f = p.parse_formula()
    if not p.at_end():
        raise p.error(f"unexpected trailing input {p.tok.text!r}")
    return f


def parse_prop(text: str, reg: Optional[VarRegistry] = None) -> Prop:
    p = Parser(tokenize(text), reg)
    out = p.parse_prop()
    if not p.at_end():
        raise p.error(f"unexpected trailing input {p.tok.text!r}")
    return out
