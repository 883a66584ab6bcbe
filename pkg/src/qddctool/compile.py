"""Structural compilation of QDDC formulas into minimal DFAs.

Atomic formulas and count constraints become small explicit automata; chop
is fusion, negation is complement, conjunction/disjunction are products and
existential quantification is projection.  Every intermediate result is
minimized.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from .dfa.automaton import Dfa, DfaError, build_explicit, prop_letters, universal
from .dfa.ops import (AND, OR, complement, extend, fusion, minimize, product,
                      project)
from .qddc.semantics import rewrite_derived
from .qddc.syntax import (
    All, AllQ, And, Box, Chop, Diamond, EP, Ex, Ext, Formula, Front, Not, Or,
    PTrue, Point, Pref, Prop, Pt, QddcError, ScountCmp, SdurCmp, SlenCmp, Unit,
    Univ, VarRegistry, bound_vars, compare, iff,
)


class CountKind(enum.Enum):
    SLEN = "slen"
    SCOUNT = "scount"
    SDUR = "sdur"


def _prop_vars(reg, phi):
    return reg.sort(phi.variables())


def count_automaton(kind: CountKind, op: str, c: int, reg: VarRegistry,
                    phi: Optional[Prop] = None) -> Dfa:
    """Counter automaton for slen/scount/sdur compared against `c`.

    Counts saturate at c+1.  sdur keeps the truth of phi at the latest letter
    in a one-step delay register so that the final position is excluded.
    """
    cap = c + 1
    if kind is CountKind.SLEN:
        # state = number of letters read, saturating at c+2 (slen = letters-1)
        A = build_explicit(reg, (), 0, lambda s, a: min(s + 1, cap + 1),
                           lambda s: s >= 1 and compare(s - 1, op, c))
        return minimize(A)
    if phi is None:
        raise QddcError(f"{kind.value} needs a propositional argument")
    vars = _prop_vars(reg, phi)
    truth = prop_letters(phi, vars)
    if kind is CountKind.SCOUNT:
        A = build_explicit(reg, vars, 0, lambda s, a: min(s + int(truth[a]), cap),
                           lambda s: compare(s, op, c))
        return minimize(A)
    # sdur: state (count over all letters but the last, last letter satisfies phi)
    def step(s, a):
        cnt, last = s
        if last is not None:
            cnt = min(cnt + int(last), cap)
        return (cnt, bool(truth[a]))

    A = build_explicit(reg, vars, (0, None), step, lambda s: compare(s[0], op, c))
    return minimize(A)


def _atom(D: Formula, reg: VarRegistry) -> Dfa:
    vars = _prop_vars(reg, D.phi)
    truth = prop_letters(D.phi, vars)
    if isinstance(D, Point):
        # 0 start, 1 accept, 2 dead
        def step(s, a):
            return (1 if truth[a] else 2) if s == 0 else 2
        A = build_explicit(reg, vars, 0, step, lambda s: s == 1)
    elif isinstance(D, Front):
        # (letters read capped at 2, all letters but the last ok, last ok)
        def step(s, a):
            n, okprev, last = s
            return (min(n + 1, 2), okprev and (last if n else True), bool(truth[a]))
        A = build_explicit(reg, vars, (0, True, True), step, lambda s: s[0] == 2 and s[1])
    elif isinstance(D, All):
        A = build_explicit(reg, vars, True, lambda s, a: s and bool(truth[a]), lambda s: s)
    elif isinstance(D, Unit):
        # (letters read capped at 3, first letter ok)
        def step(s, a):
            n, ok = s
            return (min(n + 1, 3), bool(truth[a]) if n == 0 else ok)
        A = build_explicit(reg, vars, (0, False), step, lambda s: s[0] == 2 and s[1])
    elif isinstance(D, EP):
        A = build_explicit(reg, vars, False, lambda s, a: bool(truth[a]), lambda s: s)
    else:
        raise TypeError(D)
    return minimize(A)


def pref_of(A: Dfa) -> Dfa:
    """DFA for pref(L(A)): every nonempty prefix of the word is in L(A)."""
    n = A.n_states
    sink = n
    table = np.where(A.accepting[A.table], A.table, sink)
    table = np.vstack([table, np.full((1, A.n_letters), sink, table.dtype)])
    acc = np.append(A.accepting, False)
    # init can only be re-entered if it is accepting; otherwise its bit is moot
    acc[A.init] = True
    return minimize(Dfa(A.reg, A.vars, table, acc, A.init, check=False))


class Compiler:
    """Formula -> minimal Dfa with a structural memo table."""

    def __init__(self, reg: VarRegistry):
        self.base = reg
        self.reg = reg
        self.memo: Dict[Formula, Dfa] = {}

    def compile(self, D: Formula) -> Dfa:
        extra = [v for v in bound_vars(D) if v not in self.reg]
        if extra:
            self.reg = self.reg.with_witnesses(extra)
            self.memo = {}
        unknown = [v for v in D.free_vars() if v not in self.reg]
        if unknown:
            raise QddcError(f"formula uses undeclared variables {sorted(unknown)}")
        A = self._c(D)
        if self.reg is not self.base and all(v in self.base for v in A.vars):
            A = Dfa(self.base, A.vars, A.table, A.accepting, A.init)
        return A

    def _c(self, D: Formula) -> Dfa:
        hit = self.memo.get(D)
        if hit is not None:
            return hit
        A = self._build(D)
        self.memo[D] = A
        return A

    def _build(self, D: Formula) -> Dfa:
        reg = self.reg
        if isinstance(D, (Point, Front, All, Unit, EP)):
            return _atom(D, reg)
        if isinstance(D, Univ):
            return universal(reg)
        if isinstance(D, Pt):
            return self._c(Point(PTrue()))
        if isinstance(D, Ext):
            return complement(self._c(Pt()))
        if isinstance(D, SlenCmp):
            return count_automaton(CountKind.SLEN, D.op, D.c, reg)
        if isinstance(D, ScountCmp):
            return count_automaton(CountKind.SCOUNT, D.op, D.c, reg, D.phi)
        if isinstance(D, SdurCmp):
            return count_automaton(CountKind.SDUR, D.op, D.c, reg, D.phi)
        if isinstance(D, Not):
            return complement(self._c(D.arg))
        if isinstance(D, And):
            return product(self._c(D.left), self._c(D.right), AND)
        if isinstance(D, Or):
            return product(self._c(D.left), self._c(D.right), OR)
        if isinstance(D, Chop):
            return fusion(self._c(D.left), self._c(D.right))
        if isinstance(D, Ex):
            body = self._c(D.body)
            return project(body, D.var) if D.var in body.vars else body
        if isinstance(D, AllQ):
            return complement(self._c(Ex(D.var, Not(D.body))))
        if isinstance(D, Pref):
            if isinstance(D.arg, And):
                return product(self._c(Pref(D.arg.left)), self._c(Pref(D.arg.right)), AND)
            return pref_of(self._c(D.arg))
        if isinstance(D, Diamond):
            return self._c(Chop(Chop(Univ(), D.arg), Univ()))
        if isinstance(D, Box):
            return complement(self._c(Diamond(Not(D.arg))))
        raise TypeError(f"cannot compile {D!r}")


def compile_formula(D: Formula, reg: VarRegistry, compiler: Optional[Compiler] = None) -> Dfa:
    """Minimal total DFA accepting exactly the words satisfying D."""
    comp = compiler or Compiler(reg)
    return comp.compile(D)


# the operation is exported under its natural name as well
compile = compile_formula


def indicator(D: Formula, w: str, reg: VarRegistry, compiler: Optional[Compiler] = None,
              base: Optional[Dfa] = None) -> Dfa:
    """Monitor Ind(D, w): w must equal, at each position, the truth of D so far.

    All non-sink states are accepting; any letter whose w bit disagrees with
    D leads to the reject sink.
    """
    if w in D.free_vars():
        raise QddcError(f"indicator variable {w!r} occurs in its own formula")
    if w not in reg:
        reg = reg.with_witnesses([w])
    A = base if base is not None else compile_formula(D, reg, compiler)
    if A.reg is not reg:
        A = Dfa(reg, A.vars, A.table, A.accepting, A.init)
    vars = reg.sort(set(A.vars) | {w})
    A = extend(A, vars, reg)
    j = vars.index(w)
    m = len(vars)
    wbit = ((np.arange(1 << m) >> (m - 1 - j)) & 1).astype(bool)
    t = A.table
    ok = A.accepting[t] == wbit[None, :]
    sink = A.n_states
    table = np.where(ok, t, sink)
    table = np.vstack([table, np.full((1, 1 << m), sink, table.dtype)])
    acc = np.ones(sink + 1, bool)
    acc[sink] = False
    return minimize(Dfa(reg, vars, table, acc, A.init, check=False))
