"""Reduced ordered multi-terminal decision diagrams for DFA transitions.

Node ids >= 0 are decision nodes; a terminal for target state s is encoded
as ``-(s + 1)``.  Each decision node tests one variable (an index into
``Dfa.vars``) and has a low (variable false) and high child.  Nodes are
hash-consed per automaton, and no node has identical children, so the
diagram is canonical for the given variable order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Tuple

import numpy as np


def terminal(s):
    return -(np.asarray(s) + 1)


def target_of(code: int) -> int:
    return -code - 1


@dataclass(frozen=True)
class DecisionDiagram:
    vars: Tuple[str, ...]
    var: np.ndarray       # (N,) variable index tested by node
    lo: np.ndarray        # (N,) child codes
    hi: np.ndarray
    roots: np.ndarray     # (n_states,) root code per state

    @property
    def n_nodes(self) -> int:
        return len(self.var)

    def evaluate(self, state: int, letter: int) -> int:
        """Successor of `state` on the letter index (MSB = vars[0])."""
        m = len(self.vars)
        code = int(self.roots[state])
        while code >= 0:
            bit = (letter >> (m - 1 - int(self.var[code]))) & 1
            code = int(self.hi[code] if bit else self.lo[code])
        return target_of(code)

    def paths(self, state: int) -> Iterator[Tuple[str, int]]:
        """(cube, target) per root-to-terminal path; cube over {0,1,-}."""
        m = len(self.vars)
        stack = [(int(self.roots[state]), ["-"] * m)]
        while stack:
            code, cube = stack.pop()
            if code < 0:
                yield "".join(cube), target_of(code)
                continue
            v = int(self.var[code])
            c1 = list(cube)
            c1[v] = "1"
            c0 = list(cube)
            c0[v] = "0"
            stack.append((int(self.hi[code]), c1))
            stack.append((int(self.lo[code]), c0))

    def check(self) -> None:
        """Assert orderedness and reducedness (used by the test suite)."""
        for k in range(self.n_nodes):
            assert self.lo[k] != self.hi[k], f"node {k} is redundant"
            for ch in (self.lo[k], self.hi[k]):
                if ch >= 0:
                    assert self.var[ch] > self.var[k], f"node {k} breaks the order"
        trip = np.stack([self.var, self.lo, self.hi], axis=1)
        assert len(np.unique(trip, axis=0)) == len(trip), "duplicate nodes"

    def cpre(self, X: np.ndarray, is_input: np.ndarray) -> np.ndarray:
        """States from which every input admits an output leading into X.

        One bottom-up pass: terminals take X[s], input-variable nodes AND
        their children, output/witness nodes OR them.  Needs all input
        variables ordered before the others.
        """
        is_input = np.asarray(is_input, bool)
        ni = int(is_input.sum())
        if not is_input[:ni].all():
            raise ValueError("variable-order violation: inputs must precede outputs")
        X = np.asarray(X, bool)
        val = np.zeros(self.n_nodes, bool)

        def look(codes):
            out = np.empty(len(codes), bool)
            t = codes < 0
            out[t] = X[-codes[t] - 1]
            out[~t] = val[codes[~t]]
            return out

        # children test later variables, so sweep from the last variable up
        for v in sorted(set(self.var.tolist()), reverse=True):
            idx = np.flatnonzero(self.var == v)
            l, h = look(self.lo[idx]), look(self.hi[idx])
            val[idx] = (l & h) if is_input[v] else (l | h)
        return look(self.roots)


def build_diagram(A) -> DecisionDiagram:
    """Reduce A's dense table into a shared diagram, one level per variable."""
    m = len(A.vars)
    codes = terminal(A.table.astype(np.int64))          # (n, 2**m)
    vars_, los, his = [], [], []
    base = 0
    for v in range(m - 1, -1, -1):
        lo = codes[:, 0::2]
        hi = codes[:, 1::2]
        same = lo == hi
        out = np.where(same, lo, 0)
        need = ~same
        if need.any():
            pairs = np.stack([lo[need], hi[need]], axis=1)
            uniq, inv = np.unique(pairs, axis=0, return_inverse=True)
            out[need] = base + inv.ravel()
            vars_.append(np.full(len(uniq), v, np.int64))
            los.append(uniq[:, 0])
            his.append(uniq[:, 1])
            base += len(uniq)
        codes = out
    cat = lambda xs: np.concatenate(xs) if xs else np.zeros(0, np.int64)
    return DecisionDiagram(A.vars, cat(vars_), cat(los), cat(his), codes[:, 0].copy())
