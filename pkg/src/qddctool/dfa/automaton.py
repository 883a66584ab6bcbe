"""Total DFAs over valuation alphabets.

A `Dfa` reads letters that are valuations of an ordered set of variables
`vars` (a subset of a `VarRegistry`, listed in registry order).  A letter is
an integer: bit j (counting from the most significant end) is the value of
``vars[j]``.  With the registry order inputs < outputs < witnesses this means
``table.reshape(n, 2**|inputs|, 2**|rest|)`` separates the environment's and
the system's share of each letter.

The transition function is stored as a dense ``(n_states, 2**len(vars))``
int32 array.  A reduced ordered multi-terminal decision diagram view is
available through :func:`qddctool.dfa.diagram.build_diagram` for export and
for the symbolic controllable-predecessor pass.
"""
from __future__ import annotations

from collections import deque
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..qddc.syntax import PAnd, PFalse, PNot, POr, PTrue, PVar, Prop, QddcError, VarRegistry


class DfaError(QddcError):
    pass


def letter_bits(nvars: int) -> np.ndarray:
    """(2**nvars, nvars) bool matrix; row a is the valuation encoded by a."""
    a = np.arange(1 << nvars, dtype=np.int64)[:, None]
    shifts = np.arange(nvars - 1, -1, -1, dtype=np.int64)[None, :]
    return ((a >> shifts) & 1).astype(bool)


def prop_letters(phi: Prop, vars: Sequence[str]) -> np.ndarray:
    """Truth of `phi` on every letter over `vars` as a bool vector."""
    bits = letter_bits(len(vars))
    pos = {v: j for j, v in enumerate(vars)}

    def go(p):
        if isinstance(p, PTrue):
            return np.ones(len(bits), bool)
        if isinstance(p, PFalse):
            return np.zeros(len(bits), bool)
        if isinstance(p, PVar):
            if p.name not in pos:
                raise DfaError(f"variable {p.name!r} not in alphabet {tuple(vars)}")
            return bits[:, pos[p.name]].copy()
        if isinstance(p, PNot):
            return ~go(p.arg)
        if isinstance(p, PAnd):
            return go(p.left) & go(p.right)
        if isinstance(p, POr):
            return go(p.left) | go(p.right)
        raise TypeError(p)

    return go(phi)


def column_map(src: Sequence[str], dst: Sequence[str]) -> np.ndarray:
    """For each letter over `dst`, the index of its restriction to `src`.

    `src` must be a subset of `dst`; both in the same (registry) order.
    """
    pos = {v: j for j, v in enumerate(dst)}
    missing = [v for v in src if v not in pos]
    if missing:
        raise DfaError(f"variables {missing} not in target alphabet")
    bits = letter_bits(len(dst))
    out = np.zeros(len(bits), np.int64)
    for v in src:
        out = (out << 1) | bits[:, pos[v]]
    return out


class Dfa:
    """Immutable total DFA with a dense transition table.

    Parameters
    ----------
    reg : VarRegistry
    vars : variables read, in registry order
    table : int array (n, 2**len(vars))
    accepting : bool array (n,)
    init : initial state
    """

    __slots__ = ("reg", "vars", "table", "accepting", "init", "_diagram", "_sink")

    def __init__(self, reg: VarRegistry, vars: Sequence[str], table, accepting, init: int = 0,
                 check: bool = True):
        self.reg = reg
        self.vars = tuple(vars)
        table = np.ascontiguousarray(table, dtype=np.int32)
        accepting = np.asarray(accepting, dtype=bool)
        if table.ndim != 2:
            raise DfaError("transition table must be 2-dimensional")
        if check:
            if tuple(reg.sort(self.vars)) != self.vars:
                raise DfaError(f"variables {self.vars} not in registry order")
            n = table.shape[0]
            if table.shape[1] != 1 << len(self.vars):
                raise DfaError("table width does not match alphabet size")
            if accepting.shape != (n,):
                raise DfaError("accepting vector has wrong length")
            if n == 0 or not 0 <= init < n:
                raise DfaError("initial state out of range")
            if table.size and (table.min() < 0 or table.max() >= n):
                raise DfaError("transition target out of range (automaton must be total)")
        table.setflags(write=False)
        accepting.setflags(write=False)
        self.table = table
        self.accepting = accepting
        self.init = int(init)
        self._diagram = None
        self._sink = -2

    # -- basic properties
    @property
    def n_states(self) -> int:
        return self.table.shape[0]

    @property
    def state_count(self) -> int:
        return self.table.shape[0]

    @property
    def n_letters(self) -> int:
        return self.table.shape[1]

    @property
    def sink(self) -> Optional[int]:
        """A non-accepting absorbing state, if any."""
        if self._sink == -2:
            idx = np.arange(self.n_states)
            absorbing = (self.table == idx[:, None]).all(axis=1) & ~self.accepting
            hits = np.flatnonzero(absorbing)
            self._sink = int(hits[0]) if len(hits) else None
        return self._sink

    @property
    def live_count(self) -> int:
        return self.n_states - (1 if self.sink is not None else 0)

    def diagram(self):
        if self._diagram is None:
            from .diagram import build_diagram
            self._diagram = build_diagram(self)
        return self._diagram

    def __repr__(self):
        return (f"Dfa(states={self.n_states}, vars={list(self.vars)}, init={self.init}, "
                f"accepting={int(self.accepting.sum())}, sink={self.sink})")

    # -- words
    def letter_of(self, valuation: Mapping[str, bool]) -> int:
        a = 0
        for v in self.vars:
            try:
                a = (a << 1) | int(bool(valuation[v]))
            except KeyError:
                raise DfaError(f"valuation is missing variable {v!r}") from None
        return a

    def run(self, word: Sequence[Mapping[str, bool]]) -> List[int]:
        """State sequence q0, q1, ..., q_len visited on `word`."""
        q = self.init
        out = [q]
        for v in word:
            q = int(self.table[q, self.letter_of(v)])
            out.append(q)
        return out

    def accepts(self, word: Sequence[Mapping[str, bool]]) -> bool:
        if len(word) == 0:
            raise DfaError("words must be nonempty")
        return bool(self.accepting[self.run(word)[-1]])

    def accepts_batch(self, vals: Mapping[str, np.ndarray]) -> np.ndarray:
        """Vectorized acceptance for arrays name -> (W, n) of valuations."""
        arrs = [np.asarray(vals[v], bool) for v in self.vars]
        W, n = next(iter(vals.values())).shape
        letters = np.zeros((W, n), np.int64)
        for a in arrs:
            letters = (letters << 1) | a
        q = np.full(W, self.init, np.int64)
        for j in range(n):
            q = self.table[q, letters[:, j]]
        return self.accepting[q]

    # -- derived helpers
    def with_registry(self, reg: VarRegistry) -> "Dfa":
        return Dfa(reg, self.vars, self.table, self.accepting, self.init)

    def reachable(self) -> np.ndarray:
        """Bool mask of states reachable from init."""
        return reachable_from(self.table, [self.init])

    def successors_nonempty(self) -> np.ndarray:
        """States reachable by at least one letter."""
        return reachable_from(self.table, np.unique(self.table[self.init]))


def reachable_from(table: np.ndarray, seeds) -> np.ndarray:
    n = table.shape[0]
    seen = np.zeros(n, bool)
    frontier = np.unique(np.asarray(seeds, dtype=np.int64))
    seen[frontier] = True
    while len(frontier):
        nxt = np.unique(table[frontier])
        nxt = nxt[~seen[nxt]]
        seen[nxt] = True
        frontier = nxt
    return seen


def build_explicit(reg: VarRegistry, vars: Sequence[str], init: Hashable,
                   step: Callable[[Hashable, int], Hashable],
                   accept: Callable[[Hashable], bool], limit: int = 1_000_000) -> Dfa:
    """Explore an automaton given by Python callbacks (breadth first).

    `step(state, letter)` receives the integer letter over `vars`.
    """
    vars = reg.sort(vars)
    C = 1 << len(vars)
    ids: Dict[Hashable, int] = {init: 0}
    order = [init]
    rows = []
    k = 0
    while k < len(order):
        s = order[k]
        row = np.empty(C, np.int32)
        for a in range(C):
            t = step(s, a)
            j = ids.get(t)
            if j is None:
                j = len(order)
                if j >= limit:
                    raise DfaError("explicit construction exceeded state limit")
                ids[t] = j
                order.append(t)
            row[a] = j
        rows.append(row)
        k += 1
    acc = np.array([bool(accept(s)) for s in order])
    return Dfa(reg, vars, np.stack(rows), acc, 0)


def universal(reg: VarRegistry) -> Dfa:
    """Accepts every nonempty word."""
    return Dfa(reg, (), np.zeros((1, 1), np.int32), np.array([True]), 0)


def empty(reg: VarRegistry) -> Dfa:
    return Dfa(reg, (), np.zeros((1, 1), np.int32), np.array([False]), 0)
