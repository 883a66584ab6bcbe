"""Brute-force reference implementations used as cross-checks.

Everything here is deliberately naive (explicit words, explicit state sets,
plain recursion) so that it shares no code path with the vectorized
algorithms it checks.  Only suitable for small instances; the CLI enables
these under ``--oracle``.
"""
from __future__ import annotations

import itertools
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .compile import Compiler
from .dfa.automaton import Dfa
from .dfa.ops import included
from .qddc.semantics import holds
from .qddc.syntax import Formula, VarRegistry


def words(names: Sequence[str], n: int):
    """Every word of length n over `names` as a list of dicts."""
    letters = [dict(zip(names, bits)) for bits in itertools.product((False, True), repeat=len(names))]
    return itertools.product(letters, repeat=n)


def compile_mismatches(D: Formula, reg: VarRegistry, max_len: int = 4,
                       compiler: Optional[Compiler] = None, A: Optional[Dfa] = None):
    """Words (length 1..max_len) on which compile(D) and the semantics disagree."""
    A = A if A is not None else (compiler or Compiler(reg)).compile(D)
    names = list(A.vars)
    bad = []
    for n in range(1, max_len + 1):
        for w in words(names, n):
            w = list(w)
            if A.accepts(w) != holds(w, D):
                bad.append(w)
    return bad


def _edges(A: Dfa):
    """state -> {input letter -> set of successors over the other letters}."""
    ni = sum(1 for v in A.vars if A.reg.is_input(v))
    no = len(A.vars) - ni
    out = {}
    for s in range(A.n_states):
        row = {}
        for i in range(1 << ni):
            row[i] = [int(A.table[s, (i << no) | o]) for o in range(1 << no)]
        out[s] = row
    return out


def explicit_winning(A: Dfa) -> np.ndarray:
    """Safety-game winning region by naive iteration over explicit sets."""
    E = _edges(A)
    W = {s for s in range(A.n_states) if A.accepting[s] and s != A.sink}
    changed = True
    while changed:
        changed = False
        for s in list(W):
            if not all(any(t in W for t in succ) for succ in E[s].values()):
                W.discard(s)
                changed = True
    out = np.zeros(A.n_states, bool)
    out[list(W)] = True
    return out


def explicit_values(A: Dfa, weights: np.ndarray, H: int, gamma: float = 1.0) -> np.ndarray:
    """Val(s, H) by expanding the game tree over every input sequence.

    No memoization: each call explores all (2**|I|)**H input sequences with
    the best output at every node.  Returns an (H+1, n) table.
    """
    E = _edges(A)
    live = [bool(A.accepting[s]) and s != A.sink for s in range(A.n_states)]

    def val(s, p):
        if p == 0 or not live[s]:
            return 0.0
        tot = 0.0
        for succ in E[s].values():
            best = -np.inf
            for o, t in enumerate(succ):
                if live[t]:
                    best = max(best, weights[o] + gamma * val(t, p - 1))
            tot += best if np.isfinite(best) else 0.0
        return tot / len(E[s])

    return np.array([[val(s, p) for s in range(A.n_states)] for p in range(H + 1)])


def explicit_argmax(A: Dfa, weights: np.ndarray, vals: np.ndarray, H: int,
                    gamma: float = 1.0, tol: float = 1e-9) -> Dict[Tuple[int, int], List[int]]:
    """(state, input) -> optimal output letters at horizon H."""
    E = _edges(A)
    live = [bool(A.accepting[s]) and s != A.sink for s in range(A.n_states)]
    out = {}
    for s in range(A.n_states):
        if not live[s]:
            continue
        for i, succ in E[s].items():
            c = [(weights[o] + gamma * vals[H - 1][t]) if live[t] else -np.inf
                 for o, t in enumerate(succ)]
            b = max(c)
            out[(s, i)] = [o for o, x in enumerate(c) if np.isfinite(x) and x >= b - tol]
    return out


def refinement_chain(result) -> Dict[str, bool]:
    """L(Cnt) <= L(MPHOS) <= L(MPS) <= L(D^h) for a SynthResult."""
    chain = [("controller", result.controller), ("mphos", result.mphos),
             ("mps", result.mps), ("hard", result.hard_automaton)]
    chain = [(k, A) for k, A in chain if A is not None]
    out = {}
    for (ka, A), (kb, B) in zip(chain, chain[1:]):
        out[f"{ka}<={kb}"] = included(A, B)
    return out
