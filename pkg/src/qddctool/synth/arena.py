"""Weighted arenas, finite-horizon value iteration and H-optimal pruning."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..compile import Compiler, indicator
from ..dfa.automaton import Dfa, DfaError, letter_bits
from ..dfa.ops import AND, extend, product
from ..qddc.syntax import Formula, QddcError, VarRegistry
from .mps import full_alphabet, game_view, prune_to

TOL = 1e-9


class BlockingError(DfaError):
    """A live state has an input with no legal output."""


@dataclass
class WeightedArena:
    """Supervisor over inputs, outputs and witnesses plus a label weight.

    `weights[o]` is the payoff of a transition whose non-input part is the
    letter o (see :func:`game_view`).
    """
    automaton: Dfa
    witnesses: Tuple[str, ...]
    witness_weights: Tuple[float, ...]
    weights: np.ndarray

    @property
    def n_states(self) -> int:
        return self.automaton.n_states


@dataclass
class ValueTable:
    values: np.ndarray      # (H+1, n) -- values[p, s] = Val(s, p)
    horizon: int
    gamma: float

    def at(self, p: int) -> np.ndarray:
        return self.values[p]


def _weight_vector(A: Dfa, witnesses, wweights) -> np.ndarray:
    rest = [v for v in A.vars if not A.reg.is_input(v)]
    bits = letter_bits(len(rest))
    wt = np.zeros(len(bits), float)
    for w, x in zip(witnesses, wweights):
        if w in rest:
            wt += x * bits[:, rest.index(w)]
    return wt


def lex_weights(k: int) -> List[float]:
    """Auto-weights 2^k, 2^(k-1), ..., 2^1 for a lexicographic soft list."""
    return [float(2 ** (k - j)) for j in range(k)]


def build_arena(S: Dfa, soft: Sequence[Tuple[Formula, float]],
                witnesses: Optional[Sequence[str]] = None,
                compiler: Optional[Compiler] = None,
                monitors: Optional[Sequence[Dfa]] = None) -> WeightedArena:
    """S x Ind(D_1, w_1) x ... x Ind(D_k, w_k) with wt = sum weight_i [w_i].

    Witness names default to w1, w2, ... (made fresh against the registry).
    `monitors` may supply precompiled automata for the soft formulas.
    """
    reg = S.reg
    soft = list(soft)
    if witnesses is None:
        witnesses = []
        for j in range(len(soft)):
            name = reg.fresh(f"w{j + 1}")
            while name in witnesses:
                name = name + "_"
            witnesses.append(name)
    witnesses = list(witnesses)
    if len(witnesses) != len(soft):
        raise QddcError("one witness name per soft requirement is needed")
    for (D, x), w in zip(soft, witnesses):
        if not x > 0:
            raise QddcError(f"soft weights must be positive, got {x}")
        if w in D.free_vars():
            raise QddcError(f"witness {w!r} occurs in its soft formula")
        if w in reg and w not in reg.witnesses and w not in reg.outputs:
            raise QddcError(f"witness {w!r} collides with an input variable")
    new = [w for w in witnesses if w not in reg]
    if new:
        reg = reg.with_witnesses(new)
    comp = compiler or Compiler(reg)
    A = Dfa(reg, S.vars, S.table, S.accepting, S.init) if S.reg is not reg else S
    for j, ((D, x), w) in enumerate(zip(soft, witnesses)):
        base = monitors[j] if monitors is not None else None
        ind = indicator(D, w, reg, comp, base=base)
        A = product(A, ind, AND)
    A = full_alphabet(A)
    wt = _weight_vector(A, witnesses, [x for _, x in soft])
    return WeightedArena(A, tuple(witnesses), tuple(float(x) for _, x in soft), wt)


def arena_of(S: Dfa) -> WeightedArena:
    """Arena with no soft requirements (all weights zero)."""
    A = full_alphabet(S)
    return WeightedArena(A, (), (), _weight_vector(A, (), ()))


def _live(A: Dfa) -> np.ndarray:
    live = A.accepting.copy()
    if A.sink is not None:
        live[A.sink] = False
    return live


def _candidates(arena: WeightedArena, val: np.ndarray, gamma: float):
    A = arena.automaton
    T = game_view(A)
    live = _live(A)
    cand = arena.weights[None, None, :] + gamma * val[T]
    cand = np.where(live[T], cand, -np.inf)
    return T, live, cand


def value_iterate(arena: WeightedArena, H: int, gamma: float = 1.0) -> ValueTable:
    """Val(s, p+1) = mean_i max_o [wt(o) + gamma * Val(delta(s,(i,o)), p)]."""
    if H < 1:
        raise ValueError("horizon must be at least 1")
    if not 0 < gamma <= 1:
        raise ValueError("discount must lie in (0, 1]")
    A = arena.automaton
    n = A.n_states
    vals = np.zeros((H + 1, n))
    T = game_view(A)
    live = _live(A)
    legal = live[T]
    blocked = ~legal.any(axis=2)
    bad = blocked.any(axis=1) & live & A.reachable()
    if bad.any():
        raise BlockingError(f"arena state {int(np.flatnonzero(bad)[0])} is blocking")
    wt = arena.weights[None, None, :]
    for p in range(H):
        cand = np.where(legal, wt + gamma * vals[p][T], -np.inf)
        best = cand.max(axis=2)
        best = np.where(blocked, 0.0, best)
        vals[p + 1] = np.where(live, best.mean(axis=1), 0.0)
    return ValueTable(vals, H, gamma)


def optimal_edges(arena: WeightedArena, vt: ValueTable) -> np.ndarray:
    """Bool (n, letters) mask of transitions achieving the optimum at horizon H."""
    T, live, cand = _candidates(arena, vt.values[vt.horizon - 1], vt.gamma)
    best = cand.max(axis=2, keepdims=True)
    keep = np.isfinite(cand) & (cand >= best - TOL)
    return keep.reshape(arena.automaton.n_states, -1)


def mphos(arena: WeightedArena, vt: ValueTable) -> Dfa:
    """Maximally permissive H-optimal sub-supervisor: keep all optimal outputs."""
    A = arena.automaton
    keep = optimal_edges(arena, vt)
    return prune_to(A, keep, _live(A))
