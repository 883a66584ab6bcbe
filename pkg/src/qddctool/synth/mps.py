"""Safety games on DFAs: controllable predecessor and the maximally
permissive supervisor."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..dfa.automaton import Dfa, DfaError
from ..dfa.ops import extend, minimize


class Unrealizable(Exception):
    """The hard requirement cannot be enforced against every input sequence."""


def game_view(A: Dfa) -> np.ndarray:
    """Transition table as (n, 2**|inputs read|, 2**|other vars read|).

    Relies on the registry order inputs < outputs < witnesses.
    """
    ni = sum(1 for v in A.vars if A.reg.is_input(v))
    if any(A.reg.is_input(v) for v in A.vars[ni:]):
        raise DfaError("variable order violation: inputs must precede outputs")
    return A.table.reshape(A.n_states, 1 << ni, -1)


def full_alphabet(A: Dfa, witnesses: bool = True) -> Dfa:
    """Extend A to read every input and output (and witness) of its registry."""
    reg = A.reg
    names = reg.inputs + reg.outputs + (reg.witnesses if witnesses else ())
    return extend(A, names)


def cpre(A: Dfa, X: np.ndarray) -> np.ndarray:
    """States where every input admits an output leading into X."""
    T = game_view(A)
    X = np.asarray(X, bool)
    return X[T].any(axis=2).all(axis=1)


def winning_region(A: Dfa) -> np.ndarray:
    """Greatest fixpoint G = F & cpre(G), excluding the sink."""
    G = A.accepting.copy()
    if A.sink is not None:
        G[A.sink] = False
    T = game_view(A)
    while True:
        nxt = G & G[T].any(axis=2).all(axis=1)
        if (nxt == G).all():
            return G
        G = nxt


def prune_to(A: Dfa, keep_edge: np.ndarray, live: np.ndarray) -> Dfa:
    """Supervisor-form automaton: edges with keep_edge[s, a] survive, the rest
    go to a fresh sink; `live` states are accepting, everything else is
    absorbed by the sink."""
    n = A.n_states
    sink = n
    table = np.where(keep_edge & live[:, None], A.table, sink)
    table = np.vstack([table, np.full((1, A.n_letters), sink, table.dtype)])
    acc = np.append(live, False)
    init = A.init if live[A.init] else sink
    return minimize(Dfa(A.reg, A.vars, table, acc, init, check=False))


def mps(A_hard: Dfa, raise_on_failure: bool = False) -> Optional[Dfa]:
    """Maximally permissive supervisor of the invariance game for A_hard.

    Returns None (or raises Unrealizable) when the initial state cannot force
    every step into the winning region.
    """
    A = full_alphabet(A_hard)
    G = winning_region(A)
    T = game_view(A)
    init_ok = bool(G[T[A.init]].any(axis=1).all())
    if not init_ok:
        if raise_on_failure:
            raise Unrealizable("hard requirement is not realizable")
        return None
    live = G.copy()
    live[A.init] = True
    keep = G[A.table]
    S = prune_to(A, keep, live)
    return S


def is_supervisor(S: Dfa) -> bool:
    """Non-blocking: every live state offers an output for every input."""
    T = game_view(S)
    sink = S.sink
    live = np.ones(S.n_states, bool)
    if sink is not None:
        live[sink] = False
    reach = S.reachable()
    ok = live[T].any(axis=2).all(axis=1)
    return bool(ok[reach & live].all() and (S.accepting == live)[reach].all())


def is_deterministic(S: Dfa) -> bool:
    """Exactly one legal output for each live (reachable) state and input."""
    T = game_view(S)
    live = np.ones(S.n_states, bool)
    if S.sink is not None:
        live[S.sink] = False
    reach = S.reachable() & live
    return bool((live[T].sum(axis=2) == 1)[reach].all())
