"""Long-run (steady-state) probability that a commitment holds under a
controller driven by uniform i.i.d. inputs."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.csgraph as csgraph
import scipy.sparse.linalg as spla

from ..compile import Compiler
from ..dfa.automaton import Dfa
from ..dfa.ops import extend, product_pairs
from ..qddc.syntax import Formula
from ..synth.mps import full_alphabet, game_view


@dataclass
class Dtmc:
    """Markov chain over reachable (controller, monitor) states; state 0 initial."""
    P: sp.csr_matrix
    accepting: np.ndarray
    next_state: np.ndarray      # (n, 2**|I|) successor for each input letter
    ctrl_state: np.ndarray
    mon_state: np.ndarray

    @property
    def n_states(self) -> int:
        return self.P.shape[0]


def _live(A: Dfa) -> np.ndarray:
    live = A.accepting.copy()
    if A.sink is not None:
        live[A.sink] = False
    return live


def build_dtmc(cnt: Dfa, monitor: Optional[Dfa]) -> Dtmc:
    """Product of a deterministic controller with a (total) monitor DFA.

    Every live state has one successor per input valuation, each with
    probability 2**-|I|; the chain is labelled accepting where the monitor is.
    """
    A = full_alphabet(cnt)
    if monitor is None:
        from ..dfa.automaton import universal
        monitor = universal(A.reg)
    mon = extend(monitor, A.vars, A.reg) if set(monitor.vars) <= set(A.vars) else monitor
    vars, reg, table, a_of, b_of = product_pairs(A, mon)
    # the product reads the controller's full alphabet, so the game view applies
    from ..dfa.automaton import Dfa as _D
    prod = _D(reg, vars, table, np.ones(len(a_of), bool), 0, check=False)
    T = game_view(prod)
    live_c = _live(A)
    legal = live_c[a_of][T]                      # (n, NI, NO)
    count = legal.sum(axis=2)
    nI = T.shape[1]
    # restrict to states reachable through legal moves
    pick = legal.argmax(axis=2)
    nxt = T[np.arange(len(a_of))[:, None], np.arange(nI)[None, :], pick]
    seen = np.zeros(len(a_of), bool)
    seen[0] = True
    frontier = np.array([0])
    while len(frontier):
        bad = count[frontier] != 1
        if bad.any():
            raise ValueError("controller is not deterministic and non-blocking")
        cand = np.unique(nxt[frontier])
        cand = cand[~seen[cand]]
        seen[cand] = True
        frontier = cand
    keep = np.flatnonzero(seen)
    remap = np.full(len(a_of), -1, np.int64)
    remap[keep] = np.arange(len(keep))
    nxt = remap[nxt[keep]]
    n = len(keep)
    rows = np.repeat(np.arange(n), nI)
    P = sp.csr_matrix((np.full(n * nI, 1.0 / nI), (rows, nxt.ravel())), shape=(n, n))
    P.sum_duplicates()
    acc = mon.accepting[b_of[keep]]
    return Dtmc(P, acc, nxt, a_of[keep], b_of[keep])


def bottom_sccs(P: sp.csr_matrix) -> List[np.ndarray]:
    ncomp, labels = csgraph.connected_components(P, directed=True, connection="strong")
    coo = P.tocoo()
    leaving = np.zeros(ncomp, bool)
    cross = labels[coo.row] != labels[coo.col]
    leaving[labels[coo.row[cross]]] = True
    return [np.flatnonzero(labels == c) for c in range(ncomp) if not leaving[c]]


def stationary(P: sp.csr_matrix, members: np.ndarray) -> np.ndarray:
    """Stationary distribution of the closed class `members` (time average)."""
    k = len(members)
    if k == 1:
        return np.ones(1)
    Q = P[members][:, members].toarray()
    M = Q.T - np.eye(k)
    M[-1, :] = 1.0
    rhs = np.zeros(k)
    rhs[-1] = 1.0
    pi = np.linalg.solve(M, rhs)
    return pi


def absorption(P: sp.csr_matrix, bsccs: List[np.ndarray], start: int = 0) -> np.ndarray:
    """Probability of ending in each BSCC from `start`."""
    n = P.shape[0]
    where = np.full(n, -1)
    for j, b in enumerate(bsccs):
        where[b] = j
    if where[start] >= 0:
        out = np.zeros(len(bsccs))
        out[where[start]] = 1.0
        return out
    trans = np.flatnonzero(where < 0)
    pos = np.full(n, -1)
    pos[trans] = np.arange(len(trans))
    Q = P[trans][:, trans]
    A = sp.identity(len(trans), format="csc") - Q.tocsc()
    out = np.zeros(len(bsccs))
    for j, b in enumerate(bsccs):
        r = np.asarray(P[trans][:, b].sum(axis=1)).ravel()
        x = spla.spsolve(A, r)
        x = np.atleast_1d(x)
        out[j] = x[pos[start]]
    return out


def steady_state_value(chain: Dtmc) -> float:
    bs = bottom_sccs(chain.P)
    reach = absorption(chain.P, bs, 0)
    total = 0.0
    for pr, b in zip(reach, bs):
        if pr == 0:
            continue
        pi = stationary(chain.P, b)
        total += pr * float(pi[chain.accepting[b]].sum())
    return total


def expected_value(cnt: Dfa, C: Optional[Formula] = None, monitor: Optional[Dfa] = None,
                   compiler: Optional[Compiler] = None) -> float:
    """Long-run fraction of steps at which C holds (uniform i.i.d. inputs)."""
    if monitor is None and C is not None:
        monitor = (compiler or Compiler(cnt.reg)).compile(C)
    chain = build_dtmc(cnt, monitor)
    return steady_state_value(chain)


def monte_carlo(chain: Dtmc, steps: int = 1_000_000, seed: int = 0, burn_in: int = 1000) -> float:
    """Empirical long-run accepting fraction along one random run."""
    rng = np.random.default_rng(seed)
    nI = chain.next_state.shape[1]
    inputs = rng.integers(0, nI, size=steps + burn_in)
    nxt = chain.next_state
    acc = chain.accepting
    s = 0
    hits = 0
    # chunked pure-python walk; the chain is small so this stays fast
    nxt_list = nxt.tolist()
    acc_list = acc.tolist()
    for k, i in enumerate(inputs.tolist()):
        s = nxt_list[s][i]
        if k >= burn_in and acc_list[s]:
            hits += 1
    return hits / steps
