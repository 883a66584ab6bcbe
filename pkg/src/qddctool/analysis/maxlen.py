"""Worst-case latency: longest execution fragment satisfying a pattern."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.csgraph as csgraph

from ..compile import Compiler
from ..dfa.automaton import Dfa
from ..dfa.ops import AND, extend, product
from ..qddc.syntax import Formula, Pref, merge_registries
from ..synth.mps import full_alphabet


@dataclass
class MaxlenResult:
    """`value` is sup(e - b) over satisfying fragments (math.inf when
    unbounded); `unsatisfiable` flags an empty fragment set (value 0)."""
    value: float
    unsatisfiable: bool = False
    longest_word: Optional[float] = None

    @property
    def latency(self) -> float:
        """Response time in cycles: for a pattern like [[req && !ack]] the
        fragment [b, e] is followed by the releasing cycle e + 1, so the
        count runs from b to e + 1 inclusive, i.e. value + 2."""
        return 0 if self.unsatisfiable else self.value + 2


def _fragment_graph(M: Dfa, P: Dfa):
    """Edges of M' x P where M' starts in every reachable live state of M."""
    live = M.accepting & M.reachable()
    nm, nd = M.n_states, P.n_states
    mt = M.table.astype(np.int64)
    pt = P.table.astype(np.int64)
    # node id = m * nd + d
    nxt = mt[:, None, :] * nd + pt[None, :, :]          # (nm, nd, L)
    ok = live[mt][:, None, :] & live[:, None, None]
    ok = np.broadcast_to(ok, nxt.shape)
    src = np.broadcast_to((np.arange(nm)[:, None] * nd + np.arange(nd)[None, :])[:, :, None], nxt.shape)
    src, dst = src[ok], nxt[ok]
    N = nm * nd
    pairs = np.unique(src * N + dst)
    G = sp.csr_matrix((np.ones(len(pairs), np.int8), (pairs // N, pairs % N)), shape=(N, N))
    starts = np.flatnonzero(live) * nd + P.init
    accept = np.tile(P.accepting, nm) & np.repeat(live, nd)
    return G, starts, accept


def maxlen(M: Dfa, D, compiler: Optional[Compiler] = None,
           assume: Optional[Formula] = None) -> MaxlenResult:
    """sup {e - b | fragment [b, e] of an execution of M satisfies D}.

    `assume` restricts executions to those whose every prefix satisfies the
    given formula (controller composed with an environment assumption).
    """
    M = full_alphabet(M)
    comp = compiler or Compiler(M.reg)
    if assume is not None:
        M = product(M, extend(comp.compile(Pref(assume)), M.vars, M.reg), AND)
    P = D if isinstance(D, Dfa) else comp.compile(D)
    P = extend(P, M.vars, merge_registries(M.reg, P.reg))
    G, starts, accept = _fragment_graph(M, P)
    fwd = _reach(G, starts)
    bwd = _reach(G.T.tocsr(), np.flatnonzero(accept))
    core = fwd & bwd
    if not (core & accept).any():
        return MaxlenResult(0, True, 0)
    idx = np.flatnonzero(core)
    H = G[idx][:, idx]
    if H.diagonal().any():
        return MaxlenResult(math.inf, False, math.inf)
    ncomp, lab = csgraph.connected_components(H, directed=True, connection="strong")
    if ncomp < len(idx):
        return MaxlenResult(math.inf, False, math.inf)
    # DAG longest path (in letters) from a start node to an accepting node
    pos = np.full(G.shape[0], -1)
    pos[idx] = np.arange(len(idx))
    is_start = np.zeros(len(idx), bool)
    s = pos[starts]
    is_start[s[s >= 0]] = True
    depth = np.where(is_start, 0, -np.inf)
    indeg = np.asarray((H != 0).sum(axis=0)).ravel()
    order = []
    frontier = list(np.flatnonzero(indeg == 0))
    Hc = H.tocsr()
    indeg = indeg.copy()
    while frontier:
        u = frontier.pop()
        order.append(u)
        for v in Hc.indices[Hc.indptr[u]:Hc.indptr[u + 1]]:
            if depth[u] + 1 > depth[v]:
                depth[v] = depth[u] + 1
            indeg[v] -= 1
            if indeg[v] == 0:
                frontier.append(v)
    # depth counts letters read; a fragment of L letters is the interval
    # [b, b + L - 1]
    best = depth[accept[idx] & (depth >= 1)]
    if len(best) == 0:
        return MaxlenResult(0, True, 0)
    L = float(best.max())
    return MaxlenResult(L - 1, False, L)


def _reach(G: sp.csr_matrix, seeds) -> np.ndarray:
    seen = np.zeros(G.shape[0], bool)
    seeds = np.asarray(seeds, np.int64)
    seen[seeds] = True
    frontier = seeds
    while len(frontier):
        nb = G[frontier].indices
        nb = np.unique(nb)
        nb = nb[~seen[nb]]
        seen[nb] = True
        frontier = nb
    return seen
