"""Automata algebra: product, complement, fusion, projection, minimization.

Every operation returns a new minimal total DFA.  Languages are over
nonempty words only; the acceptance bit of an initial state without incoming
transitions is therefore irrelevant and minimization treats it as a free
choice.
"""
from __future__ import annotations

from collections import deque
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..qddc.syntax import VarRegistry, merge_registries
from .automaton import Dfa, DfaError, column_map, letter_bits, reachable_from

Combiner = Callable[[np.ndarray, np.ndarray], np.ndarray]

AND: Combiner = np.logical_and
OR: Combiner = np.logical_or
XOR: Combiner = np.logical_xor


def AND_NOT(a, b):
    return a & ~b


def IMPLIES(a, b):
    return ~a | b


# -- alphabet handling -----------------------------------------------------

def extend(A: Dfa, vars: Sequence[str], reg: Optional[VarRegistry] = None) -> Dfa:
    """Same language, read over the larger alphabet `vars` (extra vars ignored)."""
    reg = reg or A.reg
    vars = reg.sort(set(vars) | set(A.vars))
    if vars == A.vars and reg is A.reg:
        return A
    cmap = column_map(A.vars, vars)
    return Dfa(reg, vars, A.table[:, cmap], A.accepting, A.init)


def _common(A: Dfa, B: Dfa):
    reg = merge_registries(A.reg, B.reg)
    vars = reg.sort(set(A.vars) | set(B.vars))
    return reg, vars


# -- minimization ----------------------------------------------------------

def _free_init(table: np.ndarray, init: int) -> bool:
    """True when no transition enters `init`, so its acceptance bit is moot."""
    return not np.any(table == init)


def minimize(A: Dfa) -> Dfa:
    """Canonical minimal DFA (states renumbered in BFS order from init)."""
    table, acc, init = A.table, A.accepting, A.init
    # 1. restrict to reachable states
    reach = reachable_from(table, [init])
    if not reach.all():
        keep = np.flatnonzero(reach)
        remap = np.full(len(reach), -1, np.int64)
        remap[keep] = np.arange(len(keep))
        table = remap[table[keep]]
        acc = acc[keep]
        init = int(remap[init])
    n = table.shape[0]
    free = _free_init(table, init) if n > 1 else True
    # 2. Moore partition refinement
    cls = acc.astype(np.int64)
    if free:
        cls = cls.copy()
        cls[init] = 2
    _, cls = np.unique(cls, return_inverse=True)
    ncls = cls.max() + 1
    while True:
        sig = np.concatenate([cls[:, None], cls[table]], axis=1)
        _, new = _unique_rows(sig)
        nnew = new.max() + 1
        cls = new
        if nnew == ncls:
            break
        ncls = nnew
    # 3. merge a free initial state into an equivalent-by-successors state
    if free and n > 1:
        succ = cls[table]
        match = np.flatnonzero((succ == succ[init]).all(axis=1))
        match = match[match != init]
        if len(match):
            target = cls[match[0]]
            old = cls[init]
            cls = np.where(cls == old, target, cls)
            cls = np.where(cls > old, cls - 1, cls)
            acc = acc.copy()
            acc[init] = acc[match[0]]
    # 4. quotient + canonical BFS numbering
    k = cls.max() + 1
    rep = np.zeros(k, np.int64)
    rep[cls[::-1]] = np.arange(n)[::-1]
    qtable = cls[table[rep]]
    qacc = acc[rep]
    qinit = int(cls[init])
    order = _bfs_order(qtable, qinit)
    inv = np.empty(k, np.int64)
    inv[order] = np.arange(k)
    out_table = inv[qtable[order]]
    out_acc = qacc[order]
    return Dfa(A.reg, A.vars, out_table, out_acc, 0, check=False)


def _unique_rows(a: np.ndarray):
    a = np.ascontiguousarray(a)
    if a.shape[1] == 0:
        return a[:1], np.zeros(len(a), np.int64)
    v = a.view(np.dtype((np.void, a.dtype.itemsize * a.shape[1]))).ravel()
    u, inv = np.unique(v, return_inverse=True)
    return u, inv.ravel()


def _bfs_order(table: np.ndarray, init: int) -> np.ndarray:
    """States in breadth-first discovery order (letters scanned in order)."""
    n = table.shape[0]
    seen = np.zeros(n, bool)
    seen[init] = True
    order = [np.array([init], np.int64)]
    frontier = order[0]
    while len(frontier):
        flat = table[frontier].ravel()
        _, first = np.unique(flat, return_index=True)
        cand = flat[np.sort(first)]
        cand = cand[~seen[cand]]
        seen[cand] = True
        if len(cand):
            order.append(cand.astype(np.int64))
        frontier = cand
    return np.concatenate(order)


def is_minimal(A: Dfa) -> bool:
    return minimize(A).n_states == A.n_states


# -- boolean combinations --------------------------------------------------

def complement(A: Dfa) -> Dfa:
    return Dfa(A.reg, A.vars, A.table, ~A.accepting, A.init, check=False)


def product_pairs(A: Dfa, B: Dfa):
    """Reachable pair graph of A x B over the union alphabet.

    Returns (vars, reg, table, a_of, b_of) where state k of the product is the
    pair (a_of[k], b_of[k]) and state 0 is the initial pair.
    """
    reg, vars = _common(A, B)
    tA = A.table[:, column_map(A.vars, vars)]
    tB = B.table[:, column_map(B.vars, vars)]
    nB = B.n_states
    start = np.array([A.init * nB + B.init], np.int64)
    frontiers = [start]
    known = start
    rows = []
    frontier = start
    while len(frontier):
        a, b = np.divmod(frontier, nB)
        succ = tA[a].astype(np.int64) * nB + tB[b]
        rows.append(succ)
        new = np.unique(succ)
        new = new[~_isin_sorted(new, known)]
        if len(new):
            known = np.union1d(known, new)
            frontiers.append(new)
        frontier = new
    order_codes = np.concatenate(frontiers)
    idx = np.argsort(order_codes)
    sorted_codes = order_codes[idx]
    succ_all = np.concatenate(rows, axis=0)
    table = idx[np.searchsorted(sorted_codes, succ_all)]
    a, b = np.divmod(order_codes, nB)
    return vars, reg, table, a, b


def product(A: Dfa, B: Dfa, combiner: Combiner = AND, minimal: bool = True) -> Dfa:
    """Reachable synchronous product; acceptance = combiner(acc_A, acc_B)."""
    vars, reg, table, a, b = product_pairs(A, B)
    acc = combiner(A.accepting[a], B.accepting[b])
    out = Dfa(reg, vars, table, acc, 0, check=False)
    return minimize(out) if minimal else out


def _isin_sorted(x: np.ndarray, sorted_known: np.ndarray) -> np.ndarray:
    pos = np.searchsorted(sorted_known, x)
    pos = np.minimum(pos, len(sorted_known) - 1)
    return sorted_known[pos] == x


def conjunction(items: Sequence[Dfa]) -> Dfa:
    items = list(items)
    out = items[0]
    for it in items[1:]:
        out = product(out, it, AND)
    return out


# -- subset construction ---------------------------------------------------

_CHUNK_CELLS = 1 << 24


def _determinize(delta: np.ndarray, init_set, nfa_acc: np.ndarray, reg, vars) -> Dfa:
    """Breadth-first subset construction, one layer of subsets at a time.

    `delta` is an int array (n, C, g): the g possible successors of NFA state
    m on letter c, -1 padding "no successor".  Subsets are bool rows, packed
    to bytes for hashing.
    """
    n, C, g = delta.shape
    pad = np.where(delta < 0, n, delta).astype(np.int64)   # column n = discard
    first = np.zeros(n, bool)
    first[np.asarray(init_set, np.int64)] = True
    ids: Dict[bytes, int] = {np.packbits(first).tobytes(): 0}
    subsets = [first]
    layer = [0]
    rows: Dict[int, np.ndarray] = {}
    chunk = max(1, _CHUNK_CELLS // (C * (n + 1)))
    dense = n * n * C <= _CHUNK_CELLS
    if dense:
        # adjacency (n, C*n): image of a subset = X @ M > 0, one BLAS call
        M = np.zeros((n, C, n + 1), np.float32)
        M[np.arange(n)[:, None, None], np.arange(C)[None, :, None], pad] = 1.0
        M = np.ascontiguousarray(M[:, :, :n].reshape(n, C * n))
    while layer:
        nxt_layer = []
        for lo in range(0, len(layer), chunk):
            part = layer[lo:lo + chunk]
            X = np.stack([subsets[k] for k in part])
            if dense:
                out = (X.astype(np.float32) @ M > 0).reshape(-1, n)
            else:
                kk, mm = np.nonzero(X)
                out = np.zeros((len(part), C, n + 1), bool)
                out[kk[:, None, None], np.arange(C)[None, :, None], pad[mm]] = True
                out = out[:, :, :n].reshape(-1, n)
            packed = np.ascontiguousarray(np.packbits(out, axis=1))
            keys, inv = _unique_rows(packed)
            target = np.empty(len(keys), np.int64)
            width = packed.shape[1]
            for j, key in enumerate(keys):
                b = key.tobytes()
                t = ids.get(b)
                if t is None:
                    t = len(subsets)
                    ids[b] = t
                    subsets.append(np.unpackbits(np.frombuffer(b, np.uint8), count=n).astype(bool))
                    nxt_layer.append(t)
                target[j] = t
            tt = target[inv].reshape(len(part), C)
            for k, r in zip(part, tt):
                rows[k] = r
        layer = nxt_layer
    table = np.stack([rows[k] for k in range(len(subsets))])
    S = np.stack(subsets)
    acc = (S & nfa_acc[None, :]).any(axis=1)
    return minimize(Dfa(reg, vars, table, acc, 0, check=False))


def fusion(A: Dfa, B: Dfa) -> Dfa:
    """Chop with a shared letter: sigma[0..i] in L(A) and sigma[i..] in L(B)."""
    reg, vars = _common(A, B)
    tA = A.table[:, column_map(A.vars, vars)].astype(np.int64)
    tB = B.table[:, column_map(B.vars, vars)].astype(np.int64)
    nA = A.n_states
    bridge = tB[B.init] + nA  # (C,)
    # NFA over A's states then B's; reading a letter into an accepting A
    # state may also jump to where B goes on that same (shared) letter
    jump = np.where(A.accepting[tA], bridge[None, :], -1)
    dA = np.stack([tA, jump], axis=2)
    dB = np.stack([tB + nA, np.full_like(tB, -1)], axis=2)
    acc = np.concatenate([np.zeros(nA, bool), B.accepting])
    return _determinize(np.concatenate([dA, dB]), [A.init], acc, reg, vars)


def project(A: Dfa, p: str) -> Dfa:
    """Existential projection of variable `p`."""
    if p not in A.vars:
        raise DfaError(f"automaton does not read variable {p!r}")
    vars = tuple(v for v in A.vars if v != p)
    j = A.vars.index(p)
    m = len(A.vars)
    bits = letter_bits(len(vars)).astype(np.int64)
    base = np.zeros(len(bits), np.int64)
    for k in range(len(vars)):
        pos = k if k < j else k + 1
        base |= bits[:, k] << (m - 1 - pos)
    c0 = base
    c1 = base | (1 << (m - 1 - j))
    delta = np.stack([A.table[:, c0], A.table[:, c1]], axis=2)
    return _determinize(delta, [A.init], A.accepting, A.reg, vars)


def project_many(A: Dfa, names) -> Dfa:
    out = A
    for p in names:
        if p in out.vars:
            out = project(out, p)
    return out


def project_onto(A: Dfa, keep: Sequence[str]) -> Dfa:
    """Existentially project away every variable not in `keep` (one subset
    construction instead of one per variable)."""
    vars = tuple(v for v in A.vars if v in set(keep))
    if vars == A.vars:
        return A
    m = len(A.vars)
    bits = letter_bits(m).astype(np.int64)
    pos = [A.vars.index(v) for v in vars]
    new_letter = np.zeros(len(bits), np.int64)
    for k, j in enumerate(pos):
        new_letter |= bits[:, j] << (len(vars) - 1 - k)
    groups = np.argsort(new_letter, kind="stable").reshape(1 << len(vars), -1)
    delta = A.table[:, groups]                   # (n, newL, g)
    return _determinize(delta, [A.init], A.accepting, A.reg, vars)

# -- decision procedures ---------------------------------------------------

def is_empty(A: Dfa) -> bool:
    """No nonempty word is accepted."""
    return not A.accepting[A.successors_nonempty()].any()


def language_equal(A: Dfa, B: Dfa) -> bool:
    return is_empty(product(A, B, XOR, minimal=False))


def included(A: Dfa, B: Dfa) -> bool:
    """L(A) is a subset of L(B)."""
    return is_empty(product(A, B, AND_NOT, minimal=False))


def shortest_word(A: Dfa) -> Optional[List[Dict[str, bool]]]:
    """A shortest nonempty accepted word, or None."""
    n = A.n_states
    parent = np.full(n, -1, np.int64)
    letter = np.full(n, -1, np.int64)
    depth_seen = np.zeros(n, bool)
    # states at depth 1
    q = deque()
    row = A.table[A.init]
    for a, t in enumerate(row):
        t = int(t)
        if not depth_seen[t]:
            depth_seen[t] = True
            parent[t] = -2
            letter[t] = a
            q.append(t)
    goal = None
    while q:
        s = q.popleft()
        if A.accepting[s]:
            goal = s
            break
        for a, t in enumerate(A.table[s]):
            t = int(t)
            if not depth_seen[t]:
                depth_seen[t] = True
                parent[t] = s
                letter[t] = a
                q.append(t)
    if goal is None:
        return None
    letters = []
    s = goal
    while True:
        letters.append(int(letter[s]))
        if parent[s] == -2:
            break
        s = int(parent[s])
    letters.reverse()
    bits = letter_bits(len(A.vars))
    return [{v: bool(bits[a, j]) for j, v in enumerate(A.vars)} for a in letters]


def restrict_states(A: Dfa, keep: np.ndarray, accepting_live: bool = True) -> Dfa:
    """Redirect every transition into a state outside `keep` to a fresh sink.

    If `accepting_live`, all kept states become accepting (supervisor form).
    """
    n = A.n_states
    sink = n
    table = np.where(keep[A.table], A.table, sink)
    table = np.vstack([table, np.full((1, A.n_letters), sink, table.dtype)])
    table[~np.append(keep, True)] = sink
    acc = np.append(keep if accepting_live else (A.accepting & keep), False)
    init = A.init if keep[A.init] else sink
    return minimize(Dfa(A.reg, A.vars, table, acc, init, check=False))
