"""Reference semantics: derived-construct rewriting and interval evaluators.

`eval_interval` follows the inductive satisfaction relation literally and is
deliberately slow.  `batch_sat` evaluates a formula on *every* word of a
given length at once (numpy), and is what the exhaustive test-suites use.
Both are cross-checked against each other in the tests.
"""
from __future__ import annotations

import itertools
from typing import Dict, Iterable, Mapping, Sequence, Tuple

import numpy as np

from .syntax import (
    All, AllQ, And, Box, Chop, Diamond, EP, Ex, Ext, Formula, Front, Not, Or,
    PAnd, PFalse, PNot, POr, PTrue, PVar, Point, Pref, Prop, Pt, QddcError,
    ScountCmp, SdurCmp, SlenCmp, Unit, Univ, compare,
)

Valuation = Mapping[str, bool]
Word = Sequence[Valuation]


# -- derived constructs ----------------------------------------------------

def rewrite_derived(f: Formula) -> Formula:
    """Expand pt, ext, <>, [], pref and EP into core constructs."""
    if isinstance(f, Pt):
        return Point(PTrue())
    if isinstance(f, Ext):
        return Not(Point(PTrue()))
    if isinstance(f, Diamond):
        return Chop(Chop(Univ(), rewrite_derived(f.arg)), Univ())
    if isinstance(f, Box):
        inner = rewrite_derived(f.arg)
        return Not(Chop(Chop(Univ(), Not(inner)), Univ()))
    if isinstance(f, Pref):
        return Not(Chop(Not(rewrite_derived(f.arg)), Univ()))
    if isinstance(f, EP):
        return Chop(Univ(), Point(f.phi))
    if isinstance(f, (Chop, And, Or)):
        return type(f)(rewrite_derived(f.left), rewrite_derived(f.right))
    if isinstance(f, Not):
        return Not(rewrite_derived(f.arg))
    if isinstance(f, (Ex, AllQ)):
        return type(f)(f.var, rewrite_derived(f.body))
    return f


# -- direct evaluator ------------------------------------------------------

def eval_prop(v: Valuation, phi: Prop) -> bool:
    if isinstance(phi, PTrue):
        return True
    if isinstance(phi, PFalse):
        return False
    if isinstance(phi, PVar):
        try:
            return bool(v[phi.name])
        except KeyError:
            raise QddcError(f"valuation does not define variable {phi.name!r}") from None
    if isinstance(phi, PNot):
        return not eval_prop(v, phi.arg)
    if isinstance(phi, PAnd):
        return eval_prop(v, phi.left) and eval_prop(v, phi.right)
    if isinstance(phi, POr):
        return eval_prop(v, phi.left) or eval_prop(v, phi.right)
    raise TypeError(f"not a propositional formula: {phi!r}")


def eval_point(sigma: Word, i: int, phi: Prop) -> bool:
    """Truth of `phi` at position `i` of `sigma`."""
    if not 0 <= i < len(sigma):
        raise IndexError(f"position {i} outside word of length {len(sigma)}")
    return eval_prop(sigma[i], phi)


def _count(sigma, b, e, phi):
    return sum(1 for j in range(b, e + 1) if eval_prop(sigma[j], phi))


def eval_interval(sigma: Word, b: int, e: int, D: Formula) -> bool:
    """sigma, [b, e] |= D, by direct structural recursion."""
    if not (0 <= b <= e < len(sigma)):
        raise IndexError(f"invalid interval [{b}, {e}] for word of length {len(sigma)}")
    return _ev(sigma, b, e, D)


def _ev(sigma, b, e, D) -> bool:
    if isinstance(D, Point):
        return b == e and eval_prop(sigma[b], D.phi)
    if isinstance(D, Front):
        return b < e and all(eval_prop(sigma[j], D.phi) for j in range(b, e))
    if isinstance(D, All):
        return all(eval_prop(sigma[j], D.phi) for j in range(b, e + 1))
    if isinstance(D, Unit):
        return e == b + 1 and eval_prop(sigma[b], D.phi)
    if isinstance(D, Univ):
        return True
    if isinstance(D, Chop):
        return any(_ev(sigma, b, i, D.left) and _ev(sigma, i, e, D.right) for i in range(b, e + 1))
    if isinstance(D, Not):
        return not _ev(sigma, b, e, D.arg)
    if isinstance(D, And):
        return _ev(sigma, b, e, D.left) and _ev(sigma, b, e, D.right)
    if isinstance(D, Or):
        return _ev(sigma, b, e, D.left) or _ev(sigma, b, e, D.right)
    if isinstance(D, (Ex, AllQ)):
        want = isinstance(D, Ex)
        for bits in itertools.product((False, True), repeat=len(sigma)):
            variant = [dict(v, **{D.var: x}) for v, x in zip(sigma, bits)]
            if _ev(variant, b, e, D.body) == want:
                return want
        return not want
    if isinstance(D, SlenCmp):
        return compare(e - b, D.op, D.c)
    if isinstance(D, ScountCmp):
        return compare(_count(sigma, b, e, D.phi), D.op, D.c)
    if isinstance(D, SdurCmp):
        return compare(_count(sigma, b, e - 1, D.phi) if e > b else 0, D.op, D.c)
    if isinstance(D, Pt):
        return b == e
    if isinstance(D, Ext):
        return b < e
    if isinstance(D, Diamond):
        return any(_ev(sigma, i, j, D.arg) for i in range(b, e + 1) for j in range(i, e + 1))
    if isinstance(D, Box):
        return all(_ev(sigma, i, j, D.arg) for i in range(b, e + 1) for j in range(i, e + 1))
    if isinstance(D, Pref):
        return all(_ev(sigma, b, j, D.arg) for j in range(b, e + 1))
    if isinstance(D, EP):
        return eval_prop(sigma[e], D.phi)
    raise TypeError(f"not a formula: {D!r}")


def holds(sigma: Word, D: Formula) -> bool:
    """Whole-word satisfaction: sigma, [0, |sigma|-1] |= D."""
    if len(sigma) == 0:
        raise QddcError("words must be nonempty")
    return eval_interval(sigma, 0, len(sigma) - 1, D)


# -- batch evaluator -------------------------------------------------------

def all_words(names: Sequence[str], n: int) -> Dict[str, np.ndarray]:
    """Every word of length `n` over `names`, as name -> bool array (W, n).

    Word index w encodes the letters in row-major order: letter 0 occupies the
    most significant bits, and inside a letter the first name is most
    significant.
    """
    m = len(names)
    W = 1 << (m * n)
    idx = np.arange(W, dtype=np.int64)
    out = {}
    for k, name in enumerate(names):
        cols = []
        for pos in range(n):
            shift = (n - 1 - pos) * m + (m - 1 - k)
            cols.append((idx >> shift) & 1)
        out[name] = np.stack(cols, axis=1).astype(bool) if n else np.zeros((W, 0), bool)
    return out


def words_as_dicts(vals: Mapping[str, np.ndarray], w: int):
    names = list(vals)
    n = vals[names[0]].shape[1]
    return [{k: bool(vals[k][w, j]) for k in names} for j in range(n)]


def _prop_vec(vals, phi, W, n) -> np.ndarray:
    if isinstance(phi, PTrue):
        return np.ones((W, n), bool)
    if isinstance(phi, PFalse):
        return np.zeros((W, n), bool)
    if isinstance(phi, PVar):
        return vals[phi.name]
    if isinstance(phi, PNot):
        return ~_prop_vec(vals, phi.arg, W, n)
    if isinstance(phi, PAnd):
        return _prop_vec(vals, phi.left, W, n) & _prop_vec(vals, phi.right, W, n)
    if isinstance(phi, POr):
        return _prop_vec(vals, phi.left, W, n) | _prop_vec(vals, phi.right, W, n)
    raise TypeError(phi)


def batch_sat(D: Formula, vals: Mapping[str, np.ndarray]) -> np.ndarray:
    """Boolean tensor sat[w, b, e] for every word and interval (b <= e)."""
    arrays = list(vals.values())
    W, n = arrays[0].shape
    B = np.arange(n)[:, None]
    E = np.arange(n)[None, :]
    valid = B <= E
    return _bs(rewrite_derived(D), dict(vals), W, n, B, E, valid)


def _prefix(x: np.ndarray) -> np.ndarray:
    W, n = x.shape
    cs = np.zeros((W, n + 1), np.int32)
    np.cumsum(x, axis=1, out=cs[:, 1:])
    return cs


def _bs(D, vals, W, n, B, E, valid):
    if isinstance(D, Univ):
        return np.broadcast_to(valid, (W, n, n)).copy()
    if isinstance(D, (Point, Front, All, Unit, ScountCmp, SdurCmp)):
        ph = _prop_vec(vals, D.phi, W, n)
        if isinstance(D, Point):
            out = np.zeros((W, n, n), bool)
            out[:, np.arange(n), np.arange(n)] = ph
            return out
        if isinstance(D, Unit):
            out = np.zeros((W, n, n), bool)
            out[:, np.arange(n - 1), np.arange(1, n)] = ph[:, : n - 1]
            return out
        cs = _prefix(ph)
        cnt_incl = cs[:, None, 1:] - cs[:, :n, None]      # positions b..e
        cnt_excl = cs[:, None, :n] - cs[:, :n, None]      # positions b..e-1
        length = (E - B)[None]
        if isinstance(D, Front):
            return valid & (B < E) & (cnt_excl == length)
        if isinstance(D, All):
            return valid & (cnt_incl == length + 1)
        cnt = cnt_incl if isinstance(D, ScountCmp) else cnt_excl
        return valid & _cmp_arr(cnt, D.op, D.c)
    if isinstance(D, SlenCmp):
        return np.broadcast_to(valid & _cmp_arr(E - B, D.op, D.c), (W, n, n)).copy()
    if isinstance(D, Not):
        return valid & ~_bs(D.arg, vals, W, n, B, E, valid)
    if isinstance(D, And):
        return _bs(D.left, vals, W, n, B, E, valid) & _bs(D.right, vals, W, n, B, E, valid)
    if isinstance(D, Or):
        return _bs(D.left, vals, W, n, B, E, valid) | _bs(D.right, vals, W, n, B, E, valid)
    if isinstance(D, Chop):
        L = _bs(D.left, vals, W, n, B, E, valid).astype(np.float32)
        R = _bs(D.right, vals, W, n, B, E, valid).astype(np.float32)
        return np.matmul(L, R) > 0.5
    if isinstance(D, (Ex, AllQ)):
        V = 1 << n
        pv = all_words([D.var], n)[D.var]                 # (V, n)
        new = {k: np.repeat(a, V, axis=0) for k, a in vals.items() if k != D.var}
        new[D.var] = np.tile(pv, (W, 1))
        body = _bs(D.body, new, W * V, n, B, E, valid).reshape(W, V, n, n)
        return body.any(axis=1) if isinstance(D, Ex) else valid & body.all(axis=1)
    raise TypeError(f"unsupported node {D!r}")


def _cmp_arr(x, op, c):
    if op == "<":
        return x < c
    if op == "<=":
        return x <= c
    if op == "=":
        return x == c
    if op == ">=":
        return x >= c
    return x > c
