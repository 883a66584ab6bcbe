"""Determinization of a supervisor by a lexicographic output ordering."""
from __future__ import annotations

from typing import List, Sequence, Tuple, Union

import numpy as np

from ..dfa.automaton import Dfa, letter_bits
from ..qddc.syntax import QddcError
from .mps import full_alphabet, game_view, prune_to

Literal = Tuple[str, bool]   # (variable, positive?)


def parse_ordering(spec: Union[str, Sequence]) -> List[Literal]:
    """'!o1,o2' or ['!o1', 'o2'] or [('o1', False), ...] -> literal list.

    `>` and `>>` are accepted as separators too.
    """
    if isinstance(spec, str):
        items = [t for t in spec.replace(">>", ",").replace(">", ",").split(",")]
    else:
        items = list(spec)
    out: List[Literal] = []
    for it in items:
        if isinstance(it, tuple):
            out.append((str(it[0]), bool(it[1])))
            continue
        it = str(it).strip()
        if not it:
            continue
        neg = it.startswith("!")
        out.append((it.lstrip("!").strip(), not neg))
    names = [n for n, _ in out]
    if len(set(names)) != len(names):
        raise QddcError("an output variable may appear at most once in an ordering")
    return out


def output_ranking(vars_rest: Sequence[str], ordering: Sequence[Literal], reg) -> np.ndarray:
    """Integer score per non-input letter; larger means preferred.

    Letters are compared by the bit vector (lit_1 satisfied, lit_2 satisfied,
    ...).  Variables missing from the ordering are appended as negated
    literals in registry order.
    """
    for name, _ in ordering:
        if name not in vars_rest:
            if name in reg and reg.is_input(name):
                raise QddcError(f"ordering mentions input variable {name!r}")
    lits = [(n, pos) for n, pos in ordering if n in vars_rest]
    covered = {n for n, _ in lits}
    lits += [(v, False) for v in vars_rest if v not in covered]
    bits = letter_bits(len(vars_rest))
    score = np.zeros(len(bits), np.int64)
    for name, pos in lits:
        b = bits[:, vars_rest.index(name)]
        score = (score << 1) | (b if pos else ~b)
    return score


def rank_valuations(outputs: Sequence[str], ordering) -> List[dict]:
    """All valuations of `outputs`, best first, under `ordering`."""
    from ..qddc.syntax import VarRegistry
    reg = VarRegistry((), tuple(outputs))
    score = output_ranking(list(outputs), parse_ordering(ordering), reg)
    bits = letter_bits(len(outputs))
    order = np.argsort(-score, kind="stable")
    return [{v: bool(bits[o, j]) for j, v in enumerate(outputs)} for o in order]


def determinize(S: Dfa, ordering) -> Dfa:
    """Keep, for each state and input, only the highest-ranked legal output."""
    ordering = parse_ordering(ordering)
    A = full_alphabet(S)
    T = game_view(A)
    rest = [v for v in A.vars if not A.reg.is_input(v)]
    score = output_ranking(rest, ordering, A.reg)
    live = A.accepting.copy()
    if A.sink is not None:
        live[A.sink] = False
    legal = live[T]
    s = np.where(legal, score[None, None, :], -1)
    pick = s.argmax(axis=2)
    keep = np.zeros_like(legal)
    n, NI, NO = T.shape
    keep[np.arange(n)[:, None], np.arange(NI)[None, :], pick] = True
    keep &= legal
    return prune_to(A, keep.reshape(n, -1), live)
