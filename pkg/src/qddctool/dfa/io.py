"""Text formats: DOT, the automaton exchange format, controller tables.

Exchange format (``.aut``)::

    # comment lines start with '#'
    INPUTS r1 r2
    OUTPUTS a1 a2
    WITNESSES w1
    VARS r1 r2 a1 a2 w1
    STATES 5 INIT 0 ACCEPTING 0,1,2,3
    0 1-0-- 2
    ...

The INPUTS/OUTPUTS/WITNESSES/VARS lines are an extension carrying the
registry; the STATES header and ``src cube dst`` lines are the core format.
A cube is a string over {0,1,-}, one character per entry of VARS.
"""
from __future__ import annotations

from pathlib import Path
from typing import List, Sequence, Tuple

import numpy as np

from ..qddc.syntax import VarRegistry
from .automaton import Dfa, DfaError, letter_bits


def _literal_label(cube: str, vars: Sequence[str]) -> str:
    lits = [(v if c == "1" else "!" + v) for c, v in zip(cube, vars) if c != "-"]
    return " & ".join(lits) if lits else "true"


def to_dot(A: Dfa, name: str = "A", show_sink: bool = False) -> str:
    """Graphviz source: one edge per decision-diagram path."""
    d = A.diagram()
    sink = A.sink
    out = [f"digraph {name} {{", "  rankdir=LR;", '  node [shape=circle];',
           '  __start [shape=point];', f"  __start -> {A.init};"]
    for s in range(A.n_states):
        if s == sink and not show_sink:
            continue
        shape = "doublecircle" if A.accepting[s] else "circle"
        out.append(f"  {s} [shape={shape}];")
    for s in range(A.n_states):
        if s == sink and not show_sink:
            continue
        for cube, t in d.paths(s):
            if t == sink and not show_sink:
                continue
            out.append(f'  {s} -> {t} [label="{_literal_label(cube, A.vars)}"];')
    out.append("}")
    return "\n".join(out) + "\n"


def to_aut(A: Dfa) -> str:
    reg = A.reg
    d = A.diagram()
    lines = [
        "INPUTS " + " ".join(reg.inputs),
        "OUTPUTS " + " ".join(reg.outputs),
        "WITNESSES " + " ".join(reg.witnesses),
        "VARS " + " ".join(A.vars),
        f"STATES {A.n_states} INIT {A.init} ACCEPTING "
        + ",".join(str(int(s)) for s in np.flatnonzero(A.accepting)),
    ]
    for s in range(A.n_states):
        for cube, t in sorted(d.paths(s)):
            lines.append(f"{s} {cube or '-'} {t}")
    return "\n".join(lines) + "\n"


def _expand(cube: str) -> np.ndarray:
    """Letter indices matched by a cube (MSB = first character)."""
    idx = np.zeros(1, np.int64)
    for c in cube:
        if c == "0":
            idx = idx * 2
        elif c == "1":
            idx = idx * 2 + 1
        elif c == "-":
            idx = np.concatenate([idx * 2, idx * 2 + 1])
        else:
            raise DfaError(f"bad cube character {c!r}")
    return idx


def from_aut(text: str) -> Dfa:
    header = {"INPUTS": (), "OUTPUTS": (), "WITNESSES": ()}
    vars = None
    n = init = None
    acc: List[int] = []
    edges: List[Tuple[int, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        key = tok[0]
        if key in header:
            header[key] = tuple(tok[1:])
        elif key == "VARS":
            vars = tuple(tok[1:])
        elif key == "STATES":
            try:
                n = int(tok[1])
                init = int(tok[tok.index("INIT") + 1])
                k = tok.index("ACCEPTING")
                acc = [int(x) for x in ",".join(tok[k + 1:]).split(",") if x.strip()]
            except (ValueError, IndexError) as e:
                raise DfaError(f"line {lineno}: malformed STATES header") from e
        else:
            if len(tok) != 3:
                raise DfaError(f"line {lineno}: expected 'src cube dst'")
            edges.append((int(tok[0]), tok[1], int(tok[2])))
    if n is None:
        raise DfaError("missing STATES header")
    reg = VarRegistry(header["INPUTS"], header["OUTPUTS"], header["WITNESSES"])
    if vars is None:
        vars = reg.order
    m = len(vars)
    table = np.full((n, 1 << m), -1, np.int64)
    for s, cube, t in edges:
        if cube == "-" and m != 1:
            cube = "-" * m
        if m == 0:
            cube = ""
        if len(cube) != m:
            raise DfaError(f"cube {cube!r} does not match {m} variables")
        table[s, _expand(cube)] = t
    if (table < 0).any():
        raise DfaError("automaton is not total")
    accepting = np.zeros(n, bool)
    accepting[acc] = True
    return Dfa(reg, vars, table, accepting, init)


def _cover(members: np.ndarray, k: int) -> List[str]:
    """Cubes over k bits covering exactly the letter set `members` (bool, 2**k)."""
    if members.all():
        return ["-" * k]
    if not members.any():
        return []
    half = len(members) // 2
    return (["0" + c for c in _cover(members[:half], k - 1)]
            + ["1" + c for c in _cover(members[half:], k - 1)])


def controller_table(C: Dfa) -> str:
    """`state input_cube -> output_valuation next_state`, one line per
    (state, input cube) for a deterministic controller."""
    from ..synth.mps import full_alphabet, game_view
    A = full_alphabet(C)
    T = game_view(A)
    reg = A.reg
    ins = [v for v in A.vars if reg.is_input(v)]
    rest = [v for v in A.vars if not reg.is_input(v)]
    live = A.accepting.copy()
    if A.sink is not None:
        live[A.sink] = False
    lines = [f"# inputs: {' '.join(ins)}", f"# outputs: {' '.join(rest)}",
             f"# initial: {A.init}"]
    obits = letter_bits(len(rest))
    for s in np.flatnonzero(live):
        legal = live[T[s]]
        if not (legal.sum(axis=1) == 1).all():
            raise DfaError(f"state {s} is not deterministic/non-blocking")
        o = legal.argmax(axis=1)
        nxt = T[s, np.arange(T.shape[1]), o]
        key = o.astype(np.int64) * A.n_states + nxt
        for k in np.unique(key):
            ov, t = divmod(int(k), A.n_states)
            oval = "".join("1" if b else "0" for b in obits[ov]) if rest else "-"
            for cube in _cover(key == k, len(ins)):
                lines.append(f"{s} {cube or '-'} -> {oval} {t}")
    return "\n".join(lines) + "\n"


def save(A: Dfa, path) -> None:
    Path(path).write_text(to_aut(A))


def load(path) -> Dfa:
    return from_aut(Path(path).read_text())
