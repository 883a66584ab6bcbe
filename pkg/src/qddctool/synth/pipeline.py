"""End-to-end synthesis: hard requirement -> MPS -> MPHOS -> controller."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..compile import Compiler
from ..dfa.automaton import Dfa
from ..qddc.syntax import Formula, Pref, QddcError, Univ, VarRegistry, implies
from .arena import ValueTable, WeightedArena, build_arena, lex_weights, mphos, value_iterate
from .determinize import determinize, parse_ordering
from .mps import Unrealizable, mps

DEFAULT_H = 50
DEFAULT_GAMMA = 1.0


@dataclass
class SynthSpec:
    """Inputs/outputs (via `reg`), hard requirement and weighted soft list."""
    reg: VarRegistry
    hard: Formula
    soft: List[Tuple[Formula, float]] = field(default_factory=list)
    witnesses: Optional[List[str]] = None
    name: str = ""

    @staticmethod
    def lexicographic(reg, hard, soft_formulas, **kw) -> "SynthSpec":
        ws = lex_weights(len(soft_formulas))
        return SynthSpec(reg, hard, list(zip(soft_formulas, ws)), **kw)


def derive(kind: int, reg: VarRegistry, assume: Formula, commit: Formula,
           witness: Optional[str] = None, name: str = "") -> SynthSpec:
    """Type0..Type3 specifications from an assumption/commitment pair.

    Type0 = (C, true), Type1 = (A => C, true), Type2 = (true, C),
    Type3 = (A => C, C).
    """
    if kind == 0:
        hard, soft = commit, []
    elif kind == 1:
        hard, soft = implies(assume, commit), []
    elif kind == 2:
        hard, soft = Univ(), [(commit, 1.0)]
    elif kind == 3:
        hard, soft = implies(assume, commit), [(commit, 1.0)]
    else:
        raise ValueError(f"specification type must be 0..3, got {kind}")
    wit = [witness] if (soft and witness) else None
    return SynthSpec(reg, hard, soft, wit, name or f"type{kind}")


@dataclass
class SynthResult:
    realizable: bool
    hard_automaton: Dfa
    mps: Optional[Dfa] = None
    arena: Optional[WeightedArena] = None
    values: Optional[ValueTable] = None
    mphos: Optional[Dfa] = None
    controller: Optional[Dfa] = None
    timings: Dict[str, float] = field(default_factory=dict)

    def sizes(self) -> Dict[str, Optional[int]]:
        get = lambda A: None if A is None else A.n_states
        return {"hard": get(self.hard_automaton), "mps": get(self.mps),
                "mphos": get(self.mphos), "controller": get(self.controller)}


def compile_hard(spec: SynthSpec, compiler: Optional[Compiler] = None) -> Dfa:
    """Invariance automaton of the hard requirement (every prefix must satisfy it)."""
    comp = compiler or Compiler(spec.reg)
    return comp.compile(Pref(spec.hard))


def synthesize(spec: SynthSpec, H: int = DEFAULT_H, gamma: float = DEFAULT_GAMMA,
               ordering=(), compiler: Optional[Compiler] = None,
               stop_after: Optional[str] = None) -> SynthResult:
    """Run the full pipeline; `realizable` is False when MPS does not exist."""
    comp = compiler or Compiler(spec.reg)
    tm = {}
    t0 = time.perf_counter()
    hard = compile_hard(spec, comp)
    tm["compile"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    S = mps(hard)
    tm["mps"] = time.perf_counter() - t0
    res = SynthResult(S is not None, hard, S, timings=tm)
    if S is None or stop_after == "mps":
        return res
    t0 = time.perf_counter()
    arena = build_arena(S, spec.soft, spec.witnesses, comp)
    vt = value_iterate(arena, H, gamma)
    M = mphos(arena, vt)
    tm["mphos"] = time.perf_counter() - t0
    res.arena, res.values, res.mphos = arena, vt, M
    if stop_after == "mphos":
        return res
    t0 = time.perf_counter()
    res.controller = determinize(M, ordering)
    tm["determinize"] = time.perf_counter() - t0
    return res
