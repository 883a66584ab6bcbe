"""Must-dominance: compare supervisors by the input sequences on which they
are guaranteed to satisfy a commitment."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional

from ..compile import Compiler
from ..dfa.automaton import Dfa
from ..dfa.ops import AND, AND_NOT, complement, extend, product, project_onto, shortest_word
from ..qddc.syntax import Formula, merge_registries
from ..synth.mps import full_alphabet


def _monitor(S: Dfa, C, compiler: Optional[Compiler]) -> Dfa:
    if isinstance(C, Dfa):
        return C
    return (compiler or Compiler(S.reg)).compile(C)


def must_inputs(S: Dfa, C, compiler: Optional[Compiler] = None) -> Dfa:
    """DFA over the inputs accepting ii iff every output oo with (ii, oo)
    allowed by S satisfies C.

    `C` may be a Formula or an already compiled monitor.
    """
    A = full_alphabet(S)
    mon = _monitor(S, C, compiler)
    bad = product(A, complement(mon), AND)           # allowed by S, violates C
    proj = project_onto(bad, A.reg.inputs)
    out = complement(proj)
    return extend(out, A.reg.inputs) if out.vars != A.reg.inputs else out


@dataclass
class DominanceResult:
    holds: bool
    counterexample: Optional[List[Dict[str, bool]]] = None

    def __bool__(self):
        return self.holds


def check_dominance(S1: Dfa, S2: Dfa, C, compiler: Optional[Compiler] = None) -> DominanceResult:
    """S1 <=dom S2: every input word on which S1 must satisfy C is one on
    which S2 must too.  On failure returns a shortest input word in
    MustInp(S1) minus MustInp(S2)."""
    if set(S1.reg.inputs) != set(S2.reg.inputs):
        raise ValueError("supervisors must share their input variables")
    comp = compiler
    if comp is None and not isinstance(C, Dfa):
        comp = Compiler(merge_registries(S1.reg, S2.reg))
    m1 = must_inputs(S1, C, comp)
    m2 = must_inputs(S2, C, comp)
    diff = product(m1, m2, AND_NOT)
    w = shortest_word(diff)
    return DominanceResult(w is None, w)
