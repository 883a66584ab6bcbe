"""Running a controller on an input trace; CSV trace files."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np

from ..dfa.automaton import Dfa, letter_bits
from ..qddc.syntax import QddcError
from ..synth.mps import full_alphabet, game_view


@dataclass
class Trace:
    inputs: List[Dict[str, bool]]
    outputs: List[Dict[str, bool]]
    monitor: Optional[List[bool]] = None
    states: List[int] = field(default_factory=list)

    def __len__(self):
        return len(self.inputs)

    def rows(self) -> List[Dict[str, bool]]:
        return [{**i, **o} for i, o in zip(self.inputs, self.outputs)]


def simulate(cnt: Dfa, inputs: Sequence[Mapping[str, bool]],
             monitor: Optional[Dfa] = None) -> Trace:
    """Feed `inputs` to the controller, collecting its unique legal outputs.

    If `monitor` is given, also report after each step whether the word so
    far is accepted by it.
    """
    if len(inputs) == 0:
        raise ValueError("input trace is empty")
    A = full_alphabet(cnt)
    reg = A.reg
    ins = [v for v in A.vars if reg.is_input(v)]
    rest = [v for v in A.vars if not reg.is_input(v)]
    for row in inputs:
        unknown = set(row) - set(ins)
        if unknown:
            raise QddcError(f"trace mentions unknown input(s) {sorted(unknown)}")
    T = game_view(A)
    live = A.accepting.copy()
    if A.sink is not None:
        live[A.sink] = False
    obits = letter_bits(len(rest))
    s = A.init
    outs, states = [], []
    mon_bits = [] if monitor is not None else None
    m = monitor.init if monitor is not None else None
    for row in inputs:
        i = 0
        for v in ins:
            i = (i << 1) | int(bool(row.get(v, False)))
        legal = np.flatnonzero(live[T[s, i]])
        if len(legal) == 0:
            raise QddcError("controller blocks on this input trace")
        o = int(legal[0])
        val = {v: bool(obits[o, j]) for j, v in enumerate(rest)}
        full = {**{v: bool(row.get(v, False)) for v in ins}, **val}
        s = int(T[s, i, o])
        outs.append(val)
        states.append(s)
        if monitor is not None:
            m = int(monitor.table[m, monitor.letter_of(full)])
            mon_bits.append(bool(monitor.accepting[m]))
    clean_in = [{v: bool(r.get(v, False)) for v in ins} for r in inputs]
    return Trace(clean_in, outs, mon_bits, states)


def read_trace(path) -> List[Dict[str, bool]]:
    """CSV with a header of variable names and 0/1 rows."""
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        header = [h.strip() for h in next(rd)]
        rows = []
        for line in rd:
            if not line or all(not x.strip() for x in line):
                continue
            rows.append({h: x.strip() not in ("0", "", "false", "False") for h, x in zip(header, line)})
    return rows


def write_trace(trace: Trace, path, monitor_name: str = "monitor") -> None:
    rows = trace.rows()
    header = list(rows[0])
    if trace.monitor is not None:
        header.append(monitor_name)
    if hasattr(path, "write"):
        _write_rows(trace, rows, header, path)
    else:
        with open(path, "w", newline="") as fh:
            _write_rows(trace, rows, header, fh)


def _write_rows(trace, rows, header, fh):
    wr = csv.writer(fh, lineterminator="\n")
    wr.writerow(header)
    for k, r in enumerate(rows):
        line = [int(r[h]) for h in header if h in r]
        if trace.monitor is not None:
            line.append(int(trace.monitor[k]))
        wr.writerow(line)
