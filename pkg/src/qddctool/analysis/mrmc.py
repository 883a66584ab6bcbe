"""Export of the controller/monitor Markov chain in MRMC's .tra/.lab format."""
from __future__ import annotations

from pathlib import Path
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp

from .expected import Dtmc


def write_mrmc(chain: Dtmc, basename) -> Tuple[Path, Path]:
    """Write `basename`.tra and `basename`.lab (1-based state ids)."""
    base = Path(basename)
    P = chain.P.tocoo()
    order = np.lexsort((P.col, P.row))
    rows, cols, vals = P.row[order], P.col[order], P.data[order]
    tra = base.with_suffix(".tra")
    lab = base.with_suffix(".lab")
    with open(tra, "w") as fh:
        fh.write(f"STATES {chain.n_states}\n")
        fh.write(f"TRANSITIONS {len(vals)}\n")
        for r, c, v in zip(rows, cols, vals):
            fh.write(f"{r + 1} {c + 1} {repr(float(v))}\n")
    with open(lab, "w") as fh:
        fh.write("#DECLARATION\naccept\n#END\n")
        for s in np.flatnonzero(chain.accepting):
            fh.write(f"{s + 1} accept\n")
    return tra, lab


def read_mrmc(basename) -> Tuple[sp.csr_matrix, np.ndarray]:
    """Parse files written by :func:`write_mrmc` (for round-trip checks)."""
    base = Path(basename)
    with open(base.with_suffix(".tra")) as fh:
        n = int(fh.readline().split()[1])
        m = int(fh.readline().split()[1])
        data = np.loadtxt(fh, ndmin=2) if m else np.zeros((0, 3))
    P = sp.csr_matrix((data[:, 2], (data[:, 0].astype(int) - 1, data[:, 1].astype(int) - 1)),
                      shape=(n, n))
    acc = np.zeros(n, bool)
    with open(base.with_suffix(".lab")) as fh:
        body = False
        for line in fh:
            line = line.strip()
            if line == "#END":
                body = True
                continue
            if body and line:
                s, name = line.split()[:2]
                if name == "accept":
                    acc[int(s) - 1] = True
    return P, acc
