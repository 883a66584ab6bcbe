"""Case-study specifications, generated as ``.qsf`` text.

* ``minepump(w, eps, zeta, kappa)`` -- the mine pump controller.
* ``arbiter(n, k, i)`` -- synchronous bus arbiter with at most `i`
  simultaneous requests assumed and `k`-cycle response committed.
* ``arb_hard(n, k)``, ``arb_hard_assume(n, k, i)``, ``arb_soft(n, k)``,
  ``arb_tok(n)`` -- the arbiter variants.

Every generator emits assume{}/commit{} blocks where an assumption/commitment
pair exists, so ``--type`` can derive all four specification types.
"""
from __future__ import annotations

from itertools import combinations
from pathlib import Path
from typing import Callable, Dict

SPEC_DIR = Path(__file__).resolve().parent


def _block(name: str, lines) -> str:
    body = "\n".join(f"    {ln}" for ln in lines)
    return f"{name} {{\n{body}\n}}\n"


def minepump(w: int = 8, eps: int = 2, zeta: int = 6, kappa: int = 2) -> str:
    defs = [
        "// methane release: two leaks are separated by more than zeta cycles",
        "dc methane1(HCH4) {",
        "    []([HCH4]^[!HCH4]^<HCH4> => slen > zeta);",
        "}",
        "// a leak lasts less than kappa cycles",
        "dc methane2(HCH4) {",
        "    []([[HCH4]] => slen < kappa);",
        "}",
        "// pump capacity: eps cycles of pumping clear the water",
        "dc pumpcap1(HH2O, PUMPON) {",
        "    []!(slen = eps && ([[PUMPON && HH2O]]^<HH2O>));",
        "}",
        "dc MineAssume(HH2O, HCH4, PUMPON) {",
        "    methane1(HCH4) && methane2(HCH4) && pumpcap1(HH2O, PUMPON);",
        "}",
        "// safety: never pump with methane present or without water",
        "dc req1(HH2O, HCH4, PUMPON) {",
        "    true^<((HCH4 || !HH2O) => !PUMPON)>;",
        "}",
        "// water never stays high for w cycles",
        "dc req2(HH2O) {",
        "    !(true^([[HH2O]] && slen = w));",
        "}",
        "dc MineCommit(HH2O, HCH4, PUMPON) {",
        "    req1(HH2O, HCH4, PUMPON) && req2(HH2O);",
        "}",
    ]
    return "".join([
        f'#qsf "minepump_{w}_{eps}_{zeta}_{kappa}"\n',
        _block("interface", ["input HH2O, HCH4;", "output PUMPON monitor x, ga monitor x;",
                             f"constant w = {w}, eps = {eps}, zeta = {zeta}, kappa = {kappa};"]),
        _block("definitions", defs),
        _block("indefinitions", ["ga : MineCommit(HH2O, HCH4, PUMPON);"]),
        _block("hardreq", ["MineAssume(HH2O, HCH4, PUMPON) => MineCommit(HH2O, HCH4, PUMPON);"]),
        _block("softreq", ["useind ga;", "(ga);"]),
        _block("assume", ["MineAssume(HH2O, HCH4, PUMPON);"]),
        _block("commit", ["MineCommit(HH2O, HCH4, PUMPON);"]),
    ])


def _arb_defs(n: int, with_assume_i=None):
    rs = [f"r{j}" for j in range(1, n + 1)]
    As = [f"a{j}" for j in range(1, n + 1)]
    excl = " && ".join(f"(a{j} => !({' || '.join(a for a in As if a != f'a{j}')}))"
                       for j in range(1, n + 1)) if n > 1 else "true"
    defs = [
        "// acknowledgements are mutually exclusive",
        "dc exclusion() {",
        f"    true^<{excl}>;",
        "}",
        "// some request pending => some acknowledgement",
        "dc noloss() {",
        f"    true^<({' || '.join(rs)}) => ({' || '.join(As)})>;",
        "}",
        "// acknowledge only a requesting cell",
        "dc nospuriousack(a, r) {",
        "    true^<a => r>;",
        "}",
        "// k cycle response, i.e. slen = k-1",
        "dc response(r, a) {",
        "    true^(slen = k - 1 && [[r]]) => true^(slen = k - 1 && scount a >= 1);",
        "}",
        "dc ArbInv() {",
        "    exclusion() && noloss() && "
        + " && ".join(f"nospuriousack(a{j}, r{j})" for j in range(1, n + 1)) + ";",
        "}",
        "dc ArbResp() {",
        "    " + " && ".join(f"response(r{j}, a{j})" for j in range(1, n + 1)) + ";",
        "}",
        "dc ArbCommit() {",
        "    ArbInv() && ArbResp();",
        "}",
    ]
    if with_assume_i is not None:
        terms = []
        for m in range(with_assume_i + 1):
            for S in combinations(range(1, n + 1), m):
                terms.append("(" + " && ".join((f"r{j}" if j in S else f"!r{j}")
                                               for j in range(1, n + 1)) + ")")
        defs += [
            f"// at most {with_assume_i} simultaneous requests",
            "dc ArbAssume() {",
            "    [[ " + " || ".join(terms) + " ]];",
            "}",
        ]
    return defs


def _arb_iface(n, k, extra_out=()):
    ins = ", ".join(f"r{j}" for j in range(1, n + 1))
    outs = ", ".join([f"a{j}" for j in range(1, n + 1)] + list(extra_out))
    return _block("interface", [f"input {ins};", f"output {outs};", f"constant k = {k};"])


def arbiter(n: int = 5, k: int = 3, i: int = 2) -> str:
    """Arb(n,k,i): assumption ArbAssume(n,i), commitment ArbCommit(n,k)."""
    return "".join([
        f'#qsf "arbiter_{n}_{k}_{i}"\n',
        _arb_iface(n, k, [f"ga{k}"]),
        _block("definitions", _arb_defs(n, i)),
        _block("indefinitions", [f"ga{k} : ArbCommit();"]),
        _block("hardreq", ["ArbAssume() => ArbCommit();"]),
        _block("softreq", [f"useind ga{k};", f"(ga{k});"]),
        _block("assume", ["ArbAssume();"]),
        _block("commit", ["ArbCommit();"]),
    ])


def arb_hard(n: int = 5, k: int = 5) -> str:
    return "".join([
        f'#qsf "arb_hard_{n}_{k}"\n',
        _arb_iface(n, k),
        _block("definitions", _arb_defs(n)),
        _block("hardreq", ["ArbCommit();"]),
    ])


def arb_hard_assume(n: int = 5, k: int = 3, i: int = 2) -> str:
    return "".join([
        f'#qsf "arb_hard_assume_{n}_{k}_{i}"\n',
        _arb_iface(n, k),
        _block("definitions", _arb_defs(n, i)),
        _block("hardreq", ["ArbAssume() => ArbCommit();"]),
        _block("assume", ["ArbAssume();"]),
        _block("commit", ["ArbCommit();"]),
    ])


def arb_soft(n: int = 5, k: int = 3) -> str:
    """Invariant part hard; cell j's response soft with weight 2^j."""
    soft = [f"response(r{j}, a{j}) : 2^{j};" for j in range(n, 0, -1)]
    return "".join([
        f'#qsf "arb_soft_{n}_{k}"\n',
        _arb_iface(n, k),
        _block("definitions", _arb_defs(n)),
        _block("hardreq", ["ArbInv();"]),
        _block("softreq", soft),
    ])


def arb_tok(n: int = 5) -> str:
    """Token-ring arbiter; the token bits tok1..tokn are outputs."""
    toks = [f"tok{j}" for j in range(1, n + 1)]
    init = "<tok1" + "".join(f" && !tok{j}" for j in range(2, n + 1)) + ">^true"
    circ = " && ".join(f"({{{{tok{j}}}}}^(slen = 1) <=> (slen = 1)^{{{{tok{j % n + 1}}}}})"
                       for j in range(1, n + 1))
    resp = " && ".join(f"[[(r{j} && tok{j}) => a{j}]]" for j in range(1, n + 1))
    defs = _arb_defs(n) + [
        "dc TokInit() {", f"    {init};", "}",
        "dc TokCirculate() {", f"    []({circ});", "}",
        "dc TokResp() {", f"    {resp};", "}",
    ]
    ins = ", ".join(f"r{j}" for j in range(1, n + 1))
    outs = ", ".join([f"a{j}" for j in range(1, n + 1)] + toks)
    return "".join([
        f'#qsf "arb_tok_{n}"\n',
        _block("interface", [f"input {ins};", f"output {outs};", f"constant k = {n};"]),
        _block("definitions", defs),
        _block("hardreq", ["ArbInv() && TokInit() && TokCirculate() && TokResp();"]),
    ])


GENERATORS: Dict[str, Callable[..., str]] = {
    "minepump": minepump,
    "arbiter": arbiter,
    "arb_hard": arb_hard,
    "arb_hard_assume": arb_hard_assume,
    "arb_soft": arb_soft,
    "arb_tok": arb_tok,
}

# files shipped next to this module (regenerate with `write_corpus()`)
CORPUS = {
    "minepump.qsf": lambda: minepump(8, 2, 6, 2),
    "arbiter.qsf": lambda: arbiter(5, 3, 2),
    "arb_hard.qsf": lambda: arb_hard(5, 5),
    "arb_hard_assume.qsf": lambda: arb_hard_assume(5, 3, 2),
    "arb_soft.qsf": lambda: arb_soft(5, 3),
    "arb_tok.qsf": lambda: arb_tok(5),
}


def write_corpus(directory=SPEC_DIR) -> None:
    for fname, gen in CORPUS.items():
        (Path(directory) / fname).write_text(gen())


def path(name: str) -> Path:
    """Path of a packaged spec file, e.g. ``path('minepump')``."""
    p = SPEC_DIR / (name if name.endswith(".qsf") else name + ".qsf")
    if not p.exists():
        raise FileNotFoundError(p)
    return p
