"""Command-line front end.

Subcommands: compile, synth, determinize, simulate, expected, dominance,
maxlen, export.  Exit codes::

    0  success (dominance: the relation holds)
    1  error (parse error, bad file, failed --oracle cross-check, ...)
    2  usage error
    3  hard requirement unrealizable
    4  dominance refuted

Set QDDCTOOL_LOG=debug|info|warning to control log output on stderr.
"""
from __future__ import annotations

import argparse
import logging
import math
import os
import sys
import time
from pathlib import Path
from typing import List, Optional

import numpy as np

from .. import __version__
from ..compile import Compiler
from ..dfa.automaton import Dfa, DfaError
from ..dfa.io import controller_table, load, save, to_aut, to_dot
from ..dfa.ops import project_onto
from ..qddc.parser import ParseError, parse_formula
from ..qddc.syntax import Formula, Pref, QddcError, VarRegistry
from ..synth import DEFAULT_GAMMA, DEFAULT_H, determinize, synthesize
from ..synth.mps import Unrealizable
from .qsf import QsfSpec, parse_qsf

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_UNREALIZABLE, EXIT_REFUTED = 0, 1, 2, 3, 4
EXPORTS = ("dot", "table", "mrmc", "aut")

log = logging.getLogger("qddctool")


def _setup_logging():
    level = os.environ.get("QDDCTOOL_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def ms(seconds: float) -> str:
    """Milliseconds to three significant digits."""
    return f"{float(f'{seconds * 1000:.3g}'):g} ms"


# -- argument helpers ------------------------------------------------------

def resolve_spec(arg: str) -> Path:
    """A spec path, or the name of a packaged spec (``minepump``, ``arbiter``...)."""
    p = Path(arg)
    if p.exists():
        return p
    from .. import specs
    try:
        return specs.path(p.name)
    except FileNotFoundError:
        raise FileNotFoundError(f"no such spec file: {arg}") from None


def load_formula(arg: str, reg: VarRegistry, block: str = "commit",
                 defs: Optional[str] = None) -> Formula:
    """`arg` is a .qsf file (its `block` is used), a file holding one formula,
    or inline formula text.  With `defs` (a .qsf file) the formula may use
    that file's constants and macros."""
    p = Path(arg)
    if p.suffix == ".qsf" or (not p.exists() and p.suffix == "" and _packaged(arg)):
        spec = parse_qsf(resolve_spec(arg))
        f = getattr(spec, block)
        if f is None:
            raise QddcError(f"{arg} has no {block}{{}} block")
        return f
    text = p.read_text() if p.exists() else arg
    if defs:
        ctx = parse_qsf(resolve_spec(defs))
        return parse_formula(text.strip().rstrip(";"), reg, ctx.constants, ctx.macros)
    return parse_formula(text.strip().rstrip(";"), reg)


def _packaged(name: str) -> bool:
    from .. import specs
    try:
        specs.path(name)
        return True
    except FileNotFoundError:
        return False


def _names(s: Optional[str]) -> tuple:
    return tuple(x.strip() for x in s.split(",") if x.strip()) if s else ()


def _write(text: str, out: Optional[str]):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def export_automaton(A: Dfa, fmt: str, out: Optional[str], name: str = "A",
                     commit: Optional[Formula] = None):
    """Write A in format `fmt`; mrmc writes <out>.tra and <out>.lab."""
    if fmt == "aut":
        _write(to_aut(A), out)
    elif fmt == "dot":
        _write(to_dot(A, name), out)
    elif fmt == "table":
        _write(controller_table(A), out)
    elif fmt == "mrmc":
        from ..analysis import export_mrmc
        base = str(Path(out).with_suffix("")) if out not in (None, "-") else name
        tra, lab = export_mrmc(A, commit, base)
        print(f"wrote {tra} {lab}")
    else:
        raise ValueError(f"unknown export format {fmt!r}")


def _suffixed(base: str, fmt: str) -> str:
    return str(Path(base).with_suffix({"aut": ".aut", "dot": ".dot", "table": ".table",
                                       "mrmc": ""}[fmt]))


# -- subcommands -----------------------------------------------------------

def cmd_compile(a) -> int:
    if a.formula is not None:
        reg = VarRegistry(_names(a.inputs), _names(a.outputs))
        D = parse_formula(a.formula, reg)
        name = "formula"
    else:
        if a.spec is None:
            raise QddcError("give a spec file or --formula")
        spec = parse_qsf(resolve_spec(a.spec))
        reg, name = spec.base_reg, spec.name
        if a.part in ("assume", "commit"):
            D = getattr(spec, a.part)
            if D is None:
                raise QddcError(f"spec has no {a.part}{{}} block")
        else:
            D = spec.synth_spec(a.type).hard
    if a.pref:
        D = Pref(D)
    t0 = time.perf_counter()
    A = Compiler(reg).compile(D)
    dt = time.perf_counter() - t0
    print(f"{name}: {A.n_states} states ({ms(dt)})", file=sys.stderr)
    if a.oracle:
        from ..oracle import compile_mismatches
        if len(A.vars) > 4:
            print("oracle: skipped (more than 4 variables)", file=sys.stderr)
        else:
            bad = compile_mismatches(D, reg, 4, A=A)
            print(f"oracle: {'ok' if not bad else f'{len(bad)} mismatching words'}", file=sys.stderr)
            if bad:
                return EXIT_ERROR
    export_automaton(A, a.export, a.output, name)
    return EXIT_OK


def _oracle_synth(res, H, gamma) -> bool:
    from ..oracle import explicit_values, explicit_winning, refinement_chain
    from ..synth import full_alphabet, value_iterate, winning_region
    ok = True
    A = full_alphabet(res.hard_automaton)
    if A.n_states <= 200:
        same = bool((explicit_winning(A) == winning_region(A)).all())
        print(f"oracle winning region: {'ok' if same else 'MISMATCH'}")
        ok &= same
    if res.arena is not None and res.arena.n_states <= 300:
        h = min(H, 2)
        vt = value_iterate(res.arena, h, gamma)
        ev = explicit_values(res.arena.automaton, res.arena.weights, h, gamma)
        same = bool(np.allclose(ev, vt.values, atol=1e-9))
        print(f"oracle values (H={h}): {'ok' if same else 'MISMATCH'}")
        ok &= same
    for k, v in refinement_chain(res).items():
        print(f"oracle {k}: {'ok' if v else 'VIOLATED'}")
        ok &= v
    return ok


def cmd_synth(a) -> int:
    spec = parse_qsf(resolve_spec(a.spec))
    sspec = spec.synth_spec(a.type)
    res = synthesize(sspec, H=a.H, gamma=a.gamma, ordering=a.ord or ())
    label = spec.name + (f" type{a.type}" if a.type is not None else "")
    sz = res.sizes()
    print(f"spec: {label}  H={a.H} gamma={a.gamma:g} ord={a.ord or '-'}")
    rows = [("hard", "compile"), ("mps", "mps"), ("mphos", "mphos"), ("controller", "determinize")]
    for key, tkey in rows:
        n = sz[key]
        cell = "-" if n is None else str(n)
        t = res.timings.get(tkey)
        tm = "" if (t is None or a.no_timings) else f"  ({ms(t)})"
        print(f"{key:>10}: {cell}{tm}")
    if not res.realizable:
        print("result: Unrealizable")
        return EXIT_UNREALIZABLE
    C = res.controller
    if a.project_witnesses and C.reg.witnesses:
        C = project_onto(C, C.reg.inputs + C.reg.outputs)
    if a.expected and spec.commit is not None:
        from ..analysis import expected_value
        print(f"expected: {expected_value(res.controller, spec.commit):.5f}")
    if a.output:
        save(C, _suffixed(a.output, "aut"))
        if a.save_mphos:
            save(res.mphos, str(Path(a.output).with_suffix("")) + ".mphos.aut")
        if a.save_mps:
            save(res.mps, str(Path(a.output).with_suffix("")) + ".mps.aut")
        for fmt in a.export or ():
            if fmt != "aut":
                export_automaton(C, fmt, _suffixed(a.output, fmt), spec.name, spec.commit)
    if a.oracle and not _oracle_synth(res, a.H, a.gamma):
        return EXIT_ERROR
    return EXIT_OK


def cmd_determinize(a) -> int:
    S = load(a.supervisor)
    C = determinize(S, a.ord or ())
    print(f"controller: {C.n_states} states", file=sys.stderr)
    export_automaton(C, a.export, a.output, "controller")
    return EXIT_OK


def cmd_simulate(a) -> int:
    from ..analysis import read_trace, simulate
    from ..analysis.simulate import write_trace
    C = load(a.controller)
    if a.trace:
        inputs = read_trace(a.trace)
    else:
        rng = np.random.default_rng(a.seed)
        bits = rng.integers(0, 2, size=(a.random, len(C.reg.inputs)))
        inputs = [{v: bool(b) for v, b in zip(C.reg.inputs, row)} for row in bits]
    mon = None
    if a.monitor:
        mon = Compiler(C.reg).compile(load_formula(a.monitor, C.reg, defs=a.defs))
    tr = simulate(C, inputs, mon)
    write_trace(tr, a.output or sys.stdout)
    return EXIT_OK


def cmd_expected(a) -> int:
    from ..analysis import build_dtmc, monte_carlo, steady_state_value
    C = load(a.controller)
    D = load_formula(a.commit, C.reg, defs=a.defs) if a.commit else None
    mon = Compiler(C.reg).compile(D) if D is not None else None
    chain = build_dtmc(C, mon)
    v = steady_state_value(chain)
    print(f"{v:.{a.digits}f}")
    if a.monte_carlo:
        mc = monte_carlo(chain, steps=a.monte_carlo, seed=a.seed)
        print(f"monte-carlo ({a.monte_carlo} steps, seed {a.seed}): {mc:.{a.digits}f}")
    return EXIT_OK


def cmd_dominance(a) -> int:
    from ..analysis import check_dominance
    S1, S2 = load(a.first), load(a.second)
    D = load_formula(a.commit, S1.reg, defs=a.defs)
    t0 = time.perf_counter()
    r = check_dominance(S1, S2, D)
    dt = time.perf_counter() - t0
    if r.holds:
        print(f"holds ({ms(dt)})" if not a.no_timings else "holds")
        return EXIT_OK
    print("refuted: input word guaranteed by the first but not the second:")
    names = list(S1.reg.inputs)
    print(",".join(names))
    for letter in r.counterexample:
        print(",".join(str(int(letter.get(n, False))) for n in names))
    return EXIT_REFUTED


def cmd_maxlen(a) -> int:
    from ..analysis import maxlen
    M = load(a.machine)
    assume = load_formula(a.assume, M.reg, "assume", defs=a.defs) if a.assume else None
    cells = _cells(a.cells) if a.cells else [None]
    comp = Compiler(M.reg)
    for c in cells:
        text = a.pattern if c is None else a.pattern.replace("{i}", str(c))
        D = load_formula(text, M.reg, defs=a.defs)
        r = maxlen(M, D, comp, assume=assume)
        show = lambda x: "inf" if math.isinf(x) else str(int(x))
        head = f"cell {c}: " if c is not None else ""
        if r.unsatisfiable:
            print(f"{head}unsatisfiable")
        else:
            print(f"{head}maxlen {show(r.value)}  latency {show(r.latency)}")
    return EXIT_OK


def _cells(s: str) -> List[int]:
    out = []
    for part in s.split(","):
        if "-" in part:
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def cmd_export(a) -> int:
    A = load(a.automaton)
    if a.project_witnesses and A.reg.witnesses:
        A = project_onto(A, A.reg.inputs + A.reg.outputs)
    D = load_formula(a.commit, A.reg, defs=a.defs) if a.commit else None
    export_automaton(A, a.export, a.output, Path(a.automaton).stem, D)
    return EXIT_OK


# -- parser ----------------------------------------------------------------

def _horizon(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("H must be at least 1")
    return v


def _gamma(s):
    v = float(s)
    if not 0 < v <= 1:
        raise argparse.ArgumentTypeError("gamma must lie in (0, 1]")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qddctool", description=__doc__.split("\n")[0],
                                formatter_class=argparse.RawDescriptionHelpFormatter,
                                epilog="exit codes: 0 ok, 1 error, 2 usage, 3 unrealizable, 4 refuted")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="compile a formula or spec requirement to a minimal DFA")
    c.add_argument("spec", nargs="?")
    c.add_argument("--formula", help="inline formula instead of a spec file")
    c.add_argument("--inputs", help="comma separated input variables (with --formula)")
    c.add_argument("--outputs", help="comma separated output variables (with --formula)")
    c.add_argument("--type", type=int, choices=range(4))
    c.add_argument("--part", choices=("hard", "assume", "commit"), default="hard")
    c.add_argument("--pref", action="store_true", help="compile pref(D), the invariance automaton")
    c.add_argument("--export", choices=EXPORTS, default="aut")
    c.add_argument("-o", "--output")
    c.add_argument("--oracle", action="store_true")
    c.set_defaults(func=cmd_compile)

    s = sub.add_parser("synth", help="MPS -> MPHOS -> controller")
    s.add_argument("spec", help=".qsf file or packaged spec name")
    s.add_argument("--type", type=int, choices=range(4))
    s.add_argument("--H", type=_horizon, default=DEFAULT_H)
    s.add_argument("--gamma", type=_gamma, default=DEFAULT_GAMMA)
    s.add_argument("--ord", help="output ordering, e.g. 'a1,a2' or '!PUMPON'")
    s.add_argument("--export", choices=EXPORTS, action="append")
    s.add_argument("-o", "--output", help="base path for the controller (.aut) and exports")
    s.add_argument("--save-mphos", action="store_true")
    s.add_argument("--save-mps", action="store_true")
    s.add_argument("--project-witnesses", action="store_true")
    s.add_argument("--expected", action="store_true", help="also report the expected value of commit{}")
    s.add_argument("--no-timings", action="store_true")
    s.add_argument("--oracle", action="store_true")
    s.set_defaults(func=cmd_synth)

    d = sub.add_parser("determinize", help="refine a supervisor by an output ordering")
    d.add_argument("supervisor")
    d.add_argument("--ord")
    d.add_argument("--export", choices=EXPORTS, default="aut")
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_determinize)

    m = sub.add_parser("simulate", help="run a controller on an input trace")
    m.add_argument("controller")
    g = m.add_mutually_exclusive_group(required=True)
    g.add_argument("--trace", help="CSV of inputs (header row of names)")
    g.add_argument("--random", type=int, metavar="N", help="N uniformly random steps")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--monitor", help="formula (file or text) whose acceptance is reported")
    m.add_argument("-o", "--output")
    m.add_argument("--defs", help="spec file whose constants and macros formulas may use")
    m.set_defaults(func=cmd_simulate)

    e = sub.add_parser("expected", help="long-run probability of a commitment")
    e.add_argument("controller")
    e.add_argument("--commit", help="formula file, inline formula or .qsf (commit block)")
    e.add_argument("--monte-carlo", type=int, metavar="STEPS")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--digits", type=int, default=5)
    e.add_argument("--defs", help="spec file whose constants and macros formulas may use")
    e.set_defaults(func=cmd_expected)

    o = sub.add_parser("dominance", help="check FIRST <=dom SECOND w.r.t. a commitment")
    o.add_argument("first")
    o.add_argument("second")
    o.add_argument("--commit", required=True)
    o.add_argument("--no-timings", action="store_true")
    o.add_argument("--defs", help="spec file whose constants and macros formulas may use")
    o.set_defaults(func=cmd_dominance)

    x = sub.add_parser("maxlen", help="longest fragment satisfying a pattern")
    x.add_argument("machine")
    x.add_argument("--pattern", required=True, help="formula; '{i}' is replaced per --cells")
    x.add_argument("--cells", help="e.g. 1-5 or 1,3")
    x.add_argument("--assume", help="environment assumption (formula or .qsf assume block)")
    x.add_argument("--defs", help="spec file whose constants and macros formulas may use")
    x.set_defaults(func=cmd_maxlen)

    t = sub.add_parser("export", help="convert an automaton file")
    t.add_argument("automaton")
    t.add_argument("--export", choices=EXPORTS, required=True)
    t.add_argument("--commit", help="labelling formula for mrmc")
    t.add_argument("--project-witnesses", action="store_true")
    t.add_argument("-o", "--output")
    t.add_argument("--defs", help="spec file whose constants and macros formulas may use")
    t.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    a = parser.parse_args(argv)
    if getattr(a, "ord", None):
        pass
    try:
        return a.func(a)
    except Unrealizable as ex:
        print(f"unrealizable: {ex}", file=sys.stderr)
        return EXIT_UNREALIZABLE
    except (ParseError, QddcError, DfaError, FileNotFoundError, ValueError, OSError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        log.debug("traceback", exc_info=True)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
