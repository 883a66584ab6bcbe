"""Structural invariants of the pipeline on the packaged corpus and toys."""
import itertools

import numpy as np
import pytest

from qddctool.analysis import bottom_sccs, build_dtmc, check_dominance, stationary
from qddctool.compile import Compiler, indicator
from qddctool.dfa import AND, Dfa, build_explicit, extend, included, minimize, product
from qddctool.qddc import VarRegistry, all_words, batch_sat, parse_formula
from qddctool.synth import SynthSpec, compile_hard, full_alphabet, game_view, mps, synthesize
from qddctool.synth import value_iterate

REG = VarRegistry(("p",), ("q",))


def test_controllers_are_safe_on_random_runs(mine_runs, arb_runs):
    """Every prefix produced by a controller is accepted by the hard automaton."""
    rng = np.random.default_rng(2)
    for runs in (mine_runs, arb_runs):
        for r in runs.values():
            if not r.realizable:
                continue
            C = full_alphabet(r.controller)
            H = extend(r.hard_automaton, C.vars, C.reg)
            T = game_view(C)
            live = C.accepting.copy()
            if C.sink is not None:
                live[C.sink] = False
            NO = T.shape[2]
            for _ in range(1000):
                s, h = C.init, H.init
                for i in rng.integers(0, T.shape[1], size=50):
                    o = int(np.flatnonzero(live[T[s, i]])[0])
                    a = int(i) * NO + o
                    s, h = int(C.table[s, a]), int(H.table[h, a])
                    assert H.accepting[h]


def test_value_monotone_when_undiscounted(mine_runs, arb_runs):
    for r in (mine_runs[3], arb_runs[3]):
        vt = value_iterate(r.arena, 12, 1.0)
        assert (np.diff(vt.values, axis=0) >= -1e-12).all()


def test_mps_is_maximally_permissive():
    """Every non-blocking sub-supervisor of the requirement is included in MPS."""
    D = parse_formula("true^(slen = 1 && [[p]]) => true^(slen = 1 && scount q >= 1)", REG)
    A = full_alphabet(compile_hard(SynthSpec(REG, D)))
    S = mps(A)
    rng = np.random.default_rng(9)
    T = game_view(A)
    for _ in range(30):
        # random memoryless restriction of A: keep a random nonempty set of
        # outputs per (state, input), then keep only safe, non-blocking parts
        keep = rng.random(T.shape) < 0.6
        keep[..., rng.integers(0, T.shape[2])] = True
        SINK = "x"

        def step(s, a, keep=keep):
            if s == SINK:
                return SINK
            i, o = divmod(a, T.shape[2])
            t = int(T[s, i, o])
            return t if keep[s, i, o] and A.accepting[t] else SINK

        Sp = build_explicit(A.reg, A.vars, A.init, step, lambda s: s != SINK)
        G = mps(Sp)                # largest non-blocking part of the restriction
        if G is not None:
            assert included(G, S)


def test_stationary_residual_and_absorption(mine_runs, arb_runs):
    for runs in (mine_runs, arb_runs):
        for r in runs.values():
            if not r.realizable:
                continue
            chain = build_dtmc(r.controller, None)
            assert np.allclose(np.asarray(chain.P.sum(axis=1)).ravel(), 1.0, atol=1e-12)
            for b in bottom_sccs(chain.P):
                pi = stationary(chain.P, b)
                Q = chain.P[b][:, b].toarray()
                assert np.abs(pi @ Q - pi).max() <= 1e-10
                assert pi.sum() == pytest.approx(1.0)


def test_dominance_is_a_preorder(mine_runs):
    ms = [mine_runs[k].mphos for k in (1, 2, 3)]
    mon = Compiler(ms[0].reg).compile(parse_formula("true^<HH2O => PUMPON>",
                                                    VarRegistry(("HH2O", "HCH4"), ("PUMPON",))))
    rel = {(a, b): check_dominance(ms[a], ms[b], mon).holds for a in range(3) for b in range(3)}
    for a in range(3):
        assert rel[(a, a)]
    for a, b, c in itertools.product(range(3), repeat=3):
        if rel[(a, b)] and rel[(b, c)]:
            assert rel[(a, c)]


def test_indicator_tracks_pointwise_truth():
    D = parse_formula("[[p]] || true^<!q>", REG)
    reg = REG.with_witnesses(["w"])
    ind = indicator(D, "w", reg, Compiler(reg))
    for n in range(1, 6):
        vals = all_words(["p", "q"], n)
        sat = batch_sat(D, vals)[:, 0, :]               # truth of D on each prefix
        for w in range(len(sat)):
            word = [{"p": bool(vals["p"][w, j]), "q": bool(vals["q"][w, j]),
                     "w": bool(sat[w, j])} for j in range(n)]
            assert ind.accepts(word)
            word[-1]["w"] = not word[-1]["w"]
            assert not ind.accepts(word)
