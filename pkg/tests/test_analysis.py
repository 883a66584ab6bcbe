"""Expected value, must-dominance, MAXLEN, simulation and chain export."""
import itertools
import math

import numpy as np
import pytest

from qddctool.analysis import (build_dtmc, check_dominance, expected_value, maxlen,
                                monte_carlo, must_inputs, read_mrmc, read_trace, simulate,
                                steady_state_value, write_mrmc, write_trace)
from qddctool.compile import Compiler
from qddctool.qddc import QddcError, VarRegistry, parse_formula
from qddctool.synth import SynthSpec, determinize, full_alphabet, mps, compile_hard, synthesize

REG = VarRegistry(("p",), ("q",))
f = lambda text: parse_formula(text, REG)


@pytest.fixture(scope="module")
def copier():
    return synthesize(SynthSpec(REG, f("true^<q <=> p>"))).controller


@pytest.fixture(scope="module")
def lazy_ack():
    """Acks each request within 2 cycles, as late as possible."""
    hard = f("true^(slen = 1 && [[p]]) => true^(slen = 1 && scount q >= 1)")
    return synthesize(SynthSpec(REG, hard), ordering="!q").controller


# -- expected value --------------------------------------------------------

@pytest.mark.parametrize("commit,value", [
    ("<q>", 0.0),                              # a point formula: one-letter words only
    ("true^<q>", 0.5),                         # q copies a fair coin
    ("[[q]]", 0.0),                            # fails forever after the first 0
    ("<>(<q>)", 1.0),                          # holds forever after the first 1
    ("true^(slen = 1 && [[q]])", 0.25),        # last two inputs both 1
])
def test_expected_value_hand_computed(copier, commit, value):
    assert expected_value(copier, f(commit)) == pytest.approx(value, abs=1e-12)


def test_expected_value_without_commit_is_one(copier):
    assert expected_value(copier) == pytest.approx(1.0)


def test_nondeterministic_machine_is_rejected():
    S = mps(compile_hard(SynthSpec(REG, f("true"))))
    with pytest.raises(ValueError):
        build_dtmc(S, None)


def test_monte_carlo_agrees_on_corpus(mine_runs, arb_runs, mine_spec, arb_spec):
    for runs, spec in ((mine_runs, mine_spec), (arb_runs, arb_spec)):
        comp = Compiler(runs[3].controller.reg)
        mon = comp.compile(spec.commit)
        for k, r in runs.items():
            if not r.realizable:
                continue
            chain = build_dtmc(r.controller, mon)
            ev = steady_state_value(chain)
            mc = monte_carlo(chain, steps=10**6, seed=11)
            assert abs(ev - mc) <= 0.01, (k, ev, mc)


# -- must-dominance --------------------------------------------------------

def brute_must(S, C, max_len):
    """Input words (as tuples of bits) on which every allowed output sequence satisfies C."""
    A = full_alphabet(S)
    mon = Compiler(A.reg).compile(C)
    out = set()
    for n in range(1, max_len + 1):
        for ii in itertools.product((False, True), repeat=n):
            good = True
            for oo in itertools.product((False, True), repeat=n):
                w = [{"p": a, "q": b} for a, b in zip(ii, oo)]
                if A.accepts(w) and not mon.accepts(w):
                    good = False
                    break
            if good:
                out.add(ii)
    return out


def test_must_inputs_brute_force():
    S = mps(compile_hard(SynthSpec(REG, f("true^<p => q>"))))
    C = f("<>(<!q>)")
    M = must_inputs(S, C)
    brute = brute_must(S, C, 5)
    for n in range(1, 6):
        for ii in itertools.product((False, True), repeat=n):
            assert M.accepts([{"p": a} for a in ii]) == (ii in brute), ii


def test_dominance_directions():
    S = mps(compile_hard(SynthSpec(REG, f("true^<p => q>"))))
    C = f("true^<!q>")
    D = determinize(S, "!q")
    assert check_dominance(S, D, C).holds
    r = check_dominance(D, S, C)
    assert not r.holds
    w = r.counterexample
    assert len(w) == 1 and w[0]["p"] is False  # D keeps q low; S may raise it
    assert check_dominance(S, S, C)


# -- MAXLEN ----------------------------------------------------------------

def brute_maxlen(M, D, max_len):
    """Largest e - b over fragments of accepted words of length <= max_len."""
    A = full_alphabet(M)
    mon = Compiler(A.reg).compile(D)
    best = -1
    for n in range(1, max_len + 1):
        for bits in itertools.product((False, True), repeat=2 * n):
            w = [{"p": bits[2 * k], "q": bits[2 * k + 1]} for k in range(n)]
            if not A.accepts(w):
                continue
            for b in range(n):
                if mon.accepts(w[b:]):
                    best = max(best, n - 1 - b)
    return best


def test_maxlen_matches_brute_force(lazy_ack):
    D = f("[[p && !q]]")
    r = maxlen(lazy_ack, D)
    assert not r.unsatisfiable
    assert r.value == brute_maxlen(lazy_ack, D, 7)
    assert r.latency == r.value + 2


def test_maxlen_infinite_and_unsatisfiable(copier):
    assert math.isinf(maxlen(copier, f("[[!q]]")).value)
    assert maxlen(copier, f("[[p && !q]]")).unsatisfiable


def test_maxlen_respects_assumption(lazy_ack):
    free = maxlen(lazy_ack, f("[[p && !q]]"))
    calm = maxlen(lazy_ack, f("[[p && !q]]"), assume=f("[]([p] => slen < 1)"))
    assert calm.value <= free.value


# -- simulation and export -------------------------------------------------

def test_simulate_copier(copier, tmp_path):
    ins = [{"p": b} for b in (True, False, True, True)]
    mon = Compiler(REG).compile(f("[[q]]"))
    tr = simulate(copier, ins, mon)
    assert [o["q"] for o in tr.outputs] == [True, False, True, True]
    assert tr.monitor == [True, False, False, False]
    path = tmp_path / "t.csv"
    write_trace(tr, path)
    back = read_trace(path)
    assert [r["p"] for r in back] == [True, False, True, True]
    with pytest.raises(QddcError):
        simulate(copier, [{"zz": True}])


def test_mrmc_round_trip(copier, tmp_path):
    chain = build_dtmc(copier, Compiler(REG).compile(f("<q>")))
    tra, lab = write_mrmc(chain, tmp_path / "c")
    P, acc = read_mrmc(tmp_path / "c")
    assert np.allclose(P.toarray(), chain.P.toarray())
    assert (acc == chain.accepting).all()
    assert np.allclose(np.asarray(P.sum(axis=1)).ravel(), 1.0)
    assert tra.read_text().startswith(f"STATES {chain.n_states}\nTRANSITIONS ")
