"""DFA algebra against brute-force word enumeration, diagrams and file IO."""
import itertools

import numpy as np
import pytest

from qddctool.dfa import (AND, AND_NOT, OR, Dfa, build_diagram, complement, controller_table,
                           from_aut, fusion, included, is_empty, is_minimal, language_equal,
                           minimize, product, project, project_onto, shortest_word, to_aut, to_dot)
from qddctool.qddc import VarRegistry
from qddctool.synth import cpre, full_alphabet

REG = VarRegistry(("p",), ("q", "r"))


def random_dfa(rng, vars, n=4):
    table = rng.integers(0, n, size=(n, 1 << len(vars)))
    acc = rng.random(n) < 0.5
    return Dfa(REG, vars, table, acc, 0)


def words(vars, max_len):
    letters = [dict(zip(vars, b)) for b in itertools.product((False, True), repeat=len(vars))]
    for n in range(1, max_len + 1):
        for w in itertools.product(letters, repeat=n):
            yield list(w)


@pytest.fixture
def pairs():
    rng = np.random.default_rng(3)
    return [(random_dfa(rng, ("p", "q")), random_dfa(rng, ("q", "r"))) for _ in range(6)]


def test_minimize_preserves_language_and_is_minimal(pairs):
    for A, _ in pairs:
        M = minimize(A)
        assert is_minimal(M)
        assert M.n_states <= A.n_states
        for w in words(A.vars, 4):
            assert M.accepts(w) == A.accepts(w)


@pytest.mark.parametrize("comb,fn", [(AND, lambda a, b: a and b), (OR, lambda a, b: a or b),
                                     (AND_NOT, lambda a, b: a and not b)])
def test_product_on_mixed_alphabets(pairs, comb, fn):
    for A, B in pairs:
        P = product(A, B, comb)
        for w in words(("p", "q", "r"), 3):
            assert P.accepts(w) == fn(A.accepts(w), B.accepts(w))


def test_complement_excludes_nothing_but_language(pairs):
    for A, _ in pairs:
        C = complement(A)
        for w in words(A.vars, 4):
            assert C.accepts(w) != A.accepts(w)


def test_fusion_shares_one_letter(pairs):
    for A, B in pairs[:3]:
        F = fusion(A, B)
        for w in words(("p", "q", "r"), 4):
            expect = any(A.accepts(w[:k + 1]) and B.accepts(w[k:]) for k in range(len(w)))
            assert F.accepts(w) == expect


def test_projection_is_pointwise_existential(pairs):
    for A, _ in pairs[:4]:
        P = project(A, "q")
        assert "q" not in P.vars
        for w in words(("p",), 4):
            expect = any(A.accepts([{"p": l["p"], "q": b} for l, b in zip(w, bs)])
                         for bs in itertools.product((False, True), repeat=len(w)))
            assert P.accepts(w) == expect
        assert language_equal(P, project_onto(A, ("p",)))


def test_inclusion_and_emptiness(pairs):
    A, B = pairs[0]
    I = product(A, B, AND)
    assert included(I, A) and included(I, B)
    assert is_empty(product(A, A, AND_NOT))


def test_shortest_word_is_shortest(pairs):
    for A, _ in pairs:
        w = shortest_word(A)
        if w is None:
            assert is_empty(A)
            continue
        assert A.accepts(w)
        for v in words(A.vars, len(w) - 1):
            assert not A.accepts(v)


# -- decision diagrams -----------------------------------------------------

def test_diagram_is_reduced_and_evaluates_like_the_table(pairs):
    for A, B in pairs:
        P = full_alphabet(product(A, B, OR))
        dd = build_diagram(P)
        dd.check()
        for s in range(P.n_states):
            for a in range(P.n_letters):
                assert dd.evaluate(s, a) == P.table[s, a]


def test_diagram_paths_cover_each_letter_once(pairs):
    A = full_alphabet(pairs[1][0])
    dd = build_diagram(A)
    for s in range(A.n_states):
        hit = np.zeros(A.n_letters, int)
        for cube, t in dd.paths(s):
            for a in range(A.n_letters):
                bits = format(a, f"0{len(A.vars)}b")
                if all(c in "-" + b for c, b in zip(cube, bits)):
                    hit[a] += 1
                    assert A.table[s, a] == t
        assert (hit == 1).all()


def test_diagram_cpre_matches_dense(pairs):
    rng = np.random.default_rng(5)
    for A, B in pairs:
        P = full_alphabet(product(A, B, AND))
        dd = build_diagram(P)
        is_in = np.array([REG.is_input(v) for v in P.vars])
        for _ in range(5):
            X = rng.random(P.n_states) < 0.6
            assert (dd.cpre(X, is_in) == cpre(P, X)).all()


# -- file formats ----------------------------------------------------------

def test_aut_round_trip(pairs):
    for A, B in pairs:
        P = product(A, B, AND)
        Q = from_aut(to_aut(P))
        assert Q.reg == P.reg and Q.vars == P.vars
        assert language_equal(P, Q)
        assert (Q.table == P.table).all()


def test_aut_header_layout(pairs):
    text = to_aut(pairs[0][0])
    assert any(line.startswith("STATES ") and " INIT " in line and " ACCEPTING" in line
               for line in text.splitlines())


def test_dot_has_one_edge_per_path(pairs):
    A = pairs[0][0]
    dot = to_dot(A, "A", show_sink=True)
    n_paths = sum(1 for s in range(A.n_states) for _ in build_diagram(A).paths(s))
    assert dot.count(" -> ") == n_paths + 1      # plus the start arrow


def test_controller_table_lists_live_states():
    # one-state controller copying p to q
    A = Dfa(VarRegistry(("p",), ("q",)), ("p", "q"), [[0, 1, 1, 0], [1, 1, 1, 1]], [True, False], 0)
    text = controller_table(A)
    assert "0 0 -> 0 0" in text and "0 1 -> 1 0" in text
