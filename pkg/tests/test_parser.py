"""Formula syntax: precedence, macros, constants and error reporting."""
import pytest

from qddctool.qddc import ParseError, QddcError, VarRegistry, parse_formula, tokenize
from qddctool.qddc.syntax import And, Chop, Ex, Point, SlenCmp

REG = VarRegistry(("p", "q"), ("r",))


def parse(text, **kw):
    return parse_formula(text, REG, **kw)


def test_chop_binds_tighter_than_and():
    f = parse("<p>^true && <q>")
    assert isinstance(f, And)
    assert isinstance(f.left, Chop)


def test_point_closes_before_comparison():
    f = parse("<p && q>")
    assert isinstance(f, Point)


def test_slen_with_constant_arithmetic():
    f = parse("slen = k - 1", constants={"k": 3})
    assert isinstance(f, SlenCmp) and f.c == 2


def test_quantifier_scopes_over_rest():
    f = parse("ex s. [[s]] && <p>")
    assert isinstance(f, Ex) and f.var == "s"


def test_comments_are_skipped():
    toks = [t.text for t in tokenize("<p> // tail\n && /* mid */ <q>")]
    assert toks[:7] == ["<", "p", ">", "&&", "<", "q", ">"]


def test_unknown_variable_is_located():
    with pytest.raises(ParseError) as ex:
        parse("<p>\n && <zz>")
    assert ex.value.line == 2


def test_bare_name_is_rejected():
    with pytest.raises(ParseError):
        parse("p && <q>")


def test_trailing_garbage():
    with pytest.raises(ParseError):
        parse("<p> <q>")


def _macros(text):
    from qddctool.cli.qsf import parse_qsf_text
    return parse_qsf_text(text).macros


def test_macro_expansion_and_arity():
    ms = _macros("interface { input p, q; output r; }\n"
                 "definitions { dc both(a, b) { [[a && b]]; } }\nhardreq { both(p, q); }")
    f = parse("both(p, r)", macros=ms)
    assert f == parse("[[p && r]]")
    with pytest.raises(QddcError):
        parse("both(p)", macros=ms)


def test_macro_argument_may_be_a_proposition():
    ms = _macros("interface { input p, q; output r; }\n"
                 "definitions { dc ev(a) { <>(<a>); } }\nhardreq { true; }")
    assert parse("ev(p && !q)", macros=ms) == parse("<>(<p && !q>)")


def test_undefined_macro():
    with pytest.raises(QddcError):
        parse("nothere(p)")
