"""QDDC syntax, parsing and reference semantics."""
from .syntax import *  # noqa: F401,F403
from .syntax import VarRegistry, QddcError, merge_registries
from .parser import ParseError, parse_formula, parse_prop, tokenize
from .semantics import (all_words, batch_sat, eval_interval, eval_point, eval_prop,
                        holds, rewrite_derived)
