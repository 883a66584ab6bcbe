"""Total DFAs over valuation alphabets and their algebra."""
from .automaton import Dfa, DfaError, build_explicit, column_map, letter_bits, universal, empty
from .diagram import DecisionDiagram, build_diagram
from .io import controller_table, from_aut, load, save, to_aut, to_dot
from .ops import (AND, AND_NOT, OR, XOR, complement, conjunction, extend, fusion, product_pairs,
                  included, is_empty, is_minimal, language_equal, minimize, product,
                  project, project_many, project_onto, restrict_states, shortest_word)
