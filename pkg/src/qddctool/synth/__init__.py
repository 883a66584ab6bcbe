"""Supervisor synthesis: safety game, value iteration, determinization."""
from .arena import (BlockingError, ValueTable, WeightedArena, arena_of, build_arena, lex_weights,
                    mphos, optimal_edges, value_iterate)
from .determinize import determinize, output_ranking, parse_ordering, rank_valuations
from .mps import Unrealizable, cpre, full_alphabet, game_view, is_deterministic, is_supervisor, mps, winning_region
from .pipeline import DEFAULT_GAMMA, DEFAULT_H, SynthResult, SynthSpec, compile_hard, derive, synthesize
