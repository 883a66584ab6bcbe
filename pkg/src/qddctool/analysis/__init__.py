"""Controller quality metrics."""
from .dominance import DominanceResult, check_dominance, must_inputs
from .expected import (Dtmc, absorption, bottom_sccs, build_dtmc, expected_value, monte_carlo,
                       stationary, steady_state_value)
from .maxlen import MaxlenResult, maxlen
from .mrmc import read_mrmc, write_mrmc
from .simulate import Trace, read_trace, simulate, write_trace


def export_mrmc(cnt, C=None, basename="Controller", monitor=None, compiler=None):
    """Build the uniform-input chain of `cnt` x A(C) and write .tra/.lab."""
    from ..compile import Compiler
    if monitor is None and C is not None:
        monitor = (compiler or Compiler(cnt.reg)).compile(C)
    return write_mrmc(build_dtmc(cnt, monitor), basename)
