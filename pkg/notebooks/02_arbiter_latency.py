# Bus arbiter: how hard and soft response requirements shape worst-case latency.
#
# MAXLEN of the pattern [[r_i && !a_i]] is the longest stretch during which
# cell i requests without being granted; the latency printed below is that
# stretch plus the request and release cycles.
import math

from qddctool.analysis import maxlen
from qddctool.cli.qsf import parse_qsf
from qddctool.compile import Compiler
from qddctool.specs import path
from qddctool.synth import synthesize

ORD = "a1,a2,a3,a4,a5"


def latencies(cnt, spec, assume=None):
    comp = Compiler(cnt.reg)
    out = []
    for i in range(1, 6):
        m = maxlen(cnt, spec.parse(f"[[r{i} && !a{i}]]"), comp, assume=assume)
        out.append("inf" if math.isinf(m.latency) else int(m.latency))
    return out


# %% Hard 5-cycle response for every cell: the invariance automaton is
# large (thousands of states) but every cell is served within 5 cycles.
hard = parse_qsf(path("arb_hard"))
r = synthesize(hard.synth_spec(), ordering=ORD)
print("Arb^hard(5,5)", r.sizes(), "latency", latencies(r.controller, hard))

# %% Same response bound of 3, but only promised when at most two cells
# request at once.  Latencies are measured under that assumption.
ha = parse_qsf(path("arb_hard_assume"))
r = synthesize(ha.synth_spec(), ordering=ORD)
print("Arb^hardAssume(5,3,2)", r.sizes(), "latency", latencies(r.controller, ha, ha.assume))

# %% Only mutual exclusion is hard; each cell's response is a soft goal with
# weight 2^i, so higher cells win ties.  Low cells can starve.
soft = parse_qsf(path("arb_soft"))
for H in (1, 2, 3, 4):
    r = synthesize(soft.synth_spec(), H=H, ordering=ORD)
    print(f"Arb^soft(5,3) H={H}", r.sizes(), "latency", latencies(r.controller, soft))

# %% Token ring: a circulating token decides who may be granted.
tok = parse_qsf(path("arb_tok"))
r = synthesize(tok.synth_spec(), ordering=ORD)
print("Arb^tok(5)", r.sizes(), "latency", latencies(r.controller, tok))
