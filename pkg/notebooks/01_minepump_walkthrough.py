# Mine pump: from requirements to a controller, step by step.
#
# Run with `python notebooks/01_minepump_walkthrough.py`.  Every number
# printed here is recomputed from scratch (a few seconds).
import numpy as np

from qddctool.analysis import build_dtmc, check_dominance, monte_carlo, simulate, steady_state_value
from qddctool.cli.qsf import parse_qsf
from qddctool.compile import Compiler
from qddctool.dfa import controller_table
from qddctool.specs import path
from qddctool.synth import synthesize

# %% The specification file declares inputs (water level high, methane
# present), the pump output, the environment assumption and the commitment.
spec = parse_qsf(path("minepump"))
print(spec.name, "inputs", spec.inputs, "outputs", spec.outputs)
print("constants", spec.constants)

# %% Four derived specifications from one assume/commit pair:
#   type 0: commitment as hard requirement
#   type 1: assumption => commitment, nothing soft
#   type 2: nothing hard, commitment soft
#   type 3: assumption => commitment hard, commitment soft
runs = {}
for k in range(4):
    runs[k] = synthesize(spec.synth_spec(k), H=50, ordering="PUMPON")
    print(f"type {k}:", runs[k].sizes())

# type 0 has no supervisor: methane can appear while water is high, and then
# no pump setting keeps both requirements.

# %% Long-run probability that the commitment holds, under uniformly random
# sensor readings.  Solved exactly via the bottom SCCs of the Markov chain,
# then checked against a one million step random walk.
mon = Compiler(runs[3].controller.reg).compile(spec.commit)
for k in (1, 2, 3):
    chain = build_dtmc(runs[k].controller, mon)
    exact = steady_state_value(chain)
    mc = monte_carlo(chain, steps=10**6, seed=0)
    print(f"type {k}: expected {exact:.5f}  monte-carlo {mc:.5f}  chain states {chain.n_states}")

# %% Soft requirements buy robustness.  The type 3 supervisor guarantees the
# commitment on every input sequence on which the type 1 supervisor does,
# but not the other way around.
r13 = check_dominance(runs[1].mphos, runs[3].mphos, mon)
r31 = check_dominance(runs[3].mphos, runs[1].mphos, mon)
print("MPHOS1 <= MPHOS3:", r13.holds)
print("MPHOS3 <= MPHOS1:", r31.holds, "witness inputs:", r31.counterexample)

# %% Drive the controller with a short random input trace.
rng = np.random.default_rng(4)
ins = [{"HH2O": bool(a), "HCH4": bool(b)} for a, b in rng.integers(0, 2, (8, 2))]
tr = simulate(runs[3].controller, ins, mon)
for i, o, m in zip(tr.inputs, tr.outputs, tr.monitor):
    print(int(i["HH2O"]), int(i["HCH4"]), "->", int(o["PUMPON"]), "commit" if m else "VIOLATED")

# %% The controller itself, as a lookup table.
print(controller_table(runs[3].controller))
