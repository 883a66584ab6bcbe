"""Shared fixtures: the packaged case studies, synthesized once per session."""
import pytest

from qddctool.cli.qsf import parse_qsf
from qddctool.specs import path
from qddctool.synth import synthesize

MINE_ORD = "PUMPON"
ARB_ORD = "a1,a2,a3,a4,a5"


@pytest.fixture(scope="session")
def mine_spec():
    return parse_qsf(path("minepump"))


@pytest.fixture(scope="session")
def arb_spec():
    return parse_qsf(path("arbiter"))


@pytest.fixture(scope="session")
def mine_runs(mine_spec):
    """Type -> SynthResult for MinePump(8,2,6,2), H = 50, ord PUMPON."""
    return {k: synthesize(mine_spec.synth_spec(k), H=50, ordering=MINE_ORD) for k in range(4)}


@pytest.fixture(scope="session")
def arb_runs(arb_spec):
    return {k: synthesize(arb_spec.synth_spec(k), H=50, ordering=ARB_ORD) for k in range(4)}
