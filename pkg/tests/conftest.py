import pytest

from budgeted_contracts import Additive, Instance, gen_additive_lb, gen_xos_separation


@pytest.fixture
def separation():
    """Three-agent clause instance: a1=(.4,.4,.2), a2=(0,0,.4), c=(.2,.2,0)."""
    return gen_xos_separation(0.5, 1.0)


@pytest.fixture
def uniform4():
    """Four equal agents worth 1/4 each at cost 1/16 (table-backed)."""
    return gen_additive_lb(4, 0.4, 1.0)


@pytest.fixture
def single_agent():
    """One agent, cost 1/2, certain success on effort."""
    return Instance(1, (0.5,), Additive((1.0,)))
