import pytest

from smonkit import harness, layered


@pytest.fixture(scope="session")
def ground_field():
    return harness.algebra_trivial()


@pytest.fixture(scope="session")
def dual_numbers():
    """k[x]/x^2 as a one-loop algebra (self-injective)."""
    return harness.algebra_loop_nilpotent(2)


@pytest.fixture(scope="session")
def chain3():
    """The chain 3 -> 2 -> 1 with the composite killed."""
    return harness.algebra_three_chain()


@pytest.fixture(scope="session")
def a2():
    return harness.algebra_line(2)


@pytest.fixture(scope="session")
def ctx_k_chain3(ground_field, chain3):
    return layered.TensorContext(ground_field, chain3)


@pytest.fixture(scope="session")
def ctx_dual_chain3(dual_numbers, chain3):
    return layered.TensorContext(dual_numbers, chain3)


@pytest.fixture(scope="session")
def ctx_chain3_a2(chain3, a2):
    return layered.TensorContext(chain3, a2)
