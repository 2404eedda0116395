import numpy as np
import pytest

from jointsparse.datagen import InstanceSpec, generate


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def table2_instance():
    return generate(InstanceSpec(N=500, M=150, K=50, J=10, seed=7))


def exact_instance(N, M, K, J, seed):
    return generate(InstanceSpec(N=N, M=M, K=K, J=J, seed=seed))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
