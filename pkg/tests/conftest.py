import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def close(A, B, atol=1e-10):
    return np.allclose(np.asarray(A), np.asarray(B), atol=atol)


def line(v):
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, text in sorted(ACCEPTANCE):
            terminalreporter.write_line(text)
