import sys

import numpy as np
import pytest

from relcond.linalg import eig_full
from relcond.spectrum import COMPLEX_PAIR, REAL, partition_spectrum


def taylor_expm(A, t=1.0, terms=200):
    """exp(tA) by a truncated Taylor series on tA/2^k followed by k squarings."""
    M = np.asarray(A, dtype=complex) * t
    nrm = np.abs(M).sum(axis=0).max()
    k = max(0, int(np.ceil(np.log2(nrm / 0.5))) if nrm > 0 else 0)
    M = M / 2.0**k
    n = M.shape[0]
    E = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for j in range(1, terms + 1):
        term = term @ M / j
        E = E + term
    for _ in range(k):
        E = E @ E
    return E.real if np.isrealobj(A) else E


def draw_matrix(rng, n, kind=None, max_tries=1000):
    """Standard normal n x n matrix whose rightmost level has the requested kind."""
    for _ in range(max_tries):
        A = rng.standard_normal((n, n))
        part = partition_spectrum(eig_full(A).values)
        if not part.generic:
            continue
        if kind is None or part.levels[0].kind == kind:
            return A
    raise RuntimeError("no matrix of the requested kind")


def draw_complex_rightmost(rng, n):
    return draw_matrix(rng, n, COMPLEX_PAIR)


def draw_real_rightmost(rng, n):
    return draw_matrix(rng, n, REAL)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
