"""Shared fixtures: one memoized context so expensive tables and closures
are built once per test session."""

import numpy as np
import pytest

from permlie.verify import RunContext


@pytest.fixture(scope="session")
def ctx():
    return RunContext()


# Single-qubit Pauli matrices for the brute-force cross-checks that tests
# build on their own, independently of the package's dense engine.
PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_word(word: str) -> np.ndarray:
    """Dense matrix of a Pauli word given as a string like 'XIZ'.

    The first character acts on the highest-order tensor factor, matching
    the convention used by the package's permutation matrices.
    """
    out = PAULI[word[0]]
    for ch in word[1:]:
        out = np.kron(out, PAULI[ch])
    return out


@pytest.fixture(scope="session")
def pauli_word_matrix():
    return kron_word
