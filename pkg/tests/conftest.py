from __future__ import annotations

import numpy as np
import pytest

from scramble import AlgebraDescriptor, RandomSeed, build_algebra, haar_unitary

BELL_COLUMNS = np.array(
    [
        [1, 0, 0, 1],
        [0, 1, 1, 0],
        [0, 1, -1, 0],
        [1, 0, 0, -1],
    ],
    dtype=float,
).T / np.sqrt(2)

NRC_SPECTRUM = np.array([0.0, 1.0, 3.0, 7.0])


@pytest.fixture(scope="session")
def masa2():
    return build_algebra(AlgebraDescriptor.diagonal(2))


@pytest.fixture(scope="session")
def masa4():
    return build_algebra(AlgebraDescriptor.diagonal(4))


@pytest.fixture(scope="session")
def bipartite22():
    return build_algebra(AlgebraDescriptor.factor(2, 2))


@pytest.fixture(scope="session")
def z2_local2():
    return build_algebra(AlgebraDescriptor.group_z2(2))


@pytest.fixture(scope="session")
def symmetric_local2():
    return build_algebra(AlgebraDescriptor.symmetric_swap(2))


@pytest.fixture(scope="session")
def loschmidt4():
    return build_algebra(AlgebraDescriptor.loschmidt(np.eye(4)[0]))


@pytest.fixture(scope="session")
def bell_hamiltonian():
    return (BELL_COLUMNS * NRC_SPECTRUM) @ BELL_COLUMNS.T


def random_partition(d: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Random block pattern (n_J, d_J) with sum n_J d_J = d."""
    pairs = []
    left = d
    while left > 0:
        options = [
            (n, dj)
            for n in range(1, left + 1)
            for dj in range(1, left + 1)
            if n * dj <= left
        ]
        n, dj = options[rng.integers(len(options))]
        pairs.append((n, dj))
        left -= n * dj
    return pairs


def planted_generators(d: int, seed: int) -> tuple[list[np.ndarray], list[tuple[int, int]]]:
    """Two generic elements of a hidden block algebra, plus the hidden pattern.

    The span closure of the generators recovers the full planted algebra for
    generic draws, making the expected block structure known in advance.
    """
    rng = np.random.default_rng(seed)
    pairs = random_partition(d, rng)
    gens = []
    for _ in range(2):
        blockdiag = np.zeros((d, d), dtype=complex)
        offset = 0
        for n, dj in pairs:
            h = rng.standard_normal((dj, dj)) + 1j * rng.standard_normal((dj, dj))
            h = (h + h.conj().T) / 2
            size = n * dj
            blockdiag[offset : offset + size, offset : offset + size] = np.kron(np.eye(n), h)
            offset += size
        gens.append(blockdiag)
    basis_change = haar_unitary(d, RandomSeed(seed, 999))
    return [basis_change @ g @ basis_change.conj().T for g in gens], pairs


def unitary(d: int, seed: int, stream: int = 0) -> np.ndarray:
    return haar_unitary(d, RandomSeed(seed, stream))
