"""Shared oracles: dense Hamiltonians assembled from Kronecker products.

These builders share nothing with the package (no bit masks, no string
operators), so agreement with them checks the sparse construction.
"""

from functools import reduce

import numpy as np
import pytest

I2 = np.eye(2)
P0 = np.array([[1.0, 0.0], [0.0, 0.0]])  # |0><0|
N1 = np.array([[0.0, 0.0], [0.0, 1.0]])
X = np.array([[0.0, 1.0], [1.0, 0.0]])
Z = np.array([[1.0, 0.0], [0.0, -1.0]])


def kron_op(L, factors):
    """Dense product with ``factors = {site: 2x2}`` (1-based sites, site 1 leftmost)."""
    return reduce(np.kron, [factors.get(i, I2) for i in range(1, L + 1)])


def wrap(L, i):
    return (i - 1) % L + 1


def dense_hpx(L, periodic=True):
    H = np.zeros((2**L, 2**L))
    last = L if periodic else L - 1
    for i in range(1, last + 1):
        j = wrap(L, i + 1)
        H += kron_op(L, {i: P0, j: X}) + kron_op(L, {i: X, j: P0})
    return H


def dense_hpxp(L, periodic=True):
    H = np.zeros((2**L, 2**L))
    centres = range(1, L + 1) if periodic else range(2, L)
    for j in centres:
        H += kron_op(L, {wrap(L, j - 1): P0, j: X, wrap(L, j + 1): P0})
    return H


def dense_hpx_g(L, g, periodic=True):
    return dense_hpx(L, periodic) + g * dense_hpxp(L, periodic)


def dense_ssh(L, t1, t2, g=0.0):
    H = np.zeros((2**L, 2**L))
    for i in range(1, L - 1):
        H += t1 * kron_op(L, {i: P0, i + 1: X}) + t2 * kron_op(L, {i: X, i + 1: P0})
    H += t1 * kron_op(L, {L - 1: P0, L: X})
    return H + g * dense_hpxp(L, periodic=False)


def dense_state(bits):
    """Product state from a string such as ``'1101'``."""
    e = {"0": np.array([1.0, 0.0]), "1": np.array([0.0, 1.0])}
    return reduce(np.kron, [e[b] for b in bits]).astype(complex)


def random_state(dim, rng):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
