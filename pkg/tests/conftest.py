import functools

import numpy as np
import pytest

from clusterchain.ed_oracle import diagonalize, mid_chain_pair, two_site_rdm_ed
from clusterchain.model import ModelParams
from clusterchain.rdm import ID2, SX, SY, SZ, pauli_expectation


@functools.lru_cache(maxsize=None)
def ed_solution(B, N, boundary="open"):
    params = ModelParams(B=B, N=N, boundary=boundary)
    return params, diagonalize(params)


def ed_pair(B, N, R):
    """Mid-chain open-chain ED state of a pair at separation R."""
    params, sol = ed_solution(B, N)
    i, j = mid_chain_pair(N, R)
    return np.asarray(two_site_rdm_ed(params, i, j, sol=sol))


def ed_correlators(B, N, R):
    rho = ed_pair(B, N, R)
    return {
        "z": pauli_expectation(rho, SZ, ID2),
        "xx": pauli_expectation(rho, SX, SX),
        "yy": pauli_expectation(rho, SY, SY),
        "zz": pauli_expectation(rho, SZ, SZ),
    }


@pytest.fixture
def bell():
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return np.outer(psi, psi).astype(complex)


@pytest.fixture
def product_state():
    a = np.array([[0.7, 0.2], [0.2, 0.3]])
    b = np.array([[0.4, -0.1j], [0.1j, 0.6]])
    return np.kron(a, b)


@pytest.fixture
def classical_mixture():
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[3, 3] = 0.5
    return rho


@pytest.fixture
def separable_discordant():
    k0 = np.array([1.0, 0.0])
    kp = np.array([1.0, 1.0]) / np.sqrt(2)
    a, b = np.kron(k0, k0), np.kron(kp, kp)
    return (0.5 * np.outer(a, a) + 0.5 * np.outer(b, b)).astype(complex)
