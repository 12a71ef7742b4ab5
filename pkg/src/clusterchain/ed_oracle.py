"""Dense exact diagonalization of small chains, used as ground truth.

Basis states are bit strings with site 0 as the most significant bit and bit
value 0 meaning sigma^z = +1.  Both sublattice parities prod_{i even}
sigma^z_i and prod_{i odd} sigma^z_i commute with H, so the Hamiltonian is
diagonalized block by block (four blocks of 2^(N-2)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import EigensolverError, SizeGuardError
from .model import ModelParams, edge_splitting
from .rdm import TwoSiteRDM

MAX_N = 12
MAX_N_OPT_IN = 14
DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class SpectrumResult:
    lowest_energies: np.ndarray
    degeneracy: int
    tol: float


@dataclass(frozen=True)
class EDSolution:
    params: ModelParams
    energies: np.ndarray  # all eigenvalues, ascending
    vectors: np.ndarray  # columns aligned with ``energies``


def _guard(params: ModelParams, allow_large: bool) -> int:
    if params.N is None:
        raise ValueError("exact diagonalization needs a finite N")
    limit = MAX_N_OPT_IN if allow_large else MAX_N
    if params.N > limit:
        raise SizeGuardError(f"N={params.N} exceeds the ED size guard ({limit})")
    return params.N


def _bits(N: int) -> np.ndarray:
    idx = np.arange(2**N)
    return (idx[:, None] >> (N - 1 - np.arange(N))[None, :]) & 1


def stabilizer_sites(params: ModelParams) -> list[int]:
    N = params.N
    return list(range(N)) if params.boundary == "periodic" else list(range(1, N - 1))


def build_hamiltonian(params: ModelParams, allow_large: bool = False) -> sp.csr_matrix:
    """Sparse 2^N x 2^N Hamiltonian; open chains drop the two edge triplets."""
    N = _guard(params, allow_large)
    dim = 2**N
    idx = np.arange(dim)
    z = 1 - 2 * _bits(N)
    rows, cols, data = [idx], [idx], [-params.J * params.B * z.sum(axis=1).astype(float)]
    for i in stabilizer_sites(params):
        l, r = (i - 1) % N, (i + 1) % N
        flip = (1 << (N - 1 - l)) | (1 << (N - 1 - r))
        rows.append(idx ^ flip)
        cols.append(idx)
        data.append(-params.J * z[:, i].astype(float))
    H = sp.csr_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
    )
    H.sum_duplicates()
    return H


def sector_labels(N: int) -> np.ndarray:
    b = _bits(N)
    return 2 * (b[:, 0::2].sum(axis=1) % 2) + (b[:, 1::2].sum(axis=1) % 2)


def diagonalize(params: ModelParams, allow_large: bool = False) -> EDSolution:
    H = build_hamiltonian(params, allow_large)
    N = params.N
    labels = sector_labels(N)
    energies, vectors = [], []
    for sector in range(4):
        sel = np.flatnonzero(labels == sector)
        block = H[sel][:, sel].toarray()
        try:
            w, v = np.linalg.eigh(block)
        except np.linalg.LinAlgError as exc:
            raise EigensolverError(f"ED failed for {params}: {exc}") from exc
        full = np.zeros((2**N, len(w)))
        full[sel] = v
        energies.append(w)
        vectors.append(full)
    energies = np.concatenate(energies)
    vectors = np.concatenate(vectors, axis=1)
    order = np.argsort(energies, kind="stable")
    return EDSolution(params, energies[order], vectors[:, order])


def degeneracy(params: ModelParams, tol: float = DEGENERACY_TOL, count: int = 8, allow_large: bool = False) -> SpectrumResult:
    sol = diagonalize(params, allow_large)
    e = sol.energies
    deg = int(np.sum(e - e[0] < tol * params.J))
    return SpectrumResult(lowest_energies=e[:count].copy(), degeneracy=deg, tol=tol)


def ground_space(sol: EDSolution, tol: float = DEGENERACY_TOL) -> np.ndarray:
    e = sol.energies
    return sol.vectors[:, e - e[0] < tol * sol.params.J]


def reduced_state(vectors: np.ndarray, N: int, sites) -> np.ndarray:
    """Uniform mixture over ``vectors`` columns, traced down to ``sites``."""
    sites = list(sites)
    rest = [s for s in range(N) if s not in sites]
    k = len(sites)
    rho = np.zeros((2**k, 2**k), dtype=complex)
    for col in vectors.T:
        psi = col.reshape((2,) * N).transpose(sites + rest).reshape(2**k, -1)
        rho += psi @ psi.conj().T
    return rho / vectors.shape[1]


def two_site_rdm_ed(params: ModelParams, i: int, j: int, tol: float = DEGENERACY_TOL, sol: EDSolution | None = None) -> TwoSiteRDM:
    if i == j or not (0 <= i < params.N and 0 <= j < params.N):
        raise ValueError(f"invalid site pair ({i}, {j}) for N={params.N}")
    sol = sol or diagonalize(params)
    rho = reduced_state(ground_space(sol, tol), params.N, [i, j])
    return TwoSiteRDM(rho, (params.B, j - i))


def single_site_rdm_ed(params: ModelParams, i: int, tol: float = DEGENERACY_TOL, sol: EDSolution | None = None) -> np.ndarray:
    sol = sol or diagonalize(params)
    return reduced_state(ground_space(sol, tol), params.N, [i])


def mid_chain_pair(N: int, R: int) -> tuple[int, int]:
    i = (N - R) // 2
    return i, i + R


def expectation(sol: EDSolution, op: sp.spmatrix, tol: float = DEGENERACY_TOL) -> float:
    g = ground_space(sol, tol)
    return float(np.real(np.einsum("ik,ik->", g.conj(), op @ g)) / g.shape[1])


def pauli_string(N: int, ops: dict[int, str]) -> sp.csr_matrix:
    """Sparse product of single-site Paulis given as {site: 'x'|'y'|'z'}."""
    mats = {
        "x": sp.csr_matrix(np.array([[0, 1], [1, 0]], dtype=complex)),
        "y": sp.csr_matrix(np.array([[0, -1j], [1j, 0]])),
        "z": sp.csr_matrix(np.array([[1, 0], [0, -1]], dtype=complex)),
    }
    out = sp.identity(1, dtype=complex, format="csr")
    for s in range(N):
        out = sp.kron(out, mats[ops[s]] if s in ops else sp.identity(2, dtype=complex), format="csr")
    return out


def stabilizer_expectations(params: ModelParams, sol: EDSolution | None = None) -> np.ndarray:
    sol = sol or diagonalize(params)
    N = params.N
    return np.array(
        [
            expectation(sol, pauli_string(N, {(i - 1) % N: "x", i: "z", (i + 1) % N: "x"}))
            for i in stabilizer_sites(params)
        ]
    )


def string_expectation_ed(params: ModelParams, start: int, n: int, sol: EDSolution | None = None) -> float:
    """<prod_{m<n} sigma^z_{start + 2m}> in the ED ground space."""
    sol = sol or diagonalize(params)
    return expectation(sol, pauli_string(params.N, {start + 2 * m: "z" for m in range(n)}))


def splitting_curve(B: float, N_list, J: float = 1.0, allow_large: bool = False) -> list[tuple[int, float]]:
    """Width E_4 - E_1 of the quasi-degenerate open-chain ground manifold.

    Lengths within the ED guard are diagonalized exactly; longer chains use
    the BdG reconstruction.
    """
    if abs(B) >= 1:
        raise ValueError(f"splitting curve needs |B| < 1, got {B}")
    limit = MAX_N_OPT_IN if allow_large else MAX_N
    out = []
    for N in N_list:
        if N <= limit:
            e = diagonalize(ModelParams(J=J, B=B, N=N, boundary="open"), allow_large).energies
            out.append((int(N), float(e[3] - e[0])))
        else:
            out.append((int(N), edge_splitting(B, int(N), J)))
    return out
