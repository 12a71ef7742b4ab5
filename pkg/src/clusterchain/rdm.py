"""Two-site reduced density matrices from Z2-reduced Pauli expansions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlators import CorrelatorSet
from .errors import PhysicalityError

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
ID2 = np.eye(2, dtype=complex)

PSD_TOL = 1e-9
_X_OFF = ((0, 1), (0, 2), (1, 3), (2, 3))


@dataclass(frozen=True)
class TwoSiteRDM:
    entries: np.ndarray
    source: tuple = ()

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


@dataclass(frozen=True)
class RDMDiagnostics:
    hermiticity: float
    trace: float
    min_eigenvalue: float
    x_sparsity: float

    @property
    def ok(self) -> bool:
        return (
            self.hermiticity < 1e-12
            and self.trace < 1e-12
            and self.min_eigenvalue >= -PSD_TOL
            and self.x_sparsity < 1e-12
        )


def build_rdm(c: CorrelatorSet, source: tuple = (), check: bool = True) -> TwoSiteRDM:
    """rho = (1/4)[1 + z(Z1 + 1Z) + xx XX + yy YY + zz ZZ]."""
    z, zz, xx, yy = c.z, c.zz, c.xx, c.yy
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1 + 2 * z + zz
    rho[1, 1] = rho[2, 2] = 1 - zz
    rho[3, 3] = 1 - 2 * z + zz
    rho[1, 2] = rho[2, 1] = xx + yy
    rho[0, 3] = rho[3, 0] = xx - yy
    rho /= 4.0
    out = TwoSiteRDM(rho, source or (None, c.R))
    if check:
        lam = x_state_eigenvalues(rho)
        if lam.min() < -PSD_TOL:
            raise PhysicalityError(
                f"rho for {out.source} has eigenvalue {lam.min():.3g} below -{PSD_TOL:g}"
            )
    return out


def x_state_eigenvalues(rho) -> np.ndarray:
    """Closed-form spectrum of an X-shaped two-qubit state, ascending."""
    rho = np.asarray(rho)
    vals = []
    for a, b in ((0, 3), (1, 2)):
        p, q = rho[a, a].real, rho[b, b].real
        mid, half = 0.5 * (p + q), np.hypot(0.5 * (p - q), abs(rho[a, b]))
        vals += [mid - half, mid + half]
    return np.sort(vals)


def validate_rdm(rho) -> RDMDiagnostics:
    m = np.asarray(rho.entries if isinstance(rho, TwoSiteRDM) else rho)
    herm = float(np.max(np.abs(m - m.conj().T)))
    tr = float(abs(np.trace(m) - 1.0))
    lam = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    xs = max(float(abs(m[i, j])) for i, j in _X_OFF + tuple((j, i) for i, j in _X_OFF))
    return RDMDiagnostics(hermiticity=herm, trace=tr, min_eigenvalue=float(lam[0]), x_sparsity=xs)


def pauli_expectation(rho, a, b) -> float:
    return float(np.real(np.trace(np.asarray(rho) @ np.kron(a, b))))


def marginals(rho) -> tuple[np.ndarray, np.ndarray]:
    r = np.asarray(rho).reshape(2, 2, 2, 2)
    return np.einsum("ijkj->ik", r), np.einsum("ijil->jl", r)
