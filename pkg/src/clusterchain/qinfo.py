"""Two-qubit quantum-information measures (all in bits).

Discord measures qubit B with rank-1 projectors {(1 +/- n.sigma)/2}.  For a
state with Pauli coefficients T[mu, nu] = tr(rho sigma^mu x sigma^nu), the
outcome probabilities are p_+- = (1 +/- b.n)/2 and the conditional A states
have Bloch vectors (a +/- T n) / (1 +/- b.n), so a whole grid of directions
is evaluated with array arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import PhysicalityError
from .rdm import ID2, SX, SY, SZ, TwoSiteRDM

EIG_CLAMP = 1e-12
_PAULI = (ID2, SX, SY, SZ)
_SYSY = np.kron(SY, SY)


def _as_matrix(rho) -> np.ndarray:
    return np.asarray(rho.entries if isinstance(rho, TwoSiteRDM) else rho, dtype=complex)


def _xlog2x(p):
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    mask = p >= EIG_CLAMP
    out[mask] = p[mask] * np.log2(p[mask])
    return out


def binary_entropy(p):
    p = np.asarray(p, dtype=float)
    out = -(_xlog2x(p) + _xlog2x(1.0 - p))
    return float(out) if out.ndim == 0 else out


def entropy(rho) -> float:
    """Von Neumann entropy in bits; eigenvalues below 1e-12 are dropped."""
    m = _as_matrix(rho)
    lam = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    if lam[0] < -1e-9:
        raise PhysicalityError(f"density operator has eigenvalue {lam[0]:.3g}")
    return float(-np.sum(_xlog2x(lam)))


def partial_trace(rho, keep: int) -> np.ndarray:
    """Single-qubit marginal; ``keep=0`` for A, 1 for B."""
    r = _as_matrix(rho).reshape(2, 2, 2, 2)
    return np.einsum("ijkj->ik", r) if keep == 0 else np.einsum("ijil->jl", r)


def mutual_information(rho) -> float:
    return entropy(partial_trace(rho, 0)) + entropy(partial_trace(rho, 1)) - entropy(rho)


def concurrence(rho) -> float:
    """Wootters concurrence, complex conjugation in the computational basis."""
    m = _as_matrix(rho)
    m = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(m)
    sqrt_rho = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    tilde = _SYSY @ m.conj() @ _SYSY
    inner = sqrt_rho @ tilde @ sqrt_rho
    lam = np.sqrt(np.clip(np.linalg.eigvalsh(0.5 * (inner + inner.conj().T)), 0.0, None))[::-1]
    c = lam[0] - lam[1] - lam[2] - lam[3]
    return float(min(max(c, 0.0), 1.0))


def eof_from_concurrence(c: float) -> float:
    if c <= 0.0:
        return 0.0
    f = 0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - c * c)))
    return float(binary_entropy(f))


def eof(rho) -> float:
    return eof_from_concurrence(concurrence(rho))


@dataclass(frozen=True)
class MeasurementBasis:
    theta: float
    phi: float

    @classmethod
    def normalized(cls, theta: float, phi: float) -> "MeasurementBasis":
        n = _direction(theta, phi)
        t = float(np.arccos(np.clip(n[2], -1.0, 1.0)))
        p = float(np.arctan2(n[1], n[0])) % (2 * np.pi) if np.hypot(n[0], n[1]) > 1e-15 else 0.0
        return cls(t, p)

    @property
    def direction(self) -> np.ndarray:
        return _direction(self.theta, self.phi)

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.direction
        ns = n[0] * SX + n[1] * SY + n[2] * SZ
        return 0.5 * (ID2 + ns), 0.5 * (ID2 - ns)


def _direction(theta, phi):
    theta, phi = np.asarray(theta, float), np.asarray(phi, float)
    return np.stack(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1
    )


def pauli_coefficients(rho) -> np.ndarray:
    """T[mu, nu] = tr(rho sigma^mu x sigma^nu), mu, nu in (1, x, y, z)."""
    m = _as_matrix(rho)
    T = np.empty((4, 4))
    for mu, a in enumerate(_PAULI):
        for nu, b in enumerate(_PAULI):
            T[mu, nu] = np.real(np.trace(m @ np.kron(a, b)))
    return T


def _conditional_entropy(T: np.ndarray, n: np.ndarray) -> np.ndarray:
    """sum_i p_i S(rho_A | i) for directions n with shape (..., 3)."""
    a, b, C = T[1:, 0], T[0, 1:], T[1:, 1:]
    bn = n @ b
    Cn = n @ C.T
    total = np.zeros(bn.shape)
    for s in (1.0, -1.0):
        p = 0.5 * (1.0 + s * bn)
        num = np.linalg.norm(a + s * Cn, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(p > 1e-14, num / (2.0 * p), 0.0)
        r = np.clip(r, 0.0, 1.0)
        h = binary_entropy(0.5 * (1.0 + r))
        total = total + np.where(p > 1e-14, p * h, 0.0)
    return total


def measured_conditional_entropy(rho, basis: MeasurementBasis) -> float:
    return float(_conditional_entropy(pauli_coefficients(rho), basis.direction))


@dataclass(frozen=True)
class OptimizerReport:
    grid: tuple[int, int]
    iterations: int
    converged: bool
    grid_minimum: float


@dataclass(frozen=True)
class DiscordResult:
    discord: float
    classical_correlation: float
    mutual_information: float
    optimal_basis: MeasurementBasis
    optimizer_report: OptimizerReport = field(repr=False)


def discord(rho, grid: tuple[int, int] = (64, 32), ftol: float = 1e-8, refine: bool = True) -> DiscordResult:
    """Quantum discord with projective measurement on qubit B.

    A deterministic theta x phi grid is scanned and the best cell seeds a
    Nelder-Mead refinement.  Ties resolve to the lowest (theta, phi).
    """
    T = pauli_coefficients(rho)
    s_ab = entropy(rho)
    s_a = entropy(partial_trace(rho, 0))
    s_b = entropy(partial_trace(rho, 1))
    mi = s_a + s_b - s_ab

    n_theta, n_phi = grid
    thetas = np.linspace(0.0, np.pi, n_theta)
    phis = np.arange(n_phi) * (2.0 * np.pi / n_phi)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    vals = _conditional_entropy(T, _direction(tt, pp))
    i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
    best, x_best = float(vals[i, j]), (float(thetas[i]), float(phis[j]))
    grid_min, iterations, converged = best, 0, True

    if refine:
        res = minimize(
            lambda x: float(_conditional_entropy(T, _direction(x[0], x[1]))),
            np.array(x_best),
            method="Nelder-Mead",
            options={"xatol": 1e-9, "fatol": ftol * 1e-4, "maxiter": 2000, "initial_simplex": _simplex(x_best, thetas, phis)},
        )
        iterations, converged = int(res.nit), bool(res.success)
        if res.fun < best:
            best, x_best = float(res.fun), (float(res.x[0]), float(res.x[1]))

    classical = s_a - best
    d = mi - classical
    return DiscordResult(
        discord=max(d, 0.0),
        classical_correlation=classical,
        mutual_information=mi,
        optimal_basis=MeasurementBasis.normalized(*x_best),
        optimizer_report=OptimizerReport(grid=(n_theta, n_phi), iterations=iterations, converged=converged, grid_minimum=grid_min),
    )


def _simplex(x0, thetas, phis):
    dt = thetas[1] - thetas[0] if len(thetas) > 1 else 0.1
    dp = phis[1] - phis[0] if len(phis) > 1 else 0.1
    return np.array([x0, (x0[0] + dt, x0[1]), (x0[0], x0[1] + dp)])
