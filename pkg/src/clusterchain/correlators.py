"""Spin correlators of the infinite chain built from the contraction G.

Index conventions (checked against exact diagonalization):

* ``<sigma^z> = SIGN * G_0`` with ``SIGN = -1``, because
  ``sigma^z = 2 c^dag c - 1 = -A B``.
* ``<sigma^x_0 sigma^x_R> = det[G_{j-k+1}]`` and
  ``<sigma^y_0 sigma^y_R> = det[G_{j-k-1}]`` for even R.  Written in the
  other order the two Toeplitz forms give each other's value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gfunction import DEFAULT_TOL, GVector, g_vector

#: global sign convention: <sigma^z> = SIGN * <A_0 B_0>
SIGN = -1


@dataclass(frozen=True)
class CorrelatorSet:
    R: int
    z: float
    zz: float
    xx: float
    yy: float

    @property
    def zz_connected(self) -> float:
        return self.zz - self.z * self.z


def toeplitz_det(G: GVector, size: int, shift: int, stride: int = 1) -> float:
    """det M with M[j, k] = G_{stride*(j-k) + shift}, via LU with log accumulation."""
    if size == 0:
        return 1.0
    j = np.arange(size)
    offsets = stride * (j[:, None] - j[None, :]) + shift
    G.require(int(offsets.min()), int(offsets.max()))
    sign, logdet = np.linalg.slogdet(G.table(offsets))
    if sign == 0:
        return 0.0
    return float(sign * np.exp(logdet))


def _check_even(R: int) -> None:
    if R < 2 or R % 2:
        raise ValueError(f"R must be even and >= 2, got {R}")


def magnetization(G: GVector) -> float:
    return SIGN * G[0]


def zz_correlator(G: GVector, R: int) -> float:
    _check_even(R)
    G.require(-R, R)
    return G[0] ** 2 - G[R] * G[-R]


def xx_correlator(G: GVector, R: int) -> float:
    _check_even(R)
    return toeplitz_det(G, R, shift=1)


def yy_correlator(G: GVector, R: int) -> float:
    _check_even(R)
    return toeplitz_det(G, R, shift=-1)


def string_correlator(G: GVector, n: int) -> float:
    """<prod_{i<n} sigma^z_{2i}> = SIGN^n det[G_{2(k-j)}]_{n x n}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    # det of the transpose; entry (j, k) = G_{2(j-k)}
    return SIGN**n * toeplitz_det(G, n, shift=0, stride=2)


def correlator_set(B: float, R: int, tol: float = DEFAULT_TOL, G: GVector | None = None) -> CorrelatorSet:
    _check_even(R)
    if G is None:
        G = g_vector(B, R, tol)
    return CorrelatorSet(
        R=R,
        z=magnetization(G),
        zz=zz_correlator(G, R),
        xx=xx_correlator(G, R),
        yy=yy_correlator(G, R),
    )
