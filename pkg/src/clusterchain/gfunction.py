"""The fermionic contraction G_r = <A_0 B_r>.

Two independent evaluation paths are provided: adaptive quadrature of the
thermodynamic-limit integral

    G_r = -(1/4 pi) int_{-2pi}^{2pi} e^{i r x/2} (B - e^{-ix}) / eps(x) dx,
    eps(x) = (1 + B^2 - 2 B cos x)^(1/2),

and the finite momentum sum over a periodic chain of N sites.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import QuadratureError, WindowError
from .model import bogoliubov_phase, periodic_momenta

DEFAULT_TOL = 1e-10


def _eps(B, x):
    # (1-B)^2 + 4B sin^2(x/2) keeps precision near the gap-closing point.
    s = math.sin(0.5 * x)
    return math.sqrt((1.0 - B) ** 2 + 4.0 * B * s * s)


def _real_part(x, B, r):
    s = math.sin(0.5 * x)
    b_minus_cos = (B - 1.0) + 2.0 * s * s
    a = 0.5 * r * x
    return (math.cos(a) * b_minus_cos - math.sin(a) * math.sin(x)) / _eps(B, x)


def _imag_part(x, B, r):
    s = math.sin(0.5 * x)
    b_minus_cos = (B - 1.0) + 2.0 * s * s
    a = 0.5 * r * x
    return (math.sin(a) * b_minus_cos + math.cos(a) * math.sin(x)) / _eps(B, x)


@functools.lru_cache(maxsize=65536)
def _g_integral_cached(B: float, r: int, tol: float) -> tuple[float, float, float]:
    # Panels split at x=0: at |B|=1 the integrand has a jump there.
    limit = 200 + 20 * abs(r)
    panel_tol = tol / 4.0
    re = im = err = 0.0
    for lo, hi in ((-2.0 * math.pi, 0.0), (0.0, 2.0 * math.pi)):
        for func, which in ((_real_part, "re"), (_imag_part, "im")):
            val, abserr, info = quad(
                func, lo, hi, args=(B, r), epsabs=panel_tol, epsrel=0.0, limit=limit, full_output=1
            )[:3]
            err += abserr
            if which == "re":
                re += val
            else:
                im += val
    scale = -1.0 / (4.0 * math.pi)
    return scale * re, scale * im, abs(scale) * err


def g_integral(B: float, r: int, tol: float = DEFAULT_TOL, *, with_error: bool = False):
    """Thermodynamic-limit G_r by adaptive quadrature, accurate to ``tol``.

    The imaginary part of the raw integral must vanish to within ``tol``; it
    is checked and discarded.  With ``with_error=True`` the pair
    ``(value, error_estimate)`` is returned.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    re, im, err = _g_integral_cached(float(B), int(r), float(tol))
    if err > tol:
        raise QuadratureError(
            f"quadrature for G_{r} at B={B} reached error {err:.3g} > tol {tol:.3g}", est_error=err
        )
    if abs(im) > tol:
        raise QuadratureError(
            f"imaginary residual {abs(im):.3g} of G_{r} at B={B} exceeds tol {tol:.3g}", est_error=err
        )
    return (re, err) if with_error else re


def g_finite_sum(B: float, r: int, N: int) -> float:
    """G_r of the periodic N-site chain, -(1/N) sum_p e^{i k_p r} e^{2 i theta_p}."""
    if N % 2 or N < 8:
        raise ValueError(f"N must be even and >= 8, got {N}")
    k = periodic_momenta(N)
    total = np.sum(np.exp(1j * k * r) * bogoliubov_phase(B, k))
    return float(-total.real / N)


@dataclass(frozen=True)
class GVector:
    """G_r for r in [-r_max, r_max] at a fixed field."""

    B: float
    r_max: int
    values: np.ndarray = field(repr=False)
    est_error: float
    tol: float = DEFAULT_TOL

    def __getitem__(self, r: int) -> float:
        if abs(r) > self.r_max:
            raise WindowError(f"G_{r} requested but window only covers |r| <= {self.r_max}")
        return float(self.values[r + self.r_max])

    def covers(self, r_lo: int, r_hi: int) -> bool:
        return -self.r_max <= r_lo and r_hi <= self.r_max

    def require(self, r_lo: int, r_hi: int) -> None:
        if not self.covers(r_lo, r_hi):
            raise WindowError(
                f"offsets [{r_lo}, {r_hi}] needed, window covers [-{self.r_max}, {self.r_max}]"
            )

    def table(self, offsets) -> np.ndarray:
        """Vectorized lookup of G at an integer array of offsets."""
        offsets = np.asarray(offsets)
        if offsets.size and np.max(np.abs(offsets)) > self.r_max:
            raise WindowError(f"offsets exceed window |r| <= {self.r_max}")
        return self.values[offsets + self.r_max]

    def reflected(self) -> "GVector":
        """Window with G_r replaced by G_{-r}."""
        return GVector(self.B, self.r_max, self.values[::-1].copy(), self.est_error, self.tol)

    def negated(self) -> "GVector":
        return GVector(self.B, self.r_max, -self.values, self.est_error, self.tol)


def g_vector(B: float, r_max: int, tol: float = DEFAULT_TOL) -> GVector:
    """Fill the window [-r_max, r_max] with quadrature values (memoized per entry)."""
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    vals = np.empty(2 * r_max + 1)
    worst = 0.0
    for i, r in enumerate(range(-r_max, r_max + 1)):
        vals[i], e = g_integral(B, r, tol, with_error=True)
        worst = max(worst, e)
    return GVector(B=float(B), r_max=int(r_max), values=vals, est_error=worst, tol=tol)


def g_vector_finite(B: float, r_max: int, N: int) -> GVector:
    """Same window filled from the periodic momentum sum (independent path)."""
    vals = np.array([g_finite_sum(B, r, N) for r in range(-r_max, r_max + 1)])
    return GVector(B=float(B), r_max=int(r_max), values=vals, est_error=float("nan"), tol=float("nan"))


def clear_cache() -> None:
    _g_integral_cached.cache_clear()
