"""Decay fits, critical exponents, entanglement birth and (B, R) sweeps."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .correlators import correlator_set, magnetization
from .errors import BracketError, ClusterChainError, FitError
from .gfunction import DEFAULT_TOL, g_vector
from .qinfo import concurrence, discord, eof_from_concurrence
from .rdm import build_rdm

DEFAULT_FLOOR = 1e-12
MEASURES = ("mi", "discord", "concurrence", "eof")
FIT_MEASURES = ("discord", "mi", "zz", "xx", "yy", "concurrence", "eof")
ROW_FIELDS = ("B", "R", "z", "xx", "yy", "zz", "mi", "discord", "concurrence", "eof", "flags")


@dataclass(frozen=True)
class FitResult:
    kind: str
    parameter: float
    r_squared: float
    window: tuple
    floor: float
    n_points: int
    slope: float
    intercept: float
    flags: tuple = ()


def _linear_fit(x, y):
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), min(max(r2, 0.0), 1.0)


def _usable(points, floor):
    pts = sorted((float(r), abs(float(v))) for r, v in points if np.isfinite(v))
    pts = [(r, v) for r, v in pts if v > floor]
    if len(pts) < 4:
        raise FitError(f"need at least 4 points above floor {floor:g}, got {len(pts)}")
    r, v = np.array(pts).T
    return r, v


def exp_decay_fit(points: Iterable[tuple[float, float]], floor: float = DEFAULT_FLOOR) -> FitResult:
    """Fit ln|value| = a - R/xi; ``parameter`` is the decay length xi."""
    r, v = _usable(points, floor)
    slope, intercept, r2 = _linear_fit(r, np.log(v))
    flags = ()
    if slope >= 0:
        flags = ("non_decaying",)
        xi = math.inf
    else:
        xi = -1.0 / slope
    return FitResult("exponential", xi, r2, (r.min(), r.max()), floor, len(r), slope, intercept, flags)


def power_fit(points: Iterable[tuple[float, float]], floor: float = DEFAULT_FLOOR) -> FitResult:
    """Fit ln value = a - xi ln R; ``parameter`` is the exponent xi."""
    pts = list(points)
    if any(v < 0 for _, v in pts):
        raise FitError("power-law fit needs positive values")
    r, v = _usable(pts, floor)
    slope, intercept, r2 = _linear_fit(np.log(r), np.log(v))
    flags = ("non_decaying",) if slope >= 0 else ()
    return FitResult("power_law", -slope, r2, (r.min(), r.max()), floor, len(r), slope, intercept, flags)


def measure_value(measure: str, B: float, R: int, G) -> float:
    """One fit-ready measure at even R; ``zz`` is the connected correlator."""
    c = correlator_set(B, R, G=G)
    if measure == "zz":
        return abs(c.zz_connected)
    if measure in ("xx", "yy"):
        return abs(getattr(c, measure))
    rho = build_rdm(c, (B, R))
    if measure == "discord":
        return discord(rho).discord
    if measure == "mi":
        return discord(rho).mutual_information
    if measure == "concurrence":
        return concurrence(rho)
    if measure == "eof":
        return eof_from_concurrence(concurrence(rho))
    raise ValueError(f"unknown measure {measure!r}; choose from {FIT_MEASURES}")


def measure_profile(B: float, measure: str, R_grid: Sequence[int], tol: float = DEFAULT_TOL):
    G = g_vector(B, max(R_grid), tol)
    return [(int(R), measure_value(measure, B, int(R), G)) for R in R_grid]


def fit_measure(B: float, measure: str, R_grid: Sequence[int], kind: str = "auto", tol: float = DEFAULT_TOL, floor: float = DEFAULT_FLOOR) -> FitResult:
    """Exponential fit off criticality, power law at |B| = 1 unless ``kind`` says otherwise."""
    if kind == "auto":
        kind = "power" if abs(abs(B) - 1.0) < 1e-12 else "exp"
    pts = measure_profile(B, measure, R_grid, tol)
    return power_fit(pts, floor) if kind == "power" else exp_decay_fit(pts, floor)


def concurrence_at(B: float, R: int, tol: float = DEFAULT_TOL) -> float:
    return concurrence(build_rdm(correlator_set(B, R, tol), (B, R)))


def entanglement_birth(R: int = 2, bracket: tuple[float, float] = (0.5, 1.0), tol: float = DEFAULT_TOL, resolution: float = 1e-5, threshold: float = 1e-10) -> float:
    """Field where the concurrence at separation R first exceeds ``threshold``."""
    lo, hi = map(float, bracket)
    c_lo, c_hi = concurrence_at(lo, R, tol), concurrence_at(hi, R, tol)
    if not (c_lo <= threshold < c_hi):
        raise BracketError(
            f"concurrence at R={R} is {c_lo:.3g} at B={lo} and {c_hi:.3g} at B={hi}; no crossing"
        )
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if concurrence_at(mid, R, tol) > threshold:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def find_birth(R: int, B_grid: Sequence[float], tol: float = DEFAULT_TOL) -> Optional[float]:
    """Scan a grid for the first zero-to-positive concurrence step, then bisect.

    Returns None when the concurrence never leaves zero on the grid.
    """
    prev = None
    for B in B_grid:
        c = concurrence_at(B, R, tol)
        if prev is not None and prev[1] <= 1e-10 < c:
            return entanglement_birth(R, (prev[0], B), tol)
        prev = (B, c)
    return None


@dataclass
class SweepRow:
    B: float
    R: int
    z: float = math.nan
    xx: float = math.nan
    yy: float = math.nan
    zz: float = math.nan
    mi: Optional[float] = None
    discord: Optional[float] = None
    concurrence: Optional[float] = None
    eof: Optional[float] = None
    flags: list = field(default_factory=list)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["flags"] = ";".join(self.flags)
        return d


def _odd_row(B: float, R: int, z: float, measures) -> SweepRow:
    # Different sublattices: the pair state is the product of the marginals.
    row = SweepRow(B, R, z=z, xx=0.0, yy=0.0, zz=z * z, flags=["odd_R"])
    for m in measures:
        setattr(row, m, 0.0)
    return row


def _sweep_one_field(args) -> list[SweepRow]:
    B, R_grid, measures, tol = args
    even = [R for R in R_grid if R % 2 == 0]
    try:
        G = g_vector(B, max([2] + even), tol)
    except ClusterChainError as exc:
        return [SweepRow(B, R, flags=[f"error:{type(exc).__name__}"]) for R in R_grid]
    z = magnetization(G)
    rows = []
    for R in R_grid:
        if R % 2:
            rows.append(_odd_row(B, R, z, measures))
            continue
        row = SweepRow(B, R)
        try:
            c = correlator_set(B, R, G=G)
            row.z, row.xx, row.yy, row.zz = c.z, c.xx, c.yy, c.zz
            rho = build_rdm(c, (B, R))
            if "mi" in measures or "discord" in measures:
                d = discord(rho)
                if "mi" in measures:
                    row.mi = d.mutual_information
                if "discord" in measures:
                    row.discord = d.discord
                if not d.optimizer_report.converged:
                    row.flags.append("optimizer_not_converged")
            if "concurrence" in measures or "eof" in measures:
                cc = concurrence(rho)
                if "concurrence" in measures:
                    row.concurrence = cc
                if "eof" in measures:
                    row.eof = eof_from_concurrence(cc)
        except ClusterChainError as exc:
            row.flags.append(f"error:{type(exc).__name__}")
        rows.append(row)
    return rows


def sweep(B_grid: Sequence[float], R_grid: Sequence[int], measures: Sequence[str] = MEASURES, tol: float = DEFAULT_TOL, jobs: int = 1, allow_odd: bool = False) -> list[SweepRow]:
    """Dense (B, R) table in (B, R) input order; per-cell failures are flagged in-row."""
    R_grid = [int(R) for R in R_grid]
    if any(R < 1 for R in R_grid):
        raise ValueError("R values must be positive")
    if not allow_odd and any(R % 2 for R in R_grid):
        raise ValueError("R grid must contain even separations only")
    unknown = set(measures) - set(MEASURES)
    if unknown:
        raise ValueError(f"unknown measures {sorted(unknown)}; choose from {MEASURES}")
    tasks = [(float(B), R_grid, tuple(measures), tol) for B in B_grid]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_sweep_one_field, tasks))
    else:
        chunks = [_sweep_one_field(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]
