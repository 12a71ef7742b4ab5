"""Command-line front end.

Subcommands: sweep, fit, birth, validate, spectrum, sop.  Every command
writes a table as CSV (default) or JSON to ``--out`` or stdout.

Exit codes: 0 success, 1 validation failure, 2 usage/config error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .analysis import (
    FIT_MEASURES,
    MEASURES,
    ROW_FIELDS,
    entanglement_birth,
    fit_measure,
    power_fit,
    exp_decay_fit,
    sweep,
)
from .correlators import SIGN, correlator_set, string_correlator
from .ed_oracle import (
    MAX_N,
    MAX_N_OPT_IN,
    degeneracy,
    diagonalize,
    mid_chain_pair,
    stabilizer_expectations,
    two_site_rdm_ed,
)
from .errors import BracketError, ClusterChainError, FitError, SizeGuardError
from .gfunction import DEFAULT_TOL, g_vector
from .model import ModelParams, bdg_solve, sop_asymptote
from .rdm import SX, SY, SZ, ID2, build_rdm, pauli_expectation

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3

DEFAULTS = {
    "tol": DEFAULT_TOL,
    "out": None,
    "format": "csv",
    "jobs": os.cpu_count() or 1,
    "b": "0",
    "r": None,
    "measures": ",".join(MEASURES),
    "measure": "discord",
    "kind": "auto",
    "input": None,
    "bracket": "0.5,1.0",
    "n": None,
    "boundary": "open",
    "levels": 8,
    "allow_large": False,
}

COMMAND_DEFAULTS = {
    "sweep": {"r": "2"},
    "birth": {"r": "2"},
    "validate": {"n": 8},
    "spectrum": {"n": 8},
    "sop": {"n": 50},
}


class ConfigError(Exception):
    pass


@dataclass
class Table:
    fields: tuple
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)


# --------------------------------------------------------------------- parsing


def parse_grid(text: str, integer: bool = False) -> list:
    """Parse ``"a,b,c"`` and inclusive ranges ``"start:stop:step"`` (mixable)."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ":" in part:
                bits = [float(x) for x in part.split(":")]
                if len(bits) not in (2, 3):
                    raise ValueError
                start, stop = bits[0], bits[1]
                step = bits[2] if len(bits) == 3 else 1.0
                if step <= 0 or stop < start:
                    raise ValueError
                count = int(math.floor((stop - start) / step + 1e-9)) + 1
                out.extend(round(start + i * step, 12) for i in range(count))
            else:
                out.append(float(part))
        except ValueError:
            raise ConfigError(f"cannot parse grid entry {part!r}") from None
    if not out:
        raise ConfigError(f"empty grid {text!r}")
    if integer:
        if any(v != int(v) for v in out):
            raise ConfigError(f"grid {text!r} must contain integers")
        return [int(v) for v in out]
    return out


def read_config(path: str) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment, dashes in keys map to underscores."""
    cfg = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key = value")
                k, v = (s.strip() for s in line.split("=", 1))
                cfg[k.replace("-", "_")] = v
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return cfg


def _add_common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("global options")
    g.add_argument("--tol", type=float, help="quadrature tolerance (default 1e-10)")
    g.add_argument("--out", help="output path (default stdout)")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--jobs", type=int, help="worker processes for sweeps")
    g.add_argument("--config", help="flat key = value config file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clusterchain", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="correlators and correlation measures over a (B, R) grid")
    p.add_argument("--b", help="field grid, e.g. 0:2:0.05 or 0.5,1,2")
    p.add_argument("--r", help="separation grid; odd R rows are structural zeros")
    p.add_argument("--measures", help=f"comma list from {','.join(MEASURES)}")
    _add_common(p)

    p = sub.add_parser("fit", help="exponential / power-law fits of a measure against R")
    p.add_argument("--b", help="field values")
    p.add_argument("--measure", help=f"comma list from {','.join(FIT_MEASURES)}")
    p.add_argument("--r", help="R grid (default 4:60:2 at |B|=1, else 2:40:2)")
    p.add_argument("--kind", choices=("auto", "exp", "power"))
    p.add_argument("--input", help="fit columns of an existing sweep CSV instead of recomputing")
    _add_common(p)

    p = sub.add_parser("birth", help="field where two-site entanglement appears")
    p.add_argument("--r", help="even separation (default 2)")
    p.add_argument("--bracket", help="B_lo,B_hi (default 0.5,1.0)")
    _add_common(p)

    p = sub.add_parser("validate", help="ED-versus-analytic cross-checks")
    p.add_argument("--n", type=int, help="chain length for ED (default 8)")
    p.add_argument("--b", help="field values (default 0)")
    p.add_argument("--allow-large", action="store_true", default=None, help="permit N = 13, 14")
    _add_common(p)

    p = sub.add_parser("spectrum", help="ED levels, degeneracy and BdG quasiparticle energies")
    p.add_argument("--n", type=int)
    p.add_argument("--b", help="field values")
    p.add_argument("--boundary", choices=("open", "periodic"))
    p.add_argument("--levels", type=int, help="number of ED levels to report")
    p.add_argument("--allow-large", action="store_true", default=None)
    _add_common(p)

    p = sub.add_parser("sop", help="string order correlator against string length")
    p.add_argument("--b", help="field values")
    p.add_argument("--n", type=int, help="largest string length (default 50)")
    _add_common(p)
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Merge flags > config file > defaults into one flat dict."""
    cfg = read_config(args.config) if getattr(args, "config", None) else {}
    merged = {}
    defaults = {**DEFAULTS, **COMMAND_DEFAULTS.get(args.command, {})}
    for key, default in defaults.items():
        val = getattr(args, key, None)
        if val is None and key in cfg:
            val = cfg[key]
        if val is None:
            val = default
        merged[key] = val
    try:
        merged["tol"] = float(merged["tol"])
        merged["jobs"] = int(merged["jobs"])
        merged["levels"] = int(merged["levels"])
        if merged["n"] is not None:
            merged["n"] = int(merged["n"])
        if isinstance(merged["allow_large"], str):
            merged["allow_large"] = merged["allow_large"].lower() in ("1", "true", "yes")
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if not merged["tol"] > 0:
        raise ConfigError("--tol must be positive")
    if merged["jobs"] < 1:
        raise ConfigError("--jobs must be >= 1")
    if merged["format"] not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {merged['format']!r}")
    merged["command"] = args.command
    return merged


# ---------------------------------------------------------------------- output


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        return None if not math.isfinite(float(v)) else float(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def render(table: Table, fmt: str) -> str:
    if fmt == "json":
        payload = {
            "metadata": table.metadata,
            "rows": [{k: _jsonable(r.get(k)) for k in table.fields} for r in table.rows],
        }
        return json.dumps(payload, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.fields)
    for r in table.rows:
        w.writerow([_fmt(r.get(k)) for k in table.fields])
    return buf.getvalue()


def emit(table: Table, cfg: dict) -> None:
    text = render(table, cfg["format"])
    if cfg["out"]:
        with open(cfg["out"], "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _metadata(cfg: dict, **extra) -> dict:
    return {"command": cfg["command"], "version": __version__, "tol": cfg["tol"], **extra}


# -------------------------------------------------------------------- commands


def cmd_sweep(cfg: dict) -> int:
    B_grid = parse_grid(cfg["b"])
    R_grid = parse_grid(cfg["r"], integer=True)
    if any(R < 1 for R in R_grid):
        raise ConfigError("R values must be positive")
    measures = [m.strip() for m in str(cfg["measures"]).split(",") if m.strip()]
    bad = set(measures) - set(MEASURES)
    if bad or not measures:
        raise ConfigError(f"unknown measures {sorted(bad)}; choose from {','.join(MEASURES)}")
    rows = sweep(B_grid, R_grid, measures, cfg["tol"], jobs=cfg["jobs"], allow_odd=True)
    table = Table(ROW_FIELDS, [r.as_dict() for r in rows], _metadata(cfg, measures=measures))
    emit(table, cfg)
    failed = any(f.startswith("error:") for r in rows for f in r.flags)
    return EXIT_NUMERICAL if failed else EXIT_OK


FIT_FIELDS = ("B", "measure", "kind", "parameter", "r_squared", "R_min", "R_max", "n_points", "flags")


def _read_sweep_points(path: str, B: float, measure: str) -> list:
    col = {"zz": "zz"}.get(measure, measure)
    pts = []
    try:
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                if abs(float(row["B"]) - B) > 1e-12 or int(row["R"]) % 2:
                    continue
                if measure == "zz":
                    v = float(row["zz"]) - float(row["z"]) ** 2
                elif row.get(col, "") == "":
                    continue
                else:
                    v = float(row[col])
                pts.append((int(row["R"]), abs(v)))
    except (OSError, KeyError, ValueError) as exc:
        raise ConfigError(f"cannot read sweep file {path}: {exc}") from None
    return pts


def cmd_fit(cfg: dict) -> int:
    B_grid = parse_grid(cfg["b"])
    measures = [m.strip() for m in str(cfg["measure"]).split(",") if m.strip()]
    bad = set(measures) - set(FIT_MEASURES)
    if bad:
        raise ConfigError(f"unknown measure {sorted(bad)}; choose from {','.join(FIT_MEASURES)}")
    rows = []
    for B in B_grid:
        critical = abs(abs(B) - 1.0) < 1e-12
        kind = cfg["kind"] if cfg["kind"] != "auto" else ("power" if critical else "exp")
        R_grid = parse_grid(cfg["r"] or ("4:60:2" if critical else "2:40:2"), integer=True)
        for m in measures:
            try:
                if cfg["input"]:
                    pts = _read_sweep_points(cfg["input"], B, m)
                    res = power_fit(pts) if kind == "power" else exp_decay_fit(pts)
                else:
                    res = fit_measure(B, m, [R for R in R_grid if R % 2 == 0], kind, cfg["tol"])
            except FitError as exc:
                raise ConfigError(f"B={B}, {m}: {exc}") from None
            rows.append(
                {
                    "B": B,
                    "measure": m,
                    "kind": res.kind,
                    "parameter": res.parameter,
                    "r_squared": res.r_squared,
                    "R_min": int(res.window[0]),
                    "R_max": int(res.window[1]),
                    "n_points": res.n_points,
                    "flags": ";".join(res.flags),
                }
            )
    emit(Table(FIT_FIELDS, rows, _metadata(cfg)), cfg)
    return EXIT_OK


def cmd_birth(cfg: dict) -> int:
    R_list = parse_grid(cfg["r"], integer=True)
    lo_hi = parse_grid(cfg["bracket"])
    if len(lo_hi) != 2:
        raise ConfigError("--bracket needs two values B_lo,B_hi")
    rows = []
    for R in R_list:
        if R % 2 or R < 2:
            raise ConfigError(f"birth needs even R >= 2, got {R}")
        try:
            b_e = entanglement_birth(R, (lo_hi[0], lo_hi[1]), cfg["tol"])
        except BracketError as exc:
            raise ConfigError(f"no entanglement crossing: {exc}") from None
        rows.append({"R": R, "B_lo": lo_hi[0], "B_hi": lo_hi[1], "B_E": b_e})
    emit(Table(("R", "B_lo", "B_hi", "B_E"), rows, _metadata(cfg, resolution=1e-5, threshold=1e-10)), cfg)
    return EXIT_OK


VALIDATE_FIELDS = ("check", "B", "N", "status", "value", "expected", "residual", "threshold")
CORRELATOR_TOL = 2e-2


def _check(rows, name, B, N, value, expected, threshold, passed=None):
    residual = abs(value - expected) if expected is not None and value is not None else None
    if passed is None:
        passed = residual is not None and residual <= threshold
    rows.append(
        {
            "check": name,
            "B": B,
            "N": N,
            "status": "pass" if passed else "fail",
            "value": value,
            "expected": expected,
            "residual": residual,
            "threshold": threshold,
        }
    )


def validation_rows(N: int, B_grid, tol: float = DEFAULT_TOL, allow_large: bool = False) -> list:
    limit = MAX_N_OPT_IN if allow_large else MAX_N
    if N > limit:
        raise SizeGuardError(f"N={N} exceeds the ED size guard ({limit}); use --allow-large for N <= {MAX_N_OPT_IN}")
    rows = []
    for B in B_grid:
        p_open = ModelParams(B=B, N=N, boundary="open")
        ed = diagonalize(p_open, allow_large)
        bdg = bdg_solve(p_open)
        levels = min(8, 2**N)
        diff = float(np.max(np.abs(ed.energies[:levels] - bdg.low_levels(levels))))
        _check(rows, "ed_vs_bdg_levels", B, N, diff, 0.0, 1e-8)

        n_zero = int(np.sum(bdg.quasiparticle_energies < 1e-10))
        deg_open = degeneracy(p_open, allow_large=allow_large).degeneracy
        _check(rows, "degeneracy_open", B, N, deg_open, 2**n_zero, 0)
        if B == 0:
            _check(rows, "degeneracy_open_cluster", B, N, deg_open, 4, 0)
            _check(rows, "bdg_majorana_zero_modes", B, N, bdg.zero_mode_count(), 4, 0)
            p_per = ModelParams(B=B, N=N, boundary="periodic")
            _check(rows, "degeneracy_periodic", B, N, degeneracy(p_per, allow_large=allow_large).degeneracy, 1, 0)
            for p, tag in ((p_open, "open"), (p_per, "periodic")):
                s = stabilizer_expectations(p)
                _check(rows, f"stabilizers_{tag}", B, N, float(np.min(s)), 1.0, 1e-12)

        G = g_vector(B, max(2, N), tol)
        z_analytic = SIGN * G[0]
        i, _ = mid_chain_pair(N, 2)
        rho_ed = two_site_rdm_ed(p_open, i, i + 2, sol=ed)
        z_ed = pauli_expectation(np.asarray(rho_ed), SZ, ID2)
        if B != 0:
            _check(rows, "sign_convention", B, N, float(np.sign(z_ed)), float(np.sign(z_analytic)), 0)

        if B == 0 or abs(B) >= 1.5:
            for R in range(2, N - 5, 2):
                i, j = mid_chain_pair(N, R)
                rho_ed = np.asarray(two_site_rdm_ed(p_open, i, j, sol=ed))
                c = correlator_set(B, R, G=G)
                for name, op, val in (("xx", SX, c.xx), ("yy", SY, c.yy), ("zz", SZ, c.zz)):
                    _check(rows, f"{name}_R{R}", B, N, pauli_expectation(rho_ed, op, op), val, CORRELATOR_TOL)
                dev = float(np.max(np.abs(rho_ed - build_rdm(c).entries)))
                _check(rows, f"rdm_R{R}", B, N, dev, 0.0, CORRELATOR_TOL)
    return rows


def cmd_validate(cfg: dict) -> int:
    N = cfg["n"]
    if N is None or N < 4:
        raise ConfigError("--n must be an integer >= 4")
    try:
        rows = validation_rows(N, parse_grid(cfg["b"]), cfg["tol"], cfg["allow_large"])
    except SizeGuardError as exc:
        raise ConfigError(str(exc)) from None
    emit(Table(VALIDATE_FIELDS, rows, _metadata(cfg)), cfg)
    return EXIT_OK if all(r["status"] == "pass" for r in rows) else EXIT_VALIDATION


def cmd_spectrum(cfg: dict) -> int:
    N = cfg["n"]
    rows = []
    for B in parse_grid(cfg["b"]):
        params = ModelParams(B=B, N=N, boundary=cfg["boundary"])
        try:
            spec = degeneracy(params, count=cfg["levels"], allow_large=cfg["allow_large"])
        except SizeGuardError as exc:
            raise ConfigError(str(exc)) from None
        for k, e in enumerate(spec.lowest_energies):
            rows.append({"B": B, "N": N, "boundary": params.boundary, "quantity": "ed_level", "index": k, "value": e})
        rows.append({"B": B, "N": N, "boundary": params.boundary, "quantity": "degeneracy", "index": 0, "value": spec.degeneracy})
        if params.boundary == "open":
            bdg = bdg_solve(params)
            for k, e in enumerate(bdg.quasiparticle_energies):
                rows.append({"B": B, "N": N, "boundary": "open", "quantity": "quasiparticle", "index": k, "value": e})
            rows.append({"B": B, "N": N, "boundary": "open", "quantity": "majorana_zero_modes", "index": 0, "value": bdg.zero_mode_count()})
    emit(Table(("B", "N", "boundary", "quantity", "index", "value"), rows, _metadata(cfg)), cfg)
    return EXIT_OK


def cmd_sop(cfg: dict) -> int:
    n_max = cfg["n"]
    if n_max is None or n_max < 1:
        raise ConfigError("--n must be >= 1")
    rows = []
    for B in parse_grid(cfg["b"]):
        G = g_vector(B, max(1, 2 * (n_max - 1)), cfg["tol"])
        for n in range(1, n_max + 1):
            rows.append({"B": B, "n": n, "value": string_correlator(G, n), "asymptote": sop_asymptote(B)})
    emit(Table(("B", "n", "value", "asymptote"), rows, _metadata(cfg)), cfg)
    return EXIT_OK


COMMANDS = {
    "sweep": cmd_sweep,
    "fit": cmd_fit,
    "birth": cmd_birth,
    "validate": cmd_validate,
    "spectrum": cmd_spectrum,
    "sop": cmd_sop,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        return COMMANDS[args.command](cfg)
    except (ConfigError, ValueError) as exc:
        print(f"clusterchain {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ClusterChainError as exc:
        print(f"clusterchain {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
