"""Command-line interface.

Subcommands:

  dispersion   trace branches of one wave class over a wavenumber grid
  cutoffs      extrapolate traced branches to K -> 0
  modes        section displacement field of one branch at one wavenumber
  converge     truncation study against the largest requested order

Settings resolve in three layers: built-in defaults, then a flat JSON config
file (--config), then explicit command-line flags.  CSV goes to --out or to
stdout; identical runs produce byte-identical output.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .collocation import BoundaryLayout, Problem, WaveClass
from .dispersion import (
    Branch,
    ScanConfig,
    convergence_error,
    cutoff_frequency,
    scan_roots,
    trace_branches,
)
from .errors import ConfigError, InvalidParameterError, WavebeamError
from .fields import BasisLayout
from .model import material_from_poisson, section_from_aspect, state_from_nondimensional
from .modes import mode_field, null_vector
from .svg import Series, line_chart, mode_map

_DEFAULTS: dict = {
    "bc": "FFFF",
    "wave": "Ls",
    "aspect": 1.0,
    "nu": 0.3,
    "M": 8,
    "N": 8,
    "oversample": 2.0,
    "kmin": 0.01,
    "kmax": 1.0,
    "ksteps": 100,
    "omega_min": 0.01,
    "omega_max": 2.0,
    "domega": 5e-3,
    "threshold_factor": None,
    "threshold_abs": None,
    "rescan_every": 10,
    "branches": 5,
    "branch": 1,
    "K": 0.1,
    "kcut": 0.1,
    "m_list": [4, 8, 12],
    "out": None,
    "svg": None,
}

_INT_KEYS = {"M", "N", "ksteps", "rescan_every", "branches", "branch"}
_FLOAT_KEYS = {"aspect", "nu", "oversample", "kmin", "kmax", "omega_min",
               "omega_max", "domega", "threshold_factor", "threshold_abs",
               "K", "kcut"}


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a flat JSON object")
    for key in data:
        if key not in _DEFAULTS:
            raise ConfigError(f"unknown config key {key!r}")
    return data


def _settings(args: argparse.Namespace) -> dict:
    merged = dict(_DEFAULTS)
    if getattr(args, "config", None):
        merged.update(_load_config(args.config))
    for key in _DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    for key in _INT_KEYS:
        if merged[key] is not None:
            merged[key] = int(merged[key])
    for key in _FLOAT_KEYS:
        if merged[key] is not None:
            merged[key] = float(merged[key])
    if isinstance(merged["m_list"], str):
        try:
            merged["m_list"] = [int(tok) for tok in merged["m_list"].split(",") if tok]
        except ValueError as exc:
            raise ConfigError(f"bad m_list {merged['m_list']!r}") from exc
    return merged


def _problem(cfg: dict, order: int | None = None) -> Problem:
    mat = material_from_poisson(cfg["nu"])
    cs = section_from_aspect(cfg["aspect"])
    M = order if order is not None else cfg["M"]
    N = order if order is not None else cfg["N"]
    layout = BasisLayout(M, N)
    return Problem(mat=mat, cs=cs, layout=layout,
                   bc=BoundaryLayout.parse(cfg["bc"]),
                   wave=WaveClass(cfg["wave"]),
                   oversample=cfg["oversample"])


def _scan(cfg: dict) -> ScanConfig:
    kwargs = dict(omega_min=cfg["omega_min"], omega_max=cfg["omega_max"],
                  domega=cfg["domega"])
    if cfg["threshold_factor"] is not None:
        kwargs["threshold_factor"] = cfg["threshold_factor"]
    if cfg["threshold_abs"] is not None:
        kwargs["threshold_abs"] = cfg["threshold_abs"]
    return ScanConfig(**kwargs)


def _k_grid(cfg: dict) -> np.ndarray:
    if cfg["ksteps"] < 1:
        raise ConfigError(f"ksteps must be positive, got {cfg['ksteps']}")
    if not cfg["kmin"] <= cfg["kmax"]:
        raise ConfigError(f"need kmin <= kmax, got {cfg['kmin']} > {cfg['kmax']}")
    return np.linspace(cfg["kmin"], cfg["kmax"], cfg["ksteps"])


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _num(x: float) -> str:
    return f"{x:.12g}"


def _branch_csv(branches: list[Branch]) -> str:
    lines = ["wave,branch,K,Omega,flag"]
    for b in branches:
        for K, om, fl in zip(b.K, b.omega, b.flags):
            lines.append(f"{b.wave},{b.index},{_num(K)},{_num(om)},{fl}")
    return "\n".join(lines) + "\n"


def _svg_height(doc: str) -> int:
    return int(float(doc.split('height="', 1)[1].split('"', 1)[0]))


def cmd_dispersion(cfg: dict) -> int:
    problem = _problem(cfg)
    branches = trace_branches(problem, _k_grid(cfg), _scan(cfg),
                              max_branches=cfg["branches"] or None,
                              rescan_every=cfg["rescan_every"] or None)
    _write(_branch_csv(branches), cfg["out"])
    if cfg["svg"]:
        series = [Series(*b.as_arrays(), label=f"{b.wave}{b.index}")
                  for b in branches]
        doc = line_chart(series, xlabel="K", ylabel="Omega",
                         title=f"{cfg['bc']} {cfg['wave']} dispersion, "
                               f"a/b={cfg['aspect']:g}")
        _write(doc, cfg["svg"])
    sys.stderr.write(f"traced {len(branches)} branches\n")
    return 0


def cmd_cutoffs(cfg: dict) -> int:
    if cfg["kmin"] > cfg["kcut"]:
        raise ConfigError(
            f"kmin {cfg['kmin']:g} exceeds the fit window kcut {cfg['kcut']:g}")
    steps = max(5, min(cfg["ksteps"], 20))
    grid = np.linspace(cfg["kmin"], cfg["kcut"], steps)
    problem = _problem(cfg)
    branches = trace_branches(problem, grid, _scan(cfg),
                              max_branches=cfg["branches"] or None,
                              rescan_every=None)
    lines = ["wave,branch,Omega0,samples"]
    for b in branches:
        omega0 = cutoff_frequency(b, k_cut=cfg["kcut"])
        lines.append(f"{b.wave},{b.index},{_num(omega0)},{len(b.K)}")
    _write("\n".join(lines) + "\n", cfg["out"])
    return 0


def cmd_modes(cfg: dict) -> int:
    problem = _problem(cfg)
    roots = scan_roots(cfg["K"], problem, _scan(cfg))
    idx = cfg["branch"]
    if idx < 1 or idx > len(roots):
        raise InvalidParameterError(
            f"branch {idx} not found at K = {cfg['K']:g}: the sweep located "
            f"{len(roots)} branch(es) below Omega = {cfg['omega_max']:g}")
    root = roots[idx - 1]
    state = state_from_nondimensional(cfg["K"], root.omega, problem.mat,
                                      problem.cs)
    nv = null_vector(state, problem)
    mode = mode_field(state, problem, nv)
    lines = ["x1,x2,u,v,w"]
    for i, x1 in enumerate(mode.x1):
        for j, x2 in enumerate(mode.x2):
            lines.append(f"{_num(x1)},{_num(x2)},{_num(mode.u[i, j])},"
                         f"{_num(mode.v[i, j])},{_num(mode.w[i, j])}")
    _write("\n".join(lines) + "\n", cfg["out"])
    if cfg["svg"]:
        docs = [mode_map(mode.x1, mode.x2, mode.component(c),
                         title=f"{mode.wave} {c}(x1,x2)  K={cfg['K']:g}  "
                               f"Omega={root.omega:.6f}")
                for c in ("u", "v", "w")]
        y, parts = 0, []
        width = 420
        for doc in docs:
            h = _svg_height(doc)
            parts.append(f'<svg y="{y}">{doc[doc.index(">") + 1:]}')
            y += h
        combined = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
                    f'height="{y}" viewBox="0 0 {width} {y}">'
                    + "".join(parts) + "</svg>")
        _write(combined, cfg["svg"])
    sys.stderr.write(f"K={cfg['K']:g} branch {idx}: Omega={root.omega:.9f} "
                     f"(sigma={root.sigma:.3e})\n")
    return 0


def cmd_converge(cfg: dict) -> int:
    m_list = sorted(set(cfg["m_list"]))
    if len(m_list) < 2:
        raise ConfigError("m_list needs at least two truncation orders")
    grid = _k_grid(cfg)
    nb = cfg["branches"]
    traces: dict[int, list[Branch]] = {}
    for M in m_list:
        problem = _problem(cfg, order=M)
        traces[M] = trace_branches(problem, grid, _scan(cfg),
                                   max_branches=nb, rescan_every=None)
    ref = traces[m_list[-1]]
    lines = ["wave,branch,M,error"]
    for M in m_list[:-1]:
        for b in traces[M]:
            if b.index > len(ref):
                continue
            err = convergence_error(b, ref[b.index - 1])
            lines.append(f"{b.wave},{b.index},{M},{_num(err)}")
    _write("\n".join(lines) + "\n", cfg["out"])
    return 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat JSON settings file")
    p.add_argument("--bc", help="four edge letters C/F, order (+a,+b,-a,-b)")
    p.add_argument("--wave", help="wave class: L T Bx1 Bx2 Ls La Ts Ta")
    p.add_argument("--aspect", type=float, help="side ratio a/b")
    p.add_argument("--nu", type=float, help="Poisson ratio")
    p.add_argument("--M", type=int, help="direction-2 series order")
    p.add_argument("--N", type=int, help="direction-1 series order")
    p.add_argument("--kmin", type=float)
    p.add_argument("--kmax", type=float)
    p.add_argument("--ksteps", type=int)
    p.add_argument("--omega-max", dest="omega_max", type=float)
    p.add_argument("--oversample", type=float)
    p.add_argument("--branches", type=int, help="number of branches to keep")
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.add_argument("--svg", help="also render an SVG to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavebeam",
        description="Dispersion and mode analysis of rectangular beams")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dispersion", help="trace dispersion branches")
    _add_common(p)

    p = sub.add_parser("cutoffs", help="extrapolate branches to K -> 0")
    _add_common(p)
    p.add_argument("--kcut", type=float, help="largest K used in the fit")

    p = sub.add_parser("modes", help="section displacement field of a branch")
    _add_common(p)
    p.add_argument("--K", type=float, help="wavenumber of the section field")
    p.add_argument("--branch", type=int, help="branch number at that K (1-based)")

    p = sub.add_parser("converge", help="truncation study over m_list")
    _add_common(p)
    p.add_argument("--m-list", dest="m_list",
                   help="comma separated truncation orders, largest is reference")
    return parser


_COMMANDS = {
    "dispersion": cmd_dispersion,
    "cutoffs": cmd_cutoffs,
    "modes": cmd_modes,
    "converge": cmd_converge,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _settings(args)
        return _COMMANDS[args.command](cfg)
    except (ConfigError, InvalidParameterError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except WavebeamError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
