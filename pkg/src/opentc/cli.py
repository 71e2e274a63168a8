"""Command-line front end: flat key-value configs, subcommands, CSV output.

Configuration documents are UTF-8 text, one ``section.key = value`` per
line, ``#`` starting a comment; unknown keys are a hard error.  Every value
has a default, so an empty document describes a solvable normal-state run.
All frequencies and rates are in units of g, matching the library.

Commands
    solve            locate the steady state, write <stem>.csv
    sweep1d          continuation sweep along sweep.axis1
    sweep2d          sweep over (axis1, axis2) plus <stem>_boundary.csv
    stability        normal-state K^R_1 curve and spectral weight
    dump-greens      photon + fermion propagators at mu_S = 0, psi_f = 0
    dump-selfenergy  self-energy components at mu_S = 0, psi_f = 0

Every CSV starts with a ``#``-commented metadata block that is itself a
complete configuration document: stripping the leading ``# `` and feeding
the block back to parse_config reproduces the run's configuration exactly.
Reruns overwrite outputs byte-identically.

Exit codes: 0 success, 1 configuration/validation error, 2 numerical
failure (no point of the run was solvable), 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (OpenTCError, ParseError, UnknownKey, ValidationError)
from .greens import (FlatDrive, LorentzianDrive, SystemParams, TabulatedDrive,
                     bare_fermion_gf, default_grid, photon_gf)
from .grid import DEFAULT_POINTS, FrequencyGrid, ensure_odd
from .selfenergy import dress, sigma_from
from .solver import TrustRegionOptions, solve_saddle
from .stability import stability_report
from .sweep import (AXES, SweepSpec, find_threshold, sweep_1d, sweep_2d,
                    write_boundary_csv, write_sweep_csv)

__all__ = ["RunConfig", "parse_config", "config_lines", "run", "main",
           "COMMANDS"]

COMMANDS = ("solve", "sweep1d", "sweep2d", "stability", "dump-greens",
            "dump-selfenergy")


@dataclass(frozen=True)
class DriveConfig:
    kind: str = "lorentzian"        # lorentzian | flat | tabulated
    h: float = 0.0
    xi: float = 0.0
    Omega: float = 1.0
    file: str = ""                  # two-column CSV for kind = tabulated


@dataclass(frozen=True)
class GridConfig:
    points: int = DEFAULT_POINTS
    half_width: float = 0.0         # 0 = automatic from params and drive
    tail_policy: str = "analytic"


@dataclass(frozen=True)
class SolverConfig:
    dressing: str = "one_shot"
    psi_threshold: float = 1e-4
    max_iterations: int = 200
    residual_tol: float = 1e-10
    initial_radius: float = 1.0
    max_radius: float = 10.0
    eta: float = 1e-3
    fd_step: float = 1e-6


@dataclass(frozen=True)
class SweepConfig:
    axis1: str = "h"
    start1: float = 0.0
    stop1: float = 2.0
    num1: int = 21
    axis2: str = ""                 # empty = one-axis sweep
    start2: float = 0.0
    stop2: float = 1.0
    num2: int = 2


@dataclass(frozen=True)
class OutputConfig:
    dir: str = "."
    stem: str = "opentc"


@dataclass(frozen=True)
class RunConfig:
    system: SystemParams
    drive: DriveConfig
    grid: GridConfig
    solver: SolverConfig
    sweep: SweepConfig
    output: OutputConfig

    def make_drive(self):
        d = self.drive
        if d.kind == "lorentzian":
            return LorentzianDrive(d.h, d.xi, d.Omega)
        if d.kind == "flat":
            return FlatDrive(d.h)
        if d.kind == "tabulated":
            if not d.file:
                raise ValidationError("drive.kind = tabulated needs drive.file")
            table = np.loadtxt(d.file, delimiter=",", comments="#", ndmin=2)
            if table.shape[1] != 2:
                raise ValidationError(
                    f"{d.file}: tabulated drive needs two columns, "
                    f"got {table.shape[1]}")
            return TabulatedDrive(table[:, 0], table[:, 1])
        raise ValidationError(f"unknown drive.kind {d.kind!r}")

    def make_grid(self, params=None, drive=None) -> FrequencyGrid:
        params = params if params is not None else self.system
        drive = drive if drive is not None else self.make_drive()
        n = ensure_odd(self.grid.points)
        if self.grid.half_width > 0:
            return FrequencyGrid.symmetric(self.grid.half_width, n,
                                           self.grid.tail_policy)
        auto = default_grid(params, drive)
        return FrequencyGrid.symmetric(auto.half_width, n,
                                       self.grid.tail_policy)

    def make_options(self) -> TrustRegionOptions:
        s = self.solver
        return TrustRegionOptions(s.max_iterations, s.residual_tol,
                                  s.initial_radius, s.max_radius, s.eta,
                                  s.fd_step)

    def make_sweep_spec(self, two_axis: bool) -> SweepSpec:
        s = self.sweep
        vals1 = tuple(np.linspace(s.start1, s.stop1, s.num1))
        if not two_axis:
            return SweepSpec(s.axis1, vals1)
        if not s.axis2:
            raise ValidationError("sweep2d needs sweep.axis2")
        return SweepSpec(s.axis1, vals1, s.axis2,
                         tuple(np.linspace(s.start2, s.stop2, s.num2)))


### key registry: section -> name -> (type tag, allowed values or None)
_FLOAT, _INT, _STR = "float", "int", "str"
_SCHEMA = {
    "system": {"g": (_FLOAT, None), "omega0": (_FLOAT, None),
               "eps0": (_FLOAT, None), "kappa": (_FLOAT, None),
               "gamma": (_FLOAT, None), "mu_B": (_FLOAT, None),
               "T_F": (_FLOAT, None)},
    "drive": {"kind": (_STR, ("lorentzian", "flat", "tabulated")),
              "h": (_FLOAT, None), "xi": (_FLOAT, None),
              "Omega": (_FLOAT, None), "file": (_STR, None)},
    "grid": {"points": (_INT, None), "half_width": (_FLOAT, None),
             "tail_policy": (_STR, ("analytic", "truncate"))},
    "solver": {"dressing": (_STR, ("bare", "one_shot", "fixed_point")),
               "psi_threshold": (_FLOAT, None),
               "max_iterations": (_INT, None),
               "residual_tol": (_FLOAT, None),
               "initial_radius": (_FLOAT, None),
               "max_radius": (_FLOAT, None), "eta": (_FLOAT, None),
               "fd_step": (_FLOAT, None)},
    "sweep": {"axis1": (_STR, AXES), "start1": (_FLOAT, None),
              "stop1": (_FLOAT, None), "num1": (_INT, None),
              "axis2": (_STR, AXES + ("",)), "start2": (_FLOAT, None),
              "stop2": (_FLOAT, None), "num2": (_INT, None)},
    "output": {"dir": (_STR, None), "stem": (_STR, None)},
}
_SECTION_TYPES = {"system": SystemParams, "drive": DriveConfig,
                  "grid": GridConfig, "solver": SolverConfig,
                  "sweep": SweepConfig, "output": OutputConfig}


def parse_config(text: str) -> RunConfig:
    """Parse a flat ``section.key = value`` document into a RunConfig."""
    raw: dict = {section: {} for section in _SCHEMA}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ParseError(f"expected 'section.key = value', got {body!r}",
                             line=lineno)
        key, _, value = body.partition("=")
        key, value = key.strip(), value.strip()
        if "." not in key:
            raise ParseError(f"key {key!r} is missing its section prefix",
                             line=lineno, col=body.index("=") + 1)
        section, _, name = key.partition(".")
        if section not in _SCHEMA or name not in _SCHEMA[section]:
            raise UnknownKey(f"unknown configuration key {key!r} (line {lineno})")
        tag, allowed = _SCHEMA[section][name]
        try:
            if tag == _FLOAT:
                value = float(value)
            elif tag == _INT:
                value = int(value)
        except ValueError:
            raise ParseError(f"key {key!r} needs a {tag} value, got {value!r}",
                             line=lineno) from None
        if allowed is not None and value not in allowed:
            raise ValidationError(
                f"key {key!r}: {value!r} is not one of {sorted(allowed)}")
        raw[section][name] = value

    ### resonance default: an unset omega0 follows eps0
    if "omega0" not in raw["system"]:
        raw["system"]["omega0"] = 2.0 * raw["system"].get("eps0", 0.0)
    parts = {}
    for section, cls in _SECTION_TYPES.items():
        try:
            parts[section] = cls(**raw[section])
        except ValidationError as exc:
            raise ValidationError(f"section '{section}': {exc}") from None
    cfg = RunConfig(**parts)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    if cfg.drive.h < 0:
        raise ValidationError(f"drive.h must be >= 0, got {cfg.drive.h}")
    if cfg.drive.Omega <= 0:
        raise ValidationError(f"drive.Omega must be positive, got {cfg.drive.Omega}")
    if cfg.grid.points < 3:
        raise ValidationError(f"grid.points must be >= 3, got {cfg.grid.points}")
    if cfg.grid.half_width < 0:
        raise ValidationError("grid.half_width must be >= 0 (0 = automatic)")
    s = cfg.solver
    if s.psi_threshold <= 0 or s.residual_tol <= 0 or s.fd_step <= 0:
        raise ValidationError("solver tolerances must be positive")
    if s.max_iterations < 1:
        raise ValidationError("solver.max_iterations must be >= 1")
    if cfg.sweep.num1 < 1 or cfg.sweep.num2 < 1:
        raise ValidationError("sweep point counts must be >= 1")
    if not cfg.output.stem:
        raise ValidationError("output.stem must not be empty")


def _fmt_value(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def config_lines(cfg: RunConfig) -> list[str]:
    """Canonical serialization; parse_config on the joined lines reproduces
    cfg exactly."""
    out = []
    for section, cls in _SECTION_TYPES.items():
        part = getattr(cfg, section)
        for f in fields(cls):
            v = getattr(part, f.name)
            if section == "drive" and f.name == "file" and not v:
                continue
            out.append(f"{section}.{f.name} = {_fmt_value(v)}")
    return out


def _metadata(cfg: RunConfig) -> list[str]:
    return [f"# {line}" for line in config_lines(cfg)]


def _write_csv(path: Path, metadata: list[str], header: str,
               rows: list[str]) -> None:
    text = "\n".join(metadata + [header] + rows) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _f(x) -> str:
    x = float(x)
    return "nan" if np.isnan(x) else f"{x:.12g}"


def _complex_cols(*names) -> list[str]:
    out = []
    for n in names:
        out += [f"re_{n}", f"im_{n}"]
    return out


def _run_solve(cfg: RunConfig, out_dir: Path, log: list) -> int:
    params, drive = cfg.system, cfg.make_drive()
    grid = cfg.make_grid(params, drive)
    sol = solve_saddle(params, drive, grid, options=cfg.make_options(),
                       dressing=cfg.solver.dressing,
                       psi_threshold=cfg.solver.psi_threshold)
    obs = sol.observables
    rows = [",".join([_f(sol.mu_S), _f(sol.psi_f),
                      _f(obs.get("polarization", np.nan)),
                      _f(obs.get("rho", np.nan)), sol.phase,
                      f"{sol.residual_norm:.6g}", str(sol.iterations)])]
    _write_csv(out_dir / f"{cfg.output.stem}.csv", _metadata(cfg),
               "mu_S,psi_f,polarization,rho,phase,residual,iterations", rows)
    log.append(f"solve: phase={sol.phase} mu_S={_f(sol.mu_S)} "
               f"psi_f={_f(sol.psi_f)} residual={sol.residual_norm:.3g} "
               f"iterations={sol.iterations}")
    if sol.message:
        log.append(f"solve: {sol.message}")
    print(f"solve: phase={sol.phase} mu_S={_f(sol.mu_S)} psi_f={_f(sol.psi_f)} "
          f"rho={_f(obs.get('rho', np.nan))}")
    return 2 if sol.phase == "Inaccessible" else 0


def _run_sweep(cfg: RunConfig, out_dir: Path, log: list, two_axis: bool) -> int:
    params, drive = cfg.system, cfg.make_drive()
    spec = cfg.make_sweep_spec(two_axis)
    kw = dict(grid_points=ensure_odd(cfg.grid.points),
              tail_policy=cfg.grid.tail_policy, dressing=cfg.solver.dressing,
              options=cfg.make_options(),
              psi_threshold=cfg.solver.psi_threshold,
              progress=lambda ax, v, s: log.append(
                  f"{ax} = {_f(v)}: {s.phase} psi_f={_f(s.psi_f)} "
                  f"iterations={s.iterations}"))
    if cfg.grid.half_width > 0:
        kw["grid"] = cfg.make_grid(params, drive)
        del kw["grid_points"], kw["tail_policy"]
    if two_axis:
        result = sweep_2d(params, drive, spec, **kw)
    else:
        result = sweep_1d(params, drive, spec, **kw)
    write_sweep_csv(result, out_dir / f"{cfg.output.stem}.csv",
                    metadata=_metadata(cfg))
    phases = [s.phase for s in result.solutions]
    if two_axis:
        write_boundary_csv(result, out_dir / f"{cfg.output.stem}_boundary.csv",
                           cfg.solver.psi_threshold, metadata=_metadata(cfg))
        print(f"sweep2d: {len(phases)} points, "
              f"{phases.count('Condensed')} condensed, "
              f"{phases.count('Normal')} normal, "
              f"{phases.count('Inaccessible')} inaccessible")
    else:
        thr = find_threshold(result, psi_threshold=cfg.solver.psi_threshold)
        thr_txt = _f(thr) if thr is not None else "none"
        print(f"sweep1d: {len(phases)} points along {spec.axis1}, "
              f"threshold = {thr_txt}")
        log.append(f"threshold = {thr_txt}")
    return 2 if all(p == "Inaccessible" for p in phases) else 0


def _run_stability(cfg: RunConfig, out_dir: Path, log: list) -> int:
    params, drive = cfg.system, cfg.make_drive()
    grid = cfg.make_grid(params, drive)
    rep = stability_report(params, drive, grid,
                           dressed=cfg.solver.dressing != "bare")
    rows = [",".join([_f(w), _f(k.real), _f(k.imag), _f(s)])
            for w, k, s in zip(rep.omega, rep.k_r1, rep.spectral_weight)]
    _write_csv(out_dir / f"{cfg.output.stem}.csv", _metadata(cfg),
               "omega,re_k1,im_k1,spectral_weight", rows)
    mu_txt = _f(rep.mu_eff) if rep.mu_eff is not None else "none"
    log.append(f"stability: mu_eff = {mu_txt}, "
               f"crossings = {len(rep.crossings)}, dressed = {rep.dressed}")
    print(f"stability: mu_eff = {mu_txt} ({len(rep.crossings)} crossing(s), "
          f"{'dressed' if rep.dressed else 'bare'})")
    return 0


def _run_dump_greens(cfg: RunConfig, out_dir: Path, log: list) -> int:
    params, drive = cfg.system, cfg.make_drive()
    grid = cfg.make_grid(params, drive)
    if cfg.solver.dressing == "bare":
        gf = bare_fermion_gf(grid, params)
        photon = photon_gf(grid, params, drive)
    else:
        gf, photon, _ = dress(params, drive, grid,
                              dressing=cfg.solver.dressing)
    names = ["g_psi_R", "g_psi_A", "g_psi_K"]
    series = [photon.R, photon.A, photon.K]
    for block, tag in ((gf.R, "G_R"), (gf.A, "G_A"), (gf.K, "G_K")):
        for (i, j), lab in (((0, 0), "bb"), ((1, 1), "aa"),
                            ((0, 1), "ba"), ((1, 0), "ab")):
            names.append(f"{tag}_{lab}")
            series.append(block[:, i, j])
    header = ",".join(["omega"] + _complex_cols(*names))
    rows = []
    for i, w in enumerate(grid.points):
        cells = [_f(w)]
        for s in series:
            cells += [_f(s[i].real), _f(s[i].imag)]
        rows.append(",".join(cells))
    _write_csv(out_dir / f"{cfg.output.stem}.csv", _metadata(cfg), header, rows)
    log.append(f"dump-greens: {grid.n} frequencies, dressing = "
               f"{cfg.solver.dressing}")
    print(f"dump-greens: wrote {grid.n} frequencies x {len(names)} components")
    return 0


def _run_dump_selfenergy(cfg: RunConfig, out_dir: Path, log: list) -> int:
    params, drive = cfg.system, cfg.make_drive()
    grid = cfg.make_grid(params, drive)
    if cfg.solver.dressing == "fixed_point":
        gf, photon, sigma = dress(params, drive, grid, dressing="fixed_point")
    else:
        gf = bare_fermion_gf(grid, params)
        photon = photon_gf(grid, params, drive)
        sigma = sigma_from(gf, photon, params)
    names = ["sigma_R_bb", "sigma_R_aa", "sigma_A_bb", "sigma_A_aa",
             "sigma_K_bb", "sigma_K_aa"]
    series = [sigma.r_bb, sigma.r_aa, sigma.a_bb, sigma.a_aa,
              sigma.k_bb, sigma.k_aa]
    header = ",".join(["omega"] + _complex_cols(*names))
    rows = []
    for i, w in enumerate(grid.points):
        cells = [_f(w)]
        for s in series:
            cells += [_f(s[i].real), _f(s[i].imag)]
        rows.append(",".join(cells))
    _write_csv(out_dir / f"{cfg.output.stem}.csv", _metadata(cfg), header, rows)
    log.append(f"dump-selfenergy: {grid.n} frequencies")
    print(f"dump-selfenergy: wrote {grid.n} frequencies x {len(names)} components")
    return 0


_RUNNERS = {"solve": _run_solve, "stability": _run_stability,
            "dump-greens": _run_dump_greens,
            "dump-selfenergy": _run_dump_selfenergy}


def run(command: str, cfg: RunConfig) -> int:
    """Execute a subcommand; returns the process exit status."""
    if command not in COMMANDS:
        raise ValidationError(f"unknown command {command!r}; choose from {COMMANDS}")
    log: list = [f"opentc {__version__} :: {command}"]
    try:
        out_dir = Path(cfg.output.dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        if command in ("sweep1d", "sweep2d"):
            status = _run_sweep(cfg, out_dir, log, command == "sweep2d")
        else:
            status = _RUNNERS[command](cfg, out_dir, log)
    except OpenTCError as exc:
        log.append(f"error: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        status = 1 if isinstance(exc, (ValidationError, ParseError)) else 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    try:
        with open(Path(cfg.output.dir) / f"{cfg.output.stem}.log", "w",
                  encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(log) + "\n")
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    return status


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="opentc",
        description="Steady states of the incoherently driven open "
                    "Tavis-Cummings model")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="path to a key-value configuration file")
    ap.add_argument("--out", help="output directory (overrides output.dir)")
    ap.add_argument("--threads", type=int, default=1,
                    help="FFT worker threads")
    ap.add_argument("--grid-points", type=int, dest="grid_points",
                    help="override grid.points")
    ap.add_argument("--dressing", choices=("bare", "one_shot", "fixed_point"),
                    help="override solver.dressing")
    ap.add_argument("--version", action="version", version=__version__)
    args = ap.parse_args(argv)

    try:
        text = ""
        if args.config:
            text = Path(args.config).read_text(encoding="utf-8")
        cfg = parse_config(text)
        if args.out:
            cfg = replace(cfg, output=replace(cfg.output, dir=args.out))
        if args.grid_points:
            cfg = replace(cfg, grid=replace(cfg.grid, points=args.grid_points))
        if args.dressing:
            cfg = replace(cfg, solver=replace(cfg.solver,
                                              dressing=args.dressing))
        if args.threads != 1:
            from .convolution import set_fft_workers
            set_fft_workers(args.threads)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except OpenTCError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return run(args.command, cfg)


if __name__ == "__main__":
    sys.exit(main())
