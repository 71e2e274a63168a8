"""Parameter sweeps, condensation thresholds, phase boundaries, CSV output.

Sweeps walk the first axis in ascending order with warm-start continuation:
each point's seed list is the previous converged condensed root (if any)
followed by the default seeds.  Two-axis sweeps run one such continuation
per value of the second axis.  A single frequency grid, wide enough for the
most demanding point of the sweep, is used throughout so results are
deterministic and comparable across points.

CSV layout (both files start with a '#'-prefixed metadata block):
  sweep file:     axis1,axis2,mu_S,psi_f,polarization,rho,phase,residual,iterations
  boundary file:  axis1,axis2
For one-axis sweeps the axis2 column is left empty.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import __version__
from .errors import ValidationError
from .greens import (DriveSpectrum, FlatDrive, FrequencyGrid, LorentzianDrive,
                     SystemParams, TabulatedDrive, default_grid)
from .grid import DEFAULT_POINTS
from .solver import (DEFAULT_SEEDS, PSI_THRESHOLD, SaddleSolution,
                     TrustRegionOptions, solve_saddle)

__all__ = ["AXES", "SweepSpec", "SweepResult", "sweep_1d", "sweep_2d",
           "find_threshold", "boundary_points", "write_sweep_csv",
           "write_boundary_csv"]

AXES = ("h", "xi", "Omega", "mu_B", "kappa", "gamma")
_DRIVE_AXES = ("h", "xi", "Omega")


@dataclass(frozen=True)
class SweepSpec:
    """Axis names and values for a one- or two-axis sweep."""

    axis1: str
    values1: tuple
    axis2: str | None = None
    values2: tuple | None = None

    def __post_init__(self):
        for ax in (self.axis1, self.axis2):
            if ax is not None and ax not in AXES:
                raise ValidationError(f"unknown sweep axis {ax!r}; choose from {AXES}")
        if self.axis2 == self.axis1:
            raise ValidationError("the two sweep axes must differ")
        object.__setattr__(self, "values1", tuple(float(v) for v in self.values1))
        if not self.values1:
            raise ValidationError("axis1 needs at least one value")
        if (self.axis2 is None) != (self.values2 is None):
            raise ValidationError("axis2 and values2 go together")
        if self.values2 is not None:
            object.__setattr__(self, "values2", tuple(float(v) for v in self.values2))
            if not self.values2:
                raise ValidationError("axis2 needs at least one value")


def apply_axis(params: SystemParams, drive: DriveSpectrum, axis: str,
               value: float) -> tuple[SystemParams, DriveSpectrum]:
    """New (params, drive) with one named quantity replaced."""
    if axis not in AXES:
        raise ValidationError(f"unknown sweep axis {axis!r}")
    if axis in _DRIVE_AXES:
        if isinstance(drive, TabulatedDrive):
            raise ValidationError("tabulated drives have no sweepable axis")
        if axis != "h" and not isinstance(drive, LorentzianDrive):
            raise ValidationError(f"axis {axis!r} needs a Lorentzian drive")
        return params, replace(drive, **{axis: value})
    return replace(params, **{axis: value}), drive


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Solutions in row-major order: index i2 * len(values1) + i1 (i2 = 0
    for one-axis sweeps)."""

    spec: SweepSpec
    params: SystemParams
    drive: DriveSpectrum
    dressing: str
    grid: FrequencyGrid
    solutions: tuple

    @property
    def shape(self) -> tuple:
        n2 = len(self.spec.values2) if self.spec.values2 else 1
        return (n2, len(self.spec.values1))

    def solution(self, i1: int, i2: int = 0) -> SaddleSolution:
        return self.solutions[i2 * len(self.spec.values1) + i1]


def _sweep_grid(params, drive, spec, n_points, tail_policy):
    """One grid covering the most demanding corner of the sweep."""
    W = default_grid(params, drive).half_width
    corners1 = {min(spec.values1), max(spec.values1)}
    corners2 = {min(spec.values2), max(spec.values2)} if spec.values2 else {None}
    for v1 in corners1:
        for v2 in corners2:
            p, d = apply_axis(params, drive, spec.axis1, v1)
            if v2 is not None:
                p, d = apply_axis(p, d, spec.axis2, v2)
            W = max(W, default_grid(p, d).half_width)
    return FrequencyGrid.symmetric(W, n_points, tail_policy)


def _continuation_run(params, drive, axis, values, grid, dressing, method,
                      options, psi_threshold, progress, continuation):
    order = np.argsort(values, kind="stable")
    sols: list = [None] * len(values)
    prev = None
    for i in order:
        p, d = apply_axis(params, drive, axis, values[i])
        seeds = list(DEFAULT_SEEDS)
        if continuation and prev is not None and prev.phase == "Condensed":
            seeds.insert(0, (prev.mu_S, prev.psi_f))
        sol = solve_saddle(p, d, grid, seeds, options, dressing, method,
                           psi_threshold)
        sols[i] = sol
        if sol.phase != "Inaccessible":
            prev = sol
        if progress is not None:
            progress(axis, values[i], sol)
    return sols


def sweep_1d(params: SystemParams, drive: DriveSpectrum, spec: SweepSpec | None = None,
             *, axis: str | None = None, values=None,
             grid: FrequencyGrid | None = None, grid_points: int = DEFAULT_POINTS,
             tail_policy: str = "analytic", dressing: str = "one_shot",
             method: str = "auto", options: TrustRegionOptions | None = None,
             psi_threshold: float = PSI_THRESHOLD, progress=None,
             continuation: bool = True) -> SweepResult:
    """Continuation sweep along a single axis (ascending)."""
    if spec is None:
        if axis is None or values is None:
            raise ValidationError("pass a SweepSpec or axis= and values=")
        spec = SweepSpec(axis, tuple(values))
    if spec.axis2 is not None:
        raise ValidationError("sweep_1d takes a one-axis spec")
    if grid is None:
        grid = _sweep_grid(params, drive, spec, grid_points, tail_policy)
    sols = _continuation_run(params, drive, spec.axis1, spec.values1, grid,
                             dressing, method, options, psi_threshold, progress,
                             continuation)
    return SweepResult(spec, params, drive, dressing, grid, tuple(sols))


def sweep_2d(params: SystemParams, drive: DriveSpectrum, spec: SweepSpec,
             *, grid: FrequencyGrid | None = None, grid_points: int = DEFAULT_POINTS,
             tail_policy: str = "analytic", dressing: str = "one_shot",
             method: str = "auto", options: TrustRegionOptions | None = None,
             psi_threshold: float = PSI_THRESHOLD, progress=None,
             continuation: bool = True) -> SweepResult:
    """Axis1 continuation repeated for each axis2 value."""
    if spec.axis2 is None:
        raise ValidationError("sweep_2d needs a two-axis spec")
    if grid is None:
        grid = _sweep_grid(params, drive, spec, grid_points, tail_policy)
    sols: list = []
    for v2 in spec.values2:
        p, d = apply_axis(params, drive, spec.axis2, v2)
        sols.extend(_continuation_run(p, d, spec.axis1, spec.values1, grid,
                                      dressing, method, options, psi_threshold,
                                      progress, continuation))
    return SweepResult(spec, params, drive, dressing, grid, tuple(sols))


def find_threshold(result: SweepResult, row: int = 0,
                   psi_threshold: float = PSI_THRESHOLD) -> float | None:
    """Condensation onset along axis1 (row = axis2 index for 2d results).

    Uses the mean-field scaling psi_f^2 ~ (value - threshold): the line
    through the first two condensed points is extrapolated back to
    psi_f^2 = 0, clipped to the bracketing interval; with a single
    condensed point the crossing of psi_threshold^2 is interpolated.
    Returns None when no Normal -> Condensed transition occurs.
    """
    n1 = len(result.spec.values1)
    vals = result.spec.values1
    sols = result.solutions[row * n1: (row + 1) * n1]
    for i in range(1, n1):
        if sols[i].phase == "Condensed" and sols[i - 1].phase == "Normal":
            lo, hi = vals[i - 1], vals[i]
            p1 = sols[i].psi_f ** 2
            if i + 1 < n1 and sols[i + 1].phase == "Condensed":
                p2 = sols[i + 1].psi_f ** 2
                if p2 > p1:
                    slope = (p2 - p1) / (vals[i + 1] - vals[i])
                    return float(np.clip(hi - p1 / slope, lo, hi))
            level = psi_threshold**2
            return float(lo + (hi - lo) * level / max(p1, level))
    return None


def boundary_points(result: SweepResult,
                    psi_threshold: float = PSI_THRESHOLD) -> list[tuple]:
    """Phase-boundary vertices of a two-axis sweep.

    Marching-squares style: psi_f^2 (zero in the Normal phase) is
    interpolated along every lattice edge whose endpoints straddle the
    threshold level; edges touching an Inaccessible point contribute their
    midpoint when the other end is Condensed and are skipped otherwise.
    """
    if result.spec.axis2 is None:
        raise ValidationError("boundary extraction needs a two-axis sweep")
    v1, v2 = result.spec.values1, result.spec.values2
    n2, n1 = result.shape
    level = psi_threshold**2

    def field(i1, i2):
        s = result.solution(i1, i2)
        return np.nan if s.phase == "Inaccessible" else s.psi_f**2

    pts = []
    for i2 in range(n2):
        for i1 in range(n1):
            here = field(i1, i2)
            for j1, j2 in ((i1 + 1, i2), (i1, i2 + 1)):
                if j1 >= n1 or j2 >= n2:
                    continue
                there = field(j1, j2)
                a = (v1[i1], v2[i2])
                b = (v1[j1], v2[j2])
                if np.isnan(here) or np.isnan(there):
                    cond = (not np.isnan(here) and here > level) or \
                           (not np.isnan(there) and there > level)
                    if cond:
                        pts.append(((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0))
                    continue
                if (here - level) * (there - level) < 0.0:
                    t = (level - here) / (there - here)
                    pts.append((a[0] + t * (b[0] - a[0]),
                                a[1] + t * (b[1] - a[1])))
    return pts


def _fmt(x) -> str:
    if isinstance(x, float):
        return "nan" if np.isnan(x) else f"{x:.12g}"
    return str(x)


def _metadata_lines(result: SweepResult) -> list[str]:
    p, d = result.params, result.drive
    lines = [f"# opentc {__version__} sweep",
             f"# axis1 = {result.spec.axis1}"]
    if result.spec.axis2 is not None:
        lines.append(f"# axis2 = {result.spec.axis2}")
    for name in ("g", "omega0", "eps0", "kappa", "gamma", "mu_B", "T_F"):
        lines.append(f"# system.{name} = {_fmt(getattr(p, name))}")
    lines.append(f"# drive.kind = {type(d).__name__}")
    if isinstance(d, LorentzianDrive):
        for name in ("h", "xi", "Omega"):
            lines.append(f"# drive.{name} = {_fmt(getattr(d, name))}")
    elif isinstance(d, FlatDrive):
        lines.append(f"# drive.h = {_fmt(d.h)}")
    lines += [f"# dressing = {result.dressing}",
              f"# grid.points = {result.grid.n}",
              f"# grid.half_width = {_fmt(result.grid.half_width)}",
              f"# grid.tail_policy = {result.grid.tail_policy}"]
    return lines


def write_sweep_csv(result: SweepResult, path, metadata=None) -> None:
    """Deterministic sweep table; swept-axis values appear per row, fixed
    context in the metadata block (callers may supply their own block)."""
    rows = ["axis1,axis2,mu_S,psi_f,polarization,rho,phase,residual,iterations"]
    n2, n1 = result.shape
    for i2 in range(n2):
        a2 = _fmt(result.spec.values2[i2]) if result.spec.values2 else ""
        for i1 in range(n1):
            s = result.solution(i1, i2)
            obs = s.observables
            rows.append(",".join([
                _fmt(result.spec.values1[i1]), a2,
                _fmt(s.mu_S), _fmt(s.psi_f),
                _fmt(float(obs.get("polarization", np.nan))),
                _fmt(float(obs.get("rho", np.nan))),
                s.phase, f"{s.residual_norm:.6g}", str(s.iterations)]))
    head = metadata if metadata is not None else _metadata_lines(result)
    text = "\n".join(list(head) + rows) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_boundary_csv(result: SweepResult, path,
                       psi_threshold: float = PSI_THRESHOLD,
                       metadata=None) -> None:
    """Phase-boundary vertex list for a two-axis sweep."""
    pts = boundary_points(result, psi_threshold)
    rows = ["axis1,axis2"] + [f"{_fmt(x)},{_fmt(y)}" for x, y in pts]
    head = metadata if metadata is not None else _metadata_lines(result)
    text = "\n".join(list(head) + rows) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
