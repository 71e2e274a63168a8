"""Normal-state stability diagnostics.

The upper-left entry of the inverse photon propagator in the normal state,

    K^R_1(w) = (w - omega0 + i kappa)/2
               + i (g^2/4) int dw'/2pi [ G^R_bb(w') G^K_aa(w' - w)
                                         + G^K_bb(w') G^A_aa(w' - w) ],

controls where the photon spectral weight

    W(w) = Im K^R_1 / (2 pi |K^R_1|^2)

changes character.  The effective chemical potential mu_eff is the lowest
root of Im K^R_1(w) = 0 inside the search window; when no root exists the
normal state has no quasi-equilibrium frequency (strong dephasing regime).
The fermion propagators enter either bare or drive-dressed (one Dyson
resummation), selected by the ``dressed`` flag.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .convolution import Correlator
from .errors import SingularBlock, ValidationError
from .greens import DriveSpectrum, FrequencyGrid, SystemParams, default_grid
from .selfenergy import dress

__all__ = ["StabilityReport", "k_r1", "mu_eff", "spectral_weight",
           "stability_report", "SCAN_POINTS"]

### scan resolution for bracketing Im K^R_1 sign changes
SCAN_POINTS = 2000


def _k_r1_curve(params: SystemParams, drive: DriveSpectrum,
                grid: FrequencyGrid, dressed: bool, method: str) -> np.ndarray:
    gf, _, _ = dress(params, drive, grid, 0.0, 0.0,
                     "one_shot" if dressed else "bare", method)
    c = Correlator(grid, method)
    conv = (c.correlate(c.f_side(gf.R[:, 0, 0], "G^R_bb"),
                        c.g_side(gf.K[:, 1, 1], "G^K_aa"))
            + c.correlate(c.f_side(gf.K[:, 0, 0], "G^K_bb"),
                          c.g_side(gf.A[:, 1, 1], "G^A_aa")))
    w = grid.points
    return (0.5 * (w - params.omega0 + 1j * params.kappa)
            + 0.25j * params.g**2 * conv)


@dataclass(frozen=True, eq=False)
class StabilityReport:
    """K^R_1 curve with its axis crossings and derived quantities."""

    omega: np.ndarray
    k_r1: np.ndarray
    spectral_weight: np.ndarray
    crossings: tuple
    mu_eff: float | None
    dressed: bool
    window: tuple


def stability_report(params: SystemParams, drive: DriveSpectrum,
                     grid: FrequencyGrid | None = None, dressed: bool = False,
                     method: str = "auto",
                     window: tuple | None = None) -> StabilityReport:
    """Full diagnostic sweep: curve, crossings of Im K^R_1, mu_eff."""
    if grid is None:
        grid = default_grid(params, drive)
    if window is None:
        half = 10.0 * params.g
        if half <= 0.0:  # decoupled limit: fall back to the grid span
            half = float(grid.points[-1])
        window = (-half, half)
    lo, hi = float(window[0]), float(window[1])
    if not (lo < hi):
        raise ValidationError(f"bad search window {window}")
    lo = max(lo, grid.points[0])
    hi = min(hi, grid.points[-1])

    curve = _k_r1_curve(params, drive, grid, dressed, method)
    mag = np.abs(curve)
    if mag.min() < 1e-14:
        i = int(np.argmin(mag))
        raise SingularBlock("K^R_1 vanishes (spectral weight denominator is "
                            f"degenerate) at omega = {grid.points[i]:.6g}",
                            omega=grid.points[i])
    weight = curve.imag / (2.0 * np.pi * mag**2)

    im = CubicSpline(grid.points, curve.imag)
    xs = np.linspace(lo, hi, SCAN_POINTS)
    vals = im(xs)
    roots = []
    for i in range(SCAN_POINTS - 1):
        va, vb = vals[i], vals[i + 1]
        if va == 0.0:
            roots.append(float(xs[i]))
        elif va * vb < 0.0:
            roots.append(float(brentq(im, xs[i], xs[i + 1], xtol=1e-13)))
    if vals[-1] == 0.0:
        roots.append(float(xs[-1]))
    return StabilityReport(grid.points, curve, weight, tuple(roots),
                           roots[0] if roots else None, dressed, (lo, hi))


def k_r1(omega, params: SystemParams, drive: DriveSpectrum,
         grid: FrequencyGrid | None = None, dressed: bool = False,
         method: str = "auto"):
    """K^R_1 at arbitrary frequencies (cubic interpolation of the grid
    curve); omega=None returns the full curve on the grid."""
    if grid is None:
        grid = default_grid(params, drive)
    curve = _k_r1_curve(params, drive, grid, dressed, method)
    if omega is None:
        return curve
    spline = CubicSpline(grid.points, curve)
    out = spline(np.asarray(omega, dtype=float))
    return complex(out) if np.isscalar(omega) else out


def mu_eff(params: SystemParams, drive: DriveSpectrum,
           grid: FrequencyGrid | None = None, dressed: bool = False,
           method: str = "auto", window: tuple | None = None) -> float | None:
    """Lowest root of Im K^R_1 in the window, or None when absent."""
    return stability_report(params, drive, grid, dressed, method, window).mu_eff


def spectral_weight(omega, params: SystemParams, drive: DriveSpectrum,
                    grid: FrequencyGrid | None = None, dressed: bool = False,
                    method: str = "auto"):
    """Photon spectral weight W(omega) = Im K^R_1 / (2 pi |K^R_1|^2)."""
    if grid is None:
        grid = default_grid(params, drive)
    report = stability_report(params, drive, grid, dressed, method)
    if omega is None:
        return report.spectral_weight
    spline = CubicSpline(report.omega, report.spectral_weight)
    out = spline(np.asarray(omega, dtype=float))
    return float(out) if np.isscalar(omega) else out
