"""Model parameters, drive spectra, and closed-form bare propagators.

The model: an ensemble of two-level emitters (represented by two fermion
species b and a after rotating-frame gauge fixing) coupled with collective
strength g to a single damped cavity mode, pumped by an incoherent photonic
bath with occupation n_B(omega), with each emitter attached to dephasing-type
fermionic baths.  All rates and energies are quoted in units of g.

Conventions (rotating frame at the condensate frequency mu_S):
  - fermion distributions  F_b(w) = tanh[(w + mu_S/2 - mu_B)/(2 T_F)],
                           F_a(w) = tanh[(w - mu_S/2 + mu_B)/(2 T_F)]
  - drive occupation is evaluated at the lab frequency w + mu_S
  - photon propagators G_psi^{R/A}(w) = 1/(w - (omega0 - mu_S) +- i kappa)
  - Nambu index 0 = b, 1 = a; the (0, 1) entry of a matrix block is the
    b-a component.

Keldysh blocks are stored as plain arrays over the frequency grid with the
causality structure [[R, K], [0, A]] kept implicit.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .grid import DEFAULT_POINTS, FrequencyGrid, integrate

__all__ = [
    "SystemParams", "LorentzianDrive", "FlatDrive", "TabulatedDrive",
    "FrequencyGrid", "KeldyshGF", "PhotonGF",
    "fermi_distribution", "drive_occupation", "photon_gf", "bare_fermion_gf",
    "occupation_from_K", "default_grid",
]


@dataclass(frozen=True)
class SystemParams:
    """Static model parameters (energies and rates in units of g).

    g       collective light-matter coupling (sets the unit scale)
    omega0  bare cavity frequency
    eps0    emitter half-splitting; resonance condition is omega0 = 2 eps0
    kappa   cavity loss rate
    gamma   emitter bath coupling (dephasing-type)
    mu_B    chemical potential of the emitter baths
    T_F     temperature of the emitter baths
    """

    g: float = 1.0
    omega0: float = 0.0
    eps0: float = 0.0
    kappa: float = 0.25
    gamma: float = 0.75
    mu_B: float = -0.5
    T_F: float = 0.1

    def __post_init__(self):
        if self.g < 0:
            raise ValidationError(f"g must be >= 0, got {self.g}")
        for name in ("kappa", "gamma", "T_F"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def beta(self) -> float:
        return 1.0 / self.T_F


@dataclass(frozen=True)
class LorentzianDrive:
    """Incoherent drive with Lorentzian occupation
    n_B(w) = h * 2 Omega / ((w - xi)^2 + Omega^2)  (lab frame):
    strength h, center xi, half-width Omega.  Peak occupation is 2 h / Omega.
    """

    h: float
    xi: float = 0.0
    Omega: float = 1.0

    def __post_init__(self):
        if self.h < 0:
            raise ValidationError(f"drive strength h must be >= 0, got {self.h}")
        if self.Omega <= 0:
            raise ValidationError(f"drive width Omega must be positive, got {self.Omega}")


@dataclass(frozen=True)
class FlatDrive:
    """Frequency-independent drive occupation n_B(w) = h."""

    h: float

    def __post_init__(self):
        if self.h < 0:
            raise ValidationError(f"drive strength h must be >= 0, got {self.h}")


@dataclass(frozen=True, eq=False)
class TabulatedDrive:
    """Drive occupation sampled on an ascending lab-frame frequency table;
    linear interpolation inside the table, zero outside."""

    omega: np.ndarray
    occupation: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=float)
        n = np.asarray(self.occupation, dtype=float)
        object.__setattr__(self, "omega", w)
        object.__setattr__(self, "occupation", n)
        if w.ndim != 1 or w.size < 2 or w.shape != n.shape:
            raise ValidationError("tabulated drive needs matching 1d arrays (>= 2 points)")
        if np.diff(w).min() <= 0:
            raise ValidationError("tabulated drive frequencies must be ascending")
        if n.min() < 0:
            raise ValidationError("tabulated drive occupation must be >= 0")


DriveSpectrum = LorentzianDrive | FlatDrive | TabulatedDrive


@dataclass(frozen=True, eq=False)
class KeldyshGF:
    """Fermionic Keldysh propagator on a grid: R, A, K are (n, 2, 2) complex
    arrays in Nambu space (index 0 = b, 1 = a)."""

    grid: FrequencyGrid
    R: np.ndarray
    A: np.ndarray
    K: np.ndarray

    def __post_init__(self):
        want = (self.grid.n, 2, 2)
        for name in ("R", "A", "K"):
            if getattr(self, name).shape != want:
                raise ValidationError(f"{name} block has shape "
                                      f"{getattr(self, name).shape}, expected {want}")


@dataclass(frozen=True, eq=False)
class PhotonGF:
    """Cavity-mode Keldysh propagator on a grid: R, A, K are (n,) complex."""

    grid: FrequencyGrid
    R: np.ndarray
    A: np.ndarray
    K: np.ndarray


def fermi_distribution(omega, species: str, params: SystemParams,
                       mu_S: float = 0.0):
    """Bath distribution F_s(omega) = tanh(beta * arg / 2) in the rotating
    frame; np.tanh saturates to +-1 for large arguments without overflow."""
    omega = np.asarray(omega, dtype=float)
    if species == "b":
        arg = omega + 0.5 * mu_S - params.mu_B
    elif species == "a":
        arg = omega - 0.5 * mu_S + params.mu_B
    else:
        raise ValidationError(f"species must be 'b' or 'a', got {species!r}")
    return np.tanh(0.5 * params.beta * arg)


def drive_occupation(omega, drive: DriveSpectrum, mu_S: float = 0.0):
    """Drive occupation n_B at rotating-frame frequency omega (i.e. the lab
    spectrum evaluated at omega + mu_S)."""
    omega = np.asarray(omega, dtype=float)
    w_lab = omega + mu_S
    if isinstance(drive, LorentzianDrive):
        return drive.h * 2.0 * drive.Omega / ((w_lab - drive.xi) ** 2 + drive.Omega**2)
    if isinstance(drive, FlatDrive):
        return np.full(omega.shape, float(drive.h))
    if isinstance(drive, TabulatedDrive):
        return np.interp(w_lab, drive.omega, drive.occupation, left=0.0, right=0.0)
    raise ValidationError(f"unknown drive spectrum {type(drive).__name__}")


def photon_gf(grid: FrequencyGrid, params: SystemParams, drive: DriveSpectrum,
              mu_S: float = 0.0) -> PhotonGF:
    """Bare cavity propagator in the rotating frame.

    R/A have a single pole at omega0 - mu_S -+ i kappa; K carries the drive
    through F_Psi = 1 + 2 n_B."""
    w = grid.points
    w0 = params.omega0 - mu_S
    R = 1.0 / (w - w0 + 1j * params.kappa)
    A = 1.0 / (w - w0 - 1j * params.kappa)
    F_psi = 1.0 + 2.0 * drive_occupation(w, drive, mu_S)
    K = -2j * params.kappa * F_psi / ((w - w0) ** 2 + params.kappa**2)
    return PhotonGF(grid, R, A, K)


def bare_fermion_gf(grid: FrequencyGrid, params: SystemParams,
                    mu_S: float = 0.0, psi_f: float = 0.0) -> KeldyshGF:
    """Bare emitter propagator for a real coherent amplitude psi_f >= 0.

    R/A blocks:  [(w +- i gamma) s0 + eps s3 + g psi_f (s+ + s-)] / det
    with eps = eps0 - mu_S/2, E^2 = eps^2 + g^2 psi_f^2 and
    det = w^2 - E^2 +- 2 i gamma w - gamma^2.  K entries follow from the
    bath distributions F_b, F_a.
    """
    w = grid.points
    g, gam = params.g, params.gamma
    eps = params.eps0 - 0.5 * mu_S
    gpsi = g * psi_f
    E2 = eps * eps + gpsi * gpsi

    dR = w * w - E2 + 2j * gam * w - gam * gam
    dA = np.conj(dR)
    n = grid.n
    R = np.empty((n, 2, 2), dtype=complex)
    A = np.empty((n, 2, 2), dtype=complex)
    R[:, 0, 0] = (w + 1j * gam + eps) / dR
    R[:, 1, 1] = (w + 1j * gam - eps) / dR
    R[:, 0, 1] = gpsi / dR
    R[:, 1, 0] = gpsi / dR
    A[:, 0, 0] = (w - 1j * gam + eps) / dA
    A[:, 1, 1] = (w - 1j * gam - eps) / dA
    A[:, 0, 1] = gpsi / dA
    A[:, 1, 0] = gpsi / dA

    Fb = fermi_distribution(w, "b", params, mu_S)
    Fa = fermi_distribution(w, "a", params, mu_S)
    dd = (dR * dA).real  # ((w-E)^2 + gamma^2)((w+E)^2 + gamma^2)
    K = np.empty((n, 2, 2), dtype=complex)
    K[:, 0, 0] = -2j * gam * (((w + eps) ** 2 + gam * gam) * Fb + gpsi * gpsi * Fa) / dd
    K[:, 1, 1] = -2j * gam * (((w - eps) ** 2 + gam * gam) * Fa + gpsi * gpsi * Fb) / dd
    K[:, 0, 1] = -2j * gam * gpsi * ((w + eps + 1j * gam) * Fb
                                     + (w - eps - 1j * gam) * Fa) / dd
    K[:, 1, 0] = -np.conj(K[:, 0, 1])
    return KeldyshGF(grid, R, A, K)


def occupation_from_K(gf: KeldyshGF, species: str) -> float:
    """Steady-state occupation n_s = (1 - i int dw/2pi K_ss(w)) / 2.

    The result is clamped to [0, 1]; an excursion beyond 1e-6 (a sign of an
    under-resolved grid) is reported as a warning."""
    idx = {"b": 0, "a": 1}.get(species)
    if idx is None:
        raise ValidationError(f"species must be 'b' or 'a', got {species!r}")
    val = integrate(gf.K[:, idx, idx], gf.grid, name=f"K_{species}{species}")
    n = float(0.5 * (1.0 - (1j * val / (2.0 * np.pi)).real))
    if not -1e-6 <= n <= 1.0 + 1e-6:
        warnings.warn(f"occupation n_{species} = {n:.6g} clamped to [0, 1]; "
                      "the grid may be too coarse", stacklevel=2)
    return min(max(n, 0.0), 1.0)


def default_grid(params: SystemParams, drive: DriveSpectrum | None = None,
                 mu_S: float = 0.0, psi_f: float = 0.0,
                 n: int = DEFAULT_POINTS,
                 tail_policy: str = "analytic") -> FrequencyGrid:
    """Symmetric grid wide enough for every spectral feature.

    Half-width W = max(50 g, |xi - mu_S| + 20 Omega, 20 E, 20 kappa,
    20 gamma), extended to cover tabulated drive support."""
    eps = params.eps0 - 0.5 * mu_S
    E = np.hypot(eps, params.g * psi_f)
    W = max(50.0 * params.g, 20.0 * E, 20.0 * params.kappa, 20.0 * params.gamma)
    if isinstance(drive, LorentzianDrive):
        W = max(W, abs(drive.xi - mu_S) + 20.0 * drive.Omega)
    elif isinstance(drive, TabulatedDrive):
        W = max(W, 1.25 * np.abs(drive.omega - mu_S).max())
    return FrequencyGrid.symmetric(W, n, tail_policy)
