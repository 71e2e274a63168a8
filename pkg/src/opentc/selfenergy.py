"""Drive-induced self-energy and the Dyson resummation.

The photon mode mediates an effective interaction between the two fermion
species.  The upper level b is dressed by emitting a photon into the lower
level a (intermediate frequencies add, so the photon line enters as a true
convolution); the lower level a is dressed by absorbing a photon to reach b
(frequencies subtract, a plain correlation with the time-reversed photon
contraction).  All six nonzero components are Nambu-diagonal; the anomalous
components vanish at this order and are never materialized.

Component map (o is the 1/2pi-normalized correlation from
opentc.convolution, (f o g~)(w) = int dv/2pi f(v) g(w - v) is the reflected
variant, i.e. the true convolution):

    Sigma^R_bb = P [ G^R_aa o G^K_psi~ + G^K_aa o G^R_psi~ ]
    Sigma^R_aa = P [ G^R_bb o G^K_psi + G^K_bb o G^A_psi ]
    Sigma^A_bb = P [ G^A_aa o G^K_psi~ + G^K_aa o G^A_psi~ ]
    Sigma^A_aa = P [ G^A_bb o G^K_psi + G^K_bb o G^R_psi ]
    Sigma^K_bb = P [ G^K_aa o G^K_psi~ + G^R_aa o G^R_psi~ + G^A_aa o G^A_psi~ ]
    Sigma^K_aa = P [ G^K_bb o G^K_psi + G^A_bb o G^R_psi + G^R_bb o G^A_psi ]

with P g^2 = i g^2/2 multiplying the 1/2pi-normalized loop, i.e. a total
of i g^2/(4 pi) per bare frequency integral; SIGMA_PREFACTOR below is the
only place this constant lives.  The absolute scale is pinned by the
weak-coupling (golden-rule) limit: a narrow inverted level decaying into
an empty cavity of normalized spectral density rho must acquire amplitude
width pi g^2 rho, and the medium-induced photon damping must likewise be
pi g^2 rho_f (n_a - n_b); both come out right only with this constant,
which also makes the fermion and photon one-loop self-energies carry the
same vertex normalization.  Two further checks pin the routing: in global
equilibrium the components satisfy the fermionic fluctuation-dissipation
identity only with this assignment, and the dressed propagators transform
rigidly under a shift of the rotating-frame frequency exactly when every
block does.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .convolution import Correlator
from .errors import ConvergenceError, SingularBlock, ValidationError
from .greens import (DriveSpectrum, FrequencyGrid, KeldyshGF, PhotonGF,
                     SystemParams, bare_fermion_gf, fermi_distribution,
                     photon_gf)

__all__ = ["SelfEnergy", "SIGMA_PREFACTOR", "sigma_from", "dyson", "dress"]

### single source of truth for the one-loop vertex constant: i g^2/2 times
### the 1/2pi-normalized loop, equivalently i g^2/(4 pi) per plain frequency
### integral (g^2 is applied separately at the point of use)
SIGMA_PREFACTOR = 0.5j


@dataclass(frozen=True, eq=False)
class SelfEnergy:
    """Nambu-diagonal self-energy components on a grid, each (n,) complex."""

    grid: FrequencyGrid
    r_bb: np.ndarray
    r_aa: np.ndarray
    a_bb: np.ndarray
    a_aa: np.ndarray
    k_bb: np.ndarray
    k_aa: np.ndarray

    @classmethod
    def zero(cls, grid: FrequencyGrid) -> "SelfEnergy":
        z = np.zeros(grid.n, dtype=complex)
        return cls(grid, z, z.copy(), z.copy(), z.copy(), z.copy(), z.copy())


def sigma_from(gf: KeldyshGF, photon: PhotonGF, params: SystemParams,
               method: str = "auto") -> SelfEnergy:
    """Self-energy components from fermion and photon propagators."""
    grid = gf.grid
    grid.require_same(photon.grid, "fermion and photon propagators")
    c = Correlator(grid, method)

    fR_bb = c.f_side(gf.R[:, 0, 0], "G^R_bb")
    fR_aa = c.f_side(gf.R[:, 1, 1], "G^R_aa")
    fA_bb = c.f_side(gf.A[:, 0, 0], "G^A_bb")
    fA_aa = c.f_side(gf.A[:, 1, 1], "G^A_aa")
    fK_bb = c.f_side(gf.K[:, 0, 0], "G^K_bb")
    fK_aa = c.f_side(gf.K[:, 1, 1], "G^K_aa")

    gR = c.g_side(photon.R, "G^R_psi")
    gA = c.g_side(photon.A, "G^A_psi")
    gK = c.g_side(photon.K, "G^K_psi")
    gRr = c.g_side(photon.R, "G^R_psi(-)", reflect=True)
    gAr = c.g_side(photon.A, "G^A_psi(-)", reflect=True)
    gKr = c.g_side(photon.K, "G^K_psi(-)", reflect=True)

    pref = params.g**2 * SIGMA_PREFACTOR
    r_bb = pref * (c.correlate(fR_aa, gKr) + c.correlate(fK_aa, gRr))
    r_aa = pref * (c.correlate(fR_bb, gK) + c.correlate(fK_bb, gA))
    a_bb = pref * (c.correlate(fA_aa, gKr) + c.correlate(fK_aa, gAr))
    a_aa = pref * (c.correlate(fA_bb, gK) + c.correlate(fK_bb, gR))
    k_bb = pref * (c.correlate(fK_aa, gKr) + c.correlate(fR_aa, gRr)
                   + c.correlate(fA_aa, gAr))
    k_aa = pref * (c.correlate(fK_bb, gK) + c.correlate(fA_bb, gR)
                   + c.correlate(fR_bb, gA))
    return SelfEnergy(grid, r_bb, r_aa, a_bb, a_aa, k_bb, k_aa)


def _invert_blocks(inv: np.ndarray, grid: FrequencyGrid, what: str) -> np.ndarray:
    """Vectorized 2x2 inverse with a singularity check."""
    a, b = inv[:, 0, 0], inv[:, 0, 1]
    c, d = inv[:, 1, 0], inv[:, 1, 1]
    det = a * d - b * c
    bad = np.abs(det) < 1e-14
    if bad.any():
        i = int(np.argmax(bad))
        raise SingularBlock(f"{what} inverse-propagator block is singular at "
                            f"omega = {grid.points[i]:.6g}", omega=grid.points[i])
    out = np.empty_like(inv)
    out[:, 0, 0] = d / det
    out[:, 0, 1] = -b / det
    out[:, 1, 0] = -c / det
    out[:, 1, 1] = a / det
    return out


def dyson(gf0: KeldyshGF, params: SystemParams, mu_S: float, psi_f: float,
          sigma: SelfEnergy, grid: FrequencyGrid | None = None) -> KeldyshGF:
    """Dressed propagator G = (G0^-1 - Sigma)^-1 in the causality structure
    G^K = -G^R ((G0^-1)^K - Sigma^K) G^A.

    The inverse bare blocks are assembled analytically:
      (G0^-1)^{R/A} = (w +- i gamma) s0 - eps s3 - g psi_f (s+ + s-),
      (G0^-1)^K     = 2 i gamma diag(F_b, F_a),
    so with Sigma = 0 this reproduces ``bare_fermion_gf`` to round-off.
    ``gf0`` fixes the grid (and is only consistency-checked otherwise).
    """
    if grid is None:
        grid = gf0.grid
    gf0.grid.require_same(grid, "bare propagator and requested grid")
    sigma.grid.require_same(grid, "self-energy and propagator")
    w = grid.points
    g, gam = params.g, params.gamma
    eps = params.eps0 - 0.5 * mu_S
    n = grid.n

    invR = np.zeros((n, 2, 2), dtype=complex)
    invR[:, 0, 0] = w + 1j * gam - eps - sigma.r_bb
    invR[:, 1, 1] = w + 1j * gam + eps - sigma.r_aa
    invR[:, 0, 1] = -g * psi_f
    invR[:, 1, 0] = -g * psi_f

    invA = np.zeros((n, 2, 2), dtype=complex)
    invA[:, 0, 0] = w - 1j * gam - eps - sigma.a_bb
    invA[:, 1, 1] = w - 1j * gam + eps - sigma.a_aa
    invA[:, 0, 1] = -g * psi_f
    invA[:, 1, 0] = -g * psi_f

    Ksrc = np.zeros((n, 2, 2), dtype=complex)
    Ksrc[:, 0, 0] = 2j * gam * fermi_distribution(w, "b", params, mu_S) - sigma.k_bb
    Ksrc[:, 1, 1] = 2j * gam * fermi_distribution(w, "a", params, mu_S) - sigma.k_aa

    R = _invert_blocks(invR, grid, "retarded")
    A = _invert_blocks(invA, grid, "advanced")
    K = -(R @ Ksrc @ A)
    return KeldyshGF(grid, R, A, K)


def dress(params: SystemParams, drive: DriveSpectrum, grid: FrequencyGrid,
          mu_S: float = 0.0, psi_f: float = 0.0, dressing: str = "one_shot",
          method: str = "auto", fp_damping: float = 0.5, fp_tol: float = 1e-8,
          fp_max_iter: int = 100) -> tuple[KeldyshGF, PhotonGF, SelfEnergy]:
    """Fermion propagator at the requested dressing level.

    'bare'        no self-energy
    'one_shot'    Sigma from the bare propagator, then one Dyson resummation
    'fixed_point' damped iteration G -> (1-l) G + l Dyson(Sigma[G]) until
                  max block change < fp_tol (ConvergenceError otherwise)
    """
    photon = photon_gf(grid, params, drive, mu_S)
    gf0 = bare_fermion_gf(grid, params, mu_S, psi_f)
    if dressing == "bare":
        return gf0, photon, SelfEnergy.zero(grid)
    if dressing == "one_shot":
        sigma = sigma_from(gf0, photon, params, method)
        return dyson(gf0, params, mu_S, psi_f, sigma, grid), photon, sigma
    if dressing != "fixed_point":
        raise ValidationError(f"unknown dressing {dressing!r}")

    gf = gf0
    for _ in range(fp_max_iter):
        sigma = sigma_from(gf, photon, params, method)
        new = dyson(gf0, params, mu_S, psi_f, sigma, grid)
        delta = max(np.abs(new.R - gf.R).max(), np.abs(new.A - gf.A).max(),
                    np.abs(new.K - gf.K).max())
        gf = KeldyshGF(grid,
                       (1.0 - fp_damping) * gf.R + fp_damping * new.R,
                       (1.0 - fp_damping) * gf.A + fp_damping * new.A,
                       (1.0 - fp_damping) * gf.K + fp_damping * new.K)
        if delta < fp_tol:
            return gf, photon, sigma
    raise ConvergenceError(
        f"fixed-point dressing did not converge in {fp_max_iter} iterations "
        f"(last change {delta:.3g})")
