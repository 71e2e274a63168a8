"""
Propagators, distribution functions, and the drive spectrum
===========================================================

A guided tour of the building blocks: the frequency grid, the bare fermion
and photon propagators, the equilibrium distribution functions, and the
Lorentzian drive bump that pushes the photon cloud out of equilibrium.
All frequencies and rates are measured in units of the light-matter
coupling g.  Run with:  python demos/spectral_functions.py
"""

import numpy as np

from opentc import (LorentzianDrive, SystemParams, bare_fermion_gf,
                    default_grid, fermi_distribution, drive_occupation,
                    integrate, occupation_from_K, photon_gf)

# ----------------------------------------------------------------------
# A system: cavity at omega0, fermion levels split by 2*eps0, with cavity
# loss kappa, fermion bath coupling gamma, bath potential mu_B, and bath
# temperature T_F.
params = SystemParams(omega0=1.0, eps0=0.5, kappa=0.25, gamma=0.75,
                      mu_B=-0.5, T_F=0.1)
drive = LorentzianDrive(h=0.8, xi=0.3, Omega=2.0)

# The default grid sizes its half-width from the decay rates so the
# propagator tails fit; the analytic tail policy corrects what the window
# still misses.
grid = default_grid(params, drive, n=2**13 + 1)
print(f"grid: {grid.n} points on [{grid.points[0]:+.1f}, "
      f"{grid.points[-1]:+.1f}]")

# ----------------------------------------------------------------------
# Bare fermions.  The retarded block carries the spectrum, the Keldysh
# block the occupation; in the normal state they are tied together by the
# bath distribution functions F_b and F_a (detailed balance).
gf = bare_fermion_gf(grid, params)
for species, idx in (("b", 0), ("a", 1)):
    F = fermi_distribution(grid.points, species, params)
    R, A, K = gf.R[:, idx, idx], gf.A[:, idx, idx], gf.K[:, idx, idx]
    fdt = np.abs(K - F * (R - A)).max()
    weight = integrate(1j * (R - A), grid).real / (2 * np.pi)
    print(f"species {species}: spectral weight = {weight:.8f}  "
          f"max |K - F(R-A)| = {fdt:.2e}")

# Occupations follow from the Keldysh block alone; together the two
# species hold exactly one fermion per site.
n_b = occupation_from_K(gf, "b")
n_a = occupation_from_K(gf, "a")
print(f"occupations: n_b = {n_b:.6f}  n_a = {n_a:.6f}  "
      f"sum = {n_b + n_a:.6f}")

# ----------------------------------------------------------------------
# The photon.  Without drive the cloud is empty (F_Psi = 1); the drive
# adds a Lorentzian bump of peak occupation 2h/Omega centred at xi.
omega = grid.points
bumped = drive_occupation(omega, drive)
peak = omega[np.argmax(bumped)]
print(f"drive occupation: peak n_B = {bumped.max():.4f} at omega = "
      f"{peak:+.3f} (expected {2 * drive.h / drive.Omega:.4f} near "
      f"{drive.xi:+.3f})")

photon = photon_gf(grid, params, drive)
ratio = np.abs(photon.K) / np.abs(photon.R - photon.A)
i0 = np.argmin(np.abs(omega - params.omega0))
print(f"photon F_Psi at the cavity line: {ratio[i0]:.4f} "
      f"(1 + 2 n_B = {1 + 2 * bumped[i0]:.4f})")
print(f"photon F_Psi far below the line: {ratio[0]:.4f} (empty cloud -> 1)")
