"""
Normal-state gain, the effective chemical potential, and a laser onset
=====================================================================

Two narratives in one script.  First, the normal-state stability kernel:
the frequency where the imaginary part of the inverse photon propagator
changes sign defines an effective chemical potential mu_eff, and raising
the bath potential mu_B makes that root appear or vanish.  Second, an
honestly condensed steady state: with a cold cavity (small kappa), hot
fermion losses (large gamma), and an inverted bath (mu_B well above the
level splitting), the fermions pump the cavity and the saddle point
condenses -- an incoherently pumped laser.  Continuation then traces the
onset in mu_B.  Run with:  python demos/gain_and_threshold.py
"""

import numpy as np

from opentc import (LorentzianDrive, SystemParams, default_grid,
                    find_threshold, solve_saddle, stability_report, sweep_1d)

no_drive = LorentzianDrive(h=0.0)

# ----------------------------------------------------------------------
# Part 1: the root dichotomy of the normal-state kernel.  Im K^R_1 starts
# positive at large negative frequency (loss-dominated); if the fermion
# gain is strong enough it dips below zero and back, creating a pair of
# crossings whose lower member is mu_eff.
print("bath potential  ->  min Im K^R_1     mu_eff")
for mu_B in (-0.5, -0.05, 0.02, 0.1, 0.2):
    p = SystemParams(mu_B=mu_B)
    rep = stability_report(p, no_drive, default_grid(p, no_drive, n=2**13 + 1))
    gain = rep.k_r1.imag.min()
    root = "none" if rep.mu_eff is None else f"{rep.mu_eff:+.6f}"
    print(f"  mu_B = {mu_B:+.2f}      {gain:+.6f}      {root}")
print("the root pair appears only once the bath pushes net gain "
      "through zero\n")

# ----------------------------------------------------------------------
# Part 2: make the gain beat the cavity loss.  kappa = 0.1 against
# gamma = 2 with mu_B = 3 inverts the medium; the saddle point then has a
# finite-amplitude root.
laser = SystemParams(kappa=0.1, gamma=2.0, mu_B=3.0, T_F=0.1)
grid = default_grid(laser, no_drive, psi_f=8.0, n=2**13 + 1)
sol = solve_saddle(laser, no_drive, grid)
print(f"inverted bath: phase = {sol.phase}")
print(f"  psi_f = {sol.psi_f:.6f}   mu_S = {sol.mu_S:.6f}   "
      f"({sol.iterations} iterations, residual {sol.residual_norm:.1e})")
print(f"  excited fraction rho = {sol.observables['rho']:.4f}   "
      f"polarization = {sol.observables['polarization']:.4f}\n")

# ----------------------------------------------------------------------
# Part 3: trace the onset.  A continuation sweep in mu_B warm-starts each
# point from the previous condensed root; the threshold interpolates the
# amplitude-squared growth back to zero.
values = np.linspace(1.0, 3.0, 9)
res = sweep_1d(laser, no_drive, axis="mu_B", values=tuple(values),
               grid=default_grid(laser, no_drive, psi_f=6.0, n=2**12 + 1))
print("mu_B sweep:")
for v, s in zip(values, res.solutions):
    print(f"  mu_B = {v:.2f}   {s.phase:10s}  psi_f = {s.psi_f:.4f}")
thr = find_threshold(res)
print(f"condensation threshold: mu_B_c = {thr:.3f}")
