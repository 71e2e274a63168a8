"""
A small phase map with a real boundary
======================================

Maps the condensation of the inverted-bath laser over the (mu_B, kappa)
plane: raising the bath potential strengthens the fermion gain, raising
the cavity loss suppresses it, so a phase boundary runs diagonally
through the map.  The sweep machinery does the bookkeeping -- warm
starts along each row, marching-squares interpolation for the boundary
-- and the CSV writers freeze everything to disk in the same format the
command-line tool emits.  Run with:  python demos/phase_map.py
"""

import tempfile
from pathlib import Path

import numpy as np

from opentc import (LorentzianDrive, SweepSpec, SystemParams, boundary_points,
                    default_grid, find_threshold, sweep_2d, write_boundary_csv,
                    write_sweep_csv)

base = SystemParams(kappa=0.1, gamma=2.0, mu_B=3.0, T_F=0.1)
no_drive = LorentzianDrive(h=0.0)

mu_values = tuple(np.linspace(1.0, 3.0, 5))
kappa_values = (0.08, 0.12, 0.2)
spec = SweepSpec("mu_B", mu_values, "kappa", kappa_values)

# One wide grid serves the whole map; the psi_f hint reserves room for
# the largest condensate the map will produce.
grid = default_grid(base, no_drive, psi_f=8.0, n=2**11 + 1)
print(f"solving {len(mu_values)}x{len(kappa_values)} points ...")
result = sweep_2d(base, no_drive, spec, grid=grid)

# ----------------------------------------------------------------------
# The map, one row per cavity loss, N = normal, C = condensed.
print("\n           mu_B:" + "".join(f"{v:8.2f}" for v in mu_values))
for j, kappa in enumerate(kappa_values):
    row = [result.solution(i, j) for i in range(len(mu_values))]
    marks = "".join(f"{s.phase[0]:>8s}" for s in row)
    thr = find_threshold(result, row=j)
    thr_txt = f"  threshold mu_B_c = {thr:.3f}" if thr is not None else ""
    print(f"kappa = {kappa:.2f} " + marks + thr_txt)

# ----------------------------------------------------------------------
# The interpolated boundary: each point sits on a lattice edge where the
# squared amplitude crosses the detection threshold.
pts = boundary_points(result)
print(f"\nboundary: {len(pts)} points")
for x, y in pts:
    print(f"  mu_B = {x:.3f}   kappa = {y:.3f}")

# ----------------------------------------------------------------------
# Freeze the run: the sweep CSV carries a replayable metadata header.
out = Path(tempfile.mkdtemp(prefix="opentc_demo_"))
write_sweep_csv(result, out / "phase_map.csv")
write_boundary_csv(result, out / "phase_map_boundary.csv")
print(f"\nwrote {out}/phase_map.csv and phase_map_boundary.csv")
