"""Steady states of the incoherently driven open Tavis-Cummings model.

A frequency-domain Keldysh engine: closed-form bare propagators, drive-
induced self-energies via lattice convolutions with analytic tail handling,
a trust-region saddle-point solver for the coherent field, normal-state
stability diagnostics, and deterministic parameter sweeps with CSV output.
"""

__version__ = "0.1.0"

from .errors import (ConvergenceError, GridError, OpenTCError, ParseError,
                     SingularBlock, TailDivergence, UnknownKey,
                     ValidationError)
from .grid import DEFAULT_POINTS, FrequencyGrid, TailModel, integrate
from .greens import (FlatDrive, KeldyshGF, LorentzianDrive, PhotonGF,
                     SystemParams, TabulatedDrive, bare_fermion_gf,
                     default_grid, drive_occupation, fermi_distribution,
                     occupation_from_K, photon_gf)
from .convolution import Correlator, convolve, set_fft_workers
from .selfenergy import (SIGMA_PREFACTOR, SelfEnergy, dress, dyson,
                         sigma_from)
from .solver import (DEFAULT_SEEDS, PSI_THRESHOLD, RootResult,
                     SaddleSolution, TrustRegionOptions, observables,
                     saddle_residual, solve_saddle, trust_region_solve)
from .stability import (StabilityReport, k_r1, mu_eff, spectral_weight,
                        stability_report)
from .sweep import (AXES, SweepResult, SweepSpec, boundary_points,
                    find_threshold, sweep_1d, sweep_2d, write_boundary_csv,
                    write_sweep_csv)

__all__ = [
    "__version__",
    "OpenTCError", "ValidationError", "GridError", "TailDivergence",
    "SingularBlock", "ConvergenceError", "UnknownKey", "ParseError",
    "FrequencyGrid", "TailModel", "DEFAULT_POINTS", "integrate",
    "SystemParams", "LorentzianDrive", "FlatDrive", "TabulatedDrive",
    "KeldyshGF", "PhotonGF", "fermi_distribution", "drive_occupation",
    "photon_gf", "bare_fermion_gf", "occupation_from_K", "default_grid",
    "Correlator", "convolve", "set_fft_workers",
    "SelfEnergy", "SIGMA_PREFACTOR", "sigma_from", "dyson", "dress",
    "TrustRegionOptions", "RootResult", "trust_region_solve",
    "saddle_residual", "SaddleSolution", "solve_saddle", "observables",
    "PSI_THRESHOLD", "DEFAULT_SEEDS",
    "StabilityReport", "k_r1", "mu_eff", "spectral_weight",
    "stability_report",
    "AXES", "SweepSpec", "SweepResult", "sweep_1d", "sweep_2d",
    "find_threshold", "boundary_points", "write_sweep_csv",
    "write_boundary_csv",
]
