"""Steady-state (saddle-point) solver.

The coherent-field equations in the rotating frame reduce to two real
conditions on (mu_S, psi_f):

    r1 = (omega0 - mu_S) psi_f - Re T        T = i (g/2) int dw/2pi G^K_ba(w)
    r2 = kappa psi_f + Im T

evaluated with the drive-dressed propagator.  psi_f = 0 solves both
identically (the anomalous component is proportional to psi_f), so the
normal state always exists; condensed states are roots with psi_f above
PSI_THRESHOLD.  Global phase freedom keeps psi_f real, and since both
residuals are odd in psi_f a root found at negative psi_f is reflected.

Roots are located with a dogleg trust-region iteration on a forward-
difference Jacobian; the solver is generic over residual callables.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import OpenTCError, ValidationError
from .greens import (DriveSpectrum, FrequencyGrid, SystemParams, default_grid,
                     occupation_from_K)
from .grid import integrate
from .selfenergy import dress

__all__ = ["TrustRegionOptions", "RootResult", "trust_region_solve",
           "saddle_residual", "SaddleSolution", "solve_saddle", "observables",
           "PSI_THRESHOLD", "DEFAULT_SEEDS"]

### roots with |psi_f| above this count as condensed
PSI_THRESHOLD = 1e-4

### (mu_S, psi_f) starting points tried in order
DEFAULT_SEEDS = ((0.0, 0.3), (0.5, 0.3), (-0.5, 0.3), (0.0, 1.0))


@dataclass(frozen=True)
class TrustRegionOptions:
    """Dogleg trust-region controls.

    eta is the minimum gain ratio for accepting a step; steps with ratio
    above 0.75 that touch the boundary double the radius, below 0.25 the
    radius shrinks to a quarter of the step length.
    """

    max_iterations: int = 200
    residual_tol: float = 1e-10
    initial_radius: float = 1.0
    max_radius: float = 10.0
    eta: float = 1e-3
    fd_step: float = 1e-6
    min_radius: float = 1e-12


@dataclass
class RootResult:
    x: np.ndarray
    residual: np.ndarray
    norm: float
    iterations: int
    evaluations: int
    converged: bool
    message: str = ""
    history: list = field(default_factory=list)  # ||R|| at accepted iterates


def _fd_jacobian(fn, x, r0, h0):
    """Forward-difference Jacobian, one extra evaluation per component."""
    m, n = r0.size, x.size
    J = np.empty((m, n))
    for j in range(n):
        h = h0 * max(1.0, abs(x[j]))
        xp = x.copy()
        xp[j] += h
        J[:, j] = (fn(xp) - r0) / h
    return J


def _dogleg(g, p_gn, B, radius):
    """Dogleg step for model 0.5 ||r + J p||^2 with gradient g and B = J^T J."""
    gBg = g @ B @ g
    if gBg <= 0.0:
        return -radius * g / np.linalg.norm(g)
    p_c = -(g @ g) / gBg * g
    if p_gn is not None and np.linalg.norm(p_gn) <= radius:
        return p_gn
    nc = np.linalg.norm(p_c)
    if p_gn is None or nc >= radius:
        return p_c * (radius / nc)
    ### walk from the Cauchy point toward the Gauss-Newton point up to the
    ### boundary: ||p_c + t d||^2 = radius^2
    d = p_gn - p_c
    a = d @ d
    b = 2.0 * (p_c @ d)
    c = nc * nc - radius * radius
    t = (-b + np.sqrt(b * b - 4.0 * a * c)) / (2.0 * a)
    return p_c + t * d


def trust_region_solve(fn, x0, options: TrustRegionOptions | None = None) -> RootResult:
    """Find a root of the residual map fn: R^n -> R^n."""
    opts = options or TrustRegionOptions()
    x = np.asarray(x0, dtype=float).copy()
    evals = [0]

    def f(z):
        evals[0] += 1
        return np.asarray(fn(z), dtype=float)

    r = f(x)
    radius = opts.initial_radius
    history = [float(np.linalg.norm(r))]
    J = None
    for it in range(1, opts.max_iterations + 1):
        norm = np.linalg.norm(r)
        if norm < opts.residual_tol:
            return RootResult(x, r, norm, it - 1, evals[0], True, "converged",
                              history)
        if J is None:
            J = _fd_jacobian(f, x, r, opts.fd_step)
        g = J.T @ r
        if not np.isfinite(g).all():
            return RootResult(x, r, norm, it - 1, evals[0], False,
                              "non-finite Jacobian", history)
        try:
            p_gn = np.linalg.solve(J, -r)
            if not np.isfinite(p_gn).all() or np.linalg.norm(p_gn) > 1e12:
                p_gn = None
        except np.linalg.LinAlgError:
            p_gn = None
        gnorm = np.linalg.norm(g)
        if gnorm == 0.0:
            return RootResult(x, r, norm, it - 1, evals[0], False,
                              "stationary point with nonzero residual", history)

        p = _dogleg(g, p_gn, J.T @ J, radius)
        step = np.linalg.norm(p)
        r_trial = f(x + p)
        pred = 0.5 * (norm**2 - np.linalg.norm(r + J @ p) ** 2)
        actual = 0.5 * (norm**2 - np.linalg.norm(r_trial) ** 2)
        rho = actual / pred if pred > 0 else -1.0

        if rho < 0.25:
            radius = 0.25 * step
        elif rho > 0.75 and step >= 0.99 * radius:
            radius = min(2.0 * radius, opts.max_radius)
        if rho > opts.eta:
            x = x + p
            r = r_trial
            history.append(float(np.linalg.norm(r)))
            J = None
        if radius < opts.min_radius:
            norm = np.linalg.norm(r)
            return RootResult(x, r, norm, it, evals[0],
                              norm < opts.residual_tol, "radius collapsed",
                              history)
    norm = np.linalg.norm(r)
    return RootResult(x, r, norm, opts.max_iterations, evals[0],
                      norm < opts.residual_tol, "iteration limit", history)


def saddle_residual(mu_S: float, psi_f: float, params: SystemParams,
                    drive: DriveSpectrum, grid: FrequencyGrid,
                    dressing: str = "one_shot", method: str = "auto") -> np.ndarray:
    """Residual vector (r1, r2) of the coherent-field equations."""
    gf, _, _ = dress(params, drive, grid, mu_S, psi_f, dressing, method)
    T = 1j * 0.5 * params.g * integrate(gf.K[:, 0, 1], grid, "G^K_ba") / (2.0 * np.pi)
    return np.array([(params.omega0 - mu_S) * psi_f - T.real,
                     params.kappa * psi_f + T.imag])


@dataclass
class SaddleSolution:
    """One steady state: phase is 'Normal', 'Condensed' or 'Inaccessible'."""

    mu_S: float
    psi_f: float
    phase: str
    residual_norm: float
    iterations: int
    converged: bool
    observables: dict = field(default_factory=dict)
    seed: tuple | None = None
    message: str = ""


def observables(mu_S: float, psi_f: float, params: SystemParams,
                drive: DriveSpectrum, grid: FrequencyGrid,
                dressing: str = "one_shot", method: str = "auto") -> dict:
    """Steady-state observables at a solution point.

    polarization = sqrt((omega0 - mu_S)^2 + kappa^2) * psi_f  (|<a^dag b>|),
    rho = (1 + n_b - n_a)/2 from the dressed occupations.
    """
    gf, _, _ = dress(params, drive, grid, mu_S, psi_f, dressing, method)
    n_b = occupation_from_K(gf, "b")
    n_a = occupation_from_K(gf, "a")
    pol = float(np.hypot(params.omega0 - mu_S, params.kappa) * abs(psi_f))
    return {"psi_abs": abs(psi_f), "polarization": pol,
            "rho": 0.5 * (1.0 + n_b - n_a), "n_b": n_b, "n_a": n_a}


def solve_saddle(params: SystemParams, drive: DriveSpectrum,
                 grid: FrequencyGrid | None = None, seeds=None,
                 options: TrustRegionOptions | None = None,
                 dressing: str = "one_shot", method: str = "auto",
                 psi_threshold: float = PSI_THRESHOLD,
                 with_observables: bool = True) -> SaddleSolution:
    """Locate the steady state, trying each seed in order.

    The first converged root with psi_f above the threshold wins
    (Condensed); otherwise the always-present normal state is reported with
    mu_S = 0 by convention.  Inaccessible is returned only when the residual
    cannot even be evaluated for any seed at the base and at doubled grid
    density.
    """
    if grid is None:
        grid = default_grid(params, drive)
    seed_list = [tuple(map(float, s)) for s in (seeds if seeds is not None
                                                else DEFAULT_SEEDS)]

    def attempt(active_grid):
        failures = []
        for seed in seed_list:
            fn = lambda z: saddle_residual(z[0], z[1], params, drive,
                                           active_grid, dressing, method)
            try:
                res = trust_region_solve(fn, np.array(seed), options)
            except OpenTCError as exc:
                failures.append(f"seed {seed}: {exc}")
                continue
            if res.converged and abs(res.x[1]) > psi_threshold:
                mu, psi = float(res.x[0]), float(abs(res.x[1]))
                obs = (observables(mu, psi, params, drive, active_grid,
                                   dressing, method) if with_observables else {})
                return SaddleSolution(mu, psi, "Condensed", res.norm,
                                      res.iterations, True, obs, seed)
        ### no condensed root: the normal state solves the equations exactly
        ### provided the residual is evaluable at all
        try:
            r0 = saddle_residual(0.0, 0.0, params, drive, active_grid,
                                 dressing, method)
        except OpenTCError as exc:
            failures.append(f"normal probe: {exc}")
            return failures
        obs = (observables(0.0, 0.0, params, drive, active_grid,
                           dressing, method) if with_observables else {})
        return SaddleSolution(0.0, 0.0, "Normal", float(np.linalg.norm(r0)),
                              0, True, obs)

    out = attempt(grid)
    if isinstance(out, SaddleSolution):
        return out
    fine = FrequencyGrid.symmetric(grid.half_width, 2 * grid.n - 1,
                                   grid.tail_policy)
    out2 = attempt(fine)
    if isinstance(out2, SaddleSolution):
        return out2
    return SaddleSolution(float("nan"), float("nan"), "Inaccessible",
                          float("nan"), 0, False,
                          message="; ".join(out + out2))
