"""Uniform symmetric frequency grids, rational tail models, tail-corrected
quadrature.

Every spectral quantity in this package is sampled on a shared uniform grid
``omega_k = (k - M) * spacing`` with an odd number of points, so ``M`` is an
integer and the difference of any two grid points lands back on the lattice.
The convolution engine relies on that alignment.

Integrals over the whole real line are evaluated as a trapezoid sum over the
grid plus analytic tail corrections.  Each tail (outer half of each side) is
fitted with a rational model ``(A nu + B) / (nu^2 + C nu + D)`` by linear
least squares; the model is stored in pole/residue form so that both the
remaining single integrals and the convolution remainders have closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridError, TailDivergence, ValidationError

DEFAULT_POINTS = 2**14 + 1

### outer fraction of each side used for tail fitting
TAIL_FRACTION = 0.5
### integrands whose edge magnitude exceeds this fraction of the peak fail
### the decay check
DECAY_REL = 0.05
### tail fits worse than this relative residual are considered non-rational
FIT_QUALITY_TOL = 0.05


def ensure_odd(n: int) -> int:
    """Round a requested point count up to the next odd integer."""
    n = int(n)
    if n < 3:
        raise ValidationError(f"grid needs at least 3 points, got {n}")
    return n if n % 2 == 1 else n + 1


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Uniform, symmetric frequency lattice with an odd number of points.

    Attributes
    ----------
    points : ndarray
        Strictly increasing frequencies, symmetric about zero.
    tail_policy : str
        'analytic' (default): integrals and convolutions get rational tail
        corrections beyond the grid edges.  'truncate': no corrections.
    """

    points: np.ndarray
    tail_policy: str = "analytic"

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 1 or pts.size < 3:
            raise GridError("grid must be a 1d array with at least 3 points")
        if pts.size % 2 == 0:
            raise GridError(f"grid must have an odd point count, got {pts.size}")
        d = np.diff(pts)
        if d.min() <= 0:
            raise GridError("grid points must be strictly increasing")
        step = (pts[-1] - pts[0]) / (pts.size - 1)
        if not np.allclose(d, step, rtol=1e-9, atol=1e-12 * max(1.0, abs(step))):
            raise GridError("grid must be uniform")
        if abs(pts[0] + pts[-1]) > 1e-9 * max(1.0, pts[-1]):
            raise GridError("grid must be symmetric about zero")
        if self.tail_policy not in ("analytic", "truncate"):
            raise ValidationError(f"unknown tail_policy {self.tail_policy!r}")

    @classmethod
    def symmetric(cls, half_width: float, n: int = DEFAULT_POINTS,
                  tail_policy: str = "analytic") -> "FrequencyGrid":
        """Grid of ``n`` (rounded up to odd) points on [-half_width, half_width]."""
        if half_width <= 0:
            raise ValidationError("half_width must be positive")
        n = ensure_odd(n)
        return cls(np.linspace(-half_width, half_width, n), tail_policy)

    @property
    def n(self) -> int:
        return self.points.size

    @property
    def spacing(self) -> float:
        return float(self.points[1] - self.points[0])

    @property
    def half_width(self) -> float:
        return float(self.points[-1])

    def same_as(self, other: "FrequencyGrid") -> bool:
        return (self.n == other.n
                and np.allclose(self.points, other.points,
                                rtol=1e-12, atol=1e-12 * max(1.0, self.half_width)))

    def require_same(self, other: "FrequencyGrid", what: str = "operands"):
        if not self.same_as(other):
            raise GridError(f"{what} live on different frequency grids")


@dataclass(frozen=True)
class TailModel:
    """Rational tail in pole/residue form: m(nu) = sum_k residues[k]/(nu - poles[k]).

    ``kind`` is 'pade' (free [1,2] fit), 'integrable' (numerator-degree-0 fit,
    residues sum to zero), 'inverse_square' (safe fallback matching the
    c2/nu^2 + c3/nu^3 expansion) or 'zero'.  ``quality`` is the max relative
    misfit over the fit window.
    """

    poles: np.ndarray
    residues: np.ndarray
    kind: str
    quality: float
    side: str
    window: tuple = field(default=(0.0, 0.0))

    def __call__(self, nu):
        nu = np.asarray(nu, dtype=float)
        if self.kind == "zero" or self.poles.size == 0:
            return np.zeros(nu.shape, dtype=complex)
        return (self.residues / (nu[..., None] - self.poles)).sum(axis=-1)

    @property
    def linear_coeff(self) -> complex:
        """Coefficient of the 1/nu asymptote (sum of residues)."""
        if self.poles.size == 0:
            return 0.0 + 0.0j
        return complex(self.residues.sum())

    def integral_beyond(self, cut: float) -> complex:
        """Integral of the model over (cut, inf) for side='right' or
        (-inf, -cut) for side='left'.  Requires a decaying (zero residue sum)
        model."""
        if self.kind == "zero" or self.poles.size == 0:
            return 0.0 + 0.0j
        total = self.linear_coeff
        scale = np.abs(self.residues).sum()
        if abs(total) > 1e-8 * (scale + 1e-300):
            raise TailDivergence(
                "tail model has a 1/nu component and cannot be integrated")
        if self.side == "right":
            ### int_X^inf sum r/(nu-p) = -sum r log(X-p)  when sum r = 0
            return complex(-(self.residues * np.log(cut - self.poles)).sum())
        return complex((self.residues * np.log(cut + self.poles)).sum())


def _zero_tail(side: str) -> TailModel:
    return TailModel(np.zeros(0, complex), np.zeros(0, complex),
                     "zero", 0.0, side)


def _pole_pair(A, B, C, D):
    """Poles and residues of (A nu + B)/(nu^2 + C nu + D)."""
    disc = np.sqrt(complex(C * C - 4.0 * D))
    p = 0.5 * (-C + disc)
    q = 0.5 * (-C - disc)
    if abs(p - q) < 1e-8 * (1.0 + abs(p) + abs(q)):
        ### split nearly-degenerate roots; keeps partial fractions finite
        shift = 1e-6 * (1.0 + abs(p)) * 1j
        p = p + shift
        q = q - shift
    rp = (A * p + B) / (p - q)
    rq = (A * q + B) / (q - p)
    return np.array([p, q]), np.array([rp, rq])


def _poles_safe(poles, side: str, hi: float) -> bool:
    """True when no pole comes near the real evaluation region beyond the
    grid edge (|nu| >= hi, where the model is extrapolated and integrated)."""
    edge = 0.95 * hi
    for p in poles:
        re = p.real if side == "right" else -p.real
        if re >= edge:
            d = abs(p.imag)
        else:
            d = abs((re - edge) + 1j * p.imag)
        if d < 0.05 * hi:
            return False
    return True


def _lstsq_scaled(cols, y, weights=None):
    """Least squares with per-column scaling (and optional row weights)."""
    M = np.stack(cols, axis=1)
    if weights is not None:
        M = M * weights[:, None]
        y = y * weights
    norms = np.linalg.norm(M, axis=0)
    norms[norms == 0.0] = 1.0
    sol = np.linalg.lstsq(M / norms, y, rcond=None)[0]
    return sol / norms


def fit_tail(nu: np.ndarray, u: np.ndarray, side: str,
             integrable: bool = False) -> TailModel:
    """Fit a rational tail model to samples on one side's outer window.

    Parameters
    ----------
    nu, u : samples over the fit window (nu all positive for side='right',
        all negative for side='left').
    integrable : force a numerator of degree zero so the model integrates to
        a finite value over the remaining half-line.
    """
    nu = np.asarray(nu, dtype=float)
    u = np.asarray(u, dtype=complex)
    scale = np.abs(u).max() if u.size else 0.0
    hi = np.abs(nu).max() if nu.size else 0.0
    if scale == 0.0 or nu.size < 8:
        return _zero_tail(side)

    y = u * nu * nu
    w = None
    ABCD = None
    for _ in range(3):  # one plain pass + two reweighted passes
        if integrable:
            sol = _lstsq_scaled([np.ones_like(u), -u * nu, -u], y, w)
            A, (B, C, D) = 0.0, sol
        else:
            sol = _lstsq_scaled([nu.astype(complex), np.ones_like(u), -u * nu, -u], y, w)
            A, B, C, D = sol
        ABCD = (A, B, C, D)
        den = np.abs(nu * nu + C * nu + D)
        w = 1.0 / np.clip(den, 1e-6 * hi * hi, None)

    A, B, C, D = ABCD
    poles, residues = _pole_pair(A, B, C, D)
    kind = "integrable" if integrable else "pade"

    if not _poles_safe(poles, side, hi):
        ### fall back to an inverse-square model whose poles are kept well
        ### away from the evaluation region by construction
        c = _lstsq_scaled([nu.astype(float) ** -2.0 + 0j, nu.astype(float) ** -3.0 + 0j],
                          u)
        c2, c3 = c
        if abs(c2) < 1e-300:
            return _zero_tail(side)
        C = -c3 / c2
        s = max(0.06 * hi, abs(C))
        D = C * C / 4.0 + s * s
        poles, residues = _pole_pair(0.0, c2, C, D)
        kind = "inverse_square"

    model = TailModel(poles, residues, kind, 0.0, side, (float(np.abs(nu).min()), hi))
    quality = float(np.abs(u - model(nu)).max() / scale)
    return TailModel(poles, residues, kind, quality, side, model.window)


def tail_models(values: np.ndarray, grid: FrequencyGrid,
                integrable: bool = False) -> tuple[TailModel, TailModel]:
    """Fit (left, right) tail models over the outer TAIL_FRACTION windows."""
    nu = grid.points
    cut = TAIL_FRACTION * grid.half_width
    right = nu >= cut
    left = nu <= -cut
    return (fit_tail(nu[left], values[left], "left", integrable),
            fit_tail(nu[right], values[right], "right", integrable))


def check_decay(values: np.ndarray, name: str = "integrand"):
    """Raise TailDivergence unless the samples have decayed at the edges."""
    peak = np.abs(values).max()
    if peak == 0.0:
        return
    edge = max(abs(values[0]), abs(values[-1]))
    if edge > DECAY_REL * peak:
        raise TailDivergence(
            f"{name} has not decayed at the grid edges "
            f"(edge/peak = {edge / peak:.3g}, limit {DECAY_REL}); "
            "enlarge the grid")


def trapezoid(values: np.ndarray, grid: FrequencyGrid) -> complex:
    """Plain trapezoid rule over the grid span."""
    s = values.sum() - 0.5 * (values[0] + values[-1])
    return complex(s * grid.spacing)


def integrate(values: np.ndarray, grid: FrequencyGrid,
              name: str = "integrand") -> complex:
    """Integral of sampled values over the whole real line.

    Trapezoid over the grid plus analytic tail contributions beyond the
    edges (under tail_policy='analytic').  Raises TailDivergence when the
    samples have not decayed at the edges or the tails are not compatible
    with a 1/nu^2 falloff.
    """
    values = np.asarray(values, dtype=complex)
    if values.shape != grid.points.shape:
        raise GridError(f"{name} has shape {values.shape}, expected {grid.points.shape}")
    core = trapezoid(values, grid)
    if grid.tail_policy == "truncate":
        return core
    check_decay(values, name)
    left, right = tail_models(values, grid, integrable=True)
    for m in (left, right):
        if m.quality > FIT_QUALITY_TOL:
            raise TailDivergence(
                f"{name} tail ({m.side}) is not compatible with a rational "
                f"1/nu^2 falloff (fit residual {m.quality:.3g})")
    W = grid.half_width
    return core + left.integral_beyond(W) + right.integral_beyond(W)
