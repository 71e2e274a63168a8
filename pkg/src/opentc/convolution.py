"""Frequency-domain convolutions (f o g)(w) = int dnu/2pi f(nu) g(nu - w).

Strategy: on the shared uniform odd-count lattice, nu_i - w_j is again a
lattice point, so the integral becomes a trapezoid lattice sum that a
zero-padded FFT evaluates exactly (identical arithmetic to the direct sum;
a switch selects the O(N^2) direct path).  Under the 'analytic' tail policy
both factors are continued beyond the grid with rational tail models
(grid.fit_tail): f is extended to |nu| <= 2W and g to |nu| <= 3W so the
lattice sum covers nu in [-2W, 2W] for every output frequency, and the
remaining |nu| > 2W region is added in closed form from the pole/residue
representation of the tails,

    int_X^inf dnu / ((nu - a)(nu - b)) = log((X - b)/(X - a)) / (a - b).

Reflected kernels g(-(nu - w)) (needed by the spin-down self-energy
components) are handled by reversing the g samples before the same pipeline.
"""

from __future__ import annotations

import numpy as np
from scipy.fft import fft, ifft, next_fast_len

from .errors import GridError, ValidationError
from .grid import FrequencyGrid, check_decay, tail_models

__all__ = ["Correlator", "convolve", "set_fft_workers"]

TWO_PI = 2.0 * np.pi

### worker count handed to scipy.fft (CLI --threads plumbs through here)
_FFT_WORKERS = 1


def set_fft_workers(n: int) -> None:
    global _FFT_WORKERS
    n = int(n)
    if n < 1:
        raise ValidationError(f"thread count must be >= 1, got {n}")
    _FFT_WORKERS = n


def _pair_tail_integral(a: complex, b: np.ndarray, X: float) -> np.ndarray:
    """int_X^inf dnu/((nu-a)(nu-b)), vectorized over b."""
    d = a - b
    small = np.abs(d) < 1e-9 * (1.0 + abs(a) + np.abs(b))
    out = np.empty(b.shape, dtype=complex)
    np.copyto(out, np.log((X - b) / (X - a)) / np.where(small, 1.0, d))
    if small.any():
        out[small] = 1.0 / (X - a)
    return out


class _Side:
    """Extended samples of one factor plus (optionally) its padded FFT and
    tail models."""

    __slots__ = ("arr", "F", "left", "right", "zero")

    def __init__(self, arr, F, left, right, zero):
        self.arr = arr
        self.F = F
        self.left = left
        self.right = right
        self.zero = zero


class Correlator:
    """Reusable convolution plan for one grid.

    Preparing a factor once (``f_side`` / ``g_side``) caches its extension
    and FFT, so the many pairwise convolutions of a self-energy build share
    the transform work.
    """

    def __init__(self, grid: FrequencyGrid, method: str = "auto"):
        if method not in ("auto", "fft", "direct"):
            raise ValidationError(f"unknown convolution method {method!r}")
        self.grid = grid
        self.method = "fft" if method == "auto" else method
        self.M = (grid.n - 1) // 2
        self.N = grid.n
        self.X = 2.0 * grid.half_width  # lattice sum covers [-X, X]
        self.P = next_fast_len(10 * self.M + 1)

    def _extend(self, values: np.ndarray, half_span: int, name: str):
        """Samples in the middle, tail models outside, on e in [-span, span]."""
        g = self.grid
        values = np.asarray(values, dtype=complex)
        if values.shape != g.points.shape:
            raise GridError(f"{name} has shape {values.shape}, expected {g.points.shape}")
        zero = not np.abs(values).any()
        span_pts = half_span * self.M
        arr = np.zeros(2 * span_pts + 1, dtype=complex)
        arr[span_pts - self.M: span_pts + self.M + 1] = values
        left = right = None
        if g.tail_policy == "analytic" and not zero:
            check_decay(values, name)
            left, right = tail_models(values, g)
            nu_out = np.arange(self.M + 1, span_pts + 1) * g.spacing
            arr[span_pts + self.M + 1:] = right(nu_out)
            arr[:span_pts - self.M] = left(-nu_out[::-1])
        return arr, left, right, zero

    def f_side(self, values: np.ndarray, name: str = "f") -> _Side:
        arr, left, right, zero = self._extend(values, 2, name)
        F = (fft(arr, self.P, workers=_FFT_WORKERS)
             if (self.method == "fft" and not zero) else None)
        return _Side(arr, F, left, right, zero)

    def g_side(self, values: np.ndarray, name: str = "g",
               reflect: bool = False) -> _Side:
        if reflect:
            values = np.asarray(values)[::-1]
        arr, left, right, zero = self._extend(values, 3, name)
        F = None
        if self.method == "fft" and not zero:
            F = fft(arr[::-1], self.P, workers=_FFT_WORKERS)
        return _Side(arr, F, left, right, zero)

    def correlate(self, f: _Side, g: _Side) -> np.ndarray:
        """(f o g) on the grid from prepared sides."""
        M, N = self.M, self.N
        if f.zero or g.zero:
            return np.zeros(N, dtype=complex)
        if self.method == "fft":
            full = ifft(f.F * g.F, self.P, workers=_FFT_WORKERS)[: 10 * M + 1]
        else:
            full = np.convolve(f.arr, g.arr[::-1])
        out = full[4 * M: 4 * M + N].copy()
        ### trapezoid endpoint halving at the lattice-sum edges e = -+2M
        out -= 0.5 * (f.arr[0] * g.arr[2 * M:: -1]
                      + f.arr[-1] * g.arr[6 * M: 4 * M - 1: -1])
        out *= self.grid.spacing / TWO_PI
        if self.grid.tail_policy == "analytic":
            out += self._remainder(f, g)
        return out

    def _remainder(self, f: _Side, g: _Side) -> np.ndarray:
        """Closed-form contribution of |nu| > X to the convolution."""
        w = self.grid.points
        X = self.X
        guard = 0.98 * X
        out = np.zeros(self.N, dtype=complex)
        if f.right is not None and g.right is not None:
            for p, r in zip(f.right.poles, f.right.residues):
                if p.real > guard:
                    continue
                for q, s in zip(g.right.poles, g.right.residues):
                    if w[-1] + q.real > guard:
                        continue
                    out += r * s * _pair_tail_integral(p, w + q, X)
        if f.left is not None and g.left is not None:
            ### substitute nu -> -nu: poles negate, window maps to [X, inf)
            for p, r in zip(f.left.poles, f.left.residues):
                if -p.real > guard:
                    continue
                for q, s in zip(g.left.poles, g.left.residues):
                    if w[-1] - q.real > guard:
                        continue
                    out += r * s * _pair_tail_integral(-p, -w - q, X)
        return out / TWO_PI


def convolve(f: np.ndarray, g: np.ndarray, grid: FrequencyGrid,
             method: str = "auto", reflect_g: bool = False) -> np.ndarray:
    """(f o g)(w) = int dnu/2pi f(nu) g(nu - w) sampled on ``grid``.

    With ``reflect_g`` the second factor enters as g(-(nu - w)).  ``method``
    is 'auto' (FFT lattice sum), 'fft', or 'direct' (same sum, O(N^2));
    the two methods produce identical results up to round-off."""
    c = Correlator(grid, method)
    return c.correlate(c.f_side(f, "f"), c.g_side(g, "g", reflect=reflect_g))
