"""Elliptic signal equation and convolution production rules.

The signal solves -Ds * Lap S + S = rho on the periodic grid with the same
second-order centered stencil as the finite-volume scheme, so constants are
preserved exactly and the coupled system stays well balanced.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from ._cyclic import cyclic_factor, cyclic_solve
from .grid import Field, Grid, integrate


@dataclass(frozen=True)
class SignalParams:
    Ds: float

    def __post_init__(self) -> None:
        if self.Ds <= 0.0:
            raise ValueError("signal diffusion Ds must be positive")


@functools.lru_cache(maxsize=32)
def _factorization(cell_count: int, r: float):
    return cyclic_factor(cell_count, r)


def solve_signal(rho: Field, params: SignalParams) -> Field:
    """Solve -Ds (S_{i-1} - 2 S_i + S_{i+1})/dx^2 + S_i = rho_i periodically.

    The matrix is strictly diagonally dominant, so the direct solve cannot
    fail; the discrete solution conserves the integral of rho.
    """
    grid = rho.grid
    r = params.Ds / grid.dx**2
    d, z = _factorization(grid.cell_count, r)
    return Field(grid, cyclic_solve(d, z, r, np.ascontiguousarray(rho.values)))


def fourier_symbol(params: SignalParams, k) -> float | np.ndarray:
    """Continuous symbol 1/(1 + Ds k^2) of the elliptic production rule."""
    k = np.asarray(k, dtype=float)
    out = 1.0 / (1.0 + params.Ds * k * k)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class ConvolutionKernel:
    """Nonnegative kernel samples of discrete mass 1 on the grid."""

    grid: Grid
    samples: tuple

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=float)
        if samples.shape != (self.grid.cell_count,):
            raise ValueError("kernel samples must match the grid")
        if np.any(samples < 0.0):
            raise ValueError("kernel samples must be nonnegative")
        mass = self.grid.dx * samples.sum()
        if abs(mass - 1.0) > 1e-12:
            raise ValueError(f"kernel mass must be 1 (got {mass!r})")
        object.__setattr__(self, "samples", tuple(samples))

    @classmethod
    def from_array(cls, grid: Grid, samples) -> "ConvolutionKernel":
        return cls(grid, tuple(np.asarray(samples, dtype=float)))

    @classmethod
    def delta(cls, grid: Grid) -> "ConvolutionKernel":
        samples = np.zeros(grid.cell_count)
        samples[0] = 1.0 / grid.dx
        return cls(grid, tuple(samples))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.samples, dtype=float)


def convolve(rho: Field, kernel: ConvolutionKernel) -> Field:
    """Periodic discrete convolution scaled by dx; preserves total mass."""
    if kernel.grid != rho.grid:
        raise ValueError("kernel and field live on different grids")
    k = kernel.as_array()
    out = np.fft.irfft(np.fft.rfft(k) * np.fft.rfft(rho.values), n=rho.grid.cell_count)
    return Field(rho.grid, rho.grid.dx * out)


def residual(S: Field, rho: Field, params: SignalParams) -> np.ndarray:
    """Direct application of the discrete operator: -Ds Lap_h S + S - rho."""
    s = S.values
    lap = (np.roll(s, 1) - 2.0 * s + np.roll(s, -1)) / S.grid.dx**2
    return -params.Ds * lap + s - rho.values


__all__ = [
    "SignalParams",
    "ConvolutionKernel",
    "solve_signal",
    "convolve",
    "fourier_symbol",
    "residual",
    "integrate",
]
