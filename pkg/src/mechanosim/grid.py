"""1D periodic grid and cell-averaged field container.

Cells are addressed by center index; interface ``j`` sits between cells
``j-1`` and ``j``.  Values are cell averages, so pointwise evaluation of a
field is first order by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on ``[-L/2, L/2]``."""

    length: float
    cell_count: int

    def __post_init__(self) -> None:
        if not np.isfinite(self.length) or self.length <= 0:
            raise ValueError("grid length must be positive and finite")
        if self.cell_count < 4:
            raise ValueError("cell_count must be at least 4")

    @property
    def dx(self) -> float:
        return self.length / self.cell_count

    @property
    def edges(self) -> np.ndarray:
        # length cell_count + 1; edge i is the interface between cells i-1 and i
        return -0.5 * self.length + self.dx * np.arange(self.cell_count + 1)

    @property
    def centers(self) -> np.ndarray:
        return -0.5 * self.length + self.dx * (np.arange(self.cell_count) + 0.5)

    def wrap(self, i):
        """Periodic index map, total on all integers (and integer arrays)."""
        return i % self.cell_count


class Field:
    """Cell-averaged scalar values on a :class:`Grid`.

    Immutable after construction; the value array is copied and frozen so
    fields can be shared freely.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: Grid, values, *, require_positive: bool = False):
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.cell_count,):
            raise ValueError(
                f"expected {grid.cell_count} cell values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        if require_positive and not np.all(values > 0.0):
            raise ValueError("density field must be strictly positive")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("Field is immutable")

    @classmethod
    def uniform(cls, grid: Grid, value: float) -> "Field":
        return cls(grid, np.full(grid.cell_count, float(value)))

    def with_values(self, values, *, require_positive: bool = False) -> "Field":
        return Field(self.grid, values, require_positive=require_positive)

    def min(self) -> float:
        return float(self.values.min())

    def max(self) -> float:
        return float(self.values.max())

    def to_csv(self, path) -> None:
        """Write rows ``x_center,value`` with 17 significant digits."""
        centers = self.grid.centers
        with open(path, "w") as fh:
            fh.write("x_center,value\n")
            for x, v in zip(centers, self.values):
                fh.write(f"{x:.17g},{v:.17g}\n")

    @classmethod
    def from_csv(cls, grid: Grid, path) -> "Field":
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        return cls(grid, data[:, 1])


def integrate(f: Field) -> float:
    """Exact linear functional ``dx * sum(values)``."""
    return f.grid.dx * float(f.values.sum())


def shift(f: Field, cells: int) -> Field:
    """Circular shift by a whole number of cells (mass preserving)."""
    return Field(f.grid, np.roll(f.values, cells))
