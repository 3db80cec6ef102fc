"""Cyclic tridiagonal solver for the periodic Helmholtz operator.

Solves (I - r * Lap) S = rho where Lap is the periodic second-difference
stencil and r = Ds/dx^2, via a rank-one (Sherman-Morrison) correction of a
constant-coefficient Thomas factorization.  O(I) per solve; the
factorization (d, z) is reusable for a fixed (I, r).
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def thomas_solve(d: np.ndarray, r: float, rhs: np.ndarray) -> np.ndarray:
    """Solve T y = rhs for the tridiagonal T encoded by (d, r).

    T has off-diagonal entries -r and the pre-eliminated diagonal d from
    :func:`cyclic_factor`.
    """
    n = d.size
    f = np.empty(n)
    f[0] = rhs[0]
    for i in range(1, n):
        f[i] = rhs[i] + (r / d[i - 1]) * f[i - 1]
    y = np.empty(n)
    y[n - 1] = f[n - 1] / d[n - 1]
    for i in range(n - 2, -1, -1):
        y[i] = (f[i] + r * y[i + 1]) / d[i]
    return y


@njit(cache=True)
def cyclic_factor(n: int, r: float):
    """Factorize A = T + u v^T where A is the periodic operator.

    Returns (d, z) with d the eliminated Thomas diagonal of T and
    z = T^{-1} u.  The splitting uses gamma = -(1 + 2r), so T stays strictly
    diagonally dominant for all r > 0.
    """
    b = 1.0 + 2.0 * r
    diag = np.full(n, b)
    diag[0] = 2.0 * b            # b - gamma with gamma = -b
    diag[n - 1] = b + r * r / b  # b - alpha*beta/gamma with alpha = beta = -r
    d = np.empty(n)
    d[0] = diag[0]
    for i in range(1, n):
        d[i] = diag[i] - (r * r) / d[i - 1]
    u = np.zeros(n)
    u[0] = -b
    u[n - 1] = -r
    z = thomas_solve(d, r, u)
    return d, z


@njit(cache=True)
def cyclic_solve(d: np.ndarray, z: np.ndarray, r: float, rhs: np.ndarray) -> np.ndarray:
    """Solve the periodic system given a factorization from cyclic_factor."""
    n = d.size
    b = 1.0 + 2.0 * r
    y = thomas_solve(d, r, rhs)
    # v = (1, 0, ..., 0, beta/gamma) with beta = -r, gamma = -b
    vy = y[0] + (r / b) * y[n - 1]
    vz = z[0] + (r / b) * z[n - 1]
    fac = vy / (1.0 + vz)
    return y - fac * z
