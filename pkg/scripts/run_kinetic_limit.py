#!/usr/bin/env python3
"""Kinetic-to-macroscopic limit study with a frozen signal.

Calibrates the effective diffusion constant on the uniform-velocity case,
then measures the stationary L1 discrepancy between the particle model and
the macroscopic stationary state for a sequence of scaling parameters eps.
Smaller N than the acceptance run by default so the script stays quick.
"""

import sys

import numpy as np

from mechanosim import Field, Grid, RationalLaw
from mechanosim import diagnostics, kinetic

if __name__ == "__main__":
    N = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    grid = Grid(1.0, 50)
    d_eff = kinetic.calibrate_diffusion(grid, eps=0.05, N=N, t_macro=0.05)
    print(f"calibrated uniform-velocity diffusion constant: {d_eff:.4f}")

    law = RationalLaw(2, 0.5)
    alpha = 1.0
    S = Field(grid, 1.0 + 0.3 * np.cos(4 * np.pi * grid.centers))
    ref = diagnostics.StationaryReference.from_signal(S, law, alpha, 1.0)

    print(f"{'eps':>6s} {'L1 error':>10s}")
    for eps in (0.2, 0.1, 0.05):
        params = kinetic.KineticParams.scaled(eps, alpha, law, S, N, seed=11)
        ens = kinetic.initial_ensemble(params, ref.rho_inf)
        dt = 0.05 * eps
        n_burn = round(0.3 / eps / dt)
        n_avg = round(0.2 / eps / dt)
        for _ in range(n_burn):
            ens = kinetic.advance(ens, params, dt)
        acc = np.zeros(grid.cell_count)
        for _ in range(n_avg):
            ens = kinetic.advance(ens, params, dt)
            acc += np.bincount(
                kinetic._cell_index(ens.x, grid), minlength=grid.cell_count
            )
        dens = acc / (n_avg * N * grid.dx)
        err = grid.dx * np.abs(dens - ref.rho_inf.values).sum()
        print(f"{eps:6.2f} {err:10.5f}")
