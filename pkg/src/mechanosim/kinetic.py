"""Run-and-tumble particle simulation of the 1D kinetic model.

Particles carry a position x (periodic), a direction omega in {-1,+1} and a
speed V > 0 obeying m dV/dt = F - V mu(S) with mu(S) = F/v(S), so the
equilibrium speed is exactly v(S).  Tumbling resamples omega uniformly at
rate lambda.  Under the scaling lambda = 1/eps, m = alpha*eps the empirical
density converges (as eps -> 0) to the macroscopic drift-diffusion equation;
`limit_study` measures the L1 error against a finite-volume reference after
calibrating the effective diffusion constant on the uniform-velocity case.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Field, Grid
from .velocity import VelocityLaw


@dataclass(frozen=True)
class KineticParams:
    """Physical parameters and the frozen signal of a particle run."""

    F: float
    m: float
    lam: float
    law: VelocityLaw
    S: Field
    N: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.F <= 0.0 or self.m <= 0.0 or self.lam <= 0.0:
            raise ValueError("F, m and lam must be positive")
        if self.N <= 0:
            raise ValueError("particle count N must be positive")
        if np.any(self.S.values <= 0.0):
            raise ValueError("frozen signal must be positive")

    @staticmethod
    def scaled(eps: float, alpha: float, law: VelocityLaw, S: Field, N: int, seed: int = 0):
        """Diffusive scaling lambda = 1/eps, m = alpha*eps (F = 1).

        For alpha = 0 the particle mass must still be positive; a mass small
        against eps (m = 1e-6*eps) reproduces the strong-friction branch.
        """
        if eps <= 0.0:
            raise ValueError("eps must be positive")
        m = alpha * eps if alpha > 0.0 else 1e-6 * eps
        return KineticParams(F=1.0, m=m, lam=1.0 / eps, law=law, S=S, N=N, seed=seed)


@dataclass(frozen=True)
class ParticleEnsemble:
    """Particle state arrays plus the step counter keying the RNG stream."""

    x: np.ndarray
    omega: np.ndarray
    V: np.ndarray
    step_count: int = 0

    def __post_init__(self) -> None:
        if not (self.x.shape == self.omega.shape == self.V.shape):
            raise ValueError("particle arrays must share one shape")
        if np.any(self.V <= 0.0):
            raise ValueError("all speeds must be positive")
        if not np.all(np.abs(self.omega) == 1.0):
            raise ValueError("directions must be +-1")


def _stream(seed: int, step: int) -> np.random.Generator:
    """Counter-based stream keyed by (seed, step); order-independent of any
    parallel particle schedule because draws are whole-array."""
    return np.random.Generator(np.random.Philox(key=(np.uint64(seed) << np.uint64(32)) + np.uint64(step)))


def initial_ensemble(params: KineticParams, rho0: Field) -> ParticleEnsemble:
    """Sample positions from a density by inverse transform, directions
    uniformly, speeds at the local equilibrium v(S)."""
    grid = rho0.grid
    rng = _stream(params.seed, 0xFFFFFFFF)
    cdf = np.cumsum(rho0.values)
    cdf = cdf / cdf[-1]
    u = rng.random(params.N)
    cells = np.searchsorted(cdf, u)
    frac = rng.random(params.N)
    x = grid.edges[0] + (cells + frac) * grid.dx
    omega = np.where(rng.random(params.N) < 0.5, -1.0, 1.0)
    idx = _cell_index(x, grid)
    V = params.F / _mu(params, params.S.values[idx])
    return ParticleEnsemble(x=x, omega=omega, V=V)


def _cell_index(x: np.ndarray, grid: Grid) -> np.ndarray:
    idx = np.floor((x + 0.5 * grid.length) / grid.dx).astype(np.int64)
    return grid.wrap(idx)


def _mu(params: KineticParams, S_vals) -> np.ndarray:
    return params.F / np.asarray(params.law.v(S_vals))


def advance(ensemble: ParticleEnsemble, params: KineticParams, dt: float) -> ParticleEnsemble:
    """One splitting step: exact speed relaxation toward v(S at the cell),
    free transport with the pre-update speed, then tumbling."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    grid = params.S.grid
    rng = _stream(params.seed, ensemble.step_count)

    idx = _cell_index(ensemble.x, grid)
    mu = _mu(params, params.S.values[idx])
    v_eq = params.F / mu
    V_new = v_eq + (ensemble.V - v_eq) * np.exp(-mu * dt / params.m)

    x_new = ensemble.x + ensemble.V * ensemble.omega * dt
    half = 0.5 * grid.length
    x_new = (x_new + half) % grid.length - half

    tumble = rng.random(ensemble.x.size) < -np.expm1(-params.lam * dt)
    flips = np.where(rng.random(ensemble.x.size) < 0.5, -1.0, 1.0)
    omega_new = np.where(tumble, flips, ensemble.omega)

    return ParticleEnsemble(
        x=x_new, omega=omega_new, V=V_new, step_count=ensemble.step_count + 1
    )


def density(ensemble: ParticleEnsemble, grid: Grid, total_mass: float = 1.0) -> Field:
    """Empirical cell density scaled so that its integral is total_mass."""
    idx = _cell_index(ensemble.x, grid)
    counts = np.bincount(idx, minlength=grid.cell_count).astype(float)
    return Field(grid, counts * (total_mass / ensemble.x.size) / grid.dx)


def calibrate_diffusion(
    grid: Grid,
    eps: float = 0.05,
    N: int = 1_000_000,
    t_macro: float = 0.05,
    seed: int = 12345,
    dt_factor: float = 0.05,
) -> float:
    """Effective macroscopic diffusion constant of the particle model.

    With a constant velocity law (v = 1) the macroscopic limit is the heat
    equation rho_t = D_eff rho_xx; D_eff is measured from the decay of the
    first cosine mode of an initially modulated density.
    """
    from .velocity import CustomLaw

    law = CustomLaw(v_func=lambda s: np.ones_like(np.asarray(s, dtype=float)),
                    dv_func=lambda s: np.zeros_like(np.asarray(s, dtype=float)))
    S = Field.uniform(grid, 1.0)
    params = KineticParams.scaled(eps, alpha=0.0, law=law, S=S, N=N, seed=seed)
    k = 2.0 * np.pi / grid.length
    rho0 = Field(grid, 1.0 + 0.5 * np.cos(k * grid.centers))
    ens = initial_ensemble(params, rho0)

    def amp(e):
        d = density(e, grid).values
        return 2.0 * abs(np.fft.rfft(d)[1]) / grid.cell_count

    a0 = amp(ens)
    dt = dt_factor * eps
    n_steps = max(1, round(t_macro / eps / dt))
    for _ in range(n_steps):
        ens = advance(ens, params, dt)
    t_eff = n_steps * dt * eps  # particle time back to macroscopic time
    a1 = amp(ens)
    return float(np.log(a0 / a1) / (k * k * t_eff))


@dataclass(frozen=True)
class LimitErrorRow:
    eps: float
    t: float
    l1_error: float


def limit_study(
    law: VelocityLaw,
    alpha: float,
    S: Field,
    rho0: Field,
    eps_list,
    macro_times,
    macro_densities,
    *,
    N: int = 1_000_000,
    seed: int = 0,
    d_eff: float = 1.0,
    dt_factor: float = 0.05,
) -> list:
    """L1 errors of the particle density against macroscopic references.

    ``macro_densities[j]`` must be the macroscopic solution (a Field) at
    macroscopic time ``macro_times[j]`` for a frozen-signal run with the same
    law, alpha and initial density, computed with D = d_eff.  Macroscopic
    time t corresponds to particle time t/eps.
    """
    rows = []
    for eps in eps_list:
        params = KineticParams.scaled(eps, alpha, law, S, N, seed)
        ens = initial_ensemble(params, rho0)
        dt = dt_factor * eps
        tau = 0.0
        M = float(rho0.grid.dx * rho0.values.sum())
        for t_macro, ref in zip(macro_times, macro_densities):
            tau_target = t_macro / eps
            n_steps = max(0, round((tau_target - tau) / dt))
            for _ in range(n_steps):
                ens = advance(ens, params, dt)
            tau += n_steps * dt
            emp = density(ens, rho0.grid, M)
            err = float(rho0.grid.dx * np.sum(np.abs(emp.values - ref.values)))
            rows.append(LimitErrorRow(eps=float(eps), t=float(t_macro), l1_error=err))
    return rows


def write_error_csv(rows, path) -> None:
    with open(path, "w") as fh:
        fh.write("eps,t,l1_error\n")
        for r in rows:
            fh.write(f"{r.eps:.17g},{r.t:.17g},{r.l1_error:.17g}\n")
