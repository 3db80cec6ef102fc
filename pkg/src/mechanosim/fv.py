"""Conservative, well-balanced finite-volume integration of the
drift-diffusion equation rho_t = D (v(S)^2 (rho_x + rho psi_x))_x on the
periodic grid, with quasi-static signal coupling.

The scheme is explicit upwind in the edge potential
phi_i = v(S_mid)^2 / dx * ln[rho_i w_i / (rho_{i-1} w_{i-1})],
w = alpha v^2 + v.  States with rho * w constant are exact fixed points,
mass is conserved by telescoping, and positivity is preserved under the
per-cell time-step bound (with optional recursive step halving).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field, replace

import numpy as np

from . import _kernels, diagnostics
from ._cyclic import cyclic_factor
from .errors import FitWindowTooShort, PositivityLoss
from .grid import Field, Grid
from .signal import ConvolutionKernel, SignalParams, convolve, solve_signal
from .velocity import MobilityParams, RationalLaw, SigmoidLaw, VelocityLaw

_MAX_HALVINGS = 20
_SAFETY = 0.9


@dataclass(frozen=True)
class InitSpec:
    """Initial density: uniform base plus cosine perturbations."""

    kind: str = "cosine"  # "uniform" | "cosine" | "modes" | "random" | "custom"
    base: float = 1.0
    amplitude: float = 0.1
    mode: int = 1
    modes: tuple = ()  # ((mode, amplitude), ...) for kind == "modes"
    values: tuple | None = None  # for kind == "custom"
    seed: int = 0  # for kind == "random"


def build_initial(grid: Grid, init: InitSpec) -> Field:
    x = grid.centers
    if init.kind == "uniform":
        vals = np.full(grid.cell_count, init.base)
    elif init.kind == "cosine":
        vals = init.base + init.amplitude * np.cos(2.0 * np.pi * init.mode * x / grid.length)
    elif init.kind == "modes":
        vals = np.full(grid.cell_count, init.base)
        for n, a in init.modes:
            vals = vals + a * np.cos(2.0 * np.pi * n * x / grid.length)
    elif init.kind == "random":
        rng = np.random.Generator(np.random.Philox(init.seed))
        noise = rng.uniform(-1.0, 1.0, grid.cell_count)
        noise -= noise.mean()
        vals = init.base + init.amplitude * noise
    elif init.kind == "custom":
        if init.values is None:
            raise ValueError("custom init requires explicit values")
        vals = np.asarray(init.values, dtype=float)
    else:
        raise ValueError(f"unknown init kind {init.kind!r}")
    return Field(grid, vals, require_positive=True)


@dataclass(frozen=True)
class MacroConfig:
    """Full scenario for a finite-volume run.

    Exactly one of ``signal`` (elliptic), ``kernel`` (convolution) or
    ``frozen_S`` (prescribed, time-independent signal) must be set.
    """

    law: VelocityLaw
    mobility: MobilityParams
    grid: Grid
    dt: float
    t_end: float
    snapshot_every: int = 200
    signal: SignalParams | None = None
    kernel: ConvolutionKernel | None = None
    frozen_S: Field | None = None
    init: InitSpec = dc_field(default_factory=InitSpec)
    steady_stop: float = 0.0  # stop when max|drho|/dt falls below; 0 disables
    subcycle: bool = True

    def __post_init__(self) -> None:
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.t_end <= 0.0:
            raise ValueError("t_end must be positive")
        if self.snapshot_every < 1:
            raise ValueError("snapshot_every must be >= 1")
        n_set = sum(x is not None for x in (self.signal, self.kernel, self.frozen_S))
        if n_set != 1:
            raise ValueError("exactly one of signal, kernel, frozen_S must be set")

    @staticmethod
    def paper_default(
        law: VelocityLaw,
        alpha: float,
        Ds: float,
        *,
        t_end: float,
        L: float = 1.0,
        D: float = 1.0,
        snapshot_every: int = 200,
        init: InitSpec | None = None,
        steady_stop: float = 0.0,
    ) -> "MacroConfig":
        """Grid rule dx = sqrt(Ds)/10 (rounded to an integer cell count)
        and dt = dx^2/5, with D = 1, L = 1 defaults."""
        cells = max(4, round(L / (np.sqrt(Ds) / 10.0)))
        grid = Grid(L, cells)
        return MacroConfig(
            law=law,
            mobility=MobilityParams(alpha=alpha, D=D),
            grid=grid,
            dt=grid.dx**2 / 5.0,
            t_end=t_end,
            snapshot_every=snapshot_every,
            signal=SignalParams(Ds),
            init=init if init is not None else InitSpec(),
            steady_stop=steady_stop,
        )


@dataclass
class Trajectory:
    """Recorded snapshots and diagnostic series of one run."""

    grid: Grid
    times: np.ndarray
    rho: list
    S: list
    diagnostics: dict
    steady: bool
    last_delta: float
    steps: int

    @property
    def final_rho(self) -> Field:
        return self.rho[-1]

    @property
    def final_S(self) -> Field:
        return self.S[-1]

    def write_snapshots_csv(self, path) -> None:
        x = self.grid.centers
        with open(path, "w") as fh:
            fh.write("t,x,rho,S\n")
            for t, rf, sf in zip(self.times, self.rho, self.S):
                for xi, ri, si in zip(x, rf.values, sf.values):
                    fh.write(f"{t:.17g},{xi:.17g},{ri:.17g},{si:.17g}\n")

    def write_diagnostics_csv(self, path) -> None:
        d = self.diagnostics
        with open(path, "w") as fh:
            fh.write("t,mass,entropy,free_energy,l2w_deviation\n")
            for i, t in enumerate(self.times):
                fh.write(
                    f"{t:.17g},{d['mass'][i]:.17g},{d['entropy'][i]:.17g},"
                    f"{d['free_energy'][i]:.17g},{d['l2w_deviation'][i]:.17g}\n"
                )


def _law_code(law: VelocityLaw):
    if isinstance(law, RationalLaw):
        return _kernels.LAW_RATIONAL, law.p, law.q, 0.0, 0.0
    if isinstance(law, SigmoidLaw):
        return _kernels.LAW_SIGMOID, 0.0, 0.0, law.chi, law.delta
    return None


def edge_potential(rho: Field, S: Field, law: VelocityLaw, alpha: float) -> np.ndarray:
    """Edge array phi; entry i lives on the interface between cells i-1 and i."""
    rv = rho.values
    if np.any(rv <= 0.0):
        raise PositivityLoss(int(np.argmin(rv)))
    sv = S.values
    dx = rho.grid.dx
    v = np.asarray(law.v(sv))
    w = alpha * v * v + v
    vmid = np.asarray(law.v(0.5 * (np.roll(sv, 1) + sv)))
    return (vmid * vmid / dx) * np.log((rv * w) / (np.roll(rv, 1) * np.roll(w, 1)))


def _interface_flux(rv: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Upwind mass-transfer rate across interface i, positive from cell i-1
    into cell i (the continuum transport velocity is -D*phi)."""
    return np.maximum(-phi, 0.0) * np.roll(rv, 1) - np.maximum(phi, 0.0) * rv


def _step_arrays(rv, w, vmid2, D, dx, dt, subcycle, depth=0) -> np.ndarray:
    phi = (vmid2 / dx) * np.log((rv * w) / (np.roll(rv, 1) * np.roll(w, 1)))
    outflow = np.maximum(phi, 0.0) + np.maximum(-np.roll(phi, -1), 0.0)
    cmax = float(outflow.max())
    if subcycle and cmax > 0.0 and dt > _SAFETY * dx / (D * cmax):
        if depth >= _MAX_HALVINGS:
            raise PositivityLoss(-1, "sub-cycling depth exhausted")
        half = _step_arrays(rv, w, vmid2, D, dx, 0.5 * dt, subcycle, depth + 1)
        return _step_arrays(half, w, vmid2, D, dx, 0.5 * dt, subcycle, depth + 1)
    F = _interface_flux(rv, phi)
    new = rv + (D * dt / dx) * (F - np.roll(F, -1))
    if np.any(new <= 0.0):
        raise PositivityLoss(int(np.argmin(new)))
    return new


def step(rho: Field, S: Field, config: MacroConfig, dt: float | None = None) -> Field:
    """One explicit conservative update (numpy reference path)."""
    rv = rho.values
    if np.any(rv <= 0.0):
        raise PositivityLoss(int(np.argmin(rv)))
    law = config.law
    alpha = config.mobility.alpha
    sv = S.values
    v = np.asarray(law.v(sv))
    w = alpha * v * v + v
    vmid = np.asarray(law.v(0.5 * (np.roll(sv, 1) + sv)))
    new = _step_arrays(
        rv,
        w,
        vmid * vmid,
        config.mobility.D,
        rho.grid.dx,
        config.dt if dt is None else dt,
        config.subcycle,
    )
    return Field(rho.grid, new)


def _signal_of(rho: Field, config: MacroConfig) -> Field:
    if config.frozen_S is not None:
        return config.frozen_S
    if config.signal is not None:
        return solve_signal(rho, config.signal)
    return convolve(rho, config.kernel)


def _assemble(config, times, rho_snaps, S_snaps, steady, last_delta, steps) -> Trajectory:
    grid = config.grid
    rho_fields = [Field(grid, r) for r in rho_snaps]
    S_fields = [Field(grid, s) for s in S_snaps]
    alpha = config.mobility.alpha
    ref = None
    if config.frozen_S is not None:
        ref = diagnostics.StationaryReference.from_signal(
            config.frozen_S, config.law, alpha, diagnostics.mass(rho_fields[0])
        )
    n = len(rho_fields)
    diag = {
        "mass": np.empty(n),
        "entropy": np.empty(n),
        "free_energy": np.empty(n),
        "l2w_deviation": np.full(n, np.nan),
    }
    for i, (rf, sf) in enumerate(zip(rho_fields, S_fields)):
        psi = Field(grid, config.law.psi(alpha, sf.values))
        diag["mass"][i] = diagnostics.mass(rf)
        diag["entropy"][i] = diagnostics.entropy(rf)
        diag["free_energy"][i] = diagnostics.free_energy(rf, psi)
        if ref is not None:
            diag["l2w_deviation"][i] = diagnostics.weighted_l2_deviation(rf, ref)
    return Trajectory(
        grid=grid,
        times=np.asarray(times),
        rho=rho_fields,
        S=S_fields,
        diagnostics=diag,
        steady=steady,
        last_delta=last_delta,
        steps=steps,
    )


def _run_fast(config: MacroConfig, rho0: Field, code, n_steps: int):
    kind, p, q, chi, delta = code
    grid = config.grid
    I = grid.cell_count
    frozen = config.frozen_S is not None
    if frozen:
        d = np.zeros(1)
        z = np.zeros(1)
        r = 0.0
        S_frozen = np.ascontiguousarray(config.frozen_S.values)
    else:
        r = config.signal.Ds / grid.dx**2
        d, z = cyclic_factor(I, r)
        S_frozen = np.zeros(1)
    n_snaps = n_steps // config.snapshot_every + 2
    snap_rho = np.empty((n_snaps, I))
    snap_S = np.empty((n_snaps, I))
    snap_t = np.empty(n_snaps)
    empty = np.empty(0)
    rho = rho0.values.copy()
    status, cell, k, steps, last_delta = _kernels.run_kernel(
        rho,
        frozen,
        S_frozen,
        d,
        z,
        r,
        kind,
        p,
        q,
        chi,
        delta,
        config.mobility.alpha,
        config.mobility.D,
        grid.dx,
        config.dt,
        n_steps,
        config.snapshot_every,
        config.steady_stop,
        config.subcycle,
        snap_rho,
        snap_S,
        snap_t,
        empty,
        empty,
        0.0,
        0.0,
        np.empty(n_snaps),
    )
    if status == _kernels.STATUS_POSITIVITY:
        raise PositivityLoss(cell)
    if status == _kernels.STATUS_DEPTH:
        raise PositivityLoss(-1, "sub-cycling depth exhausted")
    steady = config.steady_stop > 0.0 and last_delta <= config.steady_stop
    return snap_t[:k], snap_rho[:k], snap_S[:k], steady, last_delta, steps


def _run_python(config: MacroConfig, rho0: Field, n_steps: int):
    rho = rho0
    S = _signal_of(rho, config)
    times = [0.0]
    rho_snaps = [rho.values.copy()]
    S_snaps = [S.values.copy()]
    last_delta = np.inf
    steady = False
    steps = 0
    for n in range(1, n_steps + 1):
        S = _signal_of(rho, config)
        new = step(rho, S, config)
        last_delta = float(np.max(np.abs(new.values - rho.values))) / config.dt
        rho = new
        steps = n
        if n % config.snapshot_every == 0:
            times.append(n * config.dt)
            rho_snaps.append(rho.values.copy())
            S_snaps.append(S.values.copy())
            if config.steady_stop > 0.0 and last_delta <= config.steady_stop:
                steady = True
                break
    if steps % config.snapshot_every != 0:
        times = list(times) + [steps * config.dt]
        rho_snaps.append(rho.values.copy())
        S_snaps.append(S.values.copy())
    return np.asarray(times), rho_snaps, S_snaps, steady, last_delta, steps


def run(config: MacroConfig) -> Trajectory:
    """Full time integration; deterministic given the config."""
    rho0 = build_initial(config.grid, config.init)
    n_steps = max(1, round(config.t_end / config.dt))
    code = _law_code(config.law)
    if code is not None and config.kernel is None:
        out = _run_fast(config, rho0, code, n_steps)
    else:
        out = _run_python(config, rho0, n_steps)
    return _assemble(config, *out)


def mode_amplitude(rho: Field, n: int) -> float:
    """Amplitude of the cos(2 pi n x / L) component of a field."""
    spec = np.fft.rfft(rho.values)
    return 2.0 * abs(spec[n]) / rho.grid.cell_count


def growth_rate_probe(
    config: MacroConfig,
    mode_index: int,
    *,
    amplitude: float = 1e-4,
    sample_every: int = 20,
    window_factor: float = 10.0,
    min_samples: int = 10,
) -> float:
    """Measured exponential rate of a small single-mode perturbation.

    Fits log amplitude against time while the mode amplitude stays within
    [a/window_factor, a*window_factor]; raises FitWindowTooShort if the
    amplitude leaves that window before ``min_samples`` samples.
    """
    if amplitude > 1e-4:
        raise ValueError("probe amplitude must be <= 1e-4 (linear regime)")
    grid = config.grid
    probe_init = InitSpec(kind="cosine", base=1.0, amplitude=amplitude, mode=mode_index)
    cfg = replace(config, init=probe_init, steady_stop=0.0, snapshot_every=sample_every)
    n_steps = max(1, round(cfg.t_end / cfg.dt))
    code = _law_code(cfg.law)
    lo = amplitude / window_factor
    hi = amplitude * window_factor
    x = grid.centers
    karg = 2.0 * np.pi * mode_index * x / grid.length

    if code is not None and cfg.kernel is None:
        kind, p, q, chi, delta = code
        I = grid.cell_count
        frozen = cfg.frozen_S is not None
        if frozen:
            d = np.zeros(1)
            z = np.zeros(1)
            r = 0.0
            S_frozen = np.ascontiguousarray(cfg.frozen_S.values)
        else:
            r = cfg.signal.Ds / grid.dx**2
            d, z = cyclic_factor(I, r)
            S_frozen = np.zeros(1)
        n_snaps = n_steps // sample_every + 2
        snap_rho = np.empty((n_snaps, I))
        snap_S = np.empty((n_snaps, I))
        snap_t = np.empty(n_snaps)
        amps = np.empty(n_snaps)
        rho = build_initial(grid, probe_init).values.copy()
        status, cell, k, _, _ = _kernels.run_kernel(
            rho, frozen, S_frozen, d, z, r, kind, p, q, chi, delta,
            cfg.mobility.alpha, cfg.mobility.D, grid.dx, cfg.dt,
            n_steps, sample_every, 0.0, cfg.subcycle,
            snap_rho, snap_S, snap_t,
            np.cos(karg), np.sin(karg), lo, hi, amps,
        )
        if status != _kernels.STATUS_OK:
            raise PositivityLoss(cell)
        times = snap_t[:k]
        amps = amps[:k]
    else:
        traj = run(cfg)
        times = []
        amps_list = []
        for t, rf in zip(traj.times, traj.rho):
            a = mode_amplitude(rf, mode_index)
            times.append(t)
            amps_list.append(a)
            if a >= hi or a <= lo:
                break
        times = np.asarray(times)
        amps = np.asarray(amps_list)
    if len(amps) < min_samples:
        raise FitWindowTooShort(
            f"only {len(amps)} samples inside the linear window (need {min_samples})"
        )
    slope = np.polyfit(times, np.log(amps), 1)[0]
    return float(slope)
