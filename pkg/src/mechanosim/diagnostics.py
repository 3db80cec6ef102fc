"""Discrete functionals along trajectories: mass, entropy, free energy, the
frozen-signal stationary profile, relative entropy, weighted norms and an
explicit exponential decay-rate bound.

The stationary state for a frozen signal S is rho_inf = (M/Z) exp(-psi),
psi = ln(alpha v(S)^2 + v(S)), Z = integral of exp(-psi).  The free energy
E[rho] = int rho (ln rho + psi) is bounded below by M ln(M/Z) and decreases
along the conservative scheme; the weighted L^2 deviation of rho/rho_inf
from 1 decays at least at the explicit rate returned by decay_bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientSamples
from .grid import Field, integrate
from .velocity import VelocityLaw


@dataclass(frozen=True)
class StationaryReference:
    """Minimizer of the free energy for a frozen signal, at fixed mass M."""

    psi: Field
    Z: float
    rho_inf: Field
    M: float

    @classmethod
    def from_psi(cls, psi: Field, M: float) -> "StationaryReference":
        if M <= 0.0:
            raise ValueError("mass M must be positive")
        weights = np.exp(-psi.values)
        Z = psi.grid.dx * float(weights.sum())
        rho_inf = Field(psi.grid, (M / Z) * weights, require_positive=True)
        return cls(psi=psi, Z=Z, rho_inf=rho_inf, M=M)

    @classmethod
    def from_signal(
        cls, S: Field, law: VelocityLaw, alpha: float, M: float
    ) -> "StationaryReference":
        psi = Field(S.grid, law.psi(alpha, S.values))
        return cls.from_psi(psi, M)

    @property
    def energy_floor(self) -> float:
        """Minimum free energy M ln(M/Z), attained at rho_inf."""
        return self.M * np.log(self.M / self.Z)


def mass(rho: Field) -> float:
    return integrate(rho)


def entropy(rho: Field) -> float:
    """(1/L) * int rho ln rho."""
    vals = rho.values
    if np.any(vals <= 0.0):
        raise ValueError("entropy requires a strictly positive density")
    return float(rho.grid.dx * np.sum(vals * np.log(vals))) / rho.grid.length


def free_energy(rho: Field, psi: Field) -> float:
    """E[rho] = int rho (ln rho + psi)."""
    vals = rho.values
    if np.any(vals <= 0.0):
        raise ValueError("free energy requires a strictly positive density")
    return float(rho.grid.dx * np.sum(vals * (np.log(vals) + psi.values)))


def relative_entropy(rho: Field, ref: StationaryReference) -> float:
    """D(nu | pi) with nu = rho/M, pi = rho_inf/M; nonnegative by Jensen."""
    vals = rho.values
    if np.any(vals <= 0.0):
        raise ValueError("relative entropy requires a strictly positive density")
    M = mass(rho)
    nu = vals / M
    pi = ref.rho_inf.values / ref.M
    return float(rho.grid.dx * np.sum(nu * np.log(nu / pi)))


def weighted_l2_deviation(rho: Field, ref: StationaryReference) -> float:
    """int (rho/rho_inf - 1)^2 rho_inf dx."""
    u = rho.values / ref.rho_inf.values - 1.0
    return float(rho.grid.dx * np.sum(u * u * ref.rho_inf.values))


def l1_distance(rho: Field, ref: StationaryReference) -> float:
    """int |rho - rho_inf| dx, checked against the Cauchy-Schwarz bound
    sqrt(M) * sqrt(weighted_l2_deviation) on every call."""
    out = float(rho.grid.dx * np.sum(np.abs(rho.values - ref.rho_inf.values)))
    bound = np.sqrt(ref.M) * np.sqrt(weighted_l2_deviation(rho, ref))
    assert out <= bound * (1.0 + 1e-12) + 1e-300
    return out


@dataclass(frozen=True)
class DecayBound:
    """Explicit lower bound on the weighted-L^2 decay rate."""

    v_min: float
    v_max: float
    alpha: float
    D: float
    poincare_C: float

    @property
    def rate(self) -> float:
        w_min = self.alpha * self.v_min**2 + self.v_min
        w_max = self.alpha * self.v_max**2 + self.v_max
        return 2.0 * self.D * self.v_min**2 * w_min**2 / (w_max**2 * self.poincare_C)


def poincare_constant_periodic(L: float) -> float:
    """Sharp constant (L/2pi)^2 for zero-mean L-periodic functions."""
    return (L / (2.0 * np.pi)) ** 2


def decay_bound(
    law: VelocityLaw, alpha: float, D: float, S: Field, poincare_C: float | None = None
) -> DecayBound:
    v = np.asarray(law.v(S.values))
    v_min = float(v.min())
    v_max = float(v.max())
    if v_min <= 0.0:
        raise ValueError("decay bound requires v > 0 on the domain")
    if poincare_C is None:
        poincare_C = poincare_constant_periodic(S.grid.length)
    return DecayBound(v_min=v_min, v_max=v_max, alpha=alpha, D=D, poincare_C=poincare_C)


def fit_rate(times, values, min_samples: int = 10) -> float:
    """Least-squares decay rate: minus the slope of ln(value) against t."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.size != values.size:
        raise ValueError("times and values must have equal length")
    if times.size < min_samples:
        raise InsufficientSamples(
            f"rate fit needs at least {min_samples} samples, got {times.size}"
        )
    if np.any(values <= 0.0):
        raise ValueError("rate fit requires positive values")
    slope = np.polyfit(times, np.log(values), 1)[0]
    return float(-slope)
