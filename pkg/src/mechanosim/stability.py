"""Linear stability of the uniform state: the sensitivity coefficient
gamma_alpha, the dispersion relation sigma(k), the instability window and
the critical wavenumber.

Linearizing around the constant state (rho, S) = (S_star, S_star) gives
sigma(k) = -D v^2 k^2 (1 + gamma + Ds k^2)/(1 + Ds k^2) with
gamma = v'(2 alpha v + 1)/(v (alpha v + 1)) at S_star.  The uniform state
is unstable exactly when gamma < -1, with the unstable band
0 < k < k_c = sqrt(-(gamma+1)/Ds).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .signal import SignalParams, fourier_symbol
from .velocity import VelocityLaw


def gamma(law: VelocityLaw, alpha: float, S_star: float = 1.0) -> float:
    """Sensitivity coefficient gamma_alpha = v'(2 alpha v + 1)/(v (alpha v + 1))."""
    if S_star <= 0.0:
        raise ValueError("reference state S_star must be positive")
    v = float(law.v(S_star))
    dv = float(law.dv(S_star))
    return dv * (2.0 * alpha * v + 1.0) / (v * (alpha * v + 1.0))


def sigma(
    k, law: VelocityLaw, alpha: float, D: float, Ds: float, S_star: float = 1.0
):
    """Dispersion relation sigma(k) for the elliptic signal kernel."""
    k = np.asarray(k, dtype=float)
    v = float(law.v(S_star))
    g = gamma(law, alpha, S_star)
    k2 = k * k
    out = -D * v * v * k2 * (1.0 + g + Ds * k2) / (1.0 + Ds * k2)
    return out if out.ndim else float(out)


def critical_wavenumber(
    law: VelocityLaw, alpha: float, Ds: float, S_star: float = 1.0
) -> float | None:
    """k_c = sqrt(-(gamma+1)/Ds) when gamma < -1, else None (stable)."""
    if Ds <= 0.0:
        raise ValueError("Ds must be positive")
    g = gamma(law, alpha, S_star)
    if g >= -1.0:
        return None
    return float(np.sqrt(-(g + 1.0) / Ds))


def kernel_criterion(law: VelocityLaw, alpha: float, params: SignalParams, k, S_star: float = 1.0):
    """General stability indicator 1 + gamma * K_hat(k); stability iff > 0."""
    return 1.0 + gamma(law, alpha, S_star) * fourier_symbol(params, k)


@dataclass(frozen=True)
class StabilityReport:
    """Summary of the linear analysis around a constant state."""

    gamma_alpha: float
    unstable: bool
    k_c: float | None
    critical_wavelength: float | None
    sigma_samples: tuple  # ((k, sigma(k)), ...)

    def __post_init__(self) -> None:
        if self.unstable != (self.gamma_alpha < -1.0):
            raise ValueError("unstable flag inconsistent with gamma_alpha")
        if self.unstable != (self.k_c is not None):
            raise ValueError("k_c must be present exactly when unstable")

    def to_json(self) -> str:
        return json.dumps(
            {
                "gamma_alpha": self.gamma_alpha,
                "unstable": self.unstable,
                "k_c": self.k_c,
                "critical_wavelength": self.critical_wavelength,
                "sigma_samples": [list(p) for p in self.sigma_samples],
            },
            indent=2,
        )

    def write_sigma_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("k,sigma\n")
            for k, s in self.sigma_samples:
                fh.write(f"{k:.17g},{s:.17g}\n")


def analyze(
    law: VelocityLaw,
    alpha: float,
    D: float,
    Ds: float,
    S_star: float = 1.0,
    k_samples=None,
) -> StabilityReport:
    """Build a StabilityReport with sigma sampled on the unstable band
    (or on (0, 2 k_ref] when stable)."""
    g = gamma(law, alpha, S_star)
    k_c = critical_wavenumber(law, alpha, Ds, S_star)
    if k_samples is None:
        k_max = 2.0 * (k_c if k_c is not None else 1.0 / np.sqrt(Ds))
        k_samples = np.linspace(0.0, k_max, 201)
    ks = np.asarray(k_samples, dtype=float)
    sig = sigma(ks, law, alpha, D, Ds, S_star)
    return StabilityReport(
        gamma_alpha=g,
        unstable=g < -1.0,
        k_c=k_c,
        critical_wavelength=None if k_c is None else 2.0 * np.pi / k_c,
        sigma_samples=tuple(zip(ks.tolist(), np.atleast_1d(sig).tolist())),
    )
