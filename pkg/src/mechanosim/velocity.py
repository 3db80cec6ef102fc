"""Equilibrium-velocity laws v(S) and derived mobility quantities.

Each law provides the velocity ``v``, its analytic derivative ``dv``, the
log-mobility ``psi(S) = ln(alpha v^2 + v)`` and the antiderivative of the
inverse mobility ``1/(alpha v^2 + v)`` needed by the steady-state first
integral.  All evaluations are vectorized over numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad

QUAD_RTOL = 1e-10


def _check_nonnegative(S) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    if np.any(S < 0.0):
        raise ValueError("signal value S must be nonnegative")
    return S


class VelocityLaw:
    """Base class; subclasses implement ``v`` and ``dv`` on S >= 0."""

    def v(self, S):
        raise NotImplementedError

    def dv(self, S):
        raise NotImplementedError

    def mobility(self, alpha: float, S):
        """alpha v(S)^2 + v(S), the weight entering the steady states."""
        v = self.v(S)
        return alpha * v * v + v

    def psi(self, alpha: float, S):
        """Log-mobility ln(alpha v^2 + v); finite since v > 0."""
        return np.log(self.mobility(alpha, S))

    def inverse_mobility_antiderivative(self, alpha: float, s0: float, s1: float) -> float:
        """Integral of 1/(alpha v(s)^2 + v(s)) over [s0, s1].

        Adaptive quadrature to relative tolerance 1e-10; rational laws with
        p = 2 override this with a closed form.
        """
        if s0 > s1:
            raise ValueError("require s0 <= s1")
        if s0 == s1:
            return 0.0
        _check_nonnegative(s0)
        val, _ = quad(
            lambda s: 1.0 / self.mobility(alpha, s),
            s0,
            s1,
            epsabs=0.0,
            epsrel=QUAD_RTOL,
            limit=200,
        )
        return val


@dataclass(frozen=True)
class RationalLaw(VelocityLaw):
    """v(S) = 1 / (1 + q S^p), p >= 1, q > 0.

    p = 1 is admitted only as the borderline case of the concentration
    classifier; the generic theory assumes p > 1.
    """

    p: float
    q: float

    def __post_init__(self) -> None:
        if self.p < 1.0:
            raise ValueError("rational law requires exponent p >= 1")
        if self.q <= 0.0:
            raise ValueError("rational law requires coefficient q > 0")

    def _sp(self, S):
        return S * S if self.p == 2.0 else S**self.p

    def v(self, S):
        S = _check_nonnegative(S)
        return 1.0 / (1.0 + self.q * self._sp(S))

    def dv(self, S):
        S = _check_nonnegative(S)
        denom = 1.0 + self.q * self._sp(S)
        return -self.p * self.q * S ** (self.p - 1.0) / (denom * denom)

    def inverse_mobility_antiderivative(self, alpha: float, s0: float, s1: float) -> float:
        if self.p != 2.0:
            return super().inverse_mobility_antiderivative(alpha, s0, s1)
        if s0 > s1:
            raise ValueError("require s0 <= s1")
        _check_nonnegative(s0)
        # 1/(alpha v^2 + v) = (1 + q s^2) - alpha + alpha^2 / (1 + alpha + q s^2)
        q = self.q
        c = np.sqrt(q / (1.0 + alpha))
        poly = (1.0 - alpha) * (s1 - s0) + (q / 3.0) * (s1**3 - s0**3)
        atan = (alpha * alpha / q) * c * (np.arctan(c * s1) - np.arctan(c * s0))
        return poly + atan


@dataclass(frozen=True)
class SigmoidLaw(VelocityLaw):
    """v(S) = 1 - chi * arctan((S - 1)/delta), with chi*pi/2 < 1 so v > 0."""

    chi: float
    delta: float

    def __post_init__(self) -> None:
        if self.chi <= 0.0 or self.delta <= 0.0:
            raise ValueError("sigmoid law requires chi > 0 and delta > 0")
        if self.chi * np.pi / 2.0 >= 1.0:
            raise ValueError("sigmoid law requires chi * pi/2 < 1 (v must stay positive)")

    def v(self, S):
        S = _check_nonnegative(S)
        return 1.0 - self.chi * np.arctan((S - 1.0) / self.delta)

    def dv(self, S):
        S = _check_nonnegative(S)
        z = (S - 1.0) / self.delta
        return -(self.chi / self.delta) / (1.0 + z * z)


@dataclass(frozen=True)
class CustomLaw(VelocityLaw):
    """User-supplied v and its derivative; no automatic differentiation."""

    v_func: Callable = field(repr=False)
    dv_func: Callable = field(repr=False)

    def v(self, S):
        S = _check_nonnegative(S)
        out = np.asarray(self.v_func(S), dtype=float)
        if np.any(out <= 0.0):
            raise ValueError("custom law produced nonpositive velocity")
        return out if out.ndim else float(out)

    def dv(self, S):
        S = _check_nonnegative(S)
        out = np.asarray(self.dv_func(S), dtype=float)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class MobilityParams:
    """Scaling parameter alpha = m*lambda and macroscopic diffusion D."""

    alpha: float = 0.0
    D: float = 1.0

    def __post_init__(self) -> None:
        if self.alpha < 0.0:
            raise ValueError("alpha must be nonnegative")
        if self.D <= 0.0:
            raise ValueError("D must be positive")
