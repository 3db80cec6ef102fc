"""Semi-analytic periodic steady states.

A nonconstant steady state satisfies rho = C0/(alpha v(S)^2 + v(S)) with
C0 = rho0 (alpha v(S0)^2 + v(S0)) and the signal obeys the first integral
Ds S_x^2 = f(S), f(S) = S^2 - S0^2 - 2 C0 * int_{S0}^{S} ds/(alpha v^2 + v).
The half-period profile is recovered by quadrature of dx = sqrt(Ds) dS/sqrt(f)
between the signal minimum S0 and the second root S_L of f; the full period
follows by even reflection.  When f has no finite second root the mass
concentrates (Dirac limit) instead of forming a smooth pattern.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fv
from .errors import InconclusiveProbe, NoFinitePeriod, NotSteady
from .grid import Field
from .velocity import RationalLaw, SigmoidLaw, VelocityLaw

ROOT_RTOL = 1e-12
CAP_FACTOR = 1e6


def _c0(law: VelocityLaw, alpha: float, S0: float, rho0: float) -> float:
    return rho0 * float(law.mobility(alpha, S0))


def eval_f(law: VelocityLaw, alpha: float, S0: float, rho0: float, S: float) -> float:
    """First integral f(S) = S^2 - S0^2 - 2 C0 int_{S0}^S ds/(alpha v^2+v)."""
    if S < S0:
        raise ValueError("eval_f requires S >= S0")
    if rho0 <= 0.0:
        raise ValueError("rho0 must be positive")
    C0 = _c0(law, alpha, S0, rho0)
    return S * S - S0 * S0 - 2.0 * C0 * law.inverse_mobility_antiderivative(alpha, S0, S)


def f_prime(law: VelocityLaw, alpha: float, S0: float, rho0: float, S: float) -> float:
    """f'(S) = 2S - 2 C0/(v(S)(alpha v(S) + 1))."""
    C0 = _c0(law, alpha, S0, rho0)
    v = float(law.v(S))
    return 2.0 * S - 2.0 * C0 / (v * (alpha * v + 1.0))


def f_dprime(law: VelocityLaw, alpha: float, S0: float, rho0: float, S: float) -> float:
    """f''(S) = 2 + 2 C0 v'(S)(2 alpha v + 1)/(v^2 (alpha v + 1)^2)."""
    C0 = _c0(law, alpha, S0, rho0)
    v = float(law.v(S))
    dv = float(law.dv(S))
    return 2.0 + 2.0 * C0 * dv * (2.0 * alpha * v + 1.0) / (v * v * (alpha * v + 1.0) ** 2)


def find_SL(law: VelocityLaw, alpha: float, S0: float, rho0: float) -> float | None:
    """Second root S_L > S0 of f, or None when f stays positive up to the cap
    (concentration regime; see concentration_check)."""
    if not S0 > rho0 > 0.0:
        raise ValueError("require S0 > rho0 > 0 (f'(S0) = 2(S0 - rho0) > 0)")
    cap = CAP_FACTOR * max(1.0, S0)
    lo = S0
    hi = S0
    step = max(S0, 1.0)
    while True:
        hi = hi + step
        step *= 2.0
        if eval_f(law, alpha, S0, rho0, hi) < 0.0:
            break
        lo = hi
        if hi > cap:
            return None
    # bisection on [lo, hi] with f(lo) >= 0 > f(hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = eval_f(law, alpha, S0, rho0, mid)
        if abs(fm) <= ROOT_RTOL * mid * mid:
            return mid
        if fm > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= ROOT_RTOL * mid:
            return mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class SteadyProfile:
    """Half-period steady profile from the signal minimum to its maximum."""

    law: VelocityLaw
    alpha: float
    Ds: float
    S0: float
    rho0: float
    C0: float
    S_L: float
    S: np.ndarray  # S_j, increasing
    x: np.ndarray  # x_j, increasing, x_0 = 0
    rho: np.ndarray  # C0 / (alpha v^2 + v) at S_j
    L_half: float
    M: float  # mass over the half period (equals int S dx by the signal law)

    def interpolate_S(self, x) -> np.ndarray:
        """S at distances |x| from the minimum, clamped to [S0, S_L]."""
        return np.interp(np.abs(np.asarray(x, dtype=float)), self.x, self.S)

    def interpolate_rho(self, x) -> np.ndarray:
        S = self.interpolate_S(x)
        return self.C0 / np.asarray(self.law.mobility(self.alpha, S))

    def write_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("x,S,rho\n")
            for xj, sj, rj in zip(self.x, self.S, self.rho):
                fh.write(f"{xj:.17g},{sj:.17g},{rj:.17g}\n")


def profile(
    law: VelocityLaw,
    alpha: float,
    S0: float,
    rho0: float,
    Ds: float,
    dS: float | None = None,
) -> SteadyProfile:
    """Construct the half-period profile by regularized trapezoid quadrature
    of x(S) = sqrt(Ds) int dS/sqrt(f); the first panel uses the analytic
    removal of the sqrt singularity at S0."""
    if Ds <= 0.0:
        raise ValueError("Ds must be positive")
    S_L = find_SL(law, alpha, S0, rho0)
    if S_L is None:
        raise NoFinitePeriod(
            "f(S) has no finite second root; the state concentrates instead"
        )
    if dS is None:
        dS = (S_L - S0) / 2000.0
    if (S_L - S0) / dS < 100.0:
        raise ValueError("dS must divide (S_L - S0) into at least 100 steps")

    f_vals = [0.0]
    S_vals = [S0]
    j = 1
    while True:
        Sj = S0 + j * dS
        fj = eval_f(law, alpha, S0, rho0, Sj)
        # Nodes with f numerically zero (at the root tolerance) sit on S_L
        # itself; including them would put the sqrt singularity into the
        # trapezoid, so the grid stops there as well.
        if fj < 10.0 * ROOT_RTOL * Sj * Sj:
            break
        S_vals.append(Sj)
        f_vals.append(fj)
        j += 1
    S_arr = np.asarray(S_vals)
    f_arr = np.asarray(f_vals)
    J = S_arr.size - 1
    if J < 2:
        raise ValueError("dS too coarse: fewer than two nodes with f >= 0")

    root_Ds = np.sqrt(Ds)
    x = np.empty(J + 1)
    x[0] = 0.0
    fp1 = f_prime(law, alpha, S0, rho0, S_arr[1])
    fpp1 = f_dprime(law, alpha, S0, rho0, S_arr[1])
    sq1 = np.sqrt(f_arr[1])
    x[1] = root_Ds * (2.0 * sq1 / fp1 + fpp1 * sq1 / fp1**2 * dS)
    inv_sqrt = 1.0 / np.sqrt(f_arr[1:])
    steps = root_Ds * 0.5 * dS * (inv_sqrt[1:] + inv_sqrt[:-1])
    x[2:] = x[1] + np.cumsum(steps)

    C0 = _c0(law, alpha, S0, rho0)
    rho = C0 / np.asarray(law.mobility(alpha, S_arr))
    L_half = float(x[J])
    M = float(np.trapezoid(S_arr, x))
    return SteadyProfile(
        law=law,
        alpha=alpha,
        Ds=Ds,
        S0=S0,
        rho0=rho0,
        C0=C0,
        S_L=S_L,
        S=S_arr,
        x=x,
        rho=rho,
        L_half=L_half,
        M=M,
    )


@dataclass(frozen=True)
class FvComparison:
    """Agreement report between a finite-volume steady state and the
    semi-analytic profile rebuilt from its own (S0, rho0)."""

    applicable: bool
    reason: str
    S0: float | None = None
    rho0: float | None = None
    linf_rel_S: float | None = None
    l1_rel_S: float | None = None
    linf_rel_rho: float | None = None
    l1_rel_rho: float | None = None
    profile: SteadyProfile | None = None


def verify_against_fv(
    rho: Field,
    S: Field,
    config: "fv.MacroConfig",
    *,
    steady_tol: float = 1e-9,
    dS: float | None = None,
) -> FvComparison:
    """Check steadiness of an FV state, rebuild the semi-analytic profile
    from its signal minimum, and report relative L-inf and L1 differences."""
    after = fv.step(rho, S, config)
    delta = float(np.max(np.abs(after.values - rho.values))) / config.dt
    if delta > steady_tol:
        raise NotSteady(f"max|drho|/dt = {delta:.3e} exceeds {steady_tol:.1e}")

    rv = rho.values
    if (rv.max() - rv.min()) <= 1e-8 * rv.mean():
        return FvComparison(applicable=False, reason="uniform steady state")

    sv = S.values
    imin = int(np.argmin(sv))
    S0 = float(sv[imin])
    rho0 = float(rv[imin])
    Ds = config.signal.Ds
    prof = profile(config.law, config.mobility.alpha, S0, rho0, Ds, dS)

    grid = rho.grid
    x_min = grid.centers[imin]
    d = np.abs(grid.centers - x_min)
    d = np.minimum(d, grid.length - d)  # periodic distance to the minimum
    S_ref = prof.interpolate_S(d)
    rho_ref = prof.interpolate_rho(d)

    def _rel(a, b):
        diff = np.abs(a - b)
        linf = float(diff.max() / np.abs(b).max())
        l1 = float(diff.sum() / np.abs(b).sum())
        return linf, l1

    linf_S, l1_S = _rel(sv, S_ref)
    linf_r, l1_r = _rel(rv, rho_ref)
    return FvComparison(
        applicable=True,
        reason="nonconstant steady state",
        S0=S0,
        rho0=rho0,
        linf_rel_S=linf_S,
        l1_rel_S=l1_S,
        linf_rel_rho=linf_r,
        l1_rel_rho=l1_r,
        profile=prof,
    )


@dataclass(frozen=True)
class ConcentrationVerdict:
    concentrating: bool
    reason: str


def concentration_check(law: VelocityLaw, alpha: float, C0: float) -> ConcentrationVerdict:
    """Classify the large-S behavior of g(S) = S - C0/(v(S)(alpha v(S)+1)).

    Concentration (no finite second root of f; Dirac limit) occurs exactly
    when g -> -infinity as S -> infinity.
    """
    if C0 <= 0.0:
        raise ValueError("C0 must be positive")
    if isinstance(law, RationalLaw):
        if law.p > 1.0:
            return ConcentrationVerdict(
                True, f"rational law with p={law.p} > 1: C0/(v(av+1)) grows like S^p"
            )
        return ConcentrationVerdict(
            C0 * law.q > 1.0,
            f"borderline rational p=1: concentrating iff C0*q > 1 "
            f"(C0*q = {C0 * law.q:.6g})",
        )
    if isinstance(law, SigmoidLaw):
        v_inf = 1.0 - law.chi * np.pi / 2.0
        return ConcentrationVerdict(
            False, f"sigmoid law: v(inf) = {v_inf:.6g} > 0, so g(S) -> +infinity"
        )
    probes = np.array([1e3, 1e4, 1e5])
    v = np.asarray(law.v(probes))
    g = probes - C0 / (v * (alpha * v + 1.0))
    diffs = np.diff(g)
    if np.all(diffs < 0.0):
        return ConcentrationVerdict(True, f"custom law: probe g decreasing ({g.tolist()})")
    if np.all(diffs > 0.0):
        return ConcentrationVerdict(False, f"custom law: probe g increasing ({g.tolist()})")
    raise InconclusiveProbe(f"probe values {g.tolist()} are non-monotone")


def inverse_scan(
    law: VelocityLaw,
    alpha: float,
    Ds: float,
    L_target: float,
    M_target: float,
    S0_range,
    rho0_range,
    n: int = 20,
    dS: float | None = None,
):
    """Brute-force scan of (S0, rho0) pairs for given half-period and mass.

    Returns the scanned table sorted by squared relative mismatch; pairs
    where the construction fails are skipped.
    """
    results = []
    for S0 in np.linspace(*S0_range, n):
        for rho0 in np.linspace(*rho0_range, n):
            if not S0 > rho0 > 0.0:
                continue
            try:
                prof = profile(law, alpha, S0, rho0, Ds, dS)
            except (NoFinitePeriod, ValueError):
                continue
            err = ((prof.L_half - L_target) / L_target) ** 2
            err += ((prof.M - M_target) / M_target) ** 2
            results.append((err, float(S0), float(rho0), prof.L_half, prof.M))
    results.sort(key=lambda t: t[0])
    return results
