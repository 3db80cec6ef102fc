"""Numba hot loops for the finite-volume time integration.

These kernels mirror the numpy reference implementation in fv.py for the
built-in velocity laws; custom laws fall back to the numpy path.  Status
codes: 0 ok, 1 positivity loss (cell reported), 2 sub-cycling depth
exhausted.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from ._cyclic import cyclic_solve

LAW_RATIONAL = 0
LAW_SIGMOID = 1

STATUS_OK = 0
STATUS_POSITIVITY = 1
STATUS_DEPTH = 2

_MAX_HALVINGS = 20
_SAFETY = 0.9


@njit(cache=True, inline="always")
def _v_scalar(kind: int, p: float, q: float, chi: float, delta: float, s: float) -> float:
    if kind == LAW_RATIONAL:
        sp = s * s if p == 2.0 else s**p
        return 1.0 / (1.0 + q * sp)
    return 1.0 - chi * math.atan((s - 1.0) / delta)


@njit(cache=True)
def _weights(kind, p, q, chi, delta, alpha, S, w, vmid2):
    I = S.size
    for i in range(I):
        v = _v_scalar(kind, p, q, chi, delta, S[i])
        w[i] = alpha * v * v + v
    for i in range(I):
        im = i - 1 if i > 0 else I - 1
        vm = _v_scalar(kind, p, q, chi, delta, 0.5 * (S[im] + S[i]))
        vmid2[i] = vm * vm


@njit(cache=True)
def _macro_step(rho, w, vmid2, D, dx, dt, subcycle):
    """Advance rho (in place) by dt with adaptive step-halving.

    Returns (status, cell).
    """
    I = rho.size
    phi = np.empty(I)
    F = np.empty(I)
    remaining = dt
    tiny = dt * 1e-12
    while remaining > tiny:
        for i in range(I):
            im = i - 1 if i > 0 else I - 1
            phi[i] = (vmid2[i] / dx) * math.log((rho[i] * w[i]) / (rho[im] * w[im]))
        cmax = 0.0
        for i in range(I):
            ip = i + 1 if i < I - 1 else 0
            c = (phi[i] if phi[i] > 0.0 else 0.0) + (-phi[ip] if phi[ip] < 0.0 else 0.0)
            if c > cmax:
                cmax = c
        h = remaining
        if subcycle and cmax > 0.0:
            stable = _SAFETY * dx / (D * cmax)
            depth = 0
            while h > stable:
                h *= 0.5
                depth += 1
                if depth > _MAX_HALVINGS:
                    return STATUS_DEPTH, -1
        for i in range(I):
            im = i - 1 if i > 0 else I - 1
            gain = (-phi[i] if phi[i] < 0.0 else 0.0) * rho[im]
            loss = (phi[i] if phi[i] > 0.0 else 0.0) * rho[i]
            F[i] = gain - loss
        coef = D * h / dx
        bad = -1
        for i in range(I):
            ip = i + 1 if i < I - 1 else 0
            rnew = rho[i] + coef * (F[i] - F[ip])
            if rnew <= 0.0 and bad < 0:
                bad = i
            rho[i] = rnew
        if bad >= 0:
            return STATUS_POSITIVITY, bad
        remaining -= h
    return STATUS_OK, -1


@njit(cache=True)
def run_kernel(
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
    alpha,
    D,
    dx,
    dt,
    n_steps,
    snap_every,
    steady_tol,
    subcycle,
    snap_rho,
    snap_S,
    snap_t,
    probe_cos,
    probe_sin,
    probe_lo,
    probe_hi,
    probe_amp,
):
    """Time loop with coupled or frozen signal; fills snapshot buffers.

    Returns (status, cell, n_snaps, steps_done, last_delta) where last_delta
    is max|rho^{n+1}-rho^n|/dt of the final executed step.
    """
    I = rho.size
    w = np.empty(I)
    vmid2 = np.empty(I)
    prev = np.empty(I)
    probing = probe_cos.size > 0

    if frozen:
        S = S_frozen.copy()
        _weights(kind, p, q, chi, delta, alpha, S, w, vmid2)
    else:
        S = cyclic_solve(d, z, r, rho)

    nsnap = 0
    snap_t[nsnap] = 0.0
    snap_rho[nsnap] = rho
    snap_S[nsnap] = S
    if probing:
        cs = 0.0
        sn = 0.0
        for i in range(I):
            cs += rho[i] * probe_cos[i]
            sn += rho[i] * probe_sin[i]
        probe_amp[nsnap] = 2.0 * math.sqrt(cs * cs + sn * sn) / I
    nsnap += 1

    last_delta = np.inf
    steps_done = 0
    for n in range(1, n_steps + 1):
        if not frozen:
            S = cyclic_solve(d, z, r, rho)
            _weights(kind, p, q, chi, delta, alpha, S, w, vmid2)
        prev[:] = rho
        status, cell = _macro_step(rho, w, vmid2, D, dx, dt, subcycle)
        if status != STATUS_OK:
            return status, cell, nsnap, steps_done, last_delta
        steps_done = n
        dmax = 0.0
        for i in range(I):
            a = rho[i] - prev[i]
            if a < 0.0:
                a = -a
            if a > dmax:
                dmax = a
        last_delta = dmax / dt
        if n % snap_every == 0:
            snap_t[nsnap] = n * dt
            snap_rho[nsnap] = rho
            snap_S[nsnap] = S
            if probing:
                cs = 0.0
                sn = 0.0
                for i in range(I):
                    cs += rho[i] * probe_cos[i]
                    sn += rho[i] * probe_sin[i]
                amp = 2.0 * math.sqrt(cs * cs + sn * sn) / I
                probe_amp[nsnap] = amp
                nsnap += 1
                if amp >= probe_hi or amp <= probe_lo:
                    return STATUS_OK, -1, nsnap, steps_done, last_delta
            else:
                nsnap += 1
            if steady_tol > 0.0 and last_delta <= steady_tol:
                return STATUS_OK, -1, nsnap, steps_done, last_delta
    if n_steps % snap_every != 0:
        # always record the terminal state
        snap_t[nsnap] = n_steps * dt
        snap_rho[nsnap] = rho
        snap_S[nsnap] = S
        if probing:
            cs = 0.0
            sn = 0.0
            for i in range(I):
                cs += rho[i] * probe_cos[i]
                sn += rho[i] * probe_sin[i]
            probe_amp[nsnap] = 2.0 * math.sqrt(cs * cs + sn * sn) / I
        nsnap += 1
    return STATUS_OK, -1, nsnap, steps_done, last_delta
