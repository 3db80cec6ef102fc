"""Flat dotted-key experiment configuration.

Config files are plain text, one ``key = value`` assignment per line with
``#`` comments.  Keys are dotted paths (``law.kind``, ``init.amplitude``);
figure presets supply complete parameter sets that user keys may override.
Paper-default discretization applies when grid/dt keys are omitted:
dx = sqrt(Ds)/10, dt = dx^2/5, D = 1, L = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .fv import InitSpec, MacroConfig
from .grid import Grid
from .signal import SignalParams
from .velocity import MobilityParams, RationalLaw, SigmoidLaw, VelocityLaw

KINDS = ("simulate", "stability", "steady-state", "kinetic", "sweep")

# Complete parameter sets for the published figure scenarios.
PRESETS = {
    "fig1": {
        "kind": "sweep",
        "sweep.key": "alpha",
        "sweep.values": "0,1,100",
        "law.kind": "rational", "law.p": "2", "law.q": "2",
        "Ds": "0.01", "alpha": "1", "t_end": "20", "steady_stop": "1e-9",
    },
    "fig2a": {
        "kind": "simulate",
        "law.kind": "rational", "law.p": "2", "law.q": "2",
        "Ds": "0.01", "alpha": "1", "t_end": "20", "steady_stop": "1e-9",
    },
    "fig2b": {
        "kind": "simulate",
        "law.kind": "rational", "law.p": "2", "law.q": "2",
        "Ds": "0.0025", "alpha": "1", "t_end": "20", "steady_stop": "1e-9",
    },
    "fig2c": {
        "kind": "simulate",
        "law.kind": "rational", "law.p": "2", "law.q": "2",
        "Ds": "0.000625", "alpha": "1", "t_end": "20", "steady_stop": "1e-9",
    },
    "fig3": {
        "kind": "steady-state",
        "law.kind": "rational", "law.p": "2", "law.q": "2",
        "Ds": "0.01", "alpha": "1", "S0": "1.2", "rho0": "0.8",
    },
    "fig4": {
        "kind": "simulate",
        "law.kind": "sigmoid", "law.chi": "0.02", "law.delta": "0.01",
        "Ds": "0.001", "alpha": "0", "t_end": "100",
        "init.kind": "cosine", "init.amplitude": "0.01", "init.mode": "5",
    },
    "fig5": {
        "kind": "simulate",
        "law.kind": "sigmoid", "law.chi": "0.012", "law.delta": "0.01",
        "Ds": "0.001", "alpha": "0", "t_end": "100",
        "init.kind": "cosine", "init.amplitude": "0.01", "init.mode": "1",
    },
}

_KNOWN_KEYS = {
    "kind", "name",
    "law.kind", "law.p", "law.q", "law.chi", "law.delta",
    "alpha", "D", "Ds",
    "grid.L", "grid.cells", "dt", "t_end", "snapshot_every", "steady_stop",
    "init.kind", "init.base", "init.amplitude", "init.mode", "init.seed",
    "S_star",
    "S0", "rho0", "dS",
    "kinetic.eps", "kinetic.N", "kinetic.seed", "kinetic.times",
    "kinetic.d_eff", "kinetic.dt_factor",
    "sweep.key", "sweep.values",
}


def parse_pairs(text: str) -> dict:
    """Parse ``key = value`` lines; raises ConfigError naming the line."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value in {raw!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


@dataclass(frozen=True)
class ExperimentSpec:
    """Validated experiment description; everything downstream is built
    from ``pairs`` on demand."""

    name: str
    kind: str
    pairs: dict = field(repr=False)

    def _float(self, key: str, default: float | None = None) -> float:
        if key not in self.pairs:
            if default is None:
                raise ConfigError(f"missing required key {key!r}")
            return default
        try:
            return float(self.pairs[key])
        except ValueError as exc:
            raise ConfigError(f"key {key!r}: not a number ({self.pairs[key]!r})") from exc

    def _int(self, key: str, default: int | None = None) -> int:
        if key not in self.pairs:
            if default is None:
                raise ConfigError(f"missing required key {key!r}")
            return default
        try:
            return int(self.pairs[key])
        except ValueError as exc:
            raise ConfigError(f"key {key!r}: not an integer ({self.pairs[key]!r})") from exc

    def law(self) -> VelocityLaw:
        kind = self.pairs.get("law.kind", "rational")
        try:
            if kind == "rational":
                return RationalLaw(p=self._float("law.p", 2.0), q=self._float("law.q", 2.0))
            if kind == "sigmoid":
                return SigmoidLaw(chi=self._float("law.chi"), delta=self._float("law.delta"))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        raise ConfigError(f"unknown law.kind {kind!r} (rational or sigmoid)")

    @property
    def alpha(self) -> float:
        return self._float("alpha", 0.0)

    @property
    def D(self) -> float:
        return self._float("D", 1.0)

    @property
    def Ds(self) -> float:
        return self._float("Ds")

    def macro_config(self) -> MacroConfig:
        try:
            L = self._float("grid.L", 1.0)
            Ds = self.Ds
            if "grid.cells" in self.pairs:
                grid = Grid(L, self._int("grid.cells"))
            else:
                grid = Grid(L, max(4, round(L / (np.sqrt(Ds) / 10.0))))
            dt = self._float("dt", grid.dx**2 / 5.0)
            init = InitSpec(
                kind=self.pairs.get("init.kind", "cosine"),
                base=self._float("init.base", 1.0),
                amplitude=self._float("init.amplitude", 0.1),
                mode=self._int("init.mode", 1),
                seed=self._int("init.seed", 0),
            )
            return MacroConfig(
                law=self.law(),
                mobility=MobilityParams(alpha=self.alpha, D=self.D),
                grid=grid,
                dt=dt,
                t_end=self._float("t_end"),
                snapshot_every=self._int("snapshot_every", 200),
                signal=SignalParams(Ds),
                init=init,
                steady_stop=self._float("steady_stop", 0.0),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def build_spec(pairs: dict, preset: str | None = None) -> ExperimentSpec:
    """Merge preset and explicit keys (explicit wins) and validate."""
    merged = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; have {sorted(PRESETS)}")
        merged.update(PRESETS[preset])
    merged.update(pairs)
    unknown = sorted(set(merged) - _KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(unknown)}")
    kind = merged.get("kind")
    if kind not in KINDS:
        raise ConfigError(f"kind must be one of {KINDS}, got {kind!r}")
    name = merged.get("name", preset or kind)
    return ExperimentSpec(name=name, kind=kind, pairs=merged)


def parse_config(path, preset: str | None = None) -> ExperimentSpec:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return build_spec(parse_pairs(text), preset)
