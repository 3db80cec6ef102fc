"""Shared fixtures: small grids and the expensive steady-state run reused
by several tests."""

import numpy as np
import pytest

from mechanosim import Grid, MacroConfig, RationalLaw, run


@pytest.fixture(scope="session")
def small_grid():
    return Grid(1.0, 64)


@pytest.fixture(scope="session")
def aggregation_steady_run():
    """Coupled run at Ds=0.01, alpha=1, rational p=q=2, integrated until the
    steadiness threshold 1e-9 fires; used by the steady-state comparison and
    the regime checks."""
    cfg = MacroConfig.paper_default(
        RationalLaw(2, 2), 1.0, 0.01, t_end=80.0, steady_stop=1e-9
    )
    traj = run(cfg)
    assert traj.steady
    return cfg, traj


def count_peaks(values: np.ndarray, rel_height: float = 0.2) -> int:
    """Local maxima (periodic) above min + rel_height*(max-min).

    Ties are broken half-open (>= left, > right) so a flat-topped peak —
    including a symmetric maximum straddling a cell edge — counts once.
    """
    left = np.roll(values, 1)
    right = np.roll(values, -1)
    thresh = values.min() + rel_height * (values.max() - values.min())
    return int(np.sum((values >= left) & (values > right) & (values > thresh)))
