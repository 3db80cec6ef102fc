#!/usr/bin/env python3
"""Print the linear-stability summary for the figure scenarios.

For each scenario the table lists gamma_alpha, the critical wavenumber k_c
and the critical wavelength 2*pi/k_c of the unstable band.
"""

import numpy as np

from mechanosim import RationalLaw, SigmoidLaw
from mechanosim import stability

SCENARIOS = [
    ("rational p=q=2, alpha=1, Ds=0.01", RationalLaw(2, 2), 1.0, 0.01),
    ("rational p=q=2, alpha=1, Ds=0.0025", RationalLaw(2, 2), 1.0, 0.0025),
    ("rational p=q=2, alpha=1, Ds=0.000625", RationalLaw(2, 2), 1.0, 0.000625),
    ("sigmoid chi=0.02, alpha=0, Ds=0.001", SigmoidLaw(0.02, 0.01), 0.0, 0.001),
    ("sigmoid chi=0.012, alpha=0, Ds=0.001", SigmoidLaw(0.012, 0.01), 0.0, 0.001),
]

if __name__ == "__main__":
    print(f"{'scenario':45s} {'gamma':>8s} {'k_c':>8s} {'2pi/k_c':>8s}")
    for name, law, alpha, Ds in SCENARIOS:
        report = stability.analyze(law, alpha, 1.0, Ds)
        kc = report.k_c
        print(
            f"{name:45s} {report.gamma_alpha:8.4f} "
            f"{kc if kc else float('nan'):8.3f} "
            f"{2 * np.pi / kc if kc else float('nan'):8.3f}"
        )
