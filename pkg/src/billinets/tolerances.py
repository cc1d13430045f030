"""Default numerical tolerances.

All rank-style residuals are relative (scale-free after canonicalization),
so a single set of defaults works across the exercised families.
"""
from __future__ import annotations

from dataclasses import dataclass

TOL_RANK = 1e-9        # rank residuals: collinearity, pencils
TOL_CR = 1e-7          # harmonic cross-ratio deviation
TOL_CAUSTIC = 1e-8     # caustic parameter drift (roots condition worse near double roots)
TOL_FORWARD = 1e-9     # forward-branch cutoff along a trajectory


@dataclass(frozen=True)
class Tolerances:
    tol_rank: float = TOL_RANK
    tol_cr: float = TOL_CR
    tol_caustic: float = TOL_CAUSTIC
    tol_forward: float = TOL_FORWARD
