"""The cosine difference quotient (cos b - cos a) / (b - a).

It is evaluated through the product identity

    (cos b - cos a) / (b - a) = -sin((a + b) / 2) * sinc((b - a) / 2),

with sinc(d) = sin(d) / d, which has no cancellation and is exact at b = a.
"""
from __future__ import annotations

import numpy as np

from .grid import Field

# below this |d| the two-term series 1 - d^2/6 is exact to well under an ulp
SINC_SERIES_CUTOFF = 1e-4


def _sinc(d):
    d = np.asarray(d, dtype=float)
    small = np.abs(d) < SINC_SERIES_CUTOFF
    safe = np.where(small, 1.0, d)
    return np.where(small, 1.0 - d * d / 6.0, np.sin(safe) / safe)


def psi(a, b):
    """Cosine difference quotient; scalars or arrays, symmetric in ``a`` and ``b``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    out = -np.sin(mid) * _sinc(half)
    return float(out) if out.ndim == 0 else out


def psi_field(u_new: Field, u_old: Field, phi: Field) -> Field:
    if not (u_new.grid == u_old.grid == phi.grid):
        raise ValueError("fields live on different grids")
    return Field(u_new.grid, phi.values * psi(u_old.values, u_new.values))
