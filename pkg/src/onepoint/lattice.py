"""Coset data for the rank-one lattice 2Z alpha with <alpha, alpha> = 1."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import InputError

# M^0 = V, M^1 = V_{(2Z+1/2)alpha}, M^2 = V_{(2Z+1)alpha}, M^3 = V_{(2Z-1/2)alpha}
SECTOR_OFFSETS = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(-1, 2))
N_MODULES = 4
CENTRAL_CHARGE = 1
CHARGE_TOL = 1e-18


def sector_offset(j: int) -> Fraction:
    if j not in range(N_MODULES):
        raise InputError(f"module index must be 0..3, got {j}")
    return SECTOR_OFFSETS[j]


def log_weight(m, tau: complex, u: complex = 0, w: complex = 0) -> float:
    """log |q^{m^2/2 + w m} e^{2 pi i u m}|, the size of charge m in a twisted trace."""
    m = float(m)
    expo = 2j * math.pi * (tau * (m * m / 2 + w * m) + u * m)
    return expo.real


def coset_charges(j: int, tau: complex, u: complex = 0, w: complex = 0,
                  tol: float = CHARGE_TOL) -> list[Fraction]:
    """Charges m in delta_j + 2Z whose weight |q^{m^2/2+wm} e(um)| is at least
    ``tol`` times the largest one; the range grows until both ends are below."""
    delta = sector_offset(j)
    tau = complex(tau)
    # the weight is a Gaussian in m centred near -Re-part of the linear term
    lin = (2j * math.pi * (tau * w + u)).real
    quad = -math.pi * tau.imag
    centre = -lin / (2 * quad) if quad else 0.0
    n0 = int(round((centre - float(delta)) / 2))
    radius = 4
    while True:
        ns = np.arange(n0 - radius, n0 + radius + 1)
        ms = [delta + 2 * int(n) for n in ns]
        logs = np.array([log_weight(m, tau, u, w) for m in ms])
        peak = logs.max()
        cut = peak + math.log(tol)
        if logs[0] < cut and logs[-1] < cut:
            return [m for m, lw in zip(ms, logs) if lw >= cut + math.log(1e-2)]
        radius *= 2
        if radius > 1 << 16:
            raise InputError("charge sum does not converge at these parameters")
