"""Closed-form one-point theta functions of V_{2Z alpha}.

For J = u alpha, K = w alpha and an insertion v = a 1 + b alpha,

    Phi_j(v : (J, K), tau)
        = tr_{M^j} e^{2 pi i (o(J) + <J,K>/2)} o(v) q^{L(0) - 1/24 + o(K) + <K,K>/2}
        = e^{pi i u w} / eta(tau) * sum_{m in delta_j + 2Z} (a + b m) q^{(m + w)^2 / 2} e^{2 pi i u m}.

Both components of v have alpha(0)-eigenvalue zero, and 1, alpha are
homogeneous for L[0] of weights 0 and 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import CHARGE_TOL, coset_charges
from .series import e
from .special import eval_eta


@dataclass(frozen=True)
class InsertionVector:
    """v = a * 1 + b * alpha."""

    a: complex = 0
    b: complex = 0

    @property
    def weight(self) -> int | None:
        """Square-bracket weight, or None when v mixes weights 0 and 1."""
        if self.b == 0:
            return 0
        if self.a == 0:
            return 1
        return None

    def homogeneous_parts(self) -> list[tuple[int, "InsertionVector"]]:
        parts = []
        if self.a != 0:
            parts.append((0, InsertionVector(self.a, 0)))
        if self.b != 0:
            parts.append((1, InsertionVector(0, self.b)))
        return parts

    def __add__(self, other):
        return InsertionVector(self.a + other.a, self.b + other.b)

    def __mul__(self, c):
        return InsertionVector(c * self.a, c * self.b)

    __rmul__ = __mul__

    def __repr__(self):
        return f"InsertionVector({self.a}*1 + {self.b}*alpha)"


ONE = InsertionVector(1, 0)
ALPHA = InsertionVector(0, 1)


@dataclass(frozen=True)
class PairJK:
    """(J, K) = (u alpha, w alpha)."""

    u: complex = 0
    w: complex = 0

    @property
    def jk(self) -> complex:
        return self.u * self.w

    @property
    def kk(self) -> complex:
        return self.w * self.w

    @property
    def jj(self) -> complex:
        return self.u * self.u

    def transformed(self, gamma) -> "PairJK":
        """(bK + dJ, aK + cJ)."""
        a, b, c, d = getattr(gamma, "matrix", gamma)
        return PairJK(b * self.w + d * self.u, a * self.w + c * self.u)


def alpha_bracket1(v: InsertionVector, coeff: complex = 1) -> InsertionVector:
    """(coeff * alpha)[1] v: alpha[1] alpha = 1, alpha[1] 1 = 0."""
    return InsertionVector(coeff * v.b, 0)


def bracket_exp(v: InsertionVector, c1: complex) -> InsertionVector:
    """e^{c1 alpha[1]} v; exact because alpha[1]^2 kills the insertion space."""
    return InsertionVector(v.a + c1 * v.b, v.b)


def _lattice_sum(j, v, jk, tau, tol):
    ms = coset_charges(j, tau, jk.u, jk.w, tol)
    m = np.array([float(x) for x in ms])
    w, u = complex(jk.w), complex(jk.u)
    terms = np.exp(2j * math.pi * (tau * (m + w) ** 2 / 2 + u * m))
    return complex(((v.a + v.b * m) * terms).sum())


def phi(j: int, v: InsertionVector, jk: PairJK, tau: complex, depth: int | None = None,
        tol: float = CHARGE_TOL) -> complex:
    """Phi_j(v : (J, K), tau).  ``depth`` is the number of eta product factors
    (None picks one with |q|^depth < 1e-18)."""
    tau = complex(tau)
    pref = e(jk.u * jk.w / 2)
    return pref * _lattice_sum(j, v, jk, tau, tol) / eval_eta(tau, depth)


def phi_ell(j: int, ell: int, v: InsertionVector, jk: PairJK, tau: complex,
            depth: int | None = None) -> complex:
    """Phi_{j,l} = (1/l!) Phi_j(((u + tau w) alpha)[1]^l v)."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    coeff = jk.u + complex(tau) * jk.w
    x = v
    for _ in range(ell):
        x = alpha_bracket1(x, coeff)
    if x.a == 0 and x.b == 0:
        return 0j
    return phi(j, x, jk, tau, depth) / math.factorial(ell)


def psi(j: int, v: InsertionVector, jk: PairJK, tau: complex, depth: int | None = None) -> complex:
    """Psi_j(v) = Phi_j(e^{K[1]} v)."""
    return phi(j, bracket_exp(v, jk.w), jk, tau, depth)
