"""Elliptic functions P_k, the Dedekind eta function and Jacobi theta functions.

Normalisation: ``P_k(tau, z) = 1/(k-1)! * sum_{n != 0} n^(k-1) q_z^n / (1 - q^n)``,
the Weierstrass-type functions with their (2 pi i)^k factor removed.  The
argument order is always ``(tau, z)``.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .report import TransformReport
from .series import EvalPoint, QZSeries, e, series_arith, series_eval

DEFAULT_PK_NMAX = 64
THETA_TOL = 1e-17


def _check_strip(tau: complex, z: complex) -> None:
    if not 0 < z.imag < tau.imag:
        raise DomainError(
            f"z={z} outside the strip 0 < Im z < Im tau (tau={tau}); P_k series diverges")


def eval_Pk(k: int, p: EvalPoint, n_max: int = DEFAULT_PK_NMAX) -> complex:
    """Truncated series for P_k at ``p``; requires 0 < Im z < Im tau.

    Negative-n terms are rewritten as ``-(-n)^(k-1) (q/q_z)^n / (1 - q^n)``
    so that every power being summed has modulus below one.
    """
    if k < 1 or n_max < 1:
        raise ValueError("need k >= 1 and n_max >= 1")
    tau, z = complex(p.tau), complex(p.z)
    _check_strip(tau, z)
    n = np.arange(1, n_max + 1, dtype=float)
    q = e(tau)
    qz = e(z)
    qn = q ** n
    pos = n ** (k - 1) * qz ** n / (1 - qn)
    neg = (-n) ** (k - 1) * (q / qz) ** n / (1 - qn)
    return complex((pos.sum() - neg.sum()) / math.factorial(k - 1))


def pk_tail_estimate(p: EvalPoint, k: int, n_max: int) -> float:
    """Geometric estimate of the P_k terms with |n| > n_max."""
    tau, z = complex(p.tau), complex(p.z)
    r = max(abs(e(z)), abs(e(tau - z)))
    if r >= 1:
        return math.inf
    nxt = n_max + 1
    return nxt ** (k - 1) * r ** nxt / ((1 - r) * (1 - abs(e(tau))) * math.factorial(k - 1))


def _apply(gamma, tau: complex) -> complex:
    a, b, c, d = gamma
    return (a * tau + b) / (c * tau + d)


def pk_anomaly(k: int, gamma, tau: complex, z: complex) -> complex:
    """Extra term in P_k(g tau, z/(c tau + d)) = (c tau + d)^k P_k(tau, z) + anomaly."""
    a, b, c, d = gamma
    j = c * tau + d
    if k == 1:
        return j / 2 - c * z - 0.5
    if k == 2:
        return -c * j / (2j * math.pi)
    return 0j


def pk_nmax_for(p: EvalPoint, k: int, tol: float = 1e-17) -> int:
    """Mode cutoff (at least DEFAULT_PK_NMAX) whose tail estimate is below ``tol``."""
    n = DEFAULT_PK_NMAX
    while pk_tail_estimate(p, k, n) > tol:
        n *= 2
        if n > 1 << 16:
            raise DomainError(f"z={p.z} sits too close to the edge of the strip for tau={p.tau}")
    return n


def check_Pk_transform(k: int, gamma, p: EvalPoint, n_max: int | None = None) -> TransformReport:
    """Residual of the SL2(Z) law for P_k, anomaly terms included for k = 1, 2.

    Both ``p`` and its image must lie in the convergence strip.  With
    ``n_max=None`` the cutoff is raised from 64 until the tail estimate at
    both points is negligible.
    """
    mat = getattr(gamma, "matrix", gamma)
    a, b, c, d = mat
    tau, z = complex(p.tau), complex(p.z)
    j = c * tau + d
    image = EvalPoint(_apply(mat, tau), z / j)
    _check_strip(tau, z)
    _check_strip(complex(image.tau), complex(image.z))
    if n_max is None:
        n_max = max(pk_nmax_for(p, k), pk_nmax_for(image, k))

    def sides(nm):
        lhs = eval_Pk(k, image, nm)
        rhs = j ** k * eval_Pk(k, p, nm) + pk_anomaly(k, mat, tau, z)
        return lhs, rhs

    lhs, rhs = sides(n_max)
    lhs2, rhs2 = sides(2 * n_max)
    return TransformReport.build(
        gamma=gamma, params={"check": "pk", "k": k, "tau": tau, "z": z, "depth": n_max},
        lhs=lhs, rhs=rhs, depth_doubled_err=abs(lhs2 - rhs2),
        tail_bound=pk_tail_estimate(p, k, n_max) * abs(j) ** k + pk_tail_estimate(image, k, n_max))


@lru_cache(maxsize=64)
def eta_series(depth: int) -> QZSeries:
    """q^(1/24) * prod_{n=1}^{depth} (1 - q^n), known exactly below q^(depth+1+1/24)."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    trunc = depth + 1
    s = QZSeries.monomial(0, q_trunc=trunc)
    for n in range(1, depth + 1):
        factor = QZSeries({(0, 0): 1, (n, 0): -1}, q_floor=0, q_trunc=trunc)
        s = series_arith(s, factor, "mul")
    return series_arith(QZSeries.monomial("1/24"), s, "mul")


def auto_depth(tau: complex, tol: float = 1e-18) -> int:
    """Smallest n with |q|^n below ``tol``."""
    aq = abs(e(tau))
    return max(8, int(math.ceil(math.log(tol) / math.log(aq))))


def eval_eta(p: EvalPoint | complex, depth: int | None = None) -> complex:
    tau = complex(p.tau if isinstance(p, EvalPoint) else p)
    point = p if isinstance(p, EvalPoint) else EvalPoint(tau)
    if depth is None:
        depth = auto_depth(tau)
    return series_eval(eta_series(depth), point)[0]


def _theta_range(h: int, tau: complex, z: complex, m_max: int | None) -> np.ndarray:
    if m_max is not None:
        return np.arange(-m_max, m_max + 1, dtype=float) + h / 2
    # grow symmetric range until both edge terms fall below THETA_TOL
    y, yz = tau.imag, z.imag
    m = 4
    while True:
        edge = max(math.exp(-math.pi * y * (m + h / 2) ** 2 + 2 * math.pi * abs(yz) * (m + 1)), 0.0)
        if edge < THETA_TOL:
            return np.arange(-m, m + 1, dtype=float) + h / 2
        m *= 2


def eval_theta(h: int, k: int, p: EvalPoint, m_max: int | None = None, derivative: int = 0) -> complex:
    """theta_{hk}(tau, z) = sum_n e^{pi i (n+h/2)^2 tau + 2 pi i (n+h/2)(z+k/2)}.

    ``derivative`` applies D_z = (2 pi i)^-1 d/dz that many times, i.e.
    multiplies each summand by (n + h/2)^derivative.  With ``m_max=None``
    the range is chosen so that omitted terms are below 1e-17.
    """
    tau, z = complex(p.tau), complex(p.z)
    n = _theta_range(h, tau, z, m_max)
    terms = np.exp(1j * math.pi * n ** 2 * tau + 2j * math.pi * n * (z + k / 2))
    if derivative:
        terms = terms * n ** derivative
    return complex(terms.sum())


def eval_theta_prime(h: int, k: int, p: EvalPoint, m_max: int | None = None) -> complex:
    return eval_theta(h, k, p, m_max, derivative=1)


def theta_s_multiplier(h: int, k: int, printed: bool = False) -> complex:
    """Root of unity in theta_hk(-1/tau, z/tau) = mult * sqrt(-i tau) e^{pi i z^2/tau} theta_kh.

    The correct value is (-i)^(hk); ``printed=True`` returns i^(hk), the
    sign that appears in some transcriptions of the law.
    """
    return (1j if printed else -1j) ** (h * k)


def sqrt_minus_i_tau(tau: complex) -> complex:
    """Principal branch of (-i tau)^(1/2); positive real part on the upper half-plane."""
    return cmath.sqrt(-1j * tau)
