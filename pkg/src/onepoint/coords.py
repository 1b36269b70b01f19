"""Exact change-of-coordinates coefficients and Schur polynomials.

Square-bracket modes are related to ordinary modes by

    u[m] = m! * sum_{i >= m} c(wt u, i, m) u(i),
    m! * sum_i c(wt, i, m) x^i = (log(1 + x))^m (1 + x)^(wt - 1).

Everything here is exact rational arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

Poly = list  # dense list of Fractions, index = power of x


def gen_binom(k, i: int) -> Fraction:
    """Generalised binomial coefficient k(k-1)...(k-i+1)/i! for any rational k."""
    if i < 0:
        return Fraction(0)
    out = Fraction(1)
    for r in range(i):
        out = out * (Fraction(k) - r) / (r + 1)
    return out


def _mul(a: Poly, b: Poly, n: int) -> Poly:
    out = [Fraction(0)] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x == 0:
            continue
        for j, y in enumerate(b[: n + 1 - i]):
            out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def _log1p_poly(n: int) -> tuple:
    # log(1 + x) = sum_{i>=1} -(-1)^i x^i / i
    return tuple([Fraction(0)] + [Fraction(-(-1) ** i, i) for i in range(1, n + 1)])


@lru_cache(maxsize=None)
def _bracket_row(wt: int, m: int, i_max: int) -> tuple:
    poly = [gen_binom(wt - 1, i) for i in range(i_max + 1)]
    log = list(_log1p_poly(i_max))
    for _ in range(m):
        poly = _mul(poly, log, i_max)
    fact = math.factorial(m)
    return tuple(c / fact for c in poly)


def bracket_coeffs(wt: int, m: int, i_max: int) -> dict[int, Fraction]:
    """Row ``{i: c(wt, i, m)}`` for 0 <= i <= i_max (entries with i < m are zero)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if i_max < m:
        raise ValueError("i_max must be >= m")
    return dict(enumerate(_bracket_row(wt, m, i_max)))


def mode_sum_identity_check(wt: int, k: int, i_max: int) -> Fraction:
    """Largest |binom(k, i) - sum_m (k + 1 - wt)^m c(wt, i, m)| over 0 <= i <= i_max.

    Both sides are the x^i coefficient of (1 + x)^k, so the result is 0.
    Negative ``k`` uses generalised binomials.
    """
    shift = Fraction(k + 1 - wt)
    worst = Fraction(0)
    rows = [bracket_coeffs(wt, m, i_max) for m in range(i_max + 1)]
    for i in range(i_max + 1):
        rhs = sum((shift ** m * rows[m][i] for m in range(i + 1)), Fraction(0))
        worst = max(worst, abs(gen_binom(k, i) - rhs))
    return worst


# A Schur polynomial is a dict mapping a monomial to its coefficient.  A
# monomial is a non-increasing tuple of variable indices, so (2, 1, 1) stands
# for t_2 t_1^2 and has degree 4.

def schur_coefficients(n_max: int) -> list[Fraction]:
    """a_n = c(1, n, 1) = -(-1)^n / n, the weights in e^{J[1]} = exp(sum a_n J(n))."""
    return [Fraction(0)] + [Fraction(-(-1) ** n, n) for n in range(1, n_max + 1)]


def _add_var(mono: tuple, n: int) -> tuple:
    return tuple(sorted(mono + (n,), reverse=True))


@lru_cache(maxsize=None)
def _schur(s_max: int) -> tuple:
    a = schur_coefficients(s_max)
    polys: list[dict] = [{(): Fraction(1)}]
    for s in range(1, s_max + 1):
        # s p_s = sum_{n=1}^{s} n a_n t_n p_{s-n}
        acc: dict = {}
        for n in range(1, s + 1):
            weight = n * a[n] / s
            for mono, c in polys[s - n].items():
                key = _add_var(mono, n)
                acc[key] = acc.get(key, 0) + weight * c
        polys.append({k: v for k, v in acc.items() if v != 0})
    return tuple(polys)


def schur_polys(s_max: int) -> list[dict[tuple, Fraction]]:
    """[p_0, ..., p_{s_max}] where sum_s p_s = exp(sum_{n>=1} a_n t_n), deg t_n = n."""
    if s_max < 0:
        raise ValueError("s_max must be >= 0")
    return [dict(p) for p in _schur(s_max)]


def monomial_degree(mono: tuple) -> int:
    return sum(mono)
