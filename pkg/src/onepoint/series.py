"""Truncated two-variable series in q = e(tau) and zeta = e(z).

A series is a finite map ``(q_exp, z_exp) -> coefficient`` with exact
rational exponents and complex coefficients.  Every series carries the
range of q-exponents it actually determines: ``q_floor`` (least allowed
exponent) and ``q_trunc`` (exclusive cutoff, ``None`` for an exact finite
series).  Arithmetic intersects these ranges, so a product never invents
terms that one of the factors did not pin down.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from .errors import DomainError, TruncationError

RationalExponent = Fraction
Exponent = Union[int, Fraction, str]

TWO_PI_I = 2j * math.pi


def _frac(x) -> Fraction:
    if x is None:
        return None
    return Fraction(x)


def e(x: complex) -> complex:
    """exp(2 pi i x)."""
    return cmath.exp(TWO_PI_I * x)


@dataclass(frozen=True)
class EvalPoint:
    tau: complex
    z: complex = 0j

    def __post_init__(self):
        if complex(self.tau).imag <= 0:
            raise DomainError(f"tau={self.tau} is not in the upper half-plane")

    @property
    def q(self) -> complex:
        return e(self.tau)

    @property
    def zeta(self) -> complex:
        return e(self.z)


@dataclass(frozen=True, eq=False)
class QZSeries:
    terms: Mapping[tuple[Fraction, Fraction], complex] = field(default_factory=dict)
    q_floor: Fraction = Fraction(0)
    q_trunc: Fraction | None = None

    def __post_init__(self):
        floor = _frac(self.q_floor)
        trunc = _frac(self.q_trunc)
        clean = {}
        for (r, s), c in self.terms.items():
            r, s = Fraction(r), Fraction(s)
            if c == 0:
                continue
            if r < floor:
                raise TruncationError(f"term q^{r} below q_floor={floor}")
            if trunc is not None and r >= trunc:
                continue
            clean[(r, s)] = clean.get((r, s), 0) + complex(c)
        clean = {k: v for k, v in clean.items() if v != 0}
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "q_floor", floor)
        object.__setattr__(self, "q_trunc", trunc)

    @classmethod
    def monomial(cls, q_exp: Exponent = 0, z_exp: Exponent = 0, coeff: complex = 1,
                 q_trunc: Exponent | None = None) -> "QZSeries":
        r = Fraction(q_exp)
        return cls({(r, Fraction(z_exp)): coeff}, q_floor=r, q_trunc=_frac(q_trunc))

    @classmethod
    def from_q_coeffs(cls, coeffs, q_trunc: Exponent | None = None, offset: Exponent = 0):
        """Series sum_n coeffs[n] q^(n + offset) with no zeta dependence."""
        off = Fraction(offset)
        terms = {(off + n, Fraction(0)): c for n, c in enumerate(coeffs)}
        return cls(terms, q_floor=off, q_trunc=_frac(q_trunc))

    def __len__(self):
        return len(self.terms)

    def coeff(self, q_exp: Exponent, z_exp: Exponent = 0) -> complex:
        r = Fraction(q_exp)
        if self.q_trunc is not None and r >= self.q_trunc:
            raise TruncationError(f"q^{r} lies beyond the truncation q^{self.q_trunc}")
        return self.terms.get((r, Fraction(z_exp)), 0j)

    def q_levels(self) -> dict[Fraction, dict[Fraction, complex]]:
        levels: dict[Fraction, dict[Fraction, complex]] = {}
        for (r, s), c in sorted(self.terms.items()):
            levels.setdefault(r, {})[s] = c
        return levels

    def scale(self, scalar: complex) -> "QZSeries":
        return QZSeries({k: scalar * c for k, c in self.terms.items()},
                        self.q_floor, self.q_trunc)

    def __add__(self, other):
        return series_arith(self, other, "add")

    def __sub__(self, other):
        return series_arith(self, other.scale(-1), "add")

    def __mul__(self, other):
        if isinstance(other, QZSeries):
            return series_arith(self, other, "mul")
        return self.scale(other)

    __rmul__ = __mul__

    def __neg__(self):
        return self.scale(-1)

    def __repr__(self):
        shown = ", ".join(f"{c:.4g}*q^{r}*z^{s}" for (r, s), c in sorted(self.terms.items())[:6])
        more = " ..." if len(self.terms) > 6 else ""
        return f"QZSeries({shown}{more}; floor={self.q_floor}, trunc={self.q_trunc})"


def _min_trunc(*truncs):
    finite = [t for t in truncs if t is not None]
    return min(finite) if finite else None


def series_arith(a: QZSeries, b: QZSeries, op: str = "add", scalar: complex = 1) -> QZSeries:
    """Add or multiply two series, then scale the result by ``scalar``.

    The result's truncation is the tightest one both inputs support.  If the
    combined truncation would make one operand vanish entirely (addition) or
    leave no determined term at all (multiplication), a
    :class:`TruncationError` is raised instead of silently dropping terms.
    """
    if op == "add":
        floor = min(a.q_floor, b.q_floor)
        trunc = _min_trunc(a.q_trunc, b.q_trunc)
        if trunc is not None:
            for s in (a, b):
                if s.terms and trunc <= s.q_floor:
                    raise TruncationError(
                        f"adding a series known only below q^{trunc} would discard "
                        f"every term of an operand starting at q^{s.q_floor}")
        out = dict(a.terms)
        for k, c in b.terms.items():
            out[k] = out.get(k, 0) + c
    elif op == "mul":
        floor = a.q_floor + b.q_floor
        cand = []
        if a.q_trunc is not None:
            cand.append(a.q_trunc + b.q_floor)
        if b.q_trunc is not None:
            cand.append(b.q_trunc + a.q_floor)
        trunc = min(cand) if cand else None
        if trunc is not None and trunc <= floor:
            raise TruncationError("product has no determined coefficients")
        out = {}
        for (r1, s1), c1 in a.terms.items():
            if trunc is not None and r1 + b.q_floor >= trunc:
                continue
            for (r2, s2), c2 in b.terms.items():
                r = r1 + r2
                if trunc is not None and r >= trunc:
                    continue
                key = (r, s1 + s2)
                out[key] = out.get(key, 0) + c1 * c2
    else:
        raise ValueError(f"unknown op {op!r}")
    if scalar != 1:
        out = {k: scalar * c for k, c in out.items()}
    return QZSeries(out, floor, trunc)


def series_eval(s: QZSeries, p: EvalPoint) -> tuple[complex, float]:
    """Evaluate ``s`` at ``p``; also return a crude bound on the omitted tail.

    The bound is ``|q|^q_trunc * M / (1 - |q|)`` where ``M`` is the largest
    absolute level sum ``sum_s |c q^r zeta^s| / |q|^r`` over stored q-levels.
    """
    tau, z = complex(p.tau), complex(p.z)
    total = 0j
    level_max = 0.0
    for r, row in s.q_levels().items():
        qr = e(float(r) * tau)
        level = 0j
        mag = 0.0
        for zexp, c in row.items():
            term = c * e(float(zexp) * z)
            level += term
            mag += abs(term)
        total += qr * level
        level_max = max(level_max, mag)
    if s.q_trunc is None:
        return total, 0.0
    aq = abs(e(tau))
    tail = aq ** float(s.q_trunc) * level_max / (1.0 - aq)
    return total, tail


def dz_operator(s: QZSeries) -> QZSeries:
    """D_z = (2 pi i)^-1 d/dz, acting on zeta^m as multiplication by m."""
    return QZSeries({(r, zexp): zexp * c for (r, zexp), c in s.terms.items()},
                    s.q_floor, s.q_trunc)
