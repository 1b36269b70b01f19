"""Rank-one lattice Fock space: basis, oscillator modes and graded traces.

A basis state of M^j is e^{m alpha} tensored with alpha(-n_1)...alpha(-n_k)
applied to the vacuum, stored as ``FockBasisState(m, partition)``.  With
<alpha, alpha> = 1 the Heisenberg relations are [alpha(r), alpha(s)] = r delta_{r+s,0}.

Traces are computed from matrix elements.  Oscillator modes never change
the charge m, so for a word built from modes, zero modes, vertex factors and
diagonal exponentials of alpha(0) the trace factorises as

    sum_m  weight(m) q^{m^2/2 - 1/24}  sum_lambda q^{|lambda|} <lambda| W(m) |lambda>,

where W(m) is the oscillator part of the word with alpha(0) replaced by m.
The engine carries matrix elements as polynomials in m, so the oscillator
work is done once per partition rather than once per charge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import numpy as np

from .coords import bracket_coeffs, schur_polys
from .errors import DomainError, InputError
from .lattice import CHARGE_TOL, CENTRAL_CHARGE, coset_charges, sector_offset
from .report import TransformReport
from .series import EvalPoint, e
from .special import eval_Pk
from .theta1pt import InsertionVector, PairJK
from .involutions import enumerate_involutions

DEFAULT_DEPTH = 12
MODE_TOL = 1e-17
MAX_MODES = 200


@dataclass(frozen=True)
class SectorLabel:
    j: int

    def __post_init__(self):
        sector_offset(self.j)

    @property
    def offset(self) -> Fraction:
        return sector_offset(self.j)

    @property
    def min_weight(self) -> Fraction:
        d = min(abs(self.offset), abs(self.offset - 2))
        return d * d / 2


def _sector(s) -> SectorLabel:
    return s if isinstance(s, SectorLabel) else SectorLabel(int(s))


@dataclass(frozen=True)
class FockBasisState:
    m: Fraction
    partition: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "m", Fraction(self.m))
        parts = tuple(sorted((int(p) for p in self.partition), reverse=True))
        if any(p < 1 for p in parts):
            raise InputError("oscillator parts must be positive")
        object.__setattr__(self, "partition", parts)

    @property
    def degree(self) -> int:
        return sum(self.partition)

    @property
    def weight(self) -> Fraction:
        return self.m * self.m / 2 + self.degree


def vacuum(m=0) -> FockBasisState:
    return FockBasisState(Fraction(m), ())


@lru_cache(maxsize=None)
def partitions(n: int) -> tuple:
    """Partitions of n as non-increasing tuples."""
    if n == 0:
        return ((),)
    out = []

    def rec(rest, largest, prefix):
        if rest == 0:
            out.append(tuple(prefix))
            return
        for p in range(min(rest, largest), 0, -1):
            prefix.append(p)
            rec(rest - p, p, prefix)
            prefix.pop()

    rec(n, n, [])
    return tuple(out)


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    return len(partitions(n)) if n <= 40 else _partition_count_table(n)[n]


@lru_cache(maxsize=None)
def _partition_count_table(n: int) -> tuple:
    p = [1] + [0] * n
    for part in range(1, n + 1):
        for k in range(part, n + 1):
            p[k] += p[k - part]
    return tuple(p)


def enumerate_basis(sector, max_degree, charges=None) -> list[FockBasisState]:
    """States of M^j whose L(0)-weight exceeds the sector minimum by at most
    ``max_degree``.  Charges come from the weight bound itself unless an
    explicit list is given."""
    sec = _sector(sector)
    cap = sec.min_weight + Fraction(max_degree)
    if charges is None:
        r = int(math.isqrt(int(2 * cap) + 1)) + 2
        charges = [sec.offset + 2 * n for n in range(-r, r + 1)]
    out = []
    for m in sorted(charges, key=lambda x: (abs(x), x)):
        room = cap - Fraction(m) ** 2 / 2
        if room < 0:
            continue
        for d in range(int(math.floor(room)) + 1):
            out.extend(FockBasisState(m, lam) for lam in partitions(d))
    return out


# --- modes on partitions -----------------------------------------------------

@lru_cache(maxsize=200_000)
def _add_part(lam: tuple, n: int) -> tuple:
    return tuple(sorted(lam + (n,), reverse=True))


@lru_cache(maxsize=200_000)
def _remove_part(lam: tuple, n: int):
    """(factor, new partition) for alpha(n), n > 0, or None when it kills lam."""
    k = lam.count(n)
    if k == 0:
        return None
    i = lam.index(n)
    return n * k, lam[:i] + lam[i + 1:]


Vector = dict


def _as_vector(x) -> Vector:
    if isinstance(x, FockBasisState):
        return {x: 1}
    return dict(x)


def apply_mode(n: int, state) -> Vector:
    """alpha(n) on a basis state or a linear combination of them."""
    out: Vector = {}
    for s, c in _as_vector(state).items():
        if n == 0:
            if s.m != 0:
                out[s] = out.get(s, 0) + c * s.m
            continue
        if n < 0:
            t = FockBasisState(s.m, _add_part(s.partition, -n))
            out[t] = out.get(t, 0) + c
            continue
        hit = _remove_part(s.partition, n)
        if hit is not None:
            f, lam = hit
            t = FockBasisState(s.m, lam)
            out[t] = out.get(t, 0) + c * f
    return _clean(out)


def _clean(v: Vector) -> Vector:
    return {k: c for k, c in v.items() if c != 0}


def _vec_add(acc: Vector, v: Vector, scale=1) -> None:
    for k, c in v.items():
        acc[k] = acc.get(k, 0) + scale * c


def _max_degree(v: Vector) -> int:
    return max((s.degree for s in v), default=0)


def apply_bracket_mode(m: int, u_coeff, state) -> Vector:
    """(u_coeff alpha)[m] = m! sum_{i >= m} c(1, i, m) u_coeff alpha(i).

    Modes alpha(i) with i above the top degree of ``state`` act as zero, so
    the sum is cut there.
    """
    if m < 0:
        raise InputError("bracket mode index must be >= 0")
    vec = _as_vector(state)
    i_max = max(_max_degree(vec), m)
    row = bracket_coeffs(1, m, i_max)
    fact = math.factorial(m)
    out: Vector = {}
    for i in range(m, i_max + 1):
        c = row[i]
        if c == 0:
            continue
        _vec_add(out, apply_mode(i, vec), fact * float(c) * u_coeff)
    return _clean(out)


def exp_bracket1(state, coeff=1) -> Vector:
    """e^{coeff alpha[1]} as a terminating power series (alpha[1] lowers degree)."""
    vec = _as_vector(state)
    out = dict(vec)
    term = vec
    k = 1
    while term:
        term = apply_bracket_mode(1, coeff, term)
        term = {s: c / k for s, c in term.items()}
        _vec_add(out, term)
        k += 1
    return _clean(out)


def schur_action(state) -> Vector:
    """sum_s p_s(alpha(1), alpha(2), ...) applied to ``state``."""
    vec = _as_vector(state)
    top = _max_degree(vec)
    out: Vector = {}
    for poly in schur_polys(top):
        for mono, c in poly.items():
            w = vec
            for n in mono:
                w = apply_mode(n, w)
                if not w:
                    break
            _vec_add(out, w, float(c))
    return _clean(out)


# --- operator words ----------------------------------------------------------

@dataclass(frozen=True)
class Mode:
    """alpha(n)."""
    n: int


@dataclass(frozen=True)
class ChargeExp:
    """e^{2 pi i u alpha(0)} q^{w alpha(0)}; commutes with every alpha(n)."""
    u: complex = 0
    w: complex = 0


@dataclass(frozen=True)
class ZeroMode:
    """o(v) for v = a 1 + b alpha, i.e. a + b alpha(0)."""
    v: InsertionVector


@dataclass(frozen=True)
class Vertex:
    """Y(q_x^{L(0)} v, q_x) = a + b sum_n alpha(n) q_x^{-n} for v = a 1 + b alpha."""
    v: InsertionVector
    x: complex


@dataclass(frozen=True)
class ChargeShift:
    """Translation of the lattice charge by ``delta`` (e^{delta alpha} without oscillators)."""
    delta: Fraction


Factor = Union[Mode, ChargeExp, ZeroMode, Vertex, ChargeShift]


def check_ordering(word, tau: complex) -> None:
    """Vertex positions must satisfy 0 < Im x_1 < ... < Im x_r < Im tau,
    i.e. 1 > |q_{x_1}| > ... > |q_{x_r}| > |q| in word order."""
    ims = [complex(f.x).imag for f in word if isinstance(f, Vertex)]
    chain = [0.0] + ims + [complex(tau).imag]
    if any(a >= b for a, b in zip(chain, chain[1:])):
        raise DomainError(
            f"vertex positions with Im {ims} violate 0 < Im z_1 < ... < Im x < Im tau "
            f"(Im tau = {complex(tau).imag}); the mode expansion does not converge")


def auto_modes(word, tau: complex, tol: float = MODE_TOL) -> int:
    """Mode cutoff N for vertex factors so that the slowest geometric rate
    among vertex pairs, raised to N, is below ``tol``."""
    ims = [complex(f.x).imag for f in word if isinstance(f, Vertex)]
    # a lone vertex factor can only pair with explicit modes
    floor = max((abs(f.n) for f in word if isinstance(f, Mode)), default=0)
    if len(ims) < 2:
        return floor if ims else 0
    yt = complex(tau).imag
    rate = 0.0
    for i in range(len(ims)):
        for k in range(i + 1, len(ims)):
            gap = ims[k] - ims[i]
            rate = max(rate, math.exp(-2 * math.pi * gap), math.exp(-2 * math.pi * (yt - gap)))
    n = int(math.ceil(math.log(tol) / math.log(rate))) + 1
    return min(max(n, 1, floor), MAX_MODES)


def _poly_mul_m(c: np.ndarray) -> np.ndarray:
    out = np.zeros_like(c)
    out[1:] = c[:-1]
    return out


@lru_cache(maxsize=500_000)
def _multiset_distance(a: tuple, b: tuple) -> int:
    """Size of the symmetric difference of two partitions viewed as multisets."""
    i = j = common = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            common += 1
            i += 1
            j += 1
        elif a[i] > b[j]:
            i += 1
        else:
            j += 1
    return len(a) + len(b) - 2 * common


def _changes_partition(f) -> bool:
    return (isinstance(f, Mode) and f.n != 0) or (isinstance(f, Vertex) and f.v.b != 0)


def _apply_factor(f, vec: dict, modes: int, target: tuple, reach: int) -> dict:
    """Apply one factor to {partition: poly-in-m}, keeping only partitions that
    the remaining ``reach`` single-part moves can still turn back into ``target``."""
    out: dict = {}

    def put(lam, c):
        if _multiset_distance(lam, target) <= reach:
            if lam in out:
                out[lam] = out[lam] + c
            else:
                out[lam] = c

    if isinstance(f, (ChargeExp, ChargeShift)):
        return vec
    if isinstance(f, ZeroMode):
        a, b = f.v.a, f.v.b
        for lam, c in vec.items():
            put(lam, a * c + b * _poly_mul_m(c))
        return out
    if isinstance(f, Mode):
        n = f.n
        for lam, c in vec.items():
            if n == 0:
                put(lam, _poly_mul_m(c))
            elif n < 0:
                put(_add_part(lam, -n), c)
            else:
                hit = _remove_part(lam, n)
                if hit is not None:
                    put(hit[1], hit[0] * c)
        return out
    if isinstance(f, Vertex):
        a, b = f.v.a, f.v.b
        qx = e(complex(f.x))
        for lam, c in vec.items():
            if a != 0 or b != 0:
                put(lam, a * c + b * _poly_mul_m(c))
            if b == 0:
                continue
            for n in range(1, modes + 1):
                put(_add_part(lam, n), (b * qx ** n) * c)
                hit = _remove_part(lam, n)
                if hit is not None:
                    put(hit[1], (b * hit[0] * qx ** (-n)) * c)
        return out
    raise InputError(f"unknown word factor {f!r}")


def oscillator_matrix_element(word, lam: tuple, modes: int) -> np.ndarray:
    """<lambda| W(m) |lambda> as polynomial coefficients in m (index = power)."""
    n_poly = 1 + sum(1 for f in word if isinstance(f, (ZeroMode, Vertex))
                     or (isinstance(f, Mode) and f.n == 0))
    movers = [_changes_partition(f) for f in word]
    vec = {lam: np.eye(1, n_poly, 0, dtype=complex)[0]}
    for idx in range(len(word) - 1, -1, -1):
        vec = _apply_factor(word[idx], vec, modes, lam, sum(movers[:idx]))
        if not vec:
            return np.zeros(n_poly, dtype=complex)
    return vec.get(lam, np.zeros(n_poly, dtype=complex))


def _charge_data(word):
    u = sum((complex(f.u) for f in word if isinstance(f, ChargeExp)), 0j)
    w = sum((complex(f.w) for f in word if isinstance(f, ChargeExp)), 0j)
    shift = sum((Fraction(f.delta) for f in word if isinstance(f, ChargeShift)), Fraction(0))
    return u, w, shift


def graded_trace(sector, word, tau, depth: int = DEFAULT_DEPTH, charge_tol: float = CHARGE_TOL,
                 modes: int | None = None, return_tail: bool = False):
    """tr_{M^j} W q^{L(0) - c/24} over states with oscillator degree <= ``depth``.

    ``word`` is a sequence of factors acting right to left.  With
    ``return_tail`` the result is ``(value, tail_bound)``.
    """
    sec = _sector(sector)
    tau = complex(tau)
    EvalPoint(tau)
    word = list(word)
    check_ordering(word, tau)
    if modes is None:
        modes = auto_modes(word, tau)
    u, w, shift = _charge_data(word)
    if shift != 0:
        # every state is carried to a different charge: no diagonal entries
        return (0j, 0.0) if return_tail else 0j
    q = e(tau)
    levels = []
    diagonal = not any(_changes_partition(f) for f in word) or (
        modes == 0 and not any(isinstance(f, Mode) and f.n != 0 for f in word))
    if diagonal:
        # only alpha(0) acts: every partition gives the same polynomial in m
        me = oscillator_matrix_element(word, (), 0)
    for d in range(depth + 1):
        qd = q ** d
        if diagonal:
            levels.append(me * (partition_count(d) * qd))
            continue
        acc = None
        for lam in partitions(d):
            me_l = oscillator_matrix_element(word, lam, modes)
            acc = me_l if acc is None else acc + me_l
        levels.append(acc * qd)
    osc = sum(levels)
    ms = coset_charges(sec.j, tau, u, w, charge_tol)
    mf = np.array([float(m) for m in ms])
    weights = np.exp(2j * math.pi * (tau * (mf * mf / 2 + w * mf) + u * mf - tau * CENTRAL_CHARGE / 24))
    powers = np.vander(mf, len(osc), increasing=True)
    value = complex(weights @ (powers @ osc))
    if not return_tail:
        return value
    mags = [float(np.abs(weights) @ np.abs(powers @ lev)) for lev in levels]
    return value, _tail_estimate(mags, abs(q)) + MODE_TOL * max(mags)


def _tail_estimate(mags: list, aq: float) -> float:
    """Geometric extrapolation of the per-degree magnitudes beyond the last one.

    The ratio is the largest of |q| and the last two observed level ratios;
    an estimate, not a rigorous bound.
    """
    if len(mags) < 3:
        return math.inf if aq > 0 else 0.0
    ratios = [aq]
    for a, b in ((mags[-2], mags[-1]), (mags[-3], mags[-2])):
        if a > 0:
            ratios.append(b / a)
    rho = max(ratios)
    if rho >= 1:
        return math.inf
    return mags[-1] * rho / (1 - rho)


# --- one-point and n-point functions ----------------------------------------

def phi_fock(j: int, v: InsertionVector, jk: PairJK, tau, depth: int = DEFAULT_DEPTH,
             return_tail: bool = False):
    """Phi_j(v : (u alpha, w alpha), tau) as a first-principles Fock trace."""
    tau = complex(tau)
    pref = e(jk.u * jk.w / 2 + tau * jk.w * jk.w / 2)
    word = [ChargeExp(jk.u, jk.w), ZeroMode(v)]
    val, tail = graded_trace(j, word, tau, depth, return_tail=True)
    if return_tail:
        return pref * val, abs(pref) * tail
    return pref * val


def npoint_word(u, w, currents, top, zero_modes: int = 0):
    """psi o(alpha)^k Y(q_{z_1} alpha, q_{z_1}) ... Y(q_x v, q_x) with psi = e^{2 pi i u alpha(0)} q^{w alpha(0)}."""
    v, x = top
    word = [ChargeExp(u, w)]
    word += [ZeroMode(InsertionVector(0, 1))] * zero_modes
    word += [Vertex(InsertionVector(0, 1), z) for z in currents]
    word.append(Vertex(v, x))
    return word


def npoint_eval(sector, u, w, currents, top, tau, depth: int = DEFAULT_DEPTH,
                modes: int | None = None, return_tail: bool = False):
    """S^j(psi; z_1, ..., z_n, {v, x}, tau) with alpha currents at the z_i."""
    word = npoint_word(u, w, list(currents), top)
    return graded_trace(sector, word, tau, depth, modes=modes, return_tail=return_tail)


def phi_operator(v: InsertionVector, tau, x_s: complex) -> InsertionVector:
    """phi(alpha) v = P_1(tau, x_s) alpha[0] v + P_2(tau, x_s) alpha[1] v on span{1, alpha}.

    alpha[0] = alpha(0) kills both 1 and alpha; alpha[1] alpha = 1; higher
    alpha[m] vanish on this span.
    """
    p2 = eval_Pk(2, EvalPoint(tau, x_s))
    return InsertionVector(p2 * v.b, 0)


def prop1_rhs(sector, u, w, currents, top, tau, depth: int = DEFAULT_DEPTH) -> complex:
    """Sum over involutions and zero-mode subsets of the recursion's right side."""
    v, x = top
    tau = complex(tau)
    n = len(currents)
    z = list(currents)
    total = 0j
    for sigma in enumerate_involutions(n):
        coef = 1
        for a, b in sigma.pairs:
            # <alpha, alpha> P_2(tau, z_b - z_a) with a < b
            coef *= eval_Pk(2, EvalPoint(tau, z[b - 1] - z[a - 1]))
        fixed = sorted(sigma.fixed)
        for r in range(len(fixed) + 1):
            for mask in _subsets(fixed, r):
                rest = [s for s in fixed if s not in mask]
                vec = v
                for s in rest:
                    vec = phi_operator(vec, tau, x - z[s - 1])
                if vec.a == 0 and vec.b == 0:
                    continue
                word = [ChargeExp(u, w)] + [ZeroMode(InsertionVector(0, 1))] * len(mask)
                word.append(Vertex(vec, x))
                total += coef * graded_trace(sector, word, tau, depth)
    return total


def _subsets(items, r):
    from itertools import combinations
    return combinations(items, r)


def prop1_residual(sector, u, w, currents, top, tau, depth: int = DEFAULT_DEPTH,
                   modes: int | None = None, rerun_depth: int | None = None) -> TransformReport:
    """Both sides of the n-point recursion.  The left side is rerun at
    ``rerun_depth`` (default depth + 4; n-point traces get expensive quickly
    in the oscillator degree) and that difference is reported."""
    tau = complex(tau)
    if rerun_depth is None:
        rerun_depth = depth + 4
    lhs, tail = npoint_eval(sector, u, w, currents, top, tau, depth, modes, return_tail=True)
    rhs = prop1_rhs(sector, u, w, currents, top, tau, depth)
    lhs2 = npoint_eval(sector, u, w, currents, top, tau, rerun_depth, modes)
    v, x = top
    return TransformReport.build(
        gamma=None,
        params={"check": "prop1", "j": _sector(sector).j, "u": complex(u), "w": complex(w),
                "z": [complex(c) for c in currents], "v": [v.a, v.b], "x": complex(x),
                "tau": tau, "depth": depth, "rerun_depth": rerun_depth},
        lhs=lhs, rhs=rhs, depth_doubled_err=abs(lhs2 - lhs), tail_bound=tail)
