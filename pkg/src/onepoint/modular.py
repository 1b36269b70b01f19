"""SL2(Z) words, the modular data of V_{2Z alpha}, and transformation-law verifiers."""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field

import numpy as np

from . import fock
from .errors import DomainError, InputError
from .lattice import N_MODULES
from .report import TransformReport
from .series import EvalPoint, e
from .special import auto_depth, eval_eta, eval_theta, eval_theta_prime, sqrt_minus_i_tau
from .theta1pt import ALPHA, ONE, InsertionVector, PairJK, bracket_exp, phi, phi_ell, psi

GENERATORS = {
    "S": ((0, -1), (1, 0)),
    "T": ((1, 1), (0, 1)),
    "Ti": ((1, -1), (0, 1)),
}


def _matmul(x, y):
    (a, b), (c, d) = x
    (p, q), (r, s) = y
    return ((a * p + b * r, a * q + b * s), (c * p + d * r, c * q + d * s))


def word_matrix(word) -> tuple:
    m = ((1, 0), (0, 1))
    for g in word:
        m = _matmul(m, GENERATORS[g])
    return m


@dataclass(frozen=True)
class SL2Word:
    """A matrix (a, b; c, d) of determinant one and a word over S, T, T^-1
    whose ordered product is exactly that matrix.  When the reduction ends on
    -T^k the sign is written as S^2 and ``sign_absorbed`` is set."""

    matrix: tuple
    word: tuple = ()
    sign_absorbed: bool = False

    def __post_init__(self):
        a, b, c, d = (int(x) for x in self.matrix)
        if a * d - b * c != 1:
            raise InputError(f"({a},{b};{c},{d}) has determinant {a * d - b * c}, not 1")
        object.__setattr__(self, "matrix", (a, b, c, d))
        if (word_matrix(self.word)[0] + word_matrix(self.word)[1]) != (a, b, c, d):
            raise InputError(f"word {self.word} does not multiply to {self.matrix}")

    @classmethod
    def from_matrix(cls, matrix) -> "SL2Word":
        return decompose(matrix)

    @classmethod
    def from_word(cls, word) -> "SL2Word":
        word = tuple(word)
        m = word_matrix(word)
        return cls(m[0] + m[1], word)

    @property
    def a(self):
        return self.matrix[0]

    @property
    def b(self):
        return self.matrix[1]

    @property
    def c(self):
        return self.matrix[2]

    @property
    def d(self):
        return self.matrix[3]

    def act(self, tau: complex) -> complex:
        a, b, c, d = self.matrix
        return (a * tau + b) / (c * tau + d)

    def j_factor(self, tau: complex) -> complex:
        return self.c * tau + self.d

    def __mul__(self, other: "SL2Word") -> "SL2Word":
        a, b, c, d = self.matrix
        p, q, r, s = other.matrix
        return decompose((a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s))

    def label(self) -> str:
        return ",".join(str(x) for x in self.matrix)

    def to_dict(self) -> dict:
        return {"matrix": list(self.matrix), "word": list(self.word),
                "sign_absorbed": self.sign_absorbed}


def decompose(matrix) -> SL2Word:
    """Euclidean reduction on the bottom row.

    While c != 0 write gamma = T^k S gamma' with gamma' = S^-1 T^-k gamma,
    choosing k so the new bottom-left entry is smaller in size.  The loop
    ends at +-T^b; -T^b is emitted as S, S, T^-b.
    """
    if isinstance(matrix, SL2Word):
        return matrix
    a, b, c, d = (int(x) for x in matrix)
    if a * d - b * c != 1:
        raise InputError(f"({a},{b};{c},{d}) has determinant {a * d - b * c}, not 1")
    orig = (a, b, c, d)
    word: list[str] = []
    while c != 0:
        k = a // c
        a, b = a - k * c, b - k * d
        word += ["T" if k > 0 else "Ti"] * abs(k)
        word.append("S")
        # S^-1 (a, b; c, d) = (c, d; -a, -b)
        a, b, c, d = c, d, -a, -b
    sign = a == -1
    if sign:
        word += ["S", "S"]
        b = -b
    word += ["T" if b > 0 else "Ti"] * abs(b)
    return SL2Word(orig, tuple(word), sign)


S_GAMMA = SL2Word((0, -1, 1, 0), ("S",))
T_GAMMA = SL2Word((1, 1, 0, 1), ("T",))


def parse_gamma(spec) -> SL2Word:
    """'S', 'T', 'TS', 'ST^-1S' style words or 'a,b,c,d' matrices."""
    if isinstance(spec, SL2Word):
        return spec
    if isinstance(spec, (tuple, list)):
        return decompose(spec)
    text = str(spec).replace(" ", "")
    if "," in text:
        parts = text.split(",")
        if len(parts) != 4:
            raise InputError(f"gamma needs four entries, got {text!r}")
        return decompose(tuple(int(p) for p in parts))
    word = []
    i = 0
    while i < len(text):
        g = text[i]
        if g not in "ST":
            raise InputError(f"cannot read generator word {text!r}")
        if g == "T" and text.startswith("T^-1", i):
            word.append("Ti")
            i += 4
            continue
        word.append(g)
        i += 1
    return SL2Word.from_word(word)


def random_word(rng: random.Random, max_len: int = 6) -> SL2Word:
    n = rng.randint(1, max_len)
    return SL2Word.from_word(rng.choice(("S", "T", "Ti")) for _ in range(n))


def sample_tau(gamma: SL2Word) -> complex:
    """A point where tau and gamma tau have equal imaginary part: -d/c + i/|c|,
    or 0.1 + i when c = 0."""
    c, d = gamma.c, gamma.d
    if c == 0:
        return 0.1 + 1.0j
    return complex(-d / c, 1 / abs(c))


@dataclass(frozen=True)
class ModularData:
    S: np.ndarray = field(repr=False)
    T: np.ndarray = field(repr=False)
    name: str = "lattice"

    @classmethod
    def lattice(cls) -> "ModularData":
        """S_hj = e^{-pi i h j / 2} / 2 and T_hh = e^{pi i h^2/4 - pi i/12}."""
        h = np.arange(N_MODULES)
        S = 0.5 * np.exp(-1j * math.pi * np.outer(h, h) / 2)
        T = np.diag(np.exp(1j * math.pi * h * h / 4 - 1j * math.pi / 12))
        return cls(S, T, "lattice")

    @classmethod
    def printed(cls) -> "ModularData":
        """Same T, with the opposite sign in the S exponent (e^{+pi i h j/2} / 2)."""
        base = cls.lattice()
        return cls(base.S.conj(), base.T, "printed")

    def generator(self, g: str) -> np.ndarray:
        if g == "S":
            return self.S
        if g == "T":
            return self.T
        if g == "Ti":
            return self.T.conj()
        raise InputError(f"unknown generator {g!r}")


LATTICE = ModularData.lattice()


def a_gamma(gamma, data: ModularData = LATTICE) -> np.ndarray:
    """A^gamma as the ordered product of generator matrices along the word."""
    g = parse_gamma(gamma)
    out = np.eye(N_MODULES, dtype=complex)
    for x in g.word:
        out = out @ data.generator(x)
    return out


def s4_residual(data: ModularData = LATTICE) -> float:
    return float(np.abs(np.linalg.matrix_power(data.S, 4) - np.eye(N_MODULES)).max())


def st3_residual(data: ModularData = LATTICE) -> float:
    """max |((ST)^3 - S^2)_{ij}|."""
    st = data.S @ data.T
    return float(np.abs(np.linalg.matrix_power(st, 3) - data.S @ data.S).max())


def cocycle_residual(g1, g2, data: ModularData = LATTICE) -> float:
    """max |A^{g1 g2} - A^{g1} A^{g2}| with every A built from its own reduction."""
    g1, g2 = decompose(parse_gamma(g1).matrix), decompose(parse_gamma(g2).matrix)
    prod = g1 * g2
    return float(np.abs(a_gamma(prod, data) - a_gamma(g1, data) @ a_gamma(g2, data)).max())


# --- one-point transformation laws ----------------------------------------

def _closed_depth(tau_list, depth, tol):
    """Eta cutoff certified at every point; raise when a given one is not."""
    worst = max(abs(e(complex(t))) for t in tau_list)
    if depth is None:
        return auto_depth(complex(0, -math.log(worst) / (2 * math.pi)), tol=min(tol, 1e-18))
    if worst ** (depth + 1) / (1 - worst) > tol:
        raise DomainError(
            f"depth {depth} leaves an eta tail near {worst ** (depth + 1):.1e} at |q| = {worst:.3f}; "
            f"raise --depth or pick tau with larger imaginary part")
    return depth


def _phi_backend(backend):
    if backend == "closed":
        return lambda j, v, jk, tau, depth: phi(j, v, jk, tau, depth)
    if backend == "fock":
        return lambda j, v, jk, tau, depth: fock.phi_fock(j, v, jk, tau, depth or fock.DEFAULT_DEPTH)
    raise InputError(f"unknown backend {backend!r}")


def _eq5_rhs(g, j, v, jk, tau, depth, data, ph):
    gt = g.act(tau)
    jf = g.j_factor(tau)
    c1 = g.c * jk.u + gt * g.c * jk.w
    new = jk.transformed(g.matrix)
    A = a_gamma(g, data)
    total = 0j
    for wt, part in v.homogeneous_parts():
        moved = bracket_exp(part, c1)
        total += jf ** wt * sum(A[j, k] * ph(k, moved, new, tau, depth) for k in range(N_MODULES))
    return total


def _eq6_rhs(g, j, v, jk, tau, depth, data):
    jf = g.j_factor(tau)
    new = jk.transformed(g.matrix)
    A = a_gamma(g, data)
    total = 0j
    for wt, part in v.homogeneous_parts():
        inner = 0j
        for k in range(N_MODULES):
            s = sum(phi_ell(k, ell, part, new, tau, depth) * (g.c / jf) ** ell for ell in range(wt + 1))
            inner += A[j, k] * s
        total += jf ** wt * inner
    return total


def _params(check, g, j, v, jk, tau, depth, **extra):
    out = {"check": check, "j": j, "v": [complex(v.a), complex(v.b)], "u": complex(jk.u),
           "w": complex(jk.w), "tau": complex(tau), "depth": depth}
    out.update(extra)
    return out


def verify_theorem1(gamma, j: int, v: InsertionVector, jk: PairJK, tau, depth: int | None = None,
                    data: ModularData = LATTICE, backend: str = "closed",
                    tol: float = 1e-8) -> TransformReport:
    """Phi_j(v, gamma tau) against (c tau + d)^{wt} sum_k A_jk Phi_k(e^{c1 alpha[1]} v, tau).

    ``depth`` is the number of eta factors for the closed form and the
    oscillator degree for the Fock backend.
    """
    g = parse_gamma(gamma)
    tau = complex(tau)
    EvalPoint(tau)
    gt = g.act(tau)
    if backend == "closed":
        depth = _closed_depth([tau, gt], depth, tol)
    elif depth is None:
        depth = fock.DEFAULT_DEPTH
    ph = _phi_backend(backend)

    def sides(dp):
        return ph(j, v, jk, gt, dp), _eq5_rhs(g, j, v, jk, tau, dp, data, ph)

    lhs, rhs = sides(depth)
    lhs2, rhs2 = sides(2 * depth if backend == "closed" else depth + 4)
    aq = max(abs(e(tau)), abs(e(gt)))
    return TransformReport.build(
        gamma=g, params=_params("theorem1", g, j, v, jk, tau, depth, backend=backend, data=data.name),
        lhs=lhs, rhs=rhs, depth_doubled_err=abs(lhs2 - rhs2),
        tail_bound=max(abs(lhs), abs(rhs)) * aq ** (depth + 1) / (1 - aq))


def verify_theorem1_expanded(gamma, j: int, v: InsertionVector, jk: PairJK, tau,
                             depth: int | None = None, data: ModularData = LATTICE,
                             tol: float = 1e-8) -> TransformReport:
    """The l-sum form with Phi_{k,l} and (c/(c tau + d))^l weights.  ``aux``
    holds the single-exponential right side and its distance from this one."""
    g = parse_gamma(gamma)
    tau = complex(tau)
    gt = g.act(tau)
    depth = _closed_depth([tau, gt], depth, tol)
    ph = _phi_backend("closed")
    lhs = phi(j, v, jk, gt, depth)
    rhs = _eq6_rhs(g, j, v, jk, tau, depth, data)
    rhs5 = _eq5_rhs(g, j, v, jk, tau, depth, data, ph)
    lhs2 = phi(j, v, jk, gt, 2 * depth)
    rhs2 = _eq6_rhs(g, j, v, jk, tau, 2 * depth, data)
    aq = max(abs(e(tau)), abs(e(gt)))
    return TransformReport.build(
        gamma=g, params=_params("theorem1-expanded", g, j, v, jk, tau, depth, data=data.name),
        lhs=lhs, rhs=rhs, depth_doubled_err=abs(lhs2 - rhs2),
        tail_bound=max(abs(lhs), abs(rhs)) * aq ** (depth + 1) / (1 - aq),
        aux={"rhs_single_exponential": rhs5, "forms_err": abs(rhs - rhs5)})


def verify_corollary(gamma, j: int, v: InsertionVector, jk: PairJK, tau, depth: int | None = None,
                     data: ModularData = LATTICE, tol: float = 1e-8) -> TransformReport:
    """Psi_j(v, gamma tau) against (c tau + d)^{wt} sum_k A_jk Psi_k(v : (bK+dJ, aK+cJ), tau)."""
    g = parse_gamma(gamma)
    tau = complex(tau)
    gt = g.act(tau)
    depth = _closed_depth([tau, gt], depth, tol)
    A = a_gamma(g, data)
    new = jk.transformed(g.matrix)
    jf = g.j_factor(tau)

    def sides(dp):
        lhs = psi(j, v, jk, gt, dp)
        rhs = 0j
        for wt, part in v.homogeneous_parts():
            rhs += jf ** wt * sum(A[j, k] * psi(k, part, new, tau, dp) for k in range(N_MODULES))
        return lhs, rhs

    lhs, rhs = sides(depth)
    lhs2, rhs2 = sides(2 * depth)
    aq = max(abs(e(tau)), abs(e(gt)))
    return TransformReport.build(
        gamma=g, params=_params("corollary", g, j, v, jk, tau, depth, data=data.name),
        lhs=lhs, rhs=rhs, depth_doubled_err=abs(lhs2 - rhs2),
        tail_bound=max(abs(lhs), abs(rhs)) * aq ** (depth + 1) / (1 - aq))


# --- zero-mode products -----------------------------------------------------

def _zero_mode_trace(k, n_zero, scale, v, x, tau, depth):
    word = [fock.ZeroMode(ALPHA)] * n_zero + [fock.Vertex(v, x)]
    return scale * fock.graded_trace(k, word, tau, depth)


def prop_zero_modes_rhs(n: int, g: SL2Word, j: int, v: InsertionVector, x, tau, depth: int,
                        data: ModularData = LATTICE) -> complex:
    from itertools import combinations

    from .involutions import enumerate_involutions
    jf = g.j_factor(tau)
    c = g.c
    A = a_gamma(g, data)
    total = 0j
    for wt, part in v.homogeneous_parts():
        inner = 0j
        for k in range(N_MODULES):
            if A[j, k] == 0:
                continue
            acc = 0j
            for sigma in enumerate_involutions(n):
                pair_coef = (c * jf / (2j * math.pi)) ** len(sigma.pairs)
                fixed = sorted(sigma.fixed)
                for r in range(len(fixed) + 1):
                    for U in combinations(fixed, r):
                        vec = part
                        for _ in range(len(fixed) - r):
                            # (c / 2 pi i) alpha[1]: alpha -> 1, 1 -> 0
                            vec = InsertionVector(c / (2j * math.pi) * vec.b, 0)
                        if vec.a == 0 and vec.b == 0:
                            continue
                        acc += pair_coef * _zero_mode_trace(k, r, jf ** r, vec, x, tau, depth)
            inner += A[j, k] * acc
        total += jf ** wt * inner
    return total


def verify_prop_zero_modes(n: int, gamma, j: int, v: InsertionVector, x, tau,
                           depth: int = fock.DEFAULT_DEPTH,
                           data: ModularData = LATTICE) -> TransformReport:
    """tr o(alpha)^n Y(v, x/(c tau + d)) at gamma tau against the involution sum at tau.

    The vertex point must satisfy 0 < Im x < Im tau at tau and the same for
    x/(c tau + d) at gamma tau.
    """
    if n not in (1, 2):
        raise InputError("n must be 1 or 2")
    g = parse_gamma(gamma)
    tau = complex(tau)
    gt = g.act(tau)
    jf = g.j_factor(tau)

    def sides(dp):
        lhs = fock.graded_trace(j, [fock.ZeroMode(ALPHA)] * n + [fock.Vertex(v, x / jf)], gt, dp)
        rhs = prop_zero_modes_rhs(n, g, j, v, x, tau, dp, data)
        return lhs, rhs

    lhs, rhs = sides(depth)
    lhs2, rhs2 = sides(2 * depth)
    _, tail = fock.graded_trace(j, [fock.ZeroMode(ALPHA)] * n + [fock.Vertex(v, x / jf)], gt, depth,
                                return_tail=True)
    return TransformReport.build(
        gamma=g, params={"check": "prop-zero-modes", "n": n, "j": j, "v": [complex(v.a), complex(v.b)],
                         "x": complex(x), "tau": tau, "depth": depth, "data": data.name},
        lhs=lhs, rhs=rhs, depth_doubled_err=abs(lhs2 - rhs2), tail_bound=tail)


# --- Jacobi theta endpoints -------------------------------------------------

SECTION4_CHECKS = ("S-prime", "T-prime", "S-theta")


def _theta_pair_phi(h, k, vec, u, tau, depth):
    """eta i^{hk} (Phi_h + (-1)^k Phi_{2+h}) at insertion ``vec`` and (J, K) = (u alpha, 0)."""
    jk = PairJK(u, 0)
    s = phi(h, vec, jk, tau, depth) + (-1) ** k * phi(2 + h, vec, jk, tau, depth)
    return eval_eta(tau, depth) * (1j ** (h * k)) * s


def verify_section4(h: int, k: int, which: str, tau, z, depth: int | None = None,
                    form: str = "derived", data: ModularData = LATTICE) -> TransformReport:
    """Theta and theta-prime transformation laws.

    ``form="derived"`` uses the laws that follow from the lattice modular
    data: theta S multiplier (-i)^{hk}, theta' S law with the same root of
    unity, theta'_{1k}(tau+1) = e^{pi i/4} theta'_{1k}.  ``form="printed"``
    uses the commonly printed variants (multiplier i^{hk}, no root of unity
    in the theta' S law, theta'_{1k}(tau+1) = (theta'_{11} + (-1)^k theta'_{10}) / sqrt 2).
    ``aux`` records how the theta-prime left side compares with its
    one-point-function expression and, for S-prime, with the route through
    the S transformation of one-point functions.
    """
    if h not in (0, 1) or k not in (0, 1):
        raise InputError("h and k must be 0 or 1")
    if which not in SECTION4_CHECKS:
        raise InputError(f"which must be one of {SECTION4_CHECKS}")
    if form not in ("derived", "printed"):
        raise InputError("form must be 'derived' or 'printed'")
    tau, z = complex(tau), complex(z)
    EvalPoint(tau)
    printed = form == "printed"
    aux = {}
    if depth is None:
        depth = auto_depth(complex(0, min(tau.imag, (-1 / tau).imag, 1.0)))
    if which in ("S-theta", "S-prime"):
        st, sz = -1 / tau, z / tau
        root = sqrt_minus_i_tau(tau)
        gauss = cmath.exp(1j * math.pi * z * z / tau)
        mult = 1 if (printed and which == "S-prime") else ((1j if printed else -1j) ** (h * k))
        if which == "S-theta":
            lhs = eval_theta(h, k, EvalPoint(st, sz))
            rhs = mult * root * gauss * eval_theta(k, h, EvalPoint(tau, z))
            aux["phi_form_err"] = abs(lhs - _theta_pair_phi(h, k, ONE, sz, st, depth))
        else:
            lhs = eval_theta_prime(h, k, EvalPoint(st, sz))
            rhs = mult * tau * root * gauss * (eval_theta_prime(k, h, EvalPoint(tau, z))
                                               + sz * eval_theta(k, h, EvalPoint(tau, z)))
            aux["phi_form_err"] = abs(lhs - _theta_pair_phi(h, k, ALPHA, sz, st, depth))
            # S law of one-point functions: J = (z/tau) alpha, K = 0 at -1/tau
            moved = InsertionVector(sz, 1)
            route = 0j
            for jj in range(N_MODULES):
                coef = data.S[h, jj] + (-1) ** k * data.S[2 + h, jj]
                route += coef * phi(jj, moved, PairJK(0, sz), tau, depth)
            route *= (1j ** (h * k)) * root * tau * eval_eta(tau, depth)
            aux["theorem1_route_err"] = abs(lhs - route)
    else:
        lhs = eval_theta_prime(h, k, EvalPoint(tau + 1, z))
        if h == 0:
            rhs = eval_theta_prime(0, 1 - k, EvalPoint(tau, z))
        elif printed:
            rhs = (math.sqrt(2) / 2) * (eval_theta_prime(1, 1, EvalPoint(tau, z))
                                        + (-1) ** k * eval_theta_prime(1, 0, EvalPoint(tau, z)))
        else:
            rhs = cmath.exp(1j * math.pi / 4) * eval_theta_prime(1, k, EvalPoint(tau, z))
        aux["phi_form_err"] = abs(lhs - _theta_pair_phi(h, k, ALPHA, z, tau + 1, depth))
    return TransformReport.build(
        gamma=S_GAMMA if which != "T-prime" else T_GAMMA,
        params={"check": "section4", "which": which, "h": h, "k": k, "tau": tau, "z": z,
                "form": form, "depth": depth},
        lhs=lhs, rhs=rhs, aux=aux)
