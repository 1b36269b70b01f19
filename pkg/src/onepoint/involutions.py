"""Involutions of {1..n}: enumeration, the alternating decomposition identity,
and the class counts used when expanding exponentials of zero modes."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError

MAX_ENUMERATION = 12


@dataclass(frozen=True)
class Involution:
    n: int
    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        pairs = tuple(sorted(tuple(sorted(p)) for p in self.pairs))
        seen = [x for p in pairs for x in p]
        if len(seen) != len(set(seen)):
            raise InputError(f"transpositions {pairs} are not disjoint")
        if any(not 1 <= x <= self.n for x in seen):
            raise InputError(f"transpositions {pairs} leave {{1..{self.n}}}")
        object.__setattr__(self, "pairs", pairs)

    def __call__(self, i: int) -> int:
        for a, b in self.pairs:
            if i == a:
                return b
            if i == b:
                return a
        return i

    @property
    def moved(self) -> frozenset[int]:
        return frozenset(x for p in self.pairs for x in p)

    @property
    def fixed(self) -> frozenset[int]:
        return frozenset(range(1, self.n + 1)) - self.moved

    def is_identity(self) -> bool:
        return not self.pairs

    def __add__(self, other: "Involution") -> "Involution":
        """Disjoint sum: the involution whose transpositions are those of both."""
        if self.moved & other.moved:
            raise InputError("summands must have disjoint moved sets")
        return Involution(max(self.n, other.n), self.pairs + other.pairs)


def _pairings(items: list[int]):
    """All partial matchings of ``items`` (each element paired or left fixed)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for m in _pairings(rest):
        yield m
    for i, partner in enumerate(rest):
        for m in _pairings(rest[:i] + rest[i + 1:]):
            yield [(first, partner)] + m


def enumerate_involutions(n: int, elements=None) -> list[Involution]:
    """Every sigma with sigma^2 = 1 on {1..n} (or on ``elements``), each once."""
    if n > MAX_ENUMERATION:
        raise MemoryError(f"refusing to enumerate I({n}); limit is {MAX_ENUMERATION}")
    items = sorted(elements) if elements is not None else list(range(1, n + 1))
    return [Involution(n, tuple(m)) for m in _pairings(items)]


def telephone(n: int) -> int:
    """|I(n)| via t(n) = t(n-1) + (n-1) t(n-2)."""
    a, b = 1, 1
    for k in range(2, n + 1):
        a, b = b, b + (k - 1) * a
    return b if n >= 1 else 1


def involution_weight(sigma: Involution, weights) -> complex:
    """E_sigma = product of the per-transposition weights."""
    out = 1
    for p in sigma.pairs:
        try:
            out *= weights[p]
        except KeyError:
            raise InputError(f"no weight supplied for transposition {p}") from None
    return out


def ordered_decompositions(sigma: Involution):
    """Ordered tuples (sigma_1, ..., sigma_t) of non-identity involutions with
    disjoint moved sets whose transpositions together are those of ``sigma``."""
    pairs = list(sigma.pairs)
    p = len(pairs)
    for t in range(1, p + 1):
        # surjections pairs -> blocks 0..t-1 give ordered set partitions
        for labels in itertools.product(range(t), repeat=p):
            if len(set(labels)) != t:
                continue
            blocks = [[] for _ in range(t)]
            for pair, lab in zip(pairs, labels):
                blocks[lab].append(pair)
            yield tuple(Involution(sigma.n, tuple(b)) for b in blocks)


def lemma_c_check(sigma: Involution, weights) -> tuple[complex, complex]:
    """Both sides of sum_{sigma_1+...+sigma_t = sigma} (-1)^t prod E = (-1)^p E_sigma."""
    p = len(sigma.pairs)
    if p < 1:
        raise InputError("identity has no decompositions")
    lhs = 0
    for dec in ordered_decompositions(sigma):
        term = (-1) ** len(dec)
        for part in dec:
            term *= involution_weight(part, weights)
        lhs += term
    rhs = (-1) ** p * involution_weight(sigma, weights)
    return lhs, rhs


def zero_mode_class(sigma: Involution, s: int) -> tuple[int, int, int, int, int]:
    """(p, q, r, m1, m2): pairs inside {1..s}, pairs inside {s+1..n},
    crossing pairs, fixed points <= s, fixed points > s."""
    p = q = r = 0
    for a, b in sigma.pairs:
        if b <= s:
            p += 1
        elif a > s:
            q += 1
        else:
            r += 1
    m1 = sum(1 for i in sigma.fixed if i <= s)
    m2 = len(sigma.fixed) - m1
    return p, q, r, m1, m2


def class_count_formula(p: int, q: int, r: int, m1: int, m2: int) -> Fraction:
    num = math.factorial(2 * p + r + m1) * math.factorial(2 * q + r + m2)
    den = (math.factorial(m1) * math.factorial(m2) * math.factorial(r)
           * math.factorial(p) * math.factorial(q) * 2 ** (p + q))
    return Fraction(num, den)


def count_partition_check(s: int, t: int) -> dict[tuple, tuple[int, Fraction]]:
    """Map each admissible class (p, q, r, m1, m2) to (enumerated count, closed formula)."""
    if s + t > 10:
        raise MemoryError("s + t must be <= 10")
    n = s + t
    counts = Counter(zero_mode_class(sig, s) for sig in enumerate_involutions(n))
    table = {}
    for r in range(min(s, t) + 1):
        for p in range((s - r) // 2 + 1):
            for q in range((t - r) // 2 + 1):
                key = (p, q, r, s - 2 * p - r, t - 2 * q - r)
                table[key] = (counts.get(key, 0), class_count_formula(*key))
    stray = set(counts) - set(table)
    if stray:
        raise AssertionError(f"enumerated classes outside the admissible set: {stray}")
    return table
