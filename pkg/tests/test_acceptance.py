"""Acceptance criteria, one test each.  Every test prints a
``PASS criterion N`` or ``FAIL criterion N`` line with the worst residual."""

import random

import pytest

from onepoint.coords import mode_sum_identity_check
from onepoint.fock import (ChargeShift, Mode, ZeroMode, apply_bracket_mode, enumerate_basis,
                           exp_bracket1, graded_trace, phi_fock, prop1_residual, schur_action)
from onepoint.involutions import count_partition_check, enumerate_involutions, lemma_c_check
from onepoint.modular import (ModularData, a_gamma, cocycle_residual, parse_gamma, random_word,
                              s4_residual, sample_tau, st3_residual, verify_corollary,
                              verify_prop_zero_modes, verify_section4, verify_theorem1,
                              verify_theorem1_expanded)
from onepoint.series import EvalPoint
from onepoint.special import check_Pk_transform
from onepoint.theta1pt import ALPHA, ONE, PairJK, phi

JK_GRID = [PairJK(0, 0), PairJK(0.3 + 0.1j, 0), PairJK(0, 0.2), PairJK(0.3 + 0.1j, 0.2)]


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        assert ok, detail
    return emit


def test_criterion_1_cross_oracle(verdict):
    worst = {12: 0.0, 16: 0.0}
    for j in range(4):
        for jk in JK_GRID:
            for v in (ONE, ALPHA):
                for tau in (1.0j, 0.6 + 1.2j):
                    ref = phi(j, v, jk, tau)
                    for depth in worst:
                        worst[depth] = max(worst[depth], abs(phi_fock(j, v, jk, tau, depth) - ref))
    ok = worst[12] < 1e-9 and worst[16] < 1e-11
    verdict(1, ok, f"closed form vs Fock trace, max err {worst[12]:.2e} at depth 12, "
                   f"{worst[16]:.2e} at depth 16")


PK_POINTS = {
    (0, -1, 1, 0): [(0.2 + 0.9j, -0.3 + 0.3j), (0.2 + 1.2j, -0.3 + 0.5j), (0.2 + 1.5j, -0.3 + 0.5j),
                    (0.2 + 1.5j, -0.3 + 0.9j), (0.4 + 0.9j, -0.3 + 0.5j)],
    (1, 1, 0, 1): [(-0.6 + 0.9j, -0.3 + 0.3j), (1.2j, 0.5j), (0.9j, 0.2 + 0.4j),
                   (0.2 + 1.5j, -0.3 + 0.7j), (0.4 + 0.9j, 0.3j)],
    (2, 1, 1, 1): [(-0.6 + 0.9j, -0.3 + 0.3j), (-0.3 + 0.9j, -0.3 + 0.3j), (-0.3 + 1.5j, 0.7j),
                   (1.2j, 0.7j), (0.2 + 0.9j, -0.3 + 0.3j)],
}


def test_criterion_2_pk_laws(verdict):
    worst = 0.0
    for gamma, points in PK_POINTS.items():
        for tau, z in points:
            for k in (1, 2, 3, 4):
                worst = max(worst, check_Pk_transform(k, gamma, EvalPoint(tau, z)).abs_err)
    verdict(2, worst < 1e-8, f"P_k transformation laws, max residual {worst:.2e}")


PROP1_CONFIGS = [
    (1.3j, [0.2j, 0.5j], 0.9j),
    (0.2 + 1.1j, [-0.3 + 0.2j, 0.1 + 0.4j], 0.3 + 0.8j),
    (-0.3 + 1.5j, [0.4 + 0.3j, -0.2 + 0.6j], 0.1 + 1.0j),
]


def test_criterion_3_current_insertion(verdict):
    w1 = w2 = 0.0
    for tau, zs, x in PROP1_CONFIGS:
        for v in (ONE, ALPHA):
            w1 = max(w1, prop1_residual(1, 0.3 + 0.1j, 0.2, zs[:1], (v, x), tau).abs_err)
        w2 = max(w2, prop1_residual(2, 0.3 + 0.1j, 0.2, zs, (ALPHA, x), tau).abs_err)
    verdict(3, w1 < 1e-8 and w2 < 1e-7,
            f"one current max residual {w1:.2e}, two currents {w2:.2e}")


def criterion_words():
    rng = random.Random(20241016)
    return [parse_gamma(w) for w in ("S", "T", "TS", "ST^-1S")] + [random_word(rng) for _ in range(10)]


def test_criterion_4_one_point_transform(verdict):
    worst = forms = 0.0
    for g in criterion_words():
        tau = sample_tau(g) + 0.05
        for j in range(4):
            for v in (ONE, ALPHA):
                for jk in JK_GRID:
                    worst = max(worst, verify_theorem1(g, j, v, jk, tau).abs_err)
                    ex = verify_theorem1_expanded(g, j, v, jk, tau)
                    worst = max(worst, ex.abs_err)
                    forms = max(forms, ex.aux["forms_err"])
    verdict(4, worst < 1e-8 and forms < 1e-10,
            f"14 words, max residual {worst:.2e}, single-exponential vs l-sum {forms:.2e}")


def test_criterion_5_twisted_transform(verdict):
    worst = 0.0
    for g in criterion_words():
        tau = sample_tau(g) + 0.05
        for j in range(4):
            for v in (ONE, ALPHA):
                for jk in JK_GRID:
                    worst = max(worst, verify_corollary(g, j, v, jk, tau).abs_err)
    verdict(5, worst < 1e-8, f"twisted functions, max residual {worst:.2e}")


THETA_SAMPLES = [(1.1j, 0.2 + 0.1j), (0.2 + 1.1j, 0.1 + 0.2j), (-0.4 + 0.9j, 0.3 - 0.1j),
                 (0.5 + 0.8j, -0.2 + 0.3j), (1.5j, 0.4 + 0.05j)]
HK = [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_criterion_6_theta_endpoints(verdict):
    worst = 0.0
    for which in ("S-prime", "T-prime", "S-theta"):
        for h, k in HK:
            for tau, z in THETA_SAMPLES:
                rep = verify_section4(h, k, which, tau, z)
                worst = max(worst, rep.abs_err, rep.aux["phi_form_err"],
                            rep.aux.get("theorem1_route_err", 0.0))
    verdict(6, worst < 1e-9, f"theta and theta' laws (derived forms), max residual {worst:.2e}")


@pytest.mark.xfail(strict=True, reason="printed theta multipliers disagree with the lattice data")
@pytest.mark.parametrize("which,h,k", [("S-theta", 1, 1), ("S-prime", 1, 1), ("T-prime", 1, 0),
                                       ("T-prime", 1, 1)])
def test_criterion_6_printed_forms(which, h, k):
    tau, z = THETA_SAMPLES[1]
    assert verify_section4(h, k, which, tau, z, form="printed").abs_err < 1e-9


@pytest.mark.xfail(strict=True, reason="printed S-matrix sign fails the S law")
def test_criterion_4_printed_smatrix():
    rep = verify_theorem1("S", 1, ALPHA, PairJK(), 1.0j, data=ModularData.printed())
    assert rep.abs_err < 1e-8


def test_criterion_7_exact_combinatorics(verdict):
    rng = random.Random(7)
    lemma = 0.0
    for n in range(2, 7):
        for s in enumerate_involutions(n):
            if not s.pairs:
                continue
            w = {p: complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for p in s.pairs}
            lhs, rhs = lemma_c_check(s, w)
            lemma = max(lemma, abs(lhs - rhs) / abs(rhs))
    counts_ok = all(cnt == f for s in range(9) for t in range(9 - s)
                    for cnt, f in count_partition_check(s, t).values())
    defects = [mode_sum_identity_check(wt, k, 12) for wt in (1, 2, 3) for k in range(-3, 5)]
    ok = lemma <= 1e-13 and counts_ok and all(d == 0 for d in defects)
    verdict(7, ok, f"decomposition sums rel err {lemma:.1e}, class counts exact={counts_ok}, "
                   f"mode-sum defects {sorted(set(defects))}")


def _close(a, b, tol):
    return all(abs(a.get(k, 0) - b.get(k, 0)) <= tol for k in set(a) | set(b))


def test_criterion_8_operator_identities(verdict):
    states = [s for j in range(4) for s in enumerate_basis(j, 6)]
    exp_ok = all(_close(exp_bracket1(s), schur_action(s), 1e-12) for s in states)
    comm_ok = True
    for s in states:
        for a in range(7):
            for b in range(a + 1, 7):
                ab = apply_bracket_mode(a, 1, apply_bracket_mode(b, 1, s))
                ba = apply_bracket_mode(b, 1, apply_bracket_mode(a, 1, s))
                comm_ok &= _close(ab, ba, 0)
    shifts = [graded_trace(j, [ChargeShift(d), ZeroMode(ALPHA), Mode(-1), Mode(1)], 0.9j)
              for j in range(4) for d in (0.5, 1, 2, -2)]
    shift_ok = all(t == 0 for t in shifts)
    verdict(8, exp_ok and comm_ok and shift_ok,
            f"{len(states)} states: exponential={exp_ok}, bracket commutation={comm_ok}, "
            f"charge-shift traces zero={shift_ok}")


ZM_POINTS = [("S", 1.0j, -0.3 + 0.3j), ("S", 0.3 + 1.1j, -0.3 + 0.3j), ("T", 0.1 + 1.0j, 0.4j)]


def test_criterion_9_zero_mode_products(verdict):
    worst = 0.0
    for n in (1, 2):
        for g, tau, x in ZM_POINTS:
            for j in range(4):
                for v in (ONE, ALPHA):
                    worst = max(worst, verify_prop_zero_modes(n, g, j, v, x, tau).abs_err)
    verdict(9, worst < 1e-7, f"zero-mode products under S and T, max residual {worst:.2e}")


def test_criterion_10_modular_data(verdict):
    rng = random.Random(10)
    s4 = s4_residual()
    st3 = st3_residual()
    coc = max(cocycle_residual(random_word(rng), random_word(rng)) for _ in range(20))
    verdict(10, s4 < 1e-12 and coc < 1e-12 and st3 < 1e-12,
            f"|S^4 - I| = {s4:.1e}, |(ST)^3 - S^2| = {st3:.1e}, cocycle over 20 pairs {coc:.1e}, "
            f"A^S_11 = {a_gamma('S')[1, 1]:.3f}")
