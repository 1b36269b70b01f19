from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from onepoint.errors import DomainError
from onepoint.fock import (ChargeExp, ChargeShift, FockBasisState, Mode, SectorLabel, Vertex,
                           ZeroMode, apply_bracket_mode, apply_mode, enumerate_basis,
                           exp_bracket1, graded_trace, npoint_eval, partition_count, phi_fock,
                           prop1_residual, schur_action, vacuum)
from onepoint.theta1pt import ALPHA, ONE, InsertionVector, PairJK, phi

VAC = vacuum()


def states_upto(deg, m=0):
    return enumerate_basis(0, deg, charges=[Fraction(m)])


def vec_close(a, b, tol=1e-12):
    keys = set(a) | set(b)
    return all(abs(a.get(k, 0) - b.get(k, 0)) <= tol for k in keys)


def test_basis_degree_zero():
    assert enumerate_basis(0, 0) == [VAC]


def test_basis_degree_two():
    states = enumerate_basis(0, 2)
    at_two = [s for s in states if s.weight == 2]
    assert len(at_two) == 4
    assert {s.partition for s in at_two if s.m == 0} == {(2,), (1, 1)}
    assert {s.m for s in at_two if s.partition == ()} == {2, -2}


def test_sector_one_minimal_weight():
    assert SectorLabel(1).min_weight == Fraction(1, 8)
    lowest = enumerate_basis(1, 0)
    assert [s.m for s in lowest] == [Fraction(1, 2)]
    assert {s.m for s in enumerate_basis(3, 0)} == {Fraction(-1, 2)}


def test_basis_counts_match_character():
    # number of sector-0 states at degree d = sum over charges of p(d - m^2/2)
    states = enumerate_basis(0, 8)
    for d in range(9):
        want = sum(partition_count(d - 2 * n * n) for n in range(-3, 4) if d - 2 * n * n >= 0)
        assert sum(1 for s in states if s.weight == d) == want


def test_heisenberg_one_minus_one():
    assert apply_mode(1, apply_mode(-1, VAC)) == {VAC: 1}


def test_zero_mode_is_charge():
    s = FockBasisState(Fraction(1, 2), (3,))
    assert apply_mode(0, s) == {s: Fraction(1, 2)}


def test_annihilation_factor():
    assert apply_mode(2, FockBasisState(0, (2, 2))) == {FockBasisState(0, (2,)): 4}


@given(st.integers(-4, 4), st.integers(-4, 4))
def test_heisenberg_relations(m, n):
    for s in states_upto(5, m=Fraction(1, 2)):
        ab = apply_mode(m, apply_mode(n, s))
        ba = apply_mode(n, apply_mode(m, s))
        comm = {k: ab.get(k, 0) - ba.get(k, 0) for k in set(ab) | set(ba)}
        want = {s: m} if (m + n == 0 and m != 0) else {}
        assert vec_close({k: c for k, c in comm.items() if c != 0}, want)


def test_bracket_zero_is_zero_mode():
    s = FockBasisState(Fraction(3, 2), (2, 1))
    assert apply_bracket_mode(0, 1, s) == apply_mode(0, s)


def test_bracket_one_on_alpha():
    assert vec_close(apply_bracket_mode(1, 1, FockBasisState(0, (1,))), {VAC: 1})


def test_exp_bracket_on_alpha():
    a = FockBasisState(0, (1,))
    want = {VAC: 1, a: 1}
    assert vec_close(exp_bracket1(a), want)
    assert vec_close(schur_action(a), want)


def test_exp_bracket_equals_schur_sum():
    for s in states_upto(6):
        assert vec_close(exp_bracket1(s), schur_action(s))


@pytest.mark.parametrize("s_idx", range(4))
@pytest.mark.parametrize("t_idx", range(4))
def test_bracket_modes_commute(s_idx, t_idx):
    for st_ in states_upto(6, m=1):
        ab = apply_bracket_mode(s_idx, 1, apply_bracket_mode(t_idx, 1, st_))
        ba = apply_bracket_mode(t_idx, 1, apply_bracket_mode(s_idx, 1, st_))
        assert ab.keys() == ba.keys() and vec_close(ab, ba, 0)


def test_empty_trace_is_character():
    tau = 0.2 + 0.9j
    got = graded_trace(0, [], tau)
    assert abs(got - phi(0, ONE, PairJK(), tau)) < 1e-12


def test_charge_shift_trace_vanishes():
    for j in range(4):
        assert graded_trace(j, [ChargeShift(Fraction(2)), ZeroMode(ALPHA)], 1j) == 0
        assert graded_trace(j, [ChargeShift(Fraction(1, 2)), Mode(-1), Mode(1)], 1j) == 0


def test_charge_exponential_trace_cross_oracle():
    tau, u = 0.1 + 1.0j, 0.3 + 0.1j
    got = graded_trace(0, [ChargeExp(u, 0)], tau)
    assert abs(got - phi(0, ONE, PairJK(u, 0), tau)) < 1e-10


@pytest.mark.parametrize("j", range(4))
@pytest.mark.parametrize("v", [ONE, ALPHA, InsertionVector(1, -2)])
def test_phi_fock_cross_oracle(j, v):
    for tau in (1j, 0.6 + 1.2j):
        for u in (0, 0.3 + 0.1j):
            for w in (0, 0.2):
                jk = PairJK(u, w)
                assert abs(phi_fock(j, v, jk, tau, 12) - phi(j, v, jk, tau)) < 1e-9


def test_trace_cyclicity():
    A = [Mode(-1), Mode(1)]
    B = [Mode(-1), Mode(2), Mode(-1)]
    tau = 0.8j
    assert abs(graded_trace(0, A + B, tau) - graded_trace(0, B + A, tau)) < 1e-13


def test_depth_doubling_within_tail():
    word = [ChargeExp(0.2, 0.1), ZeroMode(ALPHA), ZeroMode(ALPHA)]
    tau = 0.7j
    a, tail = graded_trace(1, word, tau, 6, return_tail=True)
    b = graded_trace(1, word, tau, 12)
    assert abs(a - b) <= tail


def test_ordering_enforced():
    with pytest.raises(DomainError):
        npoint_eval(0, 0, 0, [0.9j], (ALPHA, 0.4j), 1.3j)
    with pytest.raises(DomainError):
        npoint_eval(0, 0, 0, [0.4j], (ALPHA, 1.4j), 1.3j)


def test_npoint_without_currents_is_trace():
    tau, u, w = 1.3j, 0.3, 0.2
    got = npoint_eval(2, u, w, [], (ONE, 0.5j), tau)
    assert abs(got - graded_trace(2, [ChargeExp(u, w)], tau)) < 1e-15


def test_one_current_vacuum_top_is_zero_mode_trace():
    tau, u, w = 1.3j, 0.3, 0.2
    got = npoint_eval(1, u, w, [0.4j], (ONE, 0.9j), tau)
    want = graded_trace(1, [ChargeExp(u, w), ZeroMode(ALPHA)], tau)
    assert abs(got - want) < 1e-15


CONFIGS = [
    (1.3j, [0.4j], 0.9j),
    (0.2 + 1.1j, [0.1 + 0.3j], -0.2 + 0.7j),
    (1.5j, [-0.3 + 0.5j], 0.4 + 1.0j),
]


@pytest.mark.parametrize("tau,z,x", CONFIGS)
@pytest.mark.parametrize("v", [ONE, ALPHA])
def test_current_insertion_one_current(tau, z, x, v):
    rep = prop1_residual(1, 0.3 + 0.1j, 0.2, z, (v, x), tau)
    assert rep.abs_err < 1e-8


@pytest.mark.slow
def test_current_insertion_two_currents():
    rep = prop1_residual(0, 0.3 + 0.1j, 0.2, [0.2j, 0.5j], (ALPHA, 0.8j), 1.3j)
    assert rep.abs_err < 1e-7
