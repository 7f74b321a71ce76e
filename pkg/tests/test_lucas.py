"""Lucas 序列：符号值、三种数值算法、矩阵幂与 Horadam 序列"""

import random
import time
from fractions import Fraction

import pytest

from lucas_identities.core.algebra import symbols
from lucas_identities.core.exceptions import SingularParameterError
from lucas_identities.core.lucas import (
    METHODS, HoradamParams, SequenceParams, discriminant, horadam, horadam_recurrence, horadam_symbolic,
    lucas_numeric, lucas_symbolic, lucas_v_numeric, matrix_closed_form, matrix_power, sign_flip, specialize,
)

P, Q = symbols("P", "Q")
FIB = SequenceParams(1, -1)

FIBONACCI = [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144]
LUCAS = [2, 1, 3, 4, 7, 11, 18, 29, 47, 76, 123]


def _random_params(rng):
    while True:
        p = Fraction(rng.randint(-7, 7), rng.randint(1, 5))
        q = Fraction(rng.randint(-7, 7), rng.randint(1, 5))
        if q != 0:
            return SequenceParams(p, q)


@pytest.mark.parametrize("method", METHODS)
def test_fibonacci_and_lucas_numbers(method):
    assert [lucas_numeric(FIB, k, method).u_k for k in range(len(FIBONACCI))] == FIBONACCI
    assert [lucas_v_numeric(FIB, k, method) for k in range(len(LUCAS))] == LUCAS
    assert lucas_numeric(FIB, 20, method).u_k == 6765
    assert lucas_numeric(FIB, 0, method).u_k == 0


def test_special_parameters():
    # U_k(2, 1) = k，U_k(3, 2) = 2^k - 1
    assert [lucas_numeric(SequenceParams(2, 1), k).u_k for k in range(8)] == list(range(8))
    assert [lucas_numeric(SequenceParams(3, 2), k).u_k for k in range(8)] == [2 ** k - 1 for k in range(8)]
    assert discriminant(FIB) == 5
    assert SequenceParams(2, 1).discriminant == 0


@pytest.mark.parametrize("seed", range(5))
def test_methods_agree_on_random_rational_parameters(seed):
    rng = random.Random(seed)
    params = _random_params(rng)
    for k in list(range(-12, 40)) + [97, 128]:
        results = {m: lucas_numeric(params, k, m) for m in METHODS}
        assert len({(r.u_k, r.u_k1) for r in results.values()}) == 1, (params, k)


def test_numeric_matches_symbolic():
    rng = random.Random(7)
    for _ in range(5):
        params = _random_params(rng)
        for k in range(-8, 15):
            assert lucas_numeric(params, k).u_k == specialize(lucas_symbolic("U", k), params)
            assert lucas_v_numeric(params, k) == specialize(lucas_symbolic("V", k), params)


def test_negative_index_law():
    for k in range(51):
        u = lucas_numeric(FIB, k).u_k
        assert lucas_numeric(FIB, -k).u_k == (-1) ** (k + 1) * u
    params = SequenceParams(Fraction(3, 2), Fraction(-5, 3))
    for k in range(1, 51):
        assert lucas_numeric(params, -k).u_k == -lucas_numeric(params, k).u_k / params.Q ** k


def test_negative_index_requires_nonzero_q():
    with pytest.raises(SingularParameterError):
        lucas_numeric(SequenceParams(3, 0), -1)
    assert lucas_numeric(SequenceParams(3, 0), 4).u_k == 27


def test_unknown_method():
    with pytest.raises(ValueError):
        lucas_numeric(FIB, 3, "closed-form")


def test_fast_doubling_large_index():
    k = 200_000
    started = time.perf_counter()
    doubling = lucas_numeric(FIB, k, "doubling").u_k
    doubling_time = time.perf_counter() - started
    started = time.perf_counter()
    iterative = lucas_numeric(FIB, k, "iterative").u_k
    iterative_time = time.perf_counter() - started
    assert doubling == iterative
    assert doubling.denominator == 1
    assert 41_795 <= doubling.numerator.bit_length() * 0.30103 <= 41_805
    assert doubling_time < iterative_time


# ===== 符号值 =====

def test_symbolic_values():
    assert lucas_symbolic("U", 0) == 0
    assert lucas_symbolic("U", 3) == P * P - Q
    assert lucas_symbolic("V", 2) == P * P - 2 * Q
    assert lucas_symbolic("U", -1) == -1 / Q
    assert lucas_symbolic("U", -3) == -(P * P - Q) / Q ** 3
    assert lucas_symbolic("V", -2) == (P * P - 2 * Q) / Q ** 2


@pytest.mark.parametrize("k", range(-6, 9))
def test_sign_flip(k):
    assert sign_flip("U", k) == (-1) ** ((k + 1) % 2) * lucas_symbolic("U", k)
    assert sign_flip("V", k) == (-1) ** (k % 2) * lucas_symbolic("V", k)


@pytest.mark.parametrize("which", ["M", "R", "A"])
@pytest.mark.parametrize("k", range(-4, 7))
def test_matrix_power_closed_form(which, k):
    assert matrix_power(which, k) == matrix_closed_form(which, k)


def test_matrix_power_determinant():
    # det M^k = Q^k
    for k in range(-3, 6):
        assert matrix_power("M", k).det() == Q ** k


# ===== Horadam =====

def test_horadam_matches_recurrence():
    params = HoradamParams(2, 5, 3, Fraction(-1, 2))
    for k in range(-6, 12):
        assert horadam(params, k) == horadam_recurrence(params, k), k


def test_horadam_symbolic():
    a0, a1, p0, p1 = symbols("a0", "a1", "p0", "p1")
    assert horadam_symbolic(0) == a0
    assert horadam_symbolic(1) == a1
    assert horadam_symbolic(2) == p0 * a1 + p1 * a0
    assert horadam_symbolic(3) == p0 * (p0 * a1 + p1 * a0) + p1 * a1


def test_horadam_reduces_to_lucas():
    # a0 = 0, a1 = 1 时 W_k = U_k(p0, -p1)
    params = HoradamParams(0, 1, 1, 1)
    assert [horadam(params, k) for k in range(10)] == FIBONACCI[:10]


def test_horadam_negative_index_requires_nonzero_p1():
    params = HoradamParams(1, 1, 2, 0)
    with pytest.raises(SingularParameterError):
        horadam(params, -1)
    with pytest.raises(SingularParameterError):
        horadam_recurrence(params, -1)


def test_horadam_initial_terms_without_p1():
    # p1 = 0 时 W_k = a1·p0^{k-1}（k >= 1），W_0 仍为 a0
    params = HoradamParams(5, 3, 2, 0)
    assert horadam(params, 0) == 5
    assert horadam(params, 1) == 3
    assert [horadam(params, k) for k in range(2, 6)] == [6, 12, 24, 48]
    assert [horadam(params, k) for k in range(6)] == [horadam_recurrence(params, k) for k in range(6)]
