import cmath
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from graphdesigns.exact import (CyclotomicInt, QuadSurd, SQRT5, cyclo_from_power_sums, cyclotomic_polynomial,
                                divisors, euler_phi, golden_ratio, poly_divmod, poly_mul)

X = sympy.Symbol("x")


@pytest.mark.parametrize("q", range(1, 31))
def test_cyclotomic_polynomial_matches_sympy(q):
    expected = sympy.Poly(sympy.cyclotomic_poly(q, X), X).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(q)) == [int(c) for c in expected]


@given(st.integers(1, 2000))
def test_divisors_and_totient(m):
    assert divisors(m) == sorted(sympy.divisors(m))
    assert euler_phi(m) == int(sympy.totient(m))


polys = st.lists(st.integers(-9, 9), min_size=1, max_size=6)


@given(polys, polys)
def test_poly_mul_matches_sympy(a, b):
    pa, pb = sympy.Poly(a[::-1], X), sympy.Poly(b[::-1], X)
    want = [int(c) for c in (pa * pb).all_coeffs()[::-1]]
    got = list(poly_mul(a, b))
    assert got[: len(want)] == want and not any(got[len(want):])


@given(polys, st.integers(1, 12))
def test_poly_divmod_reconstructs(num, q):
    den = cyclotomic_polynomial(q)
    quo, rem = poly_divmod(num, den)
    back = list(poly_mul(quo, den))
    back += [0] * (max(len(back), len(rem), len(num)) - len(back))
    for i, r in enumerate(rem):
        back[i] += r
    assert back[: len(num)] == list(num) and not any(back[len(num):])
    assert len(rem) < len(den)


def test_poly_divmod_requires_monic():
    with pytest.raises(ValueError):
        poly_divmod((1, 2, 3), (1, 2))


counts_q = st.integers(2, 12).flatmap(lambda q: st.tuples(st.just(q), st.lists(st.integers(-5, 5), min_size=q, max_size=q)))


@given(counts_q)
def test_power_sums_match_complex_value(qc):
    q, counts = qc
    w = cmath.exp(2j * cmath.pi / q)
    want = sum(c * w**j for j, c in enumerate(counts))
    z = cyclo_from_power_sums(q, counts)
    assert abs(complex(z) - want) < 1e-9
    assert z.is_zero() == (abs(want) < 1e-9)


@given(counts_q, st.data())
def test_ring_operations_commute_with_evaluation(qc, data):
    q, a = qc
    b = data.draw(st.lists(st.integers(-5, 5), min_size=q, max_size=q))
    x, y = cyclo_from_power_sums(q, a), cyclo_from_power_sums(q, b)
    assert abs(complex(x * y) - complex(x) * complex(y)) < 1e-8
    assert abs(complex(x + y) - complex(x) - complex(y)) < 1e-9
    assert (x - x).is_zero()
    assert abs(complex(3 * x) - 3 * complex(x)) < 1e-9


@pytest.mark.parametrize("q", [2, 3, 4, 6, 12])
def test_sum_of_all_roots_is_zero(q):
    assert cyclo_from_power_sums(q, [1] * q).is_zero()
    assert not cyclo_from_power_sums(q, [1] + [0] * (q - 1)).is_zero()


def test_root_powers():
    w = CyclotomicInt.root(5)
    acc = CyclotomicInt.root(5, 0)
    for _ in range(5):
        acc = acc * w
    assert acc == CyclotomicInt.root(5, 0)
    assert str(CyclotomicInt.zero(4)) == "0"


def test_mixed_moduli_rejected():
    with pytest.raises(ValueError):
        CyclotomicInt.root(3) + CyclotomicInt.root(4)
    with pytest.raises(ValueError):
        cyclo_from_power_sums(3, [1, 2])


fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
surds = st.builds(QuadSurd, fractions, fractions)


def _sym(x: QuadSurd):
    return sympy.Rational(x.a.numerator, x.a.denominator) + sympy.Rational(x.b.numerator, x.b.denominator) * sympy.sqrt(5)


@given(surds, surds)
def test_quadratic_field_matches_sympy(x, y):
    for got, want in ((x + y, _sym(x) + _sym(y)), (x - y, _sym(x) - _sym(y)), (x * y, _sym(x) * _sym(y))):
        assert sympy.simplify(_sym(got) - want) == 0
    if not y.is_zero():
        assert sympy.simplify(_sym(x / y) - _sym(x) / _sym(y)) == 0


@given(surds)
@settings(max_examples=50)
def test_norm_and_conjugate(x):
    assert x * x.conjugate() == QuadSurd.lift(x.norm())
    assert abs(float(x) - float(_sym(x))) < 1e-9


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        QuadSurd(Fraction(1)) / QuadSurd()


def test_golden_ratio_identities():
    phi, phibar = golden_ratio()
    assert phi + phibar == QuadSurd.lift(1)
    assert phi * phibar == QuadSurd.lift(-1)
    assert phi * phi == phi + QuadSurd.lift(1)
    assert SQRT5 * SQRT5 == QuadSurd.lift(5)
    assert str(phi) == "1/2 + 1/2*sqrt5"
