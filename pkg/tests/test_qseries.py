from fractions import Fraction

import pytest

from gl1harmonic.cyclotomic import Cyclo
from gl1harmonic.errors import DivisionByZero, PoleAtZero
from gl1harmonic.qseries import LaurentPoly, RationalFn, evaluate, expand, residue_at_zero


def poly(*cs, shift=0):
    return LaurentPoly.from_list(cs, shift)


def rat(x):
    return Cyclo.rational(Fraction(x))


def series_oracle(num, den, n):
    """Plain long division of power series over Fraction."""
    out = []
    rem = list(num) + [0] * (n + 1)
    for k in range(n + 1):
        c = Fraction(rem[k]) / den[0]
        out.append(c)
        for j, d in enumerate(den):
            if k + j < len(rem):
                rem[k + j] -= c * d
    return out


def test_geometric_series():
    r = RationalFn(1, poly(1, -1))
    assert expand(r, 3).coeffs == tuple(rat(1) for _ in range(4))


def test_two_factor_product():
    # 1/((1-2z)(1-3z)) = 1/(1 - 5z + 6z^2)
    r = RationalFn(1, poly(1, -5, 6))
    assert [c.rational_value() for c in expand(r, 2).coeffs] == [1, 5, 19]


def test_polynomial_passthrough():
    r = RationalFn(poly(1, 1))
    assert [c.rational_value() for c in expand(r, 5).coeffs] == [1, 1, 0, 0, 0, 0]


def test_expand_against_long_division():
    num, den = [3, -1, 2], [2, 1, 0, -5]
    r = RationalFn(poly(*num), poly(*den))
    got = [c.rational_value() for c in expand(r, 12).coeffs]
    assert got == series_oracle(num, den, 12)


def test_expand_rejects_pole():
    with pytest.raises(PoleAtZero):
        expand(RationalFn(poly(1, shift=-1)), 3)


def test_residues():
    assert residue_at_zero(RationalFn(poly(1, shift=-1))) == rat(1)
    r = RationalFn(poly(1, shift=-2), poly(1, -1))
    assert residue_at_zero(r) == rat(1)
    assert residue_at_zero(RationalFn(1, poly(1, -1))).is_zero()


def test_evaluate():
    r = RationalFn(1, poly(1, -1))
    assert evaluate(r, 0.5).value == pytest.approx(2.0, abs=1e-15)
    with pytest.raises(DivisionByZero):
        evaluate(r, 1)
    # (1 - z^2)/(1 - z) reduces to 1 + z
    q = RationalFn(poly(1, 0, -1), poly(1, -1))
    assert q.is_laurent()
    assert evaluate(q, 1).value == pytest.approx(2.0)


def test_arithmetic_identities():
    a = RationalFn(poly(1, 2), poly(1, -3))
    b = RationalFn(poly(0, 1), poly(2, 0, 1))
    assert (a + b) - b == a
    assert (a * b) / b == a
    assert (a * b).coefficient(4) == sum(
        (a.coefficient(i) * b.coefficient(4 - i) for i in range(0, 5)), Cyclo.zero())


def test_json_round_trip():
    a = RationalFn(poly(1, 2, shift=-1), poly(1, -3))
    assert RationalFn.from_json(a.to_json()) == a
    p = poly(rat(Fraction(1, 3)), Cyclo.gaussian(0, 1), shift=2)
    assert LaurentPoly.from_json(p.to_json()) == p
