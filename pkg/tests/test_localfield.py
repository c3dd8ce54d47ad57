import cmath
import math
from fractions import Fraction

import pytest

from gl1harmonic.errors import InsufficientPrecision
from gl1harmonic.localfield import (
    AdditiveChar, MultChar, PAdicPoint, characters, eval_char, gauss_sum, ord_p, primitive_characters,
    unit_group)


def test_ord_p():
    assert ord_p(Fraction(18, 5), 3) == 2
    assert ord_p(Fraction(5, 24), 2) == -3
    assert ord_p(7, 5) == 0


def test_point_from_rational_and_abs():
    x = PAdicPoint.from_rational(Fraction(50, 3), 5, 2)
    assert (x.m, x.u) == (2, 2 * pow(3, -1, 25) % 25)
    assert x.abs == Fraction(1, 25)
    assert (x * x.inverse()).u == 1


def test_unit_group_orders():
    for p, c in [(2, 1), (2, 2), (2, 3), (2, 5), (3, 1), (3, 3), (5, 2), (7, 1)]:
        gens, orders, log = unit_group(p, c)
        assert math.prod(orders) == len(log) == (p - 1) * p ** (c - 1)


def test_character_counts():
    # characters of (Z/p^c)^x number phi(p^c); primitive ones phi(p^c) - phi(p^{c-1})
    for p, c in [(3, 1), (3, 2), (5, 2), (2, 3), (7, 1)]:
        phi = lambda k: (p - 1) * p ** (k - 1) if k > 0 else 1
        assert len(characters(p, c)) == phi(c)
        assert len(primitive_characters(p, c)) == phi(c) - phi(c - 1)


def test_eval_char_examples():
    triv = MultChar.trivial(5)
    assert eval_char(triv, PAdicPoint(5, 3, 2)).value == 1
    norm = MultChar.trivial(3, 1)
    assert eval_char(norm, PAdicPoint(3, 2, 1)).value == pytest.approx(1 / 9)
    q3 = MultChar.quadratic(3)
    assert eval_char(q3, PAdicPoint(3, 0, 2)).value == pytest.approx(-1)
    with pytest.raises(InsufficientPrecision):
        eval_char(MultChar.quadratic(2), PAdicPoint(2, 0, 1, 1))


def gauss_oracle(chi, sign=1):
    mod = chi.p ** chi.cond
    return sum(cmath.exp(2j * math.pi * (float(t) + sign * v / mod)) for v, t in chi.table)


def test_gauss_examples():
    assert gauss_sum(MultChar.quadratic(3)).value == pytest.approx(1j * math.sqrt(3), abs=1e-12)
    assert gauss_sum(MultChar.quadratic(2)).value == pytest.approx(2j, abs=1e-12)


@pytest.mark.parametrize("p,c", [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (2, 2), (2, 3)])
def test_gauss_magnitude_and_oracle(p, c):
    for chi in primitive_characters(p, c):
        for sign in (1, -1):
            g = gauss_sum(chi, AdditiveChar(p, sign))
            assert g.value == pytest.approx(gauss_oracle(chi, sign), abs=1e-10)
            # |g|^2 = p^c exactly
            assert (g.exact * g.exact.conjugate()).rational_value() == p ** c


def test_additive_char():
    psi = AdditiveChar(5)
    assert psi(Fraction(1, 5)) == pytest.approx(cmath.exp(2j * math.pi / 5))
    assert psi(Fraction(7, 1)) == pytest.approx(1)
    assert psi.inverse()(Fraction(2, 25)) == pytest.approx(cmath.exp(-2j * math.pi * 2 / 25))


def test_json_round_trip():
    chi = primitive_characters(5, 2)[3]
    assert MultChar.from_json(chi.to_json()) == chi
    assert chi.inverse().inverse() == chi
