import random
from fractions import Fraction

import pytest

from gl1harmonic.acceptance import random_compact
from gl1harmonic.cyclotomic import Cyclo, root_of_unity
from gl1harmonic.errors import NotInSchwartzSpace, RamifiedPlace
from gl1harmonic.localfield import AdditiveChar, MultChar, PAdicPoint, primitive_characters, unit_group
from gl1harmonic.mellin_na import (
    NASchwartz, UnramifiedRep, basic, evaluate, evaluate_exact, fourier_na, gamma_na, in_schwartz_space, mellin,
    mellin_from_values, membership_compact, newform)
from gl1harmonic.qseries import LaurentPoly, RationalFn
from gl1harmonic.repdata import get_rep, satake

Q = Fraction


def unit_indicator(p, rep=None):
    return NASchwartz(p, rep or UnramifiedRep.trivial(p), {MultChar.trivial(p): RationalFn(1)})


def test_basic_trivial_values():
    phi = basic(UnramifiedRep.trivial(5))
    assert evaluate_exact(phi, PAdicPoint(5, -1, 1)).is_zero()
    # L_1(x) = |x|^{1/2} 1_{Z_p}(x): value p^{-m/2}
    for m in range(6):
        assert evaluate(phi, PAdicPoint(5, m, 2)) == pytest.approx(5 ** (-m / 2))


def test_unit_indicator_values():
    phi = unit_indicator(3)
    assert evaluate_exact(phi, PAdicPoint(3, 0, 2)) == Cyclo.one()
    assert evaluate_exact(phi, PAdicPoint(3, 1, 1)).is_zero()
    assert evaluate_exact(phi, PAdicPoint(3, -2, 1)).is_zero()
    assert mellin(phi, MultChar.trivial(3)) == RationalFn(1)
    assert mellin(phi, MultChar.quadratic(3)).is_zero()


def test_basic_delta_p2():
    # p^{-1/2}(alpha + beta) = tau(2) / 2^6
    phi = basic(satake(get_rep("delta"), 2))
    assert evaluate_exact(phi, PAdicPoint(2, 1, 1)) == Cyclo.rational(Q(-3, 8))


def test_basic_zeta_is_lfactor():
    rep = satake(get_rep("delta"), 3)
    assert mellin(basic(rep), MultChar.trivial(3)) == rep.lfactor()


def test_round_trip_random():
    rng = random.Random(7)
    for p in (2, 3, 5, 7):
        for _ in range(10):
            phi = random_compact(rng, p)
            c = max(1, phi.max_conductor())
            lo, hi = phi.support_range()
            units = sorted(unit_group(p, c)[2])
            vals = {(m, u): evaluate_exact(phi, PAdicPoint(p, m, u, c)) for m in range(lo, hi + 1) for u in units}
            back = mellin_from_values(p, c, vals)
            assert NASchwartz(p, phi.rep, {k: RationalFn(v) for k, v in back.items()}) == phi


def test_values_against_character_inversion():
    # data {omega: c z^m} is the function p^{-m/2} c omega^{-1}(u) on p^m Z_p^x
    p = 5
    omega = primitive_characters(5, 1)[1]
    phi = NASchwartz(p, UnramifiedRep.trivial(p), {omega: RationalFn(LaurentPoly({2: Q(1, 5)}))})
    for u in range(1, 5):
        assert evaluate_exact(phi, PAdicPoint(5, 2, u)) == Cyclo.rational(Q(1, 25)) * root_of_unity(-omega.turns(u))
        assert evaluate_exact(phi, PAdicPoint(5, 1, u)).is_zero()


def test_schwartz_membership():
    rep = satake(get_rep("delta"), 2)
    assert in_schwartz_space(rep, unit_indicator(2, rep).data)
    assert membership_compact(unit_indicator(2))
    assert not membership_compact(basic(rep))
    # 1/(1 - z) is not a Laurent multiple of L(s, Delta_2)
    assert not in_schwartz_space(rep, {MultChar.trivial(2): RationalFn(1, LaurentPoly.from_list([1, -1]))})


def test_fourier_of_basic_is_basic():
    for name in ("tate", "delta"):
        rep = satake(get_rep(name), 3)
        f = fourier_na(basic(rep))
        assert f == basic(rep.contragredient())


@pytest.mark.parametrize("seed", range(5))
def test_fourier_involution(seed):
    rng = random.Random(seed)
    for p in (2, 3, 5):
        rep = satake(get_rep("delta"), p) if seed % 2 else UnramifiedRep.trivial(p)
        phi = random_compact(rng, p, rep)
        psi = AdditiveChar(p)
        back = fourier_na(fourier_na(phi, psi), psi.inverse())
        assert back == phi


def test_ramified_gamma_is_monomial():
    omega = MultChar.quadratic(3)
    g = gamma_na(UnramifiedRep.trivial(3), omega)
    assert g.ramified and g.conductor == 1
    assert g.value.is_laurent() and len(g.value.laurent().coeffs) == 1
    # compact image of a compact ramified datum
    phi = NASchwartz(3, UnramifiedRep.trivial(3), {omega: RationalFn(1)})
    assert membership_compact(fourier_na(phi))


def test_unramified_gamma_degree_two():
    rep = satake(get_rep("delta"), 2)
    g = gamma_na(rep, MultChar.trivial(2))
    a, b = rep.satake
    for z in (0.3, 0.1 + 0.2j):
        L = lambda w: 1 / ((1 - a * w) * (1 - b * w))
        # gamma = L(1 - s, dual) / L(s); z -> p^{-1}/z realizes s -> 1 - s
        Ld = lambda w: 1 / ((1 - w / a) * (1 - w / b))
        assert g(z) == pytest.approx(Ld(0.5 / z) / L(z), rel=1e-12)


def test_contragredient_inverts_satake():
    rep = UnramifiedRep.from_satake(7, [2, Q(1, 3), Cyclo.gaussian(0, 1)], kappa=5.0)
    dual = rep.contragredient()
    got = sorted((complex(a) for a in dual.satake), key=lambda a: (round(a.real, 9), round(a.imag, 9)))
    want = sorted((1 / a for a in rep.satake), key=lambda a: (round(a.real, 9), round(a.imag, 9)))
    assert got == pytest.approx(want)
    assert dual.contragredient().same_as(rep)


def test_basic_rejects_ramified():
    rep = get_rep("chi3").local_rep(3)
    with pytest.raises(RamifiedPlace):
        basic(rep)
    assert newform(rep).keys()


def test_fourier_rejects_non_ideal():
    rep = UnramifiedRep.trivial(2)
    # data outside the ideal L(s) C[z, 1/z] is refused at construction of the image
    phi = NASchwartz(2, rep, {MultChar.trivial(2): RationalFn(1, LaurentPoly.from_list([1, 0, -1]))})
    with pytest.raises(NotInSchwartzSpace):
        fourier_na(phi)
