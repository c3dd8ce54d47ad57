import math
import random
from fractions import Fraction

import mpmath
import pytest

from gl1harmonic.acceptance import random_compact
from gl1harmonic.errors import Divergent, NoConvergence
from gl1harmonic.localfield import PAdicPoint
from gl1harmonic.mellin_na import NASchwartz
from gl1harmonic.repdata import get_rep
from gl1harmonic.theta_global import (
    GlobalSchwartz, Idele, ThetaEngine, boundary_constants, datum_for, domain_status, global_fourier,
    global_zeta, load_datum, psf_check, theta)


def tate_oracle(t):
    # 2 sum_{n>=1} t^{1/2} exp(-pi n^2 t^2)
    return float(mpmath.sqrt(t) * (mpmath.jtheta(3, 0, mpmath.exp(-mpmath.pi * t * t)) - 1))


def delta_oracle(t):
    # 2 t^6 Delta(it), Delta = q prod (1 - q^n)^24
    q = mpmath.exp(-2 * mpmath.pi * t)
    return float(2 * t ** 6 * q * mpmath.qp(q) ** 24)


@pytest.mark.parametrize("t", [0.5, 1.0, 1.7])
def test_tate_theta(t):
    r = theta(get_rep("tate"), datum_for("tate"), Idele.real(t))
    assert r.value.real == pytest.approx(tate_oracle(t), abs=1e-13)
    assert r.tail_bound < 1e-12


def test_tate_theta_at_one():
    assert theta(get_rep("tate"), datum_for("tate"), Idele.real(1)).value.real == pytest.approx(0.0864348112, abs=1e-9)


@pytest.mark.parametrize("t", [0.8, 1.0, 2.0])
def test_delta_theta(t):
    r = theta(get_rep("delta"), datum_for("delta"), Idele.real(t))
    assert r.value.real == pytest.approx(delta_oracle(t), rel=1e-11)


def test_rational_invariance():
    # Theta(q x) = Theta(x) for q in Q^x
    for name, x in (("tate", Idele.real(0.9)), ("chi4", Idele.real(1.1)), ("chi4-s00", Idele.real(0.7))):
        phi = datum_for(name)
        base = theta(phi.rep, phi, x).value
        for q in (Fraction(3), Fraction(-5, 2), Fraction(1, 15)):
            y = Idele.from_rational(q, c=2, primes=phi.special_primes) * x
            assert theta(phi.rep, phi, y).value == pytest.approx(base, abs=1e-12)


def test_negative_valuation_point():
    # a deep negative valuation does not empty the sum: it equals a rational translate
    phi = datum_for("tate")
    x = Idele(1.0 / 3 ** 5, 1, (PAdicPoint(3, -5, 1),))
    assert theta(phi.rep, phi, x).value == pytest.approx(theta(phi.rep, phi, Idele.real(1.0)).value, abs=1e-12)


def test_empty_datum_has_no_terms():
    rep = get_rep("tate")
    phi = GlobalSchwartz(rep, datum_for("tate").arch, {3: NASchwartz(3, rep.local_rep(3), {})})
    r = theta(rep, phi, Idele.real(1))
    assert r.value == 0 and r.terms_used == 0


def test_shift_equivariance():
    phi = datum_for("chi4-s00")
    x = Idele(0.8, 1, (PAdicPoint(3, 1, 2, 1), PAdicPoint(5, -1, 3, 1)))
    y = Idele(1.3, -1, (PAdicPoint(5, 2, 2, 1),))
    assert theta(phi.rep, phi.shift(y), x).value == pytest.approx(theta(phi.rep, phi, x * y).value, abs=1e-12)


def test_h_doubling_sound():
    rng = random.Random(3)
    rep = get_rep("tate")
    for _ in range(10):
        special = {p: random_compact(rng, p, rep.local_rep(p)) for p in rng.sample([2, 3, 5], 2)}
        phi = GlobalSchwartz(rep, datum_for("tate").arch, special)
        eng = ThetaEngine(phi)
        t = rng.uniform(0.3, 2.0)
        r = eng.evaluate(t, tol=1e-6)
        r2 = eng.evaluate(t, N=4 * max(1, int(r.height_cutoff / (eng.gf * t))))
        assert abs(r.value - r2.value) <= r.tail_bound


def test_height_ceiling():
    with pytest.raises(NoConvergence):
        theta(get_rep("tate"), datum_for("tate"), Idele.real(1e-3), tol=1e-14, height_ceiling=0.5)


@pytest.mark.parametrize("t", [0.5, 2.0])
def test_classical_tate_psf_with_boundary(t):
    res = psf_check(get_rep("tate"), datum_for("tate"), Idele.real(t))
    assert res.boundary == pytest.approx(t ** -0.5 - t ** 0.5)
    assert res.lhs.value - res.rhs.value == pytest.approx(res.boundary, abs=1e-12)
    assert res.domain_status == "conjecture-probe"


def test_boundary_constants():
    A, C = boundary_constants(get_rep("tate"), datum_for("tate"))
    assert (A, C) == pytest.approx((1.0, 1.0))
    assert boundary_constants(get_rep("delta"), datum_for("delta")) == (0, 0)


def test_delta_psf():
    for t in (0.5, 1.25):
        assert psf_check(get_rep("delta"), datum_for("delta"), Idele.real(t)).rel_err < 1e-12


def test_s00_psf_and_flags():
    phi = datum_for("tate-s00")
    assert phi.is_s_circ_circ and domain_status(phi.rep, phi) == "s-circ-circ"
    res = psf_check(phi.rep, phi, Idele(1.3, 1, (PAdicPoint(2, 1, 1),)))
    assert res.abs_err < 1e-13
    assert boundary_constants(phi.rep, phi) == pytest.approx((0, 0))
    assert domain_status(get_rep("delta"), datum_for("delta")) == "cuspidal-theorem"


def test_fourier_of_all_basic_delta():
    phi = datum_for("delta")
    f = global_fourier(phi.rep, phi)
    assert f.rep == phi.rep and not f.finite_special
    for x in (0.3, 1.0, 2.2):
        assert abs(f.arch(x)) == pytest.approx(abs(phi.arch(x)), rel=1e-12)


def test_tate_zeta_s2():
    z = global_zeta(get_rep("tate"), datum_for("tate"), 2.0, P=10 ** 5)
    assert z.value.real == pytest.approx(math.pi / 12, abs=max(z.error, 1e-7))
    assert z.value.real == pytest.approx(0.2617994, abs=1e-5)


def test_chi4_euler_against_dirichlet_series():
    rep = get_rep("chi4")
    s = 6.0
    z = global_zeta(rep, datum_for("chi4"), s)
    L = mpmath.dirichlet(s, [0, 1, 0, -1])
    arch = 0.5 * mpmath.pi ** (-(s + 1) / 2) * mpmath.gamma((s + 1) / 2)
    assert z.value.real == pytest.approx(float(arch * L), rel=1e-10)


def test_theta_path_matches_euler_path():
    phi = datum_for("tate")
    a = global_zeta(phi.rep, phi, 3.0)
    b = global_zeta(phi.rep, phi, 3.0, path="theta")
    assert b.value == pytest.approx(a.value, rel=1e-9)


def test_divergent():
    with pytest.raises(Divergent):
        global_zeta(get_rep("tate"), datum_for("tate"), 1.0)


def test_datum_json_round_trip():
    phi = datum_for("chi4-s00")
    obj = phi.to_json()
    back = load_datum({"rep": obj["rep"], "arch": obj["arch"], "finite_special": obj["finite_special"]})
    x = Idele.real(0.9)
    assert theta(back.rep, back, x).value == pytest.approx(theta(phi.rep, phi, x).value, abs=1e-15)


def test_idele_basics():
    x = Idele.from_rational(Fraction(-12, 5))
    assert x.sign == -1 and x.primes == [2, 3, 5]
    assert x.norm == pytest.approx(1.0)
    assert Idele.from_json(x.to_json()) == x
    with pytest.raises(ValueError):
        Idele(0.0)
