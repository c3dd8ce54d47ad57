import math

import mpmath
import numpy as np
import pytest
from scipy import integrate

from gl1harmonic.errors import AbscissaViolation, NotInFamily, PoleOnContour
from gl1harmonic.mellin_arch import (
    ArchBasic, ArchChar, ArchParams, ArchSchwartz, AsymptoticExpansion, decay_fit, fourier_arch,
    gamma_arch, mellin_arch, mellin_residue, stirling_bound_check, zeta_arch)

TATE = ArchParams((0,))
DELTA = ArchParams((), (5.5,))


def mellin_oracle(f, s, parity=0):
    # int f(x) sgn^p |x|^s dx / (2|x|) over R^x, split at 0 and 1
    g = lambda x: (f(x) + (-1) ** parity * f(-x)).real * x ** (s - 1) / 2
    return sum(integrate.quad(g, a, b, limit=200)[0] for a, b in ((0, 1), (1, np.inf)))


def fourier_oracle(f, y, psi_sign=-1):
    re = integrate.quad(lambda x: (f(x) * np.exp(2j * np.pi * psi_sign * x * y)).real, -np.inf, np.inf)[0]
    im = integrate.quad(lambda x: (f(x) * np.exp(2j * np.pi * psi_sign * x * y)).imag, -np.inf, np.inf)[0]
    return complex(re, im)


def test_gaussian_example():
    phi = ArchSchwartz(((1.0, 0.0, 0, math.pi, 2),), allow_nonpositive_power=True)
    assert mellin_arch(phi, ArchChar(2.0)).closed == pytest.approx(1 / (2 * math.pi), rel=1e-12)


def test_delta_arch_factor():
    phi = ArchSchwartz(((1.0, 6.0, 0, 2 * math.pi, 1),))
    for s in (1.0, 2.5 + 1j):
        want = complex(mpmath.power(2 * mpmath.pi, -(s + 5.5)) * mpmath.gamma(s + 5.5))
        assert zeta_arch(phi, s) == pytest.approx(want, rel=1e-12)


def test_parity_mismatch_is_zero():
    odd = ArchSchwartz(((1.0, 1.5, 1, math.pi, 2),))
    assert mellin_arch(odd, ArchChar(1.0, 0)).closed == 0


@pytest.mark.parametrize("s", [0.7, 1.5, 3.0])
def test_closed_form_against_quadrature(s):
    phi = ArchSchwartz(((2.0, 0.5, 0, math.pi, 2), (-1.0, 2.5, 0, math.pi, 2), (0.5, 1.0, 1, 3.0, 1)))
    for parity in (0, 1):
        got = mellin_arch(phi, ArchChar(s, parity), numeric=True)
        assert got.closed.real == pytest.approx(mellin_oracle(phi, s, parity), rel=1e-9)
        assert got.discrepancy < 1e-12


def test_abscissa():
    with pytest.raises(AbscissaViolation):
        mellin_arch(ArchSchwartz.gaussian_tate(), ArchChar(-0.6))


def test_nonpositive_power_flag():
    with pytest.raises(ValueError):
        ArchSchwartz(((1.0, 0.0, 0, 1.0, 2),))


def test_gamma_self_dual_center():
    assert gamma_arch(ArchChar(0.0, 0), 0.5) == pytest.approx(1.0)
    with pytest.raises(PoleOnContour):
        gamma_arch(ArchChar(0.0, 0), 0.0)


def test_gamma_tate_formula():
    s = 0.3 + 2j
    g = complex(mpmath.gamma((1 - s) / 2) / mpmath.gamma(s / 2) * mpmath.pi ** (s - 0.5))
    assert gamma_arch(ArchChar(0.0, 0), s) == pytest.approx(g, rel=1e-12)
    assert TATE.gamma(s) == pytest.approx(g, rel=1e-12)


@pytest.mark.parametrize("terms", [
    ((1.0, 0.5, 0, math.pi, 2),),
    ((1.0, 2.5, 0, math.pi, 2), (0.5, 0.5, 0, math.pi, 2)),
    ((1.0, 1.5, 1, math.pi, 2),),
])
def test_tate_fourier_against_classical_transform(terms):
    # pi-model: phi = |x|^{1/2} f, F phi = |x|^{1/2} (classical transform of f)
    phi = ArchSchwartz(terms)
    fhat = fourier_arch(phi, TATE)
    f = lambda x: phi(x) / math.sqrt(abs(x)) if x != 0 else 0.0
    for y in (0.3, 1.1, -0.8):
        assert fhat(y) == pytest.approx(math.sqrt(abs(y)) * fourier_oracle(f, y), abs=1e-10)


def test_fourier_involution():
    for params, terms in ((TATE, ((1.0, 2.5, 0, math.pi, 2), (2.0, 3.5, 1, math.pi, 2))),
                          (DELTA, ((1.0, 6.0, 0, 2 * math.pi, 1), (0.5, 8.0, 0, 2 * math.pi, 1)))):
        phi = ArchSchwartz(terms)
        back = fourier_arch(fourier_arch(phi, params, -1), params, 1)
        for x in (0.2, 0.9, 2.0, -1.3):
            assert back(x) == pytest.approx(phi(x), abs=1e-12)


def test_fourier_functional_equation():
    phi = ArchSchwartz(((1.0, 2.5, 0, math.pi, 2),))
    fphi = fourier_arch(phi, TATE)
    s = 0.3 + 0.7j
    assert zeta_arch(fphi, 1 - s) == pytest.approx(TATE.gamma(s, 0, -1) * zeta_arch(phi, s), rel=1e-12)


def test_outside_family():
    with pytest.raises(NotInFamily):
        fourier_arch(ArchSchwartz(((1.0, 0.5, 0, 1.0, 2),)), TATE)


def test_arch_basic_two_factors():
    params = ArchParams((0, 1))
    b = ArchBasic(params)
    s = 1.7
    want = complex(mpmath.gamma(s / 2) * mpmath.gamma((s + 1) / 2) * mpmath.pi ** (-s - 0.5)) / 2
    assert b.mellin(ArchChar(s - 0.5)).closed == pytest.approx(want, rel=1e-8)


def test_residues_match_expansion():
    phi = ArchSchwartz(((1.0, 0.5, 0, math.pi, 2), (3.0, 1.0, 1, 2.0, 1)))
    exp = AsymptoticExpansion.from_schwartz(phi, K=4)
    for k, lam in enumerate(exp.lambdas):
        for parity in (0, 1):
            got = mellin_residue(phi, -lam, parity)
            assert got == pytest.approx(exp.predicted_residue(k, parity), abs=1e-8)


def test_stirling():
    assert stirling_bound_check([(0.5, 0.0)], strip=(1, 2)).bounded
    rep = stirling_bound_check([(0.5, 0.0)], poly=(0, 0, 0, 1), strip=(1, 2))
    assert rep.bounded
    assert stirling_bound_check([(0.5, 0.0)], strip=(-0.5, 0.5)).flagged_poles == (0.0,)


def test_decay_fit():
    fit = decay_fit(ArchSchwartz(((1.0, 6.0, 0, 2 * math.pi, 1),)))
    assert fit.kappa_zero == pytest.approx(6.0, abs=1e-4)
    assert fit.kappa_inf >= 5
    g = decay_fit(ArchSchwartz(((1.0, 0.5, 0, math.pi, 2),)))
    assert g.kappa_inf >= 5
    # no negative zero leaks into reports
    assert math.copysign(1, decay_fit(ArchSchwartz(((1.0, 0.0, 0, 1.0, 2),), True)).kappa_zero) == 1
