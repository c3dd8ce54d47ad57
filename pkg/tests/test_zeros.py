import math

import mpmath
import numpy as np
import pytest

from gl1harmonic import zeros
from gl1harmonic.errors import PhiMismatch
from gl1harmonic.localfield import PAdicPoint, ord_p
from gl1harmonic.mellin_na import evaluate
from gl1harmonic.zeros import (
    anchor_check, completed, completed_on_line, decay_verify, find_zeros, get_probe, sobolev_norm, theta_section)


def test_zeta_center_value():
    # Z = Lambda/2 with Lambda(1/2) = pi^{-1/4} Gamma(1/4) zeta(1/2)
    lam = mpmath.pi ** -0.25 * mpmath.gamma(0.25) * mpmath.zeta(0.5)
    assert completed(get_probe("zeta"), 0.5).real == pytest.approx(float(lam) / 2, rel=1e-10)


def test_delta_center_is_real():
    assert abs(completed(get_probe("delta"), 0.5).imag) < 1e-10


def test_conjugate_symmetry():
    probe = get_probe("zeta")
    a = completed(probe, 0.5 + 3j)
    b = completed(probe, 0.5 - 3j)
    assert a == pytest.approx(b.conjugate(), abs=1e-13)
    assert abs(a.imag) < 1e-12


def test_off_line_against_mpmath():
    s = 2.3 + 4.0j
    lam = mpmath.pi ** (-s / 2) * mpmath.gamma(s / 2) * mpmath.zeta(s) / 2
    assert completed(get_probe("zeta"), s) == pytest.approx(complex(lam), rel=1e-10)


def test_anchor_identity():
    for name in ("zeta", "chi4"):
        assert anchor_check(get_probe(name))["rel_diff"] < 1e-8


def test_anchor_mismatch_raises(monkeypatch):
    monkeypatch.setattr(zeros, "ANCHOR_TOL", 0.0)
    with pytest.raises(PhiMismatch):
        completed_on_line(get_probe("zeta"), 1.0)


def test_zeta_zeros():
    probe = get_probe("zeta")
    rep = find_zeros(probe, (10, 15), 0.05)
    assert len(rep.mus) == 1
    assert rep.mus[0] == pytest.approx(float(mpmath.zetazero(1).imag), abs=1e-3)
    assert find_zeros(probe, (0, 5), 0.05).mus == []


def test_chi4_zeros_are_l_zeros():
    rep = find_zeros(get_probe("chi4"), (5, 11), 0.05)
    assert len(rep.mus) == 2
    for mu in rep.mus:
        assert abs(mpmath.dirichlet(0.5 + 1j * mu, [0, 1, 0, -1])) < 1e-5


def test_s00_probe_finds_zeta_zero():
    rep = find_zeros(get_probe("tate-s00"), (13.5, 14.5), 0.05)
    assert rep.mus and rep.mus[0] == pytest.approx(14.134725, abs=1e-3)


def test_report_serialization():
    rep = find_zeros(get_probe("zeta"), (14, 14.3), 0.05)
    obj = rep.to_json()
    assert obj["multiplicity"] == [1] and "anchor" in obj["metadata"]
    assert rep.csv_rows()[0] == ("mu", "re", "im") and len(rep.csv_rows()) == len(rep.scan) + 1


# Sobolev norm ------------------------------------------------------------------

def test_sobolev_zero():
    v = np.linspace(-3, 3, 61)
    n = sobolev_norm((v, np.zeros_like(v)), 2.0)
    assert n.value == 0 and not n.divergent


def test_sobolev_growing_flagged():
    v = np.linspace(-3, 3, 61)
    n = sobolev_norm((v, np.exp(0.1 * np.exp(np.abs(v)))), 2.0)
    assert n.divergent and math.isinf(float(n))


def tate_s00_oracle(t, phi3, M):
    # direct sum of phi(alpha t) over alpha = n/9 (the 3-adic component reaches valuation -2);
    # odd n only (unit indicator at 2), basic elsewhere contributes r^{-1/2}
    total = 0.0
    for n in range(1, M + 1, 2):
        b = ord_p(n, 3)
        r = n // 3 ** b
        a = n / 9
        val = math.sqrt(a * t) * math.exp(-math.pi * a * a * t * t) / math.sqrt(r)
        u = r % 3
        total += val * (phi3(b - 2, u) + phi3(b - 2, (-u) % 3)).real
    return total


def test_sobolev_tate_s00_against_oracle():
    probe = get_probe("tate-s00")
    ph3 = probe.phi.component(3)
    cache = {}

    def phi3(b, u):
        if (b, u) not in cache:
            cache[(b, u)] = evaluate(ph3, PAdicPoint(3, b, u))
        return cache[(b, u)]

    v = np.linspace(-5, 3, 401)
    got = sobolev_norm((v, theta_section(probe, np.exp(v))), 2.0)
    assert not got.divergent

    def integrand(x):
        t = float(mpmath.exp(x))
        M = int(72 / t) + 3
        return tate_s00_oracle(t, phi3, M) ** 2 * (1 + float(x) ** 2)

    want = float(mpmath.quad(integrand, [-5, -3, -1, 0, 1, 3]))
    # the geometric tails beyond the grid are below 1e-12 here
    assert got.value == pytest.approx(want, rel=1e-8)


# decay -------------------------------------------------------------------------

def test_decay_examples():
    assert decay_verify(get_probe("delta"), 3)
    assert decay_verify(get_probe("tate-s00"), 5)
    # all-basic Tate data grow like t^{-1/2} at 0
    assert not decay_verify(get_probe("zeta"), 1)


def test_decay_constant_monotone_in_kappa():
    probe = get_probe("delta")
    cs = [decay_verify(probe, k).constant for k in (1, 2, 3)]
    assert cs == sorted(cs)
