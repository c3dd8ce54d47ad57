import json

import pytest

from gl1harmonic import repdata
from gl1harmonic.cyclotomic import Cyclo
from gl1harmonic.errors import RamifiedPlace
from gl1harmonic.localfield import MultChar, primes_up_to
from gl1harmonic.repdata import DirichletCharacter, contragredient, get_rep, satake, sym_rep, tau_coeffs

# OEIS A000594
TAU_10 = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]


def tau_oracle(N):
    """Naive expansion of q prod (1 - q^n)^24."""
    poly = [1] + [0] * N
    for n in range(1, N + 1):
        for _ in range(24):
            for k in range(N, n - 1, -1):
                poly[k] -= poly[k - n]
    return poly[:N]


def test_tau_known_values():
    assert tau_coeffs(10) == TAU_10


def test_tau_against_naive_product():
    assert tau_coeffs(300, use_cache=False) == tau_oracle(300)


def test_tau_hecke_relations():
    tau = tau_coeffs(2000)
    for m, n in [(2, 3), (5, 7), (4, 9), (11, 13)]:
        assert tau[m * n - 1] == tau[m - 1] * tau[n - 1]
    for p in (2, 3, 5, 7):
        assert tau[p * p - 1] == tau[p - 1] ** 2 - p ** 11
    for p in (2, 3, 5, 101, 997):
        assert abs(tau[p - 1]) <= 2 * p ** 5.5


def test_tau_cache_round_trip_and_corruption(tmp_path, monkeypatch):
    monkeypatch.setenv(repdata.CACHE_ENV, str(tmp_path))
    repdata._tau_cached.cache_clear()
    first = tau_coeffs(50)
    path = tmp_path / "tau_1000.bin"
    header = json.loads(path.read_bytes().partition(b"\n")[0])
    assert header["N"] == 1000 and header["format_version"] == repdata.TAU_FORMAT_VERSION
    assert repdata._read_cache(path, 1000)[:50] == first

    raw = bytearray(path.read_bytes())
    raw[-3] ^= 0xFF
    path.write_bytes(bytes(raw))
    assert repdata._read_cache(path, 1000) is None
    repdata._tau_cached.cache_clear()
    assert tau_coeffs(50) == first
    assert repdata._read_cache(path, 1000) is not None
    repdata._tau_cached.cache_clear()


def test_tau_limit():
    with pytest.raises(ValueError):
        tau_coeffs(10, limit=5)
    with pytest.raises(ValueError):
        tau_coeffs(0)


def test_kronecker_characters():
    chi4 = DirichletCharacter.kronecker(-4)
    assert [round(chi4(n).real) for n in range(1, 9)] == [1, 0, -1, 0, 1, 0, -1, 0]
    assert chi4.parity == 1
    chi5 = DirichletCharacter.kronecker(5)
    assert [round(chi5(n).real) for n in range(1, 6)] == [1, -1, -1, 1, 0]
    assert chi5.parity == 0
    assert DirichletCharacter.from_json(chi5.to_json()) == chi5


def test_local_unit_character_of_chi4():
    loc = DirichletCharacter.kronecker(-4).local_unit_character(2)
    assert loc == MultChar.quadratic(2)


def test_satake_examples():
    assert satake(get_rep("tate"), 5).satake == (1,)
    d2 = satake(get_rep("delta"), 2)
    a, b = d2.satake
    assert (a + b).real == pytest.approx(-24 * 2 ** -5.5)
    assert a * b == pytest.approx(1)
    assert d2.hecke[1] == Cyclo.one()


def test_delta_ramanujan_bound():
    # checked, not assumed: for real a_p, |alpha| = 1 iff |tau(p)| <= 2 p^{11/2}
    tau = tau_coeffs(10 ** 4)
    assert all(tau[p - 1] ** 2 <= 4 * p ** 11 for p in map(int, primes_up_to(10 ** 4)))
    rep = get_rep("delta")
    for p in (2, 3, 5, 7, 97, 499, 1009, 4999, 9973):
        assert max(abs(abs(a) - 1) for a in satake(rep, p).satake) < 1e-12


@pytest.mark.parametrize("p", [2, 3, 5, 13])
def test_sym2_against_satake_products(p):
    a, b = satake(get_rep("delta"), p).satake
    s2 = satake(sym_rep(2), p)
    got = sorted(s2.satake, key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    want = sorted([a * a, a * b, b * b], key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    assert got == pytest.approx(want, abs=1e-12)
    # exact e1 of {a^2, ab, b^2} = (a+b)^2 - ab
    e1 = satake(get_rep("delta"), p).hecke[0]
    assert s2.hecke[0] == e1 * e1 - Cyclo.one()


def test_sym_small_cases():
    assert sym_rep(0).kind == "dirichlet" and sym_rep(0).character.is_trivial
    assert sym_rep(1).name == "delta"


def test_conductors_and_ramification():
    chi4 = get_rep("chi4")
    assert chi4.conductor == 4 and chi4.ramified_primes() == [2]
    with pytest.raises(RamifiedPlace):
        satake(chi4, 2)
    assert get_rep("delta").conductor == 1


def test_contragredients():
    assert contragredient(get_rep("delta")) == get_rep("delta")
    assert contragredient(get_rep("chi4")) == get_rep("chi4")


def test_unknown_rep():
    with pytest.raises(ValueError):
        get_rep("nope")
