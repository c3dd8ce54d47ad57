"""Non-Archimedean local theory on GL(1) in Mellin coordinates.

A pi-Schwartz function on Q_p^x is stored through its zeta integrals
Z(s, phi, omega) = int phi(x) omega(ac x) |x|^{s-1/2} d^x x, one rational
function of z = p^{-s} per unit character omega.  With vol(Z_p^x) = 1 the
coefficient of z^m in Z(s, phi, omega) is p^{m/2} times the omega-Fourier
coefficient of v -> phi(p^m v), which gives both evaluation and the inverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .cyclotomic import Cyclo, root_of_unity, sqrt_prime
from .errors import AssumptionViolated, InsufficientPrecision, NotInSchwartzSpace, RamifiedPlace
from .localfield import AdditiveChar, MultChar, PAdicPoint, characters, gauss_sum, unit_group
from .qseries import LaurentPoly, RationalFn, coerce

__all__ = [
    "UnramifiedRep",
    "NASchwartz",
    "GammaFactor",
    "basic",
    "newform",
    "evaluate",
    "evaluate_exact",
    "mellin",
    "mellin_from_values",
    "gamma_na",
    "fourier_na",
    "membership_compact",
    "in_schwartz_space",
    "basic_exponent",
    "binomial_bound",
    "sqrt_p_power",
]


def sqrt_p_power(p: int, k: int) -> Cyclo:
    """p^{k/2} exactly."""
    if k % 2 == 0:
        return Cyclo.rational(Fraction(p) ** (k // 2))
    return sqrt_prime(p) * Fraction(p) ** ((k - 1) // 2)


def _elementary(values: list) -> list:
    """e_1..e_n of a list of exact numbers."""
    e = [Cyclo.one()]
    for a in values:
        new = e + [Cyclo.zero()]
        for k in range(len(e), 0, -1):
            new[k] = new[k] + e[k - 1] * a
        e = new
    return e[1:]


@dataclass(frozen=True, eq=False)
class UnramifiedRep:
    """Local component given by Satake data, optionally twisted by a ramified unit character.

    ``hecke`` holds the elementary symmetric functions e_1..e_n of the Satake
    values exactly; ``satake`` holds the numeric values alpha_j = p^{s_j}.
    A non-None ``twist`` means pi = (unramified with these Satake values) x omega_0
    where omega_0 is the unit character ``twist`` extended by omega_0(p) = 1.
    """

    p: int
    hecke: tuple
    satake: tuple
    kappa: float
    twist: MultChar | None = None

    def __post_init__(self):
        object.__setattr__(self, "hecke", tuple(coerce(e) for e in self.hecke))
        object.__setattr__(self, "satake", tuple(complex(a) for a in self.satake))
        if len(self.hecke) != len(self.satake):
            raise ValueError("hecke and satake lengths differ")
        if self.twist is not None and self.twist.is_trivial:
            object.__setattr__(self, "twist", None)
        if self.twist is not None and self.twist.u != (0, 0):
            raise ValueError("twist must be a finite-order unit character")
        if self.n and self.max_real_exponent() >= self.kappa:
            raise AssumptionViolated(
                f"max |Re s_j| = {self.max_real_exponent():.6g} is not below kappa = {self.kappa}"
            )

    @classmethod
    def from_satake(cls, p: int, alphas, kappa: float, twist: MultChar | None = None) -> "UnramifiedRep":
        alphas = [coerce(a) for a in alphas]
        return cls(p, tuple(_elementary(alphas)), tuple(a.to_complex() for a in alphas), kappa, twist)

    @classmethod
    def from_hecke(cls, p: int, hecke, kappa: float, satake=None, twist=None) -> "UnramifiedRep":
        hecke = [coerce(e) for e in hecke]
        if satake is None:
            # roots of X^n - e1 X^{n-1} + e2 X^{n-2} - ...
            coeffs = [1.0] + [(-1) ** (k + 1) * e.to_complex() for k, e in enumerate(hecke)]
            satake = np.roots(coeffs) if len(coeffs) > 1 else []
            satake = sorted((complex(a) for a in satake), key=lambda a: (round(a.real, 12), round(a.imag, 12)))
        return cls(p, tuple(hecke), tuple(satake), kappa, twist)

    @classmethod
    def trivial(cls, p: int, kappa: float = 0.01) -> "UnramifiedRep":
        return cls.from_satake(p, [1], kappa)

    @property
    def n(self) -> int:
        return len(self.hecke)

    def real_exponents(self) -> list:
        return [math.log(abs(a)) / math.log(self.p) for a in self.satake]

    def max_real_exponent(self) -> float:
        return max((abs(x) for x in self.real_exponents()), default=0.0)

    def lpoly(self) -> LaurentPoly:
        """prod_j (1 - alpha_j z) = 1 - e1 z + e2 z^2 - ..."""
        c = {0: 1}
        for k, e in enumerate(self.hecke, start=1):
            c[k] = e * (-1) ** k
        return LaurentPoly(c)

    def unit_character(self, omega: MultChar | None = None) -> MultChar:
        """The unit character of pi x omega (twist times omega)."""
        base = self.twist if self.twist is not None else MultChar.trivial(self.p)
        if omega is None:
            return base
        return base * omega.finite_part

    def lfactor(self, omega: MultChar | None = None) -> RationalFn:
        """L(s, pi x omega) as a rational function of z."""
        if not self.unit_character(omega).is_trivial:
            return RationalFn(1)
        return RationalFn(1, self.lpoly())

    def contragredient(self) -> "UnramifiedRep":
        # e_k(alpha^{-1}) = e_{n-k}(alpha) / e_n(alpha)
        en = self.hecke[-1]
        inv = en.inverse()
        n = self.n
        hecke = [self.hecke[n - k - 2] * inv if k < n - 1 else inv for k in range(n)]
        satake = tuple(1 / a for a in self.satake)
        twist = self.twist.inverse() if self.twist is not None else None
        return UnramifiedRep(self.p, tuple(hecke), satake, self.kappa, twist)

    def same_as(self, other: "UnramifiedRep") -> bool:
        return (
            self.p == other.p
            and self.n == other.n
            and all(a == b for a, b in zip(self.hecke, other.hecke))
            and (self.twist == other.twist)
        )

    def to_json(self):
        return {
            "p": self.p,
            "hecke": [e.to_json() for e in self.hecke],
            "satake": [[a.real, a.imag] for a in self.satake],
            "kappa": self.kappa,
            "twist": None if self.twist is None else self.twist.to_json(),
        }


def _clean(data: Mapping) -> dict:
    out = {}
    for k, v in data.items():
        v = v if isinstance(v, RationalFn) else RationalFn(v)
        if not v.is_zero():
            out[k.finite_part] = v
    return out


@dataclass(frozen=True, eq=False)
class NASchwartz:
    p: int
    rep: UnramifiedRep
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "data", _clean(self.data))
        for k in self.data:
            if k.p != self.p:
                raise ValueError("character prime mismatch")

    def keys(self) -> list:
        return sorted(self.data, key=lambda k: (k.cond, k.key()))

    def max_conductor(self) -> int:
        return max((k.cond for k in self.data), default=0)

    def support_range(self):
        """(lowest m, highest m or None) of the valuation support."""
        if not self.data:
            return None
        lo = min(r.low() for r in self.data.values())
        if all(r.is_laurent() for r in self.data.values()):
            hi = max(r.num.high() for r in self.data.values())
        else:
            hi = None
        return lo, hi

    def __eq__(self, other):
        if not isinstance(other, NASchwartz) or other.p != self.p:
            return NotImplemented
        if set(self.data) != set(other.data):
            return False
        return all(self.data[k] == other.data[k] for k in self.data)

    __hash__ = None

    def __add__(self, other: "NASchwartz") -> "NASchwartz":
        data = dict(self.data)
        for k, v in other.data.items():
            data[k] = data[k] + v if k in data else v
        return NASchwartz(self.p, self.rep, data)

    def scale(self, c) -> "NASchwartz":
        c = coerce(c)
        return NASchwartz(self.p, self.rep, {k: v * RationalFn(c) for k, v in self.data.items()})

    def translate(self, y: PAdicPoint) -> "NASchwartz":
        """x -> phi(x y)."""
        # Z(s, phi(. y), omega) = omega(ac y)^{-1} |y|^{-(s-1/2)} Z(s, phi, omega)
        out = {}
        for k, v in self.data.items():
            if y.c < k.cond:
                raise InsufficientPrecision("translation point precision below conductor")
            factor = root_of_unity(-k.turns(y.u)) * sqrt_p_power(self.p, -y.m)
            out[k] = v * RationalFn(LaurentPoly({-y.m: factor}))
        return NASchwartz(self.p, self.rep, out)

    def to_json(self):
        return {
            "p": self.p,
            "rep": self.rep.to_json(),
            "data": [{"omega": k.to_json(), "zeta": self.data[k].to_json()} for k in self.keys()],
        }


def basic(rep: UnramifiedRep) -> NASchwartz:
    """The basic function L_pi: Mellin data {trivial: L(s, pi)}."""
    if rep.twist is not None:
        raise RamifiedPlace("basic() needs an unramified representation; use newform()")
    return NASchwartz(rep.p, rep, {MultChar.trivial(rep.p): RationalFn(1, rep.lpoly())})


def newform(rep: UnramifiedRep) -> NASchwartz:
    """|x|^{1/2} pi(x) 1_{Z_p}(x) for a character-twisted rep: data {twist^{-1}: L}."""
    key = rep.twist.inverse() if rep.twist is not None else MultChar.trivial(rep.p)
    return NASchwartz(rep.p, rep, {key: RationalFn(1, rep.lpoly())})


def mellin(phi: NASchwartz, omega: MultChar) -> RationalFn:
    return phi.data.get(omega.finite_part, RationalFn(0))


def _point_value_scaled(phi: NASchwartz, m: int, u: int) -> Cyclo:
    """phi(p^m u) * p^{m/2}: exact, free of square roots."""
    acc = Cyclo.zero()
    for k, r in phi.data.items():
        c = r.coefficient(m)
        if c.is_zero():
            continue
        acc = acc + c * root_of_unity(-k.turns(u))
    return acc


def evaluate_exact(phi: NASchwartz, x: PAdicPoint) -> Cyclo:
    if x.p != phi.p:
        raise ValueError("prime mismatch")
    if x.c < phi.max_conductor():
        raise InsufficientPrecision(f"need unit residue mod p^{phi.max_conductor()}")
    rng = phi.support_range()
    if rng is None or x.m < rng[0] or (rng[1] is not None and x.m > rng[1]):
        return Cyclo.zero()
    return _point_value_scaled(phi, x.m, x.u) * sqrt_p_power(phi.p, -x.m)


def evaluate(phi: NASchwartz, x: PAdicPoint) -> complex:
    if x.p != phi.p:
        raise ValueError("prime mismatch")
    if x.c < phi.max_conductor():
        raise InsufficientPrecision(f"need unit residue mod p^{phi.max_conductor()}")
    rng = phi.support_range()
    if rng is None or x.m < rng[0] or (rng[1] is not None and x.m > rng[1]):
        return 0j
    return _point_value_scaled(phi, x.m, x.u).to_complex() * phi.p ** (-x.m / 2)


def mellin_from_values(p: int, c: int, values: Mapping) -> dict:
    """Invert point values back to Mellin data.

    ``values`` maps (m, u) with u a unit mod p^c to the exact value phi(p^m u).
    Returns {omega: LaurentPoly} over all characters of conductor <= c.
    """
    _, _, log = unit_group(p, c)
    units = sorted(log)
    ms = sorted({m for m, _ in values})
    vol = Fraction(1, len(units))
    out = {}
    for ch in characters(p, c):
        coeffs = {}
        inv_vals = {u: root_of_unity(ch.turns(u)) for u in units}
        for m in ms:
            acc = Cyclo.zero()
            for u in units:
                v = values.get((m, u))
                if v is not None and not v.is_zero():
                    acc = acc + v * inv_vals[u]
            if not acc.is_zero():
                coeffs[m] = acc * vol * sqrt_p_power(p, m)
        if coeffs:
            out[ch] = LaurentPoly(coeffs)
    return out


@dataclass(frozen=True, eq=False)
class GammaFactor:
    """gamma(s, pi x omega, psi) as a rational function of z = p^{-s}."""

    value: RationalFn
    ramified: bool
    conductor: int
    shift: str = "1-s realized as z -> p^{-1}/z"

    def __call__(self, z0: complex) -> complex:
        return self.value(z0)


def gamma_na(rep: UnramifiedRep, omega: MultChar, psi: AdditiveChar | None = None) -> GammaFactor:
    p = rep.p
    psi = psi or AdditiveChar(p)
    nu = rep.unit_character(omega)
    if nu.is_trivial:
        dual = rep.contragredient()
        num = RationalFn(rep.lpoly())
        den = RationalFn(dual.lpoly()).reciprocal(Fraction(1, p))
        return GammaFactor(num / den, False, 0)
    c = nu.cond
    n = rep.n
    g = gauss_sum(nu.inverse(), psi).exact
    coef = rep.hecke[-1] ** c * g ** n
    return GammaFactor(RationalFn(LaurentPoly({n * c: coef})), True, c)


def in_schwartz_space(rep: UnramifiedRep, data: Mapping) -> bool:
    """Fractional-ideal test: every entry is a Laurent multiple of L(s, pi x omega)."""
    for k, r in data.items():
        q = r * RationalFn(rep.lpoly()) if rep.unit_character(k).is_trivial else r
        if not q.is_laurent():
            return False
    return True


def fourier_na(phi: NASchwartz, psi: AdditiveChar | None = None) -> NASchwartz:
    """F_{pi,psi}: Z(1-s, F phi, omega^{-1}) = gamma(s, pi x omega, psi) Z(s, phi, omega)."""
    p = phi.p
    psi = psi or AdditiveChar(p)
    dual = phi.rep.contragredient()
    out = {}
    q_inv = Fraction(1, p)
    for k, r in phi.data.items():
        gam = gamma_na(phi.rep, k, psi).value
        out[k.inverse()] = (gam * r).reciprocal(q_inv)
    if not in_schwartz_space(dual, out):
        raise NotInSchwartzSpace("gamma-transported data is not in the dual fractional ideal")
    return NASchwartz(p, dual, out)


def membership_compact(phi: NASchwartz) -> bool:
    return all(r.is_laurent() for r in phi.data.values())


def basic_exponent(n: int, kappa: float, tmax: int = 400) -> float:
    """b_pi = kappa + max_{t>=1} log_2 C(t+n-1, n-1) / t: the growth exponent of basic functions."""
    c0 = max((math.log2(math.comb(t + n - 1, n - 1)) / t for t in range(1, tmax + 1)), default=0.0)
    return kappa + c0


def binomial_bound(rep: UnramifiedRep, m: int) -> float:
    """C(m+n-1, n-1) p^{-m/2} p^{m max_j Re s_j}: bound for |L_pi(p^m)|."""
    smax = max(rep.real_exponents(), default=0.0)
    return math.comb(m + rep.n - 1, rep.n - 1) * rep.p ** (-m / 2 + m * smax)
