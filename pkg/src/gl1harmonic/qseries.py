"""Exact Laurent polynomials, rational functions and truncated power series in z = q^{-s}.

Coefficients are exact cyclotomic numbers (``Cyclo``).  Gaussian rationals are
the common case; square roots of primes and Gauss sums also occur once the
local L-factors and epsilon factors enter.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .cyclotomic import Cyclo, as_cyclo
from .errors import DivisionByZero, PoleAtZero

__all__ = [
    "LaurentPoly",
    "RationalFn",
    "PowerSeries",
    "Evaluation",
    "expand",
    "residue_at_zero",
    "evaluate",
    "coerce",
]


def coerce(c) -> Cyclo:
    if isinstance(c, Cyclo):
        return c
    if isinstance(c, (int, Fraction)):
        return Cyclo.rational(c)
    if isinstance(c, str):
        return Cyclo.rational(Fraction(c))
    if isinstance(c, (tuple, list)) and len(c) == 2:
        return Cyclo.gaussian(Fraction(c[0]), Fraction(c[1]))
    r = as_cyclo(c)
    if r is NotImplemented:
        raise TypeError(f"not an exact coefficient: {c!r}")
    return r


class LaurentPoly:
    """Finite sum of c_k z^k with exact coefficients; immutable."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        c = {}
        if coeffs:
            for k, v in coeffs.items():
                v = coerce(v)
                if not v.is_zero():
                    c[int(k)] = v
        self._c = c

    @classmethod
    def _raw(cls, c: dict) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._c = c
        return obj

    @classmethod
    def monomial(cls, k: int, c=1) -> "LaurentPoly":
        return cls({k: c})

    @classmethod
    def from_list(cls, coeffs: Iterable, shift: int = 0) -> "LaurentPoly":
        return cls({shift + i: c for i, c in enumerate(coeffs)})

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def __getitem__(self, k: int) -> Cyclo:
        return self._c.get(k, Cyclo.zero())

    def is_zero(self) -> bool:
        return not self._c

    def low(self) -> int:
        return min(self._c) if self._c else 0

    def high(self) -> int:
        return max(self._c) if self._c else 0

    def is_constant(self) -> bool:
        return not self._c or set(self._c) == {0}

    def __add__(self, other):
        other = _as_laurent(other)
        c = dict(self._c)
        for k, v in other._c.items():
            w = c[k] + v if k in c else v
            if w.is_zero():
                c.pop(k, None)
            else:
                c[k] = w
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-_as_laurent(other))

    def __rsub__(self, other):
        return _as_laurent(other) - self

    def __mul__(self, other):
        if isinstance(other, RationalFn):
            return NotImplemented
        other = _as_laurent(other)
        c: dict = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                k = i + j
                c[k] = c[k] + a * b if k in c else a * b
        return LaurentPoly._raw({k: v for k, v in c.items() if not v.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = LaurentPoly({0: 1})
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = _as_laurent(other)
        except TypeError:
            return NotImplemented
        if set(self._c) != set(other._c):
            return False
        return all(self._c[k] == other._c[k] for k in self._c)

    __hash__ = None

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly._raw({e + k: v for e, v in self._c.items()})

    def scale(self, c) -> "LaurentPoly":
        """Substitute z -> c z."""
        c = coerce(c)
        return LaurentPoly({k: v * c ** k for k, v in self._c.items()})

    def reciprocal(self, c=1) -> "LaurentPoly":
        """Substitute z -> c / z."""
        c = coerce(c)
        return LaurentPoly({-k: v * c ** k for k, v in self._c.items()})

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({k - 1: v * k for k, v in self._c.items() if k != 0})

    def __call__(self, z: complex) -> complex:
        return sum((v.to_complex() * z ** k for k, v in self._c.items()), 0j)

    def to_json(self) -> dict:
        return {str(k): v.to_json() for k, v in self.items()}

    @classmethod
    def from_json(cls, obj: Mapping) -> "LaurentPoly":
        return cls({int(k): Cyclo.from_json(v) for k, v in obj.items()})

    def __repr__(self):
        if not self._c:
            return "LaurentPoly(0)"
        return "LaurentPoly(" + " + ".join(f"({v!r})z^{k}" for k, v in self.items()) + ")"


def _as_laurent(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly({0: coerce(x)})


# dense polynomial helpers over the coefficient field -------------------------

def _dense(p: LaurentPoly) -> list:
    """Dense coefficient list of a polynomial (nonnegative exponents)."""
    if p.is_zero():
        return []
    out = [Cyclo.zero()] * (p.high() + 1)
    for k, v in p.items():
        out[k] = v
    return out


def _trim(a: list) -> list:
    while a and a[-1].is_zero():
        a.pop()
    return a


def _divmod(a: list, b: list):
    a = list(a)
    inv = b[-1].inverse()
    q = [Cyclo.zero()] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        f = a[-1] * inv
        d = len(a) - len(b)
        q[d] = f
        for i, bi in enumerate(b):
            a[d + i] = a[d + i] - f * bi
        a.pop()
        _trim(a)
    return q, a


def _gcd(a: list, b: list) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _divmod(a, b)
        a, b = b, r
    if not a:
        return a
    inv = a[-1].inverse()
    return [c * inv for c in a]


class RationalFn:
    """num/den with den a polynomial normalized to den(0) = 1.

    Any power of z in the denominator is moved into the numerator, so the
    structure is canonical: equal functions have equal (num, den).
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _normalized: bool = False):
        num = _as_laurent(num)
        den = _as_laurent(1 if den is None else den)
        if _normalized:
            self.num, self.den = num, den
            return
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = LaurentPoly(), LaurentPoly({0: 1})
            return
        shift = -den.low()
        den = den.shift(shift)
        num = num.shift(shift)
        if den.high() > 0:
            nshift = num.low()
            nd, dd = _dense(num.shift(-nshift)), _dense(den)
            g = _gcd(nd, dd)
            if len(g) > 1:
                nd, _ = _divmod(nd, g)
                dd, _ = _divmod(dd, g)
            c0 = dd[0].inverse()
            num = LaurentPoly.from_list([c * c0 for c in nd], nshift)
            den = LaurentPoly.from_list([c * c0 for c in dd])
        else:
            num = num * den[0].inverse()
            den = LaurentPoly({0: 1})
        self.num, self.den = num, den

    @classmethod
    def polynomial(cls, p) -> "RationalFn":
        return cls(p, 1, _normalized=True) if isinstance(p, LaurentPoly) else cls(p)

    @classmethod
    def lfactor(cls, den_coeffs: Iterable) -> "RationalFn":
        """1 / (sum_k d_k z^k) with d_0 = 1."""
        return cls(1, LaurentPoly.from_list(list(den_coeffs)))

    def is_laurent(self) -> bool:
        return self.den.is_constant()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise ValueError("not a Laurent polynomial")
        return self.num

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = _as_rational(other)
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        return self + (-_as_rational(other))

    def __rsub__(self, other):
        return _as_rational(other) - self

    def __mul__(self, other):
        other = _as_rational(other)
        if self.den.is_constant() and other.den.is_constant():
            return RationalFn(self.num * other.num, 1, _normalized=True)
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rational(other)
        if other.is_zero():
            raise DivisionByZero("division by the zero rational function")
        return RationalFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_rational(other) / self

    def __eq__(self, other):
        try:
            other = _as_rational(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    __hash__ = None

    def reciprocal(self, c=1) -> "RationalFn":
        """Substitute z -> c / z (realizes s -> 1 - s when c = q^{-1})."""
        return RationalFn(self.num.reciprocal(c), self.den.reciprocal(c))

    def scale(self, c) -> "RationalFn":
        """Substitute z -> c z."""
        return RationalFn(self.num.scale(c), self.den.scale(c))

    def derivative(self) -> "RationalFn":
        return RationalFn(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    # expansion ----------------------------------------------------------
    def _inverse_den_series(self, n: int) -> list:
        d = _dense(self.den)
        h = [Cyclo.one()]
        for j in range(1, n + 1):
            acc = Cyclo.zero()
            for i in range(1, min(j, len(d) - 1) + 1):
                if not d[i].is_zero():
                    acc = acc - d[i] * h[j - i]
            h.append(acc)
        return h

    def laurent_coefficients(self, lo: int, hi: int) -> dict:
        """Coefficients of z^m, lo <= m <= hi, in the Laurent expansion at 0."""
        if self.num.is_zero() or hi < self.num.low():
            return {m: Cyclo.zero() for m in range(lo, hi + 1)}
        if self.is_laurent():
            return {m: self.num[m] for m in range(lo, hi + 1)}
        h = self._inverse_den_series(hi - self.num.low())
        out = {}
        for m in range(lo, hi + 1):
            acc = Cyclo.zero()
            for k, v in self.num.items():
                j = m - k
                if 0 <= j < len(h):
                    acc = acc + v * h[j]
            out[m] = acc
        return out

    def coefficient(self, m: int) -> Cyclo:
        return self.laurent_coefficients(m, m)[m]

    def low(self) -> int:
        """Lowest exponent of the Laurent expansion at 0."""
        return self.num.low()

    def __call__(self, z0: complex) -> complex:
        return evaluate(self, z0).value

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, obj: Mapping) -> "RationalFn":
        return cls(LaurentPoly.from_json(obj["num"]), LaurentPoly.from_json(obj["den"]))

    def __repr__(self):
        if self.is_laurent():
            return f"RationalFn({self.num!r})"
        return f"RationalFn({self.num!r} / {self.den!r})"


def _as_rational(x) -> RationalFn:
    if isinstance(x, RationalFn):
        return x
    return RationalFn(_as_laurent(x), 1, _normalized=True)


@dataclass(frozen=True)
class PowerSeries:
    coeffs: tuple
    order: int

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError("PowerSeries needs order+1 coefficients")

    @classmethod
    def of(cls, coeffs) -> "PowerSeries":
        cs = tuple(coerce(c) for c in coeffs)
        return cls(cs, len(cs) - 1)

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order)
        return PowerSeries(tuple(self.coeffs[i] + other.coeffs[i] for i in range(n + 1)), n)

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = Cyclo.zero()
            for i in range(k + 1):
                acc = acc + self.coeffs[i] * other.coeffs[k - i]
            out.append(acc)
        return PowerSeries(tuple(out), n)

    def __eq__(self, other):
        if isinstance(other, PowerSeries):
            return self.order == other.order and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        if isinstance(other, (list, tuple)):
            return len(other) == self.order + 1 and all(a == coerce(b) for a, b in zip(self.coeffs, other))
        return NotImplemented

    __hash__ = None

    def __getitem__(self, k):
        return self.coeffs[k]


def expand(r: RationalFn, N: int) -> PowerSeries:
    """First N+1 Taylor coefficients of r at z = 0."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if not r.is_zero() and r.num.low() < 0:
        raise PoleAtZero("rational function has a pole at z = 0; use a Laurent shift")
    cs = r.laurent_coefficients(0, N)
    return PowerSeries(tuple(cs[m] for m in range(N + 1)), N)


def residue_at_zero(r: RationalFn) -> Cyclo:
    """Coefficient of z^{-1} in the Laurent expansion of r at 0."""
    return r.coefficient(-1)


@dataclass(frozen=True)
class Evaluation:
    value: complex
    error: float


_EPS = sys.float_info.epsilon


def _horner(p: LaurentPoly, z0: complex):
    val = 0j
    mag = 0.0
    az = abs(z0)
    for k, v in p.items():
        c = v.to_complex()
        val += c * z0 ** k
        mag += abs(c) * az ** k
    return val, mag


def evaluate(r: RationalFn, z0: complex) -> Evaluation:
    """Floating evaluation with a first-order rounding-error estimate."""
    z0 = complex(z0)
    if z0 == 0 and r.num.low() < 0:
        raise DivisionByZero("z0 = 0 is a pole")
    n, nmag = _horner(r.num, z0)
    d, dmag = _horner(r.den, z0)
    k = max(len(r.num.coeffs), len(r.den.coeffs)) + 1
    if abs(d) <= 4 * k * _EPS * dmag:
        raise DivisionByZero(f"z0 = {z0} is (numerically) a pole")
    value = n / d
    err = 4 * k * _EPS * (nmag + abs(value) * dmag) / abs(d)
    return Evaluation(value, err)
