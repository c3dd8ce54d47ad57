"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are stored as rational polynomials in zeta_n reduced modulo the
n-th cyclotomic polynomial.  Mixed-order arithmetic lifts both operands to
the least common multiple of the orders.  Gaussian rationals, roots of unity,
Gauss sums and square roots of primes all live here exactly, which is what
the local non-Archimedean identities need.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

from flint import fmpq, fmpq_poly, fmpz_poly

__all__ = ["Cyclo", "root_of_unity", "sqrt_prime", "as_cyclo"]


@lru_cache(maxsize=None)
def _phi_poly(n: int) -> fmpq_poly:
    return fmpq_poly(fmpz_poly.cyclotomic(n))


@lru_cache(maxsize=None)
def _powers(n: int):
    return [cmath.exp(2j * math.pi * k / n) for k in range(n)]


def _canon_order(n: int) -> int:
    # Q(zeta_2m) = Q(zeta_m) for odd m
    return n // 2 if n % 4 == 2 else n


def _to_fmpq(x) -> fmpq:
    if isinstance(x, fmpq):
        return x
    if isinstance(x, int):
        return fmpq(x)
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    if isinstance(x, str):
        f = Fraction(x)
        return fmpq(f.numerator, f.denominator)
    raise TypeError(f"cannot make an exact rational from {x!r}")


def _to_fraction(q: fmpq) -> Fraction:
    return Fraction(int(q.p), int(q.q))


class Cyclo:
    """An element of Q(zeta_n), immutable."""

    __slots__ = ("n", "poly")

    def __init__(self, n: int, poly: fmpq_poly, reduced: bool = False):
        self.n = n
        self.poly = poly if reduced else poly % _phi_poly(n)

    # constructors -------------------------------------------------------
    @classmethod
    def rational(cls, x) -> "Cyclo":
        return cls(1, fmpq_poly([_to_fmpq(x)]), reduced=True)

    @classmethod
    def gaussian(cls, re, im) -> "Cyclo":
        re, im = _to_fmpq(re), _to_fmpq(im)
        if im == 0:
            return cls(1, fmpq_poly([re]), reduced=True)
        return cls(4, fmpq_poly([re, im]), reduced=True)

    @classmethod
    def zero(cls) -> "Cyclo":
        return cls(1, fmpq_poly([]), reduced=True)

    @classmethod
    def one(cls) -> "Cyclo":
        return cls(1, fmpq_poly([1]), reduced=True)

    # structure ----------------------------------------------------------
    def _lift(self, N: int) -> fmpq_poly:
        if N == self.n:
            return self.poly
        d = N // self.n
        coeffs = self.poly.coeffs()
        out = [fmpq(0)] * ((len(coeffs) - 1) * d + 1) if coeffs else []
        for k, c in enumerate(coeffs):
            if c != 0:
                out[k * d] = c
        return fmpq_poly(out) % _phi_poly(N)

    def _common(self, other: "Cyclo"):
        if self.n == other.n:
            return self.n, self.poly, other.poly
        N = _canon_order(math.lcm(self.n, other.n))
        if N % self.n or N % other.n:
            N = math.lcm(self.n, other.n)
        return N, self._lift(N), other._lift(N)

    def is_zero(self) -> bool:
        return self.poly.degree() < 0

    def is_rational(self) -> bool:
        return self.poly.degree() <= 0

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return _to_fraction(self.poly[0]) if self.poly.degree() == 0 else Fraction(0)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = as_cyclo(other)
        if other is NotImplemented:
            return NotImplemented
        N, a, b = self._common(other)
        return Cyclo(N, a + b, reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.n, -self.poly, reduced=True)

    def __sub__(self, other):
        other = as_cyclo(other)
        if other is NotImplemented:
            return NotImplemented
        N, a, b = self._common(other)
        return Cyclo(N, a - b, reduced=True)

    def __rsub__(self, other):
        return as_cyclo(other) - self

    def __mul__(self, other):
        other = as_cyclo(other)
        if other is NotImplemented:
            return NotImplemented
        if other.n == 1 and other.poly.degree() <= 0:
            return Cyclo(self.n, self.poly * other.poly, reduced=True)
        if self.n == 1 and self.poly.degree() <= 0:
            return Cyclo(other.n, other.poly * self.poly, reduced=True)
        N, a, b = self._common(other)
        return Cyclo(N, a * b)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclo":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_n)")
        if self.poly.degree() == 0:
            return Cyclo(self.n, fmpq_poly([1 / self.poly[0]]), reduced=True)
        g, s, _ = self.poly.xgcd(_phi_poly(self.n))
        return Cyclo(self.n, s / g[0])

    def __truediv__(self, other):
        other = as_cyclo(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_cyclo(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = Cyclo.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "Cyclo":
        n = self.n
        out = [fmpq(0)] * n
        for k, c in enumerate(self.poly.coeffs()):
            if c != 0:
                out[(-k) % n] += c
        return Cyclo(n, fmpq_poly(out))

    def __eq__(self, other):
        other = as_cyclo(other)
        if other is NotImplemented:
            return NotImplemented
        _, a, b = self._common(other)
        return a == b

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    # numerics -----------------------------------------------------------
    def to_complex(self) -> complex:
        coeffs = self.poly.coeffs()
        if not coeffs:
            return 0j
        if len(coeffs) == 1:
            return complex(float(coeffs[0]))
        pw = _powers(self.n)
        re = math.fsum(float(c) * pw[k].real for k, c in enumerate(coeffs) if c != 0)
        im = math.fsum(float(c) * pw[k].imag for k, c in enumerate(coeffs) if c != 0)
        return complex(re, im)

    def __complex__(self):
        return self.to_complex()

    def as_gaussian(self):
        """Return (re, im) as Fractions when the element lies in Q(i), else None."""
        if self.is_rational():
            return self.rational_value(), Fraction(0)
        re = (self + self.conjugate()) * Fraction(1, 2)
        if not re.is_rational():
            return None
        rest = self - re
        im = rest * Cyclo.gaussian(0, -1)  # divide by i
        if not im.is_rational():
            return None
        return re.rational_value(), im.rational_value()

    def to_json(self):
        g = self.as_gaussian()
        if g is not None:
            return [str(g[0]), str(g[1])]
        coeffs = {str(k): str(_to_fraction(c)) for k, c in enumerate(self.poly.coeffs()) if c != 0}
        return {"order": self.n, "coeffs": coeffs}

    @classmethod
    def from_json(cls, obj) -> "Cyclo":
        if isinstance(obj, (list, tuple)):
            return cls.gaussian(Fraction(obj[0]), Fraction(obj[1]))
        if isinstance(obj, dict):
            n = int(obj["order"])
            out = [fmpq(0)] * n
            for k, c in obj["coeffs"].items():
                out[int(k)] = _to_fmpq(Fraction(c))
            return cls(n, fmpq_poly(out))
        return cls.rational(Fraction(obj))

    def __repr__(self):
        g = self.as_gaussian()
        if g is not None:
            if g[1] == 0:
                return f"Cyclo({g[0]})"
            return f"Cyclo({g[0]} + {g[1]}i)"
        return f"Cyclo(order={self.n}, {self.poly})"


def as_cyclo(x):
    if isinstance(x, Cyclo):
        return x
    if isinstance(x, (int, Fraction, fmpq)):
        return Cyclo.rational(x)
    return NotImplemented


@lru_cache(maxsize=4096)
def _root_of_unity(num: int, den: int) -> Cyclo:
    k = num % den
    if den == 1 or k == 0:
        return Cyclo.one()
    if den % 4 == 2:
        m = den // 2
        if m == 1:
            return Cyclo.rational(-1)
        # zeta_{2m} = -zeta_m^{(m+1)/2}
        e = (k * (m + 1) // 2) % m
        sign = -1 if k % 2 else 1
        out = [fmpq(0)] * (e + 1)
        out[e] = fmpq(sign)
        return Cyclo(m, fmpq_poly(out))
    out = [fmpq(0)] * (k + 1)
    out[k] = fmpq(1)
    return Cyclo(den, fmpq_poly(out))


def root_of_unity(turns) -> Cyclo:
    """exp(2 pi i * turns) for a rational number of turns."""
    t = Fraction(turns)
    return _root_of_unity(t.numerator, t.denominator)


@lru_cache(maxsize=None)
def sqrt_prime(p: int) -> Cyclo:
    """The positive square root of a prime p, as a cyclotomic integer."""
    if p == 2:
        return root_of_unity(Fraction(1, 8)) + root_of_unity(Fraction(-1, 8))
    out = [fmpq(0)] * p
    for a in range(1, p):
        out[a] = fmpq(1 if pow(a, (p - 1) // 2, p) == 1 else -1)
    g = Cyclo(p, fmpq_poly(out))
    if p % 4 == 1:
        return g
    return g * Cyclo.gaussian(0, -1)
