"""p-adic scaffolding over Q_p: points, finite-order characters, psi_p, Gauss sums."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np
from flint import fmpq, fmpq_poly

from .cyclotomic import Cyclo, root_of_unity
from .errors import InsufficientPrecision

__all__ = [
    "PAdicPoint",
    "MultChar",
    "AdditiveChar",
    "CharValue",
    "GaussSum",
    "eval_char",
    "gauss_sum",
    "unit_group",
    "characters",
    "primitive_characters",
    "p_adic_fractional_part",
    "ord_p",
    "is_prime",
    "primes_up_to",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_up_to(n: int) -> list:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return [int(x) for x in np.nonzero(sieve)[0]]


def ord_p(x, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("ord_p(0) is infinite")
    k = 0
    a, b = x.numerator, x.denominator
    while a % p == 0:
        a //= p
        k += 1
    while b % p == 0:
        b //= p
        k -= 1
    return k


def p_adic_fractional_part(x, p: int) -> Fraction:
    """{x}_p in [0,1) with x - {x}_p in Z_p."""
    x = Fraction(x)
    b = x.denominator
    k = 0
    while b % p == 0:
        b //= p
        k += 1
    if k == 0:
        return Fraction(0)
    pk = p ** k
    # x = a / (p^k b), {x}_p = (a b^{-1} mod p^k) / p^k
    a = x.numerator * pow(b, -1, pk) % pk
    return Fraction(a, pk)


@dataclass(frozen=True)
class PAdicPoint:
    """x = p^m * u with u a unit known modulo p^c."""

    p: int
    m: int
    u: int
    c: int = 1

    def __post_init__(self):
        if self.c < 0:
            raise ValueError("precision must be nonnegative")
        mod = self.p ** self.c
        object.__setattr__(self, "u", self.u % mod if mod > 1 else 0)
        if mod > 1 and self.u % self.p == 0:
            raise ValueError(f"u={self.u} is not a unit mod {self.p}")

    @classmethod
    def from_rational(cls, x, p: int, c: int = 1) -> "PAdicPoint":
        x = Fraction(x)
        m = ord_p(x, p)
        y = x / Fraction(p) ** m
        mod = p ** c
        u = y.numerator * pow(y.denominator, -1, mod) % mod if mod > 1 else 0
        return cls(p, m, u, c)

    @property
    def abs(self) -> Fraction:
        return Fraction(1, self.p ** self.m) if self.m >= 0 else Fraction(self.p ** (-self.m))

    def __mul__(self, other: "PAdicPoint") -> "PAdicPoint":
        if other.p != self.p:
            raise ValueError("different primes")
        c = min(self.c, other.c)
        return PAdicPoint(self.p, self.m + other.m, self.u * other.u, c)

    def inverse(self) -> "PAdicPoint":
        mod = self.p ** self.c
        return PAdicPoint(self.p, -self.m, pow(self.u, -1, mod) if mod > 1 else 0, self.c)

    def to_json(self):
        return {"p": self.p, "m": self.m, "u": self.u, "c": self.c}


# unit groups ----------------------------------------------------------------

@lru_cache(maxsize=None)
def unit_group(p: int, c: int):
    """Generators, orders and discrete-log table of (Z/p^c)^x.

    Returns (gens, orders, log) where log maps a unit residue to its exponent
    vector with respect to gens.
    """
    mod = p ** c
    if c == 0 or mod == 2:
        return (), (), {0 if mod == 1 else 1: ()}
    if p == 2:
        if c == 2:
            gens, orders = (mod - 1,), (2,)
        else:
            gens, orders = (mod - 1, 5), (2, 2 ** (c - 2))
    else:
        n = (p - 1) * p ** (c - 1)
        g = _primitive_root(p)
        if c >= 2 and pow(g, p - 1, p * p) == 1:
            g += p
        gens, orders = (g % mod,), (n,)
    log = {}
    for exps in product(*(range(o) for o in orders)):
        v = 1
        for g, e in zip(gens, exps):
            v = v * pow(g, e, mod) % mod
        log[v] = exps
    return gens, orders, log


def _primitive_root(p: int) -> int:
    phi = p - 1
    fac = [q for q in range(2, phi + 1) if phi % q == 0 and is_prime(q)]
    for g in range(2, p + 1):
        if all(pow(g, phi // q, p) != 1 for q in fac):
            return g
    return 1


@dataclass(frozen=True)
class MultChar:
    """Quasi-character |x|^u * omega(ac(x)) of Q_p^x.

    ``table`` lists (unit residue mod p^cond, turns) pairs; the value at the
    uniformizer p of the finite part is 1 by convention.
    """

    p: int
    cond: int
    table: tuple
    u: tuple = (Fraction(0), Fraction(0))

    def __post_init__(self):
        tbl = tuple(sorted((int(k), Fraction(v) % 1) for k, v in self.table))
        object.__setattr__(self, "table", tbl)
        object.__setattr__(self, "u", (Fraction(self.u[0]), Fraction(self.u[1])))
        self._validate()

    def _validate(self):
        p, c = self.p, self.cond
        mod = p ** c
        _, _, log = unit_group(p, c)
        if set(k for k, _ in self.table) != set(log):
            raise ValueError(f"character table must cover (Z/{mod})^x")
        t = dict(self.table)
        gens, _, _ = unit_group(p, c)
        for g in gens:
            for a in t:
                if (t[a] + t[g] - t[a * g % mod]) % 1 != 0:
                    raise ValueError("character table is not multiplicative")
        if c == 0:
            return
        if all(v == 0 for v in t.values()):
            raise ValueError("trivial table must have cond 0")
        if c >= 2:
            step = p ** (c - 1)
            if all(t[(1 + j * step) % mod] == 0 for j in range(p)):
                raise ValueError("conductor is not minimal")
        if p == 2 and c == 1:
            raise ValueError("no primitive characters of conductor 2")

    # constructors -------------------------------------------------------
    @classmethod
    def trivial(cls, p: int, u=0) -> "MultChar":
        u = _pair(u)
        return cls(p, 0, ((0, Fraction(0)),), u)

    @classmethod
    def from_table(cls, p: int, c: int, table: dict, u=0) -> "MultChar":
        """Build from a (possibly imprimitive) table mod p^c; the conductor is minimized."""
        mod = p ** c
        t = {int(k) % mod: Fraction(v) % 1 for k, v in table.items()}
        cond = c
        while cond > 0:
            if cond >= 2:
                trivial_on_kernel = all(t[a] == 0 for a in t if a % p ** (cond - 1) == 1 % p ** (cond - 1))
            else:
                trivial_on_kernel = all(v == 0 for v in t.values())
            if not trivial_on_kernel:
                break
            cond -= 1
        if cond == 0:
            return cls.trivial(p, u)
        m = p ** cond
        small = {}
        for a, v in t.items():
            small.setdefault(a % m, v)
        return cls(p, cond, tuple(small.items()), _pair(u))

    @classmethod
    def from_generator_turns(cls, p: int, c: int, turns) -> "MultChar":
        gens, orders, log = unit_group(p, c)
        turns = [Fraction(x) for x in turns]
        for t, o in zip(turns, orders):
            if (t * o) % 1 != 0:
                raise ValueError("generator image has wrong order")
        table = {a: sum(e * t for e, t in zip(exps, turns)) % 1 for a, exps in log.items()}
        return cls.from_table(p, c, table)

    @classmethod
    def quadratic(cls, p: int) -> "MultChar":
        """Legendre symbol mod p (p odd) or the nontrivial character mod 4 (p = 2)."""
        if p == 2:
            return cls(2, 2, ((1, Fraction(0)), (3, Fraction(1, 2))))
        table = {a: Fraction(0) if pow(a, (p - 1) // 2, p) == 1 else Fraction(1, 2) for a in range(1, p)}
        return cls(p, 1, tuple(table.items()))

    # structure ----------------------------------------------------------
    @property
    def is_trivial(self) -> bool:
        return self.cond == 0

    @property
    def modulus(self) -> int:
        return self.p ** self.cond

    @property
    def finite_part(self) -> "MultChar":
        if self.u == (0, 0):
            return self
        return MultChar(self.p, self.cond, self.table)

    @property
    def exponent(self) -> complex:
        return complex(float(self.u[0]), float(self.u[1]))

    def turns(self, unit: int) -> Fraction:
        if self.cond == 0:
            return Fraction(0)
        return dict(self.table)[unit % self.modulus]

    def order(self) -> int:
        return math.lcm(*(v.denominator for _, v in self.table))

    def values_on(self, c: int) -> dict:
        """Turns on all units mod p^c (c >= cond)."""
        if c < self.cond:
            raise InsufficientPrecision("modulus below conductor")
        _, _, log = unit_group(self.p, c)
        return {a: self.turns(a) for a in log}

    def __mul__(self, other: "MultChar") -> "MultChar":
        if other.p != self.p:
            raise ValueError("different primes")
        c = max(self.cond, other.cond)
        a, b = self.values_on(c), other.values_on(c)
        u = (self.u[0] + other.u[0], self.u[1] + other.u[1])
        return MultChar.from_table(self.p, c, {k: a[k] + b[k] for k in a}, u)

    def inverse(self) -> "MultChar":
        return MultChar(self.p, self.cond, tuple((k, -v) for k, v in self.table), (-self.u[0], -self.u[1]))

    def key(self) -> str:
        if self.cond == 0:
            return "1"
        return f"{self.cond}:" + ",".join(str(v) for _, v in self.table)

    def to_json(self):
        return {
            "p": self.p,
            "cond": self.cond,
            "table": {str(k): str(v) for k, v in self.table},
            "u": [str(self.u[0]), str(self.u[1])],
        }

    @classmethod
    def from_json(cls, obj) -> "MultChar":
        p, c = int(obj["p"]), int(obj["cond"])
        table = {int(k): Fraction(v) for k, v in obj["table"].items()}
        u = obj.get("u", ["0", "0"])
        if c == 0:
            return cls.trivial(p, (Fraction(u[0]), Fraction(u[1])))
        return cls(p, c, tuple(table.items()), (Fraction(u[0]), Fraction(u[1])))

    def __repr__(self):
        return f"MultChar(p={self.p}, cond={self.cond}, key={self.key()})"


def _pair(u):
    if isinstance(u, tuple):
        return (Fraction(u[0]), Fraction(u[1]))
    if isinstance(u, complex):
        return (Fraction(u.real), Fraction(u.imag))
    return (Fraction(u), Fraction(0))


def characters(p: int, c: int) -> list:
    """All characters of (Z/p^c)^x, each stored at its own conductor."""
    gens, orders, _ = unit_group(p, c)
    out = []
    for ks in product(*(range(o) for o in orders)):
        out.append(MultChar.from_generator_turns(p, c, [Fraction(k, o) for k, o in zip(ks, orders)]))
    return out


def primitive_characters(p: int, c: int) -> list:
    return [ch for ch in characters(p, c) if ch.cond == c]


@dataclass(frozen=True)
class CharValue:
    value: complex
    turns: Fraction

    @property
    def exact(self) -> Cyclo:
        return root_of_unity(self.turns)


def eval_char(chi: MultChar, x: PAdicPoint) -> CharValue:
    if x.p != chi.p:
        raise ValueError("prime mismatch")
    if x.c < chi.cond:
        raise InsufficientPrecision(f"point known mod p^{x.c}, character has conductor {chi.cond}")
    t = chi.turns(x.u)
    mod = complex(x.p) ** (-x.m * chi.exponent) if chi.u != (0, 0) else 1.0
    return CharValue(mod * cmath.exp(2j * math.pi * float(t)), t)


@dataclass(frozen=True)
class AdditiveChar:
    """psi_p(x) = exp(2 pi i * sign * {x}_p)."""

    p: int
    sign: int = 1

    def turns(self, x) -> Fraction:
        return (self.sign * p_adic_fractional_part(x, self.p)) % 1

    def __call__(self, x) -> complex:
        return cmath.exp(2j * math.pi * float(self.turns(x)))

    def inverse(self) -> "AdditiveChar":
        return AdditiveChar(self.p, -self.sign)


@dataclass(frozen=True)
class GaussSum:
    value: complex
    exact: Cyclo = field(repr=False)
    magnitude: float


def gauss_sum(omega: MultChar, psi: AdditiveChar | None = None) -> GaussSum:
    """g(omega, psi) = sum over v in (Z/p^c)^x of omega(v) psi(v / p^c)."""
    p, c = omega.p, omega.cond
    if c < 1:
        raise ValueError("gauss_sum needs cond >= 1")
    sign = 1 if psi is None else psi.sign
    mod = p ** c
    N = math.lcm(mod, omega.order())
    counts = [0] * N
    vals = []
    for v, t in omega.table:
        e = (t * N + sign * v * (N // mod)) % N
        counts[int(e)] += 1
        vals.append(float(t) + sign * v / mod)
    exact = Cyclo(N, fmpq_poly([fmpq(k) for k in counts]))
    arr = np.exp(2j * np.pi * np.asarray(vals))
    # pairwise summation in a fixed order keeps the float value deterministic
    value = complex(np.sum(arr))
    return GaussSum(value, exact, abs(value))
