"""Archimedean local theory over R.

Measure: d^x x = dx / (2|x|), so Z_p^x-style unit volume {+1, -1} is 1.
Characters chi(x) = |x|^s sgn(x)^p.  The integrand family is finite sums of
c |x|^a sgn(x)^eps exp(-b |x|^r); Mellin transforms are Gamma closed forms,
cross-checked against double-exponential quadrature.

Gamma_R(s) = pi^{-s/2} Gamma(s/2) and Gamma_C(s) = 2 (2 pi)^{-s} Gamma(s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import mpmath
import numpy as np
from numpy.polynomial import Polynomial
from scipy import integrate

from .errors import AbscissaViolation, NotInFamily, PoleOnContour

__all__ = [
    "ArchChar",
    "ArchTerm",
    "ArchSchwartz",
    "ArchBasic",
    "ArchParams",
    "MellinValue",
    "AsymptoticExpansion",
    "StirlingReport",
    "DecayFit",
    "mellin_arch",
    "zeta_arch",
    "gamma_arch",
    "gamma_r",
    "gamma_c",
    "stirling_bound_check",
    "decay_fit",
    "fourier_arch",
]

_TWO_PI = 2 * math.pi


def gamma_r(s):
    return mpmath.power(mpmath.pi, -s / 2) * mpmath.gamma(s / 2)


def gamma_c(s):
    return 2 * mpmath.power(2 * mpmath.pi, -s) * mpmath.gamma(s)


@dataclass(frozen=True)
class ArchChar:
    s: complex
    parity: int = 0

    def __post_init__(self):
        object.__setattr__(self, "parity", int(self.parity) % 2)

    def __call__(self, x: float) -> complex:
        sg = 1 if x > 0 or self.parity == 0 else -1
        return sg * abs(x) ** self.s


@dataclass(frozen=True)
class ArchTerm:
    coeff: complex
    a: float
    eps: int
    b: float
    r: int

    def __post_init__(self):
        object.__setattr__(self, "coeff", complex(self.coeff))
        object.__setattr__(self, "eps", int(self.eps) % 2)
        if self.b <= 0:
            raise ValueError("decay rate b must be positive")
        if self.r not in (1, 2):
            raise ValueError("decay exponent r must be 1 or 2")


@dataclass(frozen=True)
class ArchSchwartz:
    """sum of c |x|^a sgn(x)^eps exp(-b |x|^r).

    Terms with a <= 0 must be acknowledged with ``allow_nonpositive_power``;
    their Mellin transforms only converge to the right of Re(s) = -a.
    """

    terms: tuple
    allow_nonpositive_power: bool = False

    def __post_init__(self):
        terms = tuple(t if isinstance(t, ArchTerm) else ArchTerm(*t) for t in self.terms)
        object.__setattr__(self, "terms", terms)
        if not self.allow_nonpositive_power and any(t.a <= 0 for t in terms):
            raise ValueError("term with a <= 0 requires allow_nonpositive_power=True")

    @classmethod
    def gaussian_tate(cls) -> "ArchSchwartz":
        """|x|^{1/2} exp(-pi x^2), the Tate datum in the |x|^{1/2}-shifted model."""
        return cls((ArchTerm(1.0, 0.5, 0, math.pi, 2),))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        out = np.zeros(x.shape, dtype=complex)
        for t in self.terms:
            sg = np.where(x < 0, -1.0, 1.0) if t.eps else 1.0
            with np.errstate(divide="ignore", invalid="ignore"):
                val = t.coeff * sg * ax ** t.a * np.exp(-t.b * ax ** t.r)
            out = out + np.where(ax == 0, 0.0, val)
        return out if out.ndim else complex(out)

    def parity_part(self, p: int) -> "ArchSchwartz":
        return ArchSchwartz(tuple(t for t in self.terms if t.eps == p % 2), self.allow_nonpositive_power)

    def scaled(self, t: float) -> "ArchSchwartz":
        """x -> phi(t x) for t > 0."""
        return ArchSchwartz(
            tuple(ArchTerm(c.coeff * t ** c.a, c.a, c.eps, c.b * t ** c.r, c.r) for c in self.terms),
            self.allow_nonpositive_power,
        )

    def __add__(self, other: "ArchSchwartz") -> "ArchSchwartz":
        return ArchSchwartz(self.terms + other.terms, self.allow_nonpositive_power or other.allow_nonpositive_power)

    def times(self, c: complex) -> "ArchSchwartz":
        return ArchSchwartz(
            tuple(ArchTerm(t.coeff * c, t.a, t.eps, t.b, t.r) for t in self.terms), self.allow_nonpositive_power
        )

    def envelope(self) -> list:
        """(c, a, b, r) with |phi(x)| <= sum c |x|^a exp(-b |x|^r)."""
        return [(abs(t.coeff), t.a, t.b, float(t.r)) for t in self.terms if t.coeff != 0]

    def log_abs(self, x: float) -> float:
        """log |phi(x)| with mpmath (no underflow)."""
        with mpmath.workdps(40):
            ax = mpmath.mpf(abs(x))
            val = mpmath.mpc(0)
            for t in self.terms:
                sg = -1 if (x < 0 and t.eps) else 1
                val += sg * mpmath.mpc(t.coeff) * ax ** t.a * mpmath.exp(-t.b * ax ** t.r)
            if val == 0:
                return -math.inf
            return float(mpmath.log(abs(val)))

    def to_json(self):
        return {
            "terms": [[[t.coeff.real, t.coeff.imag], t.a, t.eps, t.b, t.r] for t in self.terms],
            "allow_nonpositive_power": self.allow_nonpositive_power,
        }

    @classmethod
    def from_json(cls, obj) -> "ArchSchwartz":
        terms = tuple(ArchTerm(complex(*c), a, e, b, r) for c, a, e, b, r in obj["terms"])
        return cls(terms, bool(obj.get("allow_nonpositive_power", False)))


@dataclass(frozen=True)
class MellinValue:
    closed: complex
    numeric: complex | None
    expression: str

    @property
    def discrepancy(self) -> float:
        if self.numeric is None:
            return 0.0
        return abs(self.closed - self.numeric) / max(abs(self.closed), 1e-300)


def _term_mellin(t: ArchTerm, s) -> mpmath.mpc:
    w = s + t.a
    return mpmath.mpc(t.coeff) / t.r * mpmath.power(t.b, -w / t.r) * mpmath.gamma(w / t.r)


def mellin_arch(phi, chi: ArchChar, numeric: bool = True) -> MellinValue:
    """int phi(x) |x|^s sgn(x)^p d^x x with d^x x = dx / (2|x|)."""
    if isinstance(phi, ArchBasic):
        return phi.mellin(chi)
    s = complex(chi.s)
    terms = [t for t in phi.terms if t.eps == chi.parity and t.coeff != 0]
    if not terms:
        return MellinValue(0j, 0j if numeric else None, "0 (parity mismatch)")
    for t in terms:
        if s.real + t.a <= 0:
            raise AbscissaViolation(f"Re(s) + a = {s.real + t.a:.6g} <= 0")
    with mpmath.workdps(30):
        closed = complex(sum((_term_mellin(t, s) for t in terms), mpmath.mpc(0)))
        expr = " + ".join(
            f"({t.coeff:.6g})/{t.r} * {t.b:.6g}^(-(s+{t.a:g})/{t.r}) Gamma((s+{t.a:g})/{t.r})" for t in terms
        )
        num = _quadrature(terms, s) if numeric else None
    return MellinValue(closed, num, expr)


def _quadrature(terms, s: complex) -> complex:
    # log coordinates x = e^v; the integrand decays double exponentially at +inf
    # and exponentially (rate Re(s)+a) at -inf
    def f(v):
        x = mpmath.exp(v)
        acc = mpmath.mpc(0)
        for t in terms:
            acc += mpmath.mpc(t.coeff) * mpmath.exp((s + t.a) * v - t.b * x ** t.r)
        return acc

    # finite window: below v_lo the factor e^{Re(s+a) v} is < 1e-35 and above
    # v_hi every term is 1e-37 below its own peak
    lo = min(s.real + t.a for t in terms)
    v_lo = -82.0 / lo
    v_hi = -math.inf
    for t in terms:
        w = s.real + t.a
        v0 = math.log(w / (t.b * t.r)) / t.r
        top = w * v0 - t.b * math.exp(t.r * v0)
        v = v0
        while w * v - t.b * math.exp(t.r * v) > top - 85.0:
            v += 0.25
        v_hi = max(v_hi, v)
    n = max(8, int((v_hi - v_lo) * (1 + abs(s.imag)) / 4))
    pts = list(np.linspace(v_lo, v_hi, n + 1))
    return complex(mpmath.quad(f, pts))


def zeta_arch(phi, s: complex, parity: int = 0, numeric: bool = False) -> complex:
    """Z(s, phi, sgn^parity) = int phi(x) sgn^parity |x|^{s-1/2} d^x x."""
    return mellin_arch(phi, ArchChar(complex(s) - 0.5, parity), numeric=numeric).closed


def gamma_arch(chi: ArchChar, s: complex, psi_sign: int = 1) -> complex:
    """epsilon L(1-s, chi^{-1}) / L(s, chi) with L(s, chi) = Gamma_R(s + u + p)."""
    u, p = complex(chi.s), chi.parity
    a = complex(s) + u + p
    b = 1 - complex(s) - u + p
    for w in (a, b):
        if abs(w.imag) < 1e-14 and w.real <= 0 and abs(w.real / 2 - round(w.real / 2)) < 1e-14:
            raise PoleOnContour(f"Gamma_R pole at argument {w}")
    eps = (1j * psi_sign) ** p
    with mpmath.workdps(30):
        return eps * complex(gamma_r(b) / gamma_r(a))


# Gamma-factor parameters ------------------------------------------------------

@dataclass(frozen=True)
class ArchParams:
    """L_infty(s, pi_infty x sgn^p) = prod Gamma_R(s + mu) prod Gamma_C(s + h).

    ``gamma_r`` lists the mu in {0, 1} for the untwisted representation; the
    sgn-twist flips each mu mod 2.  Gamma_C factors come from discrete series
    of weight k = 2h + 1 and are unchanged by the twist.
    """

    gamma_r: tuple = ()
    gamma_c: tuple = ()

    def r_shifts(self, parity: int) -> tuple:
        return tuple((int(mu) + parity) % 2 for mu in self.gamma_r)

    def L(self, s, parity: int = 0):
        val = mpmath.mpf(1)
        for mu in self.r_shifts(parity):
            val *= gamma_r(s + mu)
        for h in self.gamma_c:
            val *= gamma_c(s + h)
        return val

    def epsilon(self, parity: int = 0, psi_sign: int = 1) -> complex:
        unit = 1j * psi_sign
        e = 1 + 0j
        for mu in self.r_shifts(parity):
            e *= unit ** mu
        for h in self.gamma_c:
            e *= unit ** int(round(2 * h + 1))
        return e

    def gamma(self, s, parity: int = 0, psi_sign: int = 1) -> complex:
        with mpmath.workdps(30):
            return self.epsilon(parity, psi_sign) * complex(self.L(1 - s, parity) / self.L(s, parity))

    def dual(self) -> "ArchParams":
        return self

    @property
    def degree(self) -> int:
        return len(self.gamma_r) + 2 * len(self.gamma_c)

    def to_json(self):
        return {"gamma_r": list(self.gamma_r), "gamma_c": list(self.gamma_c)}


def _family(params: ArchParams, parity: int):
    """(beta, r, a0, da, u-map) describing the closed family of a single-factor L."""
    if len(params.gamma_r) == 1 and not params.gamma_c:
        mu = params.r_shifts(parity)[0]
        # T_j = |x|^{1/2+mu+2j} sgn^p e^{-pi x^2}; Z = 1/2 Gamma_R(s+mu) pi^{-j} ((s+mu)/2)_j
        return math.pi, 2, 0.5 + mu, 2, Polynomial([mu / 2, 0.5])
    if len(params.gamma_c) == 1 and not params.gamma_r:
        h = params.gamma_c[0]
        # T_j = |x|^{h+1/2+j} sgn^p e^{-2 pi |x|}; Z = 1/2 Gamma_C(s+h) (2 pi)^{-j} (s+h)_j
        return _TWO_PI, 1, h + 0.5, 1, Polynomial([h, 1.0])
    raise NotInFamily("closed-family Fourier action needs a single Gamma factor")


def _basis_poly(j: int, beta: float, u: Polynomial) -> Polynomial:
    out = Polynomial([1.0])
    for i in range(j):
        out = out * (u + i)
    return out * beta ** (-j)


def fourier_arch(phi: ArchSchwartz, params: ArchParams, psi_sign: int = -1) -> ArchSchwartz:
    """Mellin-side multiplier action of the pi_infty-Fourier operator on the closed family.

    Z(1-s, F phi, sgn^p) = gamma(s, pi_infty x sgn^p, psi) Z(s, phi, sgn^p).
    """
    out = []
    for parity in (0, 1):
        part = [t for t in phi.terms if t.eps == parity and t.coeff != 0]
        if not part:
            continue
        beta, r, a0, da, u = _family(params, parity)
        coeffs = {}
        for t in part:
            j = (t.a - a0) / da
            if t.r != r or abs(t.b - beta) > 1e-12 * beta or j < -1e-9 or abs(j - round(j)) > 1e-9:
                raise NotInFamily(f"term |x|^{t.a} e^(-{t.b}|x|^{t.r}) is outside the family of {params}")
            coeffs[int(round(j))] = coeffs.get(int(round(j)), 0) + t.coeff
        P = Polynomial([0.0])
        for j, c in coeffs.items():
            P = P + c * _basis_poly(j, beta, u)
        # Q(s') = eps P(1 - s')
        eps = params.epsilon(parity, psi_sign)
        Q = eps * P(Polynomial([1.0, -1.0]))
        Q = Polynomial(np.asarray(Q.coef, dtype=complex))
        deg = len(Q.coef) - 1
        d = {}
        for j in range(deg, -1, -1):
            Bj = _basis_poly(j, beta, u)
            lead = Q.coef[j] if j < len(Q.coef) else 0
            dj = lead / Bj.coef[-1]
            d[j] = dj
            Q = Q - dj * Bj
            Q = Polynomial(Q.coef[:j] if j > 0 else [0.0])
        for j in sorted(d):
            if d[j] != 0:
                out.append(ArchTerm(complex(d[j]), a0 + da * j, parity, beta, r))
    return ArchSchwartz(tuple(out), phi.allow_nonpositive_power)


# numeric functions with Gamma-product Mellin transforms ----------------------

@dataclass(frozen=True)
class ArchBasic:
    """Even/odd function with Z(s, phi, sgn^p) = coeff / 2 * L_infty(s, pi x sgn^p), zero on the other parity.

    For one Gamma factor this is a single closed-family term; for two factors
    the value is a multiplicative convolution computed by quadrature.
    """

    params: ArchParams
    coeff: complex = 1.0
    parity: int = 0

    def _factors(self):
        fs = [("R", mu) for mu in self.params.r_shifts(self.parity)] + [("C", h) for h in self.params.gamma_c]
        if not 1 <= len(fs) <= 2:
            raise NotImplementedError("ArchBasic supports one or two Gamma factors")
        return fs

    @staticmethod
    def _kernel(kind, shift, t):
        # inverse Mellin (int_0^inf h(t) t^s dt/t) of Gamma_R(s+mu) or Gamma_C(s+h)
        if kind == "R":
            return 2.0 * t ** shift * math.exp(-math.pi * t * t)
        return 2.0 * t ** shift * math.exp(-_TWO_PI * t)

    def _h(self, t: float) -> float:
        fs = self._factors()
        if len(fs) == 1:
            return self._kernel(*fs[0], t)
        (k1, s1), (k2, s2) = fs

        def f(v):
            y = math.exp(v)
            return self._kernel(k1, s1, t / y) * self._kernel(k2, s2, y)

        # the integrand peaks where the two exponents balance
        if k1 == "R" and k2 == "C":
            v0 = math.log(t) * 2 / 3
        else:
            v0 = 0.5 * math.log(t)
        val, _ = integrate.quad(f, v0 - 12, v0 + 12, points=[v0], epsabs=0, epsrel=1e-13, limit=400)
        return val

    def __call__(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros(xs.shape, dtype=complex)
        for i, xv in enumerate(xs):
            ax = abs(xv)
            if ax == 0:
                continue
            sg = -1.0 if (xv < 0 and self.parity) else 1.0
            out[i] = self.coeff * sg * math.sqrt(ax) * self._h(ax) / 2
        return out if np.ndim(x) else complex(out[0])

    def mellin(self, chi: ArchChar) -> MellinValue:
        if chi.parity != self.parity:
            return MellinValue(0j, 0j, "0 (parity mismatch)")
        s = complex(chi.s) + 0.5
        with mpmath.workdps(30):
            closed = complex(self.coeff / 2 * self.params.L(s, self.parity))
        return MellinValue(closed, None, f"{self.coeff}/2 * L_infty(s+1/2)")

    def scaled(self, t: float):
        raise NotImplementedError("scaling is not closed on ArchBasic")

    def envelope(self) -> list:
        """Rigorous (c, a, b, r) majorant: |phi(x)| <= c |x|^a exp(-b |x|^r)."""
        fs = self._factors()
        c = abs(self.coeff) / 2
        if len(fs) == 1:
            kind, sh = fs[0]
            return [(2 * c, sh + 0.5, math.pi if kind == "R" else _TWO_PI, 2.0 if kind == "R" else 1.0)]
        (k1, s1), (k2, s2) = fs
        if k1 == "R" and k2 == "C":
            # pi t^2/y^2 + 2 pi y >= 3 pi t^{2/3}; keep half of it, bound the rest
            if s2 <= s1:
                raise NotImplementedError("envelope needs h > mu")
            const = 4 * math.gamma(s2 - s1) * math.pi ** (s1 - s2)
            return [(c * const, s1 + 0.5, 1.5 * math.pi, 2.0 / 3.0)]
        # two Gamma_C: t/y + y >= 2 sqrt(t)
        a1 = s1
        m1 = (a1 / (math.pi * math.e)) ** a1 if a1 > 0 else 1.0
        const = 4 * m1 * math.gamma(s2) * math.pi ** (-s2)
        return [(c * const, 0.5, _TWO_PI, 0.5)]

    def fourier(self, psi_sign: int = -1) -> "ArchBasic":
        eps = self.params.epsilon(self.parity, psi_sign)
        return ArchBasic(self.params.dual(), self.coeff * eps, self.parity)

    def to_json(self):
        return {"basic": self.params.to_json(), "coeff": [complex(self.coeff).real, complex(self.coeff).imag],
                "parity": self.parity}


# asymptotics -------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticExpansion:
    """phi(x) ~ sum_k sum_p a_{k,1,p} sgn(x)^p |x|^{lambda_k} as x -> 0 (all m_k = 1 here)."""

    lambdas: tuple
    mults: tuple
    coeffs: dict = field(hash=False)

    @classmethod
    def from_schwartz(cls, phi: ArchSchwartz, K: int = 8) -> "AsymptoticExpansion":
        acc: dict = {}
        jmax = K + 2
        for t in phi.terms:
            for j in range(jmax):
                lam = round(t.a + t.r * j, 12)
                val = t.coeff * (-t.b) ** j / math.factorial(j)
                key = (lam, t.eps)
                acc[key] = acc.get(key, 0) + val
        lams = sorted({lam for lam, _ in acc})[:K]
        coeffs = {}
        for k, lam in enumerate(lams):
            for p in (0, 1):
                v = acc.get((lam, p), 0)
                if v != 0:
                    coeffs[(k, 1, p)] = complex(v)
        return cls(tuple(lams), tuple(1 for _ in lams), coeffs)

    def predicted_residue(self, k: int, parity: int) -> complex:
        """Residue of s -> mellin_arch(phi, (s, parity)) at s = -lambda_k."""
        return self.coeffs.get((k, 1, parity), 0j)


def mellin_residue(phi: ArchSchwartz, s0: float, parity: int, radius: float = 1e-3, n: int = 64) -> complex:
    """Residue of the closed-form Mellin transform at s0 by a small circular contour."""
    terms = [t for t in phi.terms if t.eps == parity]
    acc = mpmath.mpc(0)
    with mpmath.workdps(30):
        for k in range(n):
            w = radius * mpmath.expjpi(2 * mpmath.mpf(k) / n)
            s = s0 + w
            val = sum((_term_mellin(t, s) for t in terms), mpmath.mpc(0))
            acc += val * w
    return complex(acc / n)


# strip and decay diagnostics ------------------------------------------------------

@dataclass(frozen=True)
class StirlingReport:
    max_value: float
    argmax: complex
    bounded: bool
    flagged_poles: tuple
    samples: int


def stirling_bound_check(
    gamma_factors: Sequence,
    poly: Sequence = (1.0,),
    strip: tuple = (1.0, 2.0),
    height: float = 50.0,
    n_re: int = 11,
    n_im: int = 401,
    excise: float = 0.25,
) -> StirlingReport:
    """Sample |P(s) prod Gamma(a_i s + b_i)| on a vertical strip.

    ``gamma_factors`` lists (a_i, b_i); ``poly`` lists coefficients of P in
    increasing degree.  Grid points within ``excise`` of a pole are skipped
    and the pole is reported.
    """
    a, b = strip
    P = Polynomial(poly)
    poles = []
    for ai, bi in gamma_factors:
        k = 0
        while True:
            s0 = -(bi + k) / ai
            if s0 < a - excise:
                break
            if s0 <= b + excise:
                poles.append(s0)
            k += 1
            if k > 10000:
                break
    best, arg = -1.0, 0j
    tail_max = 0.0
    count = 0
    for x in np.linspace(a, b, n_re):
        for y in np.linspace(-height, height, n_im):
            s = complex(x, y)
            if any(abs(s - p0) < excise for p0 in poles):
                continue
            val = abs(P(s))
            for ai, bi in gamma_factors:
                val *= float(abs(mpmath.gamma(ai * s + bi)))
            count += 1
            if val > best:
                best, arg = val, s
            if abs(y) >= 0.8 * height:
                tail_max = max(tail_max, val)
    bounded = math.isfinite(best) and tail_max <= best
    return StirlingReport(best, arg, bounded, tuple(sorted(set(poles))), count)


@dataclass(frozen=True)
class DecayFit:
    kappa_zero: float
    kappa_inf: float
    constant: float

    @property
    def kappa(self) -> float:
        return min(self.kappa_zero, self.kappa_inf)


def decay_fit(phi: ArchSchwartz, depth: float = 40.0, grid: float = 3.0, cap: float = 50.0) -> DecayFit:
    """Power-law decay exponents of |phi| at 0 and at infinity.

    The exponents are log-log slopes far out (|x| = e^{-depth}, e^{grid});
    the constant c is fitted on the grid e^{-grid} <= |x| <= e^{grid}.
    """

    def slope(x1, x2):
        l1 = max(phi.log_abs(x1), phi.log_abs(-x1))
        l2 = max(phi.log_abs(x2), phi.log_abs(-x2))
        return (l2 - l1) / (math.log(x2) - math.log(x1))

    k0 = slope(math.exp(-depth - 1), math.exp(-depth))
    kinf = -slope(math.exp(grid), math.exp(grid + 0.01))
    k0 = round(min(k0, cap), 6)
    kinf = round(min(kinf, cap), 6)
    k0, kinf = k0 + 0.0, kinf + 0.0  # no -0.0
    kappa = min(k0, kinf)
    xs = np.exp(np.linspace(-grid, grid, 241))
    c = 0.0
    for x in xs:
        m = min(x, 1 / x)
        v = max(abs(phi(x)), abs(phi(-x)))
        c = max(c, v / m ** kappa)
    return DecayFit(k0, kinf, float(c))
