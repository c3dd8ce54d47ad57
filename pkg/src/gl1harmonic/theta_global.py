"""Adelic layer over Q: ideles, restricted-tensor Schwartz data, pi-theta series and PSF.

Conventions.  psi = prod_v psi_v with psi_p(x) = exp(2 pi i {x}_p) and
psi_infty(x) = exp(-2 pi i x), so psi is trivial on Q.  The section
R_+ -> A^x puts the positive real part at the infinite place.  Measures are
dx / (2|x|) at infinity and vol(Z_p^x) = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import mpmath
import numpy as np

from .errors import AssumptionViolated, Divergent, NoConvergence
from .localfield import AdditiveChar, MultChar, PAdicPoint, ord_p, primes_up_to, unit_group
from .mellin_arch import ArchBasic, ArchSchwartz, ArchTerm, fourier_arch, zeta_arch
from .mellin_na import NASchwartz, basic, basic_exponent, evaluate, fourier_na, membership_compact
from .qseries import LaurentPoly, RationalFn
from .repdata import DirichletCharacter, RepDescriptor, contragredient, satake, tau_coeffs

__all__ = [
    "Idele",
    "GlobalSchwartz",
    "ThetaResult",
    "PSFResult",
    "ZetaValue",
    "theta",
    "global_fourier",
    "psf_check",
    "global_zeta",
    "boundary_constants",
    "default_arch",
    "all_basic",
    "s00_datum",
    "datum_for",
    "load_datum",
    "domain_status",
]

_EPS = np.finfo(float).eps


# ideles --------------------------------------------------------------------------

@dataclass(frozen=True)
class Idele:
    """x = (sign * t, (x_p)) with x_p a unit for every p outside ``finite``.

    The positive real part always sits at the infinite place.
    """

    t: float
    sign: int = 1
    finite: tuple = ()  # sorted tuple of PAdicPoint

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("t must be positive")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        pts = self.finite.values() if isinstance(self.finite, dict) else self.finite
        pts = tuple(sorted(pts, key=lambda q: q.p))
        if len({q.p for q in pts}) != len(pts):
            raise ValueError("duplicate prime")
        object.__setattr__(self, "finite", pts)

    @classmethod
    def real(cls, t: float, sign: int = 1) -> "Idele":
        return cls(float(t), sign)

    @classmethod
    def from_rational(cls, q, c: int = 1, primes=()) -> "Idele":
        """Diagonal embedding of q in Q^x.

        Components are recorded at the primes dividing q and at ``primes``;
        elsewhere q is a unit, which is only invisible to data of conductor 0,
        so pass the special primes of the datum in use.
        """
        q = Fraction(q)
        if q == 0:
            raise ValueError("0 is not an idele")
        primes = _prime_factors(abs(q.numerator)) | _prime_factors(q.denominator) | set(primes)
        pts = tuple(PAdicPoint.from_rational(q, p, c) for p in sorted(primes))
        return cls(float(abs(q)), 1 if q > 0 else -1, pts)

    def point(self, p: int, c: int = 1) -> PAdicPoint:
        for q in self.finite:
            if q.p == p:
                return q
        return PAdicPoint(p, 0, 1, c)

    @property
    def primes(self) -> list:
        return [q.p for q in self.finite]

    @property
    def norm(self) -> float:
        """|x|_A = t * prod p^{-m_p}."""
        out = self.t
        for q in self.finite:
            out *= float(q.abs)
        return out

    def inverse(self) -> "Idele":
        return Idele(1.0 / self.t, self.sign, tuple(q.inverse() for q in self.finite))

    def __mul__(self, other: "Idele") -> "Idele":
        pts = {q.p: q for q in self.finite}
        for q in other.finite:
            pts[q.p] = pts[q.p] * q if q.p in pts else q
        return Idele(self.t * other.t, self.sign * other.sign, tuple(pts.values()))

    def to_json(self):
        return {"t": self.t, "sign": self.sign, "finite": [q.to_json() for q in self.finite]}

    @classmethod
    def from_json(cls, obj) -> "Idele":
        pts = tuple(PAdicPoint(int(d["p"]), int(d["m"]), int(d["u"]), int(d.get("c", 1))) for d in obj.get("finite", []))
        return cls(float(obj["t"]), int(obj.get("sign", 1)), pts)


def _prime_factors(n: int) -> set:
    out, d = set(), 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


# global Schwartz data ----------------------------------------------------------------

def default_arch(rep: RepDescriptor):
    """phi_infty with Z(s, phi_infty, 1) = L_infty(s, pi_infty) / 2."""
    if rep.kind == "dirichlet":
        mu = rep.arch.r_shifts(0)[0]
        return ArchSchwartz((ArchTerm(1.0, 0.5 + mu, 0, math.pi, 2),))
    if rep.kind == "delta":
        h = rep.arch.gamma_c[0]
        return ArchSchwartz((ArchTerm(1.0, h + 0.5, 0, 2 * math.pi, 1),))
    return ArchBasic(rep.arch)


def _default_component(rep: RepDescriptor, p: int) -> NASchwartz:
    local = rep.local_rep(p)
    if local.twist is None:
        return basic(local)
    # ramified: the unit-ball indicator, Z(s, phi, 1) = 1 = L(s, pi_p)
    return NASchwartz(p, local, {MultChar.trivial(p): RationalFn(1)})


@dataclass(frozen=True, eq=False)
class GlobalSchwartz:
    """phi_infty (x) phi_p at special p (x) default components elsewhere.

    Default components are basic functions at unramified places and the
    indicator of Z_p^x at ramified places.
    """

    rep: RepDescriptor
    arch: object
    finite_special: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "finite_special", dict(sorted(self.finite_special.items())))
        for p, ph in self.finite_special.items():
            if ph.p != p:
                raise ValueError("component prime mismatch")

    def component(self, p: int) -> NASchwartz:
        if p in self.finite_special:
            return self.finite_special[p]
        return _default_component(self.rep, p)

    @property
    def special_primes(self) -> list:
        return sorted(set(self.finite_special) | set(self.rep.ramified_primes()))

    @cached_property
    def flags(self) -> dict:
        compact, fcompact = [], []
        for p in self.special_primes:
            ph = self.component(p)
            if membership_compact(ph):
                compact.append(p)
            if membership_compact(fourier_na(ph, AdditiveChar(p))):
                fcompact.append(p)
        # one place with compact data and one (possibly the same) with compact Fourier image
        s00 = bool(compact) and bool(fcompact)
        return {"compact": compact, "fourier_compact": fcompact, "s_circ_circ": s00}

    @property
    def is_s_circ_circ(self) -> bool:
        return self.flags["s_circ_circ"]

    def shift(self, y: Idele) -> "GlobalSchwartz":
        """x -> phi(x y)."""
        if isinstance(self.arch, ArchBasic):
            raise NotImplementedError("shift of a convolution-defined Archimedean component")
        arch = self.arch.scaled(y.t)
        if y.sign < 0:
            arch = ArchSchwartz(
                tuple(ArchTerm(-t.coeff if t.eps else t.coeff, t.a, t.eps, t.b, t.r) for t in arch.terms),
                arch.allow_nonpositive_power,
            )
        special = dict(self.finite_special)
        for q in y.finite:
            special[q.p] = self.component(q.p).translate(q)
        return GlobalSchwartz(self.rep, arch, special)

    def to_json(self):
        return {
            "rep": self.rep.name,
            "arch": self.arch.to_json(),
            "finite_special": {str(p): ph.to_json() for p, ph in self.finite_special.items()},
            "flags": self.flags,
        }


def load_datum(obj) -> GlobalSchwartz:
    """Build a datum from a catalog name or a JSON object.

    JSON form: {"rep": name, "arch": ArchSchwartz JSON (optional),
    "finite_special": {p: [{"omega": MultChar JSON, "zeta": RationalFn JSON}, ...]}}.
    """
    from .repdata import get_rep

    if isinstance(obj, str):
        return datum_for(obj)
    rep = get_rep(obj["rep"])
    arch = ArchSchwartz.from_json(obj["arch"]) if obj.get("arch") and "terms" in obj["arch"] else None
    special = {}
    for p, entries in obj.get("finite_special", {}).items():
        p = int(p)
        entries = entries["data"] if isinstance(entries, dict) else entries
        data = {MultChar.from_json(e["omega"]): RationalFn.from_json(e["zeta"]) for e in entries}
        special[p] = NASchwartz(p, rep.local_rep(p), data)
    return GlobalSchwartz(rep, arch if arch is not None else default_arch(rep), special)


def all_basic(rep: RepDescriptor, arch=None) -> GlobalSchwartz:
    return GlobalSchwartz(rep, arch if arch is not None else default_arch(rep))


def s00_datum(rep: RepDescriptor, compact: dict, fourier_compact: dict, arch=None) -> GlobalSchwartz:
    """Datum with compact Mellin data at the primes in ``compact`` and, at the
    primes in ``fourier_compact``, the component whose Fourier transform is the
    given compact data.  Values are {p: {MultChar: RationalFn-like}}.
    """
    special = {}
    for p, data in compact.items():
        special[p] = NASchwartz(p, rep.local_rep(p), data)
    for p, data in fourier_compact.items():
        dual_local = contragredient(rep).local_rep(p)
        g = NASchwartz(p, dual_local, data)
        special[p] = fourier_na(g, AdditiveChar(p, -1))
        special[p] = NASchwartz(p, rep.local_rep(p), special[p].data)
    return GlobalSchwartz(rep, arch if arch is not None else default_arch(rep), special)


def datum_for(name: str) -> GlobalSchwartz:
    """Catalogued data: 'tate', 'delta', 'sym2delta', 'chi4' (all basic) and 'tate-s00', 'chi4-s00'."""
    from .repdata import get_rep

    if name == "tate-s00":
        rep = get_rep("tate")
        one = MultChar.trivial
        return s00_datum(rep, {2: {one(2): RationalFn(1)}}, {3: {one(3): RationalFn(_poly([1, Fraction(1, 2)]))}})
    if name == "chi4-s00":
        rep = get_rep("chi4")
        q3 = MultChar.quadratic(3)
        c5 = MultChar.from_generator_turns(5, 1, [Fraction(1, 4)])
        compact = {3: {MultChar.trivial(3): RationalFn(_poly([1, Fraction(1, 2)])), q3: RationalFn(_laurent({-1: 1}))}}
        fcompact = {5: {MultChar.trivial(5): RationalFn(_poly([1, Fraction(-1, 3)])), c5: RationalFn(_laurent({1: 2}))}}
        return s00_datum(rep, compact, fcompact)
    return all_basic(get_rep(name))


def _laurent(d):
    return LaurentPoly(d)


def _poly(coeffs):
    return LaurentPoly.from_list(coeffs)


# theta ---------------------------------------------------------------------------------

@dataclass(frozen=True)
class ThetaResult:
    value: complex
    tail_bound: float
    terms_used: int
    height_cutoff: float
    magnitude: float = 0.0  # sum of |terms| + tail: a bound for |Theta|

    def to_json(self):
        return {"value": [self.value.real, self.value.imag], "tail": self.tail_bound,
                "terms": self.terms_used, "H": self.height_cutoff}


def _hecke_values(rep: RepDescriptor, p: int, K: int) -> np.ndarray:
    """basic_p(p^k) = p^{-k/2} [z^k] L(s, pi_p) for k = 0..K, as complex floats."""
    if rep.kind == "dirichlet":
        chi = rep.character.conj() if rep.dual else rep.character
        e = [chi(p)]
        if abs(abs(e[0]) - 1) > 1e-12:
            raise AssumptionViolated("Dirichlet Satake parameter off the unit circle")
    elif rep.kind == "delta":
        tau_p = tau_coeffs(max(p, rep.tau_N))[p - 1]
        a = tau_p * p ** (-5.5)
        if max(abs(np.roots([1.0, -a, 1.0]))) >= p ** rep.kappa:
            raise AssumptionViolated(f"Satake parameter too large at p={p}")
        e = [a, -1.0]
    else:
        loc = satake(rep, p)
        loc.max_real_exponent()
        e = [((-1) ** j) * complex(h.to_complex()) for j, h in enumerate(loc.hecke)]
    # c_k = sum_j e_j c_{k-1-j} with 1/P(z), P = 1 - e1 z + e2 z^2 - ...
    c = np.zeros(K + 1, dtype=complex)
    c[0] = 1.0
    for k in range(1, K + 1):
        acc = 0j
        for j, ej in enumerate(e):
            if k - 1 - j >= 0:
                acc += ej * c[k - 1 - j]
        c[k] = acc
    return c * p ** (-np.arange(K + 1) / 2)


class _Multiplicative:
    """n -> prod over p | n, p not in S of basic_p(p^{ord_p n}), grown on demand."""

    def __init__(self, rep: RepDescriptor, S: set):
        self.rep = rep
        self.S = S
        self.vals = np.ones(2, dtype=complex)
        self.N = 1

    def extend(self, N: int):
        if N <= self.N:
            return
        if self.rep.kind == "delta" and N > self.rep.tau_N:
            raise NoConvergence(f"tau truncation N={self.rep.tau_N} is too small for this evaluation")
        N = max(N, 2 * self.N)
        if self.rep.kind == "delta":
            N = min(N, self.rep.tau_N)
        spf = np.zeros(N + 1, dtype=np.int64)
        for p in primes_up_to(N):
            blk = spf[p::p]
            blk[blk == 0] = p
        vals = np.zeros(N + 1, dtype=complex)
        vals[1] = 1.0
        tables = {}
        for n in range(2, N + 1):
            p = int(spf[n])
            m, k = n, 0
            while m % p == 0:
                m //= p
                k += 1
            if p in self.S:
                vals[n] = vals[m]
                continue
            if p not in tables:
                K = int(math.log(N) / math.log(p)) + 1
                tables[p] = _hecke_values(self.rep, p, K)
            vals[n] = vals[m] * tables[p][k]
        self.vals, self.N = vals, N


class ThetaEngine:
    """Evaluates Theta(x, phi) for fixed phi and fixed finite part of x.

    alpha runs over the fractional ideal g Z with g = prod p^{low_p - m_p};
    at special places values are tabulated by (valuation step, unit residue).
    """

    def __init__(self, phi: GlobalSchwartz, finite: tuple = (), height_ceiling: float = 1e7,
                 max_terms: int = 2_000_000, sup_levels: int = 60):
        self.phi = phi
        self.rep = phi.rep
        self.height_ceiling = height_ceiling
        self.max_terms = max_terms
        x = {q.p: q for q in finite}
        self.S = sorted(set(phi.special_primes) | set(x))
        self.places = {}
        self.empty = False
        g = Fraction(1)
        for p in self.S:
            ph = phi.component(p)
            rng = ph.support_range()
            if rng is None:
                self.empty = True
                return
            c = max(1, ph.max_conductor())
            xp = x.get(p, PAdicPoint(p, 0, 1, c))
            lo, hi = rng
            e = lo - xp.m
            g *= Fraction(p) ** e
            self.places[p] = {"phi": ph, "c": c, "x": xp, "lo": lo, "hi": hi, "e": e, "cache": {}}
        self.g = g
        self.gf = float(g)
        self.mult = _Multiplicative(self.rep, set(self.S))
        self.b_plus = max(0.0, basic_exponent(self.rep.n, self.rep.kappa) - 0.5)
        self.A = 1.0
        for p, d in self.places.items():
            self.A *= self._sup(p, d, sup_levels)
        env = phi.arch.envelope()
        self.env = [(float(c), float(a), float(b), float(r)) for c, a, b, r in env]

    def _value(self, p: int, d: dict, k: int, unit: int) -> complex:
        key = (k, unit)
        v = d["cache"].get(key)
        if v is None:
            if d["hi"] is not None and d["lo"] + k > d["hi"]:
                v = 0j
            else:
                v = evaluate(d["phi"], PAdicPoint(p, d["lo"] + k, unit, d["c"]))
            d["cache"][key] = v
        return v

    def _sup(self, p: int, d: dict, levels: int) -> float:
        # sup_k |phi_p(p^{lo+k} u)| p^{-k b_+}; exact range when the support is compact
        K = d["hi"] - d["lo"] if d["hi"] is not None else levels
        units = sorted(unit_group(p, d["c"])[2]) if p ** d["c"] > 2 else [1]
        best = 0.0
        for k in range(K + 1):
            for u in units:
                best = max(best, abs(self._value(p, d, k, u)) * p ** (-k * self.b_plus))
        return best

    def _unit(self, p: int, d: dict, alpha: Fraction) -> int:
        mod = p ** d["c"]
        if mod == 1:
            return 0
        k = ord_p(alpha, p)
        y = alpha / Fraction(p) ** k
        return y.numerator * pow(y.denominator, -1, mod) * d["x"].u % mod

    def tail(self, N: int, t: float) -> float:
        """Bound for sum over |n| > N of |term|, by integral comparison."""
        if not self.env:
            return 0.0
        lam = self.gf * t
        b = self.b_plus
        total = 0.0
        for c, a, beta, r in self.env:
            w = beta * lam ** r
            sexp = (a + b + 1) / r
            Y = w * N ** r
            with mpmath.workdps(20):
                val = mpmath.gammainc(sexp, Y) * w ** (-sexp) / r * lam ** a
            total += c * float(val)
        return 2 * self.A * total

    def mode(self, t: float) -> float:
        lam = self.gf * t
        best = 0.0
        for c, a, beta, r in self.env:
            if a + self.b_plus > 0:
                best = max(best, ((a + self.b_plus) / (beta * r * lam ** r)) ** (1 / r))
        return best

    def choose_N(self, t: float, tol: float) -> int:
        N = max(4, int(math.ceil(self.mode(t))) + 1)
        while self.tail(N, t) >= tol / 2:
            N *= 2
            if N * self.gf * t > self.height_ceiling or N > self.max_terms:
                raise NoConvergence(f"height ceiling {self.height_ceiling:g} reached before tail < {tol:g}")
        return N

    def coefficients(self, N: int) -> tuple:
        """(plus, minus): finite-place products for alpha = +g n and -g n, n = 1..N."""
        cached = getattr(self, "_coeffs", None)
        if cached is not None and len(cached[0]) >= N:
            return cached[0][:N], cached[1][:N]
        self.mult.extend(N)
        plus = np.array(self.mult.vals[1 : N + 1], dtype=complex)
        minus = plus.copy()
        for p, d in self.places.items():
            gp = self.g / Fraction(p) ** d["e"]
            for n in range(1, N + 1):
                if plus[n - 1] == 0 and minus[n - 1] == 0:
                    continue
                k = ord_p(n, p)
                if d["hi"] is not None and d["lo"] + k > d["hi"]:
                    plus[n - 1] = minus[n - 1] = 0
                    continue
                a = gp * n
                plus[n - 1] *= self._value(p, d, k, self._unit(p, d, a))
                minus[n - 1] *= self._value(p, d, k, self._unit(p, d, -a))
        self._coeffs = (plus, minus)
        return plus, minus

    def evaluate(self, t: float, sign: int = 1, tol: float = 1e-12, N: int | None = None) -> ThetaResult:
        if self.empty:
            return ThetaResult(0j, 0.0, 0, 0.0)
        if N is None:
            N = self.choose_N(t, tol)
        plus, minus = self.coefficients(N)
        y = self.gf * t * np.arange(1, N + 1)
        fp = np.asarray(self.phi.arch(sign * y), dtype=complex)
        fm = np.asarray(self.phi.arch(-sign * y), dtype=complex)
        terms = np.concatenate([plus * fp, minus * fm])
        value = complex(math.fsum(terms.real), math.fsum(terms.imag))
        rounding = 16 * _EPS * float(np.sum(np.abs(terms))) + 4 * _EPS * N * float(np.max(np.abs(terms), initial=0.0))
        tail = self.tail(N, t) + rounding
        mag = float(np.sum(np.abs(terms))) + tail
        return ThetaResult(value, tail, int(np.count_nonzero(terms)), N * self.gf * t, mag)

    def evaluate_many(self, ts, sign: int = 1, tol: float = 1e-15) -> list:
        """evaluate() at many t, sharing one coefficient table."""
        if self.empty:
            return [ThetaResult(0j, 0.0, 0, 0.0) for _ in ts]
        Ns = [self.choose_N(float(t), tol) for t in ts]
        self.coefficients(max(Ns))
        return [self.evaluate(float(t), sign, tol, N) for t, N in zip(ts, Ns)]


def theta(pi: RepDescriptor, phi: GlobalSchwartz, x: Idele, tol: float = 1e-12,
          height_ceiling: float = 1e7, N: int | None = None) -> ThetaResult:
    """Theta_pi(x, phi) = sum over alpha in Q^x of phi(alpha x)."""
    if pi.name != phi.rep.name:
        raise ValueError(f"datum is over {phi.rep.name}, not {pi.name}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    eng = ThetaEngine(phi, x.finite, height_ceiling=height_ceiling)
    return eng.evaluate(x.t, x.sign, tol, N)


# Fourier and PSF --------------------------------------------------------------------------------

def global_fourier(pi: RepDescriptor, phi: GlobalSchwartz) -> GlobalSchwartz:
    """Place-wise F_{pi, psi}; basic places go to basic places of the contragredient."""
    dual = contragredient(pi)
    if isinstance(phi.arch, ArchBasic):
        arch = phi.arch.fourier(psi_sign=-1)
    else:
        arch = fourier_arch(phi.arch, pi.arch, psi_sign=-1)
    special = {}
    for p in phi.special_primes:
        img = fourier_na(phi.component(p), AdditiveChar(p))
        special[p] = NASchwartz(p, dual.local_rep(p), img.data)
    return GlobalSchwartz(dual, arch, special)


def _f_at_zero_na(ph: NASchwartz) -> complex:
    # lim_{m -> oo} p^{m/2} phi(p^m u): only a trivial-key pole at z = 1 survives
    r = ph.data.get(MultChar.trivial(ph.p))
    if r is None:
        return 0j
    q = r * RationalFn(_poly([1, -1]))
    if not q.is_laurent():
        raise Divergent("component is not of the form |x|^{1/2} f with f smooth at 0")
    return complex(q(1.0))


def _f_at_zero_arch(arch) -> complex:
    if isinstance(arch, ArchBasic):
        return 0j
    out = 0j
    for t in arch.terms:
        if t.eps == 0 and abs(t.a - 0.5) < 1e-12:
            out += t.coeff
        elif t.a < 0.5:
            raise Divergent("Archimedean component blows up faster than |x|^{1/2} at 0")
    return out


def boundary_constants(pi: RepDescriptor, phi: GlobalSchwartz, phi_hat: GlobalSchwartz | None = None) -> tuple:
    """(A, C) with Theta(x, phi) - Theta~(x^{-1}, F phi) = A |x|^{-1/2} - C |x|^{1/2}.

    Both vanish unless pi is the trivial idele class character.
    """
    if not (pi.kind == "dirichlet" and pi.character.is_trivial):
        return 0j, 0j
    phi_hat = phi_hat or global_fourier(pi, phi)
    C = _f_at_zero_arch(phi.arch)
    A = _f_at_zero_arch(phi_hat.arch)
    for p in phi.special_primes:
        C *= _f_at_zero_na(phi.component(p))
        A *= _f_at_zero_na(phi_hat.component(p))
    return A, C


@dataclass(frozen=True)
class PSFResult:
    lhs: ThetaResult
    rhs: ThetaResult
    abs_err: float
    rel_err: float
    domain_status: str
    boundary: complex = 0j

    def to_json(self):
        return {
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "domain_status": self.domain_status,
            "boundary": [self.boundary.real, self.boundary.imag],
        }


def domain_status(pi: RepDescriptor, phi: GlobalSchwartz) -> str:
    if pi.cuspidal:
        return "cuspidal-theorem"
    if pi.kind == "dirichlet" and phi.is_s_circ_circ:
        return "s-circ-circ"
    return "conjecture-probe"


def psf_check(pi: RepDescriptor, phi: GlobalSchwartz, x: Idele, tol: float = 1e-13) -> PSFResult:
    """Compare Theta_pi(x, phi) with Theta_pi~(x^{-1}, F phi).

    ``boundary`` is the classical boundary term A|x|^{-1/2} - C|x|^{1/2}
    (nonzero only for the trivial character without S-circ-circ data);
    it is reported, not subtracted.
    """
    fphi = global_fourier(pi, phi)
    lhs = theta(pi, phi, x, tol)
    rhs = theta(fphi.rep, fphi, x.inverse(), tol)
    A, C = boundary_constants(pi, phi, fphi)
    nx = x.norm
    bnd = A * nx ** -0.5 - C * nx ** 0.5
    err = abs(lhs.value - rhs.value)
    scale = max(abs(lhs.value), abs(rhs.value))
    rel = err / scale if scale > 0 else (0.0 if err == 0 else math.inf)
    return PSFResult(lhs, rhs, err, rel, domain_status(pi, phi), complex(bnd))


# global zeta -------------------------------------------------------------------------------

@dataclass(frozen=True)
class ZetaValue:
    value: complex
    error: float
    path: str
    detail: dict = field(default_factory=dict)

    def to_json(self):
        return {"value": [self.value.real, self.value.imag], "error": self.error, "path": self.path,
                "detail": self.detail}


def _test_components(chi: DirichletCharacter, p: int):
    """(unit character, value at p) of the idele class character of chi at p."""
    if chi.is_trivial:
        return MultChar.trivial(p), 1 + 0j
    unit = chi.local_unit_character(p).inverse() if chi.modulus % p == 0 else MultChar.trivial(p)
    return unit, chi.away_from(p)(p)


def global_zeta(pi: RepDescriptor, phi: GlobalSchwartz, s: complex, chi: DirichletCharacter | None = None,
                path: str = "euler", P: int = 10 ** 5) -> ZetaValue:
    """Z(s, phi, chi) = int phi(x) chi(x) |x|^{s-1/2} d^x x.

    Euler path: Archimedean and special-place zeta integrals times the partial
    Euler product over unramified p <= P.  Theta path: Mellin transform of the
    theta series (see zeros.completed).
    """
    chi = chi or DirichletCharacter.trivial()
    s = complex(s)
    if path == "theta":
        from .zeros import SpectralProbe, completed

        val, err = completed(SpectralProbe(pi, chi, 2.0, phi), s, with_error=True)
        return ZetaValue(val, err, "theta")
    if path != "euler":
        raise ValueError("path must be 'euler' or 'theta'")
    theta_max = pi.kappa
    sigma = s.real - theta_max
    if sigma <= 1:
        raise Divergent(f"Re(s) = {s.real} is not beyond the abscissa 1 + kappa = {1 + theta_max}")
    val = complex(zeta_arch(phi.arch, s, parity=chi.parity))
    S = set(phi.special_primes) | set(_prime_factors(chi.modulus) if chi.modulus > 1 else ())
    for p in sorted(S):
        unit, beta = _test_components(chi, p)
        ph = phi.component(p)
        r = ph.data.get(unit.finite_part)
        if r is None:
            return ZetaValue(0j, 0.0, "euler", {"vanishing_place": p})
        val *= r(beta * p ** (-s))
    logsum = 0j
    for p in primes_up_to(P):
        p = int(p)
        if p in S:
            continue
        beta = chi(p)
        e = _euler_hecke(pi, p)
        z = beta * p ** (-s)
        poly = 1 + 0j
        zk = 1 + 0j
        for j, ej in enumerate(e, start=1):
            zk *= z
            poly += (-1) ** j * ej * zk
        logsum -= np.log(poly)
    val *= np.exp(logsum)
    # tail: |log prod_{p>P}| <= n sum_{m>P} 1.01 m^{-sigma} <= 1.01 n P^{1-sigma} / (sigma - 1)
    tail = 1.01 * pi.n * P ** (1 - sigma) / (sigma - 1)
    err = abs(val) * (math.expm1(tail)) + 64 * _EPS * abs(val) * math.log(P)
    return ZetaValue(complex(val), err, "euler", {"P": P})


def _euler_hecke(pi: RepDescriptor, p: int) -> list:
    if pi.kind == "dirichlet":
        ch = pi.character.conj() if pi.dual else pi.character
        return [ch(p)]
    if pi.kind == "delta":
        return [tau_coeffs(max(p, pi.tau_N))[p - 1] * p ** (-5.5), 1.0]
    return [complex(h.to_complex()) for h in satake(pi, p).hecke]
