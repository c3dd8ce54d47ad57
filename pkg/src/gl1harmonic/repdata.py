"""Automorphic representation descriptors: Dirichlet characters, Delta, duals, twists, Sym^k transfers.

Normalization is analytic throughout: Delta has a_p = tau(p) p^{-11/2} and
every completed L-function is symmetric under s <-> 1 - s.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from flint import fmpz_poly

from .cyclotomic import Cyclo, root_of_unity
from .errors import RamifiedPlace
from .localfield import MultChar, is_prime, unit_group
from .mellin_arch import ArchParams
from .mellin_na import UnramifiedRep, sqrt_p_power

__all__ = [
    "tau_coeffs",
    "DirichletCharacter",
    "RepDescriptor",
    "TransferData",
    "satake",
    "transfer",
    "contragredient",
    "twist",
    "get_rep",
    "CATALOG",
    "CACHE_ENV",
    "KAPPA_MARGIN",
]

CACHE_ENV = "GL1H_CACHE_DIR"
KAPPA_MARGIN = 0.01
TAU_FORMAT_VERSION = 1
_TAU_SIZES = (1000, 2000, 5000, 10000, 20000, 50000, 100000)


# tau(n) --------------------------------------------------------------------

def _mul_trunc(a: list, b: list, n: int) -> list:
    """Exact product of integer series truncated to n terms."""
    prod = (fmpz_poly(a[:n]) * fmpz_poly(b[:n])).coeffs()[:n]
    return [int(c) for c in prod] + [0] * (n - len(prod))


def _tau_series(N: int) -> list:
    # prod (1 - q^n)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}  (Jacobi)
    e3 = [0] * N
    k = 0
    while k * (k + 1) // 2 < N:
        e3[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    sq = _mul_trunc(e3, e3, N)        # ^6
    sq = _mul_trunc(sq, sq, N)        # ^12
    sq = _mul_trunc(sq, sq, N)        # ^24
    return [0] + sq[: N - 1]          # times q


def _cache_dir() -> Path:
    d = os.environ.get(CACHE_ENV)
    if d:
        return Path(d)
    return Path.home() / ".cache" / "gl1harmonic"


def _cache_path(N: int) -> Path:
    return _cache_dir() / f"tau_{N}.bin"


def _write_cache(path: Path, values: list) -> None:
    body = b"".join(int(v).to_bytes(16, "little", signed=True) for v in values)
    header = {"format_version": TAU_FORMAT_VERSION, "N": len(values), "sha256": hashlib.sha256(body).hexdigest()}
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(json.dumps(header, sort_keys=True).encode() + b"\n" + body)
    tmp.replace(path)


def _read_cache(path: Path, N: int):
    try:
        raw = path.read_bytes()
    except OSError:
        return None
    head, _, body = raw.partition(b"\n")
    try:
        header = json.loads(head)
    except ValueError:
        return None
    if header.get("format_version") != TAU_FORMAT_VERSION or header.get("N") != N:
        return None
    if hashlib.sha256(body).hexdigest() != header.get("sha256") or len(body) != 16 * N:
        return None
    return [int.from_bytes(body[16 * i : 16 * i + 16], "little", signed=True) for i in range(N)]


@lru_cache(maxsize=8)
def _tau_cached(N: int, use_cache: bool) -> tuple:
    if use_cache:
        vals = _read_cache(_cache_path(N), N)
        if vals is not None:
            return tuple(vals)
    vals = _tau_series(N + 1)[1:]
    if use_cache:
        try:
            _write_cache(_cache_path(N), vals)
        except OSError:
            pass
    return tuple(vals)


def tau_coeffs(N: int, use_cache: bool = True, limit: int = 10 ** 5) -> list:
    """[tau(1), ..., tau(N)] from q prod (1 - q^n)^24, exactly."""
    if N < 1:
        raise ValueError("N must be positive")
    if N > limit:
        raise ValueError(f"N = {N} exceeds the configured limit {limit}")
    # serve requests from a few fixed table sizes so cache files are shared
    size = next((m for m in _TAU_SIZES if m >= N), N)
    return list(_tau_cached(size, use_cache)[:N])


# Dirichlet characters ---------------------------------------------------------

def _factor(n: int) -> dict:
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class DirichletCharacter:
    """Primitive character mod N given by turns on (Z/N)^x."""

    modulus: int
    table: tuple  # (residue, turns)

    def __post_init__(self):
        tbl = tuple(sorted((int(a) % max(self.modulus, 1), Fraction(t) % 1) for a, t in self.table))
        object.__setattr__(self, "table", tbl)
        units = {a for a in range(self.modulus) if math.gcd(a, self.modulus) == 1} if self.modulus > 1 else {0}
        if {a for a, _ in tbl} != units:
            raise ValueError("table must cover (Z/N)^x")
        for p, c in _factor(self.modulus).items():
            if self.local_unit_character(p).cond != c:
                raise ValueError(f"character is not primitive at {p}")

    @classmethod
    def trivial(cls) -> "DirichletCharacter":
        return cls(1, ((0, 0),))

    @classmethod
    def kronecker(cls, d: int) -> "DirichletCharacter":
        """The real primitive character attached to a fundamental discriminant d."""
        N = abs(d)

        def kr(a):
            # Kronecker symbol (d / a) for a > 0 coprime to d
            result = 1
            for p, e in _factor(a).items():
                if p == 2:
                    v = 0 if d % 2 == 0 else (1 if d % 8 in (1, 7) else -1)
                else:
                    v = pow(d % p, (p - 1) // 2, p)
                    v = -1 if v == p - 1 else v
                result *= v ** e
            return result

        table = []
        for a in range(1, N):
            if math.gcd(a, N) == 1:
                table.append((a, Fraction(0) if kr(a) == 1 else Fraction(1, 2)))
        return cls(N, tuple(table))

    def turns(self, n: int) -> Fraction | None:
        if self.modulus == 1:
            return Fraction(0)
        if math.gcd(n, self.modulus) != 1:
            return None
        return dict(self.table)[n % self.modulus]

    def __call__(self, n: int) -> complex:
        t = self.turns(n)
        if t is None:
            return 0j
        return complex(root_of_unity(t).to_complex())

    def exact(self, n: int) -> Cyclo:
        t = self.turns(n)
        return Cyclo.zero() if t is None else root_of_unity(t)

    @property
    def parity(self) -> int:
        return 0 if self.turns(self.modulus - 1 if self.modulus > 1 else 1) == 0 else 1

    @property
    def is_trivial(self) -> bool:
        return self.modulus == 1

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple((a, -t) for a, t in self.table))

    def local_unit_character(self, p: int) -> MultChar:
        """chi_p: the p-part of chi, restricted to units mod p^c (c = ord_p N)."""
        c = _factor(self.modulus).get(p, 0)
        if c == 0:
            return MultChar.trivial(p)
        pc = p ** c
        M = self.modulus // pc
        _, _, log = unit_group(p, c)
        table = {}
        for u in log:
            # n = u mod p^c, n = 1 mod M
            n = (u * M * pow(M, -1, pc) + pc * pow(pc, -1, M)) % self.modulus if M > 1 else u
            table[u] = self.turns(n)
        return MultChar.from_table(p, c, table)

    def away_from(self, p: int) -> "DirichletCharacter":
        """The prime-to-p component chi_M (M = N / p^c)."""
        c = _factor(self.modulus).get(p, 0)
        M = self.modulus // p ** c
        if M == 1:
            return DirichletCharacter.trivial()
        pc = p ** c
        table = []
        for a in range(M):
            if math.gcd(a, M) == 1:
                n = (a * pc * pow(pc, -1, M) + M * pow(M, -1, pc)) % self.modulus
                table.append((a, self.turns(n)))
        return DirichletCharacter(M, tuple(table))

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        raise NotImplementedError("products of Dirichlet characters need re-primitivization")

    def to_json(self):
        return {"modulus": self.modulus, "table": {str(a): str(t) for a, t in self.table}}

    @classmethod
    def from_json(cls, obj) -> "DirichletCharacter":
        return cls(int(obj["modulus"]), tuple((int(a), Fraction(t)) for a, t in obj["table"].items()))


# descriptors --------------------------------------------------------------------

@dataclass(frozen=True)
class TransferData:
    rho: int  # Sym^k degree
    source: "RepDescriptor"


@dataclass(frozen=True)
class RepDescriptor:
    """Global representation over Q as per-place local data.

    kind: 'dirichlet' (GL(1) idele class character of a primitive Dirichlet
    character), 'delta' (the weight 12 level 1 cusp form) or 'transfer'
    (Sym^k of a GL(2) descriptor).  ``dual`` records whether the descriptor is
    the contragredient of the underlying object.
    """

    name: str
    kind: str
    n: int
    eps_sign: int
    arch: ArchParams
    character: DirichletCharacter | None = None
    transfer_of: TransferData | None = None
    dual: bool = False
    normalization: str = "analytic"
    tau_N: int = 2000

    @property
    def kappa(self) -> float:
        if self.kind == "transfer":
            return self.transfer_of.rho * self.transfer_of.source.kappa
        return (self.n - 1) / 2 + KAPPA_MARGIN

    @property
    def cuspidal(self) -> bool:
        return self.kind == "delta"

    @property
    def conductor(self) -> int:
        return self.character.modulus if self.kind == "dirichlet" else 1

    def ramified_primes(self) -> list:
        return sorted(_factor(self.conductor)) if self.conductor > 1 else []

    def is_ramified(self, p: int) -> bool:
        return self.conductor % p == 0 and self.conductor > 1

    def local_rep(self, p: int) -> UnramifiedRep:
        """Local component at p, including character-twisted ramified places."""
        if not self.is_ramified(p):
            return satake(self, p)
        # ramified GL(1): unit part chi_p^{-1}, value at p equals chi_M(p)
        chi = self.character if not self.dual else self.character.conj()
        unit = chi.local_unit_character(p).inverse()
        alpha = chi.away_from(p).exact(p)
        return UnramifiedRep.from_satake(p, [alpha], self.kappa, twist=unit)

    def contragredient(self) -> "RepDescriptor":
        return contragredient(self)

    def to_json(self):
        out = {
            "name": self.name,
            "kind": self.kind,
            "n": self.n,
            "eps_sign": self.eps_sign,
            "arch": self.arch.to_json(),
            "dual": self.dual,
            "normalization": self.normalization,
        }
        if self.character is not None:
            out["character"] = self.character.to_json()
        if self.transfer_of is not None:
            out["transfer"] = {"rho": self.transfer_of.rho, "source": self.transfer_of.source.name}
        return out


@lru_cache(maxsize=None)
def _delta_hecke(p: int, N: int):
    tau = tau_coeffs(max(N, p))
    return sqrt_p_power(p, -11) * tau[p - 1]


@lru_cache(maxsize=4096)
def _satake_cached(rep: RepDescriptor, p: int) -> UnramifiedRep:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if rep.is_ramified(p):
        raise RamifiedPlace(f"{rep.name} is ramified at {p}")
    if rep.kind == "dirichlet":
        chi = rep.character if not rep.dual else rep.character.conj()
        return UnramifiedRep.from_satake(p, [chi.exact(p)], rep.kappa)
    if rep.kind == "delta":
        ap = _delta_hecke(p, rep.tau_N)
        return UnramifiedRep.from_hecke(p, [ap, 1], rep.kappa)
    if rep.kind == "transfer":
        return transfer(rep.transfer_of, p)
    raise ValueError(f"unknown kind {rep.kind}")


def satake(rep: RepDescriptor, p: int) -> UnramifiedRep:
    return _satake_cached(rep, p)


def _sym_hecke(e1: Cyclo, e2: Cyclo, k: int) -> list:
    """Elementary symmetric functions of {alpha^{k-i} beta^i} from e1 = alpha+beta, e2 = alpha beta."""
    n = k + 1
    # t_m = alpha^m + beta^m
    t = [Cyclo.rational(2), e1]
    e2_pow = [Cyclo.one()]
    for m in range(2, n * k + 2):
        t.append(e1 * t[m - 1] - e2 * t[m - 2])
    for m in range(1, n + 2):
        e2_pow.append(e2_pow[-1] * e2)
    # power sums P_m = h_k(alpha^m, beta^m) via h_j = t_m h_{j-1} - e2^m h_{j-2}
    P = []
    for m in range(1, n + 1):
        h_prev, h = Cyclo.one(), t[m]
        if k == 0:
            P.append(Cyclo.one())
            continue
        for _ in range(2, k + 1):
            h_prev, h = h, t[m] * h - e2_pow[m] * h_prev
        P.append(h)
    # Newton: j e_j = sum_{i=1}^j (-1)^{i-1} e_{j-i} P_i
    e = [Cyclo.one()]
    for j in range(1, n + 1):
        acc = Cyclo.zero()
        for i in range(1, j + 1):
            term = e[j - i] * P[i - 1]
            acc = acc + term if i % 2 == 1 else acc - term
        e.append(acc * Fraction(1, j))
    return e[1:]


def transfer(td: TransferData, p: int) -> UnramifiedRep:
    src = satake(td.source, p)
    if src.n != 2:
        raise ValueError("Sym^k transfer needs GL(2) source data")
    k = td.rho
    kappa = max(k * td.source.kappa, KAPPA_MARGIN)
    if k == 0:
        return UnramifiedRep.from_satake(p, [1], kappa)
    hecke = _sym_hecke(src.hecke[0], src.hecke[1], k)
    a, b = src.satake
    sat = [a ** (k - i) * b ** i for i in range(k + 1)]
    return UnramifiedRep(p, tuple(hecke), tuple(sat), kappa)


def contragredient(rep: RepDescriptor) -> RepDescriptor:
    if rep.kind in ("delta", "transfer") or (rep.kind == "dirichlet" and rep.character.parity is not None
                                               and all(t in (0, Fraction(1, 2)) for _, t in rep.character.table)):
        # self-dual: real characters, Delta and its symmetric powers
        return rep
    name = rep.name[:-1] if rep.name.endswith("~") else rep.name + "~"
    return replace(rep, dual=not rep.dual, name=name)


def twist(rep: RepDescriptor, chi: DirichletCharacter) -> RepDescriptor:
    if chi.is_trivial:
        return rep
    if rep.kind == "dirichlet" and rep.character.is_trivial:
        return dirichlet_rep(chi)
    raise NotImplementedError("twists beyond the trivial GL(1) character are not in the catalog")


def _sym_arch(k: int, weight: int = 12) -> ArchParams:
    w = weight - 1
    if k % 2 == 0:
        return ArchParams(gamma_r=((k // 2) % 2,), gamma_c=tuple(j * w for j in range(1, k // 2 + 1)))
    return ArchParams(gamma_c=tuple((j + 0.5) * w for j in range((k - 1) // 2 + 1)))


def dirichlet_rep(chi: DirichletCharacter, name: str | None = None) -> RepDescriptor:
    return RepDescriptor(
        name=name or (f"dirichlet{chi.modulus}" if not chi.is_trivial else "tate"),
        kind="dirichlet",
        n=1,
        eps_sign=1,
        arch=ArchParams(gamma_r=(chi.parity,)),
        character=chi,
    )


def delta_rep(tau_N: int = 2000) -> RepDescriptor:
    return RepDescriptor("delta", "delta", 2, 1, ArchParams(gamma_c=(5.5,)), tau_N=tau_N)


def sym_rep(k: int, source: RepDescriptor | None = None) -> RepDescriptor:
    source = source or delta_rep()
    if k == 0:
        return dirichlet_rep(DirichletCharacter.trivial())
    if k == 1:
        return source
    return RepDescriptor(f"sym{k}delta", "transfer", k + 1, 1, _sym_arch(k), transfer_of=TransferData(k, source))


CATALOG = {
    "tate": lambda: dirichlet_rep(DirichletCharacter.trivial()),
    "zeta": lambda: dirichlet_rep(DirichletCharacter.trivial()),
    "trivial": lambda: dirichlet_rep(DirichletCharacter.trivial()),
    "chi4": lambda: dirichlet_rep(DirichletCharacter.kronecker(-4), "chi4"),
    "chi3": lambda: dirichlet_rep(DirichletCharacter.kronecker(-3), "chi3"),
    "chi5": lambda: dirichlet_rep(DirichletCharacter.kronecker(5), "chi5"),
    "delta": delta_rep,
    "sym2delta": lambda: sym_rep(2),
}


def get_rep(name: str) -> RepDescriptor:
    try:
        return CATALOG[name]()
    except KeyError:
        raise ValueError(f"unknown representation {name!r}; known: {sorted(CATALOG)}") from None
