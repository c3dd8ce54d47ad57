"""Mellin transform of theta, completed L-values on the critical line, zeros, decay and Sobolev diagnostics.

The global zeta integral unfolds over the fundamental domain R_+ x prod Z_p^x:

    Z(s) = 1/2 int_0^oo Theta_chi(t) t^{s-1/2} dt/t,

where Theta_chi averages Theta over the unit parts against chi.  The range
t < 1 is folded onto t > 1 by the Poisson summation formula, leaving

    Z(s) = 1/2 [ int_1^oo Theta_chi(t) t^{s-1/2} dt/t
               + int_1^oo Theta~_{chi^-1}(t) t^{1/2-s} dt/t + A/(s-1) - C/s ],

with A, C the boundary constants (zero unless pi and chi are trivial).
Both integrals are computed by composite Gauss-Legendre quadrature in log t
on one precomputed grid, so each new s costs two dot products.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import PhiMismatch
from .localfield import PAdicPoint, unit_group
from .repdata import DirichletCharacter, RepDescriptor
from .theta_global import (
    GlobalSchwartz,
    ThetaEngine,
    _test_components,
    boundary_constants,
    datum_for,
    global_fourier,
    global_zeta,
)

__all__ = [
    "SpectralProbe",
    "QuadConfig",
    "ZeroReport",
    "SobolevNorm",
    "DecayReport",
    "get_probe",
    "PROBES",
    "completed",
    "completed_on_line",
    "anchor_check",
    "find_zeros",
    "theta_section",
    "sobolev_norm",
    "decay_verify",
]

ANCHOR_S = 3.0
ANCHOR_TOL = 1e-8


@dataclass(frozen=True)
class QuadConfig:
    panel: float = 0.1      # panel width in log t
    nodes: int = 20         # Gauss-Legendre nodes per panel
    theta_tol: float = 1e-16
    sigma_max: float = 3.5  # grid reaches far enough for |Re(s) - 1/2| <= sigma_max
    floor: float = 1e-22    # truncate once |Theta| t^{sigma_max} drops below this

    def refined(self) -> "QuadConfig":
        return replace(self, panel=self.panel / 2, theta_tol=self.theta_tol / 2)


@dataclass(eq=False)
class SpectralProbe:
    """pi, a Dirichlet character chi (trivial on the R_+ section), delta > 1 and a datum phi."""

    pi: RepDescriptor
    chi: DirichletCharacter
    delta: float
    phi: GlobalSchwartz
    name: str = ""
    rotation: str = "real"  # 'real': Z(1/2 + i mu) is real; 'abs': minima of |Z|
    quad: QuadConfig = field(default_factory=QuadConfig)

    def __post_init__(self):
        if not self.delta > 1:
            raise ValueError("the Sobolev exponent delta must exceed 1")
        self._grid = None
        self._anchor = None

    @property
    def conductor(self) -> int:
        return self.pi.conductor * self.chi.modulus

    def rotated(self, mu: float, value: complex) -> complex:
        """q^{i mu/2} Z(1/2 + i mu): real for self-dual probes with root number +1."""
        return value * self.conductor ** (0.5j * mu)

    def refined(self, tau_factor: int = 2) -> "SpectralProbe":
        pi = self.pi
        if pi.kind == "delta":
            pi = replace(pi, tau_N=pi.tau_N * tau_factor)
        phi = GlobalSchwartz(pi, self.phi.arch, dict(self.phi.finite_special))
        return SpectralProbe(pi, self.chi, self.delta, phi, self.name, self.rotation, self.quad.refined())

    def metadata(self) -> dict:
        g = _grid(self)
        return {
            "probe": self.name,
            "rep": self.pi.name,
            "tau_N": self.pi.tau_N if self.pi.kind == "delta" else None,
            "panel": self.quad.panel,
            "nodes": self.quad.nodes,
            "log_t_max": g.vmax,
            "theta_tol": self.quad.theta_tol,
            "max_terms": g.max_terms,
        }


def _probe(name: str, rep: str, datum: str, rotation: str = "real", tau_N: int | None = None) -> SpectralProbe:
    phi = datum_for(datum)
    pi = phi.rep
    if tau_N is not None and pi.kind == "delta":
        pi = replace(pi, tau_N=tau_N)
        phi = GlobalSchwartz(pi, phi.arch, dict(phi.finite_special))
    return SpectralProbe(pi, DirichletCharacter.trivial(), 2.0, phi, name, rotation)


PROBES = {
    "zeta": lambda: _probe("zeta", "tate", "tate"),
    "tate": lambda: _probe("tate", "tate", "tate"),
    "tate-s00": lambda: _probe("tate-s00", "tate", "tate-s00", "abs"),
    "delta": lambda: _probe("delta", "delta", "delta", tau_N=200),
    "chi4": lambda: _probe("chi4", "chi4", "chi4"),
    "chi4-s00": lambda: _probe("chi4-s00", "chi4", "chi4-s00", "abs"),
}


def get_probe(name: str) -> SpectralProbe:
    try:
        return PROBES[name]()
    except KeyError:
        raise ValueError(f"unknown probe {name!r}; known: {sorted(PROBES)}") from None


# theta on the R_+ section --------------------------------------------------------

def _unit_combos(probe: SpectralProbe) -> list:
    """[(finite idele part, weight chi(u))] over the unit residues that matter."""
    phi, chi = probe.phi, probe.chi
    primes = sorted(set(phi.special_primes) | (set(_pf(chi.modulus)) if chi.modulus > 1 else set()))
    trivial_keys = all(
        all(k.is_trivial for k in phi.component(p).data) for p in phi.special_primes
    )
    if chi.is_trivial and trivial_keys:
        return [((), 1.0 + 0j)]
    axes = []
    for p in primes:
        unit, _ = _test_components(chi, p)
        c = max(1, unit.cond, phi.component(p).max_conductor())
        units = sorted(unit_group(p, c)[2]) if p ** c > 2 else [1]
        axes.append([(PAdicPoint(p, 0, u, c), complex(np.exp(2j * np.pi * float(unit.turns(u))))) for u in units])
    out = []
    for combo in itertools.product(*axes):
        w = 1.0 + 0j
        for _, wv in combo:
            w *= wv
        out.append((tuple(q for q, _ in combo), w))
    return out


def _pf(n: int) -> list:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class _Side:
    """t -> average over units of w(u) Theta(t, u) for one datum (t >= 1)."""

    def __init__(self, phi: GlobalSchwartz, combos: list):
        self.parts = [(ThetaEngine(phi, fin), w) for fin, w in combos]
        self.weight = len(combos)

    def values(self, ts, tol: float):
        vals = np.zeros(len(ts), dtype=complex)
        mags = np.zeros(len(ts))
        terms = 0
        for eng, w in self.parts:
            res = eng.evaluate_many(ts, 1, tol)
            vals += w * np.array([r.value for r in res])
            mags += np.array([r.magnitude for r in res])
            terms = max(terms, max((r.terms_used for r in res), default=0))
        return vals / self.weight, mags / self.weight, terms


@dataclass
class _Grid:
    v: np.ndarray
    w: np.ndarray
    theta: np.ndarray        # Theta_chi(e^v)
    theta_dual: np.ndarray   # Theta~_{chi^-1}(e^v)
    A: complex
    C: complex
    vmax: float
    trunc: float             # bound for |Theta| at the cut
    max_terms: int
    coarse: tuple            # (v, w, theta, theta_dual) with half the nodes, for error estimates


def _sides(probe: SpectralProbe):
    combos = _unit_combos(probe)
    fphi = global_fourier(probe.pi, probe.phi)
    inv = [(tuple(q.inverse() for q in fin), w.conjugate()) for fin, w in combos]
    # the chi-average of the boundary term survives only for chi with trivial finite part
    avg = sum(w for _, w in combos) / len(combos)
    A, C = boundary_constants(probe.pi, probe.phi, fphi)
    return _Side(probe.phi, combos), _Side(fphi, inv), A * avg, C * avg


def _grid(probe: SpectralProbe) -> _Grid:
    if probe._grid is not None:
        return probe._grid
    q = probe.quad
    side, dual, A, C = _sides(probe)
    # find the cut: |Theta(t)| t^{sigma_max} below the floor on both sides
    vmax = 0.5
    while True:
        t = math.exp(vmax)
        m1 = side.values([t], q.theta_tol)[1][0]
        m2 = dual.values([t], q.theta_tol)[1][0]
        if max(m1, m2) * t ** q.sigma_max < q.floor or vmax > 12:
            break
        vmax += 0.25
    npan = int(math.ceil(vmax / q.panel))
    edges = np.linspace(0.0, vmax, npan + 1)

    def rule(nodes):
        x, wt = np.polynomial.legendre.leggauss(nodes)
        vs, ws = [], []
        for a, b in zip(edges[:-1], edges[1:]):
            vs.append((b - a) / 2 * x + (a + b) / 2)
            ws.append((b - a) / 2 * wt)
        return np.concatenate(vs), np.concatenate(ws)

    v, w = rule(q.nodes)
    ts = np.exp(v)
    th, _, n1 = side.values(ts, q.theta_tol)
    thd, _, n2 = dual.values(ts, q.theta_tol)
    vc, wc = rule(max(4, q.nodes // 2))
    tc = np.exp(vc)
    coarse = (vc, wc, side.values(tc, q.theta_tol)[0], dual.values(tc, q.theta_tol)[0])
    trunc = max(m1, m2)
    probe._grid = _Grid(v, w, th, thd, A, C, vmax, trunc, max(n1, n2), coarse)
    return probe._grid


def theta_section(probe: SpectralProbe, ts) -> np.ndarray:
    """Theta_chi(t) for t > 0; t < 1 goes through the Poisson summation formula."""
    side, dual, A, C = _sides(probe)
    ts = np.asarray(ts, dtype=float)
    out = np.zeros(ts.shape, dtype=complex)
    hi = ts >= 1
    if hi.any():
        out[hi] = side.values(ts[hi], probe.quad.theta_tol)[0]
    lo = ~hi
    if lo.any():
        tl = ts[lo]
        out[lo] = dual.values(1 / tl, probe.quad.theta_tol)[0] + A * tl ** -0.5 - C * tl ** 0.5
    return out


def _integrate(v, w, th, thd, A, C, s: complex) -> complex:
    t1 = np.exp((s - 0.5) * v)
    t2 = np.exp((0.5 - s) * v)
    val = np.dot(w, th * t1) + np.dot(w, thd * t2)
    if A != 0:
        val += A / (s - 1)
    if C != 0:
        val -= C / s
    return 0.5 * val


def completed(probe: SpectralProbe, s: complex, with_error: bool = False):
    """Z(s, phi, chi) by the theta path; with_error adds (quadrature + truncation) estimate."""
    g = _grid(probe)
    s = complex(s)
    val = _integrate(g.v, g.w, g.theta, g.theta_dual, g.A, g.C, s)
    if not with_error:
        return complex(val)
    coarse = _integrate(*g.coarse, g.A, g.C, s)
    sig = abs(s.real - 0.5)
    trunc = g.trunc * math.exp(g.vmax * sig)
    return complex(val), float(abs(val - coarse) + trunc)


def anchor_check(probe: SpectralProbe, s: complex = ANCHOR_S, P: int = 10 ** 5) -> dict:
    """Theta path against the Euler-product path at a point of absolute convergence."""
    theta_val = completed(probe, s)
    P_use = P if probe.pi.kind != "delta" else min(P, probe.pi.tau_N * 50)
    euler = global_zeta(probe.pi, probe.phi, s, probe.chi, path="euler", P=P_use)
    diff = abs(theta_val - euler.value)
    rel = diff / max(abs(euler.value), 1e-300)
    return {"s": [complex(s).real, complex(s).imag], "theta": [theta_val.real, theta_val.imag],
            "euler": [euler.value.real, euler.value.imag], "euler_error": euler.error,
            "abs_diff": diff, "rel_diff": rel, "P": P_use}


def completed_on_line(probe: SpectralProbe, mu: float, check: bool = True) -> complex:
    """Z(1/2 + i mu, phi, chi); raises PhiMismatch if the anchor identity fails."""
    if check:
        if probe._anchor is None:
            probe._anchor = anchor_check(probe)
        if probe._anchor["rel_diff"] > ANCHOR_TOL:
            raise PhiMismatch(f"theta path and Euler path disagree at s={ANCHOR_S}: rel {probe._anchor['rel_diff']:.3g}")
    return completed(probe, 0.5 + 1j * mu)


# zeros ------------------------------------------------------------------------------

@dataclass
class ZeroReport:
    mus: list
    refine_tol: float
    brackets: list
    certificate: str
    metadata: dict = field(default_factory=dict)
    scan: list = field(default_factory=list)  # (mu, re, im)

    def to_json(self):
        return {
            "mus": self.mus,
            "refine_tol": self.refine_tol,
            "brackets": self.brackets,
            "certificate": self.certificate,
            "multiplicity": [1] * len(self.mus),
            "metadata": self.metadata,
        }

    def csv_rows(self) -> list:
        return [("mu", "re", "im")] + [(f"{m:.10g}", f"{r:.17g}", f"{i:.17g}") for m, r, i in self.scan]


def find_zeros(probe: SpectralProbe, mu_range=(10.0, 15.0), step: float = 0.05, refine_tol: float = 1e-6,
               check: bool = True) -> ZeroReport:
    """Sign changes of Re Z(1/2 + i mu) (rotation 'real') or small minima of |Z| (rotation 'abs')."""
    a, b = map(float, mu_range)
    if b < a:
        a, b = b, a
    n = max(1, int(math.ceil((b - a) / step - 1e-9)))
    mus = np.linspace(a, b, n + 1)
    vals = np.array([probe.rotated(m, completed_on_line(probe, m, check=check)) for m in mus])
    scan = [(float(m), float(v.real), float(v.imag)) for m, v in zip(mus, vals)]
    meta = probe.metadata()
    meta["step"] = step
    meta["max_abs_imag"] = float(np.max(np.abs(vals.imag)))
    meta["rotation"] = probe.rotation
    meta["conductor"] = probe.conductor
    if probe._anchor is not None:
        meta["anchor"] = probe._anchor

    def f(m):
        return probe.rotated(m, completed(probe, 0.5 + 1j * m)).real

    found, brackets = [], []
    if probe.rotation == "real":
        re = vals.real
        for i in range(n):
            lo, hi = mus[i], mus[i + 1]
            flo, fhi = re[i], re[i + 1]
            if flo == 0:
                found.append(float(lo))
                brackets.append([float(lo), float(lo)])
                continue
            if flo * fhi < 0:
                while hi - lo > refine_tol:
                    mid = 0.5 * (lo + hi)
                    fm = f(mid)
                    if fm == 0:
                        lo = hi = mid
                        break
                    if (fm < 0) == (flo < 0):
                        lo, flo = mid, fm
                    else:
                        hi = mid
                found.append(0.5 * (lo + hi))
                brackets.append([float(lo), float(hi)])
        cert = "sign change of the real-valued Z(1/2 + i mu)"
    else:
        mag = np.abs(vals)
        window = max(1, int(round(1.0 / step)))
        for i in range(1, n):
            if not (mag[i] <= mag[i - 1] and mag[i] <= mag[i + 1]):
                continue
            lo, hi = mus[i - 1], mus[i + 1]
            gr = (math.sqrt(5) - 1) / 2
            while hi - lo > refine_tol:
                m1, m2 = hi - gr * (hi - lo), lo + gr * (hi - lo)
                if abs(completed(probe, 0.5 + 1j * m1)) < abs(completed(probe, 0.5 + 1j * m2)):
                    hi = m2
                else:
                    lo = m1
            m = 0.5 * (lo + hi)
            scale = float(np.max(mag[max(0, i - window) : i + window + 1]))
            # a genuine zero refines to |Z| of order |Z'| refine_tol; spurious minima stay large
            if abs(completed(probe, 0.5 + 1j * m)) <= 100 * refine_tol * scale:
                found.append(m)
                brackets.append([float(lo), float(hi)])
        cert = "refined local minimum of |Z(1/2 + i mu)| at most 100 refine_tol times the local scale (weaker than a sign change)"
    return ZeroReport([float(m) for m in found], refine_tol, brackets, cert, meta, scan)


# Sobolev norm and decay --------------------------------------------------------------------

@dataclass(frozen=True)
class SobolevNorm:
    value: float
    tail: float
    divergent: bool

    def __float__(self):
        return math.inf if self.divergent else self.value


def sobolev_norm(theta_samples, delta: float) -> SobolevNorm:
    """int |theta|^2 (1 + (log x)^2)^{delta/2} d^x x on the R_+ section, d^x x = dx/x.

    ``theta_samples`` is (v, values) with v = log x on a uniform grid.  The
    trapezoid rule is used inside the grid; beyond each end the integrand is
    continued geometrically from its last two samples, and a non-decreasing
    end is flagged divergent.
    """
    v, vals = theta_samples
    v = np.asarray(v, dtype=float)
    f = np.abs(np.asarray(vals)) ** 2 * (1 + v * v) ** (delta / 2)
    if len(v) < 3:
        raise ValueError("need at least three samples")
    h = float(v[1] - v[0])
    if not np.allclose(np.diff(v), h, rtol=1e-9, atol=1e-12):
        raise ValueError("samples must lie on a uniform log grid")
    core = h * (float(np.sum(f)) - 0.5 * (f[0] + f[-1]))
    tail = 0.0
    divergent = False
    for last, prev in ((f[-1], f[-2]), (f[0], f[1])):
        if last == 0:
            continue
        if prev == 0 or last >= prev:
            divergent = True
            continue
        q = last / prev
        tail += h * last * q / (1 - q) + 0.5 * h * last
    return SobolevNorm(core + tail, tail, divergent)


@dataclass(frozen=True)
class DecayReport:
    ok: bool
    kappa: float
    constant: float
    ratios: list
    log_grid: list

    def __bool__(self):
        return self.ok


def decay_verify(probe: SpectralProbe, kappa: float, lo: float = -4.0, hi: float = 4.0, points: int = 81) -> DecayReport:
    """Check |Theta(x)| <= c min(|x|, 1/|x|)^kappa on the log grid [e^lo, e^hi].

    The fitted c is the maximum ratio on the grid.  The check passes when the
    ratio is non-increasing towards both ends over the outer eighth of the
    grid, so c is set by the interior and not by growth at the edges.
    """
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    v = np.linspace(lo, hi, points)
    th = np.abs(theta_section(probe, np.exp(v)))
    ratio = th / np.exp(-kappa * np.abs(v))
    c = float(np.max(ratio))
    q = max(3, points // 8)
    slack = 1e-12 * c
    ok = bool(np.all(np.diff(ratio[-q:]) <= slack)) and bool(np.all(np.diff(ratio[:q]) >= -slack))
    return DecayReport(ok, float(kappa), c, [float(r) for r in ratio], [float(x) for x in v])
