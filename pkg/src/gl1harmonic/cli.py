"""gl1h: command-line front end.

Every subcommand prints one JSON document (or CSV with --format csv) on
stdout; module errors become a JSON object on stderr and exit status 1.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import mpmath

from . import __version__
from .errors import GL1Error
from .localfield import AdditiveChar, MultChar, PAdicPoint
from .mellin_arch import ArchChar, gamma_arch
from .mellin_na import UnramifiedRep, evaluate_exact, gamma_na
from .repdata import get_rep
from .theta_global import GlobalSchwartz, Idele, _default_component, load_datum, psf_check, theta
from .zeros import find_zeros, get_probe

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    precision: int = 53
    tau_N: int = 200
    height_ceiling: float = 1e7
    tol: float = 1e-12
    output: str | None = None
    format: str = "json"

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.tau_N < 50:
            raise ValueError("tau_N must be at least 50")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be json or csv")


def _parse_range(text: str, cast=float) -> tuple:
    sep = ".." if ".." in text else ","
    a, b = text.split(sep)
    return cast(a), cast(b)


def _parse_complex(text: str) -> complex:
    parts = [float(v) for v in text.split(",")]
    return complex(parts[0], parts[1] if len(parts) > 1 else 0.0)


def _parse_idele(x: str, finite: list) -> Idele:
    fields = dict(kv.split("=", 1) for kv in x.split(",") if kv)
    if "t" not in fields:
        raise ValueError("--x needs t=<value>")
    pts = []
    for item in finite or []:
        vals = [int(v) for v in item.split(":")]
        if len(vals) not in (3, 4):
            raise ValueError("--finite takes p:m:u[:c]")
        pts.append(PAdicPoint(*vals))
    return Idele(float(fields["t"]), int(fields.get("sign", 1)), tuple(pts))


def _load_json_arg(text: str):
    if text.startswith("@"):
        return json.loads(Path(text[1:]).read_text())
    return json.loads(text)


def _rep(name: str, cfg: RunConfig):
    rep = get_rep(name)
    if rep.kind == "delta":
        rep = replace(rep, tau_N=cfg.tau_N)
    return rep


def _datum(arg: str | None, rep_name: str, cfg: RunConfig) -> GlobalSchwartz:
    if arg is None:
        phi = load_datum(rep_name)
    elif arg.startswith("@") or arg.startswith("{"):
        phi = load_datum(_load_json_arg(arg))
    else:
        phi = load_datum(arg)
    if phi.rep.kind == "delta":
        phi = GlobalSchwartz(replace(phi.rep, tau_N=cfg.tau_N), phi.arch, dict(phi.finite_special))
    return phi


def _cplx(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


# subcommands ---------------------------------------------------------------------

def cmd_basic_fn(args, cfg: RunConfig):
    rep = _rep(args.rep, cfg)
    p = args.p
    phi = _default_component(rep, p)
    lo, hi = _parse_range(args.ord, int)
    c = max(1, phi.max_conductor())
    rows = []
    for m in range(lo, hi + 1):
        v = evaluate_exact(phi, PAdicPoint(p, m, args.unit, c))
        rows.append({"ord": m, "exact": v.to_json(), "value": _cplx(v.to_complex())})
    return {"rep": rep.name, "p": p, "unit": args.unit, "values": rows}, (
        [("ord", "re", "im")] + [(r["ord"], r["value"][0], r["value"][1]) for r in rows]
    )


def cmd_gamma(args, cfg: RunConfig):
    char = _load_json_arg(args.char)
    s = _parse_complex(args.s)
    if "p" in char:
        omega = MultChar.from_json(char)
        p = omega.p
        local = _rep(args.rep, cfg).local_rep(p) if args.rep else UnramifiedRep.trivial(p)
        g = gamma_na(local, omega, AdditiveChar(p, args.psi_sign))
        val = g(p ** (-s))
        out = {"place": p, "s": _cplx(s), "value": _cplx(val), "ramified": g.ramified,
               "conductor": g.conductor, "rational_function": g.value.to_json()}
    else:
        chi = ArchChar(complex(char.get("s", 0.0)), int(char.get("parity", 0)))
        if args.rep:
            val = _rep(args.rep, cfg).arch.gamma(s, chi.parity, args.psi_sign)
        else:
            val = gamma_arch(chi, s, args.psi_sign)
        out = {"place": "infinity", "s": _cplx(s), "value": _cplx(val)}
    return out, [("re", "im"), tuple(out["value"])]


def cmd_theta(args, cfg: RunConfig):
    phi = _datum(args.datum, args.rep, cfg)
    x = _parse_idele(args.x, args.finite)
    r = theta(phi.rep, phi, x, args.sub_tol or cfg.tol, height_ceiling=cfg.height_ceiling)
    out = r.to_json()
    out["magnitude"] = r.magnitude
    return out, [("re", "im", "tail", "terms", "H"), (r.value.real, r.value.imag, r.tail_bound, r.terms_used, r.height_cutoff)]


def cmd_psf_check(args, cfg: RunConfig):
    phi = _datum(args.datum, args.rep, cfg)
    x = _parse_idele(args.x, args.finite)
    r = psf_check(phi.rep, phi, x, args.sub_tol or min(cfg.tol, 1e-13))
    out = r.to_json()
    return out, [("lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err", "rel_err", "domain_status"),
                 (r.lhs.value.real, r.lhs.value.imag, r.rhs.value.real, r.rhs.value.imag, r.abs_err, r.rel_err,
                  r.domain_status)]


def cmd_zeros(args, cfg: RunConfig):
    probe = get_probe(args.probe)
    if probe.pi.kind == "delta":
        pi = replace(probe.pi, tau_N=cfg.tau_N)
        probe = type(probe)(pi, probe.chi, probe.delta, GlobalSchwartz(pi, probe.phi.arch, dict(probe.phi.finite_special)),
                            probe.name, probe.rotation, probe.quad)
    rep = find_zeros(probe, _parse_range(args.range), args.step, args.refine_tol)
    out = rep.to_json()
    rows = rep.csv_rows()
    csv_path = args.csv or (str(Path(cfg.output).with_suffix(".csv")) if cfg.output and cfg.format == "json" else None)
    if csv_path:
        Path(csv_path).write_text(_csv_text(rows))
        out["csv"] = csv_path
    return out, rows


def cmd_selftest(args, cfg: RunConfig):
    from .acceptance import run_all

    numbers = [int(v) for v in args.only.split(",")] if args.only else None
    results = run_all(numbers, echo=lambda line: print(line, file=sys.stderr))
    out = {"passed": all(r.passed for r in results), "criteria": [r.to_json() for r in results]}
    rows = [("criterion", "passed", "runtime")] + [(r.number, r.passed, f"{r.runtime:.3f}") for r in results]
    return out, rows


def _csv_text(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gl1h", description="Harmonic analysis on GL(1) for automorphic L-functions.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--precision", type=int, default=53, help="mpmath working precision in bits")
    ap.add_argument("--tau-N", dest="tau_N", type=int, default=200, help="tau(n) truncation for Delta workflows")
    ap.add_argument("--height-ceiling", type=float, default=1e7, help="largest Archimedean height for theta")
    ap.add_argument("--tol", type=float, default=1e-12)
    ap.add_argument("--output", "-o", help="write the result here instead of stdout")
    ap.add_argument("--format", choices=["json", "csv"], default="json")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basic-fn", help="values of the basic function at p^m u")
    p.add_argument("--rep", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--ord", default="0..10", help="valuation range a..b")
    p.add_argument("--unit", type=int, default=1)
    p.set_defaults(func=cmd_basic_fn)

    p = sub.add_parser("gamma", help="local gamma factor")
    p.add_argument("--char", required=True, help='MultChar JSON, or {"parity": e, "s": u} for infinity; @file allowed')
    p.add_argument("--s", required=True, help="re[,im]")
    p.add_argument("--rep", help="representation (default: trivial)")
    p.add_argument("--psi-sign", type=int, default=None, help="additive character sign (default +1 finite, -1 infinite)")
    p.set_defaults(func=cmd_gamma)

    for name, func, helptext in (("theta", cmd_theta, "theta series with tail certificate"),
                                 ("psf-check", cmd_psf_check, "both sides of the Poisson summation formula")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--rep", required=True)
        p.add_argument("--datum", help="catalog name, inline JSON or @file (default: all-basic datum of --rep)")
        p.add_argument("--x", required=True, help="t=<value>[,sign=-1]")
        p.add_argument("--finite", action="append", help="finite component p:m:u[:c] (repeatable)")
        p.add_argument("--tol", dest="sub_tol", type=float, default=None, help="overrides the global --tol")
        p.set_defaults(func=func)

    p = sub.add_parser("zeros", help="locate zeros on the critical line")
    p.add_argument("--probe", required=True)
    p.add_argument("--range", default="10,15")
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--refine-tol", type=float, default=1e-6)
    p.add_argument("--csv", help="path for the scan CSV (mu, re, im)")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = RunConfig(args.precision, args.tau_N, args.height_ceiling, args.tol, args.output, args.format)
        if args.command == "gamma" and args.psi_sign is None:
            args.psi_sign = 1 if "p" in _load_json_arg(args.char) else -1
        mpmath.mp.prec = cfg.precision
        out, rows = args.func(args, cfg)
        passed = bool(out.get("passed", True))
    except (GL1Error, ValueError, KeyError, NotImplementedError, OSError) as exc:
        err = exc.to_json() if isinstance(exc, GL1Error) else {
            "error": "invalid-argument", "type": type(exc).__name__, "message": str(exc)}
        err["schema_version"] = SCHEMA_VERSION
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return 1
    if cfg.format == "csv":
        text = _csv_text(rows)
    else:
        out = {"schema_version": SCHEMA_VERSION, "command": args.command, "config": asdict(cfg), "result": out}
        text = json.dumps(out, sort_keys=True, indent=2) + "\n"
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    if args.command == "selftest" and not passed:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
