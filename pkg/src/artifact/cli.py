"""Command-line interface.

stdout carries data (JSON by default, CSV with ``--csv``); stderr carries
diagnostics.  Exit status is 0 on success, 2 on usage errors and 1 on domain
errors, with a single ``error: <Kind>: <message>`` line on stderr.

Spins are given either as plain integers, as ``p/2`` strings, or through
``--n`` as doubled integers.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .exact import DomainError, SqrtRational

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------

def parse_spin(text: str) -> int:
    """``"3/2" -> 3``, ``"1" -> 2``: return twice the (half-)integer."""
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a spin value: {text!r}") from None
    d = 2 * q
    if d.denominator != 1:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer or half-integer")
    return int(d)


def load_config(path: Optional[str]) -> Dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment."""
    if not path:
        return {}
    out = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"bad config line: {raw.strip()!r}")
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip().strip('"')
    return out


def _read_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _harmonic(path: str):
    from .sphere import HarmonicVector
    return HarmonicVector.from_json(_read_json(path))


def _complex(x) -> complex:
    if isinstance(x, dict):
        return complex(x.get("re", 0.0), x.get("im", 0.0))
    if isinstance(x, (list, tuple)):
        return complex(x[0], x[1])
    return complex(x)


def _matrix(path: str) -> np.ndarray:
    data = _read_json(path)
    return np.array([[_complex(v) for v in row] for row in data], dtype=complex)


def _cnum(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def _chars(args):
    from .correspondence import CharacteristicNumbers, family_chars
    if getattr(args, "chars", None):
        return CharacteristicNumbers.from_json(_read_json(args.chars))
    return family_chars(args.family, args.n)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _emit(args, kind: str, payload, rows: Optional[List[dict]] = None) -> None:
    if args.csv and rows is not None:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()) if rows else [], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        sys.stdout.write(buf.getvalue())
        return
    doc = {"schema": f"artifact.{kind}/{SCHEMA_VERSION}"}
    doc.update(payload if isinstance(payload, dict) else {"result": payload})
    sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")


def _scalar(args, kind: str, value: SqrtRational, extra: dict) -> None:
    if args.exact:
        sys.stdout.write(str(value) + "\n")
        return
    payload = dict(extra)
    payload.update(value.to_json())
    payload["exact"] = str(value)
    _emit(args, kind, payload, [dict(extra, exact=str(value), decimal=value.value)])


# ---------------------------------------------------------------------------
# command implementations
# ---------------------------------------------------------------------------

def cmd_wigner(args) -> None:
    from . import wigner
    if args.what == "cg":
        v = wigner.clebsch_gordan(args.j1, args.m1, args.j2, args.m2, args.j3, args.m3)
        extra = {"j1": args.j1, "m1": args.m1, "j2": args.j2, "m2": args.m2, "j3": args.j3, "m3": args.m3,
                 "doubled": True}
    elif args.what == "3jm":
        v = wigner.wigner_3jm(args.j1, args.m1, args.j2, args.m2, args.j3, args.m3)
        extra = {"j1": args.j1, "m1": args.m1, "j2": args.j2, "m2": args.m2, "j3": args.j3, "m3": args.m3,
                 "doubled": True}
    elif args.what == "6j":
        v = wigner.wigner_6j_jjj(args.l1, args.l2, args.l3, args.n)
        extra = {"l1": args.l1, "l2": args.l2, "l3": args.l3, "n": args.n}
    else:
        v = wigner.product_coefficient(args.l1, args.m1, args.l2, args.m2, args.l, args.n)
        extra = {"l1": args.l1, "m1": args.m1, "l2": args.l2, "m2": args.m2, "l": args.l, "n": args.n}
    _scalar(args, f"wigner.{args.what}", v, extra)


def cmd_basis(args) -> None:
    from . import su2_basis as sb
    if args.what == "matrix":
        bm = sb.coupled_basis(args.n, args.l, args.m)
        payload = bm.to_json()
        if not args.exact:
            payload["decimal"] = [float(v) for v in bm.diag]
        rows = [{"row": r, "col": c, "exact": str(v), "decimal": float(v)}
                for (r, c), v in zip(bm.positions(), bm.diag)]
        _emit(args, "basis.matrix", payload, rows)
    elif args.what == "mu":
        _scalar(args, "basis.mu", sb.mu_norm(args.n, args.l, args.m), {"n": args.n, "l": args.l, "m": args.m})
    else:
        rep = sb.verify_parity(args.n, method=args.method)
        _emit(args, "basis.verify-parity", rep.to_json(), [{"n": rep.n, "passed": rep.passed, "checked": rep.checked}])
        if not rep.passed:
            raise DomainError("parity check failed")


def cmd_sphere(args) -> None:
    from . import sphere
    scale = 1 / math.sqrt(4 * math.pi) if args.orthonormal else 1.0
    if args.what == "ylm":
        v = complex(sphere.ylm(args.l, args.m, args.theta, args.phi)) * scale
        _emit(args, "sphere.ylm", {"l": args.l, "m": args.m, "theta": args.theta, "phi": args.phi,
                                   "value": _cnum(v)},
              [{"l": args.l, "m": args.m, "re": v.real, "im": v.imag}])
        return
    f, g = _harmonic(args.f), _harmonic(args.g)
    op = sphere.pointwise_product if args.what == "product" else sphere.poisson_bracket
    h = op(f, g, args.cap)
    h = sphere.HarmonicVector(h.n, h.coeffs * scale)
    entries = h.to_json(tol=0.0)
    _emit(args, f"sphere.{args.what}", {"n": h.n, "coefficients": entries}, entries)


def cmd_corr(args) -> None:
    from . import correspondence as cr
    if args.what == "chars":
        ch = _chars(args)
        _emit(args, "corr.chars", ch.to_json(), [{"l": l, "c": v} for l, v in enumerate(ch.c)])
    elif args.what == "dual":
        ch = cr.dual_chars(_chars(args))
        _emit(args, "corr.dual", ch.to_json(), [{"l": l, "c": v} for l, v in enumerate(ch.c)])
    elif args.what == "kernel":
        K = cr.operator_kernel(_chars(args))
        d = [float(x) for x in np.real(np.diag(K))]
        _emit(args, "corr.kernel", {"n": args.n, "diagonal": d}, [{"k": k, "value": v} for k, v in enumerate(d)])
    elif args.what == "symbol":
        ch = _chars(args)
        f = cr.symbol_of(_matrix(args.matrix), ch)
        entries = f.to_json(tol=args.tol)
        _emit(args, "corr.symbol", {"n": ch.n, "coefficients": entries}, entries)
    else:
        ch = _chars(args)
        P = cr.operator_of(_harmonic(args.f), ch)
        _emit(args, "corr.operator", {"n": ch.n, "matrix": [[_cnum(z) for z in row] for row in P]},
              [{"row": r, "col": c, "re": P[r, c].real, "im": P[r, c].imag}
               for r in range(P.shape[0]) for c in range(P.shape[1])])


def cmd_twist(args) -> None:
    from . import twisted as tw
    ch = _chars(args)
    if args.what == "product":
        h = tw.twisted_product(_harmonic(args.f), _harmonic(args.g), ch)
        entries = h.to_json(tol=args.tol)
        _emit(args, "twist.product", {"n": ch.n, "coefficients": entries}, entries)
        return
    reports = [tw.verify_symbol_parity(ch), tw.verify_alternate_relation(ch)]
    if args.family in ("stratonovich", "berezin") and not getattr(args, "chars", None):
        reports.append(tw.cartesian_identities_check("standard" if args.family == "stratonovich" else "berezin", ch.n))
    docs = [r.to_json() for r in reports]
    _emit(args, "twist.verify", {"n": ch.n, "reports": docs},
          [{"name": r.name, "n": r.n, "passed": r.passed, "max_residual": r.max_residual} for r in reports])
    if not all(r.passed for r in reports):
        raise DomainError("twisted-product verification failed")


def _points(path: str) -> np.ndarray:
    pts = np.asarray(_read_json(path), dtype=float)
    if pts.ndim != 3 or pts.shape[1:] != (3, 3):
        raise DomainError("points file must hold a list of [n1, n2, n3] unit-vector triples")
    norms = np.linalg.norm(pts, axis=-1)
    if np.any(np.abs(norms - 1) > 1e-9):
        raise DomainError("points must be unit vectors")
    return pts


def cmd_trikernel(args) -> None:
    from . import trikernel as tk
    if args.what == "transform":
        fn = {"berezin": tk.berezin_transform, "berezin-inv": tk.inverse_berezin_transform,
              "bs": tk.berezin_stratonovich_transform, "sb": tk.stratonovich_berezin_transform}[args.kind]
        h = fn(_harmonic(args.f), args.n)
        entries = h.to_json(tol=args.tol)
        _emit(args, f"trikernel.transform.{args.kind}", {"n": h.n, "coefficients": entries}, entries)
        return
    pts = _points(args.points)
    a, b, c = pts[:, 0], pts[:, 1], pts[:, 2]
    if args.what == "wildberger":
        vals = np.atleast_1d(tk.wildberger_closed(args.n, a, b, c))
    else:
        ch = _chars(args)
        if args.form == "coeff":
            vals = np.atleast_1d(tk.trikernel_coeff(ch, a, b, c))
        elif args.form == "recursive":
            vals = np.atleast_1d(tk.recursive_trikernel(ch, a, b, c))
        else:
            vals = np.array([tk.trikernel_invariant(ch, a[i], b[i], c[i]) for i in range(len(pts))])
    rows = [{"index": i, "re": float(v.real), "im": float(v.imag)} for i, v in enumerate(vals)]
    _emit(args, f"trikernel.{args.what}", {"n": args.n, "values": rows}, rows)


def cmd_asym(args) -> None:
    from . import asymptotics as asy
    if args.what == "sigma":
        l1, l2, l3 = args.l
        fn = {("s0", False): asy.sigma0, ("s0", True): asy.sigma0_brute,
              ("s1", False): asy.sigma1, ("s1", True): asy.sigma1_brute}[(args.which, args.brute)]
        v = fn(l1, l2, l3)
        if args.exact:
            sys.stdout.write(f"{v}\n")
            return
        _emit(args, "asym.sigma", {"l": [l1, l2, l3], "which": args.which, "value": str(v)},
              [{"l1": l1, "l2": l2, "l3": l3, "which": args.which, "value": str(v)}])
    elif args.what == "expand":
        a0 = asy.asymptotic_coeff(args.l1, args.m1, args.l2, args.m2, args.l3, 0)
        a1 = asy.asymptotic_coeff(args.l1, args.m1, args.l2, args.m2, args.l3, 1)
        payload = {"order0": str(a0), "order1": str(a1)}
        rows = []
        for n in args.ns or []:
            r = asy.expansion_residual(args.l1, args.m1, args.l2, args.m2, args.l3, n)
            rows.append({"n": n, "residual": r})
        payload["residuals"] = rows
        if len(rows) >= 2:
            payload["slope"] = asy.loglog_slope([r["n"] for r in rows], [r["residual"] for r in rows])
        _emit(args, "asym.expand", payload, rows or [{"order0": str(a0), "order1": str(a1)}])
    elif args.what == "classify":
        gen = asy.resolve_generator(args.family)
        rep = asy.classify_sequence(gen, args.lmax, asy.default_n_grid(args.nmax), tol=args.tol)
        doc = rep.to_json()
        doc.pop("schema", None)
        _emit(args, "asym.classify", doc, [{"flag": k, "value": v} for k, v in rep.flags.items()])
    else:
        gen = asy.resolve_generator(args.family)
        grid = [n for n in asy.default_n_grid(args.nmax, args.points) if n >= max(args.l1, args.l2)]
        rows = asy.convergence_study(gen, args.l1, args.m1, args.l2, args.m2, grid, samples=args.samples,
                                     seed=args.seed)
        _emit(args, "asym.converge", {"samples": args.samples, "seed": args.seed, "rows": rows}, rows)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D401 - argparse hook
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: usage: {message}\n")
        raise SystemExit(2)


def build_parser(config: Optional[Dict[str, str]] = None) -> argparse.ArgumentParser:
    cfg = config or {}
    from .correspondence import FAMILY_NAMES
    from .asymptotics import EXAMPLE_GENERATORS

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--csv", action="store_true", help="emit CSV with a header row")
    common.add_argument("--exact", action="store_true", help="print exact sign*sqrt(p/q) strings")
    common.add_argument("--jobs", type=int, default=int(cfg.get("jobs", 1)))
    common.add_argument("--config", help="key=value defaults file")
    tol = float(cfg.get("tol", 0.0))

    def fam(p, required=True):
        g = p.add_mutually_exclusive_group(required=required)
        g.add_argument("--family", choices=FAMILY_NAMES)
        g.add_argument("--chars", help="JSON file {\"n\": n, \"c\": [...]}")
        p.add_argument("--n", type=int, required=True, help="n = 2j")

    p = _Parser(prog="artifact", description="Spin-j symbol correspondences and their asymptotics.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    # wigner
    w = sub.add_parser("wigner", help="Clebsch-Gordan, 3jm, 6j and product coefficients")
    ws = w.add_subparsers(dest="what", required=True, parser_class=_Parser)
    for name in ("cg", "3jm"):
        q = ws.add_parser(name, parents=[common])
        for k in ("j1", "m1", "j2", "m2", "j3", "m3"):
            q.add_argument(f"--{k}", type=parse_spin, required=True)
    q = ws.add_parser("6j", parents=[common])
    for k in ("l1", "l2", "l3"):
        q.add_argument(f"--{k}", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q = ws.add_parser("prod", parents=[common])
    for k in ("l1", "m1", "l2", "m2", "l"):
        q.add_argument(f"--{k}", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    w.set_defaults(func=cmd_wigner)

    # basis
    b = sub.add_parser("basis", help="coupled standard basis")
    bs = b.add_subparsers(dest="what", required=True, parser_class=_Parser)
    for name in ("matrix", "mu"):
        q = bs.add_parser(name, parents=[common])
        q.add_argument("--n", type=int, required=True)
        q.add_argument("--l", type=int, required=True)
        q.add_argument("--m", type=int, required=True)
    q = bs.add_parser("verify-parity", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--method", choices=("exact", "dense"), default="exact")
    b.set_defaults(func=cmd_basis)

    # sphere
    s = sub.add_parser("sphere", help="spherical harmonics and classical products")
    ss = s.add_subparsers(dest="what", required=True, parser_class=_Parser)
    q = ss.add_parser("ylm", parents=[common])
    q.add_argument("--l", type=int, required=True)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--theta", type=float, required=True, help="longitude")
    q.add_argument("--phi", type=float, required=True, help="colatitude")
    q.add_argument("--orthonormal", action="store_true", help="rescale to the unit-sphere orthonormal convention")
    for name in ("product", "bracket"):
        q = ss.add_parser(name, parents=[common])
        q.add_argument("--f", required=True)
        q.add_argument("--g", required=True)
        q.add_argument("--cap", type=int)
        q.add_argument("--orthonormal", action="store_true",
                       help="read and write coefficients in the unit-sphere orthonormal convention")
    s.set_defaults(func=cmd_sphere)

    # correspondence
    c = sub.add_parser("corr", help="symbol correspondences")
    cs = c.add_subparsers(dest="what", required=True, parser_class=_Parser)
    for name in ("chars", "kernel", "dual"):
        fam(cs.add_parser(name, parents=[common]))
    q = cs.add_parser("symbol", parents=[common])
    fam(q)
    q.add_argument("--matrix", required=True, help="JSON matrix; entries real, [re, im] or {re, im}")
    q.add_argument("--tol", type=float, default=tol)
    q = cs.add_parser("operator", parents=[common])
    fam(q)
    q.add_argument("--f", required=True)
    c.set_defaults(func=cmd_corr)

    # twisted
    t = sub.add_parser("twist", help="twisted products")
    ts = t.add_subparsers(dest="what", required=True, parser_class=_Parser)
    q = ts.add_parser("product", parents=[common])
    fam(q)
    q.add_argument("--f", required=True)
    q.add_argument("--g", required=True)
    q.add_argument("--tol", type=float, default=tol)
    fam(ts.add_parser("verify", parents=[common]))
    t.set_defaults(func=cmd_twist)

    # trikernel
    k = sub.add_parser("trikernel", help="integral trikernels and transforms")
    ks = k.add_subparsers(dest="what", required=True, parser_class=_Parser)
    q = ks.add_parser("eval", parents=[common])
    fam(q)
    q.add_argument("--points", required=True, help="JSON list of [n1, n2, n3] triples")
    q.add_argument("--form", choices=("coeff", "invariant", "recursive"), default="coeff")
    q = ks.add_parser("wildberger", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--points", required=True)
    q = ks.add_parser("transform", parents=[common])
    q.add_argument("kind", choices=("berezin", "berezin-inv", "bs", "sb"))
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--f", required=True)
    q.add_argument("--tol", type=float, default=tol)
    k.set_defaults(func=cmd_trikernel)

    # asymptotics
    a = sub.add_parser("asym", help="asymptotic expansion and sequence classification")
    as_ = a.add_subparsers(dest="what", required=True, parser_class=_Parser)
    q = as_.add_parser("sigma", parents=[common])
    q.add_argument("--l", type=int, nargs=3, required=True, metavar=("L1", "L2", "L3"))
    q.add_argument("--which", choices=("s0", "s1"), default="s0")
    q.add_argument("--brute", action="store_true")
    q = as_.add_parser("expand", parents=[common])
    for key in ("l1", "m1", "l2", "m2", "l3"):
        q.add_argument(f"--{key}", type=int, required=True)
    q.add_argument("--ns", type=int, nargs="*")
    gens = list(FAMILY_NAMES) + list(EXAMPLE_GENERATORS)
    q = as_.add_parser("classify", parents=[common])
    q.add_argument("--family", choices=gens, required=True)
    q.add_argument("--lmax", type=int, default=int(cfg.get("lmax", 6)))
    q.add_argument("--nmax", type=int, default=int(cfg.get("nmax", 400)))
    q.add_argument("--tol", type=float, default=float(cfg.get("classify_tol", 1e-6)))
    q = as_.add_parser("converge", parents=[common])
    q.add_argument("--family", choices=gens, required=True)
    for key in ("l1", "m1", "l2", "m2"):
        q.add_argument(f"--{key}", type=int, required=True)
    q.add_argument("--nmax", type=int, default=int(cfg.get("nmax", 400)))
    q.add_argument("--points", type=int, default=int(cfg.get("points", 12)))
    q.add_argument("--samples", type=int, default=int(cfg.get("samples", 2000)))
    q.add_argument("--seed", type=int, default=int(cfg.get("seed", 0)))
    a.set_defaults(func=cmd_asym)
    return p


def _config_path(argv: Sequence[str]) -> Optional[str]:
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


_NEG_VALUE = re.compile(r"^-\d+(/\d+)?$")


def _join_negative_values(argv: List[str]) -> List[str]:
    """Turn ``--m2 -1/2`` into ``--m2=-1/2`` so argparse does not read a flag."""
    out: List[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and _NEG_VALUE.match(argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        config = load_config(_config_path(argv))
    except (OSError, UsageError) as exc:
        sys.stderr.write(f"error: usage: {exc}\n")
        return 2
    parser = build_parser(config)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except DomainError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    return 0


def main() -> None:
    raise SystemExit(run())
