"""Command-line interface.

    slicecauchy identities [--seed N]
    slicecauchy pn --n N
    slicecauchy zn --n N
    slicecauchy decompose --poly JSON
    slicecauchy cauchy --f JSON --surface JSON --x w,x,y,z [--deriv N] [--order M]
    slicecauchy sweep  --f JSON --surface JSON --x w,x,y,z --orders 8,16,32

Exit codes: 0 success, 1 a failed identity, 2 bad input or a domain /
precondition violation. Numerical error magnitudes never change the exit code.
"""
from __future__ import annotations

import argparse
import csv
from dataclasses import asdict, dataclass, field
from fractions import Fraction
import io
import json
import logging
import sys

from .driver import convergence_sweep
from .errors import ParseError, SliceCauchyError
from .fueter import decompose_poly, fueter_poly, zonal
from .identities import run_identities
from .quadrature import Box4, Sphere3
from .quat import Quaternion, parse_components
from .slicefn import QPoly, SliceFn, exp_fn, log_fn, power_fn
from .sympoly import XBAR, RPoly4, _fmt_frac, expand_power

log = logging.getLogger(__name__)

REPORT_FIELDS = ["value", "reference", "abs_err", "rel_err", "order", "node_count", "runtime_ms"]


@dataclass
class RunConfig:
    command: str
    f: str | None = None
    surface: str | None = None
    x: str | None = None
    deriv: int = 0
    orders: list = field(default_factory=list)
    format: str = "json"
    out: str | None = None
    seed: int = 0
    probe_outside: bool = False
    path: str = "kernel"


# ---------------------------------------------------------------------------
# input parsing

def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what}: {exc.msg} at position {exc.pos}") from None


def _one_key(obj, allowed, what):
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ParseError(f"{what} must be an object with exactly one of {sorted(allowed)}")
    (key, val), = obj.items()
    if key not in allowed:
        raise ParseError(f"{what}: unknown key {key!r}; expected one of {sorted(allowed)}")
    return key, val


def parse_exact_quaternion(text: str) -> tuple:
    if not isinstance(text, str):
        raise ParseError(f"quaternion literal must be a string 'w,x,y,z', got {text!r}")
    parse_components(text)  # validates shape and numbers, with positions
    try:
        return tuple(Fraction(p.strip()) for p in text.split(","))
    except ValueError:
        raise ParseError(f"quaternion literal {text!r} is not exact decimal") from None


def parse_poly(obj) -> QPoly:
    if isinstance(obj, dict):
        key, obj = _one_key(obj, {"poly"}, "polynomial")
    if not isinstance(obj, list):
        raise ParseError("polynomial needs a list of 'w,x,y,z' coefficients")
    coeffs = []
    for k, c in enumerate(obj):
        try:
            coeffs.append(parse_exact_quaternion(c))
        except ParseError as exc:
            raise ParseError(f"coefficient {k}: {exc}") from None
    return QPoly(coeffs)


def parse_function(text: str) -> SliceFn:
    key, val = _one_key(_load_json(text, "--f"), {"poly", "power", "exp", "log"}, "--f")
    if key == "poly":
        return SliceFn.from_poly(parse_poly(val), name="poly")
    if key == "power":
        if not isinstance(val, int) or isinstance(val, bool):
            raise ParseError(f"power exponent must be an integer, got {val!r}")
        return power_fn(val)
    if val != {}:
        raise ParseError(f"{key} takes no parameters, got {val!r}")
    return exp_fn() if key == "exp" else log_fn()


def _vec4(v, what):
    if isinstance(v, str):
        return parse_components(v)
    if not isinstance(v, list) or len(v) != 4 or not all(
            isinstance(a, (int, float)) and not isinstance(a, bool) for a in v):
        raise ParseError(f"{what} must be a list of 4 numbers or a 'w,x,y,z' string")
    return tuple(float(a) for a in v)


def parse_surface(text: str):
    key, val = _one_key(_load_json(text, "--surface"), {"sphere", "box"}, "--surface")
    if not isinstance(val, dict):
        raise ParseError(f"{key} parameters must be an object")
    want = {"sphere": {"center", "radius"}, "box": {"min", "max"}}[key]
    extra = set(val) - want
    if extra:
        raise ParseError(f"{key}: unknown key(s) {sorted(extra)}")
    missing = want - set(val)
    if missing:
        raise ParseError(f"{key}: missing key(s) {sorted(missing)}")
    try:
        if key == "sphere":
            r = val["radius"]
            if not isinstance(r, (int, float)) or isinstance(r, bool):
                raise ParseError("sphere radius must be a number")
            return Sphere3(_vec4(val["center"], "sphere center"), float(r))
        return Box4(_vec4(val["min"], "box min"), _vec4(val["max"], "box max"))
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"{key}: {exc}") from None


def parse_orders(text: str) -> list:
    out = []
    for k, part in enumerate(text.split(",")):
        try:
            out.append(int(part))
        except ValueError:
            raise ParseError(f"--orders entry {k} is not an integer: {part!r}") from None
    return out


# ---------------------------------------------------------------------------
# output

def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_rows(command: str, reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["command"] + REPORT_FIELDS)
    for r in reports:
        d = r.as_dict()
        w.writerow([command] + [d[k] if isinstance(d[k], (str, int)) else repr(d[k])
                                for k in REPORT_FIELDS])
    return buf.getvalue()


def _config_dict(cfg: RunConfig) -> dict:
    d = asdict(cfg)
    d.pop("command")
    d.pop("out")
    return d


def _qstr(c) -> str:
    return ",".join(_fmt_frac(v) for v in c)


# ---------------------------------------------------------------------------
# commands

def cmd_identities(cfg: RunConfig) -> int:
    results = run_identities(seed=cfg.seed)
    ok = all(r.passed for r in results)
    doc = {"command": "identities", "config": {"seed": cfg.seed},
           "all_passed": ok, "identities": [r.as_dict() for r in results]}
    _emit(json.dumps(doc, indent=2) + "\n", cfg.out)
    for r in results:
        if not r.passed:
            log.error("identity %s failed at %s", r.name, r.failures)
    return 0 if ok else 1


def cmd_family(cfg: RunConfig, n: int) -> int:
    if cfg.command == "zn":
        if n < 0:
            raise ParseError("zn needs --n >= 0")
        p = zonal(n)
        kind = "polynomial"
    else:
        p = fueter_poly(n)
        kind = "polynomial" if isinstance(p, RPoly4) else "rational"
    doc = {"command": cfg.command, "n": n, "kind": kind, "degree": n, "form": p.pretty()}
    _emit(json.dumps(doc, indent=2) + "\n", cfg.out)
    return 0


def cmd_decompose(cfg: RunConfig, text: str) -> int:
    poly = parse_poly(_load_json(text, "--poly"))
    pair = decompose_poly(poly)
    q1, q2 = pair.q1_poly(), pair.q2_poly()
    expanded = RPoly4()
    for n, a in enumerate(poly.coeffs):
        expanded = expanded + expand_power(n).rmul(a)
    doc = {
        "command": "decompose",
        "config": {"poly": [_qstr(c) for c in poly.coeffs]},
        "q1": [_qstr(c) for c in pair.q1],
        "q2": [_qstr(c) for c in pair.q2],
        "Q1": q1.pretty(),
        "Q2": q2.pretty(),
        "identity_holds": expanded == q1 - XBAR * q2,
    }
    _emit(json.dumps(doc, indent=2) + "\n", cfg.out)
    return 0


def cmd_cauchy(cfg: RunConfig) -> int:
    f = parse_function(cfg.f)
    surface = parse_surface(cfg.surface)
    x = Quaternion.parse(cfg.x)
    reports = convergence_sweep(f, surface, x, cfg.deriv, cfg.orders,
                                probe_outside=cfg.probe_outside, path=cfg.path)
    if cfg.format == "csv":
        _emit(_csv_rows(cfg.command, reports), cfg.out)
        return 0
    if cfg.command == "cauchy":
        doc = {"command": "cauchy", "config": _config_dict(cfg), **reports[0].as_dict()}
    else:
        doc = {"command": "sweep", "config": _config_dict(cfg),
               "reports": [r.as_dict() for r in reports]}
    _emit(json.dumps(doc, indent=2) + "\n", cfg.out)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="slicecauchy", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write to this file instead of stdout")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("identities", help="run the exact identity suite")
    common(sp)
    for name in ("pn", "zn"):
        sp = sub.add_parser(name, help=f"print {'P_n' if name == 'pn' else 'Z_n'} exactly")
        sp.add_argument("--n", type=int, required=True)
        common(sp)
    sp = sub.add_parser("decompose", help="axially monogenic decomposition of a polynomial")
    sp.add_argument("--poly", required=True)
    common(sp)
    for name in ("cauchy", "sweep"):
        sp = sub.add_parser(name, help="boundary-integral reconstruction")
        sp.add_argument("--f", required=True)
        sp.add_argument("--surface", required=True)
        sp.add_argument("--x", required=True)
        sp.add_argument("--deriv", type=int, default=0)
        if name == "cauchy":
            sp.add_argument("--order", type=int, default=48)
        else:
            sp.add_argument("--orders", required=True)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--probe-outside", action="store_true")
        sp.add_argument("--path", choices=("kernel", "monogenic"), default="kernel")
        common(sp)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    cfg = RunConfig(command=args.command, out=args.out, seed=args.seed)
    try:
        if args.command == "identities":
            return cmd_identities(cfg)
        if args.command in ("pn", "zn"):
            return cmd_family(cfg, args.n)
        if args.command == "decompose":
            return cmd_decompose(cfg, args.poly)
        cfg.f, cfg.surface, cfg.x = args.f, args.surface, args.x
        cfg.deriv = args.deriv
        cfg.format = args.format
        cfg.probe_outside = args.probe_outside
        cfg.path = args.path
        cfg.orders = [args.order] if args.command == "cauchy" else parse_orders(args.orders)
        if any(o < 2 for o in cfg.orders):
            raise ParseError("quadrature orders must be >= 2")
        if cfg.deriv < 0:
            raise ParseError("--deriv must be >= 0")
        return cmd_cauchy(cfg)
    except SliceCauchyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
