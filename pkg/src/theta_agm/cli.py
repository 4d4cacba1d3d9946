"""theta-agm command line front end.

Every subcommand builds a ``Report``: a JSON payload with fixed keys, and a
table (fixed columns) used for CSV and plain output.  Exit codes are 0 on
success, 1 when a verification fails and 2 for usage or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field

from . import agm, gabor, lattice, special, verify
from .errors import ConsistencyError, DomainError, ThetaAgmError
from .special import HEX_DECAY, PI, Nome, SeriesControl

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CONSTANT_RESIDUAL_TOL = 1e-9
TOL_ENV = "THETA_AGM_TOL"
LEAD_COLUMNS = ("name", "check", "status")

LATTICE_ALIASES = {"square": "square", "hex": "hexagonal", "hexagonal": "hexagonal",
                   "rect": "rectangular", "rectangular": "rectangular"}


@dataclass
class Report:
    payload: dict
    columns: list[str]
    rows: list[list]
    ok: bool = True
    notes: list[str] = field(default_factory=list)


class Formatter:
    def __init__(self, fmt: str, precision: int):
        self.fmt, self.precision = fmt, precision

    def num(self, x):
        if isinstance(x, bool) or not isinstance(x, float):
            return x
        if not math.isfinite(x):
            return x
        return float(f"{x:.{self.precision}g}")

    def _clean(self, obj):
        if isinstance(obj, dict):
            return {k: self._clean(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [self._clean(v) for v in obj]
        return self.num(obj)

    def _cell(self, x) -> str:
        if x is None:
            return ""
        if isinstance(x, bool):
            return "true" if x else "false"
        if isinstance(x, float):
            return f"{x:.{self.precision}g}"
        if isinstance(x, (list, tuple)):
            return " ".join(self._cell(v) for v in x)
        return str(x)

    def render(self, report: Report) -> str:
        if self.fmt == "json":
            return json.dumps(self._clean(report.payload), indent=2)
        if self.fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
            w.writerow(report.columns)
            w.writerows([self._cell(c) for c in row] for row in report.rows)
            return buf.getvalue().rstrip("\r\n")
        lines = []
        if report.columns and report.columns[0] in LEAD_COLUMNS:
            width = max((len(self._cell(r[0])) for r in report.rows), default=0)
            for row in report.rows:
                rest = [self._cell(row[1])] + [f"{c}={self._cell(v)}" for c, v in zip(report.columns[2:], row[2:])]
                lines.append(f"{self._cell(row[0]):<{width}}  " + "  ".join(rest))
        else:
            for row in report.rows:
                lines.append("  ".join(f"{c}={self._cell(v)}" for c, v in zip(report.columns, row)))
        lines.extend(report.notes)
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# subcommands

def _rel(x, y):
    return abs(x - y) / abs(y)


def cmd_constants(args, ctl) -> Report:
    g_routes = special.gauss_constant_routes(ctl)
    l_routes = special.landau_plus_routes(ctl)
    gauss, landau = g_routes["theta4_squared"], l_routes["gamma_ratio"]
    two_varpi = special.lemniscate_length(args.tol_agm)
    C3, C4 = gabor.conjecture_constants()
    k_sq = gabor.bounds_square_closed(1, ctl).kappa
    k_hex = gabor.bounds_hexagonal_closed(1, ctl).kappa
    g = special.gamma_fn

    values = {
        "gauss_constant": gauss,
        "landau_plus": landau,
        "lemniscate_2varpi": two_varpi,
        "strohmer_c3": C3,
        "strohmer_c4": C4,
        "kappa_square_2": k_sq,
        "kappa_hex_2": k_hex,
    }
    # each value against a computation that shares no code path with it
    residuals = {
        "gauss_constant": special.route_spread(g_routes),
        "landau_plus": special.route_spread(l_routes),
        "lemniscate_2varpi": _rel(two_varpi, 2.0 * PI * gauss),
        "strohmer_c3": _rel(C3, 8.0 * math.sqrt(3.0) * PI**3 / (3.0 * g(1 / 3) ** 6)),
        "strohmer_c4": _rel(C4, 1.0 / (PI * gauss * gauss)),
        "kappa_square_2": abs(k_sq - math.sqrt(2.0)),
        "kappa_hex_2": abs(k_hex - 2.0 ** (1 / 3)),
    }
    ok = all(r < CONSTANT_RESIDUAL_TOL for r in residuals.values())
    payload = dict(values, residuals=residuals)
    rows = [[k, v, residuals[k]] for k, v in values.items()]
    return Report(payload, ["name", "value", "residual"], rows, ok)


def cmd_agm(args, ctl) -> Report:
    trace = agm.agm_general(args.order, args.a0, args.b0, args.tol_agm)
    gaps = [None] + trace.gap_residuals()
    steps = [{"n": n, "a": a, "b": b, "c": c, "gap": a - b, "gap_identity_residual": r}
             for n, (a, b, c, r) in enumerate(zip(trace.a_seq, trace.b_seq, trace.c_seq, gaps))]
    payload = {"order": trace.order, "a0": args.a0, "b0": args.b0, "limit": trace.limit,
               "iterations": trace.iterations, "trace": steps if args.trace else []}
    if args.trace:
        cols = ["n", "a", "b", "c", "gap", "gap_identity_residual"]
        rows = [[s[c] for c in cols] for s in steps]
        notes = [f"limit={Formatter('plain', args.precision)._cell(trace.limit)}"] if args.format == "plain" else []
        return Report(payload, cols, rows, notes=notes)
    cols = ["order", "a0", "b0", "limit", "iterations"]
    return Report(payload, cols, [[payload[c] for c in cols]])


def _nome_from(args, decay_per_t: float) -> Nome:
    if (args.q is None) == (args.t is None):
        raise DomainError("give exactly one of q or --t")
    if args.t is not None:
        if not args.t > 0:
            raise DomainError(f"--t must be positive, got {args.t}")
        return Nome.from_decay(decay_per_t * args.t)
    return Nome(args.q)


def cmd_theta(args, ctl) -> Report:
    q = _nome_from(args, PI)
    t = special.theta_triple(q, ctl)
    payload = {"q": q.q, "decay": q.decay, "theta2": special.theta2(q, ctl), "theta3": special.theta3(q, ctl),
               "theta4": special.theta4(q, ctl), "jacobi_residual": t.identity_residual()}
    cols = list(payload)
    return Report(payload, cols, [[payload[c] for c in cols]])


def cmd_cubic(args, ctl) -> Report:
    q = _nome_from(args, HEX_DECAY)
    t = special.cubic_triple(q, ctl)
    payload = {"q": q.q, "decay": q.decay, "a": t.high, "b": t.mid, "c": t.low,
               "cubic_residual": t.identity_residual()}
    cols = list(payload)
    return Report(payload, cols, [[payload[c] for c in cols]])


def _build_lattice(kind: str, density: float, aspect: float | None):
    if kind == "square":
        return lattice.von_neumann(density)
    if kind == "hexagonal":
        return lattice.hexagonal(density)
    return lattice.rectangular(aspect, density)


def cmd_bounds(args, ctl) -> Report:
    kind = LATTICE_ALIASES[args.lattice]
    if kind == "rectangular" and args.aspect is None:
        raise DomainError("rectangular lattices need --aspect")
    aspect = args.aspect if kind == "rectangular" else None
    lat = _build_lattice(kind, args.density, aspect)
    N = gabor.janssen_density(lat)
    if args.method == "numeric":
        fb = gabor.bounds_janssen_numeric(lat, grid=args.grid, ctl=ctl)
    elif kind == "square":
        fb = gabor.bounds_square_closed(N, ctl)
    elif kind == "hexagonal":
        fb = gabor.bounds_hexagonal_closed(N, ctl)
    else:
        fb = gabor.bounds_rectangular_closed(aspect, N, ctl)
    payload = {"lattice": kind, "density": fb.density, "aspect": aspect, "method": args.method,
               "A": fb.lower, "B": fb.upper, "kappa": fb.kappa,
               "minimizer": list(fb.minimizer) if fb.minimizer is not None else None,
               "maximizer": list(fb.maximizer) if fb.maximizer is not None else None}
    cols = list(payload)
    return Report(payload, cols, [[payload[c] for c in cols]])


def cmd_kappa_seq(args, ctl) -> Report:
    kind = LATTICE_ALIASES[args.lattice]
    if kind == "rectangular":
        raise DomainError("kappa sequences exist for square and hexagonal lattices")
    seq = gabor.kappa_sequence(kind, args.n_max, ctl)
    rows = [[n, d, k, k - 1.0] for n, (d, k) in enumerate(zip(seq.densities, seq.kappas), start=1)]
    cols = ["n", "density", "kappa", "kappa_minus_1"]
    payload = {"lattice": seq.lattice_kind, "truncated": seq.truncated,
               "rows": [dict(zip(cols, r)) for r in rows]}
    return Report(payload, cols, rows)


def cmd_verify(args, ctl) -> Report:
    checks = verify.run_suite(args.suite, ctl)
    cols = ["suite", "name", "residual", "tol", "passed"]
    rows = [[c.suite, c.name, c.residual, c.tol, c.passed] for c in checks]
    ok = all(c.passed for c in checks)
    payload = {"suite": args.suite, "passed": ok, "checks": [dict(zip(cols, r)) for r in rows]}
    report = Report(payload, cols, rows, ok)
    if args.format == "plain":
        report.columns = ["status", "check", "residual", "tol"]
        report.rows = [["PASS" if c.passed else "FAIL", f"[{c.suite}] {c.name}", c.residual, c.tol] for c in checks]
        report.notes = [f"{sum(c.passed for c in checks)}/{len(checks)} checks passed"]
    return report


def _read_roots(path: str):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read root file {path}: {exc}") from exc
    if not isinstance(data, list) or not all(isinstance(p, list) and len(p) == 2 for p in data):
        raise DomainError("root file must hold a JSON array of [x, y] pairs")
    return data


def cmd_roots(args, ctl) -> Report:
    if (args.name is None) == (args.check is None):
        raise DomainError("give exactly one of a root system name or --check FILE")
    if args.name is not None:
        R = lattice.standard_root_system(args.name)
        roots, name = R.roots, R.name
        host = lattice.host_lattice(name)
        contained = bool(host.contains(roots).all())
        host_desc = {"kind": host.kind, "density": host.density}
    else:
        roots, name = _read_roots(args.check), None
        host_desc, contained = None, None
    verdict = lattice.validate_root_system(roots)
    axioms = verdict.as_dict()
    payload = {"name": name, "count": len(roots), "roots": [[float(x), float(y)] for x, y in roots],
               "axioms": axioms, "failed": verdict.failed(), "passed": verdict.passed,
               "host_lattice": host_desc, "contained": contained}
    rows = [[f"axiom ({k})", v] for k, v in axioms.items()]
    if contained is not None:
        rows.append([f"contained in {host_desc['kind']}({host_desc['density']:g})", contained])
    ok = verdict.passed and contained is not False
    report = Report(payload, ["check", "passed"], rows, ok)
    report.notes = [f"{len(roots)} roots"]
    return report


COMMANDS = {"constants": cmd_constants, "agm": cmd_agm, "theta": cmd_theta, "cubic": cmd_cubic,
            "bounds": cmd_bounds, "kappa-seq": cmd_kappa_seq, "verify": cmd_verify, "roots": cmd_roots}


# ---------------------------------------------------------------------------
# parser

def _precision(text: str) -> int:
    p = int(text)
    if not 4 <= p <= 17:
        raise argparse.ArgumentTypeError("precision must be between 4 and 17")
    return p


def _tol(text: str) -> float:
    try:
        t = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid tolerance {text!r}") from None
    if not 0.0 < t < 1.0:
        raise argparse.ArgumentTypeError("tolerance must lie in (0, 1)")
    return t


def _grid(text: str) -> int:
    g = int(text)
    if g < 3:
        raise argparse.ArgumentTypeError("grid must be at least 3")
    return g


def _add_common(p: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--format", choices=("json", "csv", "plain"), default=d("plain"))
    p.add_argument("--precision", type=_precision, default=d(12), help="significant digits, 4 to 17")
    p.add_argument("--tol", type=_tol, default=d(None),
                   help=f"relative tolerance for series and AGM loops (env {TOL_ENV})")
    p.add_argument("--trace", action="store_true", default=d(False))
    p.add_argument("--method", choices=("closed", "numeric"), default=d("closed"))
    p.add_argument("--grid", type=_grid, default=d(32), help="mesh size for numeric extremization")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="theta-agm",
                                     description="Theta constants, AGMs and Gaussian Gabor frame bounds.",
                                     allow_abbrev=False)
    _add_common(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    _add_common(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("constants", parents=[common], help="special constants with cross-check residuals")

    p = sub.add_parser("agm", parents=[common], help="order-N arithmetic-geometric mean")
    p.add_argument("order", type=int)
    p.add_argument("a0", type=float)
    p.add_argument("b0", type=float)

    for name, helptext, scale in (("theta", "Jacobi theta constants", "pi"),
                                  ("cubic", "cubic theta analogues a, b, c", "2 pi / sqrt 3")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("q", type=float, nargs="?")
        p.add_argument("--t", type=float, help=f"use q = exp(-{scale} t)")

    p = sub.add_parser("bounds", parents=[common], help="Gaussian Gabor frame bounds")
    p.add_argument("lattice", choices=sorted(LATTICE_ALIASES))
    p.add_argument("density", type=float)
    p.add_argument("--aspect", type=float, help="side ratio a of a rectangular lattice")

    p = sub.add_parser("kappa-seq", parents=[common], help="condition numbers along the AGM ladder")
    p.add_argument("lattice", choices=("square", "hex", "hexagonal"))
    p.add_argument("n_max", type=int)

    p = sub.add_parser("verify", parents=[common], help="run the identity check catalogue")
    p.add_argument("--suite", choices=verify.SUITES + ("all",), default="all")

    p = sub.add_parser("roots", parents=[common], help="check root system axioms")
    p.add_argument("name", nargs="?", choices=lattice.ROOT_NAMES)
    p.add_argument("--check", metavar="FILE", help="JSON array of [x, y] pairs")
    return parser


def _resolve_tol(args) -> float | None:
    if args.tol is not None:
        return args.tol
    env = os.environ.get(TOL_ENV)
    if env is None or env == "":
        return None
    try:
        return _tol(env)
    except argparse.ArgumentTypeError as exc:
        raise DomainError(f"{TOL_ENV}: {exc}") from None


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        tol = _resolve_tol(args)
        ctl = SeriesControl(rel_tol=tol) if tol is not None else None
        args.tol_agm = tol if tol is not None else agm.DEFAULT_TOL
        report = COMMANDS[args.command](args, ctl)
    except ConsistencyError as exc:
        print(f"theta-agm: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ThetaAgmError, ValueError) as exc:
        print(f"theta-agm: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(Formatter(args.format, args.precision).render(report))
    return EXIT_OK if report.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
