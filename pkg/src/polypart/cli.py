"""Command-line front end: ``polypart <command> [options]``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

import mpmath

from . import arcs, exact, mwzeta, phi, poly, saddle
from .errors import PolyPartError
from .specfun import PrecisionConfig

COMMANDS = ("validate", "exact", "asym", "compare", "zeta", "phicheck", "expsum")
JSON_SAFE_INT = 2**53


@dataclass
class RunConfig:
    poly: list = field(default_factory=lambda: [0, 0, 1])
    precision_digits: int = 64
    R: float = phi.DEFAULT_R
    L: float = phi.DEFAULT_L
    J: Optional[int] = None
    n_list: list = field(default_factory=list)
    n_range: Optional[list] = None
    output_format: str = "csv"
    output_path: Optional[str] = None
    seed: int = 0
    X_list: list = field(default_factory=lambda: [1000, 10000])
    q_max: int = 50

    def validate(self):
        if not isinstance(self.poly, list) or not all(isinstance(c, int) for c in self.poly):
            raise ValueError("poly must be a list of integers")
        if self.precision_digits < 16:
            raise ValueError("digits must be >= 16")
        if not 0 < self.R < 1:
            raise ValueError("R must lie in (0, 1)")
        if not 0 < self.L < 1:
            raise ValueError("L must lie in (0, 1)")
        if self.J is not None and self.J < 1:
            raise ValueError("J must be >= 1")
        if self.output_format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if self.n_range is not None:
            if len(self.n_range) not in (2, 3) or any(not isinstance(v, int) for v in self.n_range):
                raise ValueError("n_range needs START STOP [STEP] integers")
        for n in self.ns():
            if n < 0:
                raise ValueError("n values must be >= 0")
        if self.q_max < 2:
            raise ValueError("q_max must be >= 2")
        return self

    def ns(self) -> list:
        out = list(self.n_list)
        if self.n_range is not None:
            start, stop = self.n_range[0], self.n_range[1]
            step = self.n_range[2] if len(self.n_range) == 3 else 1
            out += list(range(start, stop + 1, step))
        return sorted(set(out))

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def _num(v, digits: int = 30) -> str:
    if isinstance(v, int):
        return str(v)
    return mpmath.nstr(v, digits, strip_zeros=False) if isinstance(v, mpmath.mpf) else mpmath.nstr(v, digits)


def _json_value(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return str(v) if abs(v) > JSON_SAFE_INT else v
    if isinstance(v, (mpmath.mpf, mpmath.mpc)):
        return _num(v)
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


class Output:
    """Collects rows and writes CSV (with a config comment) or JSON."""

    def __init__(self, cfg: RunConfig, header: list):
        self.cfg = cfg
        self.header = header
        self.rows: list = []
        self.extra: dict = {}

    def add(self, *row):
        self.rows.append(list(row))

    def render(self) -> str:
        if self.cfg.output_format == "json":
            doc = {"config": json.loads(self.cfg.to_json())}
            doc["columns"] = self.header
            doc["rows"] = [[_json_value(v) for v in r] for r in self.rows]
            for k, v in self.extra.items():
                doc[k] = _json_value(v)
            return json.dumps(doc, indent=2) + "\n"
        lines = ["# config: " + self.cfg.to_json(), ",".join(self.header)]
        for r in self.rows:
            lines.append(",".join(_num(v) if not isinstance(v, str) else v for v in r))
        for k, v in self.extra.items():
            lines.append(f"# {k}: " + json.dumps(_json_value(v), sort_keys=True))
        return "\n".join(lines) + "\n"

    def emit(self):
        text = self.render()
        if self.cfg.output_path:
            with open(self.cfg.output_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _setup(cfg: RunConfig):
    prec = PrecisionConfig(digits=cfg.precision_digits)
    spec = poly.parse_polynomial(cfg.poly)
    return spec, prec


def _context(spec, prec):
    roots = poly.compute_roots(spec, prec)
    return mwzeta.build_context(roots.alphas, spec.degree, 40, prec)


def cmd_validate(cfg: RunConfig) -> int:
    spec, prec = _setup(cfg)
    rep = poly.validate_hypotheses(spec, prec)
    out = Output(cfg, ["flag", "value"])
    for k, v in rep.as_dict().items():
        out.add(k, str(v).lower() if isinstance(v, bool) else str(v))
    out.emit()
    return 0 if rep.overall else 1


def cmd_exact(cfg: RunConfig) -> int:
    spec, _ = _setup(cfg)
    ns = cfg.ns() or [0]
    table = exact.count_partitions(spec, max(ns))
    out = Output(cfg, ["n", "count"])
    for n, c in enumerate(table.counts):
        out.add(n, c)
    out.emit()
    return 0


def _need_ns(cfg):
    ns = cfg.ns()
    if not ns:
        raise ValueError("give --n or --n-range")
    return ns


def cmd_asym(cfg: RunConfig) -> int:
    spec, prec = _setup(cfg)
    ctx = _context(spec, prec)
    J = cfg.J if cfg.J is not None else saddle.default_J(spec.degree, cfg.R)
    out = Output(cfg, ["n", "X", "Y", "C", "W1_imag", "W2_real", "residual", "asymptotic"])
    for n in _need_ns(cfg):
        sp = saddle.solve_saddle(spec, ctx, n, cfg.R)
        est = saddle.asymptotic_count(spec, ctx, n, J, cfg.R, saddle=sp)
        out.add(n, sp.X, sp.Y, sp.C_main, mpmath.im(sp.W0prime), mpmath.re(sp.W0doubleprime),
                sp.solver_residual, est)
    out.extra["J"] = J
    out.emit()
    return 0


def cmd_compare(cfg: RunConfig) -> int:
    spec, prec = _setup(cfg)
    ctx = _context(spec, prec)
    J = cfg.J if cfg.J is not None else saddle.default_J(spec.degree, cfg.R)
    ns = _need_ns(cfg)
    table = exact.count_partitions(spec, max(ns))
    out = Output(cfg, ["n", "X", "Y", "exact", "asymptotic", "ratio"])
    devs = []
    for n in ns:
        sp = saddle.solve_saddle(spec, ctx, n, cfg.R)
        est = saddle.asymptotic_count(spec, ctx, n, J, cfg.R, saddle=sp)
        ex = table.counts[n]
        ratio = est / ex if ex else mpmath.inf
        devs.append(abs(ratio - 1))
        out.add(n, sp.X, sp.Y, ex, est, ratio)
    out.extra["summary"] = {"J": J, "max_abs_ratio_minus_1": mpmath.nstr(max(devs), 10),
                            "last_abs_ratio_minus_1": mpmath.nstr(devs[-1], 10)}
    out.emit()
    return 0


def cmd_zeta(cfg: RunConfig) -> int:
    spec, prec = _setup(cfg)
    ctx = _context(spec, prec)
    dump = mwzeta.diagnostic_dump(ctx)
    out = Output(cfg, ["key", "value"])
    out.add("d", str(dump["d"]))
    for i, a in enumerate(dump["alphas"], start=1):
        out.add(f"alpha_{i}", a)
    for m, c in dump["residues"].items():
        out.add(f"c_{m}", c)
    out.add("zeta0", dump["zeta0"])
    out.add("zeta0_prime", dump["zeta0_prime"])
    out.emit()
    return 0


def cmd_phicheck(cfg: RunConfig) -> int:
    spec, prec = _setup(cfg)
    ctx = _context(spec, prec)
    out = Output(cfg, ["X", "Theta", "phi_direct_re", "phi_direct_im", "phi_asym_re", "phi_asym_im", "abs_err"])
    with prec.workdps():
        for X in sorted(cfg.X_list):
            X = mpmath.mpf(X)
            half = phi.theta_limit(spec, X, cfg.L) / 2
            for th in (-half, mpmath.mpf(0), half):
                dv = phi.phi_direct(spec, X, th, prec=prec)
                av = phi.phi_asymptotic(spec, ctx, X, th, cfg.R, cfg.L)
                out.add(X, th, mpmath.re(dv), mpmath.im(dv), mpmath.re(av), mpmath.im(av), abs(dv - av))
    out.emit()
    return 0


def cmd_expsum(cfg: RunConfig) -> int:
    spec, prec = _setup(cfg)

    out = Output(cfg, ["q", "a", "S_re", "S_im", "S_abs"])
    for q in range(1, cfg.q_max + 1):
        for a in range(1, q + 1):
            if math.gcd(a, q) != 1:
                continue
            s = arcs.exp_sum(spec, q, a, 0, prec)
            out.add(q, a, mpmath.re(s), mpmath.im(s), abs(s))
    cf = arcs.estimate_Cf(spec, cfg.q_max)
    out.extra["C_f"] = {"value": repr(cf.value), "q": cf.q, "a": cf.a}
    if cfg.q_max >= 10:
        out.extra["weyl_slope"] = repr(arcs.weyl_exponent_fit(spec, cfg.q_max, seed=cfg.seed))
    reports = {}
    for X in sorted(cfg.X_list):
        if X >= 2**spec.degree:
            r = arcs.arc_report(X, spec.degree)
            reports[str(X)] = {"arcs": len(r.arcs), "overlaps": len(r.overlaps),
                               "minor_measure": mpmath.nstr(r.minor_measure, 15)}
    out.extra["arcs"] = reports
    out.emit()
    return 0


HANDLERS = {
    "validate": cmd_validate,
    "exact": cmd_exact,
    "asym": cmd_asym,
    "compare": cmd_compare,
    "zeta": cmd_zeta,
    "phicheck": cmd_phicheck,
    "expsum": cmd_expsum,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polypart", description="Partitions into polynomial values.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON file with RunConfig keys; flags override it")
    p.add_argument("--poly", help="coefficients low to high, e.g. 0,0,1 for y^2")
    p.add_argument("--digits", type=int, dest="precision_digits")
    p.add_argument("--R", type=float)
    p.add_argument("--L", type=float)
    p.add_argument("--J", type=int)
    p.add_argument("--n", type=int, action="append", dest="n_list")
    p.add_argument("--n-range", type=int, nargs="+", dest="n_range", metavar="N")
    p.add_argument("--format", choices=("csv", "json"), dest="output_format")
    p.add_argument("--out", dest="output_path")
    p.add_argument("--seed", type=int)
    p.add_argument("--X", type=float, action="append", dest="X_list")
    p.add_argument("--q-max", type=int, dest="q_max")
    return p


def resolve_config(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
    for key in ("precision_digits", "R", "L", "J", "n_list", "n_range", "output_format",
                "output_path", "seed", "X_list", "q_max"):
        val = getattr(args, key)
        if val is not None:
            data[key] = val
    if args.poly is not None:
        data["poly"] = [int(t) for t in args.poly.split(",") if t.strip()]
    if "X_list" in data:
        data["X_list"] = [int(x) if float(x).is_integer() else x for x in data["X_list"]]
    return RunConfig.from_dict(data).validate()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        with mpmath.workdps(cfg.precision_digits + 10):
            return HANDLERS[args.command](cfg)
    except (PolyPartError, ValueError, OSError, json.JSONDecodeError, TypeError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "command": args.command}
        sys.stderr.write(json.dumps(err) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
