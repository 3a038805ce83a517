"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a verification fails, 2 on
invalid input (including quantities that are not defined for the given pair).
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from math import comb
from pathlib import Path

import numpy as np

from . import arith, relations, rings, slopes
from .config import (
    DEFAULT_CONFIG,
    RunConfig,
    format_chars,
    format_complex,
    parse_chars,
    parse_complex,
    read_config,
    save_calibration,
)
from .errors import (
    CalibrationFailed,
    DenominatorNearZero,
    EllipticaError,
    InvalidParams,
    NotApplicable,
    RankAmbiguous,
)
from .theta import ThetaBasis, TorusParams, TorusPoint, heisenberg_residuals, quasiperiodicity_residuals, theta_values

SCHEMA = "elliptica/1"
YBE_TOL = 1e-9
GRAPH_TOL = 1e-8
ORBIT_TOL = 1e-8


class VerificationFailed(Exception):
    """Carries a finished report whose check did not pass."""

    def __init__(self, report):
        self.report = report
        super().__init__(report.get("reason", "verification failed"))


def _frac(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _sheaf(c):
    return {"rank": c.rank, "deg": c.deg, "slope": _frac(c.slope)}


def _basis(cfg, n):
    params = TorusParams(cfg.eta, cfg.trunc_tol, cfg.denom_guard)
    return ThetaBasis(n, cfg.chars_for(n), params)


def _basis_info(basis):
    return {"chars": format_chars(basis.chars), "eta": format_complex(basis.eta)}


# ----------------------------------------------------------------- commands


def cmd_decompose(args, cfg):
    n, k = args.n, args.k
    fd = arith.fraction_data(n, k)
    kind = arith.classify_variety(n, k)
    variety = {"label": kind.label(), "kind": kind.kind, "g": kind.g}
    if kind.kind == "symmetric":
        variety.update(m=kind.m, side=kind.side)
    return {
        "n": n,
        "k": k,
        "cf": list(fd.cf),
        "g": fd.g,
        "kseq": list(fd.kseq),
        "lseq": list(fd.lseq),
        "kprime": fd.kprime,
        "sigma_coeffs": list(fd.sigma_coeffs),
        "variety": variety,
        "sigma_generators": arith.sigma_group_generators(n, k),
        "divisor_degrees": list(arith.standard_divisor(n, k).point_degrees),
    }


def _verify_relations(n, k, cfg, args):
    basis = _basis(cfg, n)
    sys_ = relations.build_relations(n, k, basis, cfg.tau)
    expected = comb(n, 2)
    report = {"check": "relations", "expected_rank": expected, "tolerance": cfg.rank_rel_tol}
    report.update(_basis_info(basis))
    try:
        rank, gap = relations.relation_rank(sys_, cfg.rank_rel_tol)
    except RankAmbiguous as exc:
        report.update(rank=exc.rank, gap=exc.gap, passed=False, reason=str(exc))
        raise VerificationFailed(report) from None
    report.update(rank=rank, gap=gap, passed=rank == expected)
    report["singular_values"] = [float(s) for s in sys_.singular_values]
    return report


def _verify_ybe(n, k, cfg, args):
    basis = _basis(cfg, n)
    u, v = parse_complex(args.u), parse_complex(args.v)
    res = relations.ybe_residual(n, basis, cfg.tau, u, v, k=k)
    report = {"check": "ybe", "residual": res, "tolerance": YBE_TOL, "u": format_complex(u), "v": format_complex(v)}
    report.update(_basis_info(basis))
    if k != 1:
        report.update(passed=None, note="no assertion for k>=2")
    else:
        report["passed"] = res < YBE_TOL
    return report


def _verify_graph(n, k, cfg, args):
    if k != 1:
        raise NotApplicable("graph vanishing is only checked for k = 1")
    basis = _basis(cfg, n)
    res = relations.graph_vanishing_residual(n, basis, cfg.tau, args.samples, cfg.seed)
    # the neighbouring translation should not annihilate the relations
    control = relations.graph_vanishing_residual(
        n, basis, cfg.tau, args.samples, cfg.seed, shift=(3 - n) * cfg.tau
    )
    report = {
        "check": "graph",
        "residual": res,
        "control_residual": control,
        "tolerance": GRAPH_TOL,
        "samples": args.samples,
    }
    report.update(_basis_info(basis), passed=res < GRAPH_TOL)
    return report


def _verify_orbit(n, k, cfg, args):
    if k != 1:
        raise NotApplicable("point-module orbits are only modelled for k = 1")
    basis = _basis(cfg, n)
    sys_ = relations.build_relations(n, k, basis, cfg.tau)
    rng = np.random.default_rng(cfg.seed)
    p = TorusPoint(*rng.random(2))
    orbit = relations.point_module_orbit(n, basis, cfg.tau, p, args.length)
    min_norm = min(float(np.linalg.norm(v) / max(1.0, np.max(np.abs(v)))) for _, v in orbit)
    pairs = [np.kron(later, earlier) for (_, later), (_, earlier) in zip(orbit[1:], orbit[:-1])]
    worst = relations.cancellation_ratio(sys_.coeffs, np.array(pairs)) if pairs else 0.0
    report = {
        "check": "orbit",
        "start": [p.u, p.v],
        "length": args.length,
        "min_eval_norm": min_norm,
        "relation_residual": worst,
        "tolerance": ORBIT_TOL,
        "points": [[q.u, q.v] for q, _ in orbit],
    }
    report.update(_basis_info(basis), passed=min_norm > ORBIT_TOL and worst < ORBIT_TOL)
    return report


_VERIFIERS = {
    "relations": _verify_relations,
    "ybe": _verify_ybe,
    "graph": _verify_graph,
    "orbit": _verify_orbit,
}


def cmd_verify(args, cfg):
    n, k = args.n, args.k
    arith.negcf(n, k)  # validates the pair
    report = {"n": n, "k": k, "tau": format_complex(cfg.tau)}
    report.update(_VERIFIERS[args.which](n, k, cfg, args))
    if report.get("passed") is False:
        raise VerificationFailed(report)
    return report


def cmd_hilbert(args, cfg):
    n, k, maxdeg = args.n, args.k, args.maxdeg
    if maxdeg < 0:
        raise InvalidParams("maxdeg must be >= 0")
    kind = arith.classify_variety(n, k)
    degrees = list(range(maxdeg + 1))
    q = [rings.hilbert_Q(n, j) for j in degrees]
    if kind.kind == "projective":
        b = list(q)
    else:
        b = [rings.hilbert_B(n, k, j) for j in degrees]
    return {
        "n": n,
        "k": k,
        "variety": kind.label(),
        "degrees": degrees,
        "Q": q,
        "B": b,
        "kernel_degrees": degrees[1:],
        "kernel": rings.kernel_profile(n, k, maxdeg),
    }


def cmd_slopes(args, cfg):
    report = {}
    if args.n is not None:
        if args.k is None:
            raise InvalidParams("slopes needs both n and k")
        push = slopes.pushforward_class(args.n, args.k)
        kern = slopes.evaluation_kernel_class(push)
        h0, h1 = slopes.h0_h1(push)
        report.update(
            n=args.n,
            k=args.k,
            pushforward=_sheaf(push),
            kernel=_sheaf(kern),
            h0=h0,
            h1=h1,
            kernel_h0_h1=list(slopes.h0_h1(kern)),
            criterion_self=slopes.surjectivity_criterion(push, push),
        )
    classes = [slopes.SheafClass(r, d) for r, d in (args.cls or [])]
    if classes:
        report["classes"] = [_sheaf(c) for c in classes]
    if len(classes) == 2:
        c1, c2 = classes
        report["tensor"] = _sheaf(slopes.tensor(c1, c2))
        if c1.slope > 0 and c2.slope > 0:
            report["criterion"] = slopes.surjectivity_criterion(c1, c2)
        else:
            report["criterion"] = None
        cv, lo, hi = slopes.exact_sequence_bounds(c1, c2)
        report["extension"] = _sheaf(cv)
        report["bounds"] = [_frac(lo), _frac(hi)]
    elif len(classes) > 2:
        raise InvalidParams("give at most two --class options")
    if not report:
        raise InvalidParams("slopes needs n k or --class options")
    return report


def cmd_theta(args, cfg):
    basis = _basis(cfg, args.n)
    z = parse_complex(args.z)
    vals = theta_values(basis, z)
    report = {"n": args.n, "z": format_complex(z), "values": [[v.real, v.imag] for v in vals]}
    report.update(_basis_info(basis))
    if args.alpha is not None:
        a = args.alpha % args.n
        report["alpha"] = a
        report["quasiperiodicity"] = list(quasiperiodicity_residuals(basis, a, z))
        report["heisenberg"] = list(heisenberg_residuals(basis, a, z))
    return report


def cmd_calibrate(args, cfg):
    params = TorusParams(cfg.eta, cfg.trunc_tol, cfg.denom_guard)
    report = {"n": args.n, "tau": format_complex(cfg.tau)}
    try:
        cal = relations.calibrate_characteristics(args.n, params, cfg.tau, args.samples, cfg.seed)
    except CalibrationFailed as exc:
        report.update(chars=format_chars(exc.best), residual=exc.residual, passed=False, reason=str(exc))
        raise VerificationFailed(report) from None
    report.update(chars=format_chars(cal.chars), residual=cal.residual, passed=True)
    report["candidates_below_1e-10"] = sum(1 for r in cal.table.values() if r < 1e-10)
    if not args.dry_run:
        save_calibration(args.config_path, args.n, cal.chars)
        report["config"] = str(args.config_path)
    return report


# ------------------------------------------------------------------ parsing


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    S = argparse.SUPPRESS
    g.add_argument("--eta", default=S, help="lattice parameter, e.g. 'i' or '0.1+1.2i'")
    g.add_argument("--tau", default=S, help="translation parameter")
    g.add_argument("--chars", default=S, help="theta characteristic 'a,b' (fractions allowed)")
    g.add_argument("--seed", type=int, default=S)
    g.add_argument("--json", action="store_true", default=S)
    g.add_argument("--tol-rank", type=float, default=S, dest="tol_rank")
    g.add_argument("--tol-denom", type=float, default=S, dest="tol_denom")
    g.add_argument("--config", default=S, help=f"config file (default ./{DEFAULT_CONFIG})")

    parser = argparse.ArgumentParser(prog="elliptica", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[common], help="continued fraction and variety data for n/k")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", parents=[common], help="numerical checks of the relations")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("which", choices=sorted(_VERIFIERS))
    p.add_argument("--u", default="0.11+0.07i")
    p.add_argument("--v", default="0.05+0.13i")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--length", type=int, default=6, help="orbit length for 'orbit'")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("hilbert", parents=[common], help="dimension table of Q, B and the kernel")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("maxdeg", type=int)
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("slopes", parents=[common], help="slope calculus for n/k or explicit classes")
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("k", type=int, nargs="?")
    p.add_argument("--class", dest="cls", nargs=2, type=int, action="append", metavar=("RANK", "DEG"))
    p.set_defaults(func=cmd_slopes)

    p = sub.add_parser("theta", parents=[common], help="evaluate the theta basis")
    p.add_argument("n", type=int)
    p.add_argument("z")
    p.add_argument("--alpha", type=int)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("calibrate", parents=[common], help="search theta characteristics and save the result")
    p.add_argument("n", type=int)
    p.add_argument("--samples", type=int, default=8)
    p.add_argument("--dry-run", action="store_true")
    p.set_defaults(func=cmd_calibrate)
    return parser


def _load_config(args):
    path = Path(getattr(args, "config", DEFAULT_CONFIG))
    if path.exists():
        cfg = read_config(path)
    elif hasattr(args, "config") and args.command != "calibrate":
        raise InvalidParams(f"config file {path} not found")
    else:
        cfg = RunConfig()
    args.config_path = path
    return cfg.with_overrides(
        eta=parse_complex(args.eta) if hasattr(args, "eta") else None,
        tau=parse_complex(args.tau) if hasattr(args, "tau") else None,
        chars=parse_chars(args.chars) if hasattr(args, "chars") else None,
        seed=getattr(args, "seed", None),
        output="json" if getattr(args, "json", False) else None,
        rank_rel_tol=getattr(args, "tol_rank", None),
        denom_guard=getattr(args, "tol_denom", None),
    )


def _emit(report, cfg, out):
    if cfg.output == "json":
        out.write(json.dumps({"schema": SCHEMA, **report}, sort_keys=True) + "\n")
        return
    for key, val in report.items():
        if isinstance(val, float):
            val = f"{val:.6g}"
        elif isinstance(val, (list, dict)):
            val = json.dumps(val)
        out.write(f"{key}: {val}\n")


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args)
    except EllipticaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {"command": args.command}
    try:
        report.update(args.func(args, cfg))
        code = 0
    except VerificationFailed as exc:
        report.update(exc.report)
        code = 1
    except DenominatorNearZero as exc:
        report.update(error="DenominatorNearZero", index=exc.index, value=exc.value, where=exc.where, passed=False)
        code = 1
    except (InvalidParams, NotApplicable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        report.update(error=type(exc).__name__, reason=str(exc))
        code = 2
    except EllipticaError as exc:
        report.update(error=type(exc).__name__, reason=str(exc))
        code = 1
    _emit(report, cfg, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
