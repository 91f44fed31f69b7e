"""Command-line front end: ``eval``, ``reproduce``, ``bound``, ``selftest``.

Exit codes: 0 success, 1 invalid input (bad flags, configuration or
parameters), 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from .. import _kernels
from ..bounds import (
    HUNTER,
    KAMBO,
    EllipseSpec,
    BoundReport,
    gauss_remainder_bound,
    interp_remainder_bound,
    max_on_ellipse,
    rho_grid,
    theorem41_bound,
)
from ..engine import REFERENCE, STABILIZATION, evaluate_hfp, search_optimal_n
from ..interpolation import NU_BALANCED, NU_SPREAD
from ..moments import UnsupportedWeightError
from ..orthogonal import CHEBYSHEV1, JACOBI, LEGENDRE, weight_mass
from ..specialfn import I2_C, I2_XI, exact_reference
from .config import PRESETS, SCHEMA_VERSION, ConfigError, WeightSpec, load_config, preset, with_overrides
from .experiments import rows_to_csv, rows_to_json, run_experiment, summarize
from .registry import BUILTINS, derivative_bound, make_integrand, resolve_params, singularity_rho
from .selftest import run_selftest

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; here 2 means a numerical failure
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _fn_params(items: Sequence[str]) -> dict:
    out = {}
    for it in items or []:
        if "=" not in it:
            raise ValueError(f"--fn-param expects key=value, got {it!r}")
        k, v = it.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise ValueError(f"--search-n expects lo:hi, got {text!r}") from None


def _weight_spec(args) -> WeightSpec:
    spec = WeightSpec(args.weight, args.alpha, args.beta, args.a, args.b)
    spec.family()
    return spec


def _auto_reference(fn: str, params: dict, ws: WeightSpec, xi: float, p: int):
    """Exact value when the inputs match one of the closed-form examples."""
    std = ws.a == -1.0 and ws.b == 1.0
    if not std:
        return None
    try:
        if fn == "exp" and ws.kind == LEGENDRE and p in (0, 1):
            return exact_reference("I1", xi=xi, p=p)
        if fn == "inv-sqrt-pole" and ws.kind == LEGENDRE and p == 1 and xi == I2_XI and params["c"] == I2_C:
            return exact_reference("I2")
        if fn == "rational-pole" and ws.kind == CHEBYSHEV1 and p == 1:
            return exact_reference("I3", xi=xi, lam=params["lam"])
    except NotImplementedError:
        return None
    return None


def cmd_eval(args) -> int:
    params = resolve_params(args.fn, _fn_params(args.fn_param))
    f = make_integrand(args.fn, params)
    ws = _weight_spec(args)
    w = ws.family()
    ref = _auto_reference(args.fn, params, ws, args.xi, args.p)
    search = None
    if args.search_n:
        lo, hi = _range(args.search_n)
        criterion = args.criterion or (REFERENCE if ref is not None else STABILIZATION)
        if criterion == REFERENCE and ref is None:
            raise ValueError("reference criterion needs a known exact value; use --criterion stabilization")
        search = search_optimal_n(f, w, args.xi, args.p, args.m, (lo, hi), criterion=criterion,
                                  exact=ref.value if ref else None, nu_rule=args.nu_rule)
        n = search.n_hat
    else:
        if args.n is None:
            raise ValueError("give either --n or --search-n lo:hi")
        n = args.n
    res = evaluate_hfp(f, w, args.xi, args.p, args.m, n, nu_rule=args.nu_rule)
    out = {
        "schema_version": SCHEMA_VERSION,
        "inputs": {"weight": ws.label(), "integrand": args.fn, "params": params, "xi": args.xi,
                   "p": args.p, "m": args.m, "n": n, "nu_rule": args.nu_rule},
        "value": res.value,
        "gauss_sum": res.gauss_sum,
        "moment_sum": res.moment_sum,
        "nu": res.nu,
        "h": res.h,
        "closest_indices": list(res.closest_indices),
        "surrogate_terms": [[i, t] for i, t in res.surrogate_terms],
        "exact": ref.value if ref else None,
        "reference": ref.label if ref else None,
        "abs_error": abs(res.value - ref.value) if ref else None,
        "search": None if search is None else {
            "criterion": search.criterion, "n_hat": search.n_hat, "ns": list(search.ns),
            "values": list(search.values), "skipped": [list(x) for x in search.failures],
        },
    }
    if args.json:
        print(json.dumps(out, indent=2))
    else:
        print(f"value      {res.value:.17g}")
        if ref:
            print(f"exact      {ref.value:.17g}  ({ref.label})")
            print(f"abs error  {out['abs_error']:.3e}")
        print(f"m={args.m} n={n} nu={res.nu} h={res.h:.6g} closest={list(res.closest_indices)}")
        if search is not None:
            print(f"n chosen by {search.criterion} search over {search.ns[0]}..{search.ns[-1]}")
    return EXIT_OK


def cmd_reproduce(args) -> int:
    if args.config:
        cfg = load_config(args.config)
    elif args.experiment:
        cfg = preset(args.experiment)
    else:
        raise ValueError("name an experiment or pass --config")
    cfg = with_overrides(cfg, format=args.format, nu_rule=args.nu_rule)
    if args.no_timing:
        cfg = with_overrides(cfg, timing=False)
    rows = run_experiment(cfg, workers=args.workers, output=args.out)
    summ = summarize(rows)
    if args.out is None and cfg.output is None:
        if cfg.format == "json":
            sys.stdout.write(rows_to_json(rows, cfg))
        else:
            sys.stdout.write(rows_to_csv(rows))
    msg = f"{cfg.experiment}: {summ['rows']} rows, {summ['failed']} failed"
    if summ["max_abs_error"] is not None:
        msg += f", max abs error {summ['max_abs_error']:.3e}"
    print(msg, file=sys.stderr)
    return EXIT_NUMERIC if summ["failed"] else EXIT_OK


def cmd_bound(args) -> int:
    params = resolve_params(args.fn, _fn_params(args.fn_param))
    f = make_integrand(args.fn, params)
    if f.complex_value is None:
        raise ValueError(f"integrand {args.fn!r} has no complex evaluator")
    if args.variant == KAMBO and (args.alpha != 0.0 or args.beta != 0.0):
        raise ValueError("Kambo bound applies to the Legendre weight only (alpha = beta = 0)")
    M1, M2 = args.M1, args.M2
    known = derivative_bound(args.fn, params)
    if M1 is None:
        M1 = known
    if M2 is None:
        M2 = known
    if M1 is None or M2 is None:
        raise ValueError(f"no closed-form derivative bound for {args.fn!r}; pass --M1 and --M2")
    if args.rho:
        rhos = [float(r) for r in args.rho]
    else:
        rho_sing = args.rho_sing if args.rho_sing is not None else singularity_rho(args.fn, params)
        rhos = [float(r) for r in rho_grid(rho_sing, args.rho_points)]
    if args.variant == KAMBO:
        rhos = [r for r in rhos if r > math.sqrt(2.0)]
        if not rhos:
            raise ValueError("Kambo bound needs rho > sqrt(2); the grid has no such point")
    mass = weight_mass(WeightSpec(JACOBI, args.alpha, args.beta).family())
    reports = []
    for rho in rhos:
        if args.M is not None:
            M, est = args.M, False
        else:
            M, est = max_on_ellipse(f.complex_value, EllipseSpec(rho, args.samples)), True
        if args.variant == HUNTER:
            rep = theorem41_bound(rho, M, args.m, args.alpha, args.beta, M1, M2, args.n, args.p,
                                  m_estimated=est, proof_form=args.proof_form)
        else:
            g = gauss_remainder_bound(KAMBO, rho, M, mass, args.m)
            r = interp_remainder_bound(M1, M2, args.n, args.p, proof_form=args.proof_form)
            rep = BoundReport(g, r, g + r, dict(rho=rho, M=M, M1=M1, M2=M2, m=args.m, n=args.n, p=args.p,
                                               alpha=args.alpha, beta=args.beta), KAMBO, est)
        reports.append(rep)
    best = min(reports, key=lambda r: r.total)
    if args.json:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "best": best.as_dict(),
                          "grid": [r.as_dict() for r in reports]}, indent=2))
    else:
        print(f"{'rho':>10} {'M':>12} {'gauss':>12} {'interp':>12} {'total':>12}")
        for r in reports:
            print(f"{r.inputs['rho']:10.5f} {r.inputs['M']:12.5e} {r.gauss_term:12.5e} "
                  f"{r.interp_term:12.5e} {r.total:12.5e}")
        tag = "ESTIMATED" if best.m_estimated else "SUPPLIED"
        print(f"best ({best.variant}, M {tag}): rho={best.inputs['rho']:.5f} total={best.total:.6e}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    return EXIT_OK if run_selftest() else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hfpquad", description="Finite-part Gauss quadrature with a closest-node surrogate.")
    ap.add_argument("--version", action="version", version=f"hfpquad 0.1.0 ({_kernels.backend()} kernels)")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("eval", help="evaluate one finite-part integral")
    ev.add_argument("--weight", choices=[LEGENDRE, CHEBYSHEV1, JACOBI], default=LEGENDRE)
    ev.add_argument("--alpha", type=float, default=0.0)
    ev.add_argument("--beta", type=float, default=0.0)
    ev.add_argument("--a", type=float, default=-1.0)
    ev.add_argument("--b", type=float, default=1.0)
    ev.add_argument("--xi", type=float, required=True)
    ev.add_argument("--p", type=int, default=0)
    ev.add_argument("--m", type=int, required=True)
    grp = ev.add_mutually_exclusive_group()
    grp.add_argument("--n", type=int)
    grp.add_argument("--search-n", metavar="LO:HI")
    ev.add_argument("--criterion", choices=[REFERENCE, STABILIZATION])
    ev.add_argument("--fn", choices=sorted(BUILTINS), default="exp")
    ev.add_argument("--fn-param", action="append", metavar="K=V", default=[])
    ev.add_argument("--nu-rule", choices=[NU_BALANCED, NU_SPREAD], default=NU_BALANCED)
    ev.add_argument("--json", action="store_true")
    ev.set_defaults(func=cmd_eval)

    rp = sub.add_parser("reproduce", help="rerun one of the reference experiments")
    rp.add_argument("experiment", nargs="?", choices=PRESETS)
    rp.add_argument("--config", help="YAML experiment file instead of a preset")
    rp.add_argument("--out")
    rp.add_argument("--format", choices=["csv", "json"])
    rp.add_argument("--workers", type=int, help="process count (default: $HFP_WORKERS or 1)")
    rp.add_argument("--nu-rule", choices=[NU_BALANCED, NU_SPREAD])
    rp.add_argument("--no-timing", action="store_true", help="write NA for wall time (byte-stable output)")
    rp.set_defaults(func=cmd_reproduce)

    bd = sub.add_parser("bound", help="a-priori error bound minimised over ellipse parameters")
    bd.add_argument("--fn", choices=sorted(BUILTINS), default="exp")
    bd.add_argument("--fn-param", action="append", metavar="K=V", default=[])
    bd.add_argument("--m", type=int, required=True)
    bd.add_argument("--n", type=int, required=True)
    bd.add_argument("--p", type=int, default=0)
    bd.add_argument("--alpha", type=float, default=0.0)
    bd.add_argument("--beta", type=float, default=0.0)
    bd.add_argument("--variant", choices=[HUNTER, KAMBO], default=HUNTER)
    bd.add_argument("--rho", type=float, action="append", help="explicit ellipse parameter (repeatable)")
    bd.add_argument("--rho-sing", type=float, help="ellipse parameter of the nearest singularity of f")
    bd.add_argument("--rho-points", type=int, default=16)
    bd.add_argument("--samples", type=int, default=256)
    bd.add_argument("--M", type=float, help="override the sampled max of |f| on the ellipse")
    bd.add_argument("--M1", type=float, help="max |f^(n+1)| on [-1, 1]")
    bd.add_argument("--M2", type=float, help="max |f^(n+2)| on [-1, 1]")
    bd.add_argument("--proof-form", action="store_true", help="use n+1 in the interpolation-term base")
    bd.add_argument("--json", action="store_true")
    bd.set_defaults(func=cmd_bound)

    st = sub.add_parser("selftest", help="run the built-in oracle checks")
    st.set_defaults(func=cmd_selftest)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, UnsupportedWeightError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ArithmeticError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
