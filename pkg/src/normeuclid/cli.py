"""Command line entry point: ``normeuclid <command> ...`` or ``python -m normeuclid``."""

from __future__ import annotations

import argparse
import logging
import sys
from decimal import Decimal, InvalidOperation
from pathlib import Path

from .cycfield import FieldElement, NumberFieldSpec, minimum_lower_bound, norm
from .errors import NormEuclidError
from .orchestrator import SweepJob, run_bounds, run_sweep, run_verify


def exact_int(text: str) -> int:
    """Integer from '1e9', '6e13', '59999999974000' and the like, rejecting fractions."""
    try:
        d = Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if d != d.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(d)


def _sweep(args) -> int:
    job = SweepJob(
        ell=args.ell,
        lo=args.lo,
        hi=args.hi,
        out=Path(args.out),
        checkpoint=Path(args.checkpoint),
        segment=args.segment,
        workers=args.workers,
        r_cap=args.rcap,
        certs=Path(args.emit_certs) if args.emit_certs else None,
        brute_below=args.brute_below,
    )
    s = run_sweep(job)
    print(
        f"ell={s.ell} range=[{s.lo},{s.hi}] conductors={s.conductor_count} witnesses={s.witness_count} "
        f"survivors={len(s.survivors)} max_r={s.max_r} elapsed={s.elapsed:.2f}s"
    )
    if s.survivors:
        print("survivors: " + ",".join(str(x.f) for x in s.survivors))
    return 0


def _verify(args) -> int:
    verdicts = run_verify(Path(args.certs))
    bad = [(n, line) for n, line, ok in verdicts if not ok]
    for n, line in bad:
        print(f"INVALID line {n}: {line}")
    print(f"certificates={len(verdicts)} valid={len(verdicts) - len(bad)} invalid={len(bad)}")
    return 1 if bad else 0


def _bounds(args) -> int:
    if args.table:
        regime = {"A": "grh", "B": "uncond", "C": "constants"}[args.table]
        print(run_bounds(regime))
        return 0
    if args.ell is None:
        raise SystemExit("bounds: --grh/--uncond need --ell")
    print(run_bounds("grh" if args.grh else "uncond", args.ell))
    return 0


def _norm(args) -> int:
    spec = NumberFieldSpec.parse(args.poly)
    print(norm(spec, spec.reduce(FieldElement.parse(args.elem))))
    return 0


def _minbound(args) -> int:
    spec = NumberFieldSpec.parse(args.poly, args.f)
    if spec.ell != args.ell:
        raise SystemExit(f"minbound: polynomial has degree {spec.ell}, not {args.ell}")
    alpha = spec.reduce(FieldElement.parse(args.alpha))
    beta = spec.reduce(FieldElement.parse(args.beta))
    mb = minimum_lower_bound(spec, alpha, beta)
    print(f"bound={mb.bound} t={mb.witness_t} equality={'yes' if mb.equality else 'no'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="normeuclid", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="search a conductor range for witnesses")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--from", dest="lo", type=exact_int, required=True)
    p.add_argument("--to", dest="hi", type=exact_int, required=True)
    p.add_argument("--segment", type=exact_int, default=10**9)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--rcap", type=exact_int, default=10**6)
    p.add_argument("--out", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--emit-certs", dest="emit_certs")
    p.add_argument(
        "--brute-below", dest="brute_below", type=exact_int, default=10**4,
        help="try a direct decomposition for survivors below this conductor (0 disables)",
    )
    p.set_defaults(run=_sweep)

    p = sub.add_parser("verify", help="check a file of decomposition certificates")
    p.add_argument("--certs", required=True)
    p.set_defaults(run=_verify)

    p = sub.add_parser("bounds", help="conductor bounds and constant tables")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--table", choices=["A", "B", "C"], help="A: GRH, B: unconditional, C: constants")
    g.add_argument("--grh", action="store_true")
    g.add_argument("--uncond", action="store_true")
    p.add_argument("--ell", type=int)
    p.set_defaults(run=_bounds)

    p = sub.add_parser("norm", help="exact norm of a field element")
    p.add_argument("--poly", required=True, help="defining polynomial, descending coefficients")
    p.add_argument("--elem", required=True, help="element, descending coefficients")
    p.set_defaults(run=_norm)

    p = sub.add_parser("minbound", help="lower bound for the Euclidean minimum at alpha/beta")
    p.add_argument("--poly", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--f", type=exact_int, required=True)
    p.set_defaults(run=_minbound)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.run(args)
    except (NormEuclidError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
