"""Command-line surface.

Subcommands: build | porosity | infinity | pretangent | classify | verify.
Set specs are JSON files, inline JSON, or shorthand like "geometric:1/2".
Reports are deterministic JSON on stdout (or --out); CSV profiles go where
--csv points.  Exit codes: 0 ok, 1 check failure, 2 usage/parse error,
3 budget exhaustion inside a required computation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import scalars
from .brackets import DEFAULT_WINDOWS
from .porosity_inf import classify_inf, porosity_range_inf
from .porosity_zero import porosity_range, profile_csv
from .pretangent import NormalizingSequence, cluster_count_probe, limit_set
from .report import stable_dumps, to_jsonable, write_text
from .scalars import as_float
from .sets import (
    BudgetExceeded,
    SpecError,
    parse_integer_spec,
    parse_scaling_spec,
    parse_set_spec,
)
from .structure import classify_csp, classify_ssp, two_point_criterion, two_point_verdict
from .verify import DEFAULT_PLAN, run_plan

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _load_spec_arg(text):
    """A spec argument is a file path, inline JSON, or shorthand."""
    if text is None:
        return None
    if os.path.exists(text):
        with open(text, "r", encoding="utf-8") as f:
            return json.load(f)
    return text


def _mode_from_flags(args):
    if getattr(args, "log_domain", False):
        return scalars.LOG
    if getattr(args, "exact", False):
        return scalars.EXACT
    return None


def _emit(args, payload) -> None:
    text = stable_dumps(payload) + "\n"
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)


def cmd_build(args) -> int:
    handle = parse_set_spec(_load_spec_arg(args.spec), mode=_mode_from_flags(args),
                            budget=args.budget)
    floor = Fraction(1, 1 << args.depth)
    pts = handle.enumerate(scalars.coerce(floor, handle.mode))
    _emit(args, {
        "kind": handle.kind,
        "mode": handle.mode,
        "spec": handle.spec,
        "points_down_to": scalars.scalar_to_str(scalars.coerce(floor, handle.mode)),
        "count": len(pts),
        "points": [scalars.scalar_to_str(p) for p in pts[:64]],
        "truncated_preview": len(pts) > 64,
    })
    return EXIT_OK


def cmd_porosity(args) -> int:
    handle = parse_set_spec(_load_spec_arg(args.spec), mode=_mode_from_flags(args),
                            budget=args.budget)
    rng = porosity_range(handle, args.depth, args.tol, args.windows)
    if args.csv:
        write_text(args.csv, profile_csv(handle, args.depth))
    flagged = rng.lower.flagged or rng.upper.flagged
    _emit(args, {
        "set": handle.spec,
        "mode": handle.mode,
        "depth": args.depth,
        "upper_porosity": rng.upper,
        "lower_porosity": rng.lower,
        "interval": [rng.lower.estimate, rng.upper.estimate],
        "budget_flagged": flagged,
    })
    return EXIT_OK


def cmd_infinity(args) -> int:
    E = parse_integer_spec(_load_spec_arg(args.set))
    mu = parse_scaling_spec(_load_spec_arg(args.mu), mode=_mode_from_flags(args))
    cls = classify_inf(E, mu, args.depth, args.tol, args.windows)
    rng = porosity_range_inf(E, mu, args.depth, args.tol, args.windows)
    _emit(args, {
        "set": E.spec,
        "mu": mu.spec,
        "depth": args.depth,
        "class": cls.label,
        "converged": cls.converged,
        "upper_porosity_inf": rng.upper,
        "lower_porosity_inf": rng.lower,
        "interval_hull": [rng.lower.estimate, rng.upper.estimate],
    })
    return EXIT_OK


def _parse_rseq(text, handle):
    if text is None or text == "dyadic":
        return NormalizingSequence.dyadic(handle.mode)
    if text == "from-set":
        return NormalizingSequence.from_handle(handle)
    name, _, arg = text.partition(":")
    if name == "geometric":
        return NormalizingSequence.geometric(1, arg, handle.mode)
    if name == "explicit":
        return NormalizingSequence.explicit(arg.split(","), handle.mode)
    raise SpecError(f"unknown normalizing sequence spec {text!r}")


def cmd_pretangent(args) -> int:
    handle = parse_set_spec(_load_spec_arg(args.spec), mode=_mode_from_flags(args),
                            budget=args.budget)
    rseq = _parse_rseq(args.rseq, handle)
    ls = limit_set(handle, rseq, args.cap, args.depth, args.eps, args.windows)
    probe = cluster_count_probe(handle, rseq, args.depth, args.eps, 1, args.windows)
    if args.csv:
        lines = ["n,r,point"]
        for snap in ls.snapshots:
            for p in snap.points:
                lines.append(f"{snap.n},{scalars.scalar_to_str(snap.r)},{scalars.scalar_to_str(p)}")
        write_text(args.csv, "\n".join(lines) + "\n")
    _emit(args, {
        "set": handle.spec,
        "rseq": rseq.kind,
        "depth": args.depth,
        "eps": args.eps,
        "cap": args.cap,
        "clusters": [{"lo": c.lo, "hi": c.hi, "center": c.center, "stable": c.stable}
                     for c in ls.clusters],
        "card_probe": {"stable": probe.stable, "total": probe.total},
    })
    return EXIT_OK


def cmd_classify(args) -> int:
    handle = parse_set_spec(_load_spec_arg(args.spec), mode=_mode_from_flags(args),
                            budget=args.budget)
    ssp = classify_ssp(handle, args.depth, args.tol, args.windows)
    csp = classify_csp(handle, args.depth, args.tol, args.windows)
    prof = two_point_criterion(handle, min(args.depth, 24))
    payload = {
        "set": handle.spec,
        "depth": args.depth,
        "ssp": {
            "verdict": ssp.verdict,
            "profiles": {k: v[-8:] for k, v in ssp.profiles.items()},
            "chain_depth": len(ssp.chain.intervals) if ssp.chain else 0,
            "cross_checks": ssp.cross_checks,
        },
        "csp": {
            "verdict": csp.verdict,
            "overlap_ratio": csp.overlap_ratio,
            "upper_porosity": csp.upper_porosity,
            "note": csp.note,
        },
        "two_point": {
            "profile": [(w.j, w.sup) for w in prof[-8:]],
            "verdict": two_point_verdict(prof),
        },
    }
    _emit(args, payload)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.plan:
        with open(args.plan, "r", encoding="utf-8") as f:
            try:
                plan = json.load(f)
            except json.JSONDecodeError as e:
                raise SpecError(f"malformed plan file: {e}") from e
    else:
        plan = DEFAULT_PLAN
    t0 = time.monotonic()
    outcome = run_plan(plan)
    elapsed = time.monotonic() - t0
    _emit(args, outcome)
    if args.timings:
        print(f"verify: {len(outcome['checks'])} checks in {elapsed:.2f}s",
              file=sys.stderr)
    for res in outcome["checks"]:
        status = "PASS" if res.get("pass") else "FAIL"
        print(f"{status}  {res['check']}", file=sys.stderr)
    return EXIT_OK if outcome["passed"] else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="porokit",
        description="Local one-sided porosity analysis at 0 and at infinity.",
    )
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--timings", action="store_true",
                   help="print wall-clock timings to stderr (kept out of reports)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, depth_default):
        sp.add_argument("--depth", type=int, default=depth_default)
        sp.add_argument("--tol", type=float, default=1e-6)
        sp.add_argument("--windows", "-W", type=int, default=DEFAULT_WINDOWS)
        sp.add_argument("--budget", type=int, default=10**6)
        sp.add_argument("--seed", type=int, default=0)
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--exact", action="store_true")
        g.add_argument("--log-domain", action="store_true")
        sp.add_argument("--out", help="write the JSON report here")
        sp.add_argument("--timings", action="store_true")

    sp = sub.add_parser("build", help="parse a set spec and preview its points")
    sp.add_argument("--spec", required=True)
    common(sp, 20)
    sp.set_defaults(fn=cmd_build)

    sp = sub.add_parser("porosity", help="window extrema and porosity at 0")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--csv", help="write the window profile CSV here")
    common(sp, 20)
    sp.set_defaults(fn=cmd_porosity)

    sp = sub.add_parser("infinity", help="porosity at infinity under a scaling function")
    sp.add_argument("--set", required=True)
    sp.add_argument("--mu", required=True)
    common(sp, 8)
    sp.set_defaults(fn=cmd_infinity)

    sp = sub.add_parser("pretangent", help="rescaled snapshots and cluster probes")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--rseq", default="dyadic")
    sp.add_argument("--eps", type=float, default=2.0**-12)
    sp.add_argument("--cap", type=int, default=4)
    sp.add_argument("--csv", help="write snapshot points CSV here")
    common(sp, 16)
    sp.set_defaults(fn=cmd_pretangent)

    sp = sub.add_parser("classify", help="SSP/CSP structure classification")
    sp.add_argument("--spec", required=True)
    common(sp, 40)
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("verify", help="run a verification plan (default: bundled)")
    sp.add_argument("plan", nargs="?", help="plan JSON file")
    common(sp, 20)
    sp.set_defaults(fn=cmd_verify)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except SpecError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (json.JSONDecodeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
