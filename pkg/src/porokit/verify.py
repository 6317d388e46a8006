"""Named verification checks and plan execution.

A plan is a JSON document {"checks": [{"id": ..., <params>}, ...]}; every id
maps to exactly one check function below.  Each check returns a dict with at
least {check, inputs, pass}; most carry {lhs, rhs, gap, tol, depth,
converged}.  The bundled default plan exercises the closed-form laws the
package is built around and must pass end to end.
"""

from __future__ import annotations

from fractions import Fraction

from . import scalars
from .brackets import DEFAULT_WINDOWS
from .porosity_inf import (
    check_integer_model,
    check_upper_transport,
    classify_inf,
    concave_closed_forms,
    lower_porosity_inf,
)
from .porosity_zero import lower_porosity, porosity_range, upper_porosity
from .pretangent import (
    NormalizingSequence,
    cluster_count_probe,
    interval_avoided,
    max_avoided_interval,
    porosity_witness,
)
from .scalars import as_float
from .sets import (
    SpecError,
    geometric_set,
    integers_all,
    parse_integer_spec,
    parse_scaling_spec,
    parse_set_spec,
    scaling_geometric,
    scaling_power,
    scaling_supergeometric,
    supergeometric_set,
)
from .structure import classify_ssp, two_point_criterion, two_point_verdict


def _geometric_law(params) -> dict:
    """Exact upper/lower porosity of a geometric value set against the
    ratio closed forms 1 - q and (1 - q)/(2 - q)."""
    q = Fraction(str(params.get("q", "1/2")))
    depth = int(params.get("depth", 40))
    tol = float(params.get("tol", 1e-9))
    E = geometric_set(q)
    rng = porosity_range(E, depth, tol)
    want_hi = 1 - q
    want_lo = (1 - q) / (2 - q)
    gap_hi = abs(rng.upper.estimate - want_hi)
    gap_lo = abs(rng.lower.estimate - want_lo)
    passed = gap_hi == 0 and gap_lo == 0
    return {
        "check": "geometric_law",
        "inputs": {"q": str(q), "depth": depth},
        "lhs": [rng.lower.estimate, rng.upper.estimate],
        "rhs": [want_lo, want_hi],
        "gap": [gap_lo, gap_hi],
        "tol": 0,
        "pass": bool(passed),
        "depth": depth,
        "converged": rng.converged,
    }


def _upper_transport(params) -> dict:
    E = parse_integer_spec(params.get("set", "all"))
    mu = parse_scaling_spec(params.get("mu", "geometric:1/2"),
                            mode=params.get("mode"))
    return check_upper_transport(
        E, mu,
        depth_zero=int(params.get("depth_zero", 12)),
        depth_inf=int(params.get("depth_inf", 6)),
        tol=float(params.get("tol", 1e-6)),
    )


def _half_laws(params) -> dict:
    depth = int(params.get("depth", 34))
    tol = float(params.get("tol", 1e-6))
    sets = params.get("sets")
    handles = ([parse_set_spec(s) for s in sets] if sets else [
        geometric_set(Fraction(3, 10)),
        geometric_set(Fraction(1, 2)),
        geometric_set(Fraction(4, 5)),
        parse_set_spec({"kind": "power", "p": 1}),
        supergeometric_set(mode=scalars.EXACT),
    ])
    rows = []
    ok = True
    for h in handles:
        if not h.accumulates_at_zero:
            continue
        lp = lower_porosity(h, depth, tol)
        bound = as_float(lp.estimate) <= 0.5 + 1e-9
        rows.append({"set": h.spec, "lower": lp.estimate, "bound_ok": bound})
        ok = ok and bound
    sg = supergeometric_set(mode=scalars.EXACT)
    lp = lower_porosity(sg, 34, tol)
    half = abs(as_float(lp.estimate) - 0.5) <= 1e-6
    ok = ok and half
    return {
        "check": "half_laws",
        "inputs": {"depth": depth},
        "lhs": rows,
        "rhs": {"supergeometric_half": lp.estimate, "half_ok": half},
        "gap": abs(as_float(lp.estimate) - 0.5),
        "tol": tol,
        "pass": bool(ok),
        "depth": depth,
        "converged": True,
    }


def _classification(params) -> dict:
    tol = float(params.get("tol", 1e-6))
    cases = [
        ("all", scaling_power(1), 28, "nonporous"),
        ("all", scaling_geometric(Fraction(1, 2)), 8, "porous"),
        ("all", scaling_supergeometric(), 5, "strongly_porous"),
    ]
    rows = []
    ok = True
    for set_spec, mu, depth, want in cases:
        E = parse_integer_spec(set_spec)
        got = classify_inf(E, mu, depth, tol)
        good = got.label == want and got.converged
        rows.append({"set": set_spec, "mu": mu.spec, "label": got.label,
                     "expected": want, "converged": got.converged, "ok": good})
        ok = ok and good
    return {
        "check": "classification",
        "inputs": {"cases": len(cases)},
        "lhs": rows,
        "rhs": None,
        "gap": None,
        "tol": tol,
        "pass": bool(ok),
        "depth": None,
        "converged": all(r["converged"] for r in rows),
    }


def _integer_model(params) -> dict:
    E = parse_set_spec(params.get("set", {"kind": "geometric", "q": "1/2"}))
    mu = parse_scaling_spec(params.get("mu", "power:1"))
    N = int(params.get("N", 10**6))
    tol = float(params.get("tol", 0.05))
    return check_integer_model(E, mu, N, tol,
                               depth_zero=int(params.get("depth_zero", 20)))


def _ssp_coherence(params) -> dict:
    tol = float(params.get("tol", 1e-3))
    sg = supergeometric_set(mode=scalars.EXACT)
    rep = classify_ssp(sg, 70, tol, mu=scaling_supergeometric(), inf_depth=4)
    prof = two_point_criterion(sg, 20)
    f_verdict = two_point_verdict(prof, 0.05)
    geo = geometric_set(Fraction(1, 2))
    rep_g = classify_ssp(geo, 40, tol)
    prof_g = two_point_criterion(geo, 20)
    quarter = abs(as_float(prof_g[-1].sup) - 0.25) <= 1e-9
    ok = (rep.verdict == "consistent" and f_verdict == "consistent"
          and rep_g.verdict == "inconsistent" and quarter)
    return {
        "check": "ssp_coherence",
        "inputs": {"sets": ["supergeometric", "geometric 1/2"]},
        "lhs": {"supergeometric": rep.verdict, "two_point": f_verdict},
        "rhs": {"geometric": rep_g.verdict,
                "two_point_final": prof_g[-1].sup},
        "gap": abs(as_float(prof_g[-1].sup) - 0.25),
        "tol": tol,
        "pass": bool(ok),
        "depth": 70,
        "converged": True,
    }


def _witness_roundtrip(params) -> dict:
    depth = int(params.get("depth", 40))
    tol = float(params.get("tol", 1e-6))
    E = geometric_set(Fraction(str(params.get("q", "1/2"))))
    wit = porosity_witness(E, depth, tol)
    length_ok = abs(as_float(wit.length) - 0.5) <= tol
    rseq = NormalizingSequence.dyadic()
    (a, b), length = max_avoided_interval(E, rseq, depth)
    pbar = upper_porosity(E, depth, tol)
    max_ok = abs(length - as_float(pbar.estimate)) <= tol
    ok = length_ok and wit.avoided and max_ok
    return {
        "check": "witness_roundtrip",
        "inputs": {"set": E.spec, "depth": depth},
        "lhs": {"witness_interval": list(wit.interval), "avoided": wit.avoided},
        "rhs": {"max_avoided": [a, b], "length": length},
        "gap": abs(length - as_float(pbar.estimate)),
        "tol": tol,
        "pass": bool(ok),
        "depth": depth,
        "converged": wit.converged,
    }


CHECKS = {
    "geometric_law": _geometric_law,
    "upper_transport": _upper_transport,
    "half_laws": _half_laws,
    "classification": _classification,
    "integer_model": _integer_model,
    "ssp_coherence": _ssp_coherence,
    "witness_roundtrip": _witness_roundtrip,
}


DEFAULT_PLAN = {
    "checks": [
        {"id": "geometric_law", "q": "3/10"},
        {"id": "geometric_law", "q": "1/2"},
        {"id": "geometric_law", "q": "4/5"},
        {"id": "upper_transport", "set": "all", "mu": "geometric:1/2",
         "depth_zero": 12, "depth_inf": 6},
        {"id": "upper_transport", "set": "evens", "mu": "geometric:1/2",
         "depth_zero": 12, "depth_inf": 6},
        {"id": "upper_transport", "set": "all", "mu": "power:1",
         "depth_zero": 8, "depth_inf": 8},
        {"id": "upper_transport", "set": "powers:2", "mu": "power:1",
         "depth_zero": 12, "depth_inf": 12},
        {"id": "half_laws"},
        {"id": "classification"},
        {"id": "integer_model", "N": 100000},
        {"id": "ssp_coherence"},
        {"id": "witness_roundtrip"},
    ]
}


def run_plan(plan: dict) -> dict:
    """Execute a plan; returns {"checks": [...], "passed": bool}.

    Unknown check ids raise SpecError (usage error at the CLI layer).
    Report order is canonical: sorted by (check id, position).
    """
    if not isinstance(plan, dict) or "checks" not in plan:
        raise SpecError('plan must be an object with a "checks" list')
    results = []
    for pos, entry in enumerate(plan["checks"]):
        if not isinstance(entry, dict) or "id" not in entry:
            raise SpecError(f"plan entry {pos} missing an id")
        cid = entry["id"]
        fn = CHECKS.get(cid)
        if fn is None:
            raise SpecError(f"unknown check id {cid!r}")
        res = fn(entry)
        res["position"] = pos
        results.append(res)
    results.sort(key=lambda r: (r["check"], r["position"]))
    passed = all(r.get("pass", False) or r.get("inconclusive", False)
                 for r in results)
    return {"checks": results, "passed": bool(passed)}
