"""Gap-component chains and strong-porosity structure classification.

The complement of a point set below a scale h splits into maximal open
intervals (components).  Their shape as the scale shrinks decides the
structural classes probed here:

* SSP ("super strongly porous"): components (a_k, b_k) with a_k -> 0,
  relative width (b_k - a_k)/b_k -> 1, and adjacency ratio b_{k+1}/a_k -> 1.
  Equivalent to unit lower porosity at infinity of the index set under the
  defining scaling function, to every rescaled limit set having at most two
  points, and to the two-point criterion below vanishing at 0.
* CSP ("completely strongly porous"): a component chain whose overlap ratio
  limsup a_n/b_{n+1} is finite, together with strong porosity at 0.  The
  strong-porosity gate is deliberate: without it the finite-ratio condition
  alone would admit geometric sets, which fail every SSP equivalence.

Verdicts are three-valued (consistent / inconsistent / inconclusive): finite
data cannot prove an infinite limit statement, only support or refute it.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

from . import scalars
from .brackets import DEFAULT_WINDOWS, EstimateBracket, WindowRecord, bracket_from_windows
from .porosity_zero import lower_porosity, upper_porosity, window_extrema
from .scalars import as_float, pow2
from .sets import BudgetExceeded, ScalingFunction, SetHandle, SpecError


@dataclass
class ComponentChain:
    """Maximal set-free open intervals inside (0, h), ordered decreasing.

    Each interval is (a_k, b_k) with a_k >= b_{k+1} > a_{k+1} > 0; interior
    components have both endpoints in the set, while a component touching
    the top scale h has an unknown true right end and is flagged partial
    (and excluded from limit profiles).
    """

    intervals: list
    partial_flags: list
    h: object
    depth: int
    source: SetHandle = field(repr=False, default=None)

    def full_intervals(self):
        return [iv for iv, p in zip(self.intervals, self.partial_flags) if not p]


def components(E: SetHandle, h, depth: int) -> ComponentChain:
    """All maximal E-free open intervals inside (0, h) down to the dyadic
    floor 2**-depth; endpoints are consecutive enumerated points."""
    zero = scalars.zero(E.mode)
    if not zero < h:
        raise SpecError("component scans need h > 0")
    floor = pow2(-depth, E.mode)
    try:
        pts = [x for x in E.points_down_to(floor) if x < h]
    except BudgetExceeded:
        pts = [x for x in E.cached_points() if x < h]

    intervals = []
    flags = []
    if not pts:
        intervals.append((zero, h))
        flags.append(True)
        return ComponentChain(intervals, flags, h, depth, E)

    if pts[0] < h:
        intervals.append((pts[0], h))
        flags.append(True)  # right end clipped by the viewing scale
    for a, b in zip(pts[1:], pts[:-1]):
        intervals.append((a, b))
        flags.append(False)
    return ComponentChain(intervals, flags, h, depth, E)


def chain_overlap_ratio(chain: ComponentChain, tol: float = 1e-6,
                        W: int = DEFAULT_WINDOWS) -> EstimateBracket:
    """Windowed limsup of a_n / b_{n+1} along the chain.

    For the all-components chain consecutive intervals share endpoints and
    the ratio is identically 1; skipping components raises it.
    """
    ivs = chain.full_intervals()
    vals = []
    for (a, _), (_, b_next) in zip(ivs, ivs[1:]):
        vals.append(a / b_next)
    if not vals:
        one = scalars.one(chain.source.mode if chain.source else scalars.EXACT)
        rec = WindowRecord(j=0, sup=one, inf=one)
        return bracket_from_windows([rec], "sup", depth=0, tol=tol, W=W)
    recs = _index_windows(vals, tol)
    return bracket_from_windows(recs, "sup", depth=len(recs) - 1, tol=tol, W=W)


def _index_windows(values, tol):
    """Group a finite sequence into dyadic index windows [2^j-1, 2^(j+1)-1)."""
    recs = []
    j = 0
    while (1 << j) - 1 < len(values):
        lo = (1 << j) - 1
        hi = min((1 << (j + 1)) - 1, len(values))
        chunk = values[lo:hi]
        recs.append(WindowRecord(j=j, sup=max(chunk), inf=min(chunk),
                                 at_sup=lo, at_inf=lo))
        j += 1
    return recs


@dataclass
class SSPReport:
    """Verdict plus the three defining limit profiles.

    ``profiles`` maps each profile name to a list of (window, value) pairs:
    the left endpoints a_k (target 0), the relative widths (b_k - a_k)/b_k
    (target 1), and the adjacency ratios b_{k+1}/a_k (target 1).  The verdict
    is ``consistent`` only when both ratio profiles converge to their targets
    within tolerance under the window protocol.
    """

    verdict: str
    profiles: dict
    chain: ComponentChain
    cross_checks: dict = field(default_factory=dict)


def classify_ssp(E: SetHandle, depth: int, tol: float = 1e-3,
                 W: int = DEFAULT_WINDOWS, mu: ScalingFunction = None,
                 inf_depth: int = None) -> SSPReport:
    """Test the component-chain limits on the canonical all-components chain.

    When the set is declared as the value set of a scaling function, the
    verdict is cross-checked against unit lower porosity at infinity of the
    full index line under that function.
    """
    top = E.first_point()
    if top is None or E.finite:
        # No accumulation at 0: the structural conditions hold vacuously.
        return SSPReport("consistent", {"degenerate": []},
                         ComponentChain([], [], top, depth, E))

    chain = components(E, top + top, depth)
    ivs = chain.full_intervals()
    if len(ivs) < 4:
        return SSPReport("inconclusive", {}, chain)

    left_ends = [as_float(a) for a, _ in ivs]
    rel_width = [as_float((b - a) / b) for a, b in ivs]
    adjacency = [as_float(b_next / a) for (a, _), (_, b_next) in zip(ivs, ivs[1:])]

    profiles = {
        "left_end": _profile(left_ends),
        "relative_width": _profile(rel_width),
        "adjacency": _profile(adjacency),
    }

    w_ok, w_conv = _converges_to(rel_width, 1.0, tol)
    a_ok, a_conv = _converges_to(adjacency, 1.0, tol)
    shrink_ok = left_ends[-1] <= left_ends[0]

    if w_conv and a_conv:
        verdict = "consistent" if (w_ok and a_ok and shrink_ok) else "inconsistent"
    else:
        verdict = "inconclusive"

    cross = {}
    if mu is not None:
        from .porosity_inf import lower_porosity_inf
        from .sets import integers_all

        d = inf_depth if inf_depth is not None else max(3, min(depth // 4, 8))
        lp = lower_porosity_inf(integers_all(), mu, d, tol, W)
        cross["unit_lower_porosity_inf"] = {
            "value": lp.estimate,
            "pass": abs(as_float(lp.estimate) - 1.0) <= tol,
            "converged": lp.converged,
        }
        if verdict == "consistent" and not cross["unit_lower_porosity_inf"]["pass"]:
            verdict = "inconclusive"
    return SSPReport(verdict, profiles, chain, cross)


def _profile(values):
    return [(k, v) for k, v in enumerate(values)]


def _converges_to(values, target, tol, span=3):
    tail = values[-span:]
    spread = max(tail) - min(tail)
    converged = spread <= max(tol, 1e-9)
    hits = abs(tail[-1] - target) <= tol
    return hits, converged


# ---------------------------------------------------------------------------
# CSP classification
# ---------------------------------------------------------------------------


@dataclass
class CSPReport:
    verdict: str
    overlap_ratio: EstimateBracket
    upper_porosity: EstimateBracket
    note: str = ""


def classify_csp(E: SetHandle, depth: int, tol: float = 1e-3,
                 W: int = DEFAULT_WINDOWS) -> CSPReport:
    """CSP-consistent iff the all-components chain has a finite overlap
    ratio and the set is strongly porous at 0 (upper porosity 1)."""
    top = E.first_point()
    if top is None or E.finite:
        return CSPReport("consistent", None, None,
                         note="no accumulation at 0; conditions hold vacuously")
    chain = components(E, top + top, depth)
    ratio = chain_overlap_ratio(chain, tol, W)
    pbar = upper_porosity(E, depth, tol, W)
    strongly = abs(as_float(pbar.estimate) - 1.0) <= tol
    finite_ratio = as_float(ratio.estimate) < float("inf")
    if strongly and finite_ratio:
        verdict = "consistent"
    elif pbar.converged and not strongly:
        verdict = "inconsistent"
    else:
        verdict = "inconclusive"
    return CSPReport(verdict, ratio, pbar,
                     note="gate: finite overlap ratio plus strong porosity at 0")


# ---------------------------------------------------------------------------
# The two-point criterion
# ---------------------------------------------------------------------------


def two_point_form(x, y):
    """|x - y| * min(x, y) / max(x, y)**2, the two-point porosity indicator."""
    if not x < y and not y < x:
        return x - x  # zero in the ambient mode
    lo, hi = (x, y) if x < y else (y, x)
    return ((hi - lo) * lo) / (hi * hi)


def two_point_criterion(E: SetHandle, depth: int, pair_cap: int = 4096,
                        span: int = 8):
    """Profile of sup of the two-point form over pairs below 2**-j.

    For a fixed larger point y the form is a downward parabola in the
    smaller point, peaking at y/2, so the supremum over available partners
    is attained at the enumerated points bracketing y/2; only those
    candidates are evaluated.  The profile falling to 0 is the finite-scale
    signature of super strong porosity.
    """
    mode = E.mode
    floor = pow2(-(depth + span), mode)
    try:
        pts = E.points_down_to(floor)   # decreasing
        flagged = False
    except BudgetExceeded:
        pts = E.cached_points()
        flagged = True
    asc = list(reversed(pts))
    asc_floats = [as_float(p) for p in asc]

    profile = []
    for j in range(depth + 1):
        thr = pow2(-j, mode)
        ys = [p for p in pts if not p > thr]
        partial = flagged or len(ys) > pair_cap
        if len(ys) > pair_cap:
            ys = ys[:pair_cap]
        best = None
        for y in ys:
            i = bisect.bisect_left(asc_floats, as_float(y) / 2.0)
            for k in (i - 1, i, i + 1):
                if 0 <= k < len(asc) and asc[k] < y:
                    v = two_point_form(asc[k], y)
                    if best is None or v > best:
                        best = v
        if best is None:
            continue
        profile.append(WindowRecord(j=j, sup=best, inf=best, exact=not partial))
    return profile


def two_point_verdict(profile, tol: float = 0.05):
    """SSP-consistent iff the profile's tail falls below tolerance."""
    if len(profile) < 3:
        return "inconclusive"
    tail = [as_float(w.sup) for w in profile[-3:]]
    if tail[-1] <= tol and tail[-1] <= tail[0] + 1e-12:
        return "consistent"
    if min(tail) > tol:
        return "inconsistent"
    return "inconclusive"


# ---------------------------------------------------------------------------
# Half laws for the lower porosity
# ---------------------------------------------------------------------------


def half_law_checks(E: SetHandle, depth: int, tol: float = 1e-6,
                    W: int = DEFAULT_WINDOWS, ssp_tol: float = 1e-3) -> dict:
    """Check the lower-porosity half laws on one set.

    Every set accumulating at 0 has lower porosity at most 1/2 (it contains
    a sub-chain of points whose ratios collapse, and subsets only enlarge
    gaps); a set passing the SSP profiles has lower porosity exactly 1/2.
    Additionally, the ratio-minimizing scale inside a point pair [x_k,
    x_{k-1}] sits at 2*x_k - x_{k+1} whenever consecutive gaps are
    nonincreasing there; the event scan's minimizer is checked against that
    closed form.
    """
    report = {"set": E.spec}
    accumulates = E.accumulates_at_zero and E.first_point() is not None
    report["accumulates_at_zero"] = accumulates
    if not accumulates:
        report["upper_half_bound"] = None
        return report

    lp = lower_porosity(E, depth, tol, W)
    report["lower_porosity"] = lp.estimate
    report["upper_half_bound"] = as_float(lp.estimate) <= 0.5 + tol

    ssp = classify_ssp(E, depth, ssp_tol, W)
    report["ssp_verdict"] = ssp.verdict
    if ssp.verdict == "consistent":
        report["half_value"] = abs(as_float(lp.estimate) - 0.5) <= tol

    # Local-minimum location check on the deepest available triple.
    floor = pow2(-depth, E.mode)
    pts = [x for x in E.points_down_to(floor)]
    checks = []
    for k in range(1, len(pts) - 1):
        x_prev, x, x_next = pts[k - 1], pts[k], pts[k + 1]
        g_hi = x_prev - x
        g_lo = x - x_next
        if g_lo > g_hi:
            continue  # gap condition fails; closed form not asserted
        predicted = x + g_lo  # = 2 x_k - x_{k+1}
        if not predicted < x_prev:
            continue
        lam_pred = g_lo
        phi_pred = lam_pred / predicted
        # Strictly inside the pair the ratio falls to the switch then rises.
        mid_lo = (x + predicted) / 2
        mid_hi = (predicted + x_prev) / 2
        from .porosity_zero import gap_ratio

        ok = (not gap_ratio(E, mid_lo) < phi_pred) and \
             (not gap_ratio(E, mid_hi) < phi_pred) and \
             (not gap_ratio(E, predicted) > phi_pred)
        checks.append(bool(ok))
        if len(checks) >= 8:
            break
    report["min_location_checks"] = checks
    report["min_location_pass"] = all(checks) if checks else None
    return report
