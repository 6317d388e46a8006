"""Porosity of integer sets at infinity under a scaling function.

A strictly decreasing mu: N -> (0, inf) with mu(n) -> 0 transports gap
geometry from the origin out to infinity: the scaled gap at n is the largest
value drop mu(n1) - mu(n2) over integer pairs n <= n1 < n2 whose open integer
interval misses the set (mu at an absent upper witness counts as 0, matching
the finite-set convention where the scaled gap equals mu(n) eventually).
The limsup and liminf over n of scaled-gap/mu(n) are the upper and lower
porosity at infinity.

Two independent routes compute the upper porosity:

* the direct windowed route over n in [2**j, 2**(j+1)), exact per window via
  the segment structure of the ratio (piecewise max of a falling and a rising
  branch, extrema at integer breakpoints);
* the ratio shortcut: one minus the liminf of mu(e_{k+1})/mu(e_k) over
  consecutive elements, estimated with the same window protocol.

Both are reported and cross-validated; disagreement beyond tolerance raises
a diagnostic error carrying the two values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import scalars
from .brackets import DEFAULT_WINDOWS, EstimateBracket, WindowRecord, bracket_from_windows
from .porosity_zero import porosity_range, upper_porosity
from .scalars import as_float
from .sets import (
    BudgetExceeded,
    IntegerSet,
    ScalingFunction,
    SetHandle,
    SpecError,
    image_set,
    integers_explicit,
)

SCAN_BUDGET = 1 << 17
DENSE_WINDOW_CAP = 1 << 12


class TransportDisagreement(Exception):
    """The two upper-porosity routes disagreed beyond tolerance."""

    def __init__(self, direct, shortcut, tol):
        super().__init__(
            f"direct windowed estimate {as_float(direct):.9g} and ratio-shortcut "
            f"estimate {as_float(shortcut):.9g} disagree beyond tol={tol}"
        )
        self.direct = direct
        self.shortcut = shortcut


@dataclass
class InfGapReport:
    """Largest scaled gap at n with its witness pair.

    ``witness = (n1, n2)`` with n <= n1 < n2 and no set element strictly
    between; ``n2 = None`` encodes the open-ended tail (value mu(n1), the
    supremum as the upper witness runs off to infinity).
    """

    gap: object
    witness: tuple
    n: int
    exact: bool = True
    upper_bound: object = None


def _fast_suffix(E: IntegerSet, mu: ScalingFunction) -> bool:
    # Image gaps of an arithmetic progression under decreasing-gap mu are
    # sums of a fixed count of consecutive mu-gaps, hence still nonincreasing.
    return mu.gaps_decreasing and E.kind in ("all", "arithmetic")


def largest_scaled_gap(E: IntegerSet, mu: ScalingFunction, n: int,
                       scan_budget: int = SCAN_BUDGET) -> InfGapReport:
    """Exact supremum of mu(n1) - mu(n2) over admissible pairs from n on.

    Scans consecutive element pairs upward and stops once mu at the current
    element cannot exceed the best gap found (everything later is smaller).
    """
    n = int(n)
    if n < 1:
        raise SpecError("scaled gaps are defined for n >= 1")
    e = E.next_after(n - 1)
    if e is None:
        return InfGapReport(mu(n), (n, None), n)

    best = None  # (gap, n1, n2)
    if e > n:
        best = (mu(n) - mu(e), n, e)

    cur = e
    steps = 0
    while True:
        nxt = E.next_after(cur)
        if nxt is None:
            cand = mu(cur)
            if best is None or cand > best[0]:
                best = (cand, cur, None)
            return InfGapReport(best[0], (best[1], best[2]), n)
        cand = mu(cur) - mu(nxt)
        if best is None or cand > best[0]:
            best = (cand, cur, nxt)
        if not mu(nxt) > best[0]:
            return InfGapReport(best[0], (best[1], best[2]), n)
        if _fast_suffix(E, mu):
            # Later consecutive pairs only shrink; the first one decided it.
            return InfGapReport(best[0], (best[1], best[2]), n)
        cur = nxt
        steps += 1
        if steps >= scan_budget:
            bound = best[0] if best[0] > mu(cur) else mu(cur)
            return InfGapReport(best[0], (best[1], best[2]), n,
                                exact=False, upper_bound=bound)


def scaled_gap_ratio(E: IntegerSet, mu: ScalingFunction, n: int):
    """Scaled gap relative to mu(n); the quantity whose limits define
    porosity at infinity."""
    return largest_scaled_gap(E, mu, n).gap / mu(n)


# ---------------------------------------------------------------------------
# Direct windowed route
# ---------------------------------------------------------------------------


def scaled_ratio_window(E: IntegerSet, mu: ScalingFunction, j: int,
                        dense_cap: int = DENSE_WINDOW_CAP) -> WindowRecord:
    """Exact extrema of the scaled-gap ratio over n in [2**j, 2**(j+1))."""
    n_lo, n_hi = 1 << j, 1 << (j + 1)
    one = scalars.one(mu.mode)

    if E.kind == "all" and mu.gaps_decreasing and mu.ratio_trend is not None:
        # Ratio reduces to 1 - mu(n+1)/mu(n), monotone per the trend.
        r_left = one - mu.ratio(n_lo)
        r_right = one - mu.ratio(n_hi - 1)
        if mu.ratio_trend == "constant":
            sup = inf = r_left
            at_s = at_i = n_lo
        elif mu.ratio_trend == "increasing":
            sup, at_s, inf, at_i = r_left, n_lo, r_right, n_hi - 1
        else:
            sup, at_s, inf, at_i = r_right, n_hi - 1, r_left, n_lo
        return WindowRecord(j=j, sup=sup, inf=inf, at_sup=at_s, at_inf=at_i)

    elems = [e for e in E.elements_upto(n_hi - 1) if e >= n_lo]
    flagged = False
    if len(elems) > dense_cap:
        stride = max(1, len(elems) // dense_cap)
        elems = elems[::stride]
        flagged = True

    best_sup = None
    best_inf = None
    exact = True

    def consider(n, value):
        nonlocal best_sup, best_inf
        if best_sup is None or value > best_sup[0]:
            best_sup = (value, n)
        if best_inf is None or value < best_inf[0]:
            best_inf = (value, n)

    starts = sorted(set([n_lo] + elems))
    for s in starts:
        nxt = E.next_after(s)
        if nxt is None:
            # Beyond a finite set the whole tail is one gap: ratio 1.
            consider(s, one)
            break
        seg_end = min(n_hi - 1, nxt - 1)
        rep = largest_scaled_gap(E, mu, nxt)
        if not rep.exact:
            exact = False
        T = rep.gap
        mu_nxt = mu(nxt)

        def ratio_at(n):
            drop = mu(n) - mu_nxt
            lam = drop if drop > T else T
            return lam / mu(n)

        consider(s, ratio_at(s))
        if seg_end > s:
            consider(seg_end, ratio_at(seg_end))
            # The falling branch mu(n)-mu(nxt) meets the frozen suffix T at
            # the ratio's minimum; bracket the crossing integer.
            lo_n, hi_n = s, seg_end
            if mu(s) - mu_nxt > T and not mu(seg_end) - mu_nxt > T:
                while hi_n - lo_n > 1:
                    mid = (lo_n + hi_n) // 2
                    if mu(mid) - mu_nxt > T:
                        lo_n = mid
                    else:
                        hi_n = mid
                consider(lo_n, ratio_at(lo_n))
                consider(hi_n, ratio_at(hi_n))

    if best_sup is None:
        # Window before the first element with nothing to its left either:
        # only possible for empty sets; ratio is identically 1.
        return WindowRecord(j=j, sup=one, inf=one, at_sup=n_lo, at_inf=n_lo,
                            exact=True)

    return WindowRecord(j=j, sup=best_sup[0], inf=best_inf[0],
                        at_sup=best_sup[1], at_inf=best_inf[1],
                        exact=exact and not flagged,
                        note="subsampled dense window" if flagged else "")


def _scaled_tail_windows(E, mu, depth, W):
    start = max(0, depth - W + 1) if W else 0
    return [scaled_ratio_window(E, mu, j) for j in range(start, depth + 1)]


# ---------------------------------------------------------------------------
# Ratio shortcut route
# ---------------------------------------------------------------------------


def element_ratio_window(E: IntegerSet, mu: ScalingFunction, j: int,
                         dense_cap: int = DENSE_WINDOW_CAP):
    """Extrema of mu(next(e))/mu(e) over elements e in [2**j, 2**(j+1)).

    Returns None for windows containing no element (skipped upstream).
    """
    n_lo, n_hi = 1 << j, 1 << (j + 1)

    if E.kind == "all" and mu.ratio_trend is not None:
        r_left, r_right = mu.ratio(n_lo), mu.ratio(n_hi - 1)
        if mu.ratio_trend == "constant":
            return WindowRecord(j=j, sup=r_left, inf=r_left, at_sup=n_lo, at_inf=n_lo)
        if mu.ratio_trend == "increasing":
            return WindowRecord(j=j, sup=r_right, inf=r_left, at_sup=n_hi - 1, at_inf=n_lo)
        return WindowRecord(j=j, sup=r_left, inf=r_right, at_sup=n_lo, at_inf=n_hi - 1)

    elems = [e for e in E.elements_upto(n_hi - 1) if e >= n_lo]
    if not elems:
        return None
    flagged = len(elems) > dense_cap
    if flagged:
        stride = max(1, len(elems) // dense_cap)
        elems = elems[::stride]

    best_sup = best_inf = None
    for e in elems:
        nxt = E.next_after(e)
        if nxt is None:
            continue
        rho = mu(nxt) / mu(e)
        if best_sup is None or rho > best_sup[0]:
            best_sup = (rho, e)
        if best_inf is None or rho < best_inf[0]:
            best_inf = (rho, e)
    if best_sup is None:
        return None
    return WindowRecord(j=j, sup=best_sup[0], inf=best_inf[0],
                        at_sup=best_sup[1], at_inf=best_inf[1],
                        exact=not flagged,
                        note="subsampled dense window" if flagged else "")


def element_ratio_windows(E, mu, depth, W):
    start = max(0, depth - W + 1) if W else 0
    out = []
    for j in range(start, depth + 1):
        rec = element_ratio_window(E, mu, j)
        if rec is not None:
            out.append(rec)
    return out


def _one_minus_bracket(b: EstimateBracket, mode: str) -> EstimateBracket:
    one = scalars.one(mode)
    flipped = [
        WindowRecord(j=w.j, sup=one - w.inf, inf=one - w.sup,
                     at_sup=w.at_inf, at_inf=w.at_sup, exact=w.exact, note=w.note)
        for w in b.windows
    ]
    return EstimateBracket(
        estimate=one - b.estimate,
        windows=flipped,
        converged=b.converged,
        depth=b.depth,
        tol=b.tol,
        side="sup" if b.side == "inf" else "inf",
        flagged=b.flagged,
    )


def ratio_shortcut_upper(E: IntegerSet, mu: ScalingFunction, depth: int,
                         tol: float = 1e-6, W: int = DEFAULT_WINDOWS) -> EstimateBracket:
    """Upper porosity as one minus the liminf of consecutive-element ratios."""
    recs = element_ratio_windows(E, mu, depth, W)
    if not recs:
        raise SpecError("ratio shortcut needs an infinite integer set")
    liminf = bracket_from_windows(recs, "inf", depth=depth, tol=tol, W=W)
    return _one_minus_bracket(liminf, mu.mode)


# ---------------------------------------------------------------------------
# Porosity estimates at infinity
# ---------------------------------------------------------------------------


def _brackets_consistent(a: EstimateBracket, b: EstimateBracket, tol: float) -> bool:
    if abs(as_float(a.estimate) - as_float(b.estimate)) <= tol:
        return True
    lo_a = min(as_float(w.inf) for w in a.windows)
    hi_a = max(as_float(w.sup) for w in a.windows)
    lo_b = min(as_float(w.inf) for w in b.windows)
    hi_b = max(as_float(w.sup) for w in b.windows)
    return lo_a <= hi_b + tol and lo_b <= hi_a + tol


def upper_porosity_inf(E: IntegerSet, mu: ScalingFunction, depth: int,
                       tol: float = 1e-6, W: int = DEFAULT_WINDOWS,
                       cross_validate: bool = True) -> EstimateBracket:
    """Windowed limsup of the scaled-gap ratio, cross-checked against the
    consecutive-ratio shortcut whenever the set is infinite."""
    direct = bracket_from_windows(_scaled_tail_windows(E, mu, depth, W), "sup",
                                  depth=depth, tol=tol, W=W)
    if cross_validate and not E.is_finite:
        shortcut = ratio_shortcut_upper(E, mu, depth, tol, W)
        if not _brackets_consistent(direct, shortcut, max(tol, 1e-9)):
            raise TransportDisagreement(direct.estimate, shortcut.estimate, tol)
        direct.shortcut = shortcut
    return direct


def lower_porosity_inf(E: IntegerSet, mu: ScalingFunction, depth: int,
                       tol: float = 1e-6, W: int = DEFAULT_WINDOWS) -> EstimateBracket:
    """Windowed liminf of the scaled-gap ratio (no shortcut exists here:
    the consecutive-ratio identity is an upper-porosity fact only)."""
    return bracket_from_windows(_scaled_tail_windows(E, mu, depth, W), "inf",
                                depth=depth, tol=tol, W=W)


@dataclass
class InfClassification:
    """Porosity class at infinity with its supporting ratio statistics.

    Labels follow the consecutive-ratio criteria: liminf of
    mu(e_{k+1})/mu(e_k) equal to 1 means nonporous, equal to 0 means strongly
    porous, anything strictly between leaves a porous set.  A finite set is
    strongly porous outright (its scaled-gap ratio is eventually 1).
    """

    label: str
    ratio_liminf: EstimateBracket = None
    ratio_limsup: EstimateBracket = None
    converged: bool = False


def classify_inf(E: IntegerSet, mu: ScalingFunction, depth: int,
                 tol: float = 1e-6, W: int = DEFAULT_WINDOWS) -> InfClassification:
    if E.is_finite:
        # The scaled gap equals mu(n) for all large n: both porosities are 1.
        return InfClassification(label="strongly_porous", converged=True)
    recs = element_ratio_windows(E, mu, depth, W)
    if not recs:
        return InfClassification(label="strongly_porous", converged=True)
    liminf = bracket_from_windows(recs, "inf", depth=depth, tol=tol, W=W)
    limsup = bracket_from_windows(recs, "sup", depth=depth, tol=tol, W=W)
    lo = as_float(liminf.estimate)
    if lo <= tol:
        label = "strongly_porous"
    elif lo >= 1 - tol:
        label = "nonporous"
    else:
        label = "porous"
    return InfClassification(label=label, ratio_liminf=liminf, ratio_limsup=limsup,
                             converged=liminf.converged and limsup.converged)


@dataclass
class InfPorosityRange:
    """[liminf, limsup] hull of the scaled-gap ratio's cluster values.

    Unlike the origin-side range, interior membership is not asserted: the
    discrete ratio sequence can in principle jump, so this is the hull of
    the porosity-number set, not necessarily the set itself.
    """

    lower: EstimateBracket
    upper: EstimateBracket
    note: str = "hull of the porosity-number set at infinity"

    @property
    def interval(self):
        return (self.lower.estimate, self.upper.estimate)

    @property
    def converged(self):
        return self.lower.converged and self.upper.converged


def porosity_range_inf(E: IntegerSet, mu: ScalingFunction, depth: int,
                       tol: float = 1e-6, W: int = DEFAULT_WINDOWS,
                       cross_validate: bool = True) -> InfPorosityRange:
    return InfPorosityRange(
        lower=lower_porosity_inf(E, mu, depth, tol, W),
        upper=upper_porosity_inf(E, mu, depth, tol, W, cross_validate=cross_validate),
    )


# ---------------------------------------------------------------------------
# Transport check: image-set porosity at 0 vs porosity at infinity
# ---------------------------------------------------------------------------


def check_upper_transport(E: IntegerSet, mu: ScalingFunction, *,
                          depth_zero: int, depth_inf: int, tol: float = 1e-6,
                          W: int = DEFAULT_WINDOWS, image: SetHandle = None) -> dict:
    """Compare the upper porosity of the image point set at 0 with the upper
    porosity of the integer set at infinity; they describe one quantity."""
    img = image if image is not None else image_set(mu, E)
    lhs = upper_porosity(img, depth_zero, tol, W)
    rhs = upper_porosity_inf(E, mu, depth_inf, tol, W)
    gap = _abs_diff(lhs.estimate, rhs.estimate)
    gap_f = as_float(gap) if gap is not None else abs(
        as_float(lhs.estimate) - as_float(rhs.estimate))
    passed = gap_f <= tol or _brackets_consistent(lhs, rhs, tol)
    return {
        "check": "upper_transport",
        "inputs": {"set": E.spec, "mu": mu.spec},
        "lhs": lhs.estimate,
        "rhs": rhs.estimate,
        "gap": gap if gap is not None else gap_f,
        "gap_exactly_zero": (gap is not None and _is_zero(gap)),
        "tol": tol,
        "pass": bool(passed),
        "depth": {"zero": depth_zero, "inf": depth_inf},
        "converged": lhs.converged and rhs.converged,
    }


def _is_zero(x) -> bool:
    if isinstance(x, scalars.LogScalar):
        return x.is_zero
    return x == 0


def _abs_diff(a, b):
    """|a - b| as a scalar when modes match (ordered subtraction keeps
    log-domain values legal), else None."""
    if scalars.mode_of(a) != scalars.mode_of(b):
        return None
    try:
        return a - b if not a < b else b - a
    except TypeError:
        return None


# ---------------------------------------------------------------------------
# Scaling-function equivalence
# ---------------------------------------------------------------------------


def scaling_equivalent(mu1: ScalingFunction, mu2: ScalingFunction, depth: int,
                       tol: float = 1e-6, W: int = DEFAULT_WINDOWS,
                       subsequence=None, dense_cap: int = DENSE_WINDOW_CAP):
    """Windowed test of the double-index ratio criterion.

    Per window j the worst deviation of mu1(n)mu2(m)/(mu2(n)mu1(m)) from 1
    over n, m in [2**j, 2**(j+1)) equals fmax/fmin - 1 for f = mu1/mu2 on the
    window.  Returns (equivalent_flag, deviation_bracket) and, when a
    subsequence is supplied, also the bracket of the drift ratio along it.
    """
    if mu1.mode != mu2.mode:
        raise SpecError("scaling functions must share a scalar mode")
    recs = []
    for j in range(depth + 1):
        n_lo, n_hi = 1 << j, 1 << (j + 1)
        if mu1.domain_max is not None or mu2.domain_max is not None:
            dom = min(d for d in (mu1.domain_max, mu2.domain_max) if d is not None)
            n_hi = min(n_hi, dom + 1)
            if n_lo >= n_hi:
                break
        ns = range(n_lo, n_hi)
        flagged = len(ns) > dense_cap
        if flagged:
            stride = max(1, len(ns) // dense_cap)
            ns = list(ns)[::stride]
        fmax = fmin = None
        for n in ns:
            f = mu1(n) / mu2(n)
            if fmax is None or f > fmax:
                fmax = f
            if fmin is None or f < fmin:
                fmin = f
        dev = fmax / fmin - 1
        recs.append(WindowRecord(j=j, sup=dev, inf=dev, at_sup=n_lo, at_inf=n_lo,
                                 exact=not flagged))
    bracket = bracket_from_windows(recs, "sup", depth=depth, tol=tol, W=W)
    equivalent = bracket.converged and as_float(bracket.estimate) <= tol

    alpha = None
    if subsequence is not None:
        seq = list(subsequence)
        vals = []
        for k in range(len(seq) - 1):
            a, b = seq[k], seq[k + 1]
            vals.append((mu1(b) * mu2(a)) / ((mu1(a) * mu2(b))))
        arecs = []
        j = 0
        while (1 << j) <= len(vals):
            k_lo, k_hi = (1 << j) - 1, min((1 << (j + 1)) - 1, len(vals))
            chunk = vals[k_lo:k_hi]
            if chunk:
                arecs.append(WindowRecord(j=j, sup=max(chunk), inf=min(chunk),
                                          at_sup=k_lo, at_inf=k_lo))
            j += 1
        if arecs:
            alpha = bracket_from_windows(arecs, "sup", depth=j - 1, tol=tol, W=W)
    return equivalent, bracket, alpha


# ---------------------------------------------------------------------------
# Closed forms for eventually concave scaling functions
# ---------------------------------------------------------------------------


class NotEventuallyConcave(SpecError):
    """The midpoint inequality failed inside the deepest checked window."""


def _transform_bracket(b: EstimateBracket, f) -> EstimateBracket:
    # f must be order-preserving on [0, 1].
    return EstimateBracket(
        estimate=f(b.estimate),
        windows=[WindowRecord(j=w.j, sup=f(w.sup), inf=f(w.inf),
                              at_sup=w.at_sup, at_inf=w.at_inf, exact=w.exact)
                 for w in b.windows],
        converged=b.converged,
        depth=b.depth,
        tol=b.tol,
        side=b.side,
        flagged=b.flagged,
    )


def concave_closed_forms(mu: ScalingFunction, depth: int, tol: float = 1e-6,
                         W: int = DEFAULT_WINDOWS, check_cap: int = 1 << 12):
    """Lower porosity closed forms for eventually concave scaling functions.

    Returns (lower porosity at infinity of the full line, lower porosity at 0
    of the image point set, concavity onset index).  For a sequence with
    nonincreasing consecutive drops the scaled gap at n is exactly the next
    drop, so the liminf ratio collapses to one minus the limsup of
    mu(n+1)/mu(n); the image-set value then follows by the gap-vs-scale
    minimization, p -> p/(1+p).
    """
    onset = _concavity_onset(mu, depth, check_cap)
    if onset is None:
        raise NotEventuallyConcave(
            f"{mu.kind} violates the midpoint inequality inside the deepest window"
        )
    from .sets import integers_all

    recs = element_ratio_windows(integers_all(), mu, depth, W)
    limsup = bracket_from_windows(recs, "sup", depth=depth, tol=tol, W=W)
    one = scalars.one(mu.mode)
    p_inf = _one_minus_bracket(limsup, mu.mode)
    p_zero = _transform_bracket(p_inf, lambda p: p / (one + p))
    return p_inf, p_zero, onset


def _concavity_onset(mu: ScalingFunction, depth: int, check_cap: int):
    if mu.eventually_concave:
        return 2
    n_lo, n_hi = 1 << depth, 1 << (depth + 1)
    if mu.domain_max is not None:
        n_hi = min(n_hi, mu.domain_max)
        n_lo = min(n_lo, max(2, n_hi - check_cap))
    ns = range(max(2, n_lo), n_hi)
    if len(ns) > check_cap:
        stride = max(1, len(ns) // check_cap)
        ns = list(ns)[::stride]
    for n in ns:
        if (mu(n - 1) + mu(n + 1)) / 2 < mu(n):
            return None
    # Find the onset by a forward scan over the head of the domain.
    onset = 2
    limit = min(check_cap, (mu.domain_max or check_cap) - 1)
    for n in range(2, max(3, limit)):
        if (mu(n - 1) + mu(n + 1)) / 2 < mu(n):
            onset = n + 1
    return onset


# ---------------------------------------------------------------------------
# The integer model of a real point set
# ---------------------------------------------------------------------------


def integer_model(E_real: SetHandle, mu: ScalingFunction, N: int) -> IntegerSet:
    """The integer set whose mu-geometry models E near 0, truncated at N.

    m >= 2 joins when [mu(m+1), mu(m-1)] meets the closure of E; 1 joins when
    E reaches [mu(2), inf).  Enumerating E down to mu(N+1) decides every
    m <= N exactly (the only closure point not enumerable is 0, and it lies
    below every tested interval).  If the enumeration budget fires first, an
    interval whose lower end is below the scanned floor counts as met when E
    is infinite, and the result is flagged via ``model_exact``.
    """
    N = int(N)
    if N < 2:
        raise SpecError("integer model needs N >= 2")
    floor = mu(N + 1)
    exact = True
    try:
        pts = E_real.points_down_to(floor)
    except BudgetExceeded:
        pts = E_real.cached_points()
        exact = False
    scanned_floor = pts[-1] if pts else None

    marks = set()
    top = pts[0] if pts else None
    if top is not None and not top < mu(2):
        marks.add(1)

    max_k = N + 2
    if mu.domain_max is not None:
        max_k = min(max_k, mu.domain_max)

    def first_k_leq(p):
        # smallest k with mu(k) <= p, or max_k + 1 when none in range
        lo, hi = 1, max_k
        if mu(hi) > p:
            return max_k + 1
        if not mu(lo) > p:
            return lo
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if mu(mid) > p:
                lo = mid
            else:
                hi = mid
        return hi

    def last_k_geq(p):
        # largest k with mu(k) >= p, or 0 when even mu(1) < p
        if mu(1) < p:
            return 0
        lo, hi = 1, max_k
        if not mu(hi) < p:
            return hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if mu(mid) < p:
                hi = mid
            else:
                lo = mid
        return lo

    for p in pts:
        k_hi = first_k_leq(p)   # m + 1 >= k_hi
        k_lo = last_k_geq(p)    # m - 1 <= k_lo
        m_start = max(2, k_hi - 1)
        m_end = min(N, k_lo + 1)
        for m in range(m_start, m_end + 1):
            marks.add(m)

    if not exact and not E_real.finite and scanned_floor is not None:
        # Closure fallback: intervals dipping below the scanned floor.
        for m in range(2, N + 1):
            if m + 1 <= max_k and mu(m + 1) < scanned_floor:
                marks.add(m)

    model = integers_explicit(sorted(marks))
    model.model_exact = exact
    model.model_N = N
    return model


def check_integer_model(E_real: SetHandle, mu: ScalingFunction, N: int,
                        tol: float = 0.05, *, depth_zero: int = 20,
                        tol_zero: float = 1e-6, W: int = DEFAULT_WINDOWS,
                        ratio_tol: float = 1e-3) -> dict:
    """Compare porosity ranges of a real set and of its integer model.

    The transport is faithful exactly when mu(n+1)/mu(n) -> 1; when that
    fails the two ranges are expected to disagree and the report records the
    counterexample rather than a failure.
    """
    from .sets import integers_all

    depth_ratio = max(3, min(16, N.bit_length() - 2))
    recs = element_ratio_windows(integers_all(), mu, depth_ratio, W)
    # The step-ratio condition holds when the per-window minima climb to 1;
    # probe the deepest window rather than the laggy tail minimum.
    last_infs = [as_float(r.inf) for r in recs[-3:]]
    ratio_ok = last_infs[-1] >= 1 - ratio_tol and all(
        b >= a - ratio_tol for a, b in zip(last_infs, last_infs[1:]))

    model = integer_model(E_real, mu, N)
    lhs = porosity_range(E_real, depth_zero, tol_zero, W)
    depth_inf = max(3, N.bit_length() - 3)
    rhs = porosity_range_inf(model, mu, depth_inf, tol_zero, W)

    gap_lo = abs(as_float(lhs.lower.estimate) - as_float(rhs.lower.estimate))
    gap_hi = abs(as_float(lhs.upper.estimate) - as_float(rhs.upper.estimate))
    agrees = gap_lo <= tol and gap_hi <= tol
    passed = agrees if ratio_ok else not agrees
    return {
        "check": "integer_model",
        "inputs": {"set": E_real.spec, "mu": mu.spec, "N": N},
        "lhs": [lhs.lower.estimate, lhs.upper.estimate],
        "rhs": [rhs.lower.estimate, rhs.upper.estimate],
        "gap": [gap_lo, gap_hi],
        "tol": tol,
        "ratio_condition_holds": bool(ratio_ok),
        "model_size": len(model.elements_upto(N)),
        "model_exact": bool(getattr(model, "model_exact", True)),
        "pass": bool(passed),
        "depth": {"zero": depth_zero, "inf": depth_inf},
        "converged": lhs.converged and rhs.lower.converged and rhs.upper.converged,
    }
