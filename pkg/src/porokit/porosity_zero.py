"""Porosity of a point set at the origin.

The basic object is the gap function: for h > 0, the length of the largest
open subinterval of (0, h) containing no point of the set.  Dividing by h
gives the gap ratio; its limsup and liminf as h tends to 0 from the right are
the upper and lower porosity, and the full cluster set of ratio values is the
closed interval between them (the gap function is 1-Lipschitz in h, so the
ratio is continuous and attains everything between its extreme limits).

Everything here is computed exactly per dyadic window (2**-(j+1), 2**-j]:
the gap function is piecewise linear in h with slope 0 or 1, so the ratio is
piecewise monotone and its extrema occur only at breakpoints -- h equal to a
point of the set, or h where the growing top gap overtakes the frozen
interior gap -- and at window endpoints.  No sampling error enters.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import scalars
from .brackets import DEFAULT_WINDOWS, EstimateBracket, WindowRecord, bracket_from_windows
from .scalars import as_float, pow2, scalar_to_str
from .sets import BudgetExceeded, SetHandle, SpecError

# The spec for limit estimates requires at least three windows of agreement.
CONVERGENCE_MIN_DEPTH = 3


@dataclass
class GapReport:
    """Largest empty subinterval of (0, h).

    ``exact=False`` means the enumeration budget fired before the scan's
    termination bound; ``gap`` is then a certified lower bound and
    ``upper_bound`` a certified upper bound (never a silent answer).
    The witness is the realizing interval; among ties the one with the
    largest left endpoint is reported.
    """

    gap: object
    witness: tuple
    h: object
    exact: bool = True
    upper_bound: object = None


def largest_gap(E: SetHandle, h) -> GapReport:
    """The gap function at h, exact for the true infinite set.

    Scans points of E below h in decreasing order, tracking the best gap;
    stops as soon as the current point x is <= the best gap so far, because
    every remaining gap lies inside (0, x) and is therefore shorter.
    """
    zero = scalars.zero(E.mode)
    if not zero < h:
        raise SpecError("gap queries need h > 0")

    if E.gaps_decreasing:
        return _largest_gap_hinted(E, h, zero)

    best = None  # (gap, a, b)
    prev = h
    last = None
    try:
        for x in E.iter_below(h):
            gap = prev - x
            if best is None or gap > best[0]:
                best = (gap, x, prev)
            prev = x
            last = x
            if best is not None and not x > best[0]:
                return GapReport(best[0], (best[1], best[2]), h)
    except BudgetExceeded:
        lo_val = best[0] if best else zero
        hi_val = lo_val if last is None else (last if last > lo_val else lo_val)
        wit = (best[1], best[2]) if best else (zero, h)
        return GapReport(lo_val, wit, h, exact=False, upper_bound=hi_val)

    # Enumeration ended: the set is finite below h, so (0, prev) is real.
    tail_gap = prev
    if best is None or tail_gap > best[0]:
        best = (tail_gap, zero, prev)
    return GapReport(best[0], (best[1], best[2]), h)


def _largest_gap_hinted(E: SetHandle, h, zero) -> GapReport:
    # Nonincreasing gaps: only the first interior gap below h can compete
    # with the top gap.
    pts = E.points_below(h, count=2)
    if not pts:
        return GapReport(h, (zero, h), h)
    if len(pts) == 1:
        x1 = pts[0]
        if not E.known_exhausted_below(x1):  # pragma: no cover - defensive
            raise AssertionError("hinted scan got a short prefix of an infinite set")
        top, interior = h - x1, x1
        if interior > top:
            return GapReport(interior, (zero, x1), h)
        return GapReport(top, (x1, h), h)
    x1, x2 = pts
    top, interior = h - x1, x1 - x2
    if interior > top:
        return GapReport(interior, (x2, x1), h)
    return GapReport(top, (x1, h), h)


def gap_ratio(E: SetHandle, h):
    """Gap length relative to scale: always within [0, 1]."""
    return largest_gap(E, h).gap / h


# ---------------------------------------------------------------------------
# Exact per-window extrema of the gap ratio
# ---------------------------------------------------------------------------


def window_extrema(E: SetHandle, j: int) -> WindowRecord:
    """Exact sup/inf of the gap ratio over h in (2**-(j+1), 2**-j].

    Extrema are evaluated on the closed window; by continuity of the ratio
    this changes neither value (the left endpoint is the next window's right
    endpoint).  Results are memoized on the handle.
    """
    if j < 0:
        raise SpecError("window index must be >= 0")
    cached = E._window_cache.get(j)
    if cached is not None:
        return cached

    hi = pow2(-j, E.mode)
    lo = pow2(-(j + 1), E.mode)
    zero = scalars.zero(E.mode)
    one = scalars.one(E.mode)

    base = largest_gap(E, lo)

    pts = [x for x in E.cached_points() if x < hi]
    exhausted = E.known_exhausted_below(lo)

    if not pts:
        # Nothing below the window: the whole of (0, h) is one gap.
        rec = WindowRecord(j=j, sup=one, inf=one, at_sup=hi, at_inf=hi,
                           exact=base.exact)
        E._window_cache[j] = rec
        return rec

    # Tail maxima of interior gaps: M[k] = largest gap strictly below pts[k].
    n = len(pts)
    M = [zero] * n
    tail = pts[-1] if exhausted else zero
    M[n - 1] = tail
    for k in range(n - 2, -1, -1):
        g = pts[k] - pts[k + 1]
        M[k] = g if g > M[k + 1] else M[k + 1]

    slack = None
    if not base.exact:
        # Gaps hidden below the scanned floor are shorter than the last
        # point seen; widen M by that much for the sound upper version.
        slack = pts[-1]

    best_sup = None
    best_inf = None

    def consider(h, top, m):
        nonlocal best_sup, best_inf
        lam = h - top if top is not None else h
        if m is not None and m > lam:
            lam = m
        phi = lam / h
        if best_sup is None or phi > best_sup[0] or (phi == best_sup[0] and h > best_sup[1]):
            best_sup = (phi, h)
        if best_inf is None or phi < best_inf[0] or (phi == best_inf[0] and h > best_inf[1]):
            best_inf = (phi, h)

    uppers = [hi] + pts[:-1]
    for k, top in enumerate(pts):
        seg_hi = uppers[k] if uppers[k] < hi else hi
        seg_lo = top if top > lo else lo
        if seg_hi < lo:
            break
        if not seg_lo > seg_hi:
            m = M[k]
            consider(seg_lo, top, m)
            consider(seg_hi, top, m)
            switch = top + m
            if seg_lo < switch < seg_hi:
                consider(switch, top, m)
        if top < lo:
            break
    else:
        if exhausted:
            # Below the last point the whole interval (0, h) is empty.
            seg_hi = pts[-1] if pts[-1] < hi else hi
            if not lo > seg_hi:
                consider(lo, None, None)
                consider(seg_hi, None, None)

    sup_high = inf_high = None
    if slack is not None:
        # Recompute with the widened interior maxima for sound upper bounds.
        hs = None
        hi_inf = None
        for k, top in enumerate(pts):
            seg_hi = uppers[k] if uppers[k] < hi else hi
            seg_lo = top if top > lo else lo
            if seg_hi < lo:
                break
            if not seg_lo > seg_hi:
                m = M[k] if M[k] > slack else slack
                for h in (seg_lo, seg_hi, top + m):
                    if seg_lo <= h <= seg_hi:
                        lam = h - top
                        if m > lam:
                            lam = m
                        phi = lam / h
                        if hs is None or phi > hs:
                            hs = phi
                        if hi_inf is None or phi < hi_inf:
                            hi_inf = phi
            if top < lo:
                break
        sup_high, inf_high = hs, hi_inf

    rec = WindowRecord(
        j=j,
        sup=best_sup[0], inf=best_inf[0],
        at_sup=best_sup[1], at_inf=best_inf[1],
        exact=base.exact,
        sup_high=sup_high, inf_high=inf_high,
        note="" if base.exact else "enumeration budget hit; bounds reported",
    )
    E._window_cache[j] = rec
    return rec


def _tail_windows(E: SetHandle, depth: int, W: int):
    if depth < 0:
        raise SpecError("depth must be >= 0")
    start = max(0, depth - W + 1) if W else 0
    return [window_extrema(E, j) for j in range(start, depth + 1)]


def upper_porosity(E: SetHandle, depth: int, tol: float = 1e-6,
                   W: int = DEFAULT_WINDOWS) -> EstimateBracket:
    """Finite-scale surrogate of the limsup of the gap ratio at 0."""
    if depth < CONVERGENCE_MIN_DEPTH:
        raise SpecError(f"depth must be >= {CONVERGENCE_MIN_DEPTH}")
    return bracket_from_windows(_tail_windows(E, depth, W), "sup",
                                depth=depth, tol=tol, W=W)


def lower_porosity(E: SetHandle, depth: int, tol: float = 1e-6,
                   W: int = DEFAULT_WINDOWS) -> EstimateBracket:
    """Finite-scale surrogate of the liminf of the gap ratio at 0."""
    if depth < CONVERGENCE_MIN_DEPTH:
        raise SpecError(f"depth must be >= {CONVERGENCE_MIN_DEPTH}")
    return bracket_from_windows(_tail_windows(E, depth, W), "inf",
                                depth=depth, tol=tol, W=W)


@dataclass
class PorosityRange:
    """[lower, upper] porosity with the brackets that produced it.

    The ratio is continuous on (0, h0], so its cluster set at 0 fills the
    whole interval between liminf and limsup; the closed interval is the
    honest finite-scale answer.
    """

    lower: EstimateBracket
    upper: EstimateBracket

    @property
    def interval(self):
        return (self.lower.estimate, self.upper.estimate)

    @property
    def converged(self) -> bool:
        return self.lower.converged and self.upper.converged


def porosity_range(E: SetHandle, depth: int, tol: float = 1e-6,
                   W: int = DEFAULT_WINDOWS) -> PorosityRange:
    return PorosityRange(
        lower=lower_porosity(E, depth, tol, W),
        upper=upper_porosity(E, depth, tol, W),
    )


def profile_csv(E: SetHandle, depth: int) -> str:
    """Window extrema as CSV: j, h_lo, h_hi, window_sup, window_inf."""
    lines = ["j,h_lo,h_hi,window_sup,window_inf"]
    for j in range(depth + 1):
        rec = window_extrema(E, j)
        lines.append(",".join([
            str(j),
            scalar_to_str(pow2(-(j + 1), E.mode)),
            scalar_to_str(pow2(-j, E.mode)),
            scalar_to_str(rec.sup),
            scalar_to_str(rec.inf),
        ]))
    return "\n".join(lines) + "\n"
