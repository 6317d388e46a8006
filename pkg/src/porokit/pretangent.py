"""Finite-scale views of a set's infinitesimal geometry at 0.

Rescaling a set by a normalizing value r maps each point x to x/r; as r runs
through a sequence tending to 0, the cluster values of the rescaled points
are exactly the finite limits of x_n/r_n, i.e. the rescaled limit set of the
original set along that sequence.  Snapshots truncate at a cap B above and at
a resolution floor below (everything under the floor is represented by the
always-present point 0), and an epsilon-merge over a tail window of snapshots
yields a deterministic cluster estimate.

The "for every subsequence" quantifier of the underlying theory is replaced
throughout by "for every index in the tail window": at finite depth,
pointwise emptiness for all n is equivalent to emptiness along every
subsequence, so the surrogate is exact for the data it sees.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import scalars
from .brackets import DEFAULT_WINDOWS
from .porosity_zero import largest_gap, window_extrema
from .scalars import as_float, coerce, pow2
from .sets import SetHandle, SpecError

DEFAULT_EPS = 2.0**-12
DEFAULT_CAP = 4
SNAPSHOT_FLOOR_RATIO = Fraction(1, 1 << 20)


class NormalizingSequence:
    """A positive sequence tending to 0, optionally constrained to lie in a
    ground set (guaranteed by construction for the from-points kinds)."""

    def __init__(self, kind, value_fn, *, ground=None, max_index=None, label=""):
        self.kind = kind
        self.ground = ground
        self.max_index = max_index
        self.label = label
        self._value_fn = value_fn
        self._memo = {}

    @classmethod
    def from_handle(cls, handle: SetHandle, index_fn=None, label="") -> "NormalizingSequence":
        """r_n drawn from a set's decreasing enumeration (so r_n is in the
        set by construction).  ``index_fn`` maps n to a 0-based point index
        and defaults to the identity."""
        fn = index_fn if index_fn is not None else (lambda n: n)

        def value(n):
            return handle.point(fn(n))

        return cls("from_set_points", value, ground=handle, label=label)

    @classmethod
    def geometric(cls, start, ratio, mode=scalars.EXACT) -> "NormalizingSequence":
        r0 = coerce(start, mode)
        q = coerce(ratio, mode)
        if not scalars.zero(mode) < q or not q < scalars.one(mode):
            raise SpecError("geometric normalizing ratio must lie in (0, 1)")

        def value(n):
            v = r0
            for _ in range(n):
                v = v * q
            return v

        return cls("geometric", value)

    @classmethod
    def dyadic(cls, mode=scalars.EXACT) -> "NormalizingSequence":
        return cls("geometric", lambda n: pow2(-n, mode))

    @classmethod
    def explicit(cls, values, mode=scalars.EXACT) -> "NormalizingSequence":
        vals = [coerce(v, mode) for v in values]
        for a, b in zip(vals, vals[1:]):
            if not b < a:
                raise SpecError("normalizing values must decrease strictly")

        def value(n):
            return vals[n]

        return cls("explicit", value, max_index=len(vals) - 1)

    def value(self, n: int):
        if self.max_index is not None and n > self.max_index:
            raise IndexError(f"normalizing sequence ends at index {self.max_index}")
        v = self._memo.get(n)
        if v is None:
            v = self._value_fn(n)
            if len(self._memo) < 1 << 14:
                self._memo[n] = v
        return v

    def indices_upto(self, depth: int):
        stop = depth if self.max_index is None else min(depth, self.max_index)
        return range(1, stop + 1)


@dataclass
class Snapshot:
    """The rescaled finite view {x/r : x in E, floor <= x/r <= B} plus 0."""

    n: int
    r: object
    points: list
    cap: object
    floor: object
    truncated: bool = True

    def values(self):
        return [0.0] + [as_float(p) for p in self.points]


def snapshot(E: SetHandle, r, B, floor_ratio=None, n: int = 0) -> Snapshot:
    """Exact rescaled truncation of E at scale r.

    Points of E below r*floor_ratio are dropped; they sit within the merge
    resolution of the always-included point 0.
    """
    mode = E.mode
    zero = scalars.zero(mode)
    if not zero < r:
        raise SpecError("snapshot scale r must be positive")
    B = coerce(B, mode)
    if B < scalars.one(mode):
        raise SpecError("snapshot cap must be >= 1")
    fr = floor_ratio if floor_ratio is not None else coerce(SNAPSHOT_FLOOR_RATIO, mode)
    lo = r * fr
    hi = r * B
    pts = [x for x in E.points_down_to(lo) if not x > hi]
    rescaled = sorted((x / r for x in pts), key=as_float)
    return Snapshot(n=n, r=r, points=rescaled, cap=B, floor=fr)


@dataclass
class Cluster:
    lo: float
    hi: float
    stable: bool = True

    @property
    def center(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def distance(self, x: float) -> float:
        if x < self.lo:
            return self.lo - x
        if x > self.hi:
            return x - self.hi
        return 0.0


@dataclass
class LimitSetEstimate:
    """Epsilon-merged cluster values over the tail snapshots.

    A cluster is stable when every tail snapshot contributes a point within
    eps of it; intermittent clusters stay in the list but unflagged.
    """

    clusters: list
    eps: float
    depth: int
    W: int
    cap: object
    snapshots: list = field(default_factory=list, repr=False)

    def stable_clusters(self):
        return [c for c in self.clusters if c.stable]

    def cluster_values(self):
        return [c.center for c in self.clusters]


def limit_set(E: SetHandle, rseq: NormalizingSequence, B, depth: int,
              eps: float = DEFAULT_EPS, W: int = DEFAULT_WINDOWS) -> LimitSetEstimate:
    """Cluster estimate of the rescaled limit set along ``rseq``.

    Deterministic: all tail-snapshot values are pooled, sorted ascending,
    and merged while adjacent values are closer than eps.
    """
    indices = list(rseq.indices_upto(depth))
    tail = indices[-W:] if W else indices
    if not tail:
        raise SpecError("limit_set needs at least one snapshot index")
    mode = E.mode
    fr = coerce(Fraction(max(eps / 2, 2.0**-40)), mode)
    snaps = [snapshot(E, rseq.value(n), B, floor_ratio=fr, n=n) for n in tail]

    pool = sorted(set(v for s in snaps for v in s.values()))
    clusters = []
    cur_lo = cur_hi = pool[0]
    for v in pool[1:]:
        if v - cur_hi < eps:
            cur_hi = v
        else:
            clusters.append(Cluster(cur_lo, cur_hi))
            cur_lo = cur_hi = v
    clusters.append(Cluster(cur_lo, cur_hi))

    for c in clusters:
        c.stable = all(
            any(c.distance(v) <= eps for v in s.values()) for s in snaps
        )
    return LimitSetEstimate(clusters=clusters, eps=eps, depth=depth, W=W,
                            cap=B, snapshots=snaps)


# ---------------------------------------------------------------------------
# Interval avoidance and gap witnesses
# ---------------------------------------------------------------------------


def interval_avoided(E: SetHandle, rseq: NormalizingSequence, interval,
                     depth: int, margin=Fraction(1, 1 << 12)):
    """True iff no rescaled point falls in the (margin-shrunken) interval at
    any index n <= depth.

    The interval (a, b) within (0, 1) is shrunk to ((1+m)a, (1-m)b) to absorb
    finite-scale drift; the first violation, if any, is returned as a witness
    (index, offending rescaled point).  A left endpoint at 0 is raised to the
    snapshot resolution floor: rescaled points below it belong to the cluster
    at 0, which every rescaled limit set contains.
    """
    a, b = interval
    mode = E.mode
    one = scalars.one(mode)
    zero = scalars.zero(mode)
    a = coerce(a, mode)
    b = coerce(b, mode)
    m = coerce(margin, mode)
    if not zero < b or not a < b or b > one:
        raise SpecError("avoidance probes need 0 <= a < b <= 1")
    a_in = a * (one + m)
    floor = coerce(SNAPSHOT_FLOOR_RATIO, mode)
    if a_in < floor:
        a_in = floor
    b_in = b * (one - m)
    if not a_in < b_in:
        return True, None

    for n in rseq.indices_upto(depth):
        r = rseq.value(n)
        lo = r * a_in
        hi = r * b_in
        for x in E.points_down_to(lo):
            if x < hi and x > lo:
                return False, (n, x / r)
    return True, None


def max_avoided_interval(E: SetHandle, rseq: NormalizingSequence, depth: int,
                         eps: float = DEFAULT_EPS, margin=Fraction(1, 1 << 12),
                         grid: int = 0, W: int = DEFAULT_WINDOWS):
    """Longest subinterval of (0, 1) avoided by every tail snapshot.

    Candidate endpoints are the limit-set cluster values (plus 0 and 1, plus
    an optional uniform grid of 1/grid steps); ties prefer the smallest left
    endpoint.
    """
    ls = limit_set(E, rseq, 1, depth, eps, W)
    cands = {0.0, 1.0}
    cands.update(v for v in ls.cluster_values() if 0.0 <= v <= 1.0)
    if grid:
        cands.update(i / grid for i in range(grid + 1))
    cands = sorted(cands)

    best = None  # (length, a, b)
    for i, a in enumerate(cands):
        for b in reversed(cands[i + 1:]):
            length = b - a
            if best is not None and length < best[0] - 1e-15:
                break
            ok, _ = interval_avoided(E, rseq, (a, b), depth, margin)
            if ok:
                if best is None or length > best[0] + 1e-15 or \
                        (abs(length - best[0]) <= 1e-15 and a < best[1]):
                    best = (length, a, b)
                break
    if best is None:
        return (0.0, 0.0), 0.0
    return (best[1], best[2]), best[0]


@dataclass
class WitnessReport:
    rseq: NormalizingSequence
    interval: tuple
    length: object
    per_window: list
    converged: bool
    avoided: bool


def porosity_witness(E: SetHandle, depth: int, tol: float = 1e-6,
                     W: int = DEFAULT_WINDOWS) -> WitnessReport:
    """Build a normalizing sequence realizing the upper porosity.

    Per dyadic window the h attaining the window's ratio supremum is taken as
    the normalizing value; the gap witness at that h, rescaled by h, gives
    the candidate avoided interval.  The reported interval is the
    conservative hull over the tail (max of left ends, min of right ends)
    and must itself pass the avoidance probe.
    """
    hs = []
    rescaled = []
    for j in range(depth + 1):
        rec = window_extrema(E, j)
        h = rec.at_sup
        if hs and not h < hs[-1]:
            # Adjacent windows can both attain their sup at the shared
            # endpoint; keep one copy so the sequence stays decreasing.
            continue
        rep = largest_gap(E, h)
        a, b = rep.witness
        hs.append(h)
        rescaled.append((a / h, b / h, j))

    rseq = NormalizingSequence("gap_witness", lambda n, _hs=hs: _hs[n],
                               max_index=len(hs) - 1)
    tail = rescaled[-max(W, 3):]
    a_star = max((t[0] for t in tail), key=as_float)
    b_star = min((t[1] for t in tail), key=as_float)
    conv = (max(as_float(t[0]) for t in tail[-3:]) - min(as_float(t[0]) for t in tail[-3:]) <= tol
            and max(as_float(t[1]) for t in tail[-3:]) - min(as_float(t[1]) for t in tail[-3:]) <= tol)
    if not a_star < b_star:
        return WitnessReport(rseq, (a_star, b_star), scalars.zero(E.mode),
                             rescaled, False, False)
    ok, _ = interval_avoided(E, rseq, (a_star, b_star), depth)
    return WitnessReport(rseq, (a_star, b_star), b_star - a_star, rescaled,
                         conv, ok)


# ---------------------------------------------------------------------------
# Cardinality and radius probes
# ---------------------------------------------------------------------------


@dataclass
class CardProbe:
    """Cluster-count estimate: ``stable`` is a lower bound on the cardinality
    of the limit set, ``total`` an upper bound at resolution eps (finite data
    cannot certify an exact infinite cardinal)."""

    stable: int
    total: int
    eps: float


def cluster_count_probe(E: SetHandle, rseq: NormalizingSequence, depth: int,
                        eps: float = DEFAULT_EPS, B=1,
                        W: int = DEFAULT_WINDOWS) -> CardProbe:
    """Count limit-set clusters within [0, B] (0's cluster included)."""
    ls = limit_set(E, rseq, B, depth, eps, W)
    return CardProbe(stable=len(ls.stable_clusters()), total=len(ls.clusters),
                     eps=eps)


def limit_radius_extremes(E: SetHandle, sample_size: int, depth: int,
                          eps: float = DEFAULT_EPS, seed: int = 0,
                          B=4, W: int = DEFAULT_WINDOWS):
    """Extremes of limit-set radii over sampled normalizing sequences.

    Sequences are drawn with r_n a point of E at dyadically spaced depths
    (so the value 1 always belongs to the limit set).  Returns
    (r_upper, r_lower, details): the max over samples of the largest cluster
    value (a lower bound on the true supremum, which the cap B truncates) and
    the min over samples of the smallest nonzero stable cluster value, with
    +inf when every sampled limit set degenerates to {0}.
    """
    if E.first_point() is None:
        return 0.0, float("inf"), []
    rng = random.Random(seed)
    r_upper = 0.0
    r_lower = float("inf")
    details = []
    for s in range(sample_size):
        offset = rng.randrange(0, 8)
        stride = rng.randrange(1, 4)

        def index_fn(n, o=offset, st=stride):
            return o + st * ((1 << min(n, 10)) - 1)

        rseq = NormalizingSequence.from_handle(E, index_fn, label=f"sample{s}")
        ls = limit_set(E, rseq, B, depth, eps, W)
        stable = ls.stable_clusters()
        values = [c.center for c in stable]
        top = max(values) if values else 0.0
        nonzero = [v for v in values if v > eps]
        bottom = min(nonzero) if nonzero else float("inf")
        r_upper = max(r_upper, top)
        r_lower = min(r_lower, bottom)
        details.append({"sample": s, "top": top, "bottom": bottom,
                        "clusters": len(stable)})
    return r_upper, r_lower, details


# ---------------------------------------------------------------------------
# Ratio-shadowing surrogate for set comparability
# ---------------------------------------------------------------------------


def shadowing_profile(E: SetHandle, T: SetHandle, depth: int,
                      tol: float = 0.05):
    """Per-window worst relative mismatch of E's points against T.

    For each dyadic window, sup over points e of E in the window of
    |e / nearest_T(e) - 1|.  The verdict "consistent" (with every small point
    of E being ratio-shadowed in T) requires the profile to fall toward 0
    over the last three windows; the true infinite statement is never
    claimed.
    """
    if E.mode != T.mode:
        raise SpecError("shadowing profiles need handles of one scalar mode")
    mode = E.mode
    floor = pow2(-(depth + 3), mode)
    t_pts = list(reversed(T.points_down_to(floor)))  # ascending
    t_floats = [as_float(t) for t in t_pts]
    if not t_pts:
        raise SpecError("cannot shadow against an empty set")

    import bisect

    profile = []
    for j in range(depth + 1):
        hi = pow2(-j, mode)
        lo = pow2(-(j + 1), mode)
        window_pts = [x for x in E.points_down_to(lo) if not x > hi and not x < lo]
        if not window_pts:
            continue
        worst = 0.0
        for e in window_pts:
            ef = as_float(e)
            i = bisect.bisect_left(t_floats, ef)
            best = None
            for k in (i - 1, i, i + 1):
                if 0 <= k < len(t_pts):
                    mismatch = abs(as_float(e / t_pts[k]) - 1.0)
                    if best is None or mismatch < best:
                        best = mismatch
            worst = max(worst, best)
        profile.append((j, worst))

    verdict = "inconclusive"
    if len(profile) >= 3:
        last = [v for _, v in profile[-3:]]
        falling = all(b <= a + 1e-12 for a, b in zip(last, last[1:]))
        if falling and last[-1] <= tol:
            verdict = "consistent"
        elif min(last) > tol:
            verdict = "inconsistent"
    return profile, verdict
