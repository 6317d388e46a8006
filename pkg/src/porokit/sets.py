"""Construction and lazy enumeration of the three set families.

* :class:`SetHandle` -- a subset of the positive reals whose only accumulation
  point is 0, presented as a strictly decreasing lazy point stream.  The point
  0 itself is never stored: every consumer treats ``inf E = 0`` implicitly,
  which leaves all downstream porosity quantities unchanged.
* :class:`IntegerSet` -- a strictly increasing set of naturals, finite or lazy.
* :class:`ScalingFunction` -- a strictly decreasing map from the naturals to
  the positive reals tending to 0, used to transport porosity notions from
  the origin out to infinity.

Handles are immutable apart from a memoized enumeration cache, which is
guarded by a lock so concurrent readers always observe a consistent prefix.
"""

from __future__ import annotations

import itertools
import json
import threading
from fractions import Fraction

from .scalars import (
    EXACT,
    LOG,
    LogScalar,
    coerce,
    parse_rational,
    pow2,
)

DEFAULT_BUDGET = 10**6


class BudgetExceeded(Exception):
    """Raised when an enumeration would exceed its configured point budget."""

    def __init__(self, message, *, partial=None):
        super().__init__(message)
        self.partial = partial


class SpecError(ValueError):
    """Raised for malformed or out-of-range set specifications."""


# ---------------------------------------------------------------------------
# Real point sets clustering at 0
# ---------------------------------------------------------------------------


class SetHandle:
    """A subset of (0, inf) accumulating only at 0, enumerated decreasingly.

    ``gaps_decreasing`` asserts that the gaps between consecutive enumerated
    points never increase as the points descend.  It is set only for kinds
    where this is provable and unlocks O(1) largest-gap queries; the generic
    scan is used otherwise.
    """

    def __init__(self, kind, make_iter, *, mode=EXACT, finite=False,
                 gaps_decreasing=False, budget=DEFAULT_BUDGET, spec=None):
        self.kind = kind
        self.mode = mode
        self.finite = finite
        self.gaps_decreasing = gaps_decreasing
        self.budget = budget
        self.spec = spec if spec is not None else {"kind": kind}
        self._make_iter = make_iter
        self._iter = make_iter()
        self._cache = []
        self._exhausted = False
        self._lock = threading.Lock()
        self._window_cache = {}

    # -- enumeration -------------------------------------------------------

    def _extend_until(self, stop) -> None:
        """Grow the cache until ``stop(cache)`` is true or the set ends."""
        while not self._exhausted and not stop(self._cache):
            if len(self._cache) >= self.budget:
                raise BudgetExceeded(
                    f"enumeration budget of {self.budget} points exceeded for {self.kind}",
                    partial=list(self._cache),
                )
            try:
                nxt = next(self._iter)
            except StopIteration:
                self._exhausted = True
                return
            if self._cache and not nxt < self._cache[-1]:
                raise AssertionError(
                    f"{self.kind}: enumeration not strictly decreasing "
                    f"({nxt!r} after {self._cache[-1]!r})"
                )
            self._cache.append(nxt)

    def points_down_to(self, floor, *, strict=False):
        """All points >= floor (or > floor when strict), decreasing.

        The prefix is memoized; repeated calls extend rather than recompute.
        Raises :class:`BudgetExceeded` when the budget fires first.
        """
        with self._lock:
            self._extend_until(lambda c: bool(c) and c[-1] < floor)
            if strict:
                return [x for x in self._cache if x > floor]
            return [x for x in self._cache if x >= floor]

    def enumerate(self, floor):
        """Spec surface: the points of the set in [floor, inf)."""
        if not isinstance(floor, (Fraction, LogScalar)):
            floor = coerce(floor, self.mode)
        zero_like = (isinstance(floor, Fraction) and floor <= 0) or (
            isinstance(floor, LogScalar) and floor.is_zero
        )
        if zero_like:
            raise SpecError("enumeration floor must be positive")
        return self.points_down_to(floor)

    def points_below(self, bound, count=None, floor=None):
        """Points strictly below ``bound``; optionally at most ``count`` of
        them or all of them down to ``floor``."""
        if count is None and floor is None:
            raise ValueError("points_below needs a count or a floor")
        with self._lock:
            if count is not None:
                def stop(cache):
                    return len([x for x in cache if x < bound]) >= count
            else:
                def stop(cache):
                    return bool(cache) and cache[-1] < floor
            self._extend_until(stop)
            pts = [x for x in self._cache if x < bound]
            if count is not None:
                return pts[:count]
            return [x for x in pts if x >= floor]

    def cached_points(self):
        """Snapshot of the enumerated prefix (used after budget stops)."""
        with self._lock:
            return list(self._cache)

    def first_point(self):
        """Largest point, or None for an empty positive part."""
        with self._lock:
            self._extend_until(lambda c: len(c) >= 1)
        return self._cache[0] if self._cache else None

    def point(self, index):
        """The ``index``-th point (0-based) of the decreasing enumeration."""
        with self._lock:
            self._extend_until(lambda c: len(c) > index)
        if index >= len(self._cache):
            raise IndexError(f"{self.kind} has only {len(self._cache)} points")
        return self._cache[index]

    def iter_below(self, bound):
        """Lazily yield points < bound in decreasing order (budget-guarded)."""
        i = 0
        while True:
            with self._lock:
                self._extend_until(lambda c: len(c) > i)
                if i >= len(self._cache):
                    return
                x = self._cache[i]
            if x < bound:
                yield x
            i += 1

    def known_exhausted_below(self, floor) -> bool:
        """True when the whole set has been enumerated past ``floor``."""
        return self._exhausted

    @property
    def accumulates_at_zero(self) -> bool:
        return not self.finite

    def __repr__(self) -> str:
        return f"SetHandle({json.dumps(self.spec, sort_keys=True)}, mode={self.mode})"


# -- concrete kinds ----------------------------------------------------------


def geometric_set(q, *, mode=EXACT, budget=DEFAULT_BUDGET) -> SetHandle:
    """{q**k : k >= 0} for 0 < q < 1."""
    q = coerce(q, EXACT)
    if not (0 < q < 1):
        raise SpecError(f"geometric ratio must satisfy 0 < q < 1, got {q}")
    ratio = coerce(q, mode)

    def gen():
        x = coerce(1, mode)
        while True:
            yield x
            x = x * ratio

    return SetHandle("geometric", gen, mode=mode, gaps_decreasing=True,
                     budget=budget, spec={"kind": "geometric", "q": str(q)})


def power_set(p, *, mode=EXACT, budget=DEFAULT_BUDGET) -> SetHandle:
    """{n**(-p) : n >= 1}; p must be a positive integer in exact mode."""
    p = int(p)
    if p < 1:
        raise SpecError(f"power exponent must be a positive integer, got {p}")

    def gen():
        for n in itertools.count(1):
            if mode == EXACT:
                yield Fraction(1, n**p)
            else:
                yield LogScalar.from_fraction(Fraction(1, n**p))

    return SetHandle("power", gen, mode=mode, gaps_decreasing=True,
                     budget=budget, spec={"kind": "power", "p": p})


def supergeometric_set(*, mode=LOG, budget=DEFAULT_BUDGET, max_exponent_bits=None) -> SetHandle:
    """{2**(-2**n) : n >= 1}.

    Defaults to log-domain scalars: exact denominators have 2**n bits and stop
    being practical around n ~ 20.  In exact mode, enumerating past
    ``max_exponent_bits`` levels raises BudgetExceeded rather than silently
    truncating the set.
    """
    cap = max_exponent_bits if max_exponent_bits is not None else 22

    def gen():
        for n in itertools.count(1):
            if mode == EXACT:
                if n > cap:
                    raise BudgetExceeded(
                        f"exact supergeometric enumeration beyond level {cap}; "
                        "use log-domain mode for deeper scans"
                    )
                yield Fraction(1, 1 << (1 << n))
            else:
                yield LogScalar.pow2(-(1 << n))

    return SetHandle("supergeometric", gen, mode=mode,
                     gaps_decreasing=True, budget=budget,
                     spec={"kind": "supergeometric"})


def factorial_set(*, mode=EXACT, budget=DEFAULT_BUDGET) -> SetHandle:
    """{1/n! : n >= 1}."""

    def gen():
        f = 1
        for n in itertools.count(1):
            f *= n
            if mode == EXACT:
                yield Fraction(1, f)
            else:
                yield LogScalar.from_fraction(Fraction(1, f))

    return SetHandle("factorial", gen, mode=mode, gaps_decreasing=True,
                     budget=budget, spec={"kind": "factorial"})


def prime_reciprocal_set(*, mode=EXACT, budget=DEFAULT_BUDGET) -> SetHandle:
    """{1/p : p prime}.  Gap monotonicity is not provable here (prime gaps
    fluctuate), so the generic scan applies."""

    def gen():
        for p in _primes():
            if mode == EXACT:
                yield Fraction(1, p)
            else:
                yield LogScalar.from_fraction(Fraction(1, p))

    return SetHandle("prime_reciprocal", gen, mode=mode, budget=budget,
                     spec={"kind": "prime_reciprocal"})


def explicit_set(points, *, mode=EXACT, budget=DEFAULT_BUDGET) -> SetHandle:
    """A finite set given by an explicit list.

    Input order is free: values are sorted decreasingly and deduplicated.
    Zeros are dropped (0 stays implicit); negative entries are rejected.
    """
    vals = []
    for p in points:
        v = coerce(p, mode)
        if isinstance(v, Fraction):
            if v < 0:
                raise SpecError(f"explicit point must be nonnegative, got {v}")
            if v == 0:
                continue
        elif v.is_zero:
            continue
        vals.append(v)
    vals = sorted(set(vals) if mode == EXACT else _dedupe_log(vals), reverse=True)

    def gen():
        return iter(list(vals))

    return SetHandle("explicit", gen, mode=mode, finite=True, budget=budget,
                     spec={"kind": "explicit", "points": [str(v) for v in vals]
                           if mode == EXACT else ["(log)" for _ in vals]})


def _dedupe_log(vals):
    seen = {}
    for v in vals:
        seen[str(v.log2)] = v
    return list(seen.values())


def trivial_set(include_zero=True, *, mode=EXACT) -> SetHandle:
    """{0} or the empty set; the positive part is empty either way."""

    def gen():
        return iter(())

    return SetHandle("trivial", gen, mode=mode, finite=True,
                     spec={"kind": "trivial", "zero": bool(include_zero)})


def image_set(mu: "ScalingFunction", integers: "IntegerSet", *,
              budget=DEFAULT_BUDGET) -> SetHandle:
    """{mu(e) : e in E} enumerated decreasingly.

    The decreasing-gaps hint transfers only when mu has it and E is the whole
    line or an arithmetic progression (image gaps are then sums of a fixed
    number of consecutive mu-gaps, hence still nonincreasing).
    """
    mode = mu.mode
    finite = integers.is_finite or mu.domain_max is not None

    def gen():
        for e in integers:
            if mu.domain_max is not None and e > mu.domain_max:
                return
            yield mu(e)

    hint = mu.gaps_decreasing and integers.kind in ("all", "arithmetic")
    return SetHandle("image", gen, mode=mode, finite=finite,
                     gaps_decreasing=hint, budget=budget,
                     spec={"kind": "image", "mu": mu.spec, "set": integers.spec})


def union_set(handles, *, budget=DEFAULT_BUDGET) -> SetHandle:
    """Sorted lazy merge of several handles, duplicate values collapsed."""
    if not handles:
        raise SpecError("union requires at least one member")
    mode = handles[0].mode
    if any(h.mode != mode for h in handles):
        raise SpecError("union members must share one scalar mode")

    def gen():
        iters = [_AllIter(h) for h in handles]

        def pull(it):
            try:
                return next(it)
            except StopIteration:
                return None

        def pull_past(it, bound):
            # advance past values that tie with the one just emitted
            while True:
                v = pull(it)
                if v is None or v < bound:
                    return v

        heads = [pull(i) for i in iters]
        while True:
            best = None
            for v in heads:
                if v is not None and (best is None or v > best):
                    best = v
            if best is None:
                return
            yield best
            for i, v in enumerate(heads):
                if v is not None and not (v < best):
                    heads[i] = pull_past(iters[i], best)

    finite = all(h.finite for h in handles)
    return SetHandle("union", gen, mode=mode, finite=finite, budget=budget,
                     spec={"kind": "union", "members": [h.spec for h in handles]})


class _AllIter:
    """Iterate a handle's full decreasing stream through the memo cache."""

    def __init__(self, handle):
        self.handle = handle
        self.i = 0

    def __iter__(self):
        return self

    def __next__(self):
        h = self.handle
        with h._lock:
            h._extend_until(lambda c: len(c) > self.i)
            if self.i >= len(h._cache):
                raise StopIteration
            v = h._cache[self.i]
        self.i += 1
        return v


# ---------------------------------------------------------------------------
# Integer sets
# ---------------------------------------------------------------------------


def _primes():
    yield 2
    known = [2]
    n = 3
    while True:
        isp = True
        for p in known:
            if p * p > n:
                break
            if n % p == 0:
                isp = False
                break
        if isp:
            known.append(n)
            yield n
        n += 2


class IntegerSet:
    """A strictly increasing set of naturals with total membership and
    successor queries (successor returns None past a finite set's end)."""

    def __init__(self, kind, make_iter, *, finite=False, spec=None):
        self.kind = kind
        self.is_finite = finite
        self.spec = spec if spec is not None else {"kind": kind}
        self._make_iter = make_iter
        self._iter = make_iter()
        self._cache = []
        self._exhausted = False
        self._lock = threading.Lock()

    def _extend_until(self, stop):
        while not self._exhausted and not stop(self._cache):
            try:
                nxt = next(self._iter)
            except StopIteration:
                self._exhausted = True
                return
            if self._cache and nxt <= self._cache[-1]:
                raise AssertionError(f"{self.kind}: not strictly increasing")
            self._cache.append(nxt)

    def __iter__(self):
        i = 0
        while True:
            with self._lock:
                self._extend_until(lambda c: len(c) > i)
                if i >= len(self._cache):
                    return
                v = self._cache[i]
            yield v
            i += 1

    def elements_upto(self, n):
        """All elements <= n, increasing."""
        with self._lock:
            self._extend_until(lambda c: bool(c) and c[-1] > n)
            return [e for e in self._cache if e <= n]

    def contains(self, m) -> bool:
        with self._lock:
            self._extend_until(lambda c: bool(c) and c[-1] >= m)
            if self._cache and self._cache[-1] >= m:
                import bisect
                i = bisect.bisect_left(self._cache, m)
                return i < len(self._cache) and self._cache[i] == m
            return False

    def next_after(self, m):
        """min{e in E : e > m}, or None when the set ends before that."""
        with self._lock:
            self._extend_until(lambda c: bool(c) and c[-1] > m)
            import bisect
            i = bisect.bisect_right(self._cache, m)
            if i < len(self._cache):
                return self._cache[i]
            return None

    def __repr__(self):
        return f"IntegerSet({json.dumps(self.spec, sort_keys=True)})"


def integers_all() -> IntegerSet:
    return IntegerSet("all", lambda: itertools.count(1))


def integers_arithmetic(a, d) -> IntegerSet:
    a, d = int(a), int(d)
    if a < 1 or d < 1:
        raise SpecError("arithmetic progression needs a >= 1 and d >= 1")
    return IntegerSet("arithmetic", lambda: itertools.count(a, d),
                      spec={"kind": "arithmetic", "a": a, "d": d})


def integers_explicit(elements) -> IntegerSet:
    elems = sorted(set(int(e) for e in elements))
    if elems and elems[0] < 1:
        raise SpecError("integer sets live in the naturals (>= 1)")

    return IntegerSet("explicit", lambda: iter(list(elems)), finite=True,
                      spec={"kind": "explicit", "elements": elems})


def integers_recurrence(mul, add=0, start=1) -> IntegerSet:
    """n_{k+1} = mul*n_k + add; e.g. mul=2, add=0, start=1 gives {2**k}."""
    mul, add, start = int(mul), int(add), int(start)
    if start < 1 or mul < 1 or (mul == 1 and add <= 0):
        raise SpecError("recurrence must be strictly increasing from a natural")

    def gen():
        n = start
        while True:
            yield n
            n = mul * n + add

    return IntegerSet("recurrence", gen,
                      spec={"kind": "recurrence", "mul": mul, "add": add, "start": start})


def integers_primes() -> IntegerSet:
    return IntegerSet("primes", _primes, spec={"kind": "primes"})


def integers_complement_window(lo, hi) -> IntegerSet:
    """All naturals except those in [lo, hi]."""
    lo, hi = int(lo), int(hi)
    if not (1 <= lo <= hi):
        raise SpecError("complement window needs 1 <= lo <= hi")

    def gen():
        for n in itertools.count(1):
            if not (lo <= n <= hi):
                yield n

    return IntegerSet("complement_window", gen,
                      spec={"kind": "complement_window", "lo": lo, "hi": hi})


# ---------------------------------------------------------------------------
# Scaling functions
# ---------------------------------------------------------------------------


class ScalingFunction:
    """Strictly decreasing mu: N -> (0, inf) with mu(n) -> 0.

    ``ratio_trend`` describes how mu(n+1)/mu(n) moves with n ("constant",
    "increasing", "decreasing", or None when unknown); ``gaps_decreasing``
    asserts mu(n) - mu(n+1) is nonincreasing.  Both are set only where
    provable and drive O(1) per-window extrema.
    """

    def __init__(self, kind, func, *, mode=EXACT, ratio_trend=None,
                 gaps_decreasing=False, eventually_concave=None,
                 domain_max=None, spec=None):
        self.kind = kind
        self.mode = mode
        self._func = func
        self.ratio_trend = ratio_trend
        self.gaps_decreasing = gaps_decreasing
        self.eventually_concave = eventually_concave
        self.domain_max = domain_max
        self.spec = spec if spec is not None else {"kind": kind}
        self._memo = {}

    def __call__(self, n):
        n = int(n)
        if n < 1:
            raise SpecError(f"scaling functions are defined on n >= 1, got {n}")
        if self.domain_max is not None and n > self.domain_max:
            raise SpecError(f"{self.kind} scaling function ends at n = {self.domain_max}")
        v = self._memo.get(n)
        if v is None:
            v = self._func(n)
            if len(self._memo) < 1 << 16:
                self._memo[n] = v
        return v

    def ratio(self, n):
        """mu(n+1)/mu(n), always in (0, 1)."""
        return self(n + 1) / self(n)

    def __repr__(self):
        return f"ScalingFunction({json.dumps(self.spec, sort_keys=True)}, mode={self.mode})"


def scaling_geometric(q, *, mode=EXACT) -> ScalingFunction:
    q = coerce(q, EXACT)
    if not (0 < q < 1):
        raise SpecError(f"geometric ratio must satisfy 0 < q < 1, got {q}")
    qm = coerce(q, mode)

    def f(n):
        if mode == EXACT:
            return q**n
        return LogScalar(qm.log2 * n)

    # gaps q^n (1-q) fall strictly; (mu(n-1)+mu(n+1))/2 >= mu(n) since
    # (1/q + q)/2 >= 1 for every q in (0,1).
    return ScalingFunction("geometric", f, mode=mode, ratio_trend="constant",
                           gaps_decreasing=True, eventually_concave=True,
                           spec={"kind": "geometric", "q": str(q)})


def scaling_power(p, *, mode=EXACT) -> ScalingFunction:
    p = int(p)
    if p < 1:
        raise SpecError(f"power exponent must be a positive integer, got {p}")

    def f(n):
        v = Fraction(1, n**p)
        return v if mode == EXACT else LogScalar.from_fraction(v)

    # ratio (n/(n+1))^p rises toward 1; 1/n^p is convex so the midpoint
    # inequality holds at every n.
    return ScalingFunction("power", f, mode=mode, ratio_trend="increasing",
                           gaps_decreasing=True, eventually_concave=True,
                           spec={"kind": "power", "p": p})


def scaling_supergeometric(*, mode=LOG, max_exponent_bits=22) -> ScalingFunction:
    def f(n):
        if mode == EXACT:
            if n > max_exponent_bits:
                raise BudgetExceeded(
                    f"exact supergeometric value 2**-2**{n} is too large to materialize"
                )
            return Fraction(1, 1 << (1 << n))
        return LogScalar.pow2(-(1 << n))

    # ratio 2**-2**n collapses; mu(n-1)/2 >= mu(n) since 2**n - 2**(n-1) >= 1.
    return ScalingFunction("supergeometric", f, mode=mode, ratio_trend="decreasing",
                           gaps_decreasing=True, eventually_concave=True,
                           spec={"kind": "supergeometric"})


def scaling_reciprocal_factorial(*, mode=EXACT) -> ScalingFunction:
    import math

    def f(n):
        v = Fraction(1, math.factorial(n))
        return v if mode == EXACT else LogScalar.from_fraction(v)

    return ScalingFunction("reciprocal_factorial", f, mode=mode,
                           ratio_trend="decreasing", gaps_decreasing=True,
                           eventually_concave=True,
                           spec={"kind": "reciprocal_factorial"})


def scaling_tabulated(values, *, mode=EXACT) -> ScalingFunction:
    vals = [coerce(v, mode) for v in values]
    if len(vals) < 2:
        raise SpecError("tabulated scaling function needs at least two values")
    for a, b in zip(vals, vals[1:]):
        if not b < a:
            raise SpecError("tabulated scaling function must be strictly decreasing")

    def f(n):
        return vals[n - 1]

    gaps = [a - b for a, b in zip(vals, vals[1:])]
    gd = all(not g2 > g1 for g1, g2 in zip(gaps, gaps[1:]))
    return ScalingFunction("tabulated", f, mode=mode, domain_max=len(vals),
                           gaps_decreasing=gd,
                           spec={"kind": "tabulated",
                                 "values": [str(v) for v in values]})


# ---------------------------------------------------------------------------
# JSON spec parsing
# ---------------------------------------------------------------------------


def _require(doc, key, kind):
    if key not in doc:
        raise SpecError(f"{kind!r} spec missing required key {key!r}")
    return doc[key]


def parse_integer_spec(doc) -> IntegerSet:
    if isinstance(doc, str):
        doc = _shorthand_integers(doc)
    if not isinstance(doc, dict):
        raise SpecError(f"integer set spec must be an object, got {type(doc).__name__}")
    kind = _require(doc, "kind", "integer set")
    if kind == "all":
        return integers_all()
    if kind == "arithmetic":
        return integers_arithmetic(_require(doc, "a", kind), _require(doc, "d", kind))
    if kind == "explicit":
        return integers_explicit(_require(doc, "elements", kind))
    if kind == "recurrence":
        return integers_recurrence(_require(doc, "mul", kind),
                                   doc.get("add", 0), doc.get("start", 1))
    if kind == "primes":
        return integers_primes()
    if kind == "complement_window":
        return integers_complement_window(_require(doc, "lo", kind), _require(doc, "hi", kind))
    raise SpecError(f"unknown integer set kind {kind!r}")


def parse_scaling_spec(doc, *, mode=None) -> ScalingFunction:
    if isinstance(doc, str):
        doc = _shorthand_scaling(doc)
    if not isinstance(doc, dict):
        raise SpecError(f"scaling spec must be an object, got {type(doc).__name__}")
    kind = _require(doc, "kind", "scaling function")
    if mode is None:
        mode = doc.get("mode", LOG if kind == "supergeometric" else EXACT)
    if kind == "geometric":
        return scaling_geometric(_require(doc, "q", kind), mode=mode)
    if kind == "power":
        return scaling_power(_require(doc, "p", kind), mode=mode)
    if kind == "supergeometric":
        return scaling_supergeometric(mode=mode)
    if kind == "reciprocal_factorial":
        return scaling_reciprocal_factorial(mode=mode)
    if kind == "tabulated":
        return scaling_tabulated(_require(doc, "values", kind), mode=mode)
    raise SpecError(f"unknown scaling function kind {kind!r}")


def parse_set_spec(doc, *, mode=None, budget=DEFAULT_BUDGET) -> SetHandle:
    """Build a SetHandle from a JSON document (dict, JSON text, or shorthand).

    Top-level keys: "kind" plus per-kind parameters; rationals are strings
    "p/q"; scaling-function specs nest under "mu", integer sets under "set".
    """
    if isinstance(doc, str):
        text = doc.strip()
        if text.startswith("{"):
            try:
                doc = json.loads(text)
            except json.JSONDecodeError as e:
                raise SpecError(f"malformed JSON set spec: {e}") from e
        else:
            doc = _shorthand_set(text)
    if not isinstance(doc, dict):
        raise SpecError(f"set spec must be an object, got {type(doc).__name__}")
    kind = _require(doc, "kind", "set")
    if mode is None:
        mode = doc.get("mode", LOG if kind == "supergeometric" else EXACT)
    if mode not in (EXACT, LOG):
        raise SpecError(f"unknown scalar mode {mode!r}")

    if kind == "geometric":
        return geometric_set(_require(doc, "q", kind), mode=mode, budget=budget)
    if kind == "power":
        return power_set(_require(doc, "p", kind), mode=mode, budget=budget)
    if kind == "supergeometric":
        return supergeometric_set(mode=mode, budget=budget)
    if kind == "factorial":
        return factorial_set(mode=mode, budget=budget)
    if kind == "prime_reciprocal":
        return prime_reciprocal_set(mode=mode, budget=budget)
    if kind == "image":
        mu = parse_scaling_spec(_require(doc, "mu", kind), mode=mode)
        ints = parse_integer_spec(_require(doc, "set", kind))
        return image_set(mu, ints, budget=budget)
    if kind == "union":
        members = [parse_set_spec(m, mode=mode, budget=budget)
                   for m in _require(doc, "members", kind)]
        return union_set(members, budget=budget)
    if kind == "explicit":
        return explicit_set(_require(doc, "points", kind), mode=mode, budget=budget)
    if kind == "trivial":
        return trivial_set(doc.get("zero", True), mode=mode)
    raise SpecError(f"unknown set kind {kind!r}")


# -- CLI shorthand: "geometric:1/2", "power:1", "all", "evens", ... ----------


def _shorthand_set(text):
    name, _, arg = text.partition(":")
    name = name.strip()
    if name == "geometric":
        return {"kind": "geometric", "q": arg}
    if name == "power":
        return {"kind": "power", "p": int(arg)}
    if name in ("supergeometric", "factorial", "prime_reciprocal"):
        return {"kind": name}
    if name == "harmonic":
        return {"kind": "power", "p": 1}
    if name == "trivial":
        return {"kind": "trivial", "zero": arg.strip() != "empty"}
    raise SpecError(f"unknown set shorthand {text!r}")


def _shorthand_integers(text):
    name, _, arg = text.partition(":")
    name = name.strip()
    if name == "all":
        return {"kind": "all"}
    if name == "evens":
        return {"kind": "arithmetic", "a": 2, "d": 2}
    if name == "odds":
        return {"kind": "arithmetic", "a": 1, "d": 2}
    if name == "primes":
        return {"kind": "primes"}
    if name == "powers":
        return {"kind": "recurrence", "mul": int(arg) if arg else 2, "start": 1}
    if name == "arithmetic":
        a, d = arg.split(",")
        return {"kind": "arithmetic", "a": int(a), "d": int(d)}
    if name == "explicit":
        return {"kind": "explicit", "elements": [int(x) for x in arg.split(",")]}
    raise SpecError(f"unknown integer set shorthand {text!r}")


def _shorthand_scaling(text):
    name, _, arg = text.partition(":")
    name = name.strip()
    if name == "geometric":
        return {"kind": "geometric", "q": arg}
    if name == "power":
        return {"kind": "power", "p": int(arg)}
    if name in ("supergeometric", "reciprocal_factorial"):
        return {"kind": name}
    raise SpecError(f"unknown scaling shorthand {text!r}")
