"""Windowed surrogates for limsup/liminf.

True one-sided limits are unreachable by finite computation, so every limit
quantity in this package is reported as an :class:`EstimateBracket`: the
extremum over the last W windows of per-window extrema, a convergence flag
(the last three windows agree within tolerance), and the window records
themselves so callers can audit the protocol.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .scalars import as_float

DEFAULT_WINDOWS = 8
CONVERGENCE_SPAN = 3


@dataclass
class WindowRecord:
    """Exact extrema of a profile over one window.

    ``sup``/``inf`` are scalars; ``at_sup``/``at_inf`` record where the
    extremum is attained (an h value or an integer index, depending on the
    producer).  ``exact=False`` flags budget-limited windows, in which case
    ``sup_high``/``inf_high`` carry the sound upper versions of the bounds.
    """

    j: int
    sup: object
    inf: object
    at_sup: object = None
    at_inf: object = None
    exact: bool = True
    sup_high: object = None
    inf_high: object = None
    note: str = ""

    def bound_gap(self) -> float:
        if self.exact:
            return 0.0
        hi = self.sup_high if self.sup_high is not None else self.sup
        return abs(as_float(hi) - as_float(self.sup))


@dataclass
class EstimateBracket:
    """A finite-scale stand-in for a one-sided limit.

    ``estimate`` lies inside [min window inf, max window sup] over the
    reported windows; ``converged`` means the last three windows' relevant
    extrema agree within ``tol``.
    """

    estimate: object
    windows: list = field(default_factory=list)
    converged: bool = False
    depth: int = 0
    tol: float = 1e-6
    side: str = "sup"
    flagged: bool = False

    def window_tuples(self):
        return [(w.j, w.sup, w.inf) for w in self.windows]

    def check_invariant(self) -> bool:
        if not self.windows:
            return True
        lo = min(as_float(w.inf) for w in self.windows)
        hi = max(as_float(w.sup) for w in self.windows)
        e = as_float(self.estimate)
        return lo - 1e-12 <= e <= hi + 1e-12

    def __float__(self):
        return as_float(self.estimate)


def _extremum(values, side):
    it = iter(values)
    best = next(it)
    for v in it:
        if (side == "sup" and v > best) or (side == "inf" and v < best):
            best = v
    return best


def bracket_from_windows(windows, side, *, depth, tol, W=DEFAULT_WINDOWS) -> EstimateBracket:
    """Fold per-window extrema into a limit estimate.

    ``side`` is "sup" for a limsup surrogate (max of window sups over the
    last W windows) and "inf" for a liminf surrogate (min of window infs).
    Windows must be ordered by increasing j; empty windows should simply be
    absent from the list.
    """
    if side not in ("sup", "inf"):
        raise ValueError(f"side must be 'sup' or 'inf', not {side!r}")
    if not windows:
        raise ValueError("cannot build an estimate from zero windows")
    tail = windows[-W:] if W else list(windows)
    vals = [w.sup if side == "sup" else w.inf for w in tail]
    estimate = _extremum(vals, side)

    conv_vals = vals[-CONVERGENCE_SPAN:]
    converged = len(conv_vals) >= CONVERGENCE_SPAN and _spread(conv_vals) <= tol
    flagged = any(not w.exact for w in tail)
    if flagged:
        # Inexact windows widen the agreement criterion by their bound gaps.
        slack = max(w.bound_gap() for w in tail)
        converged = converged and slack <= tol

    return EstimateBracket(
        estimate=estimate,
        windows=tail,
        converged=converged,
        depth=depth,
        tol=tol,
        side=side,
        flagged=flagged,
    )


def _spread(values) -> float:
    floats = [as_float(v) for v in values]
    return max(floats) - min(floats)
