"""Upper bound sets built from a nondominated collection, and the fathoming test.

The upper bound set of a stored collection consists of the local nadir points
between neighbouring elements together with the stored segments themselves.
A branch-and-bound node whose convex lower bound curve does not weakly
dominate any part of that set can be fathomed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .geometry import EPS, DominatedPairFound, ParetoElement, check_chain, sort_key

Point = tuple[float, float]


class NotNondominated(DominatedPairFound):
    """The input to :func:`theta` contains a dominated pair."""


@dataclass(frozen=True)
class BoundSet:
    nadir_points: list[Point] = field(default_factory=list)
    nadir_segments: list[ParetoElement] = field(default_factory=list)

    def __bool__(self) -> bool:
        return bool(self.nadir_points or self.nadir_segments)


@dataclass(frozen=True)
class LowerBoundCurve:
    """Convex, decreasing piecewise-linear curve given by its breakpoints."""

    breakpoints: tuple[Point, ...]

    def __init__(self, breakpoints: Iterable[Sequence[float]]) -> None:
        pts = tuple((float(x), float(y)) for x, y in breakpoints)
        if not pts:
            raise ValueError("a lower bound curve needs at least one breakpoint")
        prev_slope = -np.inf
        for (ax, ay), (bx, by) in zip(pts, pts[1:]):
            if not (bx > ax and by < ay):
                raise ValueError("breakpoints need increasing x and decreasing y")
            slope = (by - ay) / (bx - ax)
            if slope < prev_slope - 1e-9 * max(1.0, abs(slope)):
                raise ValueError("breakpoints do not describe a convex curve")
            prev_slope = slope
        object.__setattr__(self, "breakpoints", pts)

    @property
    def x_range(self) -> tuple[float, float]:
        return self.breakpoints[0][0], self.breakpoints[-1][0]

    def value(self, x: float) -> float:
        """Height of the curve at ``x``, clamped to the right end. Left of the
        curve there is nothing, so ``inf`` is returned."""
        bp = self.breakpoints
        if x < bp[0][0]:
            return np.inf
        if x >= bp[-1][0]:
            return bp[-1][1]
        xs = [p[0] for p in bp]
        i = int(np.searchsorted(xs, x, side="right")) - 1
        (ax, ay), (bx, by) = bp[i], bp[i + 1]
        return ay + (by - ay) * (x - ax) / (bx - ax)


def _sorted_chain(nd: Iterable[ParetoElement]) -> list[ParetoElement]:
    items = sorted(nd, key=sort_key)
    try:
        check_chain(items)
    except DominatedPairFound as exc:
        raise NotNondominated(str(exc)) from None
    return items


def theta(nd: Iterable[ParetoElement]) -> BoundSet:
    """Local nadir points between neighbours plus every segment of ``nd``.

    Neighbours that share an endpoint (within tolerance) produce no nadir.

    >>> from ndtree.geometry import point
    >>> theta([point(3, 1), point(1, 3)]).nadir_points
    [(3.0, 3.0)]
    """
    items = _sorted_chain(nd)
    nadirs: list[Point] = []
    for prev, nxt in zip(items, items[1:]):
        if abs(prev.x2 - nxt.x1) > EPS or abs(prev.y2 - nxt.y1) > EPS:
            nadirs.append((nxt.x1, prev.y2))
    return BoundSet(nadirs, [e for e in items if not e.is_point])


def _point_gap(lower: LowerBoundCurve, u: Point) -> float:
    # lowest curve height available left of u, minus u's height
    return lower.value(u[0]) - u[1]


def _segment_gap(lower: LowerBoundCurve, s: ParetoElement) -> float:
    lo_x, hi_x = lower.x_range
    a = max(s.x1, lo_x)
    if a > s.x2:
        return np.inf
    # both curves are linear between these abscissae
    xs = [a, s.x2] + [bx for bx, _ in lower.breakpoints if a < bx < s.x2]
    return min(lower.value(x) - s.y_at(x) for x in xs)


def separation_gap(lower: LowerBoundCurve, upper: BoundSet) -> float:
    """Smallest vertical gap between the curve's dominated region and the bound set.

    Positive means separable; zero or negative means some curve point weakly
    dominates some bound-set point.
    """
    gaps = [_point_gap(lower, u) for u in upper.nadir_points]
    gaps += [_segment_gap(lower, s) for s in upper.nadir_segments]
    return min(gaps, default=np.inf)


def is_separable(lower: LowerBoundCurve, upper: BoundSet) -> bool:
    """True if no point of ``lower`` weakly dominates any point of ``upper``.

    Touching counts as domination, so a node is only fathomed with room to
    spare.
    """
    return separation_gap(lower, upper) > EPS


def brute_force_separable(
    lower: LowerBoundCurve, upper: BoundSet, samples: int = 10_000, chunk: int = 2048
) -> bool:
    """Sampling oracle for :func:`is_separable`, used to cross-check it."""
    if samples < 2:
        raise ValueError("samples must be at least 2")
    if not upper:
        return True
    lo_x, hi_x = lower.x_range
    up = [np.asarray(upper.nadir_points, dtype=float).reshape(-1, 2)]
    curve_x = [np.linspace(lo_x, hi_x, samples), [p[0] for p in lower.breakpoints]]
    probe_x = [p[0] for p in lower.breakpoints]
    for s in upper.nadir_segments:
        xs = np.concatenate(
            [np.linspace(s.x1, s.x2, samples), [x for x in probe_x if s.x1 < x < s.x2]]
        )
        up.append(np.column_stack([xs, s.y1 + (s.y2 - s.y1) * (xs - s.x1) / (s.x2 - s.x1)]))
        curve_x.append([s.x1, s.x2])
    upper_pts = np.concatenate(up)
    curve_x.append(upper_pts[:, 0])
    cx = np.unique(np.clip(np.concatenate([np.asarray(c, dtype=float) for c in curve_x]), lo_x, hi_x))
    bx, by = np.array(lower.breakpoints).T
    cy = np.interp(cx, bx, by)
    for start in range(0, len(upper_pts), chunk):
        block = upper_pts[start : start + chunk]
        hit = (cx[None, :] <= block[:, :1] + EPS) & (cy[None, :] <= block[:, 1:] + EPS)
        if hit.any():
            return False
    return True
