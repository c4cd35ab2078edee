"""Dominance geometry for points and negative-slope segments in objective space.

Both objectives are minimized. Every element owns four regions of the plane:

* ``R1`` -- up and to the left (incomparable, routed to the left child),
* ``R2`` -- weakly dominated by the element (the element itself lives here),
* ``R3`` -- dominating some part of the element,
* ``R4`` -- down and to the right (incomparable, routed to the right child).

Each region contains its lower and left boundary but not its upper or right
boundary. All comparisons share the absolute tolerance :data:`EPS`.
"""
from __future__ import annotations

import enum
from typing import Iterable, NamedTuple, Optional

EPS = 1e-9


class DominatedPairFound(ValueError):
    """Raised when a collection that must be nondominated is not."""


class Kind(str, enum.Enum):
    POINT = "P"
    SEGMENT = "S"


class Region(enum.IntEnum):
    R1 = 1
    R2 = 2
    R3 = 3
    R4 = 4


class Dominance(enum.Enum):
    DOMINATES = "dominates"
    DOMINATED_BY = "dominated_by"
    PARTIAL_DOMINATES = "partial_dominates"
    PARTIALLY_DOMINATED_BY = "partially_dominated_by"
    INCOMPARABLE = "incomparable"


class ParetoElement(NamedTuple):
    """A point or a closed segment with strictly negative slope.

    ``(x1, y1)`` is the north-west end and ``(x2, y2)`` the south-east end; a
    point repeats its coordinates. Build instances with :func:`point`,
    :func:`segment` or :func:`make_element` rather than directly.
    """

    x1: float
    y1: float
    x2: float
    y2: float

    @property
    def kind(self) -> Kind:
        return Kind.POINT if self.x1 == self.x2 else Kind.SEGMENT

    @property
    def is_point(self) -> bool:
        return self.x1 == self.x2

    @property
    def nw(self) -> tuple[float, float]:
        return (self.x1, self.y1)

    @property
    def se(self) -> tuple[float, float]:
        return (self.x2, self.y2)

    def y_at(self, x: float) -> float:
        """Height of the supporting line at ``x`` (no clamping)."""
        if self.x1 == self.x2:
            return self.y1
        return self.y1 + (self.y2 - self.y1) * (x - self.x1) / (self.x2 - self.x1)

    def __repr__(self) -> str:
        if self.is_point:
            return f"point({self.x1!r}, {self.y1!r})"
        return f"segment({self.x1!r}, {self.y1!r}, {self.x2!r}, {self.y2!r})"


def point(x: float, y: float) -> ParetoElement:
    x, y = float(x), float(y)
    return ParetoElement(x, y, x, y)


def segment(x1: float, y1: float, x2: float, y2: float) -> ParetoElement:
    """A segment from its north-west to its south-east end.

    Raises ``ValueError`` unless ``x1 < x2`` and ``y1 > y2``.
    """
    if not (x1 < x2 and y1 > y2):
        raise ValueError(
            f"segment needs x1 < x2 and y1 > y2, got ({x1}, {y1})-({x2}, {y2})"
        )
    return ParetoElement(float(x1), float(y1), float(x2), float(y2))


def make_element(x1: float, y1: float, x2: float, y2: float) -> ParetoElement:
    """Build an element from arbitrary endpoints, trimming degenerate input.

    Endpoints may come in either order. A segment that is not strictly
    decreasing is replaced by its own nondominated subset: the left end of a
    horizontal segment, the bottom end of a vertical one, the south-west end
    of one with positive slope.
    """
    x1, y1, x2, y2 = float(x1), float(y1), float(x2), float(y2)
    if (x2, -y2) < (x1, -y1):
        x1, y1, x2, y2 = x2, y2, x1, y1
    if x1 < x2 and y1 > y2:
        return ParetoElement(x1, y1, x2, y2)
    if x1 == x2 and y1 == y2:
        return ParetoElement(x1, y1, x1, y1)
    # horizontal, vertical or positive slope: the south-west corner survives
    return ParetoElement(x1, min(y1, y2), x1, min(y1, y2))


def validate_element(e: ParetoElement) -> None:
    """Raise ``ValueError`` if ``e`` breaks the element invariants."""
    for v in e:
        if v != v or v in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite coordinate in {e!r}")
    if e.x1 == e.x2:
        if e.y1 != e.y2:
            raise ValueError(f"vertical segment {e!r}")
    elif not (e.x1 < e.x2 and e.y1 > e.y2):
        raise ValueError(f"segment without negative slope {e!r}")


# ---------------------------------------------------------------------------
# region membership


def _covers(d: ParetoElement, qx: float, qy: float) -> bool:
    """True if the point ``(qx, qy)`` is weakly dominated by ``d`` (lies in R2)."""
    dx1, dy1, dx2, dy2 = d
    if qx < dx1 - EPS:
        return False
    if qx >= dx2:
        return qy >= dy2 - EPS
    if qx <= dx1:
        return qy >= dy1 - EPS
    return qy >= dy1 + (dy2 - dy1) * (qx - dx1) / (dx2 - dx1) - EPS


def dominated_region_contains(dominator: ParetoElement, q: tuple[float, float]) -> bool:
    """True iff some point of ``dominator`` is componentwise <= ``q``."""
    return _covers(dominator, q[0], q[1])


def _region(base: ParetoElement, qx: float, qy: float) -> Region:
    if _covers(base, qx, qy):
        return Region.R2
    bx1, by1, bx2, by2 = base
    if qx < bx1 and qy >= by1 - EPS:
        return Region.R1
    if qx >= bx2 - EPS and qy < by2:
        return Region.R4
    return Region.R3


def region_of(base: ParetoElement, q: tuple[float, float]) -> Region:
    """The unique region of ``q`` relative to ``base``."""
    return _region(base, q[0], q[1])


# ---------------------------------------------------------------------------
# clipping


def _scale(t: ParetoElement) -> float:
    # converts an x-extent on t into an upper bound on its length in either axis
    slope = (t.y1 - t.y2) / (t.x2 - t.x1)
    return slope if slope > 1.0 else 1.0


def _sub(t: ParetoElement, a: float, b: float) -> ParetoElement:
    """The piece of segment ``t`` over ``[a, b]``."""
    tx1, ty1, tx2, ty2 = t
    if a <= tx1 and b >= tx2:
        return t
    s = (ty2 - ty1) / (tx2 - tx1)
    if a <= tx1:
        a, ya = tx1, ty1
    else:
        ya = ty1 + s * (a - tx1)
    if b >= tx2:
        b, yb = tx2, ty2
    else:
        yb = ty1 + s * (b - tx1)
    if b - a <= 0.0 or ya <= yb:
        return ParetoElement(a, ya, a, ya)
    return ParetoElement(a, ya, b, yb)


def dominated_span(t: ParetoElement, d: ParetoElement) -> Optional[tuple[float, float]]:
    """The x-interval of segment ``t`` lying in R2 of ``d``, or ``None``.

    Computed without tolerance; ``lo <= hi`` always holds for a returned span.
    """
    tx1, ty1, tx2, ty2 = t
    dx1, dy1, dx2, dy2 = d
    s = (ty2 - ty1) / (tx2 - tx1)
    # right of d's south-east corner: t must still be at or above dy2
    lo = dx2
    hi = tx1 + (dy2 - ty1) / s
    if hi < lo:
        lo, hi = float("inf"), float("-inf")
    if dx1 < dx2:
        # over d's own x-range: t on or above d's supporting line
        sd = (dy2 - dy1) / (dx2 - dx1)
        c0 = ty1 + s * (dx1 - tx1) - dy1
        k = s - sd
        if k > 0.0:
            a, b = max(dx1, dx1 - c0 / k), dx2
        elif k < 0.0:
            a, b = dx1, min(dx2, dx1 - c0 / k)
        elif c0 >= 0.0:
            a, b = dx1, dx2
        else:
            a, b = 1.0, 0.0
        if a <= b:
            lo = min(lo, a)
            hi = max(hi, b)
    lo = max(lo, tx1)
    hi = min(hi, tx2)
    if lo > hi:
        return None
    return lo, hi


def _clip(t: ParetoElement, d: ParetoElement) -> tuple[ParetoElement, ...]:
    """Pieces of ``t`` outside R2 of ``d``; returns ``(t,)`` itself when untouched."""
    tx1, ty1, tx2, ty2 = t
    if tx2 < d[0] - EPS or ty1 < d[3] - EPS:
        return (t,)
    if tx1 == tx2:
        return () if _covers(d, tx1, ty1) else (t,)
    span = dominated_span(t, d)
    if span is None:
        return (t,)
    lo, hi = span
    sc = _scale(t)
    keep_left = (lo - tx1) * sc > EPS
    keep_right = (tx2 - hi) * sc > EPS
    if (hi - lo) * sc <= EPS and (keep_left or keep_right):
        # touches at a single point; the closed element survives intact
        return (t,)
    if keep_left and keep_right:
        return (_sub(t, tx1, lo), _sub(t, hi, tx2))
    if keep_left:
        return (_sub(t, tx1, lo),)
    if keep_right:
        return (_sub(t, hi, tx2),)
    return ()


def _within(t: ParetoElement, d: ParetoElement) -> bool:
    """True if all of ``t`` lies in R2 of ``d``."""
    if t[0] == t[2]:
        return _covers(d, t[0], t[1])
    return not _clip(t, d)


class ClipResult(NamedTuple):
    pieces: list[ParetoElement]
    was_split: bool


def clip(target: ParetoElement, dominator: ParetoElement) -> ClipResult:
    """Remove from ``target`` everything weakly dominated by ``dominator``.

    Residual pieces are returned closed, so the endpoint created by a cut may
    itself be weakly dominated. Pieces shorter than :data:`EPS` are dropped.
    """
    pieces = _clip(target, dominator)
    return ClipResult(list(pieces), len(pieces) == 2)


def _restrict_r1(t: ParetoElement, b: ParetoElement) -> Optional[ParetoElement]:
    tx1, ty1, tx2, ty2 = t
    bx1, by1 = b[0], b[1]
    if tx1 == tx2:
        return t if _region(b, tx1, ty1) is Region.R1 else None
    if tx1 >= bx1 or ty1 < by1 - EPS:
        return None
    # x where t drops to height by1
    hi = tx1 + (by1 - ty1) * (tx2 - tx1) / (ty2 - ty1)
    if hi > bx1:
        hi = bx1
    if hi >= tx2:
        return t
    if (hi - tx1) * _scale(t) <= EPS:
        return None
    return _sub(t, tx1, hi)


def _restrict_r4(t: ParetoElement, b: ParetoElement) -> Optional[ParetoElement]:
    tx1, ty1, tx2, ty2 = t
    bx2, by2 = b[2], b[3]
    if tx1 == tx2:
        return t if _region(b, tx1, ty1) is Region.R4 else None
    if ty2 >= by2 or tx2 < bx2 - EPS:
        return None
    # x where t drops to height by2
    lo = tx1 + (by2 - ty1) * (tx2 - tx1) / (ty2 - ty1)
    if lo < bx2:
        lo = bx2
    if lo <= tx1:
        return t
    if (tx2 - lo) * _scale(t) <= EPS:
        return None
    return _sub(t, lo, tx2)


def restrict_to_region(
    target: ParetoElement, base: ParetoElement, r: Region
) -> Optional[ParetoElement]:
    """The maximal closed portion of ``target`` inside R1 or R4 of ``base``."""
    if r is Region.R1:
        return _restrict_r1(target, base)
    if r is Region.R4:
        return _restrict_r4(target, base)
    raise ValueError(f"only R1 and R4 can be restricted to, got {r!r}")


def compare(a: ParetoElement, b: ParetoElement) -> Dominance:
    """Classify how ``a`` and ``b`` relate under weak dominance.

    Identical elements weakly dominate each other; ``DOMINATES`` is reported.
    """
    if _within(b, a):
        return Dominance.DOMINATES
    if _within(a, b):
        return Dominance.DOMINATED_BY
    if _clip(b, a)[0] is not b:
        return Dominance.PARTIAL_DOMINATES
    if _clip(a, b)[0] is not a:
        return Dominance.PARTIALLY_DOMINATED_BY
    return Dominance.INCOMPARABLE


# ---------------------------------------------------------------------------
# canonical form


def sort_key(e: ParetoElement) -> tuple[float, float, float]:
    # a point sharing a segment's north-west end sorts first
    return (e.x1, -e.y1, e.x2)


def check_chain(elements: list[ParetoElement], tol: float = EPS) -> None:
    """Raise :class:`DominatedPairFound` unless x-sorted ``elements`` form a
    nondominated staircase (shared endpoints allowed)."""
    for prev, nxt in zip(elements, elements[1:]):
        if nxt.x1 < prev.x2 - tol or nxt.y1 > prev.y2 + tol:
            raise DominatedPairFound(f"{prev!r} and {nxt!r} are not mutually nondominated")


def _collinear(a: ParetoElement, b: ParetoElement, tol: float) -> bool:
    sa = (a.y2 - a.y1) / (a.x2 - a.x1)
    sb = (b.y2 - b.y1) / (b.x2 - b.x1)
    return abs(sa - sb) <= 1e-9 * max(1.0, abs(sa), abs(sb))


def canonicalize(elements: Iterable[ParetoElement], tol: float = EPS) -> list[ParetoElement]:
    """Deterministic canonical form of a nondominated collection.

    Sorts by north-west x, collapses zero-length segments, drops points that
    coincide with a neighbour's endpoint and merges touching collinear
    segments. Raises :class:`DominatedPairFound` on a dominated pair.
    """
    items = []
    for e in elements:
        if e.x1 != e.x2 and (e.x2 - e.x1) <= tol and (e.y1 - e.y2) <= tol:
            e = ParetoElement(e.x1, e.y1, e.x1, e.y1)
        items.append(e)
    items.sort(key=sort_key)
    check_chain(items, tol)

    def same(p: tuple[float, float], q: tuple[float, float]) -> bool:
        return abs(p[0] - q[0]) <= tol and abs(p[1] - q[1]) <= tol

    out: list[ParetoElement] = []
    for e in items:
        if out:
            prev = out[-1]
            if e.is_point and same(prev.se, e.nw):
                continue
            if prev.is_point and same(prev.nw, e.nw):
                out[-1] = e
                continue
            if (
                not prev.is_point
                and not e.is_point
                and same(prev.se, e.nw)
                and _collinear(prev, e, tol)
            ):
                out[-1] = ParetoElement(prev.x1, prev.y1, e.x2, e.y2)
                continue
        out.append(e)
    return out


def same_sets(a: list[ParetoElement], b: list[ParetoElement], tol: float = 1e-7) -> bool:
    """Element-for-element equality of two canonical lists within ``tol``."""
    if len(a) != len(b):
        return False
    return all(abs(u - v) <= tol for ea, eb in zip(a, b) for u, v in zip(ea, eb))
