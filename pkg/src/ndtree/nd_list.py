"""Unordered list baseline: every insert is compared with every stored item."""
from __future__ import annotations

from .geometry import EPS, ParetoElement, canonicalize, clip
from .tree import InsertReport


class NdList:
    """Nondominated store kept as a plain list.

    Slow by design: it serves as the reference the tree is checked against
    and as the timing baseline. All dominance decisions go through
    :func:`ndtree.geometry.clip`, so tolerance behaviour matches the tree.
    """

    def __init__(self) -> None:
        self.items: list[ParetoElement] = []
        self.insert_count = 0

    def __len__(self) -> int:
        return len(self.items)

    @property
    def node_count(self) -> int:
        return len(self.items)

    def insert(self, elem: ParetoElement) -> InsertReport:
        self.insert_count += 1
        pieces = [elem]
        ex1, ey1, ex2, ey2 = elem
        kept: list[ParetoElement] = []
        for s in self.items:
            if not pieces:
                kept.append(s)
                continue
            sx1, sy1, sx2, sy2 = s
            # neither s nor the pieces reach into the other's dominated region
            if (ex2 < sx1 - EPS or ey1 < sy2 - EPS) and (sx2 < ex1 - EPS or sy1 < ey2 - EPS):
                kept.append(s)
                continue
            nxt: list[ParetoElement] = []
            for p in pieces:
                nxt.extend(clip(p, s).pieces)
            if nxt != pieces:
                pieces = nxt
                if pieces:
                    ex1, ey1 = pieces[0][0], pieces[0][1]
                    ex2, ey2 = pieces[-1][2], pieces[-1][3]
            rest = [s]
            for p in pieces:
                rest = [q for r in rest for q in clip(r, p).pieces]
            kept.extend(rest)
        kept.extend(pieces)
        self.items = kept
        return InsertReport(bool(pieces), len(pieces))

    def elements(self) -> list[ParetoElement]:
        return list(self.items)

    def nondominated_set(self) -> list[ParetoElement]:
        return canonicalize(self.items)
