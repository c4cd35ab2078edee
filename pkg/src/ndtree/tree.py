"""Self-balancing binary tree holding a nondominated set of points and segments.

Each node stores one element. Everything in a node's left subtree lies in the
node's R1 (up-left) and everything in its right subtree lies in its R4
(down-right), so an in-order walk lists the stored set from north-west to
south-east. Insertion filters dominance on the way down; rebalancing follows
a weight criterion controlled by ``delta``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional

from .geometry import (
    EPS,
    DominatedPairFound,
    ParetoElement,
    Region,
    _clip,
    _covers,
    _restrict_r1,
    _restrict_r4,
    _within,
    canonicalize,
    check_chain,
    sort_key,
)


class Mode(str, enum.Enum):
    """When the balance criterion is enforced."""

    A0 = "a0"  # never
    A1 = "a1"  # whole tree, before every top-level insert
    A2 = "a2"  # whole tree, whenever the node count has grown enough
    A3 = "a3"  # at each node an insert passes through
    A4 = "a4"  # A2 and A3 together


_DEFAULT_GROWTH = {Mode.A2: 1.01, Mode.A4: 8.0}


@dataclass
class RebalancePolicy:
    """Rebalancing schedule.

    ``growth_ratio`` only matters for the periodic modes: after a periodic
    rebalance at ``c`` nodes, the next one fires once the tree holds at least
    ``growth_ratio * c`` nodes. The first fires at ``initial_trigger`` nodes.
    """

    mode: Mode = Mode.A0
    delta: float = 0.3
    initial_trigger: int = 100
    growth_ratio: Optional[float] = None

    def __post_init__(self) -> None:
        self.mode = Mode(self.mode)
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if self.initial_trigger < 1:
            raise ValueError("initial_trigger must be positive")
        if self.growth_ratio is None:
            self.growth_ratio = _DEFAULT_GROWTH.get(self.mode, 2.01)
        if self.growth_ratio <= 1.0:
            raise ValueError("growth_ratio must exceed 1")

    @property
    def periodic(self) -> bool:
        return self.mode in (Mode.A2, Mode.A4)

    @property
    def per_node(self) -> bool:
        return self.mode in (Mode.A3, Mode.A4)


class Node:
    __slots__ = ("elem", "parent", "left", "right", "size", "ideal_left", "ideal_right", "dirty")

    def __init__(self, elem: ParetoElement, parent: Optional[Node] = None) -> None:
        self.elem = elem
        self.parent = parent
        self.left: Optional[Node] = None
        self.right: Optional[Node] = None
        self.size = 1
        self.ideal_left: Optional[tuple[float, float]] = None
        self.ideal_right: Optional[tuple[float, float]] = None
        # subtree changed since it last satisfied the balance criterion;
        # if a node is dirty so are all of its ancestors
        self.dirty = True

    def __repr__(self) -> str:
        return f"Node({self.elem!r}, size={self.size})"


class InsertReport(NamedTuple):
    added_any: bool
    pieces_added: int


class NodeNotInTree(LookupError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str  # SizeMismatch, Property1, DominatedPair, IdealMismatch, BadLink
    node: Optional[ParetoElement]
    detail: str = ""


def _size(n: Optional[Node]) -> int:
    return n.size if n is not None else 0


@dataclass
class RemovalStats:
    removals: int = 0
    max_visits: int = 0
    over_depth: int = 0  # removals that visited more nodes than the tree depth
    last_visits: int = 0
    check_depth: bool = False


class NdTree:
    """Nondominated store backed by a weight-balanced binary tree.

    >>> from ndtree.geometry import point, segment
    >>> t = NdTree()
    >>> t.insert(segment(6, 16, 7, 10)).added_any
    True
    >>> t.insert(point(5, 11)).pieces_added
    1
    >>> t.stats()
    (2, 2)
    """

    def __init__(
        self,
        policy: Optional[RebalancePolicy] = None,
        subtree_prune_enabled: bool = False,
    ) -> None:
        self.root: Optional[Node] = None
        self.policy = policy if policy is not None else RebalancePolicy()
        self.prune = subtree_prune_enabled
        self.insert_count = 0
        self.last_periodic_count: Optional[int] = None
        self.removal_stats = RemovalStats()
        limit = 1.0 / (2.0 - self.policy.delta)
        self._ratio = limit
        self._rot_ratio = (1.0 - self.policy.delta) * limit

    # ------------------------------------------------------------------
    # queries

    @property
    def subtree_prune_enabled(self) -> bool:
        return self.prune

    @property
    def node_count(self) -> int:
        return _size(self.root)

    def __len__(self) -> int:
        return _size(self.root)

    def depth(self) -> int:
        best = 0
        stack = [(self.root, 1)] if self.root is not None else []
        while stack:
            n, d = stack.pop()
            if d > best:
                best = d
            if n.left is not None:
                stack.append((n.left, d + 1))
            if n.right is not None:
                stack.append((n.right, d + 1))
        return best

    def stats(self) -> tuple[int, int]:
        """``(node_count, depth)``, depth counted in nodes."""
        return _size(self.root), self.depth()

    def nodes(self) -> Iterator[Node]:
        """Nodes in order, north-west to south-east."""
        stack: list[Node] = []
        n = self.root
        while stack or n is not None:
            while n is not None:
                stack.append(n)
                n = n.left
            n = stack.pop()
            yield n
            n = n.right

    def elements(self) -> list[ParetoElement]:
        return [n.elem for n in self.nodes()]

    def nondominated_set(self) -> list[ParetoElement]:
        return canonicalize(self.elements())

    # ------------------------------------------------------------------
    # bookkeeping

    def _refresh(self, n: Node) -> None:
        """Recompute ``n``'s size and ideal points from its children."""
        l, r = n.left, n.right
        n.size = 1 + (l.size if l is not None else 0) + (r.size if r is not None else 0)
        if self.prune:
            e = n.elem
            n.ideal_left = (l.ideal_left[0] if l is not None else e.x1, e.y1)
            n.ideal_right = (e.x2, r.ideal_right[1] if r is not None else e.y2)

    def _fix_up(self, n: Optional[Node]) -> None:
        """Refresh ``n`` and all its ancestors, marking them dirty."""
        while n is not None:
            self._refresh(n)
            n.dirty = True
            n = n.parent

    def _mark_up(self, n: Optional[Node]) -> None:
        while n is not None and not n.dirty:
            n.dirty = True
            n = n.parent

    def _child(self, parent: Optional[Node], left: bool) -> Optional[Node]:
        if parent is None:
            return self.root
        return parent.left if left else parent.right

    def _set_child(self, parent: Optional[Node], left: bool, n: Optional[Node]) -> None:
        if parent is None:
            self.root = n
        elif left:
            parent.left = n
        else:
            parent.right = n
        if n is not None:
            n.parent = parent

    def _replace(self, n: Node, elem: ParetoElement) -> None:
        n.elem = elem
        if self.prune:
            self._fix_up(n)

    # ------------------------------------------------------------------
    # insertion

    def insert(self, elem: ParetoElement) -> InsertReport:
        """Insert ``elem``, keeping only what no stored element dominates and
        evicting whatever ``elem`` dominates."""
        self.insert_count += 1
        pol = self.policy
        if pol.periodic:
            count = _size(self.root)
            last = self.last_periodic_count
            if (last is None and count >= pol.initial_trigger) or (
                last is not None and count >= pol.growth_ratio * last
            ):
                self.rebalance_full()
                self.last_periodic_count = count
        elif pol.mode is Mode.A1 and self.root is not None:
            self.rebalance_full()
        added = self._insert_from(elem, None, True)
        return InsertReport(added > 0, added)

    def _insert_from(self, elem: ParetoElement, parent: Optional[Node], left: bool) -> int:
        per_node = self.policy.per_node
        added = 0
        work = [(elem, parent, left)]
        while work:
            e, par, go_left = work.pop()
            ex1, ey1, ex2, ey2 = e
            while True:
                node = self.root if par is None else (par.left if go_left else par.right)
                if node is None:
                    n = Node(e, par)
                    self._set_child(par, go_left, n)
                    self._fix_up(n)
                    added += 1
                    break
                if per_node and node.size > 2:
                    self._balance_at(node, mark_ancestors=True)
                ne = node.elem
                # wholly up-left or down-right of this node: just descend
                if ex2 < ne[0] - EPS and ey2 > ne[1] + EPS:
                    par, go_left = node, True
                    continue
                if ex1 > ne[2] + EPS and ey1 < ne[3] - EPS:
                    par, go_left = node, False
                    continue
                if ex1 >= ne[0] - EPS and ey2 >= ne[3] - EPS and _within(e, ne):
                    break
                pieces = _clip(ne, e)
                if not pieces:
                    if self.prune:
                        self._prune_children(node, e)
                    self.remove_node(node)
                    continue
                if len(pieces) == 2:
                    self._split(node, pieces[0], pieces[1])
                elif pieces[0] is not ne:
                    self._replace(node, pieces[0])
                ne = node.elem
                if ey2 < ne[3] and ex2 >= ne[2] - EPS:
                    part = _restrict_r4(e, ne)
                    if part is not None:
                        work.append((part, node, False))
                if ex1 < ne[0] and ey1 >= ne[1] - EPS:
                    part = _restrict_r1(e, ne)
                    if part is not None:
                        work.append((part, node, True))
                break
        return added

    def _split(self, node: Node, nw_piece: ParetoElement, se_piece: ParetoElement) -> None:
        node.elem = nw_piece
        twin = Node(se_piece, node)
        twin.right = node.right
        if twin.right is not None:
            twin.right.parent = twin
        node.right = twin
        self._fix_up(twin)

    def _prune_children(self, node: Node, e: ParetoElement) -> None:
        """Drop whole subtrees of ``node`` whose ideal point ``e`` dominates."""
        changed = False
        if node.left is not None and _covers(e, *node.ideal_left):
            node.left.parent = None
            node.left = None
            changed = True
        if node.right is not None and _covers(e, *node.ideal_right):
            node.right.parent = None
            node.right = None
            changed = True
        if changed:
            self._fix_up(node)

    # ------------------------------------------------------------------
    # removal

    def remove_node(self, node: Node) -> None:
        """Delete ``node``'s element, pulling a replacement up from the larger
        side. Only a single root-to-leaf path is touched."""
        stats = self.removal_stats
        if stats.check_depth:
            depth_before = self.depth()
        top = node
        while top.parent is not None:
            top = top.parent
        if top is not self.root:
            raise NodeNotInTree(repr(node))
        visits = 1
        cur = node
        while cur.left is not None or cur.right is not None:
            if _size(cur.left) > _size(cur.right):
                rep = cur.left
                visits += 1
                while rep.right is not None:
                    rep = rep.right
                    visits += 1
            else:
                rep = cur.right
                visits += 1
                while rep.left is not None:
                    rep = rep.left
                    visits += 1
            cur.elem = rep.elem
            cur = rep
        par = cur.parent
        if par is None:
            self.root = None
        elif par.left is cur:
            par.left = None
        else:
            par.right = None
        cur.parent = None
        self._fix_up(par)
        stats.removals += 1
        stats.last_visits = visits
        if visits > stats.max_visits:
            stats.max_visits = visits
        if stats.check_depth and visits > depth_before:
            stats.over_depth += 1

    # ------------------------------------------------------------------
    # rebalancing

    def _limit(self, size: int) -> int:
        return math.floor(size * self._ratio)

    def criterion_holds(self, n: Node) -> bool:
        if n.size <= 2:
            return True
        lim = self._limit(n.size)
        return _size(n.left) <= lim and _size(n.right) <= lim

    def rebalance_full(self) -> None:
        """Enforce the balance criterion at every node.

        Children are balanced before their parent. When fixing a node moves
        elements into its children, those children are balanced again, so the
        criterion holds everywhere on return. Subtrees untouched since they
        were last balanced are skipped; the result equals a full pass.
        """
        if self.root is not None:
            self._rebalance_from(self.root)

    def _rebalance_from(self, top: Node) -> None:
        stack: list[tuple[Node, bool]] = [(top, False)]
        while stack:
            n, children_done = stack.pop()
            if not children_done:
                if not n.dirty:
                    continue
                if n.size <= 2:
                    self._clear_small(n)
                    continue
                stack.append((n, True))
                for c in (n.right, n.left):
                    if c is not None:
                        stack.append((c, False))
                continue
            n.dirty = False
            if self._balance_at(n, mark_ancestors=False):
                n.dirty = False
                for c in (n.right, n.left):
                    if c is not None and c.dirty:
                        stack.append((c, False))

    @staticmethod
    def _clear_small(n: Node) -> None:
        n.dirty = False
        for c in (n.left, n.right):
            if c is not None:
                c.dirty = False
                for g in (c.left, c.right):
                    if g is not None:
                        g.dirty = False

    def _balance_at(self, n: Node, mark_ancestors: bool) -> bool:
        """Fix the criterion at ``n`` alone. Returns True if anything moved."""
        moved = False
        for _ in range(64):
            size = n.size
            lim = self._limit(size)
            ls, rs = _size(n.left), _size(n.right)
            if ls > lim:
                if _size(n.left.left) >= self._rot_ratio * size - 1:
                    self._rotate_right(n)
                else:
                    while _size(n.left) > lim:
                        self._shift_right(n)
            elif rs > lim:
                if _size(n.right.right) >= self._rot_ratio * size - 1:
                    self._rotate_left(n)
                else:
                    while _size(n.right) > lim:
                        self._shift_left(n)
            else:
                break
            moved = True
        if moved:
            n.dirty = True
            if mark_ancestors:
                self._mark_up(n.parent)
        return moved

    def _rotate_left(self, p: Node) -> None:
        # p keeps its place in the tree; payloads move instead
        r = p.right
        p.elem, r.elem = r.elem, p.elem
        a, b, c = p.left, r.left, r.right
        r.left, r.right = a, b
        if a is not None:
            a.parent = r
        p.left, p.right = r, c
        if c is not None:
            c.parent = p
        self._refresh(r)
        r.dirty = True
        self._refresh(p)

    def _rotate_right(self, p: Node) -> None:
        l = p.left
        p.elem, l.elem = l.elem, p.elem
        a, b, c = l.left, l.right, p.right
        l.left, l.right = b, c
        if c is not None:
            c.parent = l
        p.left, p.right = a, l
        if a is not None:
            a.parent = p
        self._refresh(l)
        l.dirty = True
        self._refresh(p)

    def _refresh_between(self, n: Optional[Node], stop: Node) -> None:
        while n is not None and n is not stop:
            self._refresh(n)
            n.dirty = True
            n = n.parent

    def _shift_left(self, p: Node) -> None:
        """Move one element from the right subtree of ``p`` to its left."""
        m = p.right
        while m.left is not None:
            m = m.left
        mp = m.parent
        if mp.left is m:
            mp.left = m.right
        else:
            mp.right = m.right
        if m.right is not None:
            m.right.parent = mp
        self._refresh_between(mp, p)
        old = p.elem
        p.elem = m.elem
        m.elem, m.left, m.right, m.size = old, None, None, 1
        m.dirty = True
        if p.left is None:
            p.left = m
            m.parent = p
        else:
            q = p.left
            while q.right is not None:
                q = q.right
            q.right = m
            m.parent = q
        self._refresh(m)
        self._refresh_between(m.parent, p)
        self._refresh(p)

    def _shift_right(self, p: Node) -> None:
        """Move one element from the left subtree of ``p`` to its right."""
        m = p.left
        while m.right is not None:
            m = m.right
        mp = m.parent
        if mp.right is m:
            mp.right = m.left
        else:
            mp.left = m.left
        if m.left is not None:
            m.left.parent = mp
        self._refresh_between(mp, p)
        old = p.elem
        p.elem = m.elem
        m.elem, m.left, m.right, m.size = old, None, None, 1
        m.dirty = True
        if p.right is None:
            p.right = m
            m.parent = p
        else:
            q = p.right
            while q.left is not None:
                q = q.left
            q.left = m
            m.parent = q
        self._refresh(m)
        self._refresh_between(m.parent, p)
        self._refresh(p)

    # ------------------------------------------------------------------
    # checking

    def balance_violations(self) -> list[Node]:
        """Nodes of size > 2 where the balance criterion fails."""
        return [n for n in self.nodes() if not self.criterion_holds(n)]

    def validate(self, tol: float = 1e-7) -> list[Violation]:
        """Structural self-check; an empty list means the tree is healthy."""
        out: list[Violation] = []
        for n in self.nodes():
            e = n.elem
            for c in (n.left, n.right):
                if c is not None and c.parent is not n:
                    out.append(Violation("BadLink", e, "child's parent link is wrong"))
            if n.size != 1 + _size(n.left) + _size(n.right):
                out.append(Violation("SizeMismatch", e, f"size field {n.size}"))
            # every ancestor must see this element in its R1 (left) or R4 (right)
            child, anc = n, n.parent
            while anc is not None:
                a = anc.elem
                if anc.left is child:
                    bad = e.x2 > a.x1 + tol or e.y2 < a.y1 - tol
                    side = "R1"
                else:
                    bad = e.x1 < a.x2 - tol or e.y1 > a.y2 + tol
                    side = "R4"
                if bad:
                    out.append(Violation("Property1", e, f"not in {side} of ancestor {a!r}"))
                child, anc = anc, anc.parent
            if self.prune:
                lx = n.left.ideal_left[0] if n.left is not None else e.x1
                ry = n.right.ideal_right[1] if n.right is not None else e.y2
                leftmost = n
                while leftmost.left is not None:
                    leftmost = leftmost.left
                rightmost = n
                while rightmost.right is not None:
                    rightmost = rightmost.right
                want_l = (leftmost.elem.x1, e.y1)
                want_r = (e.x2, rightmost.elem.y2)
                if n.ideal_left != want_l or n.ideal_right != want_r or lx != want_l[0] or ry != want_r[1]:
                    out.append(Violation("IdealMismatch", e, f"{n.ideal_left} {n.ideal_right}"))
        elems = sorted(self.elements(), key=sort_key)
        try:
            check_chain(elems, tol)
        except DominatedPairFound as exc:
            out.append(Violation("DominatedPair", None, str(exc)))
        return out


__all__ = [
    "InsertReport",
    "Mode",
    "NdTree",
    "Node",
    "NodeNotInTree",
    "RebalancePolicy",
    "Region",
    "Violation",
]
