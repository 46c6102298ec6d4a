"""PQ-tree over a fixed universe of indices.

The tree encodes exactly the permutations of the universe under which every
accepted set is contiguous: children of a P-node may be permuted freely,
children of a Q-node may only be reversed as a block.  `reduce` intersects
the represented order set with the orders making one more set contiguous,
using the classic template rewriting (P1-P6, Q1-Q3) applied bottom-up over
the pertinent subtree.

Nodes live in an arena of parallel lists indexed by node id, which keeps
copies cheap (a snapshot per reduction attempt, so a failed reduction never
corrupts the tree).
"""

from __future__ import annotations

from itertools import permutations, product
from typing import Iterable

LEAF, PNODE, QNODE, DEAD = 0, 1, 2, 3

_EMPTY, _FULL, _PARTIAL = 0, 1, 2


class PQTree:
    __slots__ = ("n", "kind", "children", "parent", "element", "leaf_at", "root", "version", "cache")

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("universe must contain at least one element")
        self.n = n
        self.version = 0
        self.cache: dict = {}  # derived layout data, rebound (not cleared) on mutation
        self.kind: list[int] = []
        self.children: list[list[int]] = []
        self.parent: list[int] = []
        self.element: list[int] = []
        self.leaf_at: list[int] = [-1] * n
        leaves = [self._new_leaf(u) for u in range(n)]
        if n == 1:
            self.root = leaves[0]
        else:
            self.root = self._new(PNODE)
            self._set_children(self.root, leaves)

    @classmethod
    def universal(cls, n: int) -> "PQTree":
        """Tree admitting all n! orders: a single P-node (or lone leaf)."""
        return cls(n)

    # -- arena plumbing --------------------------------------------------

    def _new(self, kind: int) -> int:
        self.kind.append(kind)
        self.children.append([])
        self.parent.append(-1)
        self.element.append(-1)
        return len(self.kind) - 1

    def _new_leaf(self, u: int) -> int:
        v = self._new(LEAF)
        self.element[v] = u
        self.leaf_at[u] = v
        return v

    def _set_children(self, v: int, ids: Iterable[int]) -> None:
        ids = list(ids)
        self.children[v] = ids
        for c in ids:
            self.parent[c] = v

    def _free(self, v: int) -> None:
        self.kind[v] = DEAD
        self.children[v] = []

    def _group(self, ids: list[int]) -> int:
        """Wrap ids under a fresh P-node; a single id is returned as-is."""
        if len(ids) == 1:
            return ids[0]
        g = self._new(PNODE)
        self._set_children(g, ids)
        return g

    def _absorb(self, v: int, c: int) -> None:
        """Replace v's contents by its descendant c (splice)."""
        self.kind[v] = self.kind[c]
        self.element[v] = self.element[c]
        if self.kind[c] == LEAF:
            self.children[v] = []
            self.leaf_at[self.element[c]] = v
        else:
            self._set_children(v, self.children[c])
        self._free(c)

    def copy(self) -> "PQTree":
        t = PQTree.__new__(PQTree)
        t.n = self.n
        t.version = self.version
        t.cache = self.cache  # shared: mutation rebinds rather than clears
        t.kind = list(self.kind)
        t.children = [list(c) for c in self.children]
        t.parent = list(self.parent)
        t.element = list(self.element)
        t.leaf_at = list(self.leaf_at)
        t.root = self.root
        return t

    # -- queries ----------------------------------------------------------

    def frontier(self) -> tuple[int, ...]:
        """Left-to-right leaf order of the tree as stored."""
        out = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            if self.kind[v] == LEAF:
                out.append(self.element[v])
            else:
                stack.extend(reversed(self.children[v]))
        return tuple(out)

    def admits(self, s: Iterable[int]) -> bool:
        """True iff some admitted order keeps s contiguous (tree untouched)."""
        s = self._checked(s)
        if len(s) <= 1 or len(s) == self.n:
            return True
        return self.copy()._reduce_inplace(s)

    def reduce(self, s: Iterable[int]) -> bool:
        """Constrain the tree so s must be contiguous.

        Returns False (tree unchanged) when no admitted order keeps s
        contiguous.  Reducing by the empty set is a documented no-op.
        """
        s = self._checked(s)
        if not s:
            return True
        work = self.copy()
        if not work._reduce_inplace(s):
            return False
        self.kind = work.kind
        self.children = work.children
        self.parent = work.parent
        self.element = work.element
        self.leaf_at = work.leaf_at
        self.root = work.root
        self.version += 1
        self.cache = {}
        return True

    def _checked(self, s: Iterable[int]) -> frozenset:
        s = frozenset(int(u) for u in s)
        for u in s:
            if not 0 <= u < self.n:
                raise ValueError(f"element {u} outside universe of size {self.n}")
        return s

    # -- reduction --------------------------------------------------------

    def _reduce_inplace(self, s: frozenset) -> bool:
        size = len(s)
        # bubble: pertinent-leaf counts on all ancestors of s-leaves
        count: dict[int, int] = {}
        for u in s:
            v = self.leaf_at[u]
            while v != -1:
                count[v] = count.get(v, 0) + 1
                v = self.parent[v]
        # pertinent root: deepest node whose subtree holds all of s
        pert_root = self.leaf_at[next(iter(s))]
        while count[pert_root] < size:
            pert_root = self.parent[pert_root]
        pert = {pert_root}
        for u in s:
            v = self.leaf_at[u]
            while v not in pert:
                pert.add(v)
                v = self.parent[v]
        pending = dict.fromkeys(pert, 0)
        for v in pert:
            if v != pert_root:
                pending[self.parent[v]] += 1
        labels: dict[int, int] = {}
        queue = [v for v in pert if pending[v] == 0]
        while queue:
            v = queue.pop()
            if v == pert_root:
                if not self._apply_root(v, labels):
                    return False
                self._canonicalize()
                return True
            lab = self._apply_nonroot(v, labels)
            if lab is None:
                return False
            labels[v] = lab
            p = self.parent[v]
            pending[p] -= 1
            if pending[p] == 0:
                queue.append(p)
        raise AssertionError("pertinent root never became ready")

    def _split(self, v: int, labels):
        em, fu, pa = [], [], []
        for c in self.children[v]:
            lab = labels.get(c, _EMPTY)
            (em if lab == _EMPTY else fu if lab == _FULL else pa).append(c)
        return em, fu, pa

    def _apply_nonroot(self, v: int, labels) -> int | None:
        """Apply a template at a non-root pertinent node.

        Returns the node's label, or None when no template matches.  A
        PARTIAL node is always left as a Q-node whose children run from
        empty to full, so parents can assemble without re-checking sides.
        """
        if self.kind[v] == LEAF:
            return _FULL
        em, fu, pa = self._split(v, labels)
        if not em and not pa:
            return _FULL  # P1 / Q1
        if self.kind[v] == PNODE:
            if len(pa) == 0:  # P3
                self.kind[v] = QNODE
                self._set_children(v, [self._group(em), self._group(fu)])
                return _PARTIAL
            if len(pa) == 1:  # P5
                q = pa[0]
                mid = list(self.children[q])
                new = ([self._group(em)] if em else []) + mid + ([self._group(fu)] if fu else [])
                self._free(q)
                self.kind[v] = QNODE
                self._set_children(v, new)
                return _PARTIAL
            return None
        # Q-node: children must read empty* partial? full* in some direction (Q2)
        if len(pa) > 1:
            return None
        seq = [labels.get(c, _EMPTY) for c in self.children[v]]
        if not _matches_q2(seq):
            if not _matches_q2(seq[::-1]):
                return None
            self.children[v].reverse()
        em2, fu2, pa2 = self._split(v, labels)
        if pa2:
            q = pa2[0]
            idx = self.children[v].index(q)
            inline = list(self.children[q])
            self._free(q)
            self._set_children(v, self.children[v][:idx] + inline + self.children[v][idx + 1 :])
        return _PARTIAL

    def _apply_root(self, v: int, labels) -> bool:
        """Apply a template at the pertinent root (set may end up interior)."""
        if self.kind[v] == LEAF:
            return True
        em, fu, pa = self._split(v, labels)
        if not em and not pa:
            return True
        if self.kind[v] == PNODE:
            if len(pa) == 0:  # P2
                self._set_children(v, em + [self._group(fu)])
                return True
            if len(pa) == 1:  # P4
                q = pa[0]
                if fu:
                    f = self._group(fu)
                    self.children[q].append(f)
                    self.parent[f] = q
                if em:
                    self._set_children(v, em + [q])
                else:
                    self._absorb(v, q)
                return True
            if len(pa) == 2:  # P6
                q1, q2 = pa
                combined = list(self.children[q1])
                if fu:
                    combined.append(self._group(fu))
                combined.extend(reversed(self.children[q2]))
                self._free(q1)
                self._free(q2)
                nq = self._new(QNODE)
                self._set_children(nq, combined)
                if em:
                    self._set_children(v, em + [nq])
                else:
                    self._absorb(v, nq)
                return True
            return False
        # Q-node root (Q3): empty* partial? full* partial? empty*
        if len(pa) > 2:
            return False
        seq = [labels.get(c, _EMPTY) for c in self.children[v]]
        blocks = _parse_q3(seq)
        if blocks is None:
            return False
        e1, p1, f, p2, e2 = blocks
        cs = self.children[v]
        new = [cs[i] for i in e1]
        if p1 is not None:
            q = cs[p1]
            new.extend(self.children[q])
            self._free(q)
        new.extend(cs[i] for i in f)
        if p2 is not None:
            q = cs[p2]
            new.extend(reversed(self.children[q]))
            self._free(q)
        new.extend(cs[i] for i in e2)
        self._set_children(v, new)
        return True

    # -- canonical form -----------------------------------------------------

    def _canonicalize(self) -> None:
        """Splice 1-child nodes, turn 2-child Q-nodes into P-nodes, and fix a
        deterministic layout: P-children sorted by smallest leaf, Q-nodes
        oriented so the first child holds the smaller leaf."""
        order = self._postorder()
        minleaf = [0] * len(self.kind)
        for v in order:
            k = self.kind[v]
            if k == DEAD:
                continue
            if k == LEAF:
                minleaf[v] = self.element[v]
                continue
            while self.kind[v] != LEAF and len(self.children[v]) == 1:
                self._absorb(v, self.children[v][0])
            if self.kind[v] == LEAF:
                minleaf[v] = self.element[v]
                continue
            if self.kind[v] == QNODE and len(self.children[v]) == 2:
                self.kind[v] = PNODE
            cs = self.children[v]
            if self.kind[v] == PNODE:
                cs.sort(key=lambda c: minleaf[c])
            elif minleaf[cs[0]] > minleaf[cs[-1]]:
                cs.reverse()
            minleaf[v] = min(minleaf[c] for c in cs)
        self.parent[self.root] = -1

    def _postorder(self) -> list[int]:
        out = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(self.children[v])
        out.reverse()
        return out

    # -- debugging / test support -------------------------------------------

    def enumerate_orders(self, bound: int = 8) -> set[tuple[int, ...]]:
        """All admitted leaf orders; exponential, guarded for test scale."""
        if self.n > bound:
            raise ValueError(f"universe {self.n} exceeds enumeration bound {bound}")

        def orders(v: int) -> list[tuple[int, ...]]:
            if self.kind[v] == LEAF:
                return [(self.element[v],)]
            parts = [orders(c) for c in self.children[v]]
            out = []
            if self.kind[v] == PNODE:
                arrangements = permutations(range(len(parts)))
            else:
                idx = list(range(len(parts)))
                arrangements = [idx, idx[::-1]]
            for arr in arrangements:
                for combo in product(*(parts[i] for i in arr)):
                    out.append(tuple(x for piece in combo for x in piece))
            return out

        return set(orders(self.root))

    def to_string(self) -> str:
        """Debug serialization, e.g. ``P(0, Q(1, 2, 3))``."""

        def fmt(v: int) -> str:
            if self.kind[v] == LEAF:
                return str(self.element[v])
            tag = "P" if self.kind[v] == PNODE else "Q"
            return f"{tag}({', '.join(fmt(c) for c in self.children[v])})"

        return fmt(self.root)

    def validate(self) -> None:
        """Raise AssertionError when structural invariants are broken."""
        seen_elems = []
        stack = [(self.root, -1)]
        visited = set()
        while stack:
            v, par = stack.pop()
            assert v not in visited, "cycle in tree"
            visited.add(v)
            assert self.kind[v] != DEAD, "dead node reachable"
            assert self.parent[v] == par, f"bad parent link at node {v}"
            if self.kind[v] == LEAF:
                seen_elems.append(self.element[v])
                assert self.leaf_at[self.element[v]] == v
            else:
                arity = len(self.children[v])
                if self.kind[v] == PNODE:
                    assert arity >= 2, "P-node with fewer than 2 children"
                else:
                    assert arity >= 3, "Q-node with fewer than 3 children"
                stack.extend((c, v) for c in self.children[v])
        assert sorted(seen_elems) == list(range(self.n)), "leaves are not a bijection"


def _matches_q2(seq: list[int]) -> bool:
    """empty* partial? full* (the full block reaching the right end)."""
    i, n = 0, len(seq)
    while i < n and seq[i] == _EMPTY:
        i += 1
    if i < n and seq[i] == _PARTIAL:
        i += 1
    while i < n and seq[i] == _FULL:
        i += 1
    return i == n


def _parse_q3(seq: list[int]):
    """empty* partial? full* partial? empty*; returns index blocks or None."""
    i, n = 0, len(seq)
    e1 = []
    while i < n and seq[i] == _EMPTY:
        e1.append(i)
        i += 1
    p1 = None
    if i < n and seq[i] == _PARTIAL:
        p1 = i
        i += 1
    f = []
    while i < n and seq[i] == _FULL:
        f.append(i)
        i += 1
    p2 = None
    if i < n and seq[i] == _PARTIAL:
        p2 = i
        i += 1
    e2 = []
    while i < n and seq[i] == _EMPTY:
        e2.append(i)
        i += 1
    if i != n:
        return None
    return e1, p1, f, p2, e2
