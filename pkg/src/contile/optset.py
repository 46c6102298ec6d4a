"""Maximum-weight tree-compatible set selection.

Each universe element carries an integer weight.  A set is *compatible*
with a PQ-tree when some admitted order keeps it contiguous, and
*border-compatible* when some admitted order additionally places it at the
first or last position.  Three counters per node solve the maximization in
one bottom-up pass:

  total(v)   weight of all leaves under v
  border(v)  best non-empty border-compatible set within v's subtree
  inner(v)   best compatible set within v's subtree (empty set allowed,
             so inner(v) >= 0)

For a Q-node the best interior run is found with a running prefix maximum,
so every child is visited a constant number of times and the whole pass is
linear in the number of nodes.  Backtrack tags record the decision at every
node, so the optimal set is recovered by a single root-to-leaves walk.  All
arithmetic is exact integers.  Ties prefer fewer elements and then the
earlier candidate in the tree's canonical child order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .pqtree import LEAF, PNODE, QNODE, PQTree


@dataclass
class Counters:
    total: list[int]
    border: list[int]
    inner: list[int]
    total_size: list[int]
    border_size: list[int]
    inner_size: list[int]
    border_tag: dict[int, tuple]
    inner_tag: dict[int, tuple]
    root: int
    ops: int = 0


def _internal_order(tree: PQTree) -> list[int]:
    order = tree.cache.get("optset_order")
    if order is None:
        order = [v for v in tree._postorder() if tree.kind[v] in (PNODE, QNODE)]
        tree.cache["optset_order"] = order
    return order


def compute_counters(tree: PQTree, w: Sequence[int]) -> Counters:
    n = tree.n
    w_arr = np.asarray(w, dtype=np.int64)
    if w_arr.shape != (n,):
        raise ValueError(f"weight vector length {w_arr.shape} != universe {n}")
    arena = len(tree.kind)
    leaf_ids = np.asarray(tree.leaf_at, dtype=np.int64)

    buf = np.zeros(arena, dtype=np.int64)
    buf[leaf_ids] = w_arr
    total = buf.tolist()
    border = buf.tolist()
    buf[leaf_ids] = np.maximum(w_arr, 0)
    inner = buf.tolist()
    buf[:] = 0
    buf[leaf_ids] = 1
    tsize = buf.tolist()
    bsize = buf.tolist()
    buf[leaf_ids] = w_arr > 0
    isize = buf.tolist()

    border_tag: dict[int, tuple] = {}
    inner_tag: dict[int, tuple] = {}
    ops = n
    kinds = tree.kind
    children = tree.children

    for v in _internal_order(tree):
        cs = children[v]
        l = len(cs)
        ops += l
        if kinds[v] == PNODE:
            tot = tsz = base = basesz = 0
            bg = bgsz = bx = None       # best g: the border (partial) child
            g1 = g1sz = x1 = None       # top-2 g values for inner's run ends
            g2 = g2sz = x2 = None
            iv_best = ivsz = xv = None  # best child inner
            for x in cs:
                tx = total[x]
                sx = tsize[x]
                tot += tx
                tsz += sx
                if tx > 0:
                    base += tx
                    basesz += sx
                    gv = border[x] - tx
                    gs = bsize[x] - sx
                else:
                    gv = border[x]
                    gs = bsize[x]
                if bx is None or gv > bg or (gv == bg and gs < bgsz):
                    bg, bgsz, bx = gv, gs, x
                if x1 is None or gv > g1 or (gv == g1 and gs < g1sz):
                    g2, g2sz, x2 = g1, g1sz, x1
                    g1, g1sz, x1 = gv, gs, x
                elif x2 is None or gv > g2 or (gv == g2 and gs < g2sz):
                    g2, g2sz, x2 = gv, gs, x
                iv = inner[x]
                if xv is None or iv > iv_best or (iv == iv_best and isize[x] < ivsz):
                    iv_best, ivsz, xv = iv, isize[x], x
            total[v] = tot
            tsize[v] = tsz
            border[v] = base + bg
            bsize[v] = basesz + bgsz
            border_tag[v] = ("pb", bx)

            ig, igsz, itag = 0, 0, ("empty",)
            if iv_best > ig or (iv_best == ig and ivsz < igsz):
                ig, igsz, itag = iv_best, ivsz, ("px", xv)
            chosen = []
            y, ysz = base, basesz
            for gv, gs, x in ((g1, g1sz, x1), (g2, g2sz, x2)):
                if x is not None and (gv > 0 or (gv == 0 and gs < 0)):
                    chosen.append(x)
                    y += gv
                    ysz += gs
            if y > ig or (y == ig and ysz < igsz):
                ig, igsz, itag = y, ysz, ("py", tuple(chosen))
            inner[v] = ig
            isize[v] = igsz
            inner_tag[v] = itag
            continue

        # Q-node
        pref = [0] * (l + 1)
        prefsz = [0] * (l + 1)
        acc = accs = 0
        for i, x in enumerate(cs):
            acc += total[x]
            accs += tsize[x]
            pref[i + 1] = acc
            prefsz[i + 1] = accs
        total[v] = acc
        tsize[v] = accs

        bg = bgsz = None
        btag = None
        ig, igsz, itag = 0, 0, ("empty",)
        # running best of border(c_i) - pref(i+1) makes the i<j search O(1) per j
        x0 = cs[0]
        best_t = border[x0] - pref[1]
        best_t_sz = bsize[x0] - prefsz[1]
        best_i = 0
        for i, x in enumerate(cs):
            bxv = border[x]
            bxs = bsize[x]
            gain = pref[i] + bxv  # full prefix, partial child at the right
            size = prefsz[i] + bxs
            if btag is None or gain > bg or (gain == bg and size < bgsz):
                bg, bgsz, btag = gain, size, ("qb", "L", i)
            gain = (acc - pref[i + 1]) + bxv  # full suffix
            size = (accs - prefsz[i + 1]) + bxs
            if gain > bg or (gain == bg and size < bgsz):
                bg, bgsz, btag = gain, size, ("qb", "R", i)
            iv = inner[x]
            if iv > ig or (iv == ig and isize[x] < igsz):
                ig, igsz, itag = iv, isize[x], ("qx", x)
            if i > 0:
                gain = bxv + pref[i] + best_t
                size = bxs + prefsz[i] + best_t_sz
                if gain > ig or (gain == ig and size < igsz):
                    ig, igsz, itag = gain, size, ("qy", best_i, i)
                t = bxv - pref[i + 1]
                t_sz = bxs - prefsz[i + 1]
                if t > best_t or (t == best_t and t_sz < best_t_sz):
                    best_t, best_t_sz, best_i = t, t_sz, i
        border[v] = bg
        bsize[v] = bgsz
        border_tag[v] = btag
        inner[v] = ig
        isize[v] = igsz
        inner_tag[v] = itag

    return Counters(total, border, inner, tsize, bsize, isize, border_tag, inner_tag, tree.root, ops)


def _leaves_under(tree: PQTree, v: int) -> list[int]:
    out = []
    stack = [v]
    while stack:
        x = stack.pop()
        if tree.kind[x] == LEAF:
            out.append(tree.element[x])
        else:
            stack.extend(tree.children[x])
    return out


def _extract_border(tree: PQTree, c: Counters, v: int) -> list[int]:
    if tree.kind[v] == LEAF:
        return [tree.element[v]]
    tag = c.border_tag[v]
    if tag[0] == "pb":
        chosen = tag[1]
        out = _extract_border(tree, c, chosen)
        for x in tree.children[v]:
            if x != chosen and c.total[x] > 0:
                out.extend(_leaves_under(tree, x))
        return out
    _, side, i = tag
    cs = tree.children[v]
    out = _extract_border(tree, c, cs[i])
    run = cs[:i] if side == "L" else cs[i + 1 :]
    for x in run:
        out.extend(_leaves_under(tree, x))
    return out


def _extract_inner(tree: PQTree, c: Counters, v: int) -> list[int]:
    if tree.kind[v] == LEAF:
        return [tree.element[v]] if c.inner[v] > 0 else []
    tag = c.inner_tag[v]
    if tag[0] == "empty":
        return []
    if tag[0] in ("px", "qx"):
        return _extract_inner(tree, c, tag[1])
    if tag[0] == "py":
        chosen = tag[1]
        out = []
        for x in chosen:
            out.extend(_extract_border(tree, c, x))
        for x in tree.children[v]:
            if x not in chosen and c.total[x] > 0:
                out.extend(_leaves_under(tree, x))
        return out
    _, i, j = tag
    cs = tree.children[v]
    out = _extract_border(tree, c, cs[i])
    for x in cs[i + 1 : j]:
        out.extend(_leaves_under(tree, x))
    out.extend(_extract_border(tree, c, cs[j]))
    return out


def best_compatible_set(tree: PQTree, w: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Best tree-compatible set and its total weight (empty set allowed)."""
    c = compute_counters(tree, w)
    s = tuple(sorted(_extract_inner(tree, c, c.root)))
    return s, c.inner[c.root]


def best_cyclic_set(tree: PQTree, w: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Best set that is contiguous or co-contiguous under an admitted order.

    Solves the straight problem with w, then with -w; the complement of the
    second answer captures wrap-around sets.  Ties resolve to the
    non-wrapping set.
    """
    w_arr = np.asarray(w, dtype=np.int64)
    s1, g1 = best_compatible_set(tree, w_arr)
    s2, _ = best_compatible_set(tree, -w_arr)
    inside = set(s2)
    comp = tuple(u for u in range(tree.n) if u not in inside)
    g_comp = int(w_arr[list(comp)].sum()) if comp else 0
    if g_comp > g1:
        return comp, g_comp
    return s1, g1
