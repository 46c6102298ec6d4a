"""SVG renderings of factorizations: circular and linear node layouts with
one filled ribbon (edge bundle) per factor, and a permuted-matrix heatmap.

Output is plain SVG 1.1 text built deterministically: fixed coordinate
precision, fixed attribute order, no timestamps, so identical inputs give
identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bitmat import BinaryMatrix, reconstruct

# fixed qualitative palette, cycled by factor index
PALETTE = (
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
)


@dataclass(frozen=True)
class RenderSpec:
    radius: float = 240.0          # circle radius (circular layout)
    length: float = 720.0          # baseline length (linear layout)
    labels: tuple[str, ...] | None = None
    palette: tuple[str, ...] = PALETTE
    opacity: float = 0.35
    margin: float = 60.0
    node_radius: float = 2.5
    label_min_spacing_deg: float = 3.0  # labels are dropped below this spacing
    cell_px: float = 6.0           # heatmap cell size


def _f(x: float) -> str:
    return f"{x:.2f}"


def _svg(width: float, height: float, body: list[str]) -> str:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def _runs(members, order, n, allow_wrap: bool):
    """Positions of a set under the order as one contiguous run.

    Returns (start_position, length); a wrapped run starts after the gap.
    Raises when the positions are not a (cyclically) contiguous block, which
    re-checks factorization validity at render time.
    """
    pos_of = {v: p for p, v in enumerate(order)}
    ps = sorted(pos_of[u] for u in members)
    if not ps:
        raise ValueError("empty factor side cannot be drawn")
    k = len(ps)
    if ps[-1] - ps[0] + 1 == k:
        return ps[0], k
    if not allow_wrap:
        raise ValueError(f"set {tuple(members)} is not contiguous under the stored order")
    inner_gaps = [i for i in range(k - 1) if ps[i + 1] - ps[i] > 1]
    if len(inner_gaps) != 1 or (ps[0] + n) - ps[-1] > 1:
        raise ValueError(f"set {tuple(members)} is not cyclically contiguous under the stored order")
    start = ps[inner_gaps[0] + 1]
    return start, k


def _require_node_order(f):
    if f.variant not in ("sym", "cyclic-sym"):
        raise ValueError("this layout needs a symmetric-variant factorization (single node order)")
    return f.node_order


# -- circular layout --------------------------------------------------------


def render_circular(f, spec: RenderSpec = RenderSpec()) -> str:
    """Nodes on a circle in factorization order, one ribbon per factor.

    A ribbon is the row-span arc and the column-span arc joined by two cubic
    curves whose control points are pulled radially toward the centre, so
    bundles bulge through the middle of the disc.  Wrapping spans (cyclic
    variants) continue across the 0-angle seam.
    """
    order = _require_node_order(f)
    n = len(order)
    if spec.labels is not None and len(spec.labels) != n:
        raise ValueError(f"{len(spec.labels)} labels for {n} nodes")
    size = 2 * (spec.radius + spec.margin)
    cx = cy = size / 2
    step = 360.0 / n
    theta0 = -90.0  # first node at the top, clockwise

    def pt(angle_deg: float, r: float) -> tuple[float, float]:
        a = math.radians(angle_deg)
        return cx + r * math.cos(a), cy + r * math.sin(a)

    def arc_span(start_pos: int, length: int) -> tuple[float, float]:
        pad = 0.4 * step
        a0 = theta0 + start_pos * step - pad
        a1 = theta0 + (start_pos + length - 1) * step + pad
        return a0, a1

    body = [f'<g id="ribbons" fill-opacity="{spec.opacity:.2f}">']
    allow_wrap = f.variant == "cyclic-sym"
    for t, (rows, cols) in enumerate(f.factors):
        color = spec.palette[t % len(spec.palette)]
        ra0, ra1 = arc_span(*_runs(rows, order, n, allow_wrap))
        ca0, ca1 = arc_span(*_runs(cols, order, n, allow_wrap))
        p1, p2 = pt(ra0, spec.radius), pt(ra1, spec.radius)
        p3, p4 = pt(ca0, spec.radius), pt(ca1, spec.radius)
        k = 0.45  # control points at 45% radius: tangents lean toward the centre
        c2, c3 = pt(ra1, spec.radius * k), pt(ca0, spec.radius * k)
        c4, c1 = pt(ca1, spec.radius * k), pt(ra0, spec.radius * k)
        large_r = 1 if (ra1 - ra0) > 180.0 else 0
        large_c = 1 if (ca1 - ca0) > 180.0 else 0
        r = _f(spec.radius)
        d = (
            f"M {_f(p1[0])} {_f(p1[1])} "
            f"A {r} {r} 0 {large_r} 1 {_f(p2[0])} {_f(p2[1])} "
            f"C {_f(c2[0])} {_f(c2[1])} {_f(c3[0])} {_f(c3[1])} {_f(p3[0])} {_f(p3[1])} "
            f"A {r} {r} 0 {large_c} 1 {_f(p4[0])} {_f(p4[1])} "
            f"C {_f(c4[0])} {_f(c4[1])} {_f(c1[0])} {_f(c1[1])} {_f(p1[0])} {_f(p1[1])} Z"
        )
        body.append(f'<path d="{d}" fill="{color}" stroke="{color}" stroke-width="1"/>')
    body.append("</g>")

    body.append('<g id="nodes" fill="#222222">')
    for p in range(n):
        x, y = pt(theta0 + p * step, spec.radius)
        body.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(spec.node_radius)}"/>')
    body.append("</g>")

    if spec.labels is not None and step >= spec.label_min_spacing_deg:
        body.append('<g id="labels" font-family="sans-serif" font-size="9" fill="#222222">')
        for p, v in enumerate(order):
            ang = theta0 + p * step
            x, y = pt(ang, spec.radius + 3 * spec.node_radius)
            flip = 90.0 < (ang % 360.0 + 360.0) % 360.0 < 270.0
            rot = ang + 180.0 if flip else ang
            anchor = "end" if flip else "start"
            body.append(
                f'<text x="{_f(x)}" y="{_f(y)}" text-anchor="{anchor}" '
                f'transform="rotate({_f(rot)} {_f(x)} {_f(y)})">{_esc(spec.labels[v])}</text>'
            )
        body.append("</g>")
    return _svg(size, size, body)


# -- linear layout ------------------------------------------------------------


def render_linear(f, spec: RenderSpec = RenderSpec()) -> str:
    """Nodes on a horizontal line, ribbons drawn as arcs above the line.

    Wrapping spans are split at the plot edges into two half-ribbons, each
    finished with a dashed continuation marker.
    """
    order = _require_node_order(f)
    n = len(order)
    if spec.labels is not None and len(spec.labels) != n:
        raise ValueError(f"{len(spec.labels)} labels for {n} nodes")
    width = spec.length + 2 * spec.margin
    height = spec.length / 2 + 2 * spec.margin
    y0 = height - spec.margin
    step = spec.length / max(n - 1, 1)

    def x_at(p: float) -> float:
        return spec.margin + p * step

    def pieces(members) -> list[tuple[float, float]]:
        start, k = _runs(members, order, n, f.variant == "cyclic-sym")
        pad = 0.4
        if start + k <= n:
            return [(start - pad, start + k - 1 + pad)]
        head = n - start  # run wraps: [start..n-1] and [0..rest]
        return [(start - pad, n - 1 + pad), (-pad, k - head - 1 + pad)]

    body = [f'<g id="ribbons" fill-opacity="{spec.opacity:.2f}">']
    for t, (rows, cols) in enumerate(f.factors):
        color = spec.palette[t % len(spec.palette)]
        rp, cp = pieces(rows), pieces(cols)
        wrapped = len(rp) > 1 or len(cp) > 1
        for a0, a1 in rp:
            for b0, b1 in cp:
                lo0, lo1 = min(a0, b0), min(a1, b1)
                hi0, hi1 = max(a0, b0), max(a1, b1)
                xa, xb = x_at(lo0), x_at(lo1)
                xc, xd = x_at(hi0), x_at(hi1)
                h = min(spec.length / 2, 0.45 * max(xd - xa, step)) + 8.0
                d = (
                    f"M {_f(xa)} {_f(y0)} "
                    f"C {_f(xa)} {_f(y0 - h)} {_f(xd)} {_f(y0 - h)} {_f(xd)} {_f(y0)} "
                    f"L {_f(xc)} {_f(y0)} "
                    f"C {_f(xc)} {_f(y0 - 0.8 * h)} {_f(xb)} {_f(y0 - 0.8 * h)} {_f(xb)} {_f(y0)} Z"
                )
                body.append(f'<path d="{d}" fill="{color}" stroke="{color}" stroke-width="1"/>')
        if wrapped:
            for edge_x in (x_at(-0.4), x_at(n - 1 + 0.4)):
                body.append(
                    f'<line x1="{_f(edge_x)}" y1="{_f(y0)}" x2="{_f(edge_x)}" y2="{_f(y0 - 24)}" '
                    f'stroke="{color}" stroke-width="1.5" stroke-dasharray="3 3"/>'
                )
    body.append("</g>")

    body.append(f'<line x1="{_f(x_at(0))}" y1="{_f(y0)}" x2="{_f(x_at(n - 1))}" y2="{_f(y0)}" stroke="#888888" stroke-width="1"/>')
    body.append('<g id="nodes" fill="#222222">')
    for p in range(n):
        body.append(f'<circle cx="{_f(x_at(p))}" cy="{_f(y0)}" r="{_f(spec.node_radius)}"/>')
    body.append("</g>")
    if spec.labels is not None:
        body.append('<g id="labels" font-family="sans-serif" font-size="9" fill="#222222">')
        for p, v in enumerate(order):
            x = x_at(p)
            body.append(
                f'<text x="{_f(x)}" y="{_f(y0 + 12)}" text-anchor="end" '
                f'transform="rotate(-45 {_f(x)} {_f(y0 + 12)})">{_esc(spec.labels[v])}</text>'
            )
        body.append("</g>")
    return _svg(width, height, body)


# -- heatmap ------------------------------------------------------------------


def render_heatmap(d: BinaryMatrix, f, spec: RenderSpec = RenderSpec()) -> str:
    """The matrix permuted by the factorization's orders, with factor tiles
    outlined and disagreement cells tinted."""
    z = reconstruct(f)
    if z.shape != d.shape:
        raise ValueError(f"factorization shape {z.shape} does not match matrix {d.shape}")
    rorder, corder = f.row_order, f.col_order
    cell = spec.cell_px
    width = len(corder) * cell + 2 * spec.margin
    height = len(rorder) * cell + 2 * spec.margin
    x0 = y0 = spec.margin
    dd = d.dense()[np.ix_(rorder, corder)]
    zz = z.dense()[np.ix_(rorder, corder)]

    body = [
        f'<rect x="{_f(x0)}" y="{_f(y0)}" width="{_f(len(corder) * cell)}" '
        f'height="{_f(len(rorder) * cell)}" fill="#ffffff" stroke="#888888" stroke-width="1"/>',
        '<g id="cells" fill="#333333">',
    ]
    for i, j in zip(*np.nonzero(dd)):
        body.append(f'<rect x="{_f(x0 + j * cell)}" y="{_f(y0 + i * cell)}" width="{_f(cell)}" height="{_f(cell)}"/>')
    body.append("</g>")
    body.append('<g id="disagreements" fill="#d62728" fill-opacity="0.55">')
    for i, j in zip(*np.nonzero(dd != zz)):
        body.append(f'<rect x="{_f(x0 + j * cell)}" y="{_f(y0 + i * cell)}" width="{_f(cell)}" height="{_f(cell)}"/>')
    body.append("</g>")

    body.append('<g id="tiles" fill="none" stroke-width="1.5">')
    n, m = len(rorder), len(corder)
    allow_wrap = f.variant in ("cyclic", "cyclic-sym")
    for t, (rows, cols) in enumerate(f.factors):
        color = spec.palette[t % len(spec.palette)]
        rs, rk = _runs(rows, rorder, n, allow_wrap)
        cs_, ck = _runs(cols, corder, m, allow_wrap)
        rpieces = [(rs, rk)] if rs + rk <= n else [(rs, n - rs), (0, rk - (n - rs))]
        cpieces = [(cs_, ck)] if cs_ + ck <= m else [(cs_, m - cs_), (0, ck - (m - cs_))]
        for r0, rl in rpieces:
            for c0, cl in cpieces:
                body.append(
                    f'<rect x="{_f(x0 + c0 * cell)}" y="{_f(y0 + r0 * cell)}" '
                    f'width="{_f(cl * cell)}" height="{_f(rl * cell)}" stroke="{color}"/>'
                )
    body.append("</g>")
    return _svg(width, height, body)


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
