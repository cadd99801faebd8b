"""Static SVG renderings of already-computed results.

Hand-rolled output with fixed-precision coordinates, so a given input
always produces byte-identical files.
"""

from __future__ import annotations

from .hierarchy import Hierarchy

_FONT = "font-family='monospace' font-size='11'"


def _leaf_order(h: Hierarchy) -> list[int]:
    """Left-to-right leaf order from a depth-first walk of the merges."""
    p = h.p

    def walk(node: int) -> list[int]:
        if node < p:
            return [node]
        m = h.merges[node - p]
        return walk(m.left) + walk(m.right)

    return walk(p + len(h.merges) - 1) if h.merges else [0]


def render_dendrogram(h: Hierarchy) -> str:
    """Dendrogram with leaves on the x axis and merge heights on y."""
    p = h.p
    order = _leaf_order(h)
    slot = {leaf: i for i, leaf in enumerate(order)}
    max_h = max((m.height for m in h.merges), default=1.0) or 1.0

    left, top, step, plot_h, label_h = 50.0, 20.0, 36.0, 260.0, 110.0
    width = left + step * max(p - 1, 1) + 60.0
    height = top + plot_h + label_h

    def x_of(s: float) -> float:
        return left + s * step

    def y_of(v: float) -> float:
        return top + plot_h * (1.0 - v / max_h)

    x = {leaf: float(slot[leaf]) for leaf in range(p)}
    y = {leaf: 0.0 for leaf in range(p)}
    lines = []
    for t, m in enumerate(h.merges):
        node = p + t
        xl, xr = x[m.left], x[m.right]
        for child in (m.left, m.right):
            lines.append((x[child], y[child], x[child], m.height))
        lines.append((xl, m.height, xr, m.height))
        x[node] = 0.5 * (xl + xr)
        y[node] = m.height

    parts = [
        f"<svg xmlns='http://www.w3.org/2000/svg' width='{width:.0f}' height='{height:.0f}'>",
        f"<rect width='{width:.0f}' height='{height:.0f}' fill='white'/>",
    ]
    axis_x = left - 18.0
    parts.append(
        f"<line x1='{axis_x:.2f}' y1='{y_of(0):.2f}' x2='{axis_x:.2f}' y2='{y_of(max_h):.2f}' stroke='black'/>"
    )
    for frac in (0.0, 0.5, 1.0):
        v = frac * max_h
        parts.append(
            f"<text x='{axis_x - 4:.2f}' y='{y_of(v) + 4:.2f}' text-anchor='end' {_FONT}>{v:.3g}</text>"
        )
    for x1, y1, x2, y2 in lines:
        parts.append(
            f"<line x1='{x_of(x1):.2f}' y1='{y_of(y1):.2f}' x2='{x_of(x2):.2f}' y2='{y_of(y2):.2f}' stroke='steelblue' stroke-width='1.5'/>"
        )
    for leaf in range(p):
        lx = x_of(x[leaf])
        ly = y_of(0) + 8.0
        label = h.leaves[leaf].replace("&", "&amp;").replace("<", "&lt;")
        parts.append(
            f"<text x='{lx:.2f}' y='{ly:.2f}' transform='rotate(65 {lx:.2f} {ly:.2f})' {_FONT}>{label}</text>"
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_curve(points, xlabel: str, ylabel: str) -> str:
    """Polyline plot of (x, y) pairs with dot markers."""
    points = list(points)
    left, top, width, height = 60.0, 20.0, 480.0, 320.0
    plot_w, plot_h = width - left - 20.0, height - top - 60.0
    xs = [float(x) for x, _ in points]
    ys = [float(y) for _, y in points]
    x_min, x_max = min(xs), max(xs)
    y_min, y_max = min(ys + [0.0]), max(ys + [1.0])
    x_span = (x_max - x_min) or 1.0
    y_span = (y_max - y_min) or 1.0

    def px(x: float) -> float:
        return left + (x - x_min) / x_span * plot_w

    def py(y: float) -> float:
        return top + plot_h * (1.0 - (y - y_min) / y_span)

    parts = [
        f"<svg xmlns='http://www.w3.org/2000/svg' width='{width:.0f}' height='{height:.0f}'>",
        f"<rect width='{width:.0f}' height='{height:.0f}' fill='white'/>",
        f"<line x1='{left:.2f}' y1='{py(y_min):.2f}' x2='{left:.2f}' y2='{py(y_max):.2f}' stroke='black'/>",
        f"<line x1='{left:.2f}' y1='{py(y_min):.2f}' x2='{px(x_max):.2f}' y2='{py(y_min):.2f}' stroke='black'/>",
    ]
    poly = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in points)
    parts.append(f"<polyline points='{poly}' fill='none' stroke='firebrick' stroke-width='2'/>")
    for x, y in points:
        parts.append(f"<circle cx='{px(x):.2f}' cy='{py(y):.2f}' r='3' fill='firebrick'/>")
        parts.append(
            f"<text x='{px(x):.2f}' y='{py(y_min) + 16:.2f}' text-anchor='middle' {_FONT}>{x:g}</text>"
        )
    for frac in (0.0, 0.5, 1.0):
        v = y_min + frac * y_span
        parts.append(
            f"<text x='{left - 6:.2f}' y='{py(v) + 4:.2f}' text-anchor='end' {_FONT}>{v:.2f}</text>"
        )
    parts.append(
        f"<text x='{left + plot_w / 2:.2f}' y='{height - 12:.2f}' text-anchor='middle' {_FONT}>{xlabel}</text>"
    )
    parts.append(
        f"<text x='14' y='{top - 6:.2f}' {_FONT}>{ylabel}</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
