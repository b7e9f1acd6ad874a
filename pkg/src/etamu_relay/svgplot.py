"""Minimal native SVG line plots with a logarithmic y axis."""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

__all__ = ["log_plot"]

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"]
_DASH = {"exact": "", "asymptotic": "6,4", "mc": ""}

W, H = 720, 480
L, R, T, B = 80, 190, 30, 60


def _fmt(v):
    return f"{v:.2f}".rstrip("0").rstrip(".")


def log_plot(curves, title="", xlabel="SNR (dB)", ylabel="SER") -> str:
    """Render curves as an SVG document.

    ``curves`` is a list of dicts with keys ``label``, ``x``, ``y`` and
    ``style`` (``"exact"``, ``"asymptotic"`` or ``"mc"``; mc curves are drawn
    as markers).  Non-positive y values are left out.
    """
    pts = [(x, y) for c in curves for x, y in zip(c["x"], c["y"]) if y is not None and y > 0.0]
    if pts:
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        x0, x1 = min(xs), max(xs)
        d0, d1 = math.floor(math.log10(min(ys))), math.ceil(math.log10(max(ys)))
    else:
        x0, x1, d0, d1 = 0.0, 1.0, -1, 0
    if x1 == x0:
        x0, x1 = x0 - 1.0, x1 + 1.0
    if d1 == d0:
        d0 -= 1
    pw, ph = W - L - R, H - T - B

    def px(x):
        return L + (x - x0) / (x1 - x0) * pw

    def py(y):
        return T + (d1 - math.log10(y)) / (d1 - d0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<rect x="{L}" y="{T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for d in range(d0, d1 + 1):
        y = py(10.0**d)
        out.append(f'<line x1="{L}" y1="{y:.2f}" x2="{L + pw}" y2="{y:.2f}" stroke="#ddd"/>')
        out.append(f'<text x="{L - 6}" y="{y + 4:.2f}" text-anchor="end">1e{d}</text>')
    nt = 6
    for i in range(nt + 1):
        xv = x0 + (x1 - x0) * i / nt
        x = px(xv)
        out.append(f'<line x1="{x:.2f}" y1="{T}" x2="{x:.2f}" y2="{T + ph}" stroke="#eee"/>')
        out.append(f'<text x="{x:.2f}" y="{T + ph + 18}" text-anchor="middle">{_fmt(xv)}</text>')
    out.append(f'<text x="{L + pw / 2}" y="{H - 15}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="20" y="{T + ph / 2}" text-anchor="middle" transform="rotate(-90 20 {T + ph / 2})">{escape(ylabel)}</text>'
    )
    if title:
        out.append(f'<text x="{L + pw / 2}" y="{T - 10}" text-anchor="middle">{escape(title)}</text>')
    for i, c in enumerate(curves):
        col = _COLORS[i % len(_COLORS)]
        style = c.get("style", "exact")
        p = [(px(x), py(y)) for x, y in zip(c["x"], c["y"]) if y is not None and y > 0.0]
        if style == "mc":
            out.extend(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="3" fill="none" stroke="{col}"/>' for a, b in p)
        elif p:
            dash = f' stroke-dasharray="{_DASH[style]}"' if _DASH.get(style) else ""
            pl = " ".join(f"{a:.2f},{b:.2f}" for a, b in p)
            out.append(f'<polyline points="{pl}" fill="none" stroke="{col}" stroke-width="1.5"{dash}/>')
        ly = T + 14 + 18 * i
        lx = L + pw + 12
        if style == "mc":
            out.append(f'<circle cx="{lx + 12}" cy="{ly - 4}" r="3" fill="none" stroke="{col}"/>')
        else:
            dash = f' stroke-dasharray="{_DASH[style]}"' if _DASH.get(style) else ""
            out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" y2="{ly - 4}" stroke="{col}" stroke-width="1.5"{dash}/>')
        out.append(f'<text x="{lx + 30}" y="{ly}">{escape(c["label"])}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
