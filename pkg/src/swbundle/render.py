"""Self-contained SVG and fixed-width text renderers for barcodes and lifebars.

No plotting library: the SVG is assembled from rect/line/text elements with
deterministic formatting, so rendered files are byte-stable across runs.
"""

from __future__ import annotations

from .bundle import Lifebar
from .z2 import INF, Barcode

_DIM_COLORS = ("#c0392b", "#27ae60", "#2980b9", "#8e44ad")

_WIDTH = 640
_MARGIN = 48
_ROW = 12
_TEXT_COLUMNS = 80


def _fmt(x: float) -> str:
    return format(x, ".6g")


def _axis_tail(values, t_max):
    finite = [v for v in values if v != INF]
    right = max(finite + [t_max if t_max is not None else 0.0, 1e-9])
    return right * 1.02


def barcode_svg(bc: Barcode, t_max: float | None = None) -> str:
    """Bars grouped by dimension; open intervals run to the right edge."""
    bars = sorted(bc.intervals)
    right = _axis_tail([e for (_, b, e) in bars] + [b for (_, b, e) in bars], t_max)
    span = _WIDTH - 2 * _MARGIN

    def sx(v: float) -> float:
        v = min(v, right)
        return _MARGIN + span * v / right

    height = _MARGIN + _ROW * (len(bars) + 2)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{height}" '
        f'viewBox="0 0 {_WIDTH} {height}">',
        f'<rect width="{_WIDTH}" height="{height}" fill="white"/>',
    ]
    y = _ROW
    for (d, b, e) in bars:
        color = _DIM_COLORS[d % len(_DIM_COLORS)]
        x0 = sx(b)
        x1 = sx(e if e != INF else right)
        out.append(
            f'<line x1="{_fmt(x0)}" y1="{y}" x2="{_fmt(max(x1, x0 + 1))}" y2="{y}" '
            f'stroke="{color}" stroke-width="6"/>'
        )
        if e == INF:
            out.append(
                f'<text x="{_fmt(x1 + 4)}" y="{y + 4}" font-size="9" '
                f'font-family="monospace">inf</text>'
            )
        y += _ROW
    axis_y = y + _ROW
    out.append(
        f'<line x1="{_MARGIN}" y1="{axis_y}" x2="{_WIDTH - _MARGIN}" y2="{axis_y}" '
        f'stroke="black" stroke-width="1"/>'
    )
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        v = right * frac
        x = sx(v)
        out.append(
            f'<line x1="{_fmt(x)}" y1="{axis_y}" x2="{_fmt(x)}" y2="{axis_y + 4}" '
            f'stroke="black" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_fmt(x)}" y="{axis_y + 14}" font-size="9" text-anchor="middle" '
            f'font-family="monospace">{_fmt(v)}</text>'
        )
    legend = sorted({d for (d, _, _) in bars})
    for i, d in enumerate(legend):
        out.append(
            f'<text x="{_MARGIN + 70 * i}" y="{_ROW // 2 + 2}" font-size="9" '
            f'font-family="monospace" fill="{_DIM_COLORS[d % len(_DIM_COLORS)]}">H{d}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def barcode_text(bc: Barcode, t_max: float | None = None) -> str:
    """Fixed 80-column rendering, one bar per line."""
    bars = sorted(bc.intervals)
    right = _axis_tail([e for (_, b, e) in bars] + [b for (_, b, e) in bars], t_max)
    label_w = 24
    span = _TEXT_COLUMNS - label_w - 1
    lines = []
    for (d, b, e) in bars:
        death = "inf" if e == INF else _fmt(e)
        label = f"H{d} [{_fmt(b)}, {death})"[:label_w].ljust(label_w)
        c0 = int(round(span * min(b, right) / right))
        c1 = int(round(span * min(e if e != INF else right, right) / right))
        c1 = max(c1, c0 + 1)
        bar = " " * c0 + "#" * (c1 - c0)
        lines.append((label + bar)[:_TEXT_COLUMNS])
    lines.append(f"axis: 0 .. {_fmt(right)}")
    return "\n".join(lines) + "\n"


def lifebar_svg(lb: Lifebar) -> str:
    """One bar over [0, t_max): hatched where the class is zero, solid after."""
    span = _WIDTH - 2 * _MARGIN
    height = 72

    def sx(v: float) -> float:
        return _MARGIN + span * v / lb.t_max

    cut = lb.t_max if lb.empty else lb.t_dagger
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{height}" '
        f'viewBox="0 0 {_WIDTH} {height}">',
        "<defs>",
        '<pattern id="hatch" width="6" height="6" patternTransform="rotate(45)" '
        'patternUnits="userSpaceOnUse">'
        '<line x1="0" y1="0" x2="0" y2="6" stroke="#555" stroke-width="1.5"/>'
        "</pattern>",
        "</defs>",
        f'<rect width="{_WIDTH}" height="{height}" fill="white"/>',
        f'<rect x="{_fmt(sx(0.0))}" y="16" width="{_fmt(sx(cut) - sx(0.0))}" height="16" '
        f'fill="url(#hatch)" stroke="#555" stroke-width="0.5"/>',
    ]
    if not lb.empty:
        out.append(
            f'<rect x="{_fmt(sx(cut))}" y="16" width="{_fmt(sx(lb.t_max) - sx(cut))}" '
            f'height="16" fill="#1a1a1a"/>'
        )
    axis_y = 48
    out.append(
        f'<line x1="{_MARGIN}" y1="{axis_y}" x2="{_WIDTH - _MARGIN}" y2="{axis_y}" '
        f'stroke="black" stroke-width="1"/>'
    )
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        v = lb.t_max * frac
        x = sx(v)
        out.append(
            f'<line x1="{_fmt(x)}" y1="{axis_y}" x2="{_fmt(x)}" y2="{axis_y + 4}" '
            f'stroke="black" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_fmt(x)}" y="{axis_y + 14}" font-size="9" text-anchor="middle" '
            f'font-family="monospace">{_fmt(v)}</text>'
        )
    caption = "empty" if lb.empty else f"nonzero from ~{_fmt(lb.t_dagger)}"
    out.append(
        f'<text x="{_MARGIN}" y="10" font-size="10" font-family="monospace">'
        f"lifebar: {caption} (resolution {_fmt(lb.resolution)})</text>"
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def lifebar_text(lb: Lifebar) -> str:
    """Fixed 80-column lifebar: '/' marks the zero part, '#' the nonzero part."""
    span = _TEXT_COLUMNS - 1
    cut = lb.t_max if lb.empty else lb.t_dagger
    c = int(round(span * cut / lb.t_max)) if lb.t_max > 0 else span
    c = min(max(c, 0), span)
    bar = "/" * c + "#" * (span - c)
    caption = "empty" if lb.empty else f"nonzero from ~{_fmt(lb.t_dagger)}"
    return f"{bar}\nlifebar: {caption} on [0, {_fmt(lb.t_max)}), resolution {_fmt(lb.resolution)}\n"
