"""Static SVG scatter plots, written directly without a plotting backend.

Output is deterministic: no timestamps, no generated ids, fixed palette,
fixed coordinate formatting.  Per-class dashed fit lines are drawn through a
common origin — a presentation shift only; stored fits keep their true
intercepts.
"""

from __future__ import annotations

from .regression import LineFit

PALETTE = (
    "#0072b2",
    "#d55e00",
    "#009e73",
    "#cc79a7",
    "#e69f00",
    "#56b4e9",
    "#b22222",
    "#7570b3",
    "#999999",
    "#000000",
)

_MARGIN = 54.0


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def label_colors(labels) -> dict[str, str]:
    ordered = sorted({str(lab) for lab in labels})
    return {lab: PALETTE[i % len(PALETTE)] for i, lab in enumerate(ordered)}


def scatter_svg(
    points: list[tuple[float, float, str]],
    fits: list[LineFit] = (),
    title: str = "",
    xlabel: str = "PC1",
    ylabel: str = "PC2",
    width: int = 640,
    height: int = 480,
) -> str:
    """SVG scatter of (x, y, label) points, colored per label.

    ``fits`` are rendered as dashed slope lines through the data origin
    (0, 0) so cluster directions are visually comparable.
    """
    xs = [p[0] for p in points] or [0.0]
    ys = [p[1] for p in points] or [0.0]
    x_min, x_max = min(xs + [0.0]), max(xs + [0.0])
    y_min, y_max = min(ys + [0.0]), max(ys + [0.0])
    if x_max == x_min:
        x_min, x_max = x_min - 1.0, x_max + 1.0
    if y_max == y_min:
        y_min, y_max = y_min - 1.0, y_max + 1.0
    pad_x = 0.05 * (x_max - x_min)
    pad_y = 0.05 * (y_max - y_min)
    x_min, x_max = x_min - pad_x, x_max + pad_x
    y_min, y_max = y_min - pad_y, y_max + pad_y

    inner_w = width - 2 * _MARGIN
    inner_h = height - 2 * _MARGIN

    def px(x: float) -> float:
        return _MARGIN + (x - x_min) / (x_max - x_min) * inner_w

    def py(y: float) -> float:
        return height - _MARGIN - (y - y_min) / (y_max - y_min) * inner_h

    colors = label_colors([p[2] for p in points] + [f.label for f in fits])

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        f'<rect x="{_fmt(_MARGIN)}" y="{_fmt(_MARGIN)}" width="{_fmt(inner_w)}" '
        f'height="{_fmt(inner_h)}" fill="none" stroke="#333333"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_fmt(width / 2)}" y="28" text-anchor="middle" '
            f'font-family="sans-serif" font-size="16">{_escape(title)}</text>'
        )
    parts.append(
        f'<text x="{_fmt(width / 2)}" y="{_fmt(height - 14)}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{_escape(xlabel)}</text>'
    )
    parts.append(
        f'<text x="16" y="{_fmt(height / 2)}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {_fmt(height / 2)})">{_escape(ylabel)}</text>'
    )
    for value, anchor_x, anchor_y, anchor in (
        (x_min, px(x_min), height - _MARGIN + 16, "middle"),
        (x_max, px(x_max), height - _MARGIN + 16, "middle"),
        (y_min, _MARGIN - 6, py(y_min) + 4, "end"),
        (y_max, _MARGIN - 6, py(y_max) + 4, "end"),
    ):
        parts.append(
            f'<text x="{_fmt(anchor_x)}" y="{_fmt(anchor_y)}" text-anchor="{anchor}" '
            f'font-family="sans-serif" font-size="10">{value:.3g}</text>'
        )

    for fit in fits:
        y0 = fit.slope * x_min
        y1 = fit.slope * x_max
        parts.append(
            f'<line x1="{_fmt(px(x_min))}" y1="{_fmt(py(y0))}" '
            f'x2="{_fmt(px(x_max))}" y2="{_fmt(py(y1))}" '
            f'stroke="{colors[str(fit.label)]}" stroke-width="1.5" '
            f'stroke-dasharray="6,4"/>'
        )

    for x, y, label in points:
        parts.append(
            f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" r="3.5" '
            f'fill="{colors[str(label)]}" fill-opacity="0.8"/>'
        )

    legend_y = _MARGIN + 12
    for lab in sorted(colors):
        parts.append(
            f'<rect x="{_fmt(width - _MARGIN - 130)}" y="{_fmt(legend_y - 9)}" '
            f'width="10" height="10" fill="{colors[lab]}"/>'
        )
        parts.append(
            f'<text x="{_fmt(width - _MARGIN - 115)}" y="{_fmt(legend_y)}" '
            f'font-family="sans-serif" font-size="11">{_escape(lab)}</text>'
        )
        legend_y += 16

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def write_svg(path, svg: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg)
