"""Static SVG scatter plots with an optional fitted line.

The only ``<line>`` element in the output is the fit; axes and ticks are
drawn as ``<path>`` and every data point is one ``<circle>``.
"""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 480
MARGIN = 60


def _span(values: Sequence[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


def scatter_svg(
    xs: Sequence[float],
    ys: Sequence[float],
    fit: tuple[float, float] | None = None,
    title: str = "",
    x_label: str = "x",
    y_label: str = "y",
) -> str:
    """Render points and, if ``fit=(slope, intercept)``, the fitted line."""
    if len(xs) != len(ys):
        raise ValueError("xs and ys differ in length")
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(
            f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" font-size="16">{escape(title)}</text>'
        )
    left, right = MARGIN, WIDTH - MARGIN
    top, bottom = MARGIN, HEIGHT - MARGIN
    out.append(
        f'<path d="M{left},{top} L{left},{bottom} L{right},{bottom}" '
        'stroke="black" fill="none" class="axes"/>'
    )
    out.append(
        f'<text x="{(left + right) / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle" '
        f'font-size="13">{escape(x_label)}</text>'
    )
    out.append(
        f'<text x="18" y="{(top + bottom) / 2:.1f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 18 {(top + bottom) / 2:.1f})">{escape(y_label)}</text>'
    )
    if xs:
        x0, x1 = _span(xs)
        y0, y1 = _span(ys)

        def px(x: float) -> float:
            return left + (x - x0) / (x1 - x0) * (right - left)

        def py(y: float) -> float:
            return bottom - (y - y0) / (y1 - y0) * (bottom - top)

        for value, label in ((x0, f"{x0:.4g}"), (x1, f"{x1:.4g}")):
            out.append(f'<path d="M{px(value):.2f},{bottom} l0,6" stroke="black" class="tick"/>')
            out.append(
                f'<text x="{px(value):.2f}" y="{bottom + 20}" text-anchor="middle" '
                f'font-size="11">{label}</text>'
            )
        for value, label in ((y0, f"{y0:.4g}"), (y1, f"{y1:.4g}")):
            out.append(f'<path d="M{left},{py(value):.2f} l-6,0" stroke="black" class="tick"/>')
            out.append(
                f'<text x="{left - 10}" y="{py(value) + 4:.2f}" text-anchor="end" '
                f'font-size="11">{label}</text>'
            )
        for x, y in zip(xs, ys):
            out.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="4" fill="steelblue"/>')
        if fit is not None:
            slope, intercept = fit
            out.append(
                f'<line x1="{px(x0):.2f}" y1="{py(slope * x0 + intercept):.2f}" '
                f'x2="{px(x1):.2f}" y2="{py(slope * x1 + intercept):.2f}" '
                'stroke="firebrick" stroke-width="2" class="fit"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def regression_svg(result, title: str = "") -> str:
    xs = [p[1] for p in result.points]
    ys = [p[2] for p in result.points]
    return scatter_svg(
        xs, ys, fit=(result.slope, result.intercept), title=title,
        x_label="automated score", y_label="manual score",
    )


def length_svg(reports) -> str:
    """ABHINAW score against text length, with an OLS fit when one exists."""
    from .analysis import regress
    from .errors import InputError

    xs = [float(r.text_length) for r in reports]
    ys = [r.abhinaw for r in reports]
    fit = None
    try:
        res = regress(
            [(r.reference_id, x) for r, x in zip(reports, xs)],
            [(r.reference_id, y) for r, y in zip(reports, ys)],
        )
        fit = (res.slope, res.intercept)
    except InputError:
        pass
    return scatter_svg(xs, ys, fit=fit, title="ABHINAW score by text length",
                       x_label="text length", y_label="ABHINAW score")
