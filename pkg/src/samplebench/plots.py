"""Self-contained SVG renderings of benchmark results.

Output is plain SVG 1.1 built as text with fixed-precision coordinates,
so identical inputs give byte-identical files.
"""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .errors import ParameterError
from .harness import ComparisonSummary, TestStatistic

AXIS_LIMIT = 5.0
BAND_COLORS = {3: "#f4a6a6", 2: "#fbe38e", 1: "#a8dba8"}
REF_COLOR = "#3b6fb6"
USER_COLOR = "#d6453d"

_HEAD = '<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n'


def _f(v: float) -> str:
    s = "%.2f" % v
    return "0.00" if s == "-0.00" else s


def _svg_open(width: float, height: float) -> list[str]:
    return [
        _HEAD,
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}" font-family="sans-serif" font-size="12">\n',
        f'<rect x="0" y="0" width="{_f(width)}" height="{_f(height)}" fill="#ffffff"/>\n',
    ]


def _text(x, y, s, anchor="start", extra="") -> str:
    return f'<text x="{_f(x)}" y="{_f(y)}" text-anchor="{anchor}"{extra}>{escape(s)}</text>\n'


def _write(path, parts: Sequence[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("".join(parts))


def overview_svg(summary: ComparisonSummary, title: str = "") -> str:
    """Normalised metric overview: one row per metric over sigma bands.

    The x axis spans ``[-5, 5]`` reference standard deviations. Each row
    shows the user mean (marker) with a horizontal bar of half-width
    ``std_user / std_ref``; values beyond the axis become arrows at the edge.
    """
    rows = list(summary)
    if not rows:
        raise ParameterError("cannot plot an empty comparison summary")
    left, plot_w, right = 210.0, 480.0, 30.0
    top, row_h, bottom = 48.0, 26.0, 48.0
    width = left + plot_w + right
    height = top + row_h * len(rows) + bottom
    y0, y1 = top, top + row_h * len(rows)

    def px(z):
        return left + (z + AXIS_LIMIT) / (2 * AXIS_LIMIT) * plot_w

    out = _svg_open(width, height)
    if title:
        out.append(_text(width / 2, 24, title, "middle", ' font-size="14"'))
    for k in (3, 2, 1):
        out.append(
            f'<rect class="band band-{k}" data-sigma="{k}" x="{_f(px(-k))}" y="{_f(y0)}" '
            f'width="{_f(px(k) - px(-k))}" height="{_f(y1 - y0)}" fill="{BAND_COLORS[k]}"/>\n'
        )
    out.append(f'<rect class="frame" x="{_f(left)}" y="{_f(y0)}" width="{_f(plot_w)}" height="{_f(y1 - y0)}" '
               'fill="none" stroke="#444444"/>\n')
    out.append(f'<line class="center" x1="{_f(px(0))}" y1="{_f(y0)}" x2="{_f(px(0))}" y2="{_f(y1)}" '
               'stroke="#000000" stroke-width="1.5"/>\n')
    for t in range(-5, 6):
        x = px(t)
        out.append(f'<line x1="{_f(x)}" y1="{_f(y1)}" x2="{_f(x)}" y2="{_f(y1 + 5)}" stroke="#444444"/>\n')
        out.append(_text(x, y1 + 18, str(t), "middle"))
    out.append(_text(px(0), y1 + 36, "normalised deviation from IID reference [σ]", "middle"))

    for i, r in enumerate(rows):
        cy = top + row_h * (i + 0.5)
        label = r.metric + (" (degenerate)" if r.degenerate else "")
        out.append(_text(left - 8, cy + 4, label, "end"))
        attrs = f'data-metric={quoteattr(r.metric)} data-z="{r.z!r}" data-band={quoteattr(r.band)}'
        if abs(r.z) <= AXIS_LIMIT:
            lo = max(r.z - r.std_ratio, -AXIS_LIMIT)
            hi = min(r.z + r.std_ratio, AXIS_LIMIT)
            out.append(f'<line class="errorbar" x1="{_f(px(lo))}" y1="{_f(cy)}" x2="{_f(px(hi))}" y2="{_f(cy)}" '
                       'stroke="#000000" stroke-width="1.5"/>\n')
            out.append(f'<circle class="marker" {attrs} cx="{_f(px(r.z))}" cy="{_f(cy)}" r="4.5" fill="#000000"/>\n')
        else:
            sgn = 1.0 if r.z > 0 else -1.0
            tip = px(sgn * AXIS_LIMIT)
            base = tip - sgn * 12.0
            pts = f"{_f(tip)},{_f(cy)} {_f(base)},{_f(cy - 6)} {_f(base)},{_f(cy + 6)}"
            out.append(f'<polygon class="clip-arrow" {attrs} points="{pts}" fill="#000000"/>\n')
    out.append("</svg>\n")
    return "".join(out)


def plot_overview(summary: ComparisonSummary, path, title: str = "") -> None:
    _write(path, [overview_svg(summary, title)])


def histogram_counts(ref: TestStatistic, user: TestStatistic, nbins: int):
    """Shared equal-width bin edges over the union range and both count vectors."""
    if nbins < 1:
        raise ParameterError(f"nbins must be positive, got {nbins}")
    lo = float(min(ref.values.min(), user.values.min()))
    hi = float(max(ref.values.max(), user.values.max()))
    if hi <= lo:
        lo, hi = lo - 0.5, hi + 0.5
    edges = np.linspace(lo, hi, nbins + 1)
    c_ref, _ = np.histogram(ref.values, bins=edges)
    c_user, _ = np.histogram(user.values, bins=edges)
    return edges, c_ref, c_user


def teststatistic_svg(ref: TestStatistic, user: TestStatistic, nbins: int = 20,
                      user_label: str = "user samples") -> str:
    if ref.metric != user.metric:
        raise ParameterError(f"metric mismatch: {ref.metric!r} vs {user.metric!r}")
    edges, c_ref, c_user = histogram_counts(ref, user, nbins)
    left, plot_w, right = 70.0, 520.0, 30.0
    top, plot_h, bottom = 60.0, 300.0, 60.0
    width, height = left + plot_w + right, top + plot_h + bottom
    cmax = max(int(c_ref.max()), int(c_user.max()), 1)
    lo, hi = edges[0], edges[-1]

    def px(v):
        return left + (v - lo) / (hi - lo) * plot_w

    def py(c):
        return top + plot_h - c / cmax * plot_h

    out = _svg_open(width, height)
    out.append(_text(width / 2, 24, f"{ref.testcase}: {ref.metric}", "middle", ' font-size="14"'))
    for cls, counts, color in (("ref", c_ref, REF_COLOR), ("user", c_user, USER_COLOR)):
        for b, c in enumerate(counts):
            x0, x1 = px(edges[b]), px(edges[b + 1])
            out.append(
                f'<rect class="bar {cls}" data-bin="{b}" data-count="{int(c)}" x="{_f(x0)}" y="{_f(py(c))}" '
                f'width="{_f(x1 - x0)}" height="{_f(py(0) - py(c))}" fill="{color}" fill-opacity="0.45" '
                f'stroke="{color}"/>\n'
            )
    out.append(f'<rect class="frame" x="{_f(left)}" y="{_f(top)}" width="{_f(plot_w)}" height="{_f(plot_h)}" '
               'fill="none" stroke="#444444"/>\n')
    for k in range(5):
        v = lo + (hi - lo) * k / 4
        out.append(f'<line x1="{_f(px(v))}" y1="{_f(top + plot_h)}" x2="{_f(px(v))}" y2="{_f(top + plot_h + 5)}" '
                   'stroke="#444444"/>\n')
        out.append(_text(px(v), top + plot_h + 18, "%.4g" % v, "middle"))
    for k in range(5):
        c = cmax * k / 4
        out.append(_text(left - 6, py(c) + 4, "%.3g" % c, "end"))
    out.append(_text(left + plot_w / 2, height - 14, ref.metric, "middle", ' class="xlabel"'))
    out.append(f'<text class="ylabel" x="18" y="{_f(top + plot_h / 2)}" text-anchor="middle" '
               f'transform="rotate(-90 18 {_f(top + plot_h / 2)})">batches</text>\n')
    lx, ly = left + plot_w - 150, top + 12
    for k, (label, color) in enumerate((("IID reference", REF_COLOR), (user_label, USER_COLOR))):
        y = ly + 18 * k
        out.append(f'<rect class="legend" x="{_f(lx)}" y="{_f(y - 9)}" width="12" height="12" fill="{color}" '
                   'fill-opacity="0.45" stroke="' + color + '"/>\n')
        out.append(_text(lx + 18, y + 2, label))
    out.append("</svg>\n")
    return "".join(out)


def plot_teststatistic(ref: TestStatistic, user: TestStatistic, nbins: int = 20, path=None,
                       user_label: str = "user samples") -> str:
    svg = teststatistic_svg(ref, user, nbins, user_label)
    if path is not None:
        _write(path, [svg])
    return svg

