"""Bar chart of probability boosts (SVG) and Venn counts for a single pair.

The chart draws one horizontal bar per significant pair in its reported
orientation: the bar starts at <P(A=1)> and ends at <P(A=1|B=1)>, with an
error bar of one posterior sd of P(A=1|B=1) at its end. Blue bars are
positive added values, red bars negative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

from .errors import LabelLookupError

BLUE = "#1f77b4"
RED = "#d62728"

WIDTH = 800
LEFT = 240  # room for "A | B" labels
RIGHT = 30
TOP = 40
ROW = 20
BOTTOM = 50
PLOT_WIDTH = WIDTH - LEFT - RIGHT


@dataclass(frozen=True)
class Bar:
    label: str
    x_start: float
    x_end: float
    y: float
    err_low: float
    err_high: float
    color: str
    delta_p: float


def x_of(probability: float) -> float:
    return LEFT + PLOT_WIDTH * probability


def bar_geometry(rows: Sequence[dict]) -> list[Bar]:
    """Pixel geometry for the significant rows of a results table.

    Bars are ordered by added value, largest first.
    """
    chosen = [r for r in rows if r["significant"]]
    chosen.sort(key=lambda r: (-r["delta_p"], r["var_a"], r["var_b"]))
    bars = []
    for i, r in enumerate(chosen):
        end, sd = r["prob_a_given_b"], r["prob_a_given_b_sd"]
        bars.append(
            Bar(
                label=f"{r['var_a']} | {r['var_b']}",
                x_start=x_of(r["prob_a"]),
                x_end=x_of(end),
                y=TOP + i * ROW,
                err_low=x_of(max(0.0, end - sd)),
                err_high=x_of(min(1.0, end + sd)),
                color=BLUE if r["delta_p"] > 0 else RED,
                delta_p=r["delta_p"],
            )
        )
    return bars


def render_bar_chart(rows: Sequence[dict], checksum: str | None = None) -> str:
    bars = bar_geometry(rows)
    height = TOP + max(len(bars), 1) * ROW + BOTTOM
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" '
        f'viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="11">'
    ]
    if checksum:
        out.append(f"<!-- input-sha256: {checksum} -->")
    out.append(
        f'<text x="{LEFT}" y="20">P(A=1) to P(A=1|B=1) for significant pairs (A | B)</text>'
    )
    if not bars:
        out.append(
            f'<text x="{LEFT}" y="{TOP + 12}" fill="#555">'
            "No statistically significant pairs at the corrected threshold.</text>"
        )
    for b in bars:
        lo, hi = sorted((b.x_start, b.x_end))
        cy = b.y + ROW / 2
        out.append(
            f'<text x="{LEFT - 6}" y="{cy + 4:.2f}" text-anchor="end">{escape(b.label)}</text>'
        )
        out.append(
            f'<rect x="{lo:.2f}" y="{b.y + 3:.2f}" width="{hi - lo:.2f}" '
            f'height="{ROW - 6}" fill="{b.color}"/>'
        )
        out.append(
            f'<line x1="{b.err_low:.2f}" y1="{cy:.2f}" x2="{b.err_high:.2f}" '
            f'y2="{cy:.2f}" stroke="black" stroke-width="1"/>'
        )
    axis_y = TOP + max(len(bars), 1) * ROW + 5
    out.append(
        f'<line x1="{LEFT}" y1="{axis_y}" x2="{LEFT + PLOT_WIDTH}" y2="{axis_y}" stroke="black"/>'
    )
    for k in range(6):
        v = k / 5
        x = x_of(v)
        out.append(f'<line x1="{x:.2f}" y1="{axis_y}" x2="{x:.2f}" y2="{axis_y + 4}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{axis_y + 16}" text-anchor="middle">{v:.1f}</text>')
    out.append(
        f'<text x="{LEFT + PLOT_WIDTH / 2:.2f}" y="{axis_y + 34}" text-anchor="middle">probability</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class VennCounts:
    a: str
    b: str
    a_only: int
    b_only: int
    both: int


def venn_counts(rows: Sequence[dict], a: str, b: str) -> VennCounts:
    """Instance counts for A only, B only and both, from a results table."""
    for r in rows:
        if (r["var_a"], r["var_b"]) == (a, b):
            return VennCounts(a, b, r["n10"], r["n01"], r["n11"])
        if (r["var_a"], r["var_b"]) == (b, a):
            return VennCounts(a, b, r["n01"], r["n10"], r["n11"])
    raise LabelLookupError(f"pair {a},{b} is not in the results table")
