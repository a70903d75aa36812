"""Deterministic SVG rendering of the training-set-size ablation curves.

One polyline per task: x is the training fraction, y the mean F1 of the
runs at that fraction.  Written by hand so identical inputs give identical
bytes, which matters for reproducibility checks.
"""

from __future__ import annotations

from .metrics import MetricsReport

_WIDTH, _HEIGHT = 640, 420
_MARGIN_LEFT, _MARGIN_RIGHT, _MARGIN_TOP, _MARGIN_BOTTOM = 60, 150, 20, 40

_COLORS = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def _x(fraction: float) -> float:
    span = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    return _MARGIN_LEFT + (fraction - 0.25) / 0.75 * span


def _y(f1: float) -> float:
    span = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM
    return _MARGIN_TOP + (1.0 - f1) * span


def render_ablation_svg(report: MetricsReport) -> str:
    """Plot mean F1 against training fraction for every task in the report."""
    curves: dict[str, dict[float, float]] = {}
    for entry in report.entries:
        curves.setdefault(entry.task, {})[entry.fraction] = entry.aggregate.mean_f1

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
    ]
    # axes
    x0, y0 = _MARGIN_LEFT, _HEIGHT - _MARGIN_BOTTOM
    x1, y1 = _WIDTH - _MARGIN_RIGHT, _MARGIN_TOP
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>')
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>')
    for fraction in (0.25, 0.5, 0.75, 1.0):
        x = _x(fraction)
        parts.append(f'<line x1="{x:.1f}" y1="{y0}" x2="{x:.1f}" y2="{y0 + 5}" stroke="black"/>')
        parts.append(
            f'<text x="{x:.1f}" y="{y0 + 18}" text-anchor="middle">{int(fraction * 100)}%</text>'
        )
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = _y(tick)
        parts.append(f'<line x1="{x0 - 5}" y1="{y:.1f}" x2="{x0}" y2="{y:.1f}" stroke="black"/>')
        parts.append(
            f'<text x="{x0 - 8}" y="{y + 4:.1f}" text-anchor="end">{tick:.2f}</text>'
        )
    parts.append(
        f'<text x="{(x0 + x1) / 2:.1f}" y="{_HEIGHT - 8}" text-anchor="middle">'
        "training fraction</text>"
    )
    parts.append(
        f'<text x="14" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 14 {(y0 + y1) / 2:.1f})">mean F1</text>'
    )

    for idx, (task, points) in enumerate(sorted(curves.items())):
        color = _COLORS[idx % len(_COLORS)]
        coords = [(f, points[f]) for f in sorted(points)]
        path = " ".join(f"{_x(f):.1f},{_y(v):.1f}" for f, v in coords)
        parts.append(
            f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
        for f, v in coords:
            parts.append(
                f'<circle cx="{_x(f):.1f}" cy="{_y(v):.1f}" r="3" fill="{color}"/>'
            )
        ly = _MARGIN_TOP + 16 * idx + 8
        lx = _WIDTH - _MARGIN_RIGHT + 12
        parts.append(
            f'<line x1="{lx}" y1="{ly}" x2="{lx + 18}" y2="{ly}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{lx + 24}" y="{ly + 4}">{task}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
