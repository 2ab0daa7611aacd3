"""CSV tables and dependency-free SVG scatter plots."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence
from xml.sax.saxutils import escape

REPORT_COLUMNS = (
    "graph_id",
    "n",
    "m",
    "k",
    "c_hat",
    "estimated_exponent",
    "mean_c_rel",
    "mean_predicted_exponent_thm",
    "mean_predicted_exponent_exp",
    "mean_delta_rho",
    "band",
)


@dataclass(frozen=True)
class ReportRow:
    graph_id: str
    n: int
    m: int
    k: int
    c_hat: float
    estimated_exponent: float
    mean_c_rel: float
    mean_predicted_exponent_thm: float
    mean_predicted_exponent_exp: float
    mean_delta_rho: float
    band: str

    def as_dict(self) -> dict:
        return {col: getattr(self, col) for col in REPORT_COLUMNS}


def format_value(value) -> str:
    """Cell text: floats at 12 significant digits, NaN and None as empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return format(value, ".12g")
    return str(value)


def emit_csv(
    rows: Iterable[dict | ReportRow],
    path: str | Path,
    columns: Sequence[str] = REPORT_COLUMNS,
    sort_key: Callable[[dict], object] | None = lambda r: r["graph_id"],
) -> Path:
    rows = [r.as_dict() if isinstance(r, ReportRow) else r for r in rows]
    if not rows:
        raise ValueError("refusing to write a CSV without rows")
    if sort_key is not None:
        rows = sorted(rows, key=sort_key)
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(row.get(col)) for col in columns])
    return path


def read_report_csv(path: str | Path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))


@dataclass
class AxesConfig:
    x_label: str = "estimated exponent"
    y_label: str = "predicted exponent"
    title: str = ""
    x_range: tuple[float, float] | None = None
    y_range: tuple[float, float] | None = None
    reference_line: bool = False
    band_markers: Sequence[float] = ()
    hlines: Sequence[float] = ()
    width: int = 480
    height: int = 400
    margin: int = 56
    point_radius: float = 3.0

    def validate(self) -> None:
        for rng in (self.x_range, self.y_range):
            if rng is not None and not (math.isfinite(rng[0]) and math.isfinite(rng[1]) and rng[0] < rng[1]):
                raise ValueError(f"axis range {rng} must be finite with min < max")
        if self.width <= 2 * self.margin or self.height <= 2 * self.margin:
            raise ValueError("plot area is empty; enlarge width/height or shrink the margin")
        if self.point_radius <= 0:
            raise ValueError("point radius must be positive")


def _auto_range(values: list[float], extra: Sequence[float]) -> tuple[float, float]:
    vals = values + [v for v in extra if math.isfinite(v)]
    lo, hi = min(vals), max(vals)
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def emit_scatter_svg(
    points: Sequence[tuple[float, float]],
    path: str | Path | None = None,
    axes: AxesConfig = AxesConfig(),
) -> str:
    """Render a scatter plot and optionally write it to ``path``.

    Only markers and guide lines (reference diagonal, band markers,
    horizontal lines) are ``<line>`` elements; the frame and ticks are paths,
    so tests can count guides directly.
    """
    axes.validate()
    pts = [(float(x), float(y)) for x, y in points if math.isfinite(x) and math.isfinite(y)]
    if not pts:
        raise ValueError("scatter plot needs at least one finite point")
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x0, x1 = axes.x_range or _auto_range(xs, axes.band_markers)
    y0, y1 = axes.y_range or _auto_range(ys, axes.hlines)
    w, h, mg = axes.width, axes.height, axes.margin
    pw, ph = w - 2 * mg, h - 2 * mg

    def sx(x: float) -> float:
        return mg + (x - x0) / (x1 - x0) * pw

    def sy(y: float) -> float:
        return h - mg - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
    ]
    if axes.title:
        out.append(f'<text x="{w / 2:.2f}" y="{mg / 2:.2f}" text-anchor="middle" font-size="14">{escape(axes.title)}</text>')
    out.append(f'<path d="M{mg} {mg}H{w - mg}V{h - mg}H{mg}Z" fill="none" stroke="black"/>')

    ticks, labels = [], []
    for i in range(5):
        xv = x0 + (x1 - x0) * i / 4
        yv = y0 + (y1 - y0) * i / 4
        ticks.append(f"M{sx(xv):.2f} {h - mg}v5M{mg} {sy(yv):.2f}h-5")
        labels.append(f'<text x="{sx(xv):.2f}" y="{h - mg + 18}" text-anchor="middle" font-size="10">{xv:.3g}</text>')
        labels.append(f'<text x="{mg - 8}" y="{sy(yv) + 3:.2f}" text-anchor="end" font-size="10">{yv:.3g}</text>')
    out.append(f'<path d="{"".join(ticks)}" stroke="black"/>')
    out.extend(labels)
    out.append(f'<text x="{w / 2:.2f}" y="{h - 12}" text-anchor="middle" font-size="12">{escape(axes.x_label)}</text>')
    out.append(
        f'<text x="14" y="{h / 2:.2f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {h / 2:.2f})">{escape(axes.y_label)}</text>'
    )

    guides = []
    if axes.reference_line:
        lo, hi = max(x0, y0), min(x1, y1)
        if lo < hi:
            guides.append((lo, lo, hi, hi, "gray"))
    for xv in axes.band_markers:
        if x0 <= xv <= x1:
            guides.append((xv, y0, xv, y1, "red"))
    for yv in axes.hlines:
        if y0 <= yv <= y1:
            guides.append((x0, yv, x1, yv, "blue"))
    for ax, ay, bx, by, colour in guides:
        out.append(
            f'<line x1="{sx(ax):.2f}" y1="{sy(ay):.2f}" x2="{sx(bx):.2f}" y2="{sy(by):.2f}" '
            f'stroke="{colour}" stroke-dasharray="4 3"/>'
        )
    for x, y in pts:
        out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="{axes.point_radius}" fill="steelblue" fill-opacity="0.7"/>')
    out.append("</svg>")
    svg = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(svg)
    return svg
