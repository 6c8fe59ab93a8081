"""Deterministic CSV and SVG emitters."""

from __future__ import annotations

import hashlib
import json
import math
from typing import Iterable, Sequence

SIG_DIGITS = 12


def fmt(x) -> str:
    """Numbers with 12 significant digits; everything else via str."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        out = f"{x:.{SIG_DIGITS}g}"
        return "0" if out == "-0" else out
    if hasattr(x, "item"):          # numpy scalars
        return fmt(x.item())
    return str(x)


def config_hash(config: dict) -> str:
    """sha256 of the canonical JSON form of a config, ignoring output paths."""
    body = {k: v for k, v in config.items() if k not in ("out", "svg", "config")}
    text = json.dumps(body, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(text.encode()).hexdigest()


def csv_text(header: Sequence[str], rows: Iterable[Sequence], digest: str) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    lines.append(f"# config-hash={digest}")
    return "\n".join(lines) + "\n"


_W, _H = 800, 600
_PAD = 70
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def svg_chart(series: dict[str, tuple[Sequence[float], Sequence[float]]],
              title: str, xlabel: str, ylabel: str) -> str:
    """A line chart with no timestamps or random ids, so output bytes are stable."""
    pts = [(float(x), float(y)) for xs, ys in series.values() for x, y in zip(xs, ys)
           if math.isfinite(float(x)) and math.isfinite(float(y))]
    if not pts:
        pts = [(0.0, 0.0)]
    x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
    y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1

    def sx(x):
        return _PAD + (x - x0) / (x1 - x0) * (_W - 2 * _PAD)

    def sy(y):
        return _H - _PAD - (y - y0) / (y1 - y0) * (_H - 2 * _PAD)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.1f}" y="30" text-anchor="middle" font-size="18">{_esc(title)}</text>',
        f'<line x1="{_PAD}" y1="{_H - _PAD}" x2="{_W - _PAD}" y2="{_H - _PAD}" stroke="black"/>',
        f'<line x1="{_PAD}" y1="{_PAD}" x2="{_PAD}" y2="{_H - _PAD}" stroke="black"/>',
        f'<text x="{_W / 2:.1f}" y="{_H - 20}" text-anchor="middle" font-size="14">{_esc(xlabel)}</text>',
        f'<text x="20" y="{_H / 2:.1f}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 20 {_H / 2:.1f})">{_esc(ylabel)}</text>',
    ]
    for v, anchor in ((x0, "start"), (x1, "end")):
        out.append(f'<text x="{sx(v):.2f}" y="{_H - _PAD + 18}" text-anchor="{anchor}" font-size="12">{fmt(v)}</text>')
    for v in (y0, y1):
        out.append(f'<text x="{_PAD - 6}" y="{sy(v):.2f}" text-anchor="end" font-size="12">{fmt(v)}</text>')
    for i, (name, (xs, ys)) in enumerate(series.items()):
        color = _COLORS[i % len(_COLORS)]
        coords = " ".join(f"{sx(float(x)):.2f},{sy(float(y)):.2f}" for x, y in zip(xs, ys)
                          if math.isfinite(float(x)) and math.isfinite(float(y)))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>')
        out.append(f'<text x="{_W - _PAD - 4}" y="{_PAD + 16 * (i + 1)}" text-anchor="end" '
                   f'font-size="12" fill="{color}">{_esc(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
