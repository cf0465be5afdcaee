"""Minimal deterministic SVG writer.

Reports must be byte-identical across runs and concurrency settings, so
plots are emitted with a fixed-format writer instead of a plotting
library (whose output embeds hashed ids and metadata).  Coordinates are
formatted to two decimals; callers work in pixel space.
"""

from __future__ import annotations


def _fmt(value: float) -> str:
    return f"{value:.2f}"


class SvgCanvas:
    def __init__(self, width: float, height: float):
        self.width = width
        self.height = height
        self._parts: list[str] = []

    def line(self, x1, y1, x2, y2, stroke="#333333", width=1.0, dash: str | None = None):
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        self._parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}"'
            f' stroke="{stroke}" stroke-width="{_fmt(width)}"{dash_attr} />'
        )

    def polyline(self, points, stroke="#1f77b4", width=1.5, fill="none"):
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
        self._parts.append(
            f'<polyline points="{coords}" fill="{fill}" stroke="{stroke}"'
            f' stroke-width="{_fmt(width)}" />'
        )

    def polygon(self, points, fill="#1f77b4", opacity=0.25):
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
        self._parts.append(
            f'<polygon points="{coords}" fill="{fill}" fill-opacity="{_fmt(opacity)}" stroke="none" />'
        )

    def circle(self, cx, cy, r, fill="#1f77b4"):
        self._parts.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" fill="{fill}" />'
        )

    def text(self, x, y, content, size=11.0, anchor="start", fill="#222222"):
        content = (
            str(content)
            .replace("&", "&amp;")
            .replace("<", "&lt;")
            .replace(">", "&gt;")
        )
        self._parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{_fmt(size)}"'
            f' font-family="Helvetica, Arial, sans-serif" text-anchor="{anchor}"'
            f' fill="{fill}">{content}</text>'
        )

    def to_string(self) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(self.width)}"'
            f' height="{_fmt(self.height)}" viewBox="0 0 {_fmt(self.width)} {_fmt(self.height)}">'
        )
        return head + "\n" + "\n".join(self._parts) + "\n</svg>\n"
