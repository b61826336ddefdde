"""Deterministic ASCII and SVG rendering of patterns.

Symbol names drive the visuals: the generators' naming conventions (kind
prefix B/W/V/H, ``.bh``/``.bt`` blue marks, ``.c{xy}`` traffic colors, TM
``.h.`` heads) map to glyphs and fills; anything else falls back to a glyph
derived from the name and a grey fill derived from a stable hash.
"""

from __future__ import annotations

import zlib

from .core import Pattern, Sft2d

__all__ = ["render_ascii", "render_svg"]


def _parts(name: str) -> list[str]:
    return name.split(".")


def glyph(name: str) -> str:
    parts = _parts(name)
    if ".h." in name:
        return "@"  # machine head
    if parts[0] == "B":
        return "."
    if parts[0] == "W":
        return "*" if (".bh" in name or ".bt" in name) else "+"
    if parts[0] == "V":
        return "|"
    if parts[0] == "H":
        return "-"
    if len(parts) >= 2 and parts[1] in ("x", "lf", "rf") or (len(parts) >= 2 and parts[1] in ("la", "ra")):
        return parts[0][-1]  # tape char
    return name[0]


def render_ascii(x: Sft2d, p: Pattern) -> str:
    """Rows printed top-down; cell (0,0) is bottom-left."""
    lines = []
    for j in range(p.height - 1, -1, -1):
        lines.append("".join(glyph(x.alphabet.names[p.get(i, j)]) for i in range(p.width)))
    return "\n".join(lines) + "\n"


_TRAFFIC = {"r": "#d9534f", "g": "#5cb85c", "y": "#f0ad4e"}


def _fill(name: str) -> str:
    if ".bh" in name or ".bt" in name or ".b1" in name:
        return "#4169e1"  # blue-marked
    for part in _parts(name):
        if len(part) == 3 and part[0] == "c" and part[1] in "rgy" and part[2] in "rgy":
            return _TRAFFIC[part[1]]
    if ".h." in name:
        return "#222222"
    head = _parts(name)[0]
    if head == "B":
        return "#f2f2f2"
    if head == "W":
        return "#c8c8c8"
    if head in ("V", "H"):
        return "#e0e0e0"
    shade = 200 + (zlib.crc32(name.encode()) % 40)
    return f"#{shade:02x}{shade:02x}{shade:02x}"


def _stroke(name: str) -> str:
    for part in _parts(name):
        if len(part) == 3 and part[0] == "c" and part[1] in "rgy" and part[2] in "rgy":
            return _TRAFFIC[part[2]]
    return "#888888"


_SVG_GLYPH = {"|": "↑", "-": "→", "+": "+", "*": "★", "@": "@", ".": ""}


def render_svg(x: Sft2d, p: Pattern, cell: int = 24) -> str:
    """SVG 1.1, one rect per cell plus a glyph overlay, origin bottom-left."""
    w, h = p.width * cell, p.height * cell
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
    ]
    for j in range(p.height):
        for i in range(p.width):
            name = x.alphabet.names[p.get(i, j)]
            px = i * cell
            py = (p.height - 1 - j) * cell
            out.append(
                f'<rect x="{px}" y="{py}" width="{cell}" height="{cell}" '
                f'fill="{_fill(name)}" stroke="{_stroke(name)}" stroke-width="1"/>'
            )
            g = _SVG_GLYPH.get(glyph(name), glyph(name))
            if g:
                out.append(
                    f'<text x="{px + cell // 2}" y="{py + cell * 3 // 4}" '
                    f'font-size="{cell * 2 // 3}" text-anchor="middle" '
                    f'font-family="monospace">{g}</text>'
                )
    out.append("</svg>")
    return "\n".join(out) + "\n"
