"""Minimal Sankey rendering of community life-cycles as standalone SVG.

One column per timestep, one colored block per static community (height
proportional to its size), and gray ribbons between consecutive columns
whose stroke width is proportional to the number of migrating members.
"""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path
from xml.sax.saxutils import escape

from .model import FlowRecord, GroundTruth

PALETTE = ("#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
           "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac")


def _layout(sizes: dict, T: int, scale: float, gap: float, top: float):
    pos = {}
    for t in range(T):
        y = top
        for k in sorted(k for (k, tt) in sizes if tt == t):
            h = sizes[(k, t)] * scale
            pos[(k, t)] = (y, h)
            y += h + gap
    return pos


def render_sankey(sizes: dict, flows: Sequence[FlowRecord], T: int, scale: float = 0.5,
                  column_gap: float = 120.0, block_width: float = 14.0, gap: float = 8.0,
                  margin: float = 20.0) -> str:
    """SVG text for blocks ``sizes[(k, t)]`` and the community-to-community parts of ``flows``."""
    if not sizes:
        return ('<svg xmlns="http://www.w3.org/2000/svg" width="0" height="0" '
                'viewBox="0 0 0 0"></svg>\n')
    pos = _layout(sizes, T, scale, gap, margin)
    width = 2 * margin + (T - 1) * column_gap + block_width
    height = max(y + h for y, h in pos.values()) + margin

    def x_of(t):
        return margin + t * column_gap

    out_off = {key: 0.0 for key in pos}
    in_off = {key: 0.0 for key in pos}
    ribbons = []
    for fr in sorted(flows, key=lambda f: (f.t, f.destination)):
        dest = (fr.destination, fr.t)
        if dest not in pos:
            continue
        for src in sorted(s for s in fr.sources if not isinstance(s, str)):
            origin = (src, fr.t - 1)
            if origin not in pos:
                continue
            count = fr.sources[src]
            w = count * scale
            y0 = pos[origin][0] + out_off[origin] + w / 2
            y1 = pos[dest][0] + in_off[dest] + w / 2
            out_off[origin] += w
            in_off[dest] += w
            x0 = x_of(fr.t - 1) + block_width
            x1 = x_of(fr.t)
            mid = (x0 + x1) / 2
            ribbons.append(
                f'<path class="flow" d="M{x0:.2f},{y0:.2f} C{mid:.2f},{y0:.2f} {mid:.2f},{y1:.2f} {x1:.2f},{y1:.2f}" '
                f'fill="none" stroke="#999999" stroke-opacity="0.5" stroke-width="{w:.2f}" '
                f'data-source="{src}" data-target="{fr.destination}" data-t="{fr.t}" data-count="{count}"/>'
            )

    blocks = []
    for (k, t), (y, h) in sorted(pos.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        color = PALETTE[k % len(PALETTE)]
        blocks.append(
            f'<rect class="community" x="{x_of(t):.2f}" y="{y:.2f}" width="{block_width:.2f}" height="{h:.2f}" '
            f'fill="{color}" data-k="{k}" data-t="{t}" data-size="{sizes[(k, t)]}">'
            f'<title>{escape(f"community {k} at t={t}: {sizes[(k, t)]} members")}</title></rect>'
        )
    body = "\n".join(ribbons + blocks)
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
            f'viewBox="0 0 {width:.2f} {height:.2f}">\n{body}\n</svg>\n')


def emit_sankey(gt: GroundTruth, path, **kwargs) -> Path:
    sizes = {(c.k, sc.t): len(sc) for c in gt.communities for sc in c.sequence}
    path = Path(path)
    path.write_text(render_sankey(sizes, gt.flows, gt.T, **kwargs), encoding="utf-8")
    return path
