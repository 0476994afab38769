"""Static SVG rendering of tree payloads.

Pure function of the payload: same payload, same bytes. Floats are
fixed to two decimals, elements are emitted in payload order, and no
randomness or timestamps enter the output.
"""

from __future__ import annotations

from xml.sax.saxutils import escape, quoteattr

from .metrics import Metric
from .model import Run
from .view import ENCODING, build_tree_payload

PAD = 40.0
LABEL_SPACE = 150.0
FONT = "12px sans-serif"


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _rgb(hex_color: str) -> tuple[int, int, int]:
    h = hex_color.lstrip("#")
    return tuple(int(h[i:i + 2], 16) for i in (0, 2, 4))


def _mix(low: str, high: str, t: float) -> str:
    lo, hi = _rgb(low), _rgb(high)
    return "#" + "".join(f"{round(l + (h - l) * t):02x}" for l, h in zip(lo, hi))


def _fill(entry: dict, comparing: bool) -> str:
    t = entry["encoded"]
    if not comparing:
        return _mix(ENCODING["fill_low"], ENCODING["fill_high"], t)
    if t >= 0:
        return _mix(ENCODING["diverging_zero"], ENCODING["diverging_positive"], t)
    return _mix(ENCODING["diverging_zero"], ENCODING["diverging_negative"], -t)


def _title(entry: dict, comparing: bool) -> str:
    bits = [f"{entry['name']}: {entry['value_ns']} ns ({entry['mode']})",
            f"count {entry['count']}",
            entry["path"]]
    if entry["hidden_descendants"]:
        bits.append(f"hides {entry['hidden_descendants']} nodes")
    if comparing:
        if entry["unmatched"]:
            bits.append("unmatched")
        else:
            bits.append(f"delta {entry['delta_ns']:+d} ns")
            if entry["mode_changed"]:
                bits.append(f"mode now {entry['mode_b']}")
    return " | ".join(bits)


def render_svg(payload: dict) -> str:
    comparing = payload["compare_with"] is not None
    radius = ENCODING["node_radius"]
    width = payload["width"] + 2 * PAD + LABEL_SPACE
    height = payload["height"] + 2 * PAD
    pos = {n["id"]: (n["x"] + PAD, n["y"] + PAD) for n in payload["nodes"]}

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<desc>{escape(payload["run_id"])} | metric {payload["metric"]}'
        + (f' | against {escape(payload["compare_with"])}' if comparing else "")
        + '</desc>',
    ]

    for e in payload["edges"]:
        x1, y1 = pos[e["source"]]
        x2, y2 = pos[e["target"]]
        mx = (x1 + x2) / 2
        out.append(
            f'<path class="edge" d="M{_fmt(x1)} {_fmt(y1)} C{_fmt(mx)} {_fmt(y1)} '
            f'{_fmt(mx)} {_fmt(y2)} {_fmt(x2)} {_fmt(y2)}" '
            'fill="none" stroke="#999999" stroke-width="1.00"/>')

    for n in payload["nodes"]:
        x, y = pos[n["id"]]
        fill = _fill(n, comparing)
        dash = ENCODING["mode_dash"][n["mode"]]
        stroke, stroke_width = "#333333", 1.5
        if comparing and n["mode_changed"]:
            stroke, stroke_width = ENCODING["mode_change_border"], 2.5
        attrs = f'fill="{fill}" stroke="{stroke}" stroke-width="{_fmt(stroke_width)}"'
        if dash:
            attrs += f' stroke-dasharray="{dash}"'
        if comparing and n["unmatched"]:
            attrs += f' opacity="{_fmt(ENCODING["unmatched_opacity"])}"'
        title = f"<title>{escape(_title(n, comparing))}</title>"
        if n["mark"] == "triangle":
            d = (f'M{_fmt(x + radius)} {_fmt(y)} L{_fmt(x - radius)} {_fmt(y - radius)} '
                 f'L{_fmt(x - radius)} {_fmt(y + radius)} Z')
            out.append(f'<path class="node shape-triangle" data-id="{n["id"]}" '
                       f'd="{d}" {attrs}>{title}</path>')
        else:
            out.append(f'<circle class="node shape-circle" data-id="{n["id"]}" '
                       f'cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(radius)}" '
                       f'{attrs}>{title}</circle>')
        label = escape(n["name"])
        out.append(f'<text class="label" x="{_fmt(x + radius + 4)}" '
                   f'y="{_fmt(y + 4)}" style={quoteattr(f"font: {FONT}")}>{label}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_run(run: Run, metric: Metric = Metric.INCLUSIVE,
               compare_with: Run | None = None, **view_kw) -> str:
    """Payload assembly plus rendering in one step."""
    payload = build_tree_payload(run, metric=metric, compare_with=compare_with, **view_kw)
    return render_svg(payload)
