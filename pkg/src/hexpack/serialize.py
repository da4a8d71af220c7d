"""Deterministic JSON and SVG serialization.

Floats are rendered with 17 significant digits, object keys sorted, and
element order fixed, so identical inputs produce byte-identical output and
golden-file comparisons are meaningful.
"""

from __future__ import annotations

import math

from .circles import OrientedCircle
from .lattice import CLASS_DIR, DIR_CLASS, EdgeField, Window
from .layout import PackingLayout
from .moebius import INF, is_inf

SCHEMA_FIELD = "hexpack/field"
SCHEMA_LAYOUT = "hexpack/layout"
SCHEMA_FLOWER = "hexpack/flower"
SCHEMA_GRID = "hexpack/grid-image"
VERSION = 1

_LINE_CLIP = 1e6


def _fmt_float(x) -> str:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite float in serialization")
    if x == int(x) and abs(x) < 1e16:
        return repr(float(x))
    return format(x, ".17g")


def dumps(value, indent: int = 0) -> str:
    """JSON text with sorted keys and fixed float formatting."""
    return _render(value) + "\n"


def _render(value) -> str:
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _fmt_float(value)
    if isinstance(value, complex):
        return _render([value.real, value.imag])
    if isinstance(value, dict):
        items = sorted(value.items(), key=lambda kv: kv[0])
        inner = ",".join(f"{_render(str(k))}:{_render(v)}" for k, v in items)
        return "{" + inner + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_render(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value)!r}")


def point_obj(p):
    if is_inf(p):
        return "inf"
    p = complex(p)
    return [p.real, p.imag]


def parse_point(obj):
    if obj == "inf":
        return INF
    return complex(obj[0], obj[1])


# -- edge fields -----------------------------------------------------------

def field_to_obj(fld: EdgeField) -> dict:
    edges = []
    for (n, m, cls), v in fld.edges():
        edges.append({"n": n, "m": m, "dir": CLASS_DIR[cls],
                      "s_re": v.real, "s_im": v.imag})
    obj = {
        "schema": SCHEMA_FIELD,
        "version": VERSION,
        "window": {"n_min": fld.window.n_min, "n_max": fld.window.n_max,
                   "m_min": fld.window.m_min, "m_max": fld.window.m_max},
        "edges": edges,
    }
    if fld.params is not None:
        obj["params"] = {"alpha": fld.params.alpha, "beta": fld.params.beta,
                         "gamma": fld.params.gamma,
                         "delta": fld.params.delta}
    return obj


def field_from_obj(obj: dict) -> EdgeField:
    if obj.get("schema") != SCHEMA_FIELD:
        raise ValueError(f"not a field document: {obj.get('schema')!r}")
    w = obj["window"]
    win = Window(int(w["n_min"]), int(w["n_max"]),
                 int(w["m_min"]), int(w["m_max"]))
    fld = EdgeField(win)
    for e in obj["edges"]:
        fld.set((int(e["n"]), int(e["m"]), DIR_CLASS[e["dir"]]),
                complex(float(e["s_re"]), float(e["s_im"])))
    return fld


# -- layouts ---------------------------------------------------------------

def circle_obj(key, circ: OrientedCircle) -> dict:
    n, m = key
    if circ.is_line:
        normal, offset = circ.line_normal_offset()
        return {"n": n, "m": m, "kind": "line", "nx": normal.real,
                "ny": normal.imag, "d": offset, "orient": 1}
    orient = 1 if circ.a > 0 else -1
    c = circ.center
    return {"n": n, "m": m, "kind": "circle", "cx": c.real, "cy": c.imag,
            "r": circ.radius, "orient": orient}


def circle_from_obj(obj: dict) -> OrientedCircle:
    if obj["kind"] == "line":
        normal = complex(float(obj["nx"]), float(obj["ny"]))
        # interior is the side where the form is negative
        return OrientedCircle(0.0, normal, -2.0 * float(obj["d"]))
    circ = OrientedCircle.from_center_radius(
        complex(float(obj["cx"]), float(obj["cy"])), float(obj["r"]))
    if int(obj.get("orient", 1)) < 0:
        circ = circ.reversed()
    return circ


def layout_to_obj(layout: PackingLayout) -> dict:
    circles = [circle_obj(k, layout.circles[k]) for k in sorted(layout.circles)]
    touch = []
    for key in sorted(layout.touch_points):
        n, m, cls = key
        p = layout.touch_points[key]
        item = {"n": n, "m": m, "dir": CLASS_DIR[cls]}
        if is_inf(p):
            item["inf"] = True
        else:
            p = complex(p)
            item["x"] = p.real
            item["y"] = p.imag
        touch.append(item)
    return {
        "schema": SCHEMA_LAYOUT,
        "version": VERSION,
        "provenance": layout.provenance,
        "closure_residual": layout.closure_residual,
        "circles": circles,
        "touch_points": touch,
    }


def layout_from_obj(obj: dict) -> PackingLayout:
    if obj.get("schema") != SCHEMA_LAYOUT:
        raise ValueError(f"not a layout document: {obj.get('schema')!r}")
    circles = {}
    for c in obj["circles"]:
        circles[(int(c["n"]), int(c["m"]))] = circle_from_obj(c)
    touch = {}
    for t in obj["touch_points"]:
        key = (int(t["n"]), int(t["m"]), DIR_CLASS[t["dir"]])
        if t.get("inf"):
            touch[key] = INF
        else:
            touch[key] = complex(float(t["x"]), float(t["y"]))
    return PackingLayout(circles=circles, touch_points=touch,
                         provenance=obj.get("provenance", {}),
                         closure_residual=float(obj.get("closure_residual", 0.0)))


# -- flowers ---------------------------------------------------------------

def flower_to_obj(flower, s=None, extras=None) -> dict:
    from .flower import cross_ratios
    from .moebius import multi_ratio

    if s is None:
        s = cross_ratios(flower)
    m = multi_ratio(flower.z)
    obj = {
        "schema": SCHEMA_FLOWER,
        "version": VERSION,
        "center": _circle_geom(flower.center),
        "petals": [_circle_geom(p) for p in flower.petals],
        "z": [point_obj(p) for p in flower.z],
        "w": [point_obj(p) for p in flower.w],
        "s": [[v.real, v.imag] for v in s.s],
        "multi_ratio_residual": abs(m + 1) if not is_inf(m) else math.inf,
    }
    if extras:
        obj.update(extras)
    return obj


def _circle_geom(circ: OrientedCircle) -> dict:
    if circ.is_line:
        normal, offset = circ.line_normal_offset()
        return {"kind": "line", "nx": normal.real, "ny": normal.imag,
                "d": offset}
    c = circ.center
    return {"kind": "circle", "cx": c.real, "cy": c.imag, "r": circ.radius,
            "orient": 1 if circ.a > 0 else -1}


# -- SVG -------------------------------------------------------------------

def _svg_num(x: float) -> str:
    return format(float(x), ".10g")


def _clip_line_to_box(normal: complex, offset: float, box) -> tuple | None:
    """Segment of the line {Re(conj(n) z) = d} inside the box, or None."""
    x0, y0, x1, y1 = box
    p0 = offset * normal
    t = 1j * normal
    hits = []
    for xv in (x0, x1):
        if abs(t.real) > 1e-15:
            lam = (xv - p0.real) / t.real
            y = p0.imag + lam * t.imag
            if y0 - 1e-9 <= y <= y1 + 1e-9:
                hits.append(complex(xv, y))
    for yv in (y0, y1):
        if abs(t.imag) > 1e-15:
            lam = (yv - p0.imag) / t.imag
            x = p0.real + lam * t.real
            if x0 - 1e-9 <= x <= x1 + 1e-9:
                hits.append(complex(x, yv))
    best = None
    span = 0.0
    for i in range(len(hits)):
        for j in range(i + 1, len(hits)):
            d = abs(hits[i] - hits[j])
            if d > span:
                span = d
                best = (hits[i], hits[j])
    return best


def layout_to_svg(layout: PackingLayout, margin: float = 1.0,
                  stroke: str = "#1f77b4") -> str:
    """Deterministic SVG: circles sorted by lattice index, lines clipped."""
    finite = [c for c in layout.circles.values()
              if not c.is_line and c.radius < _LINE_CLIP]
    if finite:
        xs = []
        ys = []
        for c in finite:
            xs += [c.center.real - c.radius, c.center.real + c.radius]
            ys += [c.center.imag - c.radius, c.center.imag + c.radius]
        box = (min(xs) - margin, min(ys) - margin,
               max(xs) + margin, max(ys) + margin)
    else:
        box = (-10.0, -10.0, 10.0, 10.0)
    width = box[2] - box[0]
    height = box[3] - box[1]
    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_svg_num(box[0])} {_svg_num(box[1])} '
        f'{_svg_num(width)} {_svg_num(height)}">',
        f'<g fill="none" stroke="{stroke}" stroke-width="{_svg_num(width / 400)}">',
    ]
    for key in sorted(layout.circles):
        circ = layout.circles[key]
        if circ.is_line or circ.radius >= _LINE_CLIP:
            if circ.is_line:
                normal, offset = circ.line_normal_offset()
            else:
                # near-line circle: render its tangent line direction
                normal = circ.b / abs(circ.b)
                offset = -circ.c / (2.0 * abs(circ.b))
            seg = _clip_line_to_box(normal, offset, box)
            if seg is not None:
                a, b = seg
                lines.append(
                    f'<line x1="{_svg_num(a.real)}" y1="{_svg_num(a.imag)}" '
                    f'x2="{_svg_num(b.real)}" y2="{_svg_num(b.imag)}"/>')
        else:
            c = circ.center
            lines.append(
                f'<circle cx="{_svg_num(c.real)}" cy="{_svg_num(c.imag)}" '
                f'r="{_svg_num(circ.radius)}"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def polylines_to_obj(polylines, provenance=None) -> dict:
    return {
        "schema": SCHEMA_GRID,
        "version": VERSION,
        "provenance": provenance or {},
        "polylines": [[[p.real, p.imag] for p in poly] for poly in polylines],
    }


def polylines_to_svg(polylines, margin: float = 0.1,
                     stroke: str = "#2ca02c") -> str:
    pts = [p for poly in polylines for p in poly]
    if not pts:
        box = (-1.0, -1.0, 1.0, 1.0)
    else:
        xs = [p.real for p in pts]
        ys = [p.imag for p in pts]
        box = (min(xs) - margin, min(ys) - margin,
               max(xs) + margin, max(ys) + margin)
    width = box[2] - box[0]
    height = box[3] - box[1]
    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_svg_num(box[0])} {_svg_num(box[1])} '
        f'{_svg_num(width)} {_svg_num(height)}">',
        f'<g fill="none" stroke="{stroke}" stroke-width="{_svg_num(width / 600)}">',
    ]
    for poly in polylines:
        coords = " ".join(f"{_svg_num(p.real)},{_svg_num(p.imag)}" for p in poly)
        out.append(f'<polyline points="{coords}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
