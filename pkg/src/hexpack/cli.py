"""Command-line interface: generation, verification, export, serve.

Exit codes: 0 success (verify: all invariants pass), 1 invariant failure
in verify, 2 argument or validation failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import serialize
from .airy import airy_map, hexgrid_image, schwarzian_fd
from .errors import HexpackError
from .flower import (build_flower, common_point, cross_ratios,
                     is_conformally_symmetric, s_circles, symmetric_flower)
from .lattice import (SolutionParams, Window, hexagon_residual,
                      immersed_window, solution_field, symmetric_residual)
from .layout import (DoyleParams, doyle_spiral, field_from_layout,
                     layout_from_field, regular_norm, validate_immersion)
from .moebius import INF, is_inf, multi_ratio

DEFAULT_PORT = 8642


def parse_points(text: str):
    """Six (or five) points as 're,im' pairs separated by ';'; 'inf' allowed."""
    pts = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk.lower() == "inf":
            pts.append(INF)
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise ValueError(f"bad point {chunk!r}: expected 're,im' or 'inf'")
        pts.append(complex(float(parts[0]), float(parts[1])))
    return pts


def _write(path, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _window_arg(value: str) -> int:
    ext = int(value)
    if ext < 1:
        raise argparse.ArgumentTypeError("window must be >= 1")
    return ext


def _positive(value: str) -> float:
    x = float(value)
    if x <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hexpack",
        description="hexagonal circle packings modulo Moebius transformations")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("flower", help="build a flower from touching points")
    p.add_argument("--points", required=True,
                   help="six points 're,im;...;inf'")
    p.add_argument("--r1", type=_positive, required=True,
                   help="petal radius in the normalized frame")
    p.add_argument("--out", help="JSON output path (default stdout)")
    p.add_argument("--svg", help="SVG output path")

    p = sub.add_parser("symmetric-flower",
                       help="the conformally symmetric flower over six points")
    p.add_argument("--points", required=True)
    p.add_argument("--out", help="JSON output path (default stdout)")
    p.add_argument("--svg", help="SVG output path")

    p = sub.add_parser("family",
                       help="sweep the one-parameter family over fixed points")
    p.add_argument("--points", required=True)
    p.add_argument("--r1-min", type=_positive, default=0.25)
    p.add_argument("--r1-max", type=_positive, default=4.0)
    p.add_argument("--count", type=int, default=9)
    p.add_argument("--out", help="JSON output path (default stdout)")

    p = sub.add_parser("field", help="closed-form cross-ratio field")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--window", type=_window_arg, default=5)
    p.add_argument("--out", help="JSON output path (default stdout)")

    p = sub.add_parser("layout", help="circle packing from a field")
    p.add_argument("--field", help="field JSON produced by the field command")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--window", type=_window_arg, default=5)
    p.add_argument("--norm", choices=("bounded", "lemma"), default="bounded",
                   help="bounded frame or the literal (INF, 0, 1) base corner")
    p.add_argument("--allow-folded", action="store_true",
                   help="lay out fields that are not positive imaginary")
    p.add_argument("--out", help="JSON output path (default stdout)")
    p.add_argument("--svg", help="SVG output path")

    p = sub.add_parser("doyle", help="Doyle spiral layout")
    p.add_argument("--A", type=_positive, required=True)
    p.add_argument("--B", type=_positive, required=True)
    p.add_argument("--R", type=_positive, default=1.0)
    p.add_argument("--window", type=_window_arg, default=4)
    p.add_argument("--out", help="JSON output path (default stdout)")
    p.add_argument("--svg", help="SVG output path")

    p = sub.add_parser("airy", help="image of the hexagonal grid under the "
                                    "rotationally symmetric map")
    p.add_argument("--grid-spacing", type=_positive, default=0.2)
    p.add_argument("--extent", type=_positive, default=1.5)
    p.add_argument("--out", help="JSON output path (default stdout)")
    p.add_argument("--svg", help="SVG output path")

    p = sub.add_parser("verify", help="check all invariants of a layout JSON")
    p.add_argument("path", help="layout JSON file")

    p = sub.add_parser("serve", help="JSON API over HTTP for the explorer")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--host", default="127.0.0.1")
    return parser


def _flower_payload(flower, symmetric_extras: bool):
    s = cross_ratios(flower)
    rep = is_conformally_symmetric(flower)
    extras = {
        "conformally_symmetric": rep.symmetric,
        "opposite_deviation": rep.max_opposite_deviation,
        "s_circle_spread": rep.spread if rep.spread != math.inf else None,
        "common_point": (serialize.point_obj(rep.common_point)
                         if rep.common_point is not None else None),
    }
    if symmetric_extras:
        circles = s_circles(flower)
        extras["s_circles"] = [serialize._circle_geom(c) for c in circles]
    return serialize.flower_to_obj(flower, s=s, extras=extras)


def _flower_svg(flower) -> str:
    from .layout import PackingLayout
    circles = {(0, 0): flower.center}
    for k, p in enumerate(flower.petals):
        circles[(1 + k, 0)] = p
    lay = PackingLayout(circles=circles, touch_points={},
                        provenance={"kind": "flower"})
    return serialize.layout_to_svg(lay)


def cmd_flower(args) -> int:
    pts = parse_points(args.points)
    flower = build_flower(pts, args.r1)
    _write(args.out, serialize.dumps(_flower_payload(flower, False)))
    if args.svg:
        _write(args.svg, _flower_svg(flower))
    return 0


def cmd_symmetric_flower(args) -> int:
    pts = parse_points(args.points)
    flower = symmetric_flower(pts)
    _write(args.out, serialize.dumps(_flower_payload(flower, True)))
    if args.svg:
        _write(args.svg, _flower_svg(flower))
    return 0


def cmd_family(args) -> int:
    pts = parse_points(args.points)
    if args.count < 2:
        raise ValueError("count must be >= 2")
    members = []
    for k in range(args.count):
        t = k / (args.count - 1)
        r1 = args.r1_min * (args.r1_max / args.r1_min) ** t
        flower = build_flower(pts, r1)
        rep = is_conformally_symmetric(flower)
        members.append({
            "r1": r1,
            "conformally_symmetric": rep.symmetric,
            "opposite_deviation": rep.max_opposite_deviation,
            "flower": serialize.flower_to_obj(flower),
        })
    _write(args.out, serialize.dumps({"schema": "hexpack/family",
                                      "version": 1, "members": members}))
    return 0


def cmd_field(args) -> int:
    params = SolutionParams(args.alpha, args.beta, args.gamma)
    win = Window.centered(args.window)
    fld = solution_field(params, win)
    worst = 0.0
    for v in fld.complete_hexagons():
        worst = max(worst, abs(hexagon_residual(fld, v)),
                    symmetric_residual(fld, v))
    obj = serialize.field_to_obj(fld)
    obj["residual_report"] = {"worst_hexagon_residual": worst}
    imm = immersed_window(params, max_extent=10000)
    obj["immersed"] = {
        "entire": imm.entire,
        "families": {name: {"anchor": itv.anchor, "lo": itv.lo, "hi": itv.hi,
                            "capped": itv.capped}
                     for name, itv in imm.intervals().items()},
    }
    _write(args.out, serialize.dumps(obj))
    return 0


def cmd_layout(args) -> int:
    if args.field:
        with open(args.field) as fh:
            fld = serialize.field_from_obj(json.load(fh))
    else:
        if args.alpha is None or args.beta is None or args.gamma is None:
            raise ValueError("need --field or all of --alpha --beta --gamma")
        params = SolutionParams(args.alpha, args.beta, args.gamma)
        fld = solution_field(params, Window.centered(args.window))
    norm = regular_norm(fld) if args.norm == "bounded" else None
    lay = layout_from_field(fld, norm=norm,
                            require_immersed=not args.allow_folded)
    _write(args.out, serialize.dumps(serialize.layout_to_obj(lay)))
    if args.svg:
        _write(args.svg, serialize.layout_to_svg(lay))
    return 0


def cmd_doyle(args) -> int:
    lay = doyle_spiral(DoyleParams(args.A, args.B, args.R), extent=args.window)
    _write(args.out, serialize.dumps(serialize.layout_to_obj(lay)))
    if args.svg:
        _write(args.svg, serialize.layout_to_svg(lay))
    return 0


def cmd_airy(args) -> int:
    polylines = hexgrid_image(airy_map, args.grid_spacing, args.extent)
    # Schwarzian check report on a small deterministic sample
    worst = 0.0
    for k in range(24):
        ang = 2 * math.pi * k / 24
        z = 0.8 * complex(math.cos(ang), math.sin(ang))
        worst = max(worst, abs(schwarzian_fd(airy_map, z, 1e-3) - z))
    obj = serialize.polylines_to_obj(
        polylines, provenance={"kind": "airy-grid",
                               "spacing": args.grid_spacing,
                               "extent": args.extent})
    obj["schwarzian_check"] = {"worst_abs_deviation_from_z": worst,
                               "sample_radius": 0.8}
    _write(args.out, serialize.dumps(obj))
    if args.svg:
        _write(args.svg, serialize.polylines_to_svg(polylines))
    return 0


def cmd_verify(args) -> int:
    with open(args.path) as fh:
        lay = serialize.layout_from_obj(json.load(fh))
    rep = validate_immersion(lay)
    print(rep.summary())
    failures = []
    if not rep.ok:
        failures.append("immersion checks failed")
    try:
        fld = field_from_layout(lay)
        worst = 0.0
        for v in fld.complete_hexagons():
            worst = max(worst, abs(hexagon_residual(fld, v)))
        print(f"hexagon closure residual <= {worst:.3g}")
        if worst > 1e-8:
            failures.append(f"hexagon closure {worst:.3g} > 1e-8")
    except HexpackError as exc:
        failures.append(f"field extraction failed: {exc}")
    for vertex in lay.interior_vertices():
        flower = lay.flower_at(vertex)
        m = multi_ratio(flower.z)
        if is_inf(m) or abs(m + 1) > 1e-6:
            failures.append(f"multi-ratio violation at {vertex}")
            break
    if failures:
        for f in failures:
            print(f"FAIL: {f}", file=sys.stderr)
        return 1
    print("all invariants pass")
    return 0


def cmd_serve(args) -> int:
    from .server import run_server
    port = args.port
    if port is None:
        port = int(os.environ.get("HEXPACK_PORT", DEFAULT_PORT))
    run_server(host=args.host, port=port)
    return 0


_COMMANDS = {
    "flower": cmd_flower,
    "symmetric-flower": cmd_symmetric_flower,
    "family": cmd_family,
    "field": cmd_field,
    "layout": cmd_layout,
    "doyle": cmd_doyle,
    "airy": cmd_airy,
    "verify": cmd_verify,
    "serve": cmd_serve,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (HexpackError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
