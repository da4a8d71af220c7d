"""Stateless JSON API over HTTP for the interactive explorer.

Every endpoint is a pure computation on its query parameters; CORS is wide
open so a browser frontend served from anywhere can call it.  Errors come
back as {"code", "message"} with a 4xx status.
"""

from __future__ import annotations

import json
import math
import traceback
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from . import serialize
from .airy import airy_map, hexgrid_image
from .cli import parse_points
from .errors import HexpackError
from .flower import build_flower, symmetric_flower
from .lattice import (SolutionParams, Window, hexagon_residual,
                      immersed_window, solution_field, symmetric_residual)
from .layout import (DoyleParams, doyle_spiral, layout_from_field,
                     regular_norm)


class ApiError(Exception):
    def __init__(self, code: str, message: str, status: int = 400):
        super().__init__(message)
        self.code = code
        self.message = message
        self.status = status


def _get_float(q, name, default=None):
    if name not in q:
        if default is None:
            raise ApiError("missing_parameter", f"missing {name!r}")
        return default
    try:
        return float(q[name][0])
    except ValueError as exc:
        raise ApiError("bad_parameter", f"{name}: {exc}") from exc


def _get_int(q, name, default):
    try:
        return int(q.get(name, [default])[0])
    except ValueError as exc:
        raise ApiError("bad_parameter", f"{name}: {exc}") from exc


def _get_points(q, count=6):
    if "points" not in q:
        raise ApiError("missing_parameter", "missing 'points'")
    try:
        pts = parse_points(q["points"][0])
    except ValueError as exc:
        raise ApiError("bad_parameter", str(exc)) from exc
    if len(pts) != count:
        raise ApiError("bad_parameter", f"expected {count} points, got {len(pts)}")
    return pts


def _window(q, default=4, cap=12):
    ext = _get_int(q, "window", default)
    if not (1 <= ext <= cap):
        raise ApiError("bad_parameter", f"window must be in [1, {cap}]")
    return ext


def api_flower(q):
    from .cli import _flower_payload
    pts = _get_points(q)
    r1 = _get_float(q, "r1")
    if r1 <= 0:
        raise ApiError("bad_parameter", "r1 must be positive")
    return _flower_payload(build_flower(pts, r1), False)


def api_symmetric_flower(q):
    from .cli import _flower_payload
    pts = _get_points(q)
    return _flower_payload(symmetric_flower(pts), True)


def api_field(q):
    params = SolutionParams(_get_float(q, "alpha"), _get_float(q, "beta"),
                            _get_float(q, "gamma"))
    fld = solution_field(params, Window.centered(_window(q)))
    obj = serialize.field_to_obj(fld)
    worst = 0.0
    for v in fld.complete_hexagons():
        worst = max(worst, abs(hexagon_residual(fld, v)),
                    symmetric_residual(fld, v))
    obj["residual_report"] = {"worst_hexagon_residual": worst}
    imm = immersed_window(params, max_extent=10000)
    obj["immersed"] = {
        "entire": imm.entire,
        "families": {name: {"anchor": itv.anchor, "lo": itv.lo, "hi": itv.hi,
                            "capped": itv.capped}
                     for name, itv in imm.intervals().items()},
    }
    return obj


def api_layout(q):
    params = SolutionParams(_get_float(q, "alpha"), _get_float(q, "beta"),
                            _get_float(q, "gamma"))
    fld = solution_field(params, Window.centered(_window(q)))
    allow_folded = q.get("allow_folded", ["0"])[0] in ("1", "true")
    lay = layout_from_field(fld, norm=regular_norm(fld),
                            require_immersed=not allow_folded)
    return serialize.layout_to_obj(lay)


def api_doyle(q):
    a = _get_float(q, "A")
    b = _get_float(q, "B")
    r = _get_float(q, "R", 1.0)
    if a <= 0 or b <= 0 or r <= 0:
        raise ApiError("bad_parameter", "A, B, R must be positive")
    lay = doyle_spiral(DoyleParams(a, b, r), extent=_window(q, default=3, cap=8))
    return serialize.layout_to_obj(lay)


def api_airy(q):
    spacing = _get_float(q, "spacing", 0.2)
    extent = _get_float(q, "extent", 1.5)
    if not (0.02 <= spacing <= 2.0) or not (0.1 <= extent <= 5.5):
        raise ApiError("bad_parameter", "spacing or extent out of range")
    polylines = hexgrid_image(airy_map, spacing, extent)
    return serialize.polylines_to_obj(
        polylines, provenance={"kind": "airy-grid", "spacing": spacing,
                               "extent": extent})


ROUTES = {
    "/api/flower": api_flower,
    "/api/symmetric-flower": api_symmetric_flower,
    "/api/field": api_field,
    "/api/layout": api_layout,
    "/api/doyle": api_doyle,
    "/api/airy": api_airy,
}


class Handler(BaseHTTPRequestHandler):
    server_version = "hexpack"

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send(self, status: int, payload: str):
        body = payload.encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, OPTIONS")
        self.end_headers()
        self.wfile.write(body)

    def do_OPTIONS(self):
        self._send(204, "")

    def do_GET(self):
        url = urlparse(self.path)
        handler = ROUTES.get(url.path)
        if url.path == "/api/health":
            self._send(200, serialize.dumps({"ok": True}))
            return
        if handler is None:
            self._send(404, serialize.dumps(
                {"code": "not_found", "message": f"no route {url.path}"}))
            return
        try:
            obj = handler(parse_qs(url.query))
            self._send(200, serialize.dumps(obj))
        except ApiError as exc:
            self._send(exc.status, serialize.dumps(
                {"code": exc.code, "message": exc.message}))
        except HexpackError as exc:
            self._send(422, serialize.dumps(
                {"code": type(exc).__name__, "message": str(exc)}))
        except Exception as exc:  # pragma: no cover - defensive
            traceback.print_exc()
            self._send(500, serialize.dumps(
                {"code": "internal", "message": str(exc)}))


def make_server(host: str = "127.0.0.1", port: int = 8642) -> ThreadingHTTPServer:
    return ThreadingHTTPServer((host, port), Handler)


def run_server(host: str = "127.0.0.1", port: int = 8642) -> None:
    httpd = make_server(host, port)
    print(f"hexpack API listening on http://{host}:{port}")
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
