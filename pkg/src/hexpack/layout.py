"""Packing geometry: from edge cross-ratio fields to circles and back,
plus Euclidean Doyle spirals.

The reconstruction propagates Moebius frames over *flags*.  A flag (v, j)
stands for the corner of the flower at lattice vertex v between directions
j-1 and j; its frame is the Moebius map sending the corner's three touching
points (z_j, z_{j-1}, w_{j-1}) to (INF, 0, 1).  Two transitions generate
everything:

* within a flower, frame(v, j+1) = [[0, 1], [1, s]] . frame(v, j) where s
  is the field value on the lattice edge (v, v+e_j);
* the three flags around one triangle differ by the fixed rotation
  z -> 1/(1-z), which cycles (INF, 0, 1).

Cycle closure of this propagation is exactly the hexagon closure relation
of the field, so non-tree residuals measure field consistency.
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import tolerances
from .circles import OrientedCircle, circle_through
from .errors import ClosureFailure, FieldInconsistent, NotImmersed
from .flower import Flower, cross_ratios, validate_flower
from .lattice import (OFFSETS, EdgeField, Window, canonical_edge,
                      constant_field, hexagon_edges)
from .moebius import (INF, ExtComplex, MoebiusMap, involution_from_pairs,
                      is_inf, moebius_from_triples, multi_ratio,
                      sphere_distance)

#: flag transition around a triangle: INF -> 0 -> 1 -> INF
_ROT3 = MoebiusMap(0, 1, -1, 1)

#: lattice embedding of vertex (n, m)
OMEGA = cmath.exp(1j * math.pi / 3)


def lattice_position(v) -> complex:
    n, m = v
    return n + m * OMEGA


def _step_matrix(s: complex) -> MoebiusMap:
    return MoebiusMap(0, 1, 1, s)


@dataclass
class PackingLayout:
    """Circles per lattice vertex and touching points per lattice edge."""

    circles: dict
    touch_points: dict
    provenance: dict
    closure_residual: float = 0.0

    def flower_at(self, v) -> Flower:
        """Assemble the flower around an interior vertex."""
        n, m = v
        z = []
        w = []
        for j in range(6):
            z_key = canonical_edge(n, m, j)
            dn, dm = OFFSETS[j]
            dn2, dm2 = OFFSETS[(j + 1) % 6]
            w_key = canonical_edge(n + dn, m + dm, j + 2)
            if z_key not in self.touch_points or w_key not in self.touch_points:
                raise NotImmersed(f"vertex {v} has no complete flower")
            z.append(self.touch_points[z_key])
            w.append(self.touch_points[w_key])
        petals = []
        for j in range(6):
            u = (n + OFFSETS[j][0], m + OFFSETS[j][1])
            if u not in self.circles:
                raise NotImmersed(f"vertex {v} has no complete flower")
            petals.append(self.circles[u])
        return Flower(center=self.circles[v], petals=tuple(petals),
                      z=tuple(z), w=tuple(w))

    def interior_vertices(self):
        for v in sorted(self.circles):
            try:
                self.flower_at(v)
            except NotImmersed:
                continue
            yield v


def layout_from_field(fld: EdgeField, norm=None, tol: float | None = None,
                      require_immersed: bool = True) -> PackingLayout:
    """Reconstruct the circle packing realizing an edge cross-ratio field.

    ``norm`` fixes the Moebius freedom: either None (the base corner's
    touching points go to INF, 0, 1 literally) or a triple of points that
    (INF, 0, 1) should map to.  Layouts of the same field under different
    norms differ by a single Moebius map.

    With ``require_immersed`` the field must be positive imaginary on the
    whole window; pass False to lay out a field whose window crosses a sign
    change, in which case the offending flowers fold over and
    ``validate_immersion`` reports them.
    """
    if tol is None:
        tol = tolerances.CLOSURE
    win = fld.window
    if require_immersed:
        for key, value in fld.edges():
            if (-1j * value).real <= 0:
                raise NotImmersed(
                    f"edge {key} carries {value}; not positive imaginary")

    # stored frame per flag: corner touching points -> (INF, 0, 1) model
    if norm is not None:
        base_frame = moebius_from_triples(tuple(norm), (INF, 0, 1))
    else:
        base_frame = MoebiusMap.identity()

    # flag BFS over (vertex, direction)
    base = _base_vertex(fld)
    frames = {}
    start = (base, 0)
    frames[start] = base_frame
    queue = deque([start])
    closure = 0.0
    order = []
    while queue:
        flag = queue.popleft()
        order.append(flag)
        fr = frames[flag]
        for nxt, mat in _transitions(flag, fld, win):
            cand = mat @ fr
            if nxt in frames:
                # relative: far-from-base frames carry large entries
                scale = max(1.0, float(np.linalg.norm(frames[nxt].mat)))
                closure = max(closure, frames[nxt].distance(cand) / scale)
            else:
                frames[nxt] = cand
                queue.append(nxt)
    if closure > tol:
        raise FieldInconsistent(
            f"cycle closure {closure:.3g} exceeds {tol:.3g}: "
            "the field violates the hexagon relation")

    touch = {}
    for (v, j), fr in frames.items():
        inv = fr.inverse()
        n, m = v
        dn, dm = OFFSETS[(j - 1) % 6]
        keys = (canonical_edge(n, m, j),          # z_j
                canonical_edge(n, m, j - 1),      # z_{j-1}
                canonical_edge(n + dn, m + dm, j + 1))  # w_{j-1}
        for key, model in zip(keys, (INF, 0, 1)):
            if key not in touch:
                touch[key] = inv(model)

    circles = {}
    for v in win.vertices():
        n, m = v
        pts = [touch.get(canonical_edge(n, m, j)) for j in range(6)]
        have = [p for p in pts if p is not None]
        if sum(p is not None for p in pts) < 3:
            continue
        tri = _well_spread_triple(pts)
        circles[v] = circle_through(*tri)

    return PackingLayout(
        circles=circles, touch_points=touch,
        provenance=_field_provenance(fld), closure_residual=float(closure))


def regular_norm(fld: EdgeField):
    """Normalization triple pinning the base corner to its regular-packing
    position, which keeps the reconstructed window in a bounded frame.

    For the constant field i*sqrt(3) this makes the layout the literal
    regular packing of unit circles.
    """
    n, m = _base_vertex(fld)
    c = 2 * lattice_position((n, m))
    e0 = 1.0
    e5 = cmath.exp(-1j * math.pi / 3)
    return (c + e0, c + e5, c + e5 + e0)


def _field_provenance(fld: EdgeField) -> dict:
    if fld.params is not None:
        p = fld.params
        return {"kind": "solution_field", "alpha": p.alpha, "beta": p.beta,
                "gamma": p.gamma}
    return {"kind": "field"}


def _base_vertex(fld: EdgeField):
    win = fld.window
    for v in win.vertices():
        if all(fld.has_edge(canonical_edge(*v, j)) for j in range(2)):
            return v
    raise NotImmersed("field has no usable base vertex")


def _transitions(flag, fld: EdgeField, win: Window):
    """Neighboring flags and the matrices carrying frames onto them."""
    (n, m), j = flag
    out = []
    # within-flower steps (v, j) <-> (v, j+1) via edge (v, v+e_j)
    key = canonical_edge(n, m, j)
    if fld.has_edge(key):
        out.append((((n, m), (j + 1) % 6), _step_matrix(fld.get(key))))
    key_prev = canonical_edge(n, m, (j - 1) % 6)
    if fld.has_edge(key_prev):
        out.append((((n, m), (j - 1) % 6),
                    _step_matrix(fld.get(key_prev)).inverse()))
    # triangle rotations: (v, j) -> (v+e_j, j+4) and its inverse partner
    dn, dm = OFFSETS[j]
    u = (n + dn, m + dm)
    if u in win:
        out.append(((u, (j + 4) % 6), _ROT3))
    dnp, dmp = OFFSETS[(j - 1) % 6]
    up = (n + dnp, m + dmp)
    if up in win:
        # (v, j) is the rot-image of (v+e_{j-1}, j+2): invert
        out.append(((up, (j + 2) % 6), _ROT3.inverse()))
    return out


def _well_spread_triple(pts):
    """Three touch points with well-separated directions, if available."""
    for choice in ((0, 2, 4), (1, 3, 5), (0, 1, 2), (0, 1, 3), (0, 2, 3),
                   (1, 2, 3), (0, 1, 4), (0, 3, 4), (2, 3, 4), (1, 2, 4)):
        sel = [pts[i] for i in choice]
        if all(p is not None for p in sel):
            return sel
    sel = [p for p in pts if p is not None]
    return sel[:3]


def field_from_layout(layout: PackingLayout) -> EdgeField:
    """Extract the edge cross-ratio field realized by a packing layout.

    Shared edges are computed from both adjacent flowers; a mismatch above
    tolerance marks the layout as not a consistent immersion.
    """
    verts = list(layout.circles)
    ns = [v[0] for v in verts]
    ms = [v[1] for v in verts]
    win = Window(min(ns), max(ns), min(ms), max(ms))
    out = EdgeField(win)
    seen = {}
    for v in layout.interior_vertices():
        flower = layout.flower_at(v)
        s = cross_ratios(flower)
        n, m = v
        for j in range(6):
            key = canonical_edge(n, m, j)
            if key in seen:
                if abs(seen[key] - s[j]) > tolerances.EQUIVALENCE:
                    raise NotImmersed(
                        f"edge {key}: flowers disagree "
                        f"({seen[key]} vs {s[j]})")
            else:
                seen[key] = s[j]
                if key[:2] in win:
                    out.set(key, s[j])
    if not seen:
        raise NotImmersed("layout has no interior flowers")
    return out


@dataclass(frozen=True)
class DoyleParams:
    """Doyle spiral data: neighbor radius ratios A = R(n+1,m)/R(n,m) and
    B = R(n,m+1)/R(n,m), center circle radius R."""

    A: float
    B: float
    R: float = 1.0

    def radius(self, v) -> float:
        n, m = v
        return self.R * self.A ** n * self.B ** m


def doyle_spiral(params: DoyleParams, extent: int,
                 tol: float | None = None) -> PackingLayout:
    """Euclidean Doyle spiral on the centered hexagonal window.

    Radii follow R * A^n * B^m exactly; circle centers are chained ring by
    ring, each new circle externally tangent to two already placed
    neighbors, with the orientation of each lattice triangle preserved.
    The products R_k R_{k+3} = R^2 and R_k R_{k+2} R_{k+4} = R^3 around
    every flower hold by construction and are asserted.
    """
    if params.A <= 0 or params.B <= 0 or params.R <= 0:
        raise ClosureFailure("Doyle parameters must be positive")
    if tol is None:
        tol = tolerances.CLOSURE

    centers = {(0, 0): 0j}
    centers[(1, 0)] = params.R * (1 + params.A)

    for ring in range(1, extent + 1):
        walk = _ring_walk(ring)
        for v in walk[1:] + [walk[0]]:
            if v in centers:
                continue
            a, b = _placed_adjacent_pair(v, centers)
            centers[v] = _tangent_placement(v, a, b, centers, params)

    # tangency closure on every lattice edge
    worst = 0.0
    for v in centers:
        for j in range(3):
            dn, dm = OFFSETS[j]
            u = (v[0] + dn, v[1] + dm)
            if u in centers:
                gap = abs(centers[u] - centers[v]) - (params.radius(u) + params.radius(v))
                worst = max(worst, abs(gap) / (params.radius(u) + params.radius(v)))
    if worst > tol:
        raise ClosureFailure(f"tangency closure residual {worst:.3g}")

    _assert_radius_laws(params, centers)

    circles = {v: OrientedCircle.from_center_radius(c, params.radius(v))
               for v, c in centers.items()}
    touch = {}
    for v in centers:
        for j in range(3):
            dn, dm = OFFSETS[j]
            u = (v[0] + dn, v[1] + dm)
            if u in centers:
                cv, cu = centers[v], centers[u]
                touch[canonical_edge(*v, j)] = cv + params.radius(v) * (cu - cv) / abs(cu - cv)
    return PackingLayout(
        circles=circles, touch_points=touch,
        provenance={"kind": "doyle", "A": params.A, "B": params.B,
                    "R": params.R},
        closure_residual=float(worst))


def _ring_walk(r: int):
    """Counterclockwise ring of hexagonal-lattice vertices at distance r,
    starting at (r, 0)."""
    out = []
    v = (r, 0)
    for j in (2, 3, 4, 5, 0, 1):
        for _ in range(r):
            out.append(v)
            v = (v[0] + OFFSETS[j][0], v[1] + OFFSETS[j][1])
    return out


def _placed_adjacent_pair(v, centers):
    """Two already placed neighbors of v that are neighbors of each other."""
    placed = []
    for j in range(6):
        u = (v[0] + OFFSETS[j][0], v[1] + OFFSETS[j][1])
        if u in centers:
            placed.append(u)
    for i, a in enumerate(placed):
        for b in placed[i + 1:]:
            diff = (b[0] - a[0], b[1] - a[1])
            if diff in OFFSETS:
                return a, b
    raise ClosureFailure(f"no adjacent placed pair for {v}")


def _tangent_placement(v, a, b, centers, params: DoyleParams) -> complex:
    """Center of the circle at v externally tangent to those at a and b.

    Of the two candidates, take the one on the same side of the segment
    (a, b) as v is in the lattice: immersion preserves the orientation of
    every triangle.
    """
    ca, cb = centers[a], centers[b]
    ra, rb, rv = params.radius(a), params.radius(b), params.radius(v)
    d1 = ra + rv
    d2 = rb + rv
    dd = abs(cb - ca)
    u = (cb - ca) / dd
    x = (dd * dd + d1 * d1 - d2 * d2) / (2 * dd)
    h2 = d1 * d1 - x * x
    if h2 < 0:
        raise ClosureFailure(f"tangency circles at {a}, {b} do not meet for {v}")
    h = math.sqrt(h2)
    side = _triangle_sign(a, b, v)
    return ca + u * complex(x, side * h)


def _triangle_sign(a, b, v) -> float:
    pa, pb, pv = lattice_position(a), lattice_position(b), lattice_position(v)
    cross = ((pb - pa).conjugate() * (pv - pa)).imag
    return 1.0 if cross > 0 else -1.0


def _assert_radius_laws(params: DoyleParams, centers):
    for v in centers:
        ring = []
        for j in range(6):
            u = (v[0] + OFFSETS[j][0], v[1] + OFFSETS[j][1])
            if u not in centers:
                break
            ring.append(params.radius(u))
        else:
            r2 = params.radius(v) ** 2
            r3 = params.radius(v) ** 3
            for k in range(3):
                if abs(ring[k] * ring[k + 3] - r2) > 1e-12 * r2:
                    raise ClosureFailure("opposite-radius product law violated")
            for k in range(2):
                prod = ring[k] * ring[k + 2] * ring[(k + 4) % 6]
                if abs(prod - r3) > 1e-12 * r3:
                    raise ClosureFailure("alternating-radius product law violated")


@dataclass(frozen=True)
class ImmersionReport:
    ok: bool
    n_flowers: int
    worst_multi_ratio: float
    worst_incidence: float
    worst_tangency: float
    n_degenerate: int

    def summary(self) -> str:
        state = "pass" if self.ok else "FAIL"
        return (f"{state}: {self.n_flowers} flowers, |m+1|<= {self.worst_multi_ratio:.3g}, "
                f"incidence<={self.worst_incidence:.3g}, tangency<={self.worst_tangency:.3g}, "
                f"degenerate={self.n_degenerate}")


def validate_immersion(layout: PackingLayout) -> ImmersionReport:
    """Per-flower immersion checks over all interior vertices."""
    worst_m = 0.0
    worst_inc = 0.0
    worst_tan = 0.0
    n_deg = 0
    n_flow = 0
    ok = True
    for v in layout.interior_vertices():
        flower = layout.flower_at(v)
        rep = validate_flower(flower)
        n_flow += 1
        worst_m = max(worst_m, rep.multi_ratio_residual)
        worst_inc = max(worst_inc, rep.max_incidence_residual)
        worst_tan = max(worst_tan, rep.max_tangency_residual)
        n_deg += int(rep.degenerate)
        ok = ok and rep.ok
    if n_flow == 0:
        ok = False
    return ImmersionReport(ok=ok, n_flowers=n_flow, worst_multi_ratio=worst_m,
                           worst_incidence=worst_inc, worst_tangency=worst_tan,
                           n_degenerate=n_deg)


def fit_alignment(l1: PackingLayout, l2: PackingLayout) -> MoebiusMap:
    """The Moebius map sending layout l1 onto layout l2, fitted from three
    shared touch points."""
    keys = sorted(set(l1.touch_points) & set(l2.touch_points))
    if len(keys) < 3:
        raise NotImmersed("layouts share fewer than three touch points")
    tri = [keys[0], keys[len(keys) // 2], keys[-1]]
    src = tuple(l1.touch_points[k] for k in tri)
    dst = tuple(l2.touch_points[k] for k in tri)
    return moebius_from_triples(src, dst)


def layout_alignment_residual(l1: PackingLayout, l2: PackingLayout,
                              mob: MoebiusMap) -> float:
    """Worst chordal mismatch of mapped touch points."""
    worst = 0.0
    for key in set(l1.touch_points) & set(l2.touch_points):
        worst = max(worst, sphere_distance(mob(l1.touch_points[key]),
                                           l2.touch_points[key]))
    return worst


def involution_invariance_residual(layout: PackingLayout, v) -> float:
    """How far the involution of the flower at v is from mapping the whole
    layout onto itself (circle u onto circle 2v - u)."""
    flower = layout.flower_at(v)
    inv = involution_from_pairs(flower.z, tol=1e-6)
    worst = 0.0
    n, m = v
    for u, circ in layout.circles.items():
        mirror = (2 * n - u[0], 2 * m - u[1])
        if mirror not in layout.circles:
            continue
        img = circ.apply_moebius(inv)
        worst = max(worst, img.coefficient_distance(layout.circles[mirror],
                                                    ignore_orientation=True))
    return worst
