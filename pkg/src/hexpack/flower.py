"""Circle flowers: a center circle tangent to a closed chain of six petals.

All indices are 0-based and cyclic mod 6: ``z[k]`` is the touching point of
petal k with the center circle, ``w[k]`` the touching point of petals k and
k+1, and ``s[k]`` the edge cross-ratio attached to ``z[k]``.

Conventions fixed here and relied on everywhere else:

* a valid labeling is *positively oriented*: sending (z[0], z[4], z[5]) to
  (0, 1, INF) puts the remaining points on the real axis in increasing
  order (the regular flower labeled counterclockwise is the model case);
* for such flowers every s[k] is purely imaginary with ``-i*s[k] > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import tolerances
from .circles import (OrientedCircle, circle_through, intersect_circles,
                      orientations_opposite_at)
from .errors import (DegenerateInput, NonPositiveRadius,
                     NotAFlowerConfiguration, NumericallyParabolic)
from .moebius import (INF, ExtComplex, MoebiusMap, cross_ratio, fixed_points,
                      involution_from_pairs, is_inf, moebius_from_triples,
                      multi_ratio, sphere_distance)

SQRT3 = math.sqrt(3.0)
REGULAR_S = 1j * SQRT3


@dataclass(frozen=True)
class Flower:
    """Center circle, six petals and their touching points."""

    center: OrientedCircle
    petals: tuple
    z: tuple
    w: tuple

    def involution(self, tol: float | None = None) -> MoebiusMap:
        return involution_from_pairs(self.z, tol=tol)


@dataclass(frozen=True)
class CrossRatioSextet:
    """The six edge cross-ratios of a flower plus self-check diagnostics."""

    s: tuple
    max_form_deviation: float = 0.0
    max_real_part: float = 0.0

    def __iter__(self):
        return iter(self.s)

    def __getitem__(self, k):
        return self.s[k % 6]


def _normalization_map(z) -> MoebiusMap:
    """Map sending (z[0], z[4], z[5]) to (0, 1, INF).

    When z[5] is already INF and z[0..4] real increasing this reduces to an
    affine map; the identity frame is preserved exactly for the canonical
    configuration (x_0 < ... < x_4 on the real axis, z[5] = INF).
    """
    if is_inf(z[5]):
        finite = [complex(v) for v in z[:5]]
        if all(abs(v.imag) < 1e-13 for v in finite):
            return MoebiusMap.identity()
        direction = finite[4] - finite[0]
        return MoebiusMap(1 / direction * abs(direction), 0, 0, 1) @ \
            MoebiusMap.translation(-finite[0])
    return moebius_from_triples((z[0], z[4], z[5]), (0, 1, INF))


def _normalized_points(z, mr_tol):
    """Validate a flower sextet and return (T, x) with x real increasing."""
    z = list(z)
    if len(z) != 6:
        raise DegenerateInput("a flower needs six touching points")
    m = multi_ratio(z)
    if is_inf(m) or abs(m + 1) > mr_tol:
        raise NotAFlowerConfiguration(
            f"multi-ratio {m} differs from -1 beyond tolerance {mr_tol}")
    norm = _normalization_map(z)
    imgs = [norm(v) for v in z[:5]]
    if any(is_inf(v) for v in imgs):
        raise NotAFlowerConfiguration("points are not in general position")
    xs = [complex(v) for v in imgs]
    span = max(abs(xs[4] - xs[0]), 1.0)
    if max(abs(v.imag) for v in xs) > 1e-8 * span:
        raise NotAFlowerConfiguration("touching points are not concyclic")
    x = [v.real for v in xs]
    if any(x[k + 1] <= x[k] for k in range(4)):
        raise NotAFlowerConfiguration(
            "touching points are not positively oriented in the given order")
    return norm, x


def build_flower(z, r1: float, mr_tol: float | None = None) -> Flower:
    """Construct the flower with center touching points z and parameter r1.

    r1 is the radius of petal 0 in the normalized frame where z[5] sits at
    infinity and the other points lie on the real axis (for inputs already
    of that shape the frame is the input frame, so r1 is the literal petal
    radius).  Varying r1 sweeps the one-parameter family of flowers that
    share the same touching points; the chain of radii
    ``r_{k+1} = ((x_{k+1}-x_k)/2)^2 / r_k`` closes with the last radius
    equal to r1, which is exactly the multi-ratio condition.
    """
    if mr_tol is None:
        mr_tol = tolerances.GEOMETRIC
    if not (r1 > 0):
        raise NonPositiveRadius(f"r1 must be positive, got {r1}")
    norm, x = _normalized_points(z, mr_tol)

    radii = [float(r1)]
    for k in range(4):
        radii.append(((x[k + 1] - x[k]) / 2.0) ** 2 / radii[k])
    if abs(radii[4] - radii[0]) > 1e-6 * radii[0]:
        raise NotAFlowerConfiguration(
            "radius chain does not close: inconsistent touching points")
    radii[4] = radii[0]  # exact closure forced by the multi-ratio condition

    # normalized frame: center circle is the real axis with interior above,
    # petals are disks below it, petal 5 is the parallel line at height -2*r1
    centers = [x[k] - 1j * radii[k] for k in range(5)]
    petals_n = [OrientedCircle.from_center_radius(centers[k], radii[k])
                for k in range(5)]
    petals_n.append(OrientedCircle.from_point_direction(x[0] - 2j * r1, -1.0))

    w_n: list[ExtComplex] = []
    for k in range(4):
        c1, c2 = centers[k], centers[k + 1]
        w_n.append(c1 + radii[k] * (c2 - c1) / abs(c2 - c1))
    w_n.append(x[4] - 2j * radii[4])
    w_n.append(x[0] - 2j * radii[0])

    center_n = OrientedCircle.from_point_direction(x[0], 1.0)

    back = norm.inverse()
    return Flower(
        center=center_n.apply_moebius(back),
        petals=tuple(p.apply_moebius(back) for p in petals_n),
        z=tuple(z),
        w=tuple(back(v) for v in w_n),
    )


def _line_intersection(p1: complex, p2: complex, p3: complex, p4: complex) -> complex:
    mat = np.array([[(p2 - p1).real, -(p4 - p3).real],
                    [(p2 - p1).imag, -(p4 - p3).imag]])
    rhs = np.array([(p3 - p1).real, (p3 - p1).imag])
    try:
        t, _ = np.linalg.solve(mat, rhs)
    except np.linalg.LinAlgError as exc:
        raise DegenerateInput("parallel chords") from exc
    return p1 + t * (p2 - p1)


def symmetric_flower(z, mr_tol: float | None = None) -> Flower:
    """The unique flower over the given touching points that is invariant
    under its Moebius involution (equivalently: all six s-circles meet in
    one point, equivalently s[k] = s[k+3]).

    Constructive: send the involution's interior fixed point to infinity;
    the involution becomes z -> -z, opposite touching points become
    antipodal, and the petal-petal points are the pairwise intersections of
    the chords joining alternating touching points.
    """
    if mr_tol is None:
        mr_tol = tolerances.GEOMETRIC
    z = list(z)
    inv = involution_from_pairs(z, tol=mr_tol)
    center = circle_through(z[0], z[1], z[2])
    for k in range(3, 6):
        if abs(center.evaluate(z[k])) > 1e-7:
            raise NotAFlowerConfiguration("the six points are not concyclic")
    p_in, p_out = fixed_points(inv)
    if sphere_distance(p_in, p_out) < 1e-9:
        raise NumericallyParabolic("fixed points of the involution coincide")
    if center.evaluate(p_in) > 0:
        p_in, p_out = p_out, p_in
    if center.evaluate(p_in) > 0:
        raise NotAFlowerConfiguration("no fixed point inside the center circle")

    # normalized star frame: interior fixed point at INF, the other at 0
    ref = max(z, key=lambda v: min(sphere_distance(v, p_out),
                                   sphere_distance(v, p_in)))
    norm = moebius_from_triples((p_out, ref, p_in), (0, 1, INF))
    zeta = [complex(norm(v)) for v in z]

    w_star = [_line_intersection(zeta[k], zeta[(k + 2) % 6],
                                 zeta[(k + 1) % 6], zeta[(k - 1) % 6])
              for k in range(6)]
    petals_star = [circle_through(w_star[k % 6], zeta[k], w_star[k - 1]) for k in range(6)]

    back = norm.inverse()
    return Flower(
        center=center,
        petals=tuple(p.apply_moebius(back) for p in petals_star),
        z=tuple(z),
        w=tuple(back(v) for v in w_star),
    )


def cross_ratios(flower: Flower) -> CrossRatioSextet:
    """Edge cross-ratios s[k] = q(z[k], z[k-1], w[k-1], w[k]).

    Also evaluates the two equivalent expressions
    ``-q(z[k+1], z[k-1], w[k-1], z[k])`` and the squared form
    ``q(z[k+1], z[k-1], w[k-1], w[k]) = s[k]^2`` (the cross-ratio of the
    four points on the s-circle) and records the worst disagreement.
    """
    z, w = flower.z, flower.w
    s = []
    dev = 0.0
    re = 0.0
    for k in range(6):
        sk = cross_ratio(z[k], z[k - 1], w[k - 1], w[k % 6])
        if is_inf(sk):
            raise DegenerateInput("degenerate cross-ratio")
        alt = -cross_ratio(z[(k + 1) % 6], z[k - 1], w[k - 1], z[k])
        sq = cross_ratio(z[(k + 1) % 6], z[k - 1], w[k - 1], w[k % 6])
        dev = max(dev, abs(sk - alt), abs(sk * sk - sq))
        re = max(re, abs(sk.real))
        s.append(sk)
    return CrossRatioSextet(s=tuple(s), max_form_deviation=dev, max_real_part=re)


def he_schramm_residuals(s) -> tuple:
    """Residuals s[k] + s[k+2] + s[k+4] + s[k]*s[k+1]*s[k+2] for k mod 6."""
    s = list(s)
    return tuple(s[k % 6] + s[(k + 2) % 6] + s[(k + 4) % 6]
                 + s[k % 6] * s[(k + 1) % 6] * s[(k + 2) % 6] for k in range(6))


def s_circles(flower: Flower, tol: float | None = None) -> tuple:
    """The six circles S_k through (z[k-1], z[k+1], w[k]); w[k-1] is checked
    to lie on S_k as well."""
    if tol is None:
        tol = tolerances.CLOSURE
    z, w = flower.z, flower.w
    out = []
    for k in range(6):
        ck = circle_through(z[k - 1], z[(k + 1) % 6], w[k % 6])
        if abs(ck.evaluate(w[k - 1])) > 100 * tol:
            raise DegenerateInput(
                f"fourth touching point misses s-circle {k} "
                f"(residual {abs(ck.evaluate(w[k - 1])):.3g})")
        out.append(ck)
    return tuple(out)


def common_point(circles, tol: float | None = None):
    """Common intersection point of the six s-circles, or None.

    Returns (point, spread).  The spread compares the intersections of the
    six consecutive circle pairs, which cross transversally at a common
    point; opposite s-circles are mutually tangent there, so their
    intersections are too ill-conditioned to measure against.
    """
    if tol is None:
        tol = tolerances.CLOSURE
    circles = list(circles)
    if all(c.is_line for c in circles):
        return INF, 0.0
    cands = intersect_circles(circles[0], circles[1])
    if not cands:
        return None, math.inf
    best = None
    best_spread = math.inf
    for cand in cands:
        picks = [cand]
        ok = True
        for i in range(1, 6):
            pts = intersect_circles(circles[i], circles[(i + 1) % 6])
            if not pts:
                ok = False
                break
            picks.append(min(pts, key=lambda p: sphere_distance(p, cand)))
        if not ok:
            continue
        spread = max(sphere_distance(p, q) for p in picks for q in picks)
        if spread < best_spread:
            best_spread = spread
            best = cand
    if best is None or best_spread > tol:
        return None, best_spread
    return best, best_spread


@dataclass(frozen=True)
class SymmetryReport:
    symmetric: bool
    max_opposite_deviation: float
    common_point: object
    spread: float


def is_conformally_symmetric(flower: Flower, tol: float | None = None) -> SymmetryReport:
    """Test s[k] = s[k+3]; diagnostics include the s-circle common point."""
    if tol is None:
        tol = tolerances.GEOMETRIC
    s = cross_ratios(flower).s
    dev = max(abs(s[k] - s[(k + 3) % 6]) for k in range(3))
    try:
        point, spread = common_point(s_circles(flower))
    except DegenerateInput:
        point, spread = None, math.inf
    return SymmetryReport(symmetric=bool(dev < tol),
                          max_opposite_deviation=float(dev),
                          common_point=point, spread=float(spread))


@dataclass(frozen=True)
class FlowerValidation:
    ok: bool
    multi_ratio_residual: float
    max_incidence_residual: float
    max_tangency_residual: float
    orientations_ok: bool
    degenerate: bool

    def summary(self) -> str:
        state = "ok" if self.ok else "FAIL"
        return (f"{state}: |m+1|={self.multi_ratio_residual:.3g}, "
                f"incidence={self.max_incidence_residual:.3g}, "
                f"tangency={self.max_tangency_residual:.3g}, "
                f"orientations={'ok' if self.orientations_ok else 'BAD'}")


def validate_flower(flower: Flower, tol: float | None = None) -> FlowerValidation:
    """Incidence, tangency-orientation, degeneracy and multi-ratio checks."""
    if tol is None:
        tol = tolerances.CLOSURE
    z, w = flower.z, flower.w
    m = multi_ratio(z)
    mr = abs(m + 1) if not is_inf(m) else math.inf

    inc = 0.0
    for k in range(6):
        inc = max(inc, abs(flower.center.evaluate(z[k])),
                  abs(flower.petals[k].evaluate(z[k])),
                  abs(flower.petals[k].evaluate(w[k])),
                  abs(flower.petals[(k + 1) % 6].evaluate(w[k])))

    orient = True
    tang = 0.0
    for k in range(6):
        try:
            t1 = flower.center.tangent_direction(z[k])
            t2 = flower.petals[k].tangent_direction(z[k])
            tang = max(tang, abs(t1 + t2))
            u1 = flower.petals[k].tangent_direction(w[k])
            u2 = flower.petals[(k + 1) % 6].tangent_direction(w[k])
            tang = max(tang, abs(u1 + u2))
        except DegenerateInput:
            orient = False
    orient = orient and tang < 1e-5

    degenerate = False
    for circ in (flower.center, *flower.petals):
        if not circ.is_line and circ.radius < 1e-12:
            degenerate = True

    ok = (mr < 1e-6 and inc < 100 * tol and orient and not degenerate)
    return FlowerValidation(ok=ok, multi_ratio_residual=float(mr),
                            max_incidence_residual=float(inc),
                            max_tangency_residual=float(tang),
                            orientations_ok=orient, degenerate=degenerate)


def symmetric_cross_ratio_range(s1: complex, s2: complex) -> bool:
    """Whether (s1, s2) are attainable as (s[0], s[1]) of an immersed
    conformally symmetric flower.

    The six values come in opposite-equal triples (ia, ib, ic) with
    a, b, c > 0 and a + b + c = abc, so c = (a + b)/(ab - 1) forces ab > 1.
    """
    a = (-1j * complex(s1)).real
    b = (-1j * complex(s2)).real
    return a > 0 and b > 0 and a * b > 1


def symmetric_flower_from_cross_ratios(s1: complex, s2: complex) -> Flower:
    """The conformally symmetric flower realizing targets (s[0], s[1]).

    In the star frame (opposite touching points antipodal on the unit
    circle) the three independent cross-ratios are i*cot of the half-arcs
    between consecutive touching points, and the three arcs sum to pi; the
    hexagon relation is the cotangent identity for angles summing to pi/2.
    Inverting that is a closed form: no iteration is needed.
    """
    a = (-1j * complex(s1)).real
    b = (-1j * complex(s2)).real
    if abs(complex(s1).real) > 1e-9 or abs(complex(s2).real) > 1e-9 or a <= 0 or b <= 0:
        raise DegenerateInput("targets must be positive imaginary")
    if a * b <= 1 + 1e-12:
        raise NotAFlowerConfiguration(
            "no immersed conformally symmetric flower attains these values: "
            f"(-i*s1)(-i*s2) = {a * b:.6g} must exceed 1")
    # s[0] = i*cot(alpha2/2), s[1] = i*cot(alpha3/2), s[2] = i*cot(alpha1/2)
    # with alpha1 + alpha2 + alpha3 = pi (arcs z0->z1, z1->z2, z2->z3)
    alpha2 = 2.0 * math.atan(1.0 / a)
    alpha3 = 2.0 * math.atan(1.0 / b)
    alpha1 = math.pi - alpha2 - alpha3
    angles = [0.0, -alpha1, -(alpha1 + alpha2)]
    zs = [complex(np.exp(1j * t)) for t in angles]
    zs += [-v for v in zs]
    flower = symmetric_flower(zs, mr_tol=1e-7)
    got = cross_ratios(flower).s
    if abs(got[0] - complex(s1)) > 1e-6 or abs(got[1] - complex(s2)) > 1e-6:
        raise NotAFlowerConfiguration(
            f"construction mismatch: got ({got[0]}, {got[1]})")
    return flower
