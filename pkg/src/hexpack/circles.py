"""Oriented circles and lines in Moebius-covariant Hermitian form.

A circle is the zero set of ``F(z) = a*|z|^2 + conj(b)*z + b*conj(z) + c``
with real a, c and complex b, scaled so that ``|b|^2 - a*c = 1``.  The sign
of the triple carries the orientation: the interior (left of the travel
direction) is where F < 0.  Lines are the a = 0 case (circles through INF).
Moebius maps act by matrix congruence, which preserves all of the above.
"""

from __future__ import annotations

import math

import numpy as np

from . import tolerances
from .errors import DegenerateInput
from .moebius import (INF, ExtComplex, MoebiusMap, hom, is_inf,
                      moebius_from_triples, sphere_distance)

_LINE_EPS = 1e-13


class OrientedCircle:
    """Circle or line with orientation, in normalized Hermitian form."""

    __slots__ = ("a", "b", "c")

    def __init__(self, a: float, b: complex, c: float):
        disc = abs(b) ** 2 - a * c
        if disc <= 0:
            raise DegenerateInput(f"not a real circle: |b|^2 - a*c = {disc}")
        s = 1.0 / math.sqrt(disc)
        a *= s
        b *= s
        c *= s
        if abs(a) < _LINE_EPS:
            a = 0.0
        self.a = float(a)
        self.b = complex(b)
        self.c = float(c)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_center_radius(cls, center: complex, radius: float,
                           positively_oriented: bool = True) -> "OrientedCircle":
        if radius <= 0:
            raise DegenerateInput("radius must be positive")
        a = 1.0
        b = -complex(center)
        c = abs(center) ** 2 - radius ** 2
        if not positively_oriented:
            a, b, c = -a, -b, -c
        return cls(a, b, c)

    @classmethod
    def from_point_direction(cls, point: complex, direction: complex) -> "OrientedCircle":
        """Line through ``point`` traveling along ``direction``; interior on the left."""
        d = complex(direction)
        if abs(d) == 0:
            raise DegenerateInput("zero direction")
        d /= abs(d)
        b = -1j * d
        c = 2.0 * ((point * d.conjugate()).imag)
        return cls(0.0, b, c)

    @classmethod
    def unit(cls) -> "OrientedCircle":
        return cls.from_center_radius(0j, 1.0)

    # -- basic queries -----------------------------------------------------

    @property
    def is_line(self) -> bool:
        return self.a == 0.0

    @property
    def center(self) -> complex:
        if self.is_line:
            raise DegenerateInput("a line has no finite center")
        return -self.b / self.a

    @property
    def radius(self) -> float:
        if self.is_line:
            return math.inf
        return 1.0 / abs(self.a)  # |b|^2 - a*c = 1

    def line_normal_offset(self) -> tuple[complex, float]:
        """Unit outward normal n and offset d with the line {Re(conj(n) z) = d}."""
        if not self.is_line:
            raise DegenerateInput("not a line")
        n = self.b / abs(self.b)
        d = -self.c / (2.0 * abs(self.b))
        return n, d

    def evaluate(self, z: ExtComplex) -> float:
        """Sign-carrying incidence form, weighted to stay finite near INF."""
        if is_inf(z):
            return self.a
        z = complex(z)
        val = (self.a * abs(z) ** 2 + 2.0 * (self.b * z.conjugate()).real + self.c)
        return val / (1.0 + abs(z) ** 2)

    def contains(self, z: ExtComplex, tol: float | None = None) -> bool:
        if tol is None:
            tol = tolerances.GEOMETRIC
        return abs(self.evaluate(z)) < tol

    def tangent_direction(self, z: ExtComplex) -> complex:
        """Unit travel direction at a point of the circle (interior on the left)."""
        if is_inf(z):
            if not self.is_line:
                raise DegenerateInput("finite circle does not pass through INF")
            g = self.b
        else:
            g = self.a * complex(z) + self.b
        if abs(g) == 0:
            raise DegenerateInput("degenerate gradient")
        return 1j * g / abs(g)

    def reversed(self) -> "OrientedCircle":
        return OrientedCircle(-self.a, -self.b, -self.c)

    # -- Moebius action ----------------------------------------------------

    def apply_moebius(self, mob: MoebiusMap) -> "OrientedCircle":
        """Image circle; commutes with the point action of ``mob``."""
        minv = mob.inverse().mat
        h = np.array([[self.a, self.b], [self.b.conjugate(), self.c]], dtype=complex)
        hh = minv.conjugate().T @ h @ minv
        return OrientedCircle(hh[0, 0].real, hh[0, 1], hh[1, 1].real)

    # -- comparison --------------------------------------------------------

    def coefficient_distance(self, other: "OrientedCircle",
                             ignore_orientation: bool = False) -> float:
        d = _coef_dist(self, other)
        if ignore_orientation:
            d = min(d, _coef_dist(self, other.reversed()))
        return d

    def __repr__(self):
        if self.is_line:
            n, d = self.line_normal_offset()
            return f"OrientedCircle(line, normal={n:.6g}, offset={d:.6g})"
        return f"OrientedCircle(center={self.center:.6g}, radius={self.radius:.6g}, orient={'+' if self.a > 0 else '-'})"


def _coef_dist(c1: OrientedCircle, c2: OrientedCircle) -> float:
    return math.sqrt(
        (c1.a - c2.a) ** 2 + 2 * abs(c1.b - c2.b) ** 2 + (c1.c - c2.c) ** 2)


def circle_through(p1: ExtComplex, p2: ExtComplex, p3: ExtComplex) -> OrientedCircle:
    """Circle (or line) through three points, oriented by their cyclic order."""
    pts = [p1, p2, p3]
    n_inf = sum(1 for p in pts if is_inf(p))
    if n_inf > 1:
        raise DegenerateInput("at most one point may be INF")
    for i in range(3):
        if sphere_distance(pts[i], pts[(i + 1) % 3]) < 1e-14:
            raise DegenerateInput("coincident points")

    if n_inf == 1:
        # rotate so INF is last: cyclic rotation preserves orientation
        while not is_inf(pts[2]):
            pts = pts[1:] + pts[:1]
        a, b = complex(pts[0]), complex(pts[1])
        return OrientedCircle.from_point_direction(a, b - a)

    a, b, c = (complex(p) for p in pts)
    cross = ((b - a).conjugate() * (c - a)).imag
    scale = max(abs(b - a), abs(c - a))
    if abs(cross) < 1e-13 * scale * scale:
        # collinear: a line; orientation from the travel order a -> b
        return OrientedCircle.from_point_direction(a, b - a)
    # one real linear condition per point on (A, Re b, Im b, C)
    rows = np.array([[abs(z) ** 2, 2 * z.real, 2 * z.imag, 1.0] for z in (a, b, c)])
    _, _, vt = np.linalg.svd(rows)
    av, bx, by, cv = vt[-1]
    circ = OrientedCircle(av, bx + 1j * by, cv)
    # counterclockwise travel must leave the interior (F < 0) on the left,
    # i.e. the disk bounded by the circle, which contains the centroid side
    if (cross > 0) != (circ.a > 0):
        circ = circ.reversed()
    return circ


def intersect_circles(c1: OrientedCircle, c2: OrientedCircle) -> list[ExtComplex]:
    """Intersection points of two distinct circles/lines (0, 1 or 2 points).

    Two lines meet at their finite crossing and at INF; parallel distinct
    lines are tangent at INF.
    """
    if c1.is_line and c2.is_line:
        n1, d1 = c1.line_normal_offset()
        n2, d2 = c2.line_normal_offset()
        det = (n1.conjugate() * n2).imag  # sin of the angle between normals
        if abs(det) < 1e-13:
            return [INF]
        mat = np.array([[n1.real, n1.imag], [n2.real, n2.imag]])
        x, y = np.linalg.solve(mat, np.array([d1, d2]))
        return [complex(x, y), INF]
    if c1.is_line or c2.is_line:
        line, circ = (c1, c2) if c1.is_line else (c2, c1)
        n, d = line.line_normal_offset()
        z0, r = circ.center, circ.radius
        # signed distance of the center from the line
        s = (z0 * n.conjugate()).real - d
        if abs(s) > r:
            return []
        foot = z0 - s * n
        t = math.sqrt(max(r * r - s * s, 0.0))
        tang = 1j * n
        if t < 1e-13 * r:
            return [foot]
        return [foot - t * tang, foot + t * tang]
    z1, r1 = c1.center, c1.radius
    z2, r2 = c2.center, c2.radius
    d = abs(z2 - z1)
    if d < 1e-15:
        return []
    u = (z2 - z1) / d
    x = (d * d + r1 * r1 - r2 * r2) / (2 * d)
    h2 = r1 * r1 - x * x
    if h2 < -1e-13 * r1 * r1:
        return []
    h = math.sqrt(max(h2, 0.0))
    base = z1 + x * u
    if h < 1e-13 * max(r1, r2):
        return [base]
    return [base - 1j * h * u, base + 1j * h * u]


def orientations_opposite_at(c1: OrientedCircle, c2: OrientedCircle,
                             z: ExtComplex, tol: float | None = None) -> bool:
    """True when two circles tangent at z carry opposite travel directions."""
    if tol is None:
        tol = 1e-6
    t1 = c1.tangent_direction(z)
    t2 = c2.tangent_direction(z)
    return abs(t1 + t2) < tol


def normalize_to_unit_circle(circ: OrientedCircle) -> MoebiusMap:
    """A Moebius map sending the given circle to the unit circle."""
    if circ.is_line:
        n, d = circ.line_normal_offset()
        p0 = d * n
        t = 1j * n
        src = (p0, p0 + t, p0 - t)
    else:
        z0, r = circ.center, circ.radius
        src = (z0 + r, z0 + 1j * r, z0 - r)
    return moebius_from_triples(src, (1 + 0j, 1j, -1 + 0j))
