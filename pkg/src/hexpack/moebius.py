"""Extended complex arithmetic and Moebius transformations.

Points of the Riemann sphere are plain ``complex`` values plus the
distinguished :data:`INF` marker; infinity is never a large float.
Computations route through homogeneous coordinates ``(p, q)`` with
``z = p/q`` and ``INF = (1, 0)`` so that all the fractional-linear limit
rules hold exactly.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from . import tolerances
from .errors import DegenerateInput, IdentityMap, NotAFlowerConfiguration


class Infinity:
    """Singleton marker for the point at infinity."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"


INF = Infinity()

#: a point of the Riemann sphere: finite complex value or INF
ExtComplex = complex | Infinity


def is_inf(z: ExtComplex) -> bool:
    return z is INF or isinstance(z, Infinity)


def hom(z: ExtComplex) -> tuple[complex, complex]:
    """Homogeneous lift: z -> (z, 1), INF -> (1, 0)."""
    if is_inf(z):
        return (1 + 0j), 0j
    return complex(z), (1 + 0j)


def from_hom(p: complex, q: complex) -> ExtComplex:
    """Projective point (p, q) back to the sphere; q == 0 exactly means INF."""
    if q == 0:
        return INF
    return p / q


def hom_det(a: ExtComplex, b: ExtComplex) -> complex:
    """Determinant of the homogeneous lifts; equals a - b for finite points."""
    pa, qa = hom(a)
    pb, qb = hom(b)
    return pa * qb - pb * qa


def sphere_distance(a: ExtComplex, b: ExtComplex) -> float:
    """Chordal metric on the Riemann sphere (range [0, 2])."""
    if is_inf(a) and is_inf(b):
        return 0.0
    if is_inf(a):
        return 2.0 / math.sqrt(1.0 + abs(complex(b)) ** 2)
    if is_inf(b):
        return 2.0 / math.sqrt(1.0 + abs(complex(a)) ** 2)
    a = complex(a)
    b = complex(b)
    return 2.0 * abs(a - b) / math.sqrt((1.0 + abs(a) ** 2) * (1.0 + abs(b) ** 2))


def ext_close(a: ExtComplex, b: ExtComplex, tol: float | None = None) -> bool:
    if tol is None:
        tol = tolerances.GEOMETRIC
    return sphere_distance(a, b) < tol


def _check_distinct(points, where=""):
    pts = list(points)
    n_inf = sum(1 for z in pts for _ in [0] if is_inf(z))
    if n_inf > 1:
        raise DegenerateInput(f"more than one point at infinity{where}")
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if sphere_distance(pts[i], pts[j]) < 1e-14:
                raise DegenerateInput(f"coincident points at positions {i}, {j}{where}")


def cross_ratio(a: ExtComplex, b: ExtComplex, c: ExtComplex, d: ExtComplex) -> ExtComplex:
    """Cross-ratio (a-b)(c-d) / ((b-c)(d-a)) with exact infinity limits.

    Moebius invariant; real exactly when the four points are concyclic.
    """
    _check_distinct([a, b, c, d], " in cross_ratio")
    num = hom_det(a, b) * hom_det(c, d)
    den = hom_det(b, c) * hom_det(d, a)
    return from_hom(num, den)


def multi_ratio(z) -> ExtComplex:
    """Six-point ratio (z1-z2)(z3-z4)(z5-z6) / ((z2-z3)(z4-z5)(z6-z1)).

    Equals -1 exactly when the points are the center touching points of a
    circle flower.  Moebius invariant; the infinity limit of each factor is
    taken projectively (for z6 = INF the trailing ratio contributes -1).
    """
    z = list(z)
    if len(z) != 6:
        raise DegenerateInput("multi_ratio needs exactly six points")
    if sum(1 for v in z if is_inf(v)) > 1:
        raise DegenerateInput("more than one point at infinity")
    for k in range(6):
        if sphere_distance(z[k], z[(k + 1) % 6]) < 1e-14:
            raise DegenerateInput(f"coincident consecutive points {k}, {(k + 1) % 6}")
    num = hom_det(z[0], z[1]) * hom_det(z[2], z[3]) * hom_det(z[4], z[5])
    den = hom_det(z[1], z[2]) * hom_det(z[3], z[4]) * hom_det(z[5], z[0])
    return from_hom(num, den)


def solve_sixth_point(z5) -> ExtComplex:
    """Given five points, the unique sixth making the multi-ratio -1.

    The multi-ratio is a fractional-linear function of the last point, so the
    constraint is a linear solve; if the five points are concyclic the result
    lands on the same circle.
    """
    z = list(z5)
    if len(z) != 5:
        raise DegenerateInput("need exactly five points")
    _check_distinct(z, " in solve_sixth_point")
    # m = K * (z5 - z6)/(z6 - z1) with K = (z1-z2)(z3-z4) / ((z2-z3)(z4-z5));
    # m = -1  <=>  K*(z5 - z6) = z1 - z6, homogeneously in z6.
    k_num = hom_det(z[0], z[1]) * hom_det(z[2], z[3])
    k_den = hom_det(z[1], z[2]) * hom_det(z[3], z[4])
    p4, q4 = hom(z[4])
    p0, q0 = hom(z[0])
    # z6 = (K*z5 - z1) / (K - 1)
    return from_hom(k_num * p4 - k_den * p0, k_num * q4 - k_den * q0)


class MoebiusMap:
    """Fractional-linear map stored as a 2x2 complex matrix with det = 1.

    The two scalar lifts +-M describe the same map; a canonical sign (first
    entry of significant modulus gets argument in (-pi/2, pi/2]) makes
    equality testable.  Composition is the matrix product; application
    handles poles and infinity through homogeneous coordinates.
    """

    __slots__ = ("mat",)

    def __init__(self, m11, m12, m21, m22):
        mat = np.array([[m11, m12], [m21, m22]], dtype=complex)
        det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
        if abs(det) < 1e-30:
            raise DegenerateInput("Moebius matrix is singular")
        mat = mat / np.sqrt(det)
        self.mat = _canonical_sign(mat)

    @classmethod
    def _from_matrix(cls, mat):
        return cls(mat[0, 0], mat[0, 1], mat[1, 0], mat[1, 1])

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def scaling(cls, a: complex):
        return cls(a, 0, 0, 1)

    @classmethod
    def translation(cls, b: complex):
        return cls(1, b, 0, 1)

    def __call__(self, z: ExtComplex) -> ExtComplex:
        p, q = hom(z)
        m = self.mat
        return from_hom(m[0, 0] * p + m[0, 1] * q, m[1, 0] * p + m[1, 1] * q)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap._from_matrix(self.mat @ other.mat)

    def inverse(self) -> "MoebiusMap":
        m = self.mat
        return MoebiusMap(m[1, 1], -m[0, 1], -m[1, 0], m[0, 0])

    def trace(self) -> complex:
        return self.mat[0, 0] + self.mat[1, 1]

    def distance(self, other: "MoebiusMap") -> float:
        """Frobenius distance between the det-1 lifts, minimized over +-."""
        d1 = np.linalg.norm(self.mat - other.mat)
        d2 = np.linalg.norm(self.mat + other.mat)
        return float(min(d1, d2))

    def is_identity(self, tol: float | None = None) -> bool:
        if tol is None:
            tol = tolerances.GEOMETRIC
        return self.distance(MoebiusMap.identity()) < tol

    def __repr__(self):
        m = self.mat
        return f"MoebiusMap([[{m[0, 0]:.6g}, {m[0, 1]:.6g}], [{m[1, 0]:.6g}, {m[1, 1]:.6g}]])"


def _canonical_sign(mat):
    flat = mat.reshape(-1)
    scale = max(abs(v) for v in flat)
    for v in flat:
        if abs(v) > 0.5 * scale:
            if v.real < 0 or (v.real == 0 and v.imag < 0):
                return -mat
            return mat
    return mat


def _to_zero_one_inf(a: ExtComplex, b: ExtComplex, c: ExtComplex) -> MoebiusMap:
    """The unique map with a -> 0, b -> 1, c -> INF."""
    if is_inf(a):
        return MoebiusMap(0, b - c, 1, -c)
    if is_inf(b):
        return MoebiusMap(1, -a, 1, -c)
    if is_inf(c):
        return MoebiusMap(1, -a, 0, b - a)
    return MoebiusMap(b - c, -a * (b - c), b - a, -c * (b - a))


def moebius_from_triples(src, dst) -> MoebiusMap:
    """The unique Moebius map sending the source triple to the target triple."""
    src = list(src)
    dst = list(dst)
    if len(src) != 3 or len(dst) != 3:
        raise DegenerateInput("triples must have three points each")
    _check_distinct(src, " in source triple")
    _check_distinct(dst, " in target triple")
    return _to_zero_one_inf(*dst).inverse() @ _to_zero_one_inf(*src)


def involution_from_pairs(z, tol: float | None = None) -> MoebiusMap:
    """The Moebius involution exchanging z_k and z_{k+3} of a flower sextet.

    Exists precisely when the multi-ratio of the six points is -1; checked
    both on the input and on the constructed map.
    """
    if tol is None:
        tol = tolerances.GEOMETRIC
    z = list(z)
    if len(z) != 6:
        raise DegenerateInput("need six points")
    m = multi_ratio(z)
    if is_inf(m) or abs(m + 1) > tol:
        raise NotAFlowerConfiguration(f"multi-ratio is {m}, not -1 (tol {tol})")
    mob = moebius_from_triples(z[:3], z[3:])
    # the defining property that actually uses m = -1
    for k in range(3):
        if sphere_distance(mob(z[3 + k]), z[k]) > 100 * tol:
            raise NotAFlowerConfiguration(
                "constructed map does not exchange opposite points")
    return mob


def fixed_points(mob: MoebiusMap) -> tuple[ExtComplex, ExtComplex]:
    """Both fixed points (equal for a parabolic map)."""
    if mob.is_identity(1e-14):
        raise IdentityMap("every point is fixed")
    m = mob.mat
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    if abs(c) < 1e-15:
        if abs(a - d) < 1e-15:
            return INF, INF  # translation: parabolic at infinity
        return INF, b / (d - a)
    disc = cmath.sqrt((a - d) ** 2 + 4 * b * c)
    return (a - d + disc) / (2 * c), (a - d - disc) / (2 * c)


def random_moebius(rng) -> MoebiusMap:
    """A random well-conditioned Moebius map (test/demo helper)."""
    while True:
        e = rng.standard_normal(8)
        m = np.array([[e[0] + 1j * e[1], e[2] + 1j * e[3]],
                      [e[4] + 1j * e[5], e[6] + 1j * e[7]]])
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det) > 0.1 and np.linalg.norm(m) < 20 * abs(det) ** 0.5:
            return MoebiusMap._from_matrix(m)
