"""Continuum limit machinery: Schwarzian derivatives, Airy functions and
the rotationally symmetric map whose Schwarzian is the identity.

The Airy pair is built from first principles: the two Maclaurin basis
solutions of psi'' = z*psi, combined with initial values obtained by
oscillatory quadrature of the classical real-line integral
``Ai(x) = (1/pi) * integral_0^inf cos(x t + t^3/3) dt``.  Bi comes from
the rotation identity ``Bi(z) = i q^2 Ai(q^2 z) - i q Ai(q z)`` with
q = e^{2 pi i/3}, which at series level reduces to
``sqrt(3) * (Ai(0) y1(z) - Ai'(0) y2(z))``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from . import tolerances
from .errors import (ConstantCase, CriticalPoint, FarFromRegular,
                     OutOfValidatedDomain)
from .moebius import INF, ExtComplex, is_inf

#: cube root of unity used throughout the continuum sections
Q3 = cmath.exp(2j * math.pi / 3)

SQRT3 = math.sqrt(3.0)

#: radius inside which the Maclaurin evaluation is validated
SERIES_DOMAIN = 6.0

_SERIES_EPS = 1e-18
_MAX_TERMS = 400


# -- initial values from the defining integral ---------------------------

@lru_cache(maxsize=1)
def airy_initial_values() -> tuple[float, float]:
    """(Ai(0), Ai'(0)) by quadrature of the defining oscillatory integral.

    The head is integrated directly; the tail is transformed by u = t^3/3
    into a Fourier-type integral with an algebraically decaying weight,
    which QUADPACK's oscillatory rule extrapolates accurately.
    """
    u_cut = 400.0 * math.pi
    t_cut = (3.0 * u_cut) ** (1.0 / 3.0)

    head0 = integrate.quad(lambda t: math.cos(t ** 3 / 3.0), 0.0, t_cut,
                           limit=4000, epsabs=1e-13, epsrel=1e-13,
                           full_output=1)[0]
    tail0 = integrate.quad(lambda u: (3.0 * u) ** (-2.0 / 3.0), u_cut,
                           np.inf, weight="cos", wvar=1.0, limit=400,
                           full_output=1)[0]
    ai0 = (head0 + tail0) / math.pi

    head1 = integrate.quad(lambda t: t * math.sin(t ** 3 / 3.0), 0.0, t_cut,
                           limit=4000, epsabs=1e-13, epsrel=1e-13,
                           full_output=1)[0]
    tail1 = integrate.quad(lambda u: (3.0 * u) ** (-1.0 / 3.0), u_cut,
                           np.inf, weight="sin", wvar=1.0, limit=400,
                           full_output=1)[0]
    aip0 = -(head1 + tail1) / math.pi
    return ai0, aip0


# -- Maclaurin basis of psi'' = z psi ------------------------------------

def airy_basis(z: complex) -> tuple[complex, complex, complex, complex]:
    """(y1, y1', y2, y2') with y1 = 1 + z^3/6 + ..., y2 = z + z^4/12 + ...

    Term recurrences in z^3; converges on the whole plane, validated for
    |z| <= SERIES_DOMAIN at working precision.
    """
    z = complex(z)
    if abs(z) > SERIES_DOMAIN:
        raise OutOfValidatedDomain(
            f"|z| = {abs(z):.3g} exceeds validated radius {SERIES_DOMAIN}")
    z3 = z ** 3
    y1 = term = 1.0 + 0j
    y2 = term2 = z
    d1 = 0j
    dterm1 = 0.5 * z * z   # first term of y1' (j = 1)
    d2 = dterm2 = 1.0 + 0j
    j = 0
    while j < _MAX_TERMS:
        term = term * z3 / ((3 * j + 2) * (3 * j + 3))
        term2 = term2 * z3 / ((3 * j + 3) * (3 * j + 4))
        dterm2 = dterm2 * z3 / ((3 * j + 1) * (3 * j + 3))
        if j > 0:
            dterm1 = dterm1 * z3 / ((3 * j) * (3 * j + 2))
        y1 += term
        y2 += term2
        d1 += dterm1
        d2 += dterm2
        j += 1
        if (abs(term) < _SERIES_EPS * (1 + abs(y1))
                and abs(term2) < _SERIES_EPS * (1 + abs(y2))
                and abs(dterm1) < _SERIES_EPS * (1 + abs(d1))):
            break
    return y1, d1, y2, d2


def airy(z: complex) -> tuple[complex, complex]:
    """(Ai(z), Bi(z)) from the series basis and quadrature initial values."""
    c1, c2 = airy_initial_values()
    y1, _, y2, _ = airy_basis(z)
    ai = c1 * y1 + c2 * y2
    bi = SQRT3 * (c1 * y1 - c2 * y2)
    return ai, bi


def airy_with_derivatives(z: complex):
    """(Ai, Ai', Bi, Bi')."""
    c1, c2 = airy_initial_values()
    y1, d1, y2, d2 = airy_basis(z)
    return (c1 * y1 + c2 * y2, c1 * d1 + c2 * d2,
            SQRT3 * (c1 * y1 - c2 * y2), SQRT3 * (c1 * d1 - c2 * d2))


def airy_bi_rotation(z: complex) -> complex:
    """Bi evaluated through the rotation identity, as an independent path."""
    c1, c2 = airy_initial_values()

    def ai(w):
        y1, _, y2, _ = airy_basis(w)
        return c1 * y1 + c2 * y2

    return 1j * Q3 ** 2 * ai(Q3 ** 2 * z) - 1j * Q3 * ai(Q3 * z)


def airy_ratio(z: complex) -> ExtComplex:
    """The rotationally symmetric ratio (Bi - sqrt(3) Ai)/(Bi + sqrt(3) Ai).

    Equals -(Ai'(0)/Ai(0)) * y2(z)/y1(z), so f(0) = 0 and f(q z) = q f(z)
    hold at series level; zeros of y1 map to INF.  Its Schwarzian is -2z:
    ratios of solutions of psi'' = u*psi carry the Schwarzian -2u.
    """
    c1, c2 = airy_initial_values()
    y1, _, y2, _ = airy_basis(z)
    if y1 == 0:
        return INF
    return -(c2 / c1) * y2 / y1


#: real rescale bringing the ratio's Schwarzian -2z to exactly z
AIRY_MAP_SCALE = -(0.5 ** (1.0 / 3.0))


def airy_map(z: complex) -> ExtComplex:
    """The symmetric map normalized so that S(f) = z.

    A real argument rescale of :func:`airy_ratio` (chain rule multiplies a
    linear Schwarzian by the cube of the scale), which keeps f(0) = 0 and
    the rotational equivariance f(q z) = q f(z).
    """
    return airy_ratio(AIRY_MAP_SCALE * z)


def airy_ode_oracle(z: complex, rtol: float = 1e-12) -> tuple[complex, complex]:
    """(Ai, Bi) by adaptive integration of psi'' = z psi along the ray to z.

    Independent of the series evaluation; shares only the initial values.
    """
    c1, c2 = airy_initial_values()
    z = complex(z)
    if z == 0:
        return c1 + 0j, SQRT3 * c1 + 0j

    def rhs(t, y):
        zt = t * z
        return [z * y[1], z * zt * y[0]]

    out = []
    for psi0, dpsi0 in ((c1, c2), (SQRT3 * c1, -SQRT3 * c2)):
        sol = integrate.solve_ivp(rhs, (0.0, 1.0),
                                  [complex(psi0), complex(dpsi0)],
                                  rtol=rtol, atol=1e-14, method="DOP853")
        out.append(sol.y[0, -1])
    return out[0], out[1]


# -- Schwarzian derivative ------------------------------------------------

def _fd_weights(order: int, offsets) -> np.ndarray:
    """Finite-difference weights for the given derivative order."""
    k = np.asarray(offsets, dtype=float)
    n = len(k)
    mat = np.vander(k, n, increasing=True).T
    rhs = np.zeros(n)
    rhs[order] = math.factorial(order)
    return np.linalg.solve(mat, rhs)

_OFFSETS7 = np.arange(-3, 4)
_W1 = _fd_weights(1, _OFFSETS7)
_W2 = _fd_weights(2, _OFFSETS7)
_W3 = _fd_weights(3, _OFFSETS7)


def schwarzian_fd(f, z: complex, h: float = 1e-3,
                  critical_tol: float = 1e-8) -> complex:
    """Schwarzian derivative (f''/f')' - (f''/f')^2/2 by 7-point central
    differences of f', f'', f''' along the real direction.

    Moebius-invariant: composing f with any fractional-linear map leaves
    the value unchanged.
    """
    samples = np.array([complex(f(z + k * h)) for k in _OFFSETS7])
    if any(is_inf(f(z + k * h)) for k in _OFFSETS7):
        raise CriticalPoint("sample hits a pole")
    d1 = np.dot(_W1, samples) / h
    d2 = np.dot(_W2, samples) / (h * h)
    d3 = np.dot(_W3, samples) / (h * h * h)
    if abs(d1) < critical_tol:
        raise CriticalPoint(f"|f'| = {abs(d1):.3g} too small at {z}")
    g = d2 / d1
    return d3 / d1 - 1.5 * g * g


@dataclass(frozen=True)
class SchwarzianLinear:
    """S(f) = A z + B with real A."""

    A: float
    B: complex


@dataclass(frozen=True)
class AffineChange:
    """g(z) = lam * z + mu."""

    lam: float
    mu: complex

    def __call__(self, z: complex) -> complex:
        return self.lam * z + self.mu


def normalize_linear_schwarzian(lin: SchwarzianLinear) -> AffineChange:
    """Affine g with S(f o g) = A z + B whenever S(f) = z.

    Chain rule for affine g: S(f o g)(z) = S(f)(g(z)) * lam^2, so lam is
    the real cube root of A and mu = B / lam^2.
    """
    if lin.A == 0:
        raise ConstantCase("A = 0: use the exponential (Doyle) branch")
    lam = math.copysign(abs(lin.A) ** (1.0 / 3.0), lin.A)
    mu = lin.B / (lam * lam)
    return AffineChange(lam=lam, mu=mu)


# -- discrete Schwarzians of near-regular fields --------------------------

def discrete_schwarzians(fld, eps: float, max_deviation: float = 0.5) -> dict:
    """Per-edge deviation h with s = i*sqrt(3) * (1 + eps^2 * h).

    Values far from the regular constant are refused: the expansion only
    means anything near i*sqrt(3).
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    out = {}
    for key, s in fld.edges():
        rel = s / (1j * SQRT3) - 1
        if abs(rel) >= max_deviation:
            raise FarFromRegular(
                f"edge {key}: |s/(i sqrt3) - 1| = {abs(rel):.3g}")
        out[key] = complex(rel) / (eps * eps)
    return out


def directional_means(h_field: dict) -> tuple[float, float, float]:
    """Mean deviation per direction family (A, B, C), as real numbers."""
    sums = {0: 0.0, 1: 0.0, 2: 0.0}
    counts = {0: 0, 1: 0, 2: 0}
    for (n, m, cls), h in h_field.items():
        sums[cls] += h.real
        counts[cls] += 1
    if not all(counts.values()):
        raise FarFromRegular("need edges of all three families")
    return (sums[1] / counts[1], sums[0] / counts[0], sums[2] / counts[2])


def schwarzian_from_directions(a: float, b: float, c: float) -> complex:
    """Continuum Schwarzian 4*(a + q^2 b + q c) from the three directional
    components; with a + b + c = 0 its real part is 6a."""
    return 4.0 * (a + Q3 ** 2 * b + Q3 * c)


# -- hexagonal grid images -------------------------------------------------

def hexgrid_vertices(spacing: float, extent: float):
    """Honeycomb vertices (triangle centers of the scaled lattice) within
    |z| <= extent, deterministically ordered; the set is invariant under
    rotation by 120 degrees about the origin."""
    w1 = cmath.exp(1j * math.pi / 3)
    up = (1 + w1) / 3.0
    down = 2.0 * (1 + w1) / 3.0
    reach = int(math.ceil(extent / spacing)) + 2
    out = []
    for n in range(-reach, reach + 1):
        for m in range(-reach, reach + 1):
            base = n + m * w1
            for off in (up, down):
                p = spacing * (base + off)
                if abs(p) <= extent:
                    out.append(p)
    return out


def hexgrid_edges(spacing: float, extent: float):
    """Honeycomb edge segments (pairs of vertices) within |z| <= extent."""
    w1 = cmath.exp(1j * math.pi / 3)
    up = (1 + w1) / 3.0
    down = 2.0 * (1 + w1) / 3.0
    reach = int(math.ceil(extent / spacing)) + 2
    segs = []
    # each up-vertex connects to the down-vertices of the three triangles
    # sharing its lattice triangle's edges
    for n in range(-reach, reach + 1):
        for m in range(-reach, reach + 1):
            base = n + m * w1
            p = base + up
            for dq in (down, down - 1, down - w1):
                q = base + dq
                a, b = spacing * p, spacing * q
                if abs(a) <= extent and abs(b) <= extent:
                    segs.append((a, b))
    return segs


def hexgrid_image(f, spacing: float, extent: float,
                  samples_per_edge: int = 8):
    """Images under f of the honeycomb grid: a list of polylines.

    Each grid edge is sampled at interior points so curved images render
    faithfully.
    """
    polylines = []
    for a, b in hexgrid_edges(spacing, extent):
        ts = np.linspace(0.0, 1.0, samples_per_edge + 1)
        pts = []
        for t in ts:
            w = f(a + t * (b - a))
            if is_inf(w):
                break
            pts.append(complex(w))
        if len(pts) >= 2:
            polylines.append(pts)
    return polylines
