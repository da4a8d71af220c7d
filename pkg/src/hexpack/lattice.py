"""Cross-ratio fields on the edges of the honeycomb lattice.

Circle centers sit on the triangular lattice ``n + m*e^{i pi/3}``; the
honeycomb lattice is its dual, so honeycomb edges are in bijection with
the lattice edges.  The six neighbor offsets, in counterclockwise order,

    e_0 = (1, 0)   e_1 = (0, 1)   e_2 = (-1, 1)
    e_3 = (-1, 0)  e_4 = (0, -1)  e_5 = (1, -1)

give each undirected edge a canonical key ``(n, m, cls)``: the edge from
base vertex (n, m) to (n, m) + e_cls with cls in {0, 1, 2}.

Every edge belongs to one of three direction families, each constant along
its own lattice direction and indexed by an integer level:

    family A (cls 1, edges along e_1): level n,     value i*tan(delta*n + alpha)
    family B (cls 0, edges along e_0): level m,     value i*tan(delta*m + beta)
    family C (cls 2, edges along e_2): level 1-n-m, value i*tan(delta*(1-n-m) + gamma)

with ``delta = -(alpha + beta + gamma)``.  The hexagon around vertex
(n, m) then carries the levels (n, m, 1-n-m), which sum to 1, and the
hexagon closure is the tangent addition theorem.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import tolerances
from .errors import (MissingEdge, MonodromyViolation, PoleOnWindow,
                     SingularPair)

#: neighbor offsets in counterclockwise order
OFFSETS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))

#: serialization letters by edge class
CLASS_DIR = ("B", "A", "C")
DIR_CLASS = {"B": 0, "A": 1, "C": 2}


def canonical_edge(n: int, m: int, direction: int) -> tuple[int, int, int]:
    """Canonical key of the edge from (n, m) toward OFFSETS[direction]."""
    direction %= 6
    if direction < 3:
        return (n, m, direction)
    dn, dm = OFFSETS[direction]
    return (n + dn, m + dm, direction - 3)


def edge_level(n: int, m: int, cls: int) -> int:
    """Family level of a canonical edge: n, m or 1-n-m by class."""
    if cls == 1:
        return n
    if cls == 0:
        return m
    if cls == 2:
        return 1 - n - m
    raise ValueError(f"bad edge class {cls}")


def hexagon_edges(n: int, m: int) -> tuple:
    """Canonical keys of the six edges around vertex (n, m), by direction."""
    return tuple(canonical_edge(n, m, j) for j in range(6))


def hexagon_levels(n: int, m: int) -> tuple[int, int, int]:
    """Levels (family A, family B, family C) of the hexagon at (n, m)."""
    return (n, m, 1 - n - m)


def spoke_edges(n: int, m: int) -> tuple:
    """Canonical keys of the ring edges (v+e_j, v+e_{j+1}), j = 0..5."""
    out = []
    for j in range(6):
        dn, dm = OFFSETS[j]
        out.append(canonical_edge(n + dn, m + dm, j + 2))
    return tuple(out)


@dataclass(frozen=True)
class Window:
    """Inclusive rectangle of base vertices."""

    n_min: int
    n_max: int
    m_min: int
    m_max: int

    @classmethod
    def centered(cls, extent: int) -> "Window":
        return cls(-extent, extent, -extent, extent)

    def vertices(self):
        for n in range(self.n_min, self.n_max + 1):
            for m in range(self.m_min, self.m_max + 1):
                yield (n, m)

    def __contains__(self, v):
        n, m = v
        return self.n_min <= n <= self.n_max and self.m_min <= m <= self.m_max


class EdgeField:
    """Complex values on honeycomb edges, stored densely over a window.

    NaN marks unassigned edges; reads of those raise MissingEdge.
    """

    def __init__(self, window: Window, params: "SolutionParams | None" = None):
        self.window = window
        self.params = params
        nn = window.n_max - window.n_min + 1
        mm = window.m_max - window.m_min + 1
        self._values = np.full((3, nn, mm), np.nan, dtype=complex)

    def _index(self, n, m):
        return (n - self.window.n_min, m - self.window.m_min)

    def has_edge(self, key) -> bool:
        n, m, cls = key
        if not (n, m) in self.window:
            return False
        i, j = self._index(n, m)
        return not np.isnan(self._values[cls, i, j])

    def get(self, key) -> complex:
        n, m, cls = key
        if not (n, m) in self.window:
            raise MissingEdge(f"edge {key} outside window")
        i, j = self._index(n, m)
        v = self._values[cls, i, j]
        if np.isnan(v):
            raise MissingEdge(f"edge {key} not assigned")
        return complex(v)

    def set(self, key, value: complex):
        n, m, cls = key
        if not (n, m) in self.window:
            raise MissingEdge(f"edge {key} outside window")
        i, j = self._index(n, m)
        self._values[cls, i, j] = value

    def edges(self):
        """All assigned (key, value) pairs in deterministic order."""
        for n in range(self.window.n_min, self.window.n_max + 1):
            for m in range(self.window.m_min, self.window.m_max + 1):
                i, j = self._index(n, m)
                for cls in range(3):
                    v = self._values[cls, i, j]
                    if not np.isnan(v):
                        yield (n, m, cls), complex(v)

    def hexagon_values(self, n: int, m: int) -> tuple:
        """Values on the six edges around (n, m), by direction 0..5."""
        return tuple(self.get(k) for k in hexagon_edges(n, m))

    def complete_hexagons(self):
        """Vertices whose six surrounding edges are all assigned."""
        for v in self.window.vertices():
            if all(self.has_edge(k) for k in hexagon_edges(*v)):
                yield v


@dataclass(frozen=True)
class SolutionParams:
    """Angles of the closed-form conformally symmetric field.

    Angles are reduced mod pi at construction; delta = -(alpha+beta+gamma)
    is derived.  All hexagon residuals of the generated field vanish by the
    tangent addition theorem.
    """

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", self.alpha % math.pi)
        object.__setattr__(self, "beta", self.beta % math.pi)
        object.__setattr__(self, "gamma", self.gamma % math.pi)

    @property
    def delta(self) -> float:
        return -(self.alpha + self.beta + self.gamma)

    def family_angle(self, cls: int, level: int) -> float:
        base = (self.beta, self.alpha, self.gamma)[cls]
        return self.delta * level + base

    def edge_value(self, key) -> complex:
        n, m, cls = key
        return 1j * math.tan(self.family_angle(cls, edge_level(n, m, cls)))

    def is_doyle(self, tol: float = 1e-12) -> bool:
        """delta == 0 mod pi: the field is constant (discrete exponential)."""
        return min(self.delta % math.pi, math.pi - self.delta % math.pi) < tol


def solution_field(params: SolutionParams, window: Window,
                   pole_tol: float | None = None) -> EdgeField:
    """Closed-form field i*tan(delta*level + angle) over a window."""
    if pole_tol is None:
        pole_tol = tolerances.POLE
    offenders = []
    out = EdgeField(window, params=params)
    for v in window.vertices():
        n, m = v
        for cls in range(3):
            ang = params.family_angle(cls, edge_level(n, m, cls))
            if abs(math.cos(ang)) < pole_tol:
                offenders.append((n, m, cls))
            else:
                out.set((n, m, cls), 1j * math.tan(ang))
    if offenders:
        raise PoleOnWindow(
            f"tangent pole on {len(offenders)} edge(s), first {offenders[0]}",
            edges=offenders)
    return out


def constant_field(values3, window: Window) -> EdgeField:
    """Field with one constant per edge class (b, a, c order by class)."""
    out = EdgeField(window)
    for v in window.vertices():
        n, m = v
        for cls in range(3):
            out.set((n, m, cls), values3[cls])
    return out


def complete_third(a: complex, b: complex) -> complex:
    """Third hexagon value from a + b + c + abc = 0."""
    den = 1 + a * b
    if abs(den) < 1e-12:
        raise SingularPair(f"1 + a*b = {den}")
    return -(a + b) / den


def he_schramm_residuals_six(s) -> tuple:
    s = list(s)
    return tuple(s[k % 6] + s[(k + 2) % 6] + s[(k + 4) % 6]
                 + s[k % 6] * s[(k + 1) % 6] * s[(k + 2) % 6] for k in range(6))


def hexagon_residual(fld: EdgeField, v, sym_tol: float = 1e-9) -> complex:
    """Closure residual of the hexagon at v.

    Opposite-equal hexagons reduce to the three-value form a + b + c + abc;
    otherwise the max-modulus of the six general residuals is returned.
    """
    s = fld.hexagon_values(*v)
    if max(abs(s[j] - s[j + 3]) for j in range(3)) < sym_tol:
        a, b, c = s[1], s[0], s[2]
        return a + b + c + a * b * c
    res = he_schramm_residuals_six(s)
    return max(res, key=abs)


def symmetric_residual(fld: EdgeField, v) -> float:
    """Deviation from opposite-edge equality at hexagon v."""
    s = fld.hexagon_values(*v)
    return max(abs(s[j] - s[j + 3]) for j in range(3))


def propagate(fld: EdgeField, v, d1: complex, spoke: int = 0,
              tol: float | None = None) -> EdgeField:
    """Extend an opposite-equal hexagon to its six neighbor hexagons.

    ``d1`` seeds the ring edge (v+e_spoke, v+e_{spoke+1}); each further ring
    edge follows from the He-Schramm relation of the neighbor hexagon
    between them, a Moebius step of the previous one.  After six steps the
    continuation must return the seed; a failure signals that the hexagon
    at v violates the closure relation.

    Returns a fresh field holding all edges of the six neighbor hexagons.
    """
    if tol is None:
        tol = tolerances.GEOMETRIC
    n, m = v
    t = fld.hexagon_values(n, m)

    d = [None] * 6
    d[spoke % 6] = complex(d1)
    # neighbor hexagon at v+e_j couples spokes d_{j-1}, d_j via t_j
    for i in range(1, 7):
        j = (spoke + i) % 6
        d_new = complete_third(t[j], d[(j - 1) % 6])
        if i < 6:
            d[j] = d_new
        else:
            if abs(d_new - d[j]) > tol:
                raise MonodromyViolation(
                    f"continuation around {v} returns {d_new}, seeded {d[j]}; "
                    "the hexagon violates the closure relation")

    big = Window(fld.window.n_min - 2, fld.window.n_max + 2,
                 fld.window.m_min - 2, fld.window.m_max + 2)
    out = EdgeField(big)
    spokes = spoke_edges(n, m)
    hexes = hexagon_edges(n, m)
    for j in range(6):
        out.set(hexes[j], t[j])
        out.set(spokes[j], d[j])
    for j in range(6):
        dn, dm = OFFSETS[j]
        u = (n + dn, m + dm)
        # outer edges by the opposite-equality of the neighbor hexagon
        out.set(canonical_edge(*u, j), t[j])
        out.set(canonical_edge(*u, j + 1), d[(j - 1) % 6])
        out.set(canonical_edge(*u, j + 5), d[j])
    return out


def reconstruct_field(window: Window, t0: complex, t1: complex, d0: complex,
                      tol: float | None = None) -> EdgeField:
    """Rebuild a conformally symmetric field on a window from three adjacent
    seed edges: the class-0 and class-1 edges at the origin plus the ring
    edge between neighbors e_0 and e_1.

    Breadth-first continuation: each processed hexagon fills its ring via
    ``propagate``-style Moebius steps, which hands every neighbor its full
    class triple and a known spoke.
    """
    if tol is None:
        tol = tolerances.GEOMETRIC
    out = EdgeField(window)
    margin = Window(window.n_min - 1, window.n_max + 1,
                    window.m_min - 1, window.m_max + 1)

    # class triples per hexagon; known[key] collects every edge value seen,
    # feeding spoke lookups of later hexagons
    triples = {(0, 0): (complex(t0), complex(t1), complete_third(t0, t1))}
    known = {canonical_edge(1, 0, 2): complex(d0)}
    queue = deque([(0, 0)])
    done = set()
    while queue:
        v = queue.popleft()
        if v in done:
            continue
        n, m = v
        hexes = hexagon_edges(n, m)
        spokes = spoke_edges(n, m)
        seed = next((j for j in range(6) if spokes[j] in known), None)
        if seed is None:
            continue  # re-enqueued by whichever neighbor supplies a spoke
        done.add(v)
        tri = triples[v]
        t = [tri[j % 3] for j in range(6)]
        d = [None] * 6
        d[seed] = known[spokes[seed]]
        for i in range(1, 7):
            j = (seed + i) % 6
            val = complete_third(t[j], d[(j - 1) % 6])
            if i < 6:
                d[j] = val
            elif abs(val - d[j]) > tol:
                raise MonodromyViolation(f"inconsistent continuation at {v}")
        for j in range(6):
            known.setdefault(hexes[j], t[j])
            known.setdefault(spokes[j], d[j])
            if hexes[j][:2] in window:
                out.set(hexes[j], t[j])
            if spokes[j][:2] in window:
                out.set(spokes[j], d[j])
            dn, dm = OFFSETS[j]
            u = (n + dn, m + dm)
            if u in margin and u not in done:
                tri_u = [None, None, None]
                tri_u[j % 3] = t[j]
                tri_u[(j + 1) % 3] = d[(j - 1) % 6]
                tri_u[(j + 2) % 3] = d[j]
                triples.setdefault(u, tuple(tri_u))
                queue.append(u)
    return out


@dataclass(frozen=True)
class FamilyInterval:
    """Maximal contiguous run of levels with positive-imaginary values."""

    anchor: int
    lo: int | None
    hi: int | None
    capped: bool

    @property
    def empty(self) -> bool:
        return self.lo is None

    def width(self) -> int:
        return 0 if self.empty else self.hi - self.lo + 1


@dataclass(frozen=True)
class ImmersedWindow:
    a: FamilyInterval
    b: FamilyInterval
    c: FamilyInterval
    entire: bool

    def intervals(self):
        return {"A": self.a, "B": self.b, "C": self.c}


def _scan_family(params: SolutionParams, cls: int, anchor: int,
                 max_extent: int) -> FamilyInterval:
    def positive(level):
        return math.tan(params.family_angle(cls, level)) > 0

    if not positive(anchor):
        return FamilyInterval(anchor=anchor, lo=None, hi=None, capped=False)
    lo = anchor
    while anchor - lo < max_extent and positive(lo - 1):
        lo -= 1
    hi = anchor
    while hi - anchor < max_extent and positive(hi + 1):
        hi += 1
    capped = (anchor - lo >= max_extent) and (hi - anchor >= max_extent)
    return FamilyInterval(anchor=anchor, lo=lo, hi=hi, capped=capped)


def immersed_window(params: SolutionParams, max_extent: int = 10000) -> ImmersedWindow:
    """Maximal contiguous per-family level ranges around the origin hexagon
    on which the field stays positive imaginary.

    The ranges are unbounded (reported as capped at max_extent) exactly when
    delta == 0 mod pi and each of alpha, beta, gamma lies in (0, pi/2) mod
    pi: the entire, Doyle, case.  Otherwise the tangent drifts across a sign
    change and the window is finite.
    """
    # anchor levels of the hexagon at the origin: (n, m, 1-n-m) = (0, 0, 1)
    fam_a = _scan_family(params, 1, 0, max_extent)
    fam_b = _scan_family(params, 0, 0, max_extent)
    fam_c = _scan_family(params, 2, 1, max_extent)
    entire = fam_a.capped and fam_b.capped and fam_c.capped
    return ImmersedWindow(a=fam_a, b=fam_b, c=fam_c, entire=entire)
