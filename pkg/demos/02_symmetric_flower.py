"""Conformally symmetric flowers and their s-circles.

Each touching point of a flower carries an auxiliary circle through four
neighboring touching points.  For exactly one flower in every family these
six s-circles meet in a single point: the fixed point of the Moebius
involution exchanging opposite touching points.
"""

import cmath
import math
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from hexpack import (build_flower, common_point, cross_ratios, fixed_points,
                     involution_from_pairs, s_circles, symmetric_flower,
                     symmetric_flower_from_cross_ratios)

# the regular flower: unit center circle, six unit petals
z = [cmath.exp(1j * (k + 1) * math.pi / 3) for k in range(6)]
flower = symmetric_flower(z)
print("regular flower petals:")
for k, petal in enumerate(flower.petals):
    print(f"  petal {k}: center {petal.center:.4f}, radius {petal.radius:.6f}")

circles = s_circles(flower)
point, spread = common_point(circles)
print(f"\ns-circles share the point {point} (spread {spread:.2e})")

inv = involution_from_pairs(z)
print("involution fixed points:", fixed_points(inv))

# a generic family member: the s-circles no longer meet
generic = build_flower([0, 1, 2, 3, 4, __import__("hexpack").INF], 1.0)
point_g, spread_g = common_point(s_circles(generic))
print(f"generic member common point: {point_g} (spread {spread_g:.2e})")

# prescribing the two free cross-ratios: closed form via half-arc cotangents
target = symmetric_flower_from_cross_ratios(1.2j, 2.5j)
s = cross_ratios(target)
print("\nflower realizing s0 = 1.2i, s1 = 2.5i:",
      [round(v.imag, 6) for v in s.s])
print("note: targets need (-i s0)(-i s1) > 1, the hexagon closure bound")
