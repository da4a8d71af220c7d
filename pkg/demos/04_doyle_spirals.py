"""Doyle spirals: the discrete exponential function.

Radii follow R * A^n * B^m; the packing closes up for every positive A, B
and is invariant under the involution of each of its flowers.  Its edge
cross-ratio field is constant: the delta = 0 stratum of the symmetric
family, and the only entire case.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from hexpack import (DoyleParams, doyle_spiral, field_from_layout,
                     is_conformally_symmetric, validate_immersion)
from hexpack.layout import involution_invariance_residual
from hexpack.serialize import layout_to_svg

OUT = pathlib.Path(__file__).resolve().parent / "out"
OUT.mkdir(exist_ok=True)

for a, b in ((1.0, 1.0), (2.0, 1.0), (1.3, 0.8)):
    params = DoyleParams(a, b, 1.0)
    lay = doyle_spiral(params, extent=4)
    rep = validate_immersion(lay)
    print(f"A={a}, B={b}: {rep.summary()}")

    ring = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]
    radii = [params.radius(v) for v in ring]
    print(f"  flower radii around origin: {[round(r, 4) for r in radii]}")
    print(f"  opposite products R_k R_(k+3): "
          f"{[round(radii[k] * radii[k + 3], 12) for k in range(3)]}")

    fld = field_from_layout(lay)
    triple = [fld.get((0, 0, cls)) for cls in (1, 0, 2)]
    av, bv, cv = triple
    print(f"  constant field (a, b, c) = "
          f"{[round(v.imag, 6) for v in triple]}, "
          f"closure |a+b+c+abc| = {abs(av + bv + cv + av * bv * cv):.1e}")

    sym = all(is_conformally_symmetric(lay.flower_at(v)).symmetric
              for v in lay.interior_vertices())
    print(f"  all flowers conformally symmetric: {sym}")
    print(f"  whole-layout involution residual at origin: "
          f"{involution_invariance_residual(lay, (0, 0)):.2e}")

    (OUT / f"doyle_A{a}_B{b}.svg").write_text(layout_to_svg(lay))

print(f"\nSVGs written to {OUT}")
