"""Generate the shared circle-transform test vectors consumed by the
browser explorer's unit tests.

Run from the repository root:  python3 tools/generate_vectors.py
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

import numpy as np

from hexpack import serialize
from hexpack.circles import OrientedCircle
from hexpack.moebius import random_moebius


def circle_obj(c: OrientedCircle) -> dict:
    return {"a": c.a, "b_re": c.b.real, "b_im": c.b.imag, "c": c.c}


def build_vectors(count: int = 100, seed: int = 991) -> dict:
    rng = np.random.default_rng(seed)
    cases = []
    for _ in range(count):
        center = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        radius = float(rng.uniform(0.2, 2.5))
        circ = OrientedCircle.from_center_radius(center, radius)
        mob = random_moebius(rng)
        img = circ.apply_moebius(mob)
        m = mob.mat
        cases.append({
            "circle": circle_obj(circ),
            "map": [[m[0, 0].real, m[0, 0].imag], [m[0, 1].real, m[0, 1].imag],
                    [m[1, 0].real, m[1, 0].imag], [m[1, 1].real, m[1, 1].imag]],
            "expected": circle_obj(img),
        })
    return {"schema": "hexpack/moebius-vectors", "version": 1,
            "tolerance": 1e-7, "cases": cases}


def main() -> None:
    root = pathlib.Path(__file__).resolve().parents[1]
    out = root / "shared" / "moebius_vectors.json"
    out.parent.mkdir(exist_ok=True)
    out.write_text(serialize.dumps(build_vectors()))
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
