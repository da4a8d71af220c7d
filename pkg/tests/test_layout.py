import cmath
import math

import numpy as np
import pytest

from hexpack.errors import FieldInconsistent, NotImmersed
from hexpack.flower import cross_ratios, is_conformally_symmetric
from hexpack.lattice import (SolutionParams, Window, canonical_edge,
                             constant_field, solution_field)
from hexpack.layout import (DoyleParams, PackingLayout, doyle_spiral,
                            field_from_layout, fit_alignment,
                            involution_invariance_residual,
                            lattice_position, layout_alignment_residual,
                            layout_from_field, regular_norm,
                            validate_immersion)
from hexpack.moebius import random_moebius, sphere_distance

SQRT3 = math.sqrt(3)
PI3 = math.pi / 3
REG = SolutionParams(PI3, PI3, PI3)
# nonzero delta but immersed on the windows used below
NEAR_REG = SolutionParams(PI3 + 0.01, PI3 + 0.02, PI3 - 0.005)


def regular_center(v):
    return 2 * lattice_position(v)


class TestLayoutFromField:
    def test_constant_field_gives_regular_packing(self):
        fld = solution_field(REG, Window.centered(3))
        lay = layout_from_field(fld, norm=regular_norm(fld))
        assert lay.closure_residual < 1e-10
        for v, circ in lay.circles.items():
            assert abs(circ.radius - 1.0) < 1e-9
            assert abs(circ.center - regular_center(v)) < 1e-9

    def test_norms_differ_by_single_moebius(self):
        fld = solution_field(NEAR_REG, Window.centered(3))
        l1 = layout_from_field(fld, norm=None)
        l2 = layout_from_field(fld, norm=(1 + 1j, -2, 0.5j))
        mob = fit_alignment(l1, l2)
        assert layout_alignment_residual(l1, l2, mob) < 1e-8

    def test_moebius_equivariance_of_norm(self):
        rng = np.random.default_rng(83)
        fld = solution_field(REG, Window.centered(2))
        base = regular_norm(fld)
        mob = random_moebius(rng)
        l1 = layout_from_field(fld, norm=base)
        l2 = layout_from_field(fld, norm=tuple(mob(p) for p in base))
        for key in l1.touch_points:
            assert sphere_distance(mob(l1.touch_points[key]),
                                   l2.touch_points[key]) < 1e-8

    def test_interior_flowers_reproduce_field(self):
        params = NEAR_REG
        fld = solution_field(params, Window.centered(3))
        lay = layout_from_field(fld, norm=regular_norm(fld))
        out = field_from_layout(lay)
        checked = 0
        for key, val in out.edges():
            assert abs(val - params.edge_value(key)) < 1e-8
            checked += 1
        assert checked > 50

    def test_interior_flowers_conformally_symmetric(self):
        fld = solution_field(NEAR_REG, Window.centered(3))
        lay = layout_from_field(fld, norm=regular_norm(fld))
        for v in lay.interior_vertices():
            rep = is_conformally_symmetric(lay.flower_at(v), tol=1e-8)
            assert rep.symmetric

    def test_sign_change_window_folds_over(self):
        # delta far from 0: the window crosses a tangent sign change, the
        # layout still builds but its boundary flowers are not immersed
        fld = solution_field(SolutionParams(0.5, 0.6, 0.7), Window.centered(2))
        with pytest.raises(NotImmersed):
            layout_from_field(fld)
        lay = layout_from_field(fld, require_immersed=False)
        rep = validate_immersion(lay)
        assert not rep.ok
        assert rep.worst_tangency > 1.0
        # flowers remain conformally symmetric even where folded
        for v in lay.interior_vertices():
            s = cross_ratios(lay.flower_at(v)).s
            assert max(abs(s[k] - s[(k + 3) % 6]) for k in range(3)) < 1e-8

    def test_inconsistent_field_rejected(self):
        fld = solution_field(REG, Window.centered(2))
        fld.set((0, 0, 0), 1j * (SQRT3 + 0.05))
        with pytest.raises(FieldInconsistent):
            layout_from_field(fld)

    def test_non_immersed_field_rejected(self):
        fld = constant_field((1j * SQRT3, -1j * SQRT3, 1j * SQRT3),
                             Window.centered(1))
        with pytest.raises(NotImmersed):
            layout_from_field(fld)


class TestDoyle:
    def test_equal_radii_regular(self):
        lay = doyle_spiral(DoyleParams(1.0, 1.0, 1.0), extent=3)
        for circ in lay.circles.values():
            assert abs(circ.radius - 1.0) < 1e-12
        assert validate_immersion(lay).ok

    def test_flower_radii_products(self):
        lay = doyle_spiral(DoyleParams(2.0, 1.0, 1.0), extent=2)
        p = DoyleParams(2.0, 1.0, 1.0)
        ring = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]
        radii = [p.radius(v) for v in ring]
        assert radii == [2.0, 1.0, 0.5, 0.5, 1.0, 2.0]
        for k in range(3):
            assert abs(radii[k] * radii[k + 3] - 1.0) < 1e-15

    def test_every_flower_conformally_symmetric(self):
        for a, b in ((2.0, 1.0), (1.3, 0.8), (0.6, 1.7)):
            lay = doyle_spiral(DoyleParams(a, b, 1.0), extent=3)
            assert validate_immersion(lay).ok
            for v in lay.interior_vertices():
                rep = is_conformally_symmetric(lay.flower_at(v), tol=1e-8)
                assert rep.symmetric

    def test_constant_field_with_closure(self):
        lay = doyle_spiral(DoyleParams(1.5, 0.9, 1.0), extent=3)
        fld = field_from_layout(lay)
        by_class = {0: [], 1: [], 2: []}
        for key, v in fld.edges():
            by_class[key[2]].append(v)
        consts = {}
        for cls, vals in by_class.items():
            arr = np.array(vals)
            assert np.abs(arr - arr.mean()).max() < 1e-10
            consts[cls] = arr.mean()
        a, b, c = consts[1], consts[0], consts[2]
        assert abs(a + b + c + a * b * c) < 1e-10
        for v in (a, b, c):
            assert v.imag > 0 and abs(v.real) < 1e-10

    def test_whole_layout_involution_invariance(self):
        lay = doyle_spiral(DoyleParams(1.4, 0.9, 1.0), extent=3)
        for v in [(0, 0), (1, 0), (0, 1), (-1, 1)]:
            assert involution_invariance_residual(lay, v) < 1e-7

    def test_doyle_layout_matches_field_reconstruction(self):
        # cross-module oracle: Euclidean chaining vs Moebius-frame layout
        lay_e = doyle_spiral(DoyleParams(2.0, 1.0, 1.0), extent=3)
        fld = field_from_layout(lay_e)
        win = fld.window
        full = constant_field(tuple(fld.get((0, 0, cls)) for cls in range(3)),
                              win)
        lay_m = layout_from_field(full, norm=regular_norm(full))
        mob = fit_alignment(lay_m, lay_e)
        assert layout_alignment_residual(lay_m, lay_e, mob) < 1e-7

    def test_degenerate_circle_detected(self):
        lay = doyle_spiral(DoyleParams(1.0, 1.0, 1.0), extent=2)
        from hexpack.circles import OrientedCircle
        lay.circles[(0, 0)] = OrientedCircle.from_center_radius(0j, 1e-13)
        rep = validate_immersion(lay)
        assert not rep.ok


class TestValidateImmersion:
    def test_doyle_passes(self):
        lay = doyle_spiral(DoyleParams(1.2, 0.7, 1.0), extent=3)
        rep = validate_immersion(lay)
        assert rep.ok
        assert rep.n_flowers > 0
        assert rep.worst_multi_ratio < 1e-9

    def test_solution_layout_passes(self):
        fld = solution_field(NEAR_REG, Window.centered(3))
        lay = layout_from_field(fld, norm=regular_norm(fld))
        assert validate_immersion(lay).ok

    def test_cycle_closure_on_15x15(self):
        fld = solution_field(NEAR_REG, Window(-7, 7, -7, 7))
        worst_hex = max(abs(__import__("hexpack").hexagon_residual(fld, v))
                        for v in fld.complete_hexagons())
        assert worst_hex < 1e-12
        lay = layout_from_field(fld, norm=None)
        assert lay.closure_residual < 1e-8
