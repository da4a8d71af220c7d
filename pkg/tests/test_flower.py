import cmath
import math

import numpy as np
import pytest

from hexpack.circles import OrientedCircle, circle_through
from hexpack.errors import (NonPositiveRadius, NotAFlowerConfiguration)
from hexpack.flower import (REGULAR_S, build_flower, common_point, cross_ratios,
                            he_schramm_residuals, is_conformally_symmetric,
                            s_circles, symmetric_flower,
                            symmetric_flower_from_cross_ratios,
                            symmetric_cross_ratio_range, validate_flower)
from hexpack.moebius import (INF, involution_from_pairs, is_inf, multi_ratio,
                             moebius_from_triples, random_moebius,
                             solve_sixth_point, sphere_distance)

REGULAR_Z = tuple(cmath.exp(1j * (k + 1) * math.pi / 3) for k in range(6))
STRIP_Z = (0, 1, 2, 3, 4, INF)


def random_flower_points(rng, moebius=True):
    """Valid flower sextet: bounded-ratio gaps keep the cross-ratios at desk
    scale; the sixth point is solved from the multi-ratio condition and the
    whole sextet optionally pushed through a random Moebius map."""
    xs = np.concatenate([[rng.uniform(-2, 2)], rng.uniform(0.5, 2.0, 4)]).cumsum()
    z6 = solve_sixth_point(list(xs))
    pts = list(xs) + [z6]
    if not moebius:
        return pts
    mob = random_moebius(rng)
    return [mob(p) for p in pts]


class TestBuildFlower:
    def test_equal_radii_strip(self):
        f = build_flower(STRIP_Z, 0.5)
        for p in f.petals[:5]:
            assert abs(p.radius - 0.5) < 1e-12
        assert f.petals[5].is_line
        # finite petals tangent to both parallel lines
        for p in f.petals[:5]:
            assert abs(p.center.imag + 0.5) < 1e-12

    def test_alternating_radii_strip(self):
        f = build_flower(STRIP_Z, 1.0)
        radii = [p.radius for p in f.petals[:5]]
        expected = [1.0, 0.25, 1.0, 0.25, 1.0]
        assert max(abs(a - b) for a, b in zip(radii, expected)) < 1e-12

    def test_regular_flower_from_r1(self):
        # oracle: the true regular flower has petal 0 centered at 2*e^{i pi/3}
        # with radius 1; its radius in the normalized frame fixes r1
        from hexpack.flower import _normalization_map
        norm = _normalization_map(REGULAR_Z)
        petal0 = OrientedCircle.from_center_radius(2 * REGULAR_Z[0], 1.0)
        r1 = petal0.apply_moebius(norm).radius
        f = build_flower(REGULAR_Z, r1)
        for k, p in enumerate(f.petals):
            assert abs(p.radius - 1.0) < 1e-9
            assert abs(p.center - 2 * REGULAR_Z[k]) < 1e-9

    def test_validates(self):
        rng = np.random.default_rng(31)
        for _ in range(25):
            z = random_flower_points(rng)
            f = build_flower(z, float(rng.uniform(0.3, 2.0)), mr_tol=1e-7)
            rep = validate_flower(f)
            assert rep.ok, rep.summary()
            assert abs(multi_ratio(f.z) + 1) < 1e-9

    def test_rejects_bad_multi_ratio(self):
        with pytest.raises(NotAFlowerConfiguration):
            build_flower((0, 1, 2, 3, 4.7, INF), 1.0)

    def test_rejects_negative_orientation(self):
        with pytest.raises(NotAFlowerConfiguration):
            build_flower((4, 3, 2, 1, 0, INF), 1.0)

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(NonPositiveRadius):
            build_flower(STRIP_Z, -1.0)

    def test_label_rotation_accepted(self):
        z = (2, 3, 4, INF, 0, 1)
        f = build_flower(z, 0.7, mr_tol=1e-9)
        assert validate_flower(f).ok


class TestCrossRatios:
    def test_regular_is_i_sqrt3(self):
        f = symmetric_flower(REGULAR_Z)
        s = cross_ratios(f)
        for v in s:
            assert abs(v - REGULAR_S) < 1e-12
        assert s.max_form_deviation < 1e-12

    def test_positive_imaginary(self):
        rng = np.random.default_rng(37)
        for _ in range(20):
            z = random_flower_points(rng)
            f = build_flower(z, float(rng.uniform(0.3, 2.0)), mr_tol=1e-7)
            s = cross_ratios(f)
            assert s.max_real_part < 1e-8
            for v in s:
                assert (-1j * v).real > 0

    def test_strip_values(self):
        # oracle: direct cross-ratio of the explicitly constructed points
        f = build_flower(STRIP_Z, 1.0)
        s = cross_ratios(f).s
        expected = [2j, 1j, 4j, 1j, 2j, 2j]
        assert max(abs(a - b) for a, b in zip(s, expected)) < 1e-12


class TestHeSchramm:
    def test_constant_regular(self):
        res = he_schramm_residuals([REGULAR_S] * 6)
        assert max(abs(r) for r in res) < 1e-14

    def test_constructed_flowers(self):
        rng = np.random.default_rng(41)
        for _ in range(20):
            z = random_flower_points(rng)
            f = build_flower(z, float(rng.uniform(0.3, 2.0)), mr_tol=1e-7)
            res = he_schramm_residuals(cross_ratios(f).s)
            assert max(abs(r) for r in res) < 1e-9

    def test_perturbation_breaks_it(self):
        s = [REGULAR_S] * 6
        s[2] = s[2] + 0.1j
        res = he_schramm_residuals(s)
        assert max(abs(r) for r in res) > 0.05


class TestSymmetricFlower:
    def test_regular_geometry(self):
        f = symmetric_flower(REGULAR_Z)
        assert validate_flower(f).ok
        for k, p in enumerate(f.petals):
            assert abs(p.center - 2 * REGULAR_Z[k]) < 1e-10
            assert abs(p.radius - 1) < 1e-10

    def test_regular_s_circle_through_origin(self):
        f = symmetric_flower(REGULAR_Z)
        circles = s_circles(f)
        # the s-circle at the touching point z[5] = 1 is |z - 1| = 1
        assert abs(circles[5].center - 1) < 1e-9
        assert abs(circles[5].radius - 1) < 1e-9
        pt, spread = common_point(circles)
        assert spread < 1e-9
        assert sphere_distance(pt, 0) < 1e-9

    def test_symmetric_common_point_is_involution_fixed_point(self):
        rng = np.random.default_rng(43)
        from hexpack.moebius import fixed_points
        for _ in range(10):
            z = random_flower_points(rng)
            f = symmetric_flower(z, mr_tol=1e-7)
            pt, spread = common_point(s_circles(f))
            assert spread < 1e-8
            inv = involution_from_pairs(f.z, tol=1e-7)
            fps = fixed_points(inv)
            assert min(sphere_distance(pt, p) for p in fps) < 1e-7

    def test_moebius_equivariance(self):
        rng = np.random.default_rng(47)
        for _ in range(10):
            z = random_flower_points(rng, moebius=False)
            mob = random_moebius(rng)
            f1 = symmetric_flower(z, mr_tol=1e-7)
            f2 = symmetric_flower([mob(v) for v in z], mr_tol=1e-7)
            for k in range(6):
                img = f1.petals[k].apply_moebius(mob)
                assert img.coefficient_distance(f2.petals[k]) < 1e-6
                assert sphere_distance(mob(f1.w[k]), f2.w[k]) < 1e-7

    def test_strip_points_opposite_equal(self):
        f = symmetric_flower(STRIP_Z)
        s = cross_ratios(f).s
        assert max(abs(s[k] - s[(k + 3) % 6]) for k in range(3)) < 1e-10

    def test_invariant_under_own_involution(self):
        f = symmetric_flower(REGULAR_Z)
        inv = f.involution()
        for k in range(6):
            img = f.petals[k].apply_moebius(inv)
            assert img.coefficient_distance(f.petals[(k + 3) % 6]) < 1e-9
        assert f.center.apply_moebius(inv).coefficient_distance(f.center) < 1e-9


class TestEquivalences:
    """Symmetry criteria agree: involution invariance <=> s-circles meet
    <=> opposite cross-ratios equal; generic family members satisfy none."""

    def test_symmetric_passes_all(self):
        rng = np.random.default_rng(53)
        for _ in range(15):
            z = random_flower_points(rng)
            f = symmetric_flower(z, mr_tol=1e-7)
            rep = is_conformally_symmetric(f)
            assert rep.symmetric
            assert rep.max_opposite_deviation < 1e-9
            assert rep.spread < 1e-8

    def test_generic_fails_all(self):
        rng = np.random.default_rng(59)
        for _ in range(15):
            z = random_flower_points(rng, moebius=False)
            f = build_flower(z, float(rng.uniform(1.5, 3.0)), mr_tol=1e-7)
            rep = is_conformally_symmetric(f)
            assert not rep.symmetric
            assert rep.max_opposite_deviation > 1e-4
            assert rep.common_point is None or rep.spread > 1e-4

    def test_prop1_equivalence(self):
        rng = np.random.default_rng(61)
        for _ in range(20):
            z = random_flower_points(rng)
            build_flower(z, 1.0, mr_tol=1e-7)      # succeeds
            involution_from_pairs(z, tol=1e-7)     # succeeds
            bad = list(z)
            bad[1] = bad[1] + 0.3 if not is_inf(bad[1]) else 5.0
            if abs(multi_ratio(bad) + 1) < 1e-2:
                continue
            with pytest.raises(NotAFlowerConfiguration):
                build_flower(bad, 1.0)
            with pytest.raises(NotAFlowerConfiguration):
                involution_from_pairs(bad)


class TestTargetCrossRatios:
    def test_feasible_grid(self):
        grid = [0.5, 1.0, math.sqrt(3), 3.0]
        n_ok = 0
        for t1 in grid:
            for t2 in grid:
                if not symmetric_cross_ratio_range(1j * t1, 1j * t2):
                    # hexagon relation forces (-i s1)(-i s2) > 1
                    assert t1 * t2 <= 1 + 1e-12
                    with pytest.raises(NotAFlowerConfiguration):
                        symmetric_flower_from_cross_ratios(1j * t1, 1j * t2)
                    continue
                f = symmetric_flower_from_cross_ratios(1j * t1, 1j * t2)
                s = cross_ratios(f).s
                assert abs(s[0] - 1j * t1) < 1e-6
                assert abs(s[1] - 1j * t2) < 1e-6
                assert is_conformally_symmetric(f).symmetric
                n_ok += 1
        assert n_ok == 10

    def test_regular_target(self):
        f = symmetric_flower_from_cross_ratios(REGULAR_S, REGULAR_S)
        s = cross_ratios(f).s
        assert all(abs(v - REGULAR_S) < 1e-9 for v in s)
