import cmath
import math

import numpy as np
import pytest

from hexpack.airy import (AIRY_MAP_SCALE, Q3, SQRT3, AffineChange,
                          SchwarzianLinear, airy, airy_basis,
                          airy_bi_rotation, airy_initial_values, airy_map,
                          airy_ode_oracle, airy_ratio, airy_with_derivatives,
                          directional_means, discrete_schwarzians,
                          hexgrid_edges, hexgrid_image, hexgrid_vertices,
                          normalize_linear_schwarzian, schwarzian_fd,
                          schwarzian_from_directions)
from hexpack.errors import (ConstantCase, CriticalPoint, FarFromRegular,
                            OutOfValidatedDomain)
from hexpack.lattice import SolutionParams, Window, edge_level, solution_field
from hexpack.moebius import MoebiusMap, random_moebius

PI3 = math.pi / 3


class TestSchwarzianFD:
    def test_identity_is_zero(self):
        # the f''' stencil has a roundoff floor of about eps/h^3 = 1e-7
        assert abs(schwarzian_fd(lambda z: z, 0.2 + 0.1j)) < 1e-6

    def test_exponential_is_minus_half(self):
        for z in (0j, 0.5, -0.3 + 0.4j):
            assert abs(schwarzian_fd(cmath.exp, z) + 0.5) < 1e-6

    def test_moebius_invariance(self):
        rng = np.random.default_rng(5)
        n_checked = 0
        for _ in range(20):
            mob = random_moebius(rng)
            z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
            base = cmath.exp(z)
            # skip samples too close to the pole of the Moebius map
            if abs(mob.mat[1, 0] * base + mob.mat[1, 1]) < 0.3:
                continue
            s1 = schwarzian_fd(cmath.exp, z)
            s2 = schwarzian_fd(lambda w: complex(mob(cmath.exp(w))), z)
            assert abs(s1 - s2) < 1e-5
            n_checked += 1
        assert n_checked >= 10

    def test_critical_point(self):
        with pytest.raises(CriticalPoint):
            schwarzian_fd(lambda z: z * z, 0j)

    def test_constant_schwarzian_of_scaled_exp(self):
        # Doyle link: exp(mu z) has constant Schwarzian -mu^2/2
        for mu in (1.0, 2.0, 1 - 0.5j):
            s = schwarzian_fd(lambda z: cmath.exp(mu * z), 0.1 + 0.1j)
            assert abs(s + mu * mu / 2) < 1e-5


class TestAiryValues:
    def test_initial_value_from_integral(self):
        ai0, aip0 = airy_initial_values()
        assert abs(ai0 - 0.3550280539) < 1e-9
        assert aip0 < 0

    def test_bi_zero_relation(self):
        ai0, bi0 = airy(0)
        assert abs(bi0 - SQRT3 * ai0) < 1e-15

    def test_defining_ode_residual(self):
        # second derivative from the basis recurrences: y'' = z*y termwise
        rng = np.random.default_rng(11)
        for _ in range(50):
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            h = 1e-4
            ai_m, _ = airy(z - h)
            ai_0, _ = airy(z)
            ai_p, _ = airy(z + h)
            second = (ai_p - 2 * ai_0 + ai_m) / (h * h)
            assert abs(second - z * ai_0) < 1e-7 * max(1.0, abs(ai_0))

    def test_series_vs_ode_oracle(self):
        rng = np.random.default_rng(13)
        worst = 0.0
        for _ in range(25):
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            a1, b1 = airy(z)
            a2, b2 = airy_ode_oracle(z)
            worst = max(worst, abs(a1 - a2), abs(b1 - b2))
        assert worst < 1e-9

    def test_bi_rotation_identity(self):
        rng = np.random.default_rng(17)
        for _ in range(25):
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            _, bi = airy(z)
            assert abs(airy_bi_rotation(z) - bi) < 1e-9

    def test_wronskian_constant(self):
        ai0, aip0 = airy_initial_values()
        w0 = -2 * SQRT3 * ai0 * aip0
        rng = np.random.default_rng(19)
        vals = []
        for _ in range(50):
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            ai, aip, bi, bip = airy_with_derivatives(z)
            vals.append(ai * bip - aip * bi)
        vals = np.array(vals)
        assert np.abs(vals - w0).max() < 1e-9 * abs(w0)
        # cross-validation against the independent integrator
        z = 1.1 - 0.7j
        h = 1e-5
        a_p, b_p = airy_ode_oracle(z + h)
        a_m, b_m = airy_ode_oracle(z - h)
        a_0, b_0 = airy_ode_oracle(z)
        w_ode = a_0 * (b_p - b_m) / (2 * h) - b_0 * (a_p - a_m) / (2 * h)
        assert abs(w_ode - w0) < 1e-7

    def test_out_of_domain(self):
        with pytest.raises(OutOfValidatedDomain):
            airy_basis(7.0)


class TestAiryMap:
    def test_zero(self):
        assert abs(complex(airy_map(0))) < 1e-12

    def test_rotational_equivariance(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            z = complex(rng.uniform(-1.4, 1.4), rng.uniform(-1.4, 1.4))
            lhs = complex(airy_map(Q3 * z))
            rhs = Q3 * complex(airy_map(z))
            assert abs(lhs - rhs) < 1e-9

    def test_schwarzian_is_z(self):
        rng = np.random.default_rng(29)
        for _ in range(30):
            z = complex(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7))
            assert abs(schwarzian_fd(airy_map, z, 1e-3) - z) < 1e-5

    def test_raw_ratio_schwarzian_is_minus_2z(self):
        # ratios of solutions of psi'' = u psi carry Schwarzian -2u
        for z in (0.3, 0.5j, -0.4 + 0.2j):
            s = schwarzian_fd(airy_ratio, z, 1e-3)
            assert abs(s + 2 * complex(z)) < 1e-5


class TestNormalizeLinear:
    def test_identity(self):
        g = normalize_linear_schwarzian(SchwarzianLinear(1.0, 0j))
        assert g.lam == 1.0 and g.mu == 0

    def test_scaling_chain_rule(self):
        g = normalize_linear_schwarzian(SchwarzianLinear(8.0, 0j))
        assert abs(g.lam - 2.0) < 1e-14
        s = schwarzian_fd(lambda z: complex(airy_map(g(z))), 0.05 + 0.02j, 1e-3)
        assert abs(s - 8 * (0.05 + 0.02j)) < 1e-4

    def test_shift(self):
        g = normalize_linear_schwarzian(SchwarzianLinear(1.0, 1 + 1j))
        assert abs(g.mu - (1 + 1j)) < 1e-14
        s = schwarzian_fd(lambda z: complex(airy_map(g(z))), 0j, 1e-3)
        assert abs(s - (1 + 1j)) < 1e-4

    def test_constant_case(self):
        with pytest.raises(ConstantCase):
            normalize_linear_schwarzian(SchwarzianLinear(0.0, 1j))


class TestDiscreteSchwarzians:
    def test_regular_is_zero(self):
        fld = solution_field(SolutionParams(PI3, PI3, PI3), Window.centered(3))
        h = discrete_schwarzians(fld, eps=0.1)
        assert max(abs(v) for v in h.values()) < 1e-12

    def test_far_from_regular_rejected(self):
        fld = solution_field(SolutionParams(0.5, 0.6, 0.7), Window.centered(2))
        with pytest.raises(FarFromRegular):
            discrete_schwarzians(fld, eps=0.1)

    # second differences scale like delta/level_range relative to max|h|,
    # so the window per delta keeps the expansion domain and the bound honest
    @pytest.mark.parametrize("delta,extent,ratio", [(1e-2, 2, 1e-1),
                                                    (1e-3, 8, 1e-3)])
    def test_linear_in_level(self, delta, extent, ratio):
        params = SolutionParams(PI3 + delta, PI3 + delta, PI3 + delta)
        fld = solution_field(params, Window.centered(extent))
        h = discrete_schwarzians(fld, eps=math.sqrt(delta))
        by_level = {}
        for (n, m, cls), v in h.items():
            by_level.setdefault((cls, edge_level(n, m, cls)), []).append(v.real)
        # constant within a level
        for vals in by_level.values():
            assert max(vals) - min(vals) < 1e-12
        hmax = max(abs(v) for v in h.values())
        for cls in range(3):
            levels = sorted(lv for c, lv in by_level if c == cls)
            seq = [by_level[(cls, lv)][0] for lv in levels]
            second = np.diff(seq, 2)
            assert np.abs(second).max() < ratio * hmax

    def test_triple_sum_shrinks_with_delta(self):
        # directional means on a fixed window; the continuum triple sum
        # scales like eps^2 = delta, a tenfold drop per decade
        sums = {}
        for delta in (1e-2, 1e-3):
            params = SolutionParams(PI3 - delta, PI3 - delta, PI3 - delta)
            fld = solution_field(params, Window.centered(2))
            h = discrete_schwarzians(fld, eps=math.sqrt(delta))
            a, b, c = directional_means(h)
            sums[delta] = abs(a + b + c)
        assert sums[1e-3] <= sums[1e-2] / 10

    def test_directional_reconstruction_identity(self):
        delta = 1e-3
        params = SolutionParams(PI3 + delta, PI3 + 0.5 * delta, PI3 - 0.2 * delta)
        fld = solution_field(params, Window.centered(3))
        h = discrete_schwarzians(fld, eps=math.sqrt(delta))
        a, b, c = directional_means(h)
        s_rec = schwarzian_from_directions(a, b, c)
        # algebraic identity given a + b + c = 0 up to the expansion error
        assert abs(6 * a - s_rec.real) < 2e-8 + 6 * abs(a + b + c)


class TestHexgrid:
    def test_identity_grid(self):
        polys = hexgrid_image(lambda z: z, spacing=0.5, extent=1.5,
                              samples_per_edge=1)
        verts = hexgrid_vertices(0.5, 1.5)
        assert polys and verts
        endpoints = {complex(round(p.real, 9), round(p.imag, 9))
                     for poly in polys for p in (poly[0], poly[-1])}
        vertset = {complex(round(p.real, 9), round(p.imag, 9)) for p in verts}
        assert endpoints <= vertset

    def test_vertex_set_rotation_invariant(self):
        verts = hexgrid_vertices(0.2, 1.5)
        vertset = {complex(round(p.real, 9), round(p.imag, 9)) for p in verts}
        for p in verts:
            q = Q3 * p
            key = complex(round(q.real, 9), round(q.imag, 9))
            assert key in vertset

    def test_airy_image_three_fold_symmetric(self):
        verts = hexgrid_vertices(0.2, 1.5)
        images = {}
        for p in verts:
            images[complex(round(p.real, 9), round(p.imag, 9))] = complex(airy_map(p))
        worst = 0.0
        for p in verts:
            key_r = complex(round((Q3 * p).real, 9), round((Q3 * p).imag, 9))
            worst = max(worst, abs(images[key_r] - Q3 * images[
                complex(round(p.real, 9), round(p.imag, 9))]))
        assert worst < 1e-8

    def test_exp_grid_bounded(self):
        polys = hexgrid_image(cmath.exp, spacing=0.3, extent=1.2)
        assert len(polys) > 20
        pts = [p for poly in polys for p in poly]
        assert max(abs(p) for p in pts) < math.exp(1.2) + 1e-9
