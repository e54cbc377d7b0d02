"""Tests for integration-matrix construction and application."""

import io
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad

from baryquad import (CollisionError, GegenbauerParam, apply_quadrature, build_basis_gim,
                      build_gim_arbitrary, build_gim_gg, build_gim_gg_bumped,
                      build_gim_gg_guarded, check_gg_condition, gg_rule, map_to_unit,
                      matrix_to_csv, qth_order_gim, row_gim_endpoint)


def running_monomial_integral(targets, p):
    # integral of t^p over [-1, x]
    targets = np.asarray(targets)
    return (targets ** (p + 1) - (-1.0) ** (p + 1)) / (p + 1)


def iterated_monomial_integral(targets, p):
    # integral of (x - t) t^p over [-1, x]
    x = np.asarray(targets)
    return (x * (x ** (p + 1) - (-1.0) ** (p + 1)) / (p + 1)
            - (x ** (p + 2) - (-1.0) ** (p + 2)) / (p + 2))


class TestFeasibility:
    def test_known_infeasible_pair(self):
        report = check_gg_condition(4, GegenbauerParam(1.0))
        assert not report.feasible
        assert (1, 2, 1) in report.violations  # node -1/2 hit by the mapped zero

    def test_known_feasible_pair(self):
        assert check_gg_condition(10, GegenbauerParam(0.5)).feasible

    def test_degree_one_always_feasible(self):
        for alpha in (-0.4, 0.0, 0.5, 1.0, 2.0):
            report = check_gg_condition(1, GegenbauerParam(alpha))
            assert report.feasible and report.violations == ()

    def test_epsilon_must_be_positive(self):
        with pytest.raises(ValueError):
            check_gg_condition(5, GegenbauerParam(0.5), epsilon=0.0)


class TestFeasibilityScanReproducibility:
    def test_grid_failures_confined_to_alpha_one(self):
        # scan n = 1..100, alpha = -0.4(0.1)1; on this platform every
        # failure sits at alpha = 1 on the degrees 4, 16, ..., 100
        failures = []
        for n in range(1, 101):
            for k in range(-4, 11):
                alpha = round(0.1 * k, 10)
                if not check_gg_condition(n, GegenbauerParam(alpha)).feasible:
                    failures.append((n, alpha))
        assert all(alpha == 1.0 for _, alpha in failures)
        assert (4, 1.0) in failures
        assert set(n for n, _ in failures) <= set(range(4, 101, 12))


class TestSquareBuild:
    @pytest.mark.parametrize("alpha", [-0.4, 0.0, 0.5, 2.0])
    def test_constant_and_linear_rows(self, alpha):
        m = build_gim_gg(9, GegenbauerParam(alpha))
        x = m.target_nodes
        assert_allclose(apply_quadrature(m, np.ones(10)), x + 1.0, atol=1e-13)
        assert_allclose(apply_quadrature(m, x), (x ** 2 - 1.0) / 2.0, atol=1e-13)

    def test_two_point_closed_form(self):
        # hand-integrated linear cardinal functions on nodes +-1/sqrt(3)
        m = build_gim_gg(1, GegenbauerParam(0.5))
        x0, x1 = m.source_nodes

        def l0_integral(x):
            return (x ** 2 / 2 - x1 * x - (0.5 + x1)) / (x0 - x1)

        def l1_integral(x):
            return (x ** 2 / 2 - x0 * x - (0.5 + x0)) / (x1 - x0)

        expect = np.array([[l0_integral(x0), l1_integral(x0)],
                           [l0_integral(x1), l1_integral(x1)]])
        assert_allclose(m.entries, expect, atol=1e-15)

    def test_infeasible_pair_raises_with_indices(self):
        with pytest.raises(CollisionError) as err:
            build_gim_gg(4, GegenbauerParam(1.0))
        assert (err.value.i, err.value.j, err.value.k) == (1, 2, 1)


class TestGuardedAndBumped:
    def test_guarded_equals_plain_when_feasible(self):
        plain = build_gim_gg(10, GegenbauerParam(0.0))
        guarded = build_gim_gg_guarded(10, GegenbauerParam(0.0))
        assert_allclose(guarded.entries, plain.entries, atol=1e-14)

    def test_guarded_succeeds_on_infeasible_pair(self):
        m = build_gim_gg_guarded(4, GegenbauerParam(1.0))
        x = m.target_nodes
        assert_allclose(apply_quadrature(m, np.ones(5)), x + 1.0, atol=1e-13)

    def test_bumped_equals_plain_when_feasible(self):
        plain = build_gim_gg(10, GegenbauerParam(0.5))
        bumped = build_gim_gg_bumped(10, GegenbauerParam(0.5))
        assert_allclose(bumped.entries, plain.entries, atol=1e-13)

    def test_bumped_succeeds_on_infeasible_pair(self):
        m = build_gim_gg_bumped(4, GegenbauerParam(1.0))
        x = m.target_nodes
        for p in range(5):
            assert_allclose(apply_quadrature(m, x ** p),
                            running_monomial_integral(x, p), atol=1e-13)

    def test_guarded_matches_bumped_polynomials_at_collision(self):
        guarded = build_gim_gg_guarded(4, GegenbauerParam(1.0))
        bumped = build_gim_gg_bumped(4, GegenbauerParam(1.0))
        x = guarded.target_nodes
        for p in range(5):
            assert_allclose(apply_quadrature(guarded, x ** p),
                            apply_quadrature(bumped, x ** p), atol=1e-13)


class TestEndpointRow:
    @pytest.mark.parametrize("alpha", [-0.25, 0.0, 0.5, 1.0])
    @pytest.mark.parametrize("n", [2, 4, 5, 9, 16])
    def test_integrates_monomials_over_full_interval(self, n, alpha):
        row = row_gim_endpoint(n, GegenbauerParam(alpha))
        nodes = gg_rule(n, GegenbauerParam(alpha)).nodes
        for p in range(n + 1):
            exact = 0.0 if p % 2 == 1 else 2.0 / (p + 1)
            assert row @ nodes ** p == pytest.approx(exact, abs=1e-13)

    def test_ones_give_interval_length(self):
        row = row_gim_endpoint(8, GegenbauerParam(0.7))
        assert row @ np.ones(9) == pytest.approx(2.0, abs=1e-14)

    def test_odd_integrand_vanishes(self):
        row = row_gim_endpoint(7, GegenbauerParam(0.3))
        nodes = gg_rule(7, GegenbauerParam(0.3)).nodes
        assert row @ nodes == pytest.approx(0.0, abs=1e-14)

    def test_parity_bump_case_n4(self):
        # without enlarging the Legendre rule, the shared zero node makes
        # this overflow; exactness shows the bump happened
        row = row_gim_endpoint(4, GegenbauerParam(0.9))
        nodes = gg_rule(4, GegenbauerParam(0.9)).nodes
        assert np.all(np.isfinite(row))
        assert row @ nodes ** 4 == pytest.approx(2.0 / 5.0, abs=1e-14)

    def test_equals_arbitrary_build_with_endpoint_target(self):
        for n in (4, 7, 10):
            row = row_gim_endpoint(n, GegenbauerParam(0.2))
            m = build_gim_arbitrary(np.array([1.0]), n, GegenbauerParam(0.2))
            assert_allclose(m.entries[0], row, atol=1e-15)


class TestArbitraryTargets:
    def test_gg_targets_recover_square_matrix(self):
        param = GegenbauerParam(0.4)
        square = build_gim_gg(8, param)
        arb = build_gim_arbitrary(square.target_nodes, 8, param)
        assert_allclose(arb.entries, square.entries, atol=0.0)

    def test_ones_law_on_random_targets(self, rng):
        targets = np.sort(rng.uniform(-1, 1, 13))
        m = build_gim_arbitrary(targets, 9, GegenbauerParam(0.5))
        assert_allclose(apply_quadrature(m, np.ones(10)), targets + 1.0, atol=1e-13)

    def test_left_endpoint_target_gives_zero_row(self):
        m = build_gim_arbitrary(np.array([-1.0, 0.2]), 6, GegenbauerParam(0.5))
        assert_allclose(m.entries[0], 0.0, atol=0.0)

    def test_collision_raises(self):
        with pytest.raises(CollisionError):
            build_gim_arbitrary(gg_rule(4, GegenbauerParam(1.0)).nodes, 4, GegenbauerParam(1.0))

    def test_targets_outside_interval_rejected(self):
        with pytest.raises(ValueError):
            build_gim_arbitrary(np.array([0.0, 1.1]), 5, GegenbauerParam(0.5))


class TestHigherOrder:
    def test_first_order_is_identity_transform(self):
        m = build_gim_gg(6, GegenbauerParam(0.5))
        assert qth_order_gim(m, 1) is m

    @pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
    def test_second_order_matches_iterated_integral(self, alpha, rng):
        for n in (5, 12, 20):
            m = qth_order_gim(build_gim_gg(n, GegenbauerParam(alpha)), 2)
            x = m.target_nodes
            coeffs = rng.uniform(-1, 1, n)  # degree n-1
            samples = np.polynomial.polynomial.polyval(x, coeffs)
            exact = sum(c * iterated_monomial_integral(x, p) for p, c in enumerate(coeffs))
            assert_allclose(apply_quadrature(m, samples), exact, atol=1e-11)

    def test_unit_interval_divides_by_two_per_order(self):
        first = build_gim_gg(7, GegenbauerParam(0.3))
        mapped1 = map_to_unit(first)
        assert_allclose(mapped1.entries, first.entries / 2.0, atol=0.0)
        mapped2 = map_to_unit(qth_order_gim(first, 2))
        assert_allclose(mapped2.entries, qth_order_gim(first, 2).entries / 4.0, atol=0.0)
        # mapping then raising the order agrees with raising then mapping
        assert_allclose(qth_order_gim(mapped1, 2).entries, mapped2.entries, atol=1e-16)

    def test_unit_interval_first_order_law(self):
        m = map_to_unit(build_gim_gg(9, GegenbauerParam(0.5)))
        s = m.target_nodes
        assert_allclose(apply_quadrature(m, np.ones(10)), s, atol=1e-13)

    def test_invalid_order_rejected(self):
        m = build_gim_gg(4, GegenbauerParam(0.5))
        with pytest.raises(ValueError):
            qth_order_gim(m, 0)
        with pytest.raises(ValueError):
            qth_order_gim(qth_order_gim(m, 2), 2)


class TestApply:
    def test_zero_vector(self):
        m = build_gim_gg(5, GegenbauerParam(0.5))
        assert_allclose(apply_quadrature(m, np.zeros(6)), np.zeros(6), atol=0.0)

    def test_length_mismatch_rejected(self):
        m = build_gim_gg(5, GegenbauerParam(0.5))
        with pytest.raises(ValueError):
            apply_quadrature(m, np.ones(5))

    @pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
    def test_gaussian_against_adaptive_reference(self):
        m = build_gim_gg(20, GegenbauerParam(0.0))
        f = lambda x: np.exp(-x ** 2)
        ref = np.array([quad(f, -1, xj, epsabs=1e-14, epsrel=1e-14)[0]
                        for xj in m.target_nodes])
        got = apply_quadrature(m, f(m.source_nodes))
        assert np.max(np.abs(got - ref)) <= 1e-12


class TestBasisForm:
    @pytest.mark.parametrize("alpha", [-0.25, 0.0, 0.5, 1.0])
    def test_equals_barycentric_form(self, alpha):
        for n in (1, 6, 17, 30):
            if not check_gg_condition(n, GegenbauerParam(alpha)).feasible:
                bary = build_gim_gg_bumped(n, GegenbauerParam(alpha))
            else:
                bary = build_gim_gg(n, GegenbauerParam(alpha))
            basis = build_basis_gim(n, GegenbauerParam(alpha))
            assert np.max(np.abs(basis.entries - bary.entries)) <= 1e-12

    def test_ones_law(self):
        m = build_basis_gim(11, GegenbauerParam(0.8))
        assert_allclose(apply_quadrature(m, np.ones(12)), m.target_nodes + 1.0, atol=1e-12)

    def test_runge_errors_match_barycentric_within_order(self):
        f = lambda x: 1.0 / (1.0 + 25.0 * x ** 2)
        bary = build_gim_gg(20, GegenbauerParam(0.5))
        basis = build_basis_gim(20, GegenbauerParam(0.5))
        ref = np.array([quad(f, -1, xj, epsabs=1e-14, epsrel=1e-14, limit=300)[0]
                        for xj in bary.target_nodes])
        e_bary = np.abs(apply_quadrature(bary, f(bary.source_nodes)) - ref)
        e_basis = np.abs(apply_quadrature(basis, f(bary.source_nodes)) - ref)
        ratio = np.maximum(e_bary, e_basis) / np.minimum(e_bary, e_basis)
        assert ratio.max() <= 10.0


class TestCsv:
    def test_header_and_shape(self):
        m = build_gim_gg(3, GegenbauerParam(0.5))
        buf = io.StringIO()
        matrix_to_csv(m, buf)
        lines = buf.getvalue().strip().splitlines()
        assert lines[0] == "rows,cols,q,alpha,interval"
        assert lines[1] == '4,4,1,0.5,"[-1,1]"'
        assert len(lines) == 2 + 4
        parsed = np.array([[float(v) for v in line.split(",")] for line in lines[2:]])
        assert_allclose(parsed, m.entries, atol=0.0)
