import math

import numpy as np
import pytest

from driftlearn import laser, linalg, oracle
from driftlearn.errors import DomainError, LengthMismatch, RegimeViolation, TooLarge


def test_brute_min_cost_two_step_closed_form():
    # stationarity system: 8u1 - 4u2 = 2, 6u2 - 4u1 = 1 => u = (0.5, 0.5)
    xs = np.array([[1.0], [1.0]])
    ys = np.array([1.0, 0.5])
    value, comp = oracle.brute_min_cost(xs, ys, 1.0, 2.0)
    assert value == pytest.approx(0.5, abs=1e-12)
    np.testing.assert_allclose(comp.us, [[0.5], [0.5]], atol=1e-12)


def test_brute_min_cost_zero_labels():
    rng = np.random.default_rng(0)
    xs = rng.standard_normal((6, 3))
    value, comp = oracle.brute_min_cost(xs, np.zeros(6), 0.5, 2.0)
    assert value == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(comp.us, np.zeros((6, 3)), atol=1e-12)


def test_brute_min_cost_huge_c_collapses_to_ridge():
    rng = np.random.default_rng(1)
    T, d = 3, 2
    xs = rng.standard_normal((T, d))
    ys = rng.standard_normal(T)
    b = 1.3
    value, comp = oracle.brute_min_cost(xs, ys, b, 1e12)
    spread = np.max(np.abs(comp.us - comp.us[0]))
    assert spread <= 1e-5
    # independent single-u ridge solve; allowing per-step motion can only
    # lower the optimum, and at c = 1e12 the slack is O(1e-5)
    A = b * np.eye(d) + xs.T @ xs
    g = xs.T @ ys
    u = np.linalg.solve(A, g)
    ridge_value = float(ys @ ys - g @ u)
    assert value <= ridge_value + 1e-10
    assert value == pytest.approx(ridge_value, abs=1e-4)


def test_brute_min_cost_budget_guard():
    with pytest.raises(TooLarge):
        oracle.brute_min_cost(np.zeros((500, 5)), np.zeros(500), 1.0, 2.0)


def test_brute_minimizer_first_order_stationarity():
    # analytic gradient at the minimizer is ~0; the analytic gradient is
    # itself cross-checked against central finite differences
    rng = np.random.default_rng(2)
    for _ in range(20):
        T = int(rng.integers(2, 10))
        d = int(rng.integers(1, 4))
        xs = rng.standard_normal((T, d))
        ys = rng.standard_normal(T)
        b, c = rng.uniform(0.1, 5.0), rng.uniform(0.2, 8.0)
        value, comp = oracle.brute_min_cost(xs, ys, b, c)
        g = oracle.tracking_cost_gradient(comp.us, xs, ys, b, c)
        rhs_norm = np.linalg.norm((ys[:, None] * xs).reshape(-1))
        assert np.linalg.norm(g) <= 1e-8 * (1.0 + rhs_norm)

        # finite-difference check of the gradient at a random point
        us = rng.standard_normal((T, d))
        g = oracle.tracking_cost_gradient(us, xs, ys, b, c)
        h = 1e-6
        flat = us.reshape(-1).copy()
        for idx in rng.choice(T * d, size=min(3, T * d), replace=False):
            up, dn = flat.copy(), flat.copy()
            up[idx] += h
            dn[idx] -= h
            fd = (
                oracle.tracking_cost(up.reshape(T, d), xs, ys, b, c)
                - oracle.tracking_cost(dn.reshape(T, d), xs, ys, b, c)
            ) / (2 * h)
            assert g[idx] == pytest.approx(fd, rel=1e-5, abs=1e-5)


def test_brute_value_matches_direct_cost_at_minimizer():
    rng = np.random.default_rng(3)
    xs = rng.standard_normal((8, 2))
    ys = rng.standard_normal(8)
    value, comp = oracle.brute_min_cost(xs, ys, 0.8, 3.0)
    assert value == pytest.approx(oracle.tracking_cost(comp.us, xs, ys, 0.8, 3.0), abs=1e-10)


def test_comparator_bookkeeping():
    us = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 1.0]])
    comp = oracle.comparator_from_us(us)
    assert comp.V == pytest.approx(2.0)
    assert comp.nu == pytest.approx(2.0 / 3.0)
    comp.check()
    with pytest.raises(ValueError):
        oracle.ComparatorSequence(us=us, V=5.0, nu=5.0 / 3.0).check()


def test_comparator_loss_perfect_and_mismatched_lengths():
    xs = np.array([[1.0], [2.0]])
    us = np.array([[0.5], [0.5]])
    comp = oracle.comparator_from_us(us)
    ys = np.einsum("td,td->t", xs, us)
    assert oracle.comparator_loss(comp, xs, ys) == 0.0
    with pytest.raises(LengthMismatch):
        oracle.comparator_loss(comp, xs[:1], ys[:1])


# ---------------------------------------------------------------------------
# per-step regret certificate
# ---------------------------------------------------------------------------

def test_certificate_scalar_case():
    gap = oracle.regret_certificate_gap(np.array([[2.0]]), [1.0], 2.0)
    assert gap == pytest.approx(-0.0625, abs=1e-12)
    exact = oracle.regret_certificate_exact(np.array([[2.0]]), [1.0], 2.0)
    assert exact[0, 0] == pytest.approx(-0.0625, abs=1e-12)


def test_certificate_zero_input_collapses():
    gap = oracle.regret_certificate_gap(np.diag([2.0, 0.5]), [0.0, 0.0], 2.0)
    assert abs(gap) <= 1e-12


def test_certificate_randomized_and_closed_form_agree():
    rng = np.random.default_rng(4)
    for _ in range(1000):
        d = int(rng.integers(1, 7))
        M = rng.standard_normal((d, d))
        D = M @ M.T + rng.uniform(0.05, 2.0) * np.eye(d)
        x = rng.standard_normal(d)
        c = float(np.exp(rng.uniform(np.log(0.1), np.log(100.0))))
        gap = oracle.regret_certificate_gap(D, x, c)
        assert gap <= 1e-10
        exact_gap = linalg.eig_extremes(oracle.regret_certificate_exact(D, x, c))[1]
        assert gap == pytest.approx(exact_gap, abs=1e-9)


# ---------------------------------------------------------------------------
# cumulative-loss bound and log-det inequality
# ---------------------------------------------------------------------------

def test_cumloss_bound_single_step_equality_case():
    # one round (x, y) = (1, 1), b = 1, c = 2: the learner predicts 0 and
    # loses 1; against u = 0.5 with Y = 1 the bound is exactly 1.0
    comp = oracle.comparator_from_us(np.array([[0.5]]))
    rhs = oracle.cumloss_bound(comp, [[1.0]], [1.0], 1.0, 2.0, 1.0, [0.5])
    assert rhs == pytest.approx(1.0, abs=1e-12)


def test_cumloss_bound_zero_label_stream():
    comp = oracle.comparator_from_us(np.zeros((4, 2)))
    quad = [0.3, 0.2, 0.1, 0.05]
    rhs = oracle.cumloss_bound(comp, np.zeros((4, 2)), np.zeros(4), 1.0, 2.0, 1.0, quad)
    assert rhs == pytest.approx(sum(quad))


def test_cumloss_bound_against_brute_optimal_comparator():
    rng = np.random.default_rng(5)
    T, d, b, c = 12, 2, 0.7, 3.0
    xs = rng.standard_normal((T, d))
    ys = rng.standard_normal(T)
    params = laser.LaserParams(b=b, c=c)
    state = laser.laser_init(params, d)
    yhats, quads = [], []
    for t in range(T):
        yhat, nd = laser.laser_predict(state, xs[t])
        state = laser.laser_update(state, xs[t], ys[t], next_D=nd)
        yhats.append(yhat)
        quads.append(state.last_x_quad)
    L = float(np.sum((ys - np.array(yhats)) ** 2))
    _, best = oracle.brute_min_cost(xs, ys, b, c)
    Y = float(np.max(np.abs(ys)))
    rhs = oracle.cumloss_bound(best, xs, ys, b, c, Y, quads)
    assert L <= rhs + 1e-6


def test_logdet_bound_hand_and_empty_cases():
    # T=1, b=1, c=2: quad = 0.5, rhs = ln 2 + 0.5 * Tr(D0) = ln 2 + 1
    D0 = np.array([[2.0]])
    D1 = np.array([[2.0]])
    lhs, rhs = oracle.logdet_bound_sides([0.5], [D0, D1], 1.0, 2.0)
    assert lhs == pytest.approx(0.5)
    assert rhs == pytest.approx(math.log(2.0) + 1.0, abs=1e-12)

    lhs, rhs = oracle.logdet_bound_sides([], [D0], 1.0, 2.0)
    assert lhs == 0.0
    assert rhs == pytest.approx(math.log(2.0), abs=1e-12)
    assert lhs <= rhs


def test_logdet_bound_random_trajectories():
    rng = np.random.default_rng(6)
    for _ in range(20):
        d = int(rng.integers(1, 6))
        b = rng.uniform(0.2, 2.0)
        c = b + rng.uniform(0.5, 20.0)
        params = laser.LaserParams(b=b, c=c)
        state = laser.laser_init(params, d)
        D_traj = [state.D]
        quads = []
        for t in range(50):
            x = rng.standard_normal(d)
            state = laser.laser_update(state, x, rng.standard_normal())
            quads.append(state.last_x_quad)
            D_traj.append(state.D)
        lhs, rhs = oracle.logdet_bound_sides(quads, D_traj, b, c)
        assert lhs <= rhs + 1e-9


# ---------------------------------------------------------------------------
# eigenvalue map and drift-tuned formulas
# ---------------------------------------------------------------------------

def test_eigenvalue_step_map_values_and_domain():
    assert oracle.eigenvalue_step_map(0.0, 5.0, 0.7, 1.0) == pytest.approx(0.7)
    assert oracle.eigenvalue_step_map(2.0, 2.0, 1.0, 1.0) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        oracle.eigenvalue_step_map(-1.0, 1.0, 0.5, 1.0)
    with pytest.raises(DomainError):
        oracle.eigenvalue_step_map(1.0, 1.0, 2.0, 1.0)  # xsq above gammasq


def test_bound_inputs_derived_quantities():
    bi = oracle.BoundInputs(Y=2.0, X=3.0, b=4.0, c=8.0, d=5, T=100)
    Xsq = 9.0
    assert bi.mu == pytest.approx(max(9 / 8 * Xsq, (4.0 + Xsq) ** 2 / (8 * Xsq)))
    assert bi.M == pytest.approx(max(3 * Xsq, 4.0 + Xsq))
    assert bi.eps_ratio == pytest.approx(0.5)


def test_tuned_c_low_drift_worked_example():
    bi = oracle.BoundInputs(Y=1.0, X=1.0, b=0.5, c=1.0, d=1, T=1000)
    c = oracle.tuned_c(oracle.DriftRegime.LOW, bi, 1.0)
    assert c == pytest.approx((math.sqrt(2.0) * 1000) ** (2.0 / 3.0))
    assert c == pytest.approx(126.0, abs=0.05)


def test_tuned_c_boundary_identity():
    bi = oracle.BoundInputs(Y=1.5, X=2.0, b=1.0, c=3.0, d=4, T=500)
    V_thr = oracle.low_drift_threshold(bi)
    assert oracle.tuned_c(oracle.DriftRegime.LOW, bi, V_thr) == pytest.approx(bi.mu, rel=1e-12)


def test_tuned_c_zero_drift_points_to_stationary():
    bi = oracle.BoundInputs(Y=1.0, X=1.0, b=0.5, c=1.0, d=1, T=100)
    with pytest.raises(RegimeViolation, match="inf"):
        oracle.tuned_c(oracle.DriftRegime.LOW, bi, 0.0)


def test_tuned_c_regime_violations_report_thresholds():
    bi = oracle.BoundInputs(Y=1.0, X=1.0, b=0.5, c=1.0, d=1, T=100)
    low_thr = oracle.low_drift_threshold(bi)
    with pytest.raises(RegimeViolation, match="threshold"):
        oracle.tuned_c(oracle.DriftRegime.LOW, bi, 2 * low_thr)
    high_thr = oracle.high_drift_threshold(bi)
    with pytest.raises(RegimeViolation, match="threshold"):
        oracle.tuned_c(oracle.DriftRegime.HIGH, bi, 0.5 * high_thr)


def test_tuned_c_high_drift_formula():
    bi = oracle.BoundInputs(Y=1.0, X=1.0, b=0.5, c=1.0, d=2, T=100)
    V = 2 * oracle.high_drift_threshold(bi)
    c = oracle.tuned_c(oracle.DriftRegime.HIGH, bi, V)
    assert c == pytest.approx(math.sqrt(bi.Y**2 * bi.d * bi.M * bi.T / V))


def test_tuned_params_fixed_point_consistency():
    inputs = oracle.tuned_params(
        oracle.DriftRegime.LOW, T=200, d=4, Y=20.0, X=30.0, V=5.0, eps_ratio=0.1
    )
    assert inputs.b == pytest.approx(0.1 * inputs.c)
    # returned c satisfies the regime formula under its own mu
    assert oracle.tuned_c(oracle.DriftRegime.LOW, inputs, 5.0) == pytest.approx(inputs.c)


def test_drift_tuned_bound_zero_labels_reduces_to_offsets():
    bi = oracle.BoundInputs(Y=1.0, X=1.0, b=0.2, c=2.0, d=3, T=50)
    V = 0.5 * oracle.low_drift_threshold(bi)
    ld = 0.9
    rhs = oracle.drift_tuned_bound(oracle.DriftRegime.LOW, bi, V, 0.0, 0.0, ld)
    eps = bi.eps_ratio
    drift_term = 3 * (math.sqrt(2) * bi.Y**2 * bi.d * bi.X) ** (2 / 3) * bi.T ** (2 / 3) * V ** (1 / 3)
    assert rhs == pytest.approx(eps / (1 - eps) * bi.Y**2 * bi.d + bi.Y**2 * ld + drift_term)
    assert rhs >= 0.0


def test_drift_tuned_bound_rejects_out_of_regime():
    bi = oracle.BoundInputs(Y=1.0, X=1.0, b=0.2, c=2.0, d=3, T=50)
    with pytest.raises(RegimeViolation):
        oracle.drift_tuned_bound(
            oracle.DriftRegime.LOW, bi, 10 * oracle.low_drift_threshold(bi), 0.0, 0.0, 0.0
        )
