import numpy as np
import pytest

from nudgefit import (
    ConfigError,
    FourierModeObservation,
    IdentityObservation,
    KuramotoSivashinsky,
    SensitivityStack,
    SingularUpdateError,
    UpdateRule,
    assemble_gn_matrix,
    assemble_gradient,
    chl_update,
    error_functional,
    update_gradient_descent,
    update_levenberg_marquardt,
    update_newton_root,
)

OP2 = IdentityObservation(2)
OP3 = IdentityObservation(3)


def stack_of(cols, indices=None):
    cols = np.asarray(cols, dtype=float)
    idx = tuple(range(cols.shape[0])) if indices is None else indices
    return SensitivityStack(cols, "ds", idx)


# -- error functional -----------------------------------------------------------

def test_error_zero_at_truth():
    v = np.array([1.0, 2.0, 3.0])
    assert error_functional(v, v, OP3) == 0.0


def test_error_half_square():
    assert error_functional(np.array([2.0, 0.0, 0.0]), np.array([1.0, 0.0, 0.0]),
                            OP3) == 0.5


def test_error_unobserved_difference_is_zero():
    model = KuramotoSivashinsky(grid=256)
    op = FourierModeObservation(32, model.grid, model.length)
    x = model.grid_points()
    v = model.field_to_state(np.sin(2 * np.pi * 40 * x / model.length))
    u = np.zeros(model.grid, dtype=complex)
    assert error_functional(v, u, op) < 1e-20


# -- gradient and Gauss-Newton matrix ---------------------------------------------

def test_gradient_identity_stack():
    v = np.array([1.0, 2.0])
    u = np.zeros(2)
    g = assemble_gradient(v, u, stack_of(np.eye(2)), OP2)
    assert np.allclose(g, [1.0, 2.0])


def test_gradient_orthogonal_residual():
    v = np.array([0.0, 0.0, 5.0])
    u = np.zeros(3)
    cols = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    g = assemble_gradient(v, u, stack_of(cols, (0, 1)), OP3)
    assert np.allclose(g, 0.0)


def test_gradient_zero_residual():
    rng = np.random.default_rng(0)
    v = rng.standard_normal(3)
    g = assemble_gradient(v, v, stack_of(rng.standard_normal((3, 3))), OP3)
    assert np.allclose(g, 0.0)


def test_gn_orthonormal_columns():
    gn = assemble_gn_matrix(stack_of(np.eye(2)), OP2)
    assert np.allclose(gn, np.eye(2))


def test_gn_duplicate_column_rank_deficient():
    cols = np.array([[1.0, 2.0], [1.0, 2.0]])
    gn = assemble_gn_matrix(stack_of(cols), OP2)
    assert np.allclose(gn[0], gn[1])
    assert abs(np.linalg.det(gn)) < 1e-12


def test_gn_symmetric_psd_random():
    rng = np.random.default_rng(1)
    for _ in range(25):
        cols = rng.standard_normal((3, 6))
        gn = assemble_gn_matrix(stack_of(cols), IdentityObservation(6))
        assert np.abs(gn - gn.T).max() < 1e-12
        assert np.linalg.eigvalsh(gn).min() >= -1e-10


# -- update rules ------------------------------------------------------------------

def test_gd_zero_gradient_fixed_point():
    c = np.array([1.0, 2.0])
    assert np.array_equal(update_gradient_descent(c, np.zeros(2), 30.0), c)


def test_gd_hand_value():
    out = update_gradient_descent(np.array([1.0, 1.0]), np.array([0.1, -0.2]), 30.0)
    assert np.allclose(out, [-2.0, 7.0])


def test_newton_scalar_hand_value():
    # 2E = 4, gradient = 2 -> step -2
    out, skipped = update_newton_root(np.array([5.0]), 2.0, np.array([2.0]))
    assert not skipped
    assert np.allclose(out, [3.0])


def test_newton_multiparameter_hand_value():
    # 2E = 2, gradient = (1,1) -> step (-1,-1)
    out, skipped = update_newton_root(np.array([0.0, 0.0]), 1.0, np.array([1.0, 1.0]))
    assert not skipped
    assert np.allclose(out, [-1.0, -1.0])


def test_newton_zero_error_fixed_point():
    c = np.array([2.0])
    out, skipped = update_newton_root(c, 0.0, np.array([1.0]))
    assert not skipped
    assert np.allclose(out, c)


def test_newton_skips_tiny_gradient():
    c = np.array([2.0, 3.0])
    out, skipped = update_newton_root(c, 1.0, np.array([1e-8, 0.0]))
    assert skipped
    assert np.array_equal(out, c)


def test_newton_multiparameter_reduces_to_scalar():
    rng = np.random.default_rng(2)
    for _ in range(10):
        c = rng.standard_normal(1)
        E = float(rng.uniform(0.1, 2.0))
        g = rng.standard_normal(1)
        multi, _ = update_newton_root(c, E, g)
        scalar = c[0] - 2.0 * E / g[0]  # accelerated Newton with multiplicity 2
        assert abs(multi[0] - scalar) < 1e-12 * max(1.0, abs(scalar))


def test_lm_identity_system():
    out = update_levenberg_marquardt(np.zeros(2), np.array([1.0, 1.0]), np.eye(2), 0.0)
    assert np.allclose(out, [-1.0, -1.0])


def test_lm_damped_identity():
    out = update_levenberg_marquardt(np.zeros(2), np.array([1.0, 1.0]), np.eye(2), 1.0)
    assert np.allclose(out, [-0.5, -0.5])


def test_lm_zero_damping_is_gauss_newton():
    rng = np.random.default_rng(3)
    for _ in range(10):
        cols = rng.standard_normal((2, 5))
        gn = assemble_gn_matrix(stack_of(cols), IdentityObservation(5))
        g = rng.standard_normal(2)
        c = rng.standard_normal(2)
        lm = update_levenberg_marquardt(c, g, gn, 0.0)
        direct = c - np.linalg.solve(gn, g)
        assert np.abs(lm - direct).max() < 1e-10


def test_lm_large_damping_limit():
    g = np.array([1.0, -2.0])
    lam = 1e12
    out = update_levenberg_marquardt(np.zeros(2), g, np.eye(2), lam)
    assert np.allclose(out, -g / lam, rtol=1e-6)


def test_lm_singular_requires_damping():
    with pytest.raises(SingularUpdateError):
        update_levenberg_marquardt(np.zeros(2), np.ones(2), np.zeros((2, 2)), 0.0)


def test_rule_validation():
    with pytest.raises(ConfigError):
        UpdateRule("gd", r=-1.0)
    with pytest.raises(ConfigError):
        UpdateRule("lm", lam=-1e-6)
    with pytest.raises(ConfigError):
        UpdateRule("sgd")


# -- CHL closed form -----------------------------------------------------------------

def test_chl_zero_residual_fixed_point():
    v = np.array([1.0, 2.0, 3.0])
    out, skipped = chl_update(4.0, v, v, np.array([1.0, 1.0, 1.0]), 25.0, OP3)
    assert skipped
    assert out == 4.0


def test_chl_equals_newton_with_otf_sensitivity():
    # identity on random vectors: chl == newton-root fed w = -(1/mu) I_h Lv
    rng = np.random.default_rng(4)
    op = IdentityObservation(6)
    mu = 25.0
    for _ in range(100):
        v = rng.standard_normal(6)
        u = rng.standard_normal(6)
        lv = rng.standard_normal(6)
        c = float(rng.standard_normal())
        chl, skipped = chl_update(c, v, u, lv, mu, op)
        if skipped:
            continue
        w = -(1.0 / mu) * op.apply(lv)
        E = error_functional(v, u, op)
        g = assemble_gradient(v, u, stack_of(w[None, :]), op)
        newton, _ = update_newton_root(np.array([c]), E, g)
        assert abs(chl - newton[0]) <= 1e-12 * max(1.0, abs(chl))


def test_updates_invariant_under_projection():
    # applying I_h to already-projected inputs changes nothing
    model = KuramotoSivashinsky(grid=256)
    op = FourierModeObservation(32, model.grid, model.length)
    rng = np.random.default_rng(5)
    v = model.field_to_state(rng.standard_normal(model.grid))
    u = model.field_to_state(rng.standard_normal(model.grid))
    cols = np.stack([model.field_to_state(rng.standard_normal(model.grid))
                     for _ in range(3)])
    stack = SensitivityStack(cols.copy(), "ds", (0, 1, 2))
    stack_p = SensitivityStack(op.apply(cols), "ds", (0, 1, 2))
    vp, up = op.apply(v), op.apply(u)

    assert error_functional(v, u, op) == pytest.approx(error_functional(vp, up, op),
                                                       rel=1e-14)
    g = assemble_gradient(v, u, stack, op)
    gp = assemble_gradient(vp, up, stack_p, op)
    assert np.abs(g - gp).max() <= 1e-12 * max(1.0, np.abs(g).max())
    gn = assemble_gn_matrix(stack, op)
    gnp = assemble_gn_matrix(stack_p, op)
    assert np.abs(gn - gnp).max() <= 1e-12 * max(1.0, np.abs(gn).max())
    lv = model.second_derivative(v)
    a, _ = chl_update(1.0, v, u, lv, 25.0, op)
    b, _ = chl_update(1.0, vp, up, op.apply(lv), 25.0, op)
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


def test_converged_state_fixes_every_rule():
    rng = np.random.default_rng(6)
    v = rng.standard_normal(4)
    op = IdentityObservation(4)
    cols = rng.standard_normal((2, 4))
    stack = stack_of(cols)
    c = np.array([1.5, -0.5])
    E = error_functional(v, v, op)
    g = assemble_gradient(v, v, stack, op)
    gn = assemble_gn_matrix(stack, op)
    assert np.array_equal(update_gradient_descent(c, g, 30.0), c)
    out, _ = update_newton_root(c, E, g)
    assert np.array_equal(out, c)
    assert np.allclose(update_levenberg_marquardt(c, g, gn, 1e-6), c)
