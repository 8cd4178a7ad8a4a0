import numpy as np
import pytest

from nudgefit import KuramotoSivashinsky, otf_observed_sensitivity

MODEL = KuramotoSivashinsky()
ONES = np.ones(3)


def single_mode(model, k, amp=1.0, phase="sin"):
    """Exact spectrum of amp*sin(2 pi k x / L) or cos, no sampling round-off."""
    state = np.zeros(model.grid, dtype=complex)
    half = 0.5 * amp * model.grid
    if phase == "sin":
        state[k] = -1j * half
        state[-k] = 1j * half
    else:
        state[k] = half
        state[-k] = half
    return state


def test_constants_and_validation():
    assert MODEL.grid == 1024
    assert MODEL.length == 100.0
    assert MODEL.epsilon == 0.0
    assert MODEL.name == "kse"
    assert KuramotoSivashinsky(epsilon=1e-3).name == "kse_perturbed"
    with pytest.raises(ValueError):
        KuramotoSivashinsky(grid=1000)
    with pytest.raises(ValueError):
        KuramotoSivashinsky(length=-1.0)


def test_rhs_single_mode_closed_form():
    # u = sin(kx): f = k^2 sin(kx) - (k/2) sin(2kx) - k^4 sin(kx)
    state = single_mode(MODEL, 1)
    k = 2 * np.pi / MODEL.length
    x = MODEL.grid_points()
    out = MODEL.state_to_field(MODEL.rhs(state, ONES))
    expect = k**2 * np.sin(k * x) - (k / 2) * np.sin(2 * k * x) - k**4 * np.sin(k * x)
    scale = np.abs(expect).max()
    assert np.abs(out - expect).max() <= 1e-10 * scale


def test_linear_terms_spectrally_exact():
    state = single_mode(MODEL, 7)
    k = MODEL.wavenumbers[7]
    second = MODEL.second_derivative(state)
    assert np.abs(second - (-k**2) * state).max() <= 1e-12 * np.abs(state).max()
    fourth = -MODEL.param_derivative(state, ONES, 2)  # u'''' = -f_c3
    assert np.abs(fourth - (k**4) * state).max() <= 1e-12 * (k**4) * np.abs(state).max()


def test_param_derivative_single_mode():
    state = single_mode(MODEL, 4)
    k = MODEL.wavenumbers[4]
    x = MODEL.grid_points()
    out = MODEL.state_to_field(MODEL.param_derivative(state, ONES, 2))
    expect = -k**4 * np.sin(k * x)
    assert np.abs(out - expect).max() <= 1e-12 * np.abs(expect).max()
    out1 = MODEL.state_to_field(MODEL.param_derivative(state, ONES, 1))
    expect1 = -(k / 2) * np.sin(2 * k * x)
    assert np.abs(out1 - expect1).max() <= 1e-12
    with pytest.raises(IndexError):
        MODEL.param_derivative(state, ONES, 3)


def test_jvp_matches_directional_difference():
    model = KuramotoSivashinsky(grid=256)
    rng = np.random.default_rng(12)
    x = model.field_to_state(rng.standard_normal(model.grid))
    w = model.field_to_state(rng.standard_normal(model.grid))
    exact = model.jacobian_vector_product(x, ONES, w)
    h = 1e-5
    fd = (model.rhs(x + h * w, ONES) - model.rhs(x - h * w, ONES)) / (2 * h)
    num = np.sqrt(model.inner(fd - exact, fd - exact))
    den = np.sqrt(model.inner(exact, exact))
    assert num / den < 1e-9


def test_param_derivative_matches_difference():
    model = KuramotoSivashinsky(grid=256)
    rng = np.random.default_rng(13)
    x = model.field_to_state(rng.standard_normal(model.grid))
    delta = 1e-4
    for i in range(3):
        e = np.zeros(3)
        e[i] = delta
        fd = (model.rhs(x, ONES + e) - model.rhs(x, ONES - e)) / (2 * delta)
        pd = model.param_derivative(x, ONES, i)
        num = np.sqrt(model.inner(fd - pd, fd - pd))
        den = max(np.sqrt(model.inner(pd, pd)), 1.0)
        assert num / den < 1e-10


def test_dealiasing_kills_high_products():
    # two modes near the 2/3 cutoff produce a product mode that must be masked
    model = KuramotoSivashinsky(grid=256)
    cutoff = model.grid // 3
    state = single_mode(model, cutoff - 1) + single_mode(model, cutoff - 2)
    out = model.nonlinear_rhs(state, ONES)
    k_index = np.abs(model.k_index)
    assert np.abs(out[k_index > cutoff]).max() == 0.0


def test_perturbed_variant_linear_coefficient():
    eps = 1e-3
    plain = KuramotoSivashinsky(grid=256)
    pert = KuramotoSivashinsky(grid=256, epsilon=eps)
    lam0 = plain.linear_coeff(ONES)
    lam1 = pert.linear_coeff(ONES)
    # atol covers the cancellation noise of subtracting O(k^4) coefficients
    assert np.allclose(lam1 - lam0, -eps * plain.k6, rtol=1e-9, atol=1e-10)


def test_conjugate_symmetry_preserved():
    rng = np.random.default_rng(14)
    state = MODEL.field_to_state(rng.standard_normal(MODEL.grid))
    assert MODEL.conjugate_symmetry_defect(state) < 1e-10
    out = MODEL.nonlinear_rhs(state, ONES)
    assert MODEL.conjugate_symmetry_defect(out) < 1e-10
    op = MODEL.default_observation()
    assert MODEL.conjugate_symmetry_defect(op.apply(state)) < 1e-10


def test_otf_single_mode():
    # v = sin(kx), mu = 25, k below cutoff: columns (k^2/25) sin, -(k/50) sin(2kx), (-k^4/25) sin
    model = KuramotoSivashinsky(grid=256)
    op = model.default_observation()
    state = single_mode(model, 3)
    k = model.wavenumbers[3]
    x = model.grid_points()
    stack = otf_observed_sensitivity(model, state, ONES, 25.0, op)
    col0 = model.state_to_field(stack.columns[0])
    col1 = model.state_to_field(stack.columns[1])
    col2 = model.state_to_field(stack.columns[2])
    assert np.abs(col0 - (k**2 / 25.0) * np.sin(k * x)).max() < 1e-12
    assert np.abs(col1 + (k / 50.0) * np.sin(2 * k * x)).max() < 1e-12
    assert np.abs(col2 + (k**4 / 25.0) * np.sin(k * x)).max() < 1e-12


def test_otf_columns_lie_in_observed_subspace():
    model = KuramotoSivashinsky(grid=256)
    op = model.default_observation()
    rng = np.random.default_rng(15)
    state = model.field_to_state(rng.standard_normal(model.grid))
    stack = otf_observed_sensitivity(model, state, ONES, 25.0, op)
    outside = stack.columns[:, ~op.mask.astype(bool)]
    assert np.abs(outside).max() == 0.0
