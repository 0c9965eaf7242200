import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from omnimorph.errors import InvalidParameterError
from omnimorph.geometry import (CUBE_TWIST, E3, SPIN_SIGNS, allocation_alpha_derivative,
                                allocation_alpha_jacobian, allocation_basis, allocation_matrix,
                                brescianini_axes, hat, propeller_positions, propeller_rotation,
                                rot_z, tilt_axes, untwisted_tilt_axes, vee)

angles = st.floats(min_value=0.0, max_value=np.pi / 2, allow_nan=False)


def test_positions_are_cube_sign_vectors():
    P = propeller_positions(np.sqrt(3.0))
    np.testing.assert_allclose(P[:, 0], [1.0, 1.0, 1.0], atol=1e-15)
    signs = {tuple(np.round(c).astype(int)) for c in P.T}
    assert signs == set(itertools.product([1, -1], repeat=3))
    np.testing.assert_allclose(np.abs(P), 1.0, atol=1e-15)


@pytest.mark.parametrize("L", [0.0, -0.2])
def test_positions_reject_degenerate_cube(L):
    with pytest.raises(InvalidParameterError):
        propeller_positions(L)


@given(st.floats(min_value=1e-3, max_value=10.0))
def test_position_norms_equal_L(L):
    np.testing.assert_allclose(np.linalg.norm(propeller_positions(L), axis=0), L, rtol=1e-14)


def test_brescianini_axes_values():
    B = brescianini_axes()
    a, b, c = 0.5 + 1 / np.sqrt(12), 0.5 - 1 / np.sqrt(12), 1 / np.sqrt(3)
    np.testing.assert_allclose(B[:, 0], [-a, b, c])
    assert a == pytest.approx(0.7887, abs=1e-4)
    assert b == pytest.approx(0.2113, abs=1e-4)
    np.testing.assert_allclose(np.linalg.norm(B, axis=0), 1.0, atol=1e-15)
    np.testing.assert_allclose(B.sum(axis=1), 0.0, atol=1e-15)


def test_untwisted_axes_orthogonality_groups():
    Bt = untwisted_tilt_axes()
    for i in (0, 3, 4, 7):
        for j in (1, 2, 5, 6):
            assert abs(Bt[:, i] @ Bt[:, j]) < 1e-12


def test_untwisted_axes_perpendicular_to_fixed_design():
    Bt, B = untwisted_tilt_axes(), brescianini_axes()
    np.testing.assert_allclose(np.einsum("ij,ij->j", Bt, B), 0.0, atol=1e-15)
    np.testing.assert_allclose(Bt[2], 0.0, atol=1e-15)


def test_twisted_axes_lie_along_cube_edges():
    # The cube of the propeller positions has its edges along the body axes.
    b = tilt_axes()
    for col in b.T:
        assert np.isclose(np.max(np.abs(col)), 1.0, atol=1e-12)
        assert np.isclose(np.linalg.norm(col), 1.0, atol=1e-12)


@settings(max_examples=50)
@given(st.integers(min_value=1, max_value=8), angles)
def test_propeller_rotation_is_rotation(i, alpha):
    R = propeller_rotation(i, alpha)
    np.testing.assert_allclose(R.T @ R, np.eye(3), atol=1e-12)
    assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-12)


def test_level_tilt_points_all_thrust_up():
    for i in range(1, 9):
        np.testing.assert_allclose(propeller_rotation(i, 0.0)[:, 2], E3, atol=1e-15)


@pytest.mark.parametrize("i", [0, 9])
def test_propeller_rotation_index_range(i):
    with pytest.raises(IndexError):
        propeller_rotation(i, 0.1)


def test_fixed_design_lies_on_the_tilt_path():
    # Solve for the tilt at which the vertical thrust component matches the
    # fixed design, then check every thrust line coincides with it.
    target = rot_z(CUBE_TWIST) @ brescianini_axes()
    vz = abs(target[2, 0])
    alpha = brentq(lambda a: propeller_rotation(1, a)[2, 2] - vz, 0.0, np.pi / 2, xtol=1e-15)
    for i in range(8):
        z = propeller_rotation(i + 1, alpha)[:, 2]
        # bi-directional propellers: the thrust line matters, not its orientation
        residual = min(np.linalg.norm(z - target[:, i]), np.linalg.norm(z + target[:, i]))
        assert residual < 1e-9
    assert alpha == pytest.approx(np.arctan(np.sqrt(2.0)), abs=1e-12)


def test_hat_vee_roundtrip(rng):
    v, w = rng.normal(size=3), rng.normal(size=3)
    np.testing.assert_allclose(hat(v) @ w, np.cross(v, w), atol=1e-15)
    np.testing.assert_allclose(vee(hat(v)), v)


def _allocation_oracle(params, layout, alpha):
    """Column i = c_f [z_i; p_i x z_i - k_i kappa z_i] from the per-propeller rotations."""
    kappa = params.c_tau / params.c_f
    cols = []
    for i in range(8):
        z = propeller_rotation(i + 1, alpha)[:, 2]
        p = layout.positions[:, i]
        cols.append(params.c_f * np.r_[z, np.cross(p, z) - layout.spin_signs[i] * kappa * z])
    return np.column_stack(cols)


@settings(max_examples=30)
@given(angles)
def test_allocation_matches_per_propeller_construction(params, layout, alpha):
    np.testing.assert_allclose(allocation_matrix(params, layout, alpha),
                               _allocation_oracle(params, layout, alpha), atol=1e-15)


def test_level_allocation(params, layout):
    A = allocation_matrix(params, layout, 0.0)
    np.testing.assert_allclose(A[:3], params.c_f * np.tile(E3[:, None], (1, 8)), atol=1e-18)
    np.testing.assert_allclose(np.abs(A[5]), params.c_tau, rtol=1e-14)
    assert A[5].sum() == pytest.approx(0.0, abs=1e-18)
    assert np.linalg.matrix_rank(A[:3]) == 1
    assert np.linalg.matrix_rank(A) == 4


def test_spin_signs_cancel_drag_for_equal_thrusts(params, layout):
    assert SPIN_SIGNS.sum() == 0
    for alpha in np.radians(np.arange(0, 91, 5)):
        wrench = allocation_matrix(params, layout, alpha) @ np.ones(8)
        np.testing.assert_allclose(wrench[:2], 0.0, atol=1e-18)
        np.testing.assert_allclose(wrench[3:], 0.0, atol=1e-18)


def test_sideways_allocation_has_no_vertical_force(params, layout):
    A = allocation_matrix(params, layout, np.pi / 2)
    np.testing.assert_allclose(A[2], 0.0, atol=1e-20)


# Moment block as printed in the source, in coefficients of (l c, l s, kappa s,
# kappa c) where l = L / sqrt(3) is the per-axis offset of every propeller.
# Printed column j describes propeller PRINTED_TO_PROP[j]; printed column 7
# repeats the position of column 8 and is left out.
PRINTED_MOMENTS = {
    1: ((1, 0, -1, 0), (-1, -1, 0, 0), (0, 1, 0, 1)),
    2: ((1, 1, 0, 0), (1, 0, 1, 0), (0, 1, 0, -1)),
    3: ((-1, 0, 1, 0), (1, 1, 0, 0), (0, 1, 0, 1)),
    4: ((-1, -1, 0, 0), (-1, 0, -1, 0), (0, 1, 0, -1)),
    5: ((1, 0, 1, 0), (-1, -1, 0, 0), (0, -1, 0, 1)),
    6: ((-1, -1, 0, 0), (-1, 0, 1, 0), (0, -1, 0, -1)),
    8: ((-1, 0, -1, 0), (1, 1, 0, 0), (0, -1, 0, 1)),
}
PRINTED_TO_PROP = {1: 1, 2: 2, 3: 4, 4: 3, 5: 5, 6: 7, 8: 8}


def test_moment_block_matches_printed_matrix(params, layout):
    alpha = 0.3
    l = params.arm_length / np.sqrt(3.0)
    kappa = params.c_tau / params.c_f
    basis = np.array([l * np.cos(alpha), l * np.sin(alpha),
                      kappa * np.sin(alpha), kappa * np.cos(alpha)])
    A = allocation_matrix(params, layout, alpha)
    for col, rows in PRINTED_MOMENTS.items():
        printed = params.c_f * np.array([np.dot(r, basis) for r in rows])
        prop = PRINTED_TO_PROP[col]
        np.testing.assert_allclose(A[3:, prop - 1], printed, atol=1e-12)


@settings(max_examples=30)
@given(angles)
def test_force_columns_have_norm_cf(params, layout, alpha):
    A = allocation_matrix(params, layout, alpha)
    np.testing.assert_allclose(np.linalg.norm(A[:3], axis=0), params.c_f, rtol=1e-14)


def test_alpha_jacobian_finite_difference(params, layout, rng):
    h = 1e-6
    for _ in range(20):
        alpha = rng.uniform(0.0, np.pi / 2)
        u = rng.uniform(-params.u_max, params.u_max, 8)
        fd = (allocation_matrix(params, layout, alpha + h) @ u
              - allocation_matrix(params, layout, alpha - h) @ u) / (2 * h)
        exact = allocation_alpha_jacobian(params, layout, alpha, u)
        assert np.linalg.norm(fd - exact) <= 1e-6 * np.linalg.norm(exact)


def test_alpha_jacobian_special_cases(params, layout):
    np.testing.assert_array_equal(allocation_alpha_jacobian(params, layout, 0.4, np.zeros(8)), 0.0)
    F2 = allocation_alpha_jacobian(params, layout, 0.0, np.full(8, 1e5))
    assert F2[2] == pytest.approx(0.0, abs=1e-12)


def test_allocation_is_lipschitz_in_alpha(params, layout):
    A_cos, A_sin = allocation_basis(params, layout)
    C = np.linalg.norm(A_cos, 2) + np.linalg.norm(A_sin, 2)
    delta = np.radians(0.1)
    for alpha in np.arange(0.0, np.pi / 2, delta):
        step = np.linalg.norm(allocation_matrix(params, layout, alpha + delta)
                              - allocation_matrix(params, layout, alpha), 2)
        assert step <= C * delta
        dA = allocation_alpha_derivative(params, layout, alpha)
        assert np.linalg.norm(dA, 2) <= C
