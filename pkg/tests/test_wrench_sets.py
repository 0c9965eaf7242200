import time

import numpy as np
import pytest
from scipy.optimize import linprog

from omnimorph.geometry import allocation_matrix
from omnimorph.params import PlatformParams
from omnimorph.wrench_sets import (alpha_grid, fibonacci_sphere, inscribed_force_radius,
                                   omni_alpha_interval, support_force, support_solution)

E1, E2, E3 = np.eye(3)


def _scipy_support(params, layout, alpha, d, zero_torque):
    # Independent oracle: scipy's HiGHS on the same program.
    A = allocation_matrix(params, layout, alpha)
    rows = 6 if zero_torque else 3
    A_eq = np.zeros((rows, 9))
    A_eq[:, :8] = A[:rows]
    A_eq[:3, 8] = -d
    bounds = [(-params.u_max, params.u_max)] * 8 + [(0, None)]
    res = linprog(np.r_[np.zeros(8), -1.0], A_eq=A_eq, b_eq=np.zeros(rows), bounds=bounds,
                  method="highs")
    assert res.status == 0
    return -res.fun


def test_fibonacci_sphere_unit_and_spread():
    D = fibonacci_sphere(400)
    np.testing.assert_allclose(np.linalg.norm(D, axis=1), 1.0, atol=1e-12)
    assert np.linalg.norm(D.mean(axis=0)) < 1e-2


def test_level_support(params, layout):
    assert support_force(params, layout, 0.0, E3) == pytest.approx(8 * params.c_f * params.u_max)
    assert support_force(params, layout, 0.0, E1) == pytest.approx(0.0, abs=1e-9)


def test_symmetric_axes_have_equal_support(params, layout):
    a = np.radians(45.0)
    assert abs(support_force(params, layout, a, E1) - support_force(params, layout, a, E2)) < 1e-9


@pytest.mark.parametrize("zero_torque", [True, False])
def test_support_matches_scipy(params, layout, rng, zero_torque):
    for _ in range(10):
        alpha = rng.uniform(0.1, 1.4)
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        ours = support_force(params, layout, alpha, d, zero_torque)
        assert ours == pytest.approx(_scipy_support(params, layout, alpha, d, zero_torque),
                                     rel=1e-8, abs=1e-9)


def test_support_is_symmetric_and_inputs_in_box(params, layout, rng):
    for _ in range(10):
        alpha = rng.uniform(0.0, 1.5)
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        lam, u = support_solution(params, layout, alpha, d)
        assert lam == pytest.approx(support_force(params, layout, alpha, -d), rel=1e-9, abs=1e-9)
        assert np.all(np.abs(u) <= params.u_max * (1 + 1e-9))
        wrench = allocation_matrix(params, layout, alpha) @ u
        np.testing.assert_allclose(wrench[:3], lam * d, atol=1e-8)
        np.testing.assert_allclose(wrench[3:], 0.0, atol=1e-8)


def test_support_rejects_non_unit_direction(params, layout):
    with pytest.raises(ValueError):
        support_force(params, layout, 0.3, np.array([1.0, 1.0, 0.0]))


def test_inscribed_radius(params, layout):
    assert inscribed_force_radius(params, layout, 0.0) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(ValueError):
        inscribed_force_radius(params, layout, 0.5, n_dirs=49)


def test_inscribed_radius_rises_through_the_weight(params, layout):
    radii = [inscribed_force_radius(params, layout, np.radians(d), 200) for d in range(0, 61, 10)]
    assert radii[0] == pytest.approx(0.0, abs=1e-9)
    assert all(b > a for a, b in zip(radii[:5], radii[1:6]))
    assert radii[3] < params.weight < radii[4]


def test_inscribed_radius_refinement(params, layout):
    a = np.radians(45.0)
    coarse = inscribed_force_radius(params, layout, a, 200)
    fine = inscribed_force_radius(params, layout, a, 400)
    assert abs(coarse - fine) / fine < 0.02


def test_inscribed_radius_continuous(params, layout):
    # Lipschitz bound per 1 degree: |dA/dalpha| u_max sqrt(8) * step, generously
    bound = np.sqrt(8) * params.c_f * params.u_max * np.radians(1.0) * 2
    r = [inscribed_force_radius(params, layout, np.radians(d), 100) for d in range(30, 46)]
    assert max(abs(np.diff(r))) < bound


def test_alpha_grid_includes_limit():
    g = alpha_grid(np.radians(1.0))
    assert len(g) == 91
    assert g[-1] == pytest.approx(np.pi / 2)


def test_omni_interval_rejects_coarse_grid(params, layout):
    with pytest.raises(ValueError):
        omni_alpha_interval(params, layout, grid_step=np.radians(2.0))


def test_omni_interval_without_thrust_limit(layout):
    p = PlatformParams().with_(u_max=1e9)
    lo, hi = omni_alpha_interval(p, layout, n_dirs=60)
    assert 0 < lo < np.radians(10.0)
    assert hi == pytest.approx(np.radians(89.0)) or hi == pytest.approx(np.radians(90.0))


def test_omni_interval_empty_when_too_heavy(layout):
    p = PlatformParams()
    assert omni_alpha_interval(p.with_(mass=10 * p.mass), layout, n_dirs=60) is None


def test_omni_interval_default(params, layout):
    start = time.perf_counter()
    lo, hi = omni_alpha_interval(params, layout)
    assert time.perf_counter() - start < 30
    assert np.radians(36.0) <= lo <= np.radians(42.0)
    assert np.radians(60.0) <= hi <= np.radians(72.0)
