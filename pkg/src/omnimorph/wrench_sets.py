"""Feasible-force sets under input bounds and the omnidirectional tilt range."""

import numpy as np

from .errors import OmniMorphError
from .geometry import allocation_basis, allocation_matrix
from .optimizer import BoundedLP, LPStatus, solve_lp

DEFAULT_DIRECTIONS = 400


def fibonacci_sphere(n):
    """``n`` nearly uniform unit vectors, one per row."""
    i = np.arange(n) + 0.5
    polar = np.arccos(1.0 - 2.0 * i / n)
    azimuth = np.pi * (1.0 + np.sqrt(5.0)) * i
    return np.column_stack([
        np.cos(azimuth) * np.sin(polar),
        np.sin(azimuth) * np.sin(polar),
        np.cos(polar),
    ])


def _support_lp(A, u_max, direction, zero_torque):
    # Inputs are normalized to [-1, 1]; the last variable is the force magnitude.
    n = A.shape[1]
    rows = 6 if zero_torque else 3
    A_eq = np.zeros((rows, n + 1))
    A_eq[:, :n] = u_max * A[:rows]
    A_eq[:3, n] = -direction
    lam_cap = np.abs(u_max * A[:3]).sum() + 1.0
    return BoundedLP(
        c=np.r_[np.zeros(n), 1.0],
        A_eq=A_eq,
        b_eq=np.zeros(rows),
        lower=np.r_[-np.ones(n), 0.0],
        upper=np.r_[np.ones(n), lam_cap],
    )


def support_solution(params, layout, alpha, direction, zero_torque=True, A=None):
    """Largest force magnitude along ``direction`` and the squared speeds producing it."""
    direction = np.asarray(direction, dtype=float)
    if abs(np.linalg.norm(direction) - 1.0) > 1e-12:
        raise ValueError("direction must be a unit vector")
    if A is None:
        A = allocation_matrix(params, layout, alpha)
    res = solve_lp(_support_lp(A, params.u_max, direction, zero_torque))
    if res.status is not LPStatus.OPTIMAL:
        # u = 0, lambda = 0 is always feasible
        raise OmniMorphError(f"support LP returned {res.status.value}")
    return res.value, params.u_max * res.x[:-1]


def support_force(params, layout, alpha, direction, zero_torque=True, A=None):
    """Largest lambda >= 0 such that lambda * direction is an achievable body force.

    With ``zero_torque`` the torque must vanish at the same time.
    """
    return support_solution(params, layout, alpha, direction, zero_torque, A)[0]


def inscribed_force_radius(params, layout, alpha, n_dirs=DEFAULT_DIRECTIONS, zero_torque=True):
    """Radius of the largest origin-centred ball inside the feasible force set.

    Evaluated as the minimum support over a Fibonacci sampling, so it bounds the
    true radius from above.
    """
    if n_dirs < 50:
        raise ValueError("need at least 50 directions")
    A = allocation_matrix(params, layout, alpha)
    return min(support_force(params, layout, alpha, d, zero_torque, A)
               for d in fibonacci_sphere(n_dirs))


class _OmniCheck:
    """Tests ``radius >= weight`` with early exit, probing last-failing directions first."""

    def __init__(self, params, layout, n_dirs, zero_torque):
        self.params = params
        self.layout = layout
        self.dirs = fibonacci_sphere(n_dirs)
        self.order = list(range(n_dirs))
        self.zero_torque = zero_torque
        self.basis = allocation_basis(params, layout)

    def vertical_ok(self, alpha):
        p = self.params
        return 8 * p.c_f * p.u_max * np.cos(alpha) >= p.weight

    def __call__(self, alpha):
        if not self.vertical_ok(alpha):
            return False
        A = allocation_matrix(self.params, self.layout, alpha, self.basis)
        for k, idx in enumerate(self.order):
            if support_force(self.params, self.layout, alpha, self.dirs[idx],
                             self.zero_torque, A) < self.params.weight:
                self.order.insert(0, self.order.pop(k))
                return False
        return True


def alpha_grid(grid_step, alpha_limit=np.pi / 2):
    count = int(np.floor(alpha_limit / grid_step + 1e-9))
    return grid_step * np.arange(count + 1)


def omni_alpha_interval(params, layout, grid_step=np.radians(1.0), n_dirs=DEFAULT_DIRECTIONS,
                        zero_torque=True, alpha_limit=np.pi / 2):
    """Smallest and largest grid tilt at which the platform is omnidirectional.

    Omnidirectional means the inscribed force ball reaches the weight and the
    level-hover thrust ``8 c_f u_max cos(alpha)`` still covers it. Returns None
    if no grid point qualifies.
    """
    if grid_step > np.radians(1.0) + 1e-12:
        raise ValueError("grid_step must not exceed 1 degree")
    grid = alpha_grid(grid_step, alpha_limit)
    check = _OmniCheck(params, layout, n_dirs, zero_torque)
    lo = next((a for a in grid if check(a)), None)
    if lo is None:
        return None
    hi = next(a for a in grid[::-1] if a >= lo and check(a))
    return float(lo), float(hi)
