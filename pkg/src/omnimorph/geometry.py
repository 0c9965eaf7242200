"""Propeller layout and the tilt-parameterized allocation matrix.

Eight bi-directional propellers sit on the vertices of a cube centred at the
CoM. All of them tilt by the same angle ``alpha`` about axes lying along the
cube edges; ``alpha = 0`` is the uni-directional-thrust configuration.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidParameterError

N_PROPS = 8
E3 = np.array([0.0, 0.0, 1.0])

# Drag-moment sign per propeller (k_i = +1 ascending chord, -1 descending).
# Diagonal propellers share handedness, k_i = -sign(x_i * y_i), so equal
# thrusts cancel the drag moments at every tilt.
SPIN_SIGNS = np.array([-1.0, 1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0])

_CUBE_SIGNS = np.array([
    [1, -1, 1, -1, 1, -1, 1, -1],
    [1, 1, -1, -1, 1, 1, -1, -1],
    [1, 1, 1, 1, -1, -1, -1, -1],
], dtype=float)

CUBE_TWIST = np.pi / 12


def rot_x(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_z(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def hat(v):
    """Skew-symmetric matrix with hat(v) @ w == cross(v, w)."""
    return np.array([
        [0.0, -v[2], v[1]],
        [v[2], 0.0, -v[0]],
        [-v[1], v[0], 0.0],
    ])


def vee(S):
    return np.array([S[2, 1], S[0, 2], S[1, 0]])


def propeller_positions(L):
    """Propeller centres in the body frame, one column per propeller.

    Every column has norm ``L``.
    """
    if not L > 0:
        raise InvalidParameterError(f"cube parameter L must be positive, got {L}")
    return L / np.sqrt(3.0) * _CUBE_SIGNS


def brescianini_axes():
    """Spin axes of the optimal fixed-tilt omnidirectional octorotor."""
    a = 0.5 + 1.0 / np.sqrt(12.0)
    b = 0.5 - 1.0 / np.sqrt(12.0)
    c = 1.0 / np.sqrt(3.0)
    return np.array([
        [-a, b, -b, a, a, -b, b, -a],
        [b, a, -a, -b, -b, -a, a, b],
        [c, -c, -c, c, c, -c, -c, c],
    ])


def untwisted_tilt_axes():
    """Axes bringing each fixed-tilt spin axis back to vertical, before the cube twist.

    Propellers are bi-directional, so each spin axis is taken with its upward
    orientation; the tilt then rotates that line the short way onto e3.
    """
    B = brescianini_axes()
    B = B * np.sign(B[2])
    axes = np.cross(E3, B.T).T
    return axes / np.linalg.norm(axes, axis=0)


def tilt_axes():
    """Unit tilt axes, one column per propeller; each lies along a cube edge."""
    return rot_z(CUBE_TWIST) @ untwisted_tilt_axes()


@lru_cache(maxsize=None)
def _base_rotations():
    rots = []
    for x in untwisted_tilt_axes().T:
        y = np.cross(E3, x)
        rots.append(np.column_stack([x, y, E3]))
    return tuple(rots)


def base_rotation(i):
    """Frame with x along the untwisted tilt axis of propeller ``i`` (1-based) and z = e3."""
    if not 1 <= i <= N_PROPS:
        raise IndexError(f"propeller index must be in 1..{N_PROPS}, got {i}")
    return _base_rotations()[i - 1].copy()


def propeller_rotation(i, alpha):
    """Body-to-propeller rotation of propeller ``i`` (1-based) at tilt ``alpha``.

    The third column is the thrust direction.
    """
    return rot_z(CUBE_TWIST) @ base_rotation(i) @ rot_x(alpha)


@dataclass(frozen=True)
class PropellerLayout:
    positions: np.ndarray
    spin_signs: np.ndarray
    base_rotations: tuple
    tilt_axes: np.ndarray

    @property
    def count(self):
        return self.positions.shape[1]

    def thrust_directions(self, alpha):
        """Unit thrust axes at tilt ``alpha``, one column per propeller."""
        # R_X(alpha) e3 = cos(a) e3 - sin(a) e2, expressed through the twisted frame.
        lateral = np.cross(E3, self.tilt_axes.T).T
        return np.cos(alpha) * E3[:, None] - np.sin(alpha) * lateral


def omnimorph_layout(L):
    return PropellerLayout(
        positions=propeller_positions(L),
        spin_signs=SPIN_SIGNS.copy(),
        base_rotations=_base_rotations(),
        tilt_axes=tilt_axes(),
    )


def layout_for(params):
    return omnimorph_layout(params.arm_length)


def allocation_basis(params, layout):
    """Constant matrices ``(A_cos, A_sin)`` with A(alpha) = cos(a) A_cos + sin(a) A_sin."""
    lateral = np.cross(E3, layout.tilt_axes.T).T
    kappa = params.drag_ratio

    def wrench_cols(dirs):
        out = np.empty((6, layout.count))
        for i in range(layout.count):
            moment_map = hat(layout.positions[:, i]) - layout.spin_signs[i] * kappa * np.eye(3)
            out[:3, i] = dirs[:, i]
            out[3:, i] = moment_map @ dirs[:, i]
        return params.c_f * out

    A_cos = wrench_cols(np.tile(E3[:, None], (1, layout.count)))
    A_sin = wrench_cols(-lateral)
    return A_cos, A_sin


def allocation_matrix(params, layout, alpha, basis=None):
    """6x8 map from signed squared speeds to body [force; torque]."""
    A_cos, A_sin = basis if basis is not None else allocation_basis(params, layout)
    return np.cos(alpha) * A_cos + np.sin(alpha) * A_sin


def allocation_alpha_derivative(params, layout, alpha, basis=None):
    """dA/dalpha, evaluated analytically."""
    A_cos, A_sin = basis if basis is not None else allocation_basis(params, layout)
    return -np.sin(alpha) * A_cos + np.cos(alpha) * A_sin


def allocation_alpha_jacobian(params, layout, alpha, u_w, basis=None):
    """Sensitivity of the body wrench to the tilt angle, (dA/dalpha) @ u_w."""
    return allocation_alpha_derivative(params, layout, alpha, basis) @ np.asarray(u_w, dtype=float)
