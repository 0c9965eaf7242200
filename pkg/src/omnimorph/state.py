"""Rigid-body state and 6-D reference containers."""

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.transform import Rotation


def _zeros3():
    return np.zeros(3)


@dataclass
class RigidBodyState:
    """Position/velocity in the world frame, R = world<-body, angular velocity in body."""

    p: np.ndarray = field(default_factory=_zeros3)
    v: np.ndarray = field(default_factory=_zeros3)
    R: np.ndarray = field(default_factory=lambda: np.eye(3))
    w: np.ndarray = field(default_factory=_zeros3)

    def copy(self):
        return RigidBodyState(self.p.copy(), self.v.copy(), self.R.copy(), self.w.copy())


@dataclass
class FlatReference:
    p_d: np.ndarray
    v_d: np.ndarray
    a_d: np.ndarray
    R_d: np.ndarray
    w_d: np.ndarray
    dw_d: np.ndarray


def orthonormalize(R):
    """Closest rotation matrix in the Frobenius sense (polar projection)."""
    U, _, Vt = np.linalg.svd(R)
    Q = U @ Vt
    if np.linalg.det(Q) < 0:
        U[:, -1] = -U[:, -1]
        Q = U @ Vt
    return Q


def quat_wxyz(R):
    """Unit quaternion (w, x, y, z) with w >= 0."""
    x, y, z, w = Rotation.from_matrix(R).as_quat()
    q = np.array([w, x, y, z])
    return -q if q[0] < 0 else q


def axis_angle_matrix(axis, angle):
    return Rotation.from_rotvec(np.asarray(axis, dtype=float) * angle).as_matrix()
