"""Smooth 6-D references built from straight-line and single-axis-rotation segments.

Positions follow minimum-jerk (quintic) profiles with zero boundary velocity
and acceleration; attitudes rotate about a fixed world axis with the same
quintic angle profile.
"""

from dataclasses import dataclass, field

import numpy as np

from .state import FlatReference, axis_angle_matrix


def quintic(tau):
    """Minimum-jerk blend s(tau) and its first two derivatives w.r.t. tau."""
    tau = min(max(tau, 0.0), 1.0)
    s = tau ** 3 * (10.0 - 15.0 * tau + 6.0 * tau * tau)
    ds = 30.0 * tau * tau * (1.0 - tau) ** 2
    dds = 60.0 * tau * (1.0 - tau) * (1.0 - 2.0 * tau)
    return s, ds, dds


@dataclass(frozen=True)
class Segment:
    """One mission piece.

    ``kind`` is "hold", "line", "rotate" or "combined". Line segments move by
    ``delta`` (m); rotate segments turn by ``angle`` (rad) about the world
    ``axis``; combined segments do both over the same ``duration``.
    """

    kind: str
    duration: float
    delta: tuple = (0.0, 0.0, 0.0)
    axis: tuple = (1.0, 0.0, 0.0)
    angle: float = 0.0

    def __post_init__(self):
        if self.kind not in ("hold", "line", "rotate", "combined"):
            raise ValueError(f"unknown segment kind {self.kind!r}")
        if not self.duration > 0:
            raise ValueError("segment duration must be positive")
        if abs(np.linalg.norm(self.axis) - 1.0) > 1e-9:
            raise ValueError("rotation axis must be a unit vector")

    @property
    def moves(self):
        return self.kind in ("line", "combined")

    @property
    def turns(self):
        return self.kind in ("rotate", "combined")


def hold(duration):
    return Segment("hold", duration)


def line_to(delta, duration):
    return Segment("line", duration, delta=tuple(float(x) for x in delta))


def rotate(axis, angle, duration):
    return Segment("rotate", duration, axis=tuple(float(x) for x in axis), angle=float(angle))


def combined(delta, axis, angle, duration):
    return Segment("combined", duration, delta=tuple(float(x) for x in delta),
                   axis=tuple(float(x) for x in axis), angle=float(angle))


@dataclass
class Mission:
    segments: list
    p0: np.ndarray = field(default_factory=lambda: np.zeros(3))
    R0: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        self.p0 = np.asarray(self.p0, dtype=float)
        self.R0 = np.asarray(self.R0, dtype=float)
        self.starts = []
        self.start_poses = []
        t, p, R = 0.0, self.p0.copy(), self.R0.copy()
        for seg in self.segments:
            self.starts.append(t)
            self.start_poses.append((p.copy(), R.copy()))
            t += seg.duration
            if seg.moves:
                p = p + np.asarray(seg.delta)
            if seg.turns:
                R = axis_angle_matrix(seg.axis, seg.angle) @ R
        self.end_pose = (p, R)

    @property
    def duration(self):
        return sum(seg.duration for seg in self.segments)


def sample(mission, t):
    """Reference at time ``t`` (clamped to the mission span)."""
    t = min(max(t, 0.0), mission.duration)
    idx = 0
    for k, start in enumerate(mission.starts):
        if t >= start:
            idx = k
    seg = mission.segments[idx]
    p_start, R_start = mission.start_poses[idx]
    T = seg.duration
    s, ds, dds = quintic((t - mission.starts[idx]) / T)

    zero = np.zeros(3)
    p_d, v_d, a_d = p_start.copy(), zero.copy(), zero.copy()
    if seg.moves:
        delta = np.asarray(seg.delta)
        p_d = p_start + s * delta
        v_d = ds / T * delta
        a_d = dds / T ** 2 * delta

    R_d, w_d, dw_d = R_start.copy(), zero.copy(), zero.copy()
    if seg.turns:
        axis = np.asarray(seg.axis)
        R_d = axis_angle_matrix(axis, s * seg.angle) @ R_start
        # World angular velocity axis * theta_dot, expressed in the reference body frame.
        w_d = R_d.T @ axis * (ds / T * seg.angle)
        dw_d = R_d.T @ axis * (dds / T ** 2 * seg.angle)
    return FlatReference(p_d=p_d, v_d=v_d, a_d=a_d, R_d=R_d, w_d=w_d, dw_d=dw_d)


def paper_mission(climb=1.0, lateral=1.0, tilt_deg=25.0, climb_time=3.0, hold_time=1.0,
                  lateral_time=4.0, roll_time=6.0):
    """Vertical climb, tilted lateral out-and-back, a full roll on the spot, descent."""
    x, z = np.array([1.0, 0.0, 0.0]), np.array([0.0, 0.0, 1.0])
    tilt = np.radians(tilt_deg)
    return Mission([
        line_to(climb * z, climb_time),
        hold(hold_time),
        combined(lateral * x, x, tilt, lateral_time),
        combined(-lateral * x, x, -tilt, lateral_time),
        rotate(x, 2.0 * np.pi, roll_time),
        line_to(-climb * z, climb_time),
    ])


def hover_mission(duration=5.0):
    return Mission([hold(duration)])


MISSIONS = {"paper": paper_mission, "hover": hover_mission}
