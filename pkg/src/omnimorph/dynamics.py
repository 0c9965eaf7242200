"""Rigid-body plant (Newton-Euler + propeller wrench), RK4 integration and the
closed-loop simulation driver."""

from dataclasses import dataclass, field

import numpy as np

from .controller import DEFAULT_GAINS, WEIGHT_PRESETS, Controller, ControllerState
from .energy import EnergyAccount, accumulate_energy, hover_input
from .errors import ControllerFault, HoverDeficitError, SimulationDiverged
from .geometry import allocation_basis, allocation_matrix, hat, layout_for
from .params import PlatformParams
from .state import RigidBodyState, orthonormalize, quat_wxyz
from .trace import SimTrace
from .trajectory import paper_mission, sample


@dataclass(frozen=True)
class PlantConfig:
    """``cf_scale`` is the true thrust coefficient relative to the controller's model."""

    cf_scale: float = 1.0
    dt_sim: float = 0.001
    sim_steps_per_ctrl: int = 4
    # Position error beyond which the run counts as lost.
    divergence_radius: float = 5.0

    def __post_init__(self):
        if not 0.0 < self.cf_scale <= 1.0:
            raise ValueError("cf_scale must lie in (0, 1]")
        if not self.dt_sim > 0:
            raise ValueError("dt_sim must be positive")
        if int(self.sim_steps_per_ctrl) != self.sim_steps_per_ctrl or self.sim_steps_per_ctrl < 1:
            raise ValueError("sim_steps_per_ctrl must be a positive integer")

    @property
    def dt_ctrl(self):
        return self.dt_sim * self.sim_steps_per_ctrl


def body_wrench(params, layout, plant, alpha, u_w, basis=None):
    """[force; torque] in the body frame actually produced by the propellers."""
    return plant.cf_scale * (allocation_matrix(params, layout, alpha, basis) @ u_w)


def _cross(a, b):
    # np.cross carries too much overhead for the integrator's inner loop
    return np.array([a[1] * b[2] - a[2] * b[1],
                     a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]])


def state_derivative(params, state, wrench):
    """(p_dot, v_dot, R_dot, w_dot) of the Newton-Euler model."""
    f, tau = wrench[:3], wrench[3:]
    J = params.inertia
    v_dot = state.R @ f / params.mass
    v_dot[2] -= params.gravity
    w_dot = params.inertia_inv @ (tau - _cross(state.w, J @ state.w))
    return state.v.copy(), v_dot, state.R @ hat(state.w), w_dot


def _shifted(state, deriv, h):
    dp, dv, dR, dw = deriv
    return RigidBodyState(state.p + h * dp, state.v + h * dv, state.R + h * dR, state.w + h * dw)


def integrate_wrench(params, state, wrench, dt, step_index=None):
    """Classical RK4 with the wrench held over ``dt``; R is re-projected onto SO(3)."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    k1 = state_derivative(params, state, wrench)
    k2 = state_derivative(params, _shifted(state, k1, 0.5 * dt), wrench)
    k3 = state_derivative(params, _shifted(state, k2, 0.5 * dt), wrench)
    k4 = state_derivative(params, _shifted(state, k3, dt), wrench)
    parts = []
    for a, b, c, d, x in zip(k1, k2, k3, k4, (state.p, state.v, state.R, state.w)):
        parts.append(x + dt / 6.0 * (a + 2.0 * b + 2.0 * c + d))
    p, v, R, w = parts
    if not all(np.all(np.isfinite(x)) for x in parts):
        raise SimulationDiverged("non-finite state", step=step_index)
    return RigidBodyState(p, v, orthonormalize(R), w)


def rk4_step(params, plant, state, alpha, u_w, dt, layout=None, basis=None):
    """Advance the plant by ``dt`` with tilt and squared speeds held constant."""
    layout = layout_for(params) if layout is None else layout
    wrench = body_wrench(params, layout, plant, alpha, u_w, basis)
    return integrate_wrench(params, state, wrench, dt)


@dataclass
class Scenario:
    params: PlatformParams = field(default_factory=PlatformParams)
    gains: object = DEFAULT_GAINS
    weights: object = field(default_factory=lambda: WEIGHT_PRESETS["case-a"])
    mission: object = field(default_factory=paper_mission)
    plant: PlantConfig = field(default_factory=PlantConfig)
    duration: float = None
    fixed_alpha: float = None
    alpha0: float = None
    name: str = "scenario"

    def __post_init__(self):
        if abs(self.plant.dt_ctrl - self.params.dt_ctrl) > 1e-12:
            raise ValueError(
                f"plant control period {self.plant.dt_ctrl} s does not match params.dt_ctrl "
                f"{self.params.dt_ctrl} s")


def _initial_input(params, layout, alpha):
    try:
        u = hover_input(params, layout, alpha)
    except HoverDeficitError:
        return np.zeros(layout.count)
    return np.clip(u, -params.u_max, params.u_max)


def simulate(scenario):
    """Closed-loop run; returns a SimTrace sampled once per control period.

    Raises SimulationDiverged (state blow-up or position error beyond the
    plant's divergence radius) and ControllerFault, both tagged with the time.
    """
    params, plant = scenario.params, scenario.plant
    layout = layout_for(params)
    basis = allocation_basis(params, layout)
    ctrl = Controller(params, layout, scenario.gains, scenario.weights, scenario.fixed_alpha)
    duration = scenario.mission.duration if scenario.duration is None else scenario.duration

    if scenario.fixed_alpha is not None:
        alpha = float(scenario.fixed_alpha)
    elif scenario.alpha0 is not None:
        alpha = float(np.clip(scenario.alpha0, params.alpha_min, params.alpha_max))
    else:
        alpha = params.alpha_min
    ref0 = sample(scenario.mission, 0.0)
    state = RigidBodyState(p=ref0.p_d.copy(), v=ref0.v_d.copy(), R=ref0.R_d.copy(),
                           w=ref0.w_d.copy())
    u_prev = _initial_input(params, layout, alpha)
    cstate = ControllerState(alpha_prev=alpha, u_w_prev=u_prev.copy())
    account = EnergyAccount()
    trace = SimTrace.empty()

    dt_sim, n_sub = plant.dt_sim, plant.sim_steps_per_ctrl
    dt_ctrl = plant.dt_ctrl
    n_ctrl = int(round(duration / dt_ctrl))
    for k in range(n_ctrl):
        t = k * dt_ctrl
        ref = sample(scenario.mission, t)
        try:
            sol = ctrl.step(state, ref, cstate)
        except ControllerFault as exc:
            raise ControllerFault(f"t={t:.3f} s: {exc}") from exc

        alpha_start, alpha_end = alpha, sol.alpha
        wrench = body_wrench(params, layout, plant, alpha_end, sol.u_w, basis)
        accumulate_energy(account, params, u_prev, sol.u_w, dt_ctrl)
        trace.append(t, state, ref, alpha_end, sol.u_w, wrench, account)

        for j in range(n_sub):
            # Servo slews linearly toward the new tilt within the period.
            a = alpha_start + (j + 0.5) / n_sub * (alpha_end - alpha_start)
            w = body_wrench(params, layout, plant, a, sol.u_w, basis)
            try:
                state = integrate_wrench(params, state, w, dt_sim, step_index=k * n_sub + j)
            except SimulationDiverged as exc:
                raise SimulationDiverged(f"t={t:.3f} s: {exc}", step=exc.step, time=t) from exc
        alpha, u_prev = alpha_end, sol.u_w

        err = np.linalg.norm(sample(scenario.mission, t + dt_ctrl).p_d - state.p)
        if err > plant.divergence_radius:
            raise SimulationDiverged(
                f"t={t + dt_ctrl:.3f} s: position error {err:.2f} m exceeds "
                f"{plant.divergence_radius} m", step=(k + 1) * n_sub, time=t + dt_ctrl)
    return trace.freeze()
