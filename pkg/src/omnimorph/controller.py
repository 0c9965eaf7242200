"""PD + feedforward outer loop and the tilt-searching QP inner loop.

Each control step solves the reduced box QP at three candidate tilt angles
(previous, and one rate step either side), then keeps the cheapest one.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ControllerFault, NonConvergenceError
from .geometry import allocation_basis, allocation_matrix, vee
from .optimizer import BoxQP, solve_box_qp


@dataclass(frozen=True)
class ControlGains:
    """Diagonal PD gains: Kp1 on velocity error, Kp2 on position error,
    Kw1 on angular-velocity error, Kw2 on attitude error."""

    Kp1: np.ndarray
    Kp2: np.ndarray
    Kw1: np.ndarray
    Kw2: np.ndarray

    def __post_init__(self):
        for name in ("Kp1", "Kp2", "Kw1", "Kw2"):
            K = np.asarray(getattr(self, name), dtype=float)
            if K.ndim == 1:
                K = np.diag(K)
            if K.shape != (3, 3) or np.any(np.diag(K) <= 0) or np.any(K != np.diag(np.diag(K))):
                raise ValueError(f"{name} must be diagonal with positive entries")
            object.__setattr__(self, name, K)


@dataclass(frozen=True)
class OptWeights:
    """W1 input norm (8x8), W2 acceleration tracking (6x6), W3 input rate (8x8)."""

    W1: np.ndarray
    W2: np.ndarray
    W3: np.ndarray

    def __post_init__(self):
        for name, size in (("W1", 8), ("W2", 6), ("W3", 8)):
            W = np.asarray(getattr(self, name), dtype=float)
            if W.ndim == 1:
                W = np.diag(W)
            if W.shape != (size, size) or not np.allclose(W, W.T):
                raise ValueError(f"{name} must be a symmetric {size}x{size} matrix")
            if np.linalg.eigvalsh(W).min() <= 0:
                raise ValueError(f"{name} must be positive definite")
            object.__setattr__(self, name, W)


DEFAULT_GAINS = ControlGains(
    Kp1=np.full(3, 30.0), Kp2=np.full(3, 300.0), Kw1=np.full(3, 40.0), Kw2=np.full(3, 100.0))

WEIGHT_PRESETS = {
    "case-a": OptWeights(
        W1=np.full(8, 1e-8), W2=np.array([3e6, 3e6, 3e6, 1e3, 1e3, 1e3]), W3=np.full(8, 1e-5)),
    "case-b": OptWeights(
        W1=np.full(8, 1e-5), W2=np.array([3e4, 3e4, 3e4, 10.0, 10.0, 10.0]), W3=np.full(8, 1e-5)),
}


@dataclass
class ControllerState:
    alpha_prev: float
    u_w_prev: np.ndarray
    warm_start: np.ndarray = None


@dataclass
class ControlSolution:
    alpha: float
    u_w: np.ndarray
    accel: np.ndarray
    cost: float
    candidates: list = field(default_factory=list)


def attitude_error(R, R_d):
    """0.5 * vee(R' R_d - R_d' R)."""
    return 0.5 * vee(R.T @ R_d - R_d.T @ R)


def reference_accel(state, ref, gains):
    """Desired [linear accel (world); angular accel (body)] from PD plus feedforward."""
    lin = ref.a_d + gains.Kp1 @ (ref.v_d - state.v) + gains.Kp2 @ (ref.p_d - state.p)
    ang = (ref.dw_d + gains.Kw1 @ (ref.w_d - state.w)
           + gains.Kw2 @ attitude_error(state.R, ref.R_d))
    return np.concatenate([lin, ang])


def _inverse_inertia(params):
    Minv = np.zeros((6, 6))
    Minv[:3, :3] = np.eye(3) / params.mass
    Minv[3:, 3:] = np.linalg.inv(params.inertia)
    return Minv


def _bias_accel(params, state, Minv):
    """M^-1 h with h = [-m g e3; -w x J w]."""
    h = np.concatenate([
        [0.0, 0.0, -params.mass * params.gravity],
        -np.cross(state.w, params.inertia @ state.w),
    ])
    return Minv @ h


def _input_map(params, state, A, Minv):
    JR_A = A.copy()
    JR_A[:3] = state.R @ A[:3]
    return Minv @ JR_A


def build_reduced_qp(params, layout, alpha_bar, state, qdd_ref, weights, u_w_prev, basis=None):
    """Box QP in u_w after eliminating the accelerations through the dynamics.

    Returns ``(qp, G, r, const)`` with realized accel ``G u + M^-1 h`` and
    total cost ``qp.cost(u) + const`` = J1 + J2 + J3.
    """
    A = allocation_matrix(params, layout, alpha_bar, basis)
    Minv = _inverse_inertia(params)
    G = _input_map(params, state, A, Minv)
    r = qdd_ref - _bias_accel(params, state, Minv)
    W1, W2, W3 = weights.W1, weights.W2, weights.W3
    GtW2 = G.T @ W2
    H = 2.0 * (W1 + GtW2 @ G + W3)
    H = 0.5 * (H + H.T)
    g = -2.0 * (GtW2 @ r + W3 @ u_w_prev)
    const = float(r @ W2 @ r + u_w_prev @ W3 @ u_w_prev)
    n = layout.count
    qp = BoxQP(H, g, np.full(n, -params.u_max), np.full(n, params.u_max))
    return qp, G, r, const


def candidate_alphas(params, alpha_prev, fixed_alpha=None):
    """Distinct tilt candidates, clamped to the mechanical range, in ascending order."""
    if fixed_alpha is not None:
        return [float(fixed_alpha)]
    eps = params.alpha_rate
    raw = np.clip([alpha_prev - eps, alpha_prev, alpha_prev + eps], params.alpha_min, params.alpha_max)
    return sorted(set(float(a) for a in raw))


class Controller:
    """Stateful wrapper that caches the allocation basis and inverse inertia."""

    def __init__(self, params, layout, gains, weights, fixed_alpha=None):
        self.params = params
        self.layout = layout
        self.gains = gains
        self.weights = weights
        self.fixed_alpha = fixed_alpha
        self.basis = allocation_basis(params, layout)
        self.Minv = _inverse_inertia(params)

    def step(self, state, ref, ctrl_state):
        p = self.params
        qdd_ref = reference_accel(state, ref, self.gains)
        bias = _bias_accel(p, state, self.Minv)
        r = qdd_ref - bias
        W1, W2, W3 = self.weights.W1, self.weights.W2, self.weights.W3
        u_prev = ctrl_state.u_w_prev
        const = float(r @ W2 @ r + u_prev @ W3 @ u_prev)
        # Solve in normalized inputs x = u / u_max for conditioning.
        s = p.u_max
        lower, upper = -np.ones(8), np.ones(8)

        best = None
        results = []
        for alpha in candidate_alphas(p, ctrl_state.alpha_prev, self.fixed_alpha):
            A = allocation_matrix(p, self.layout, alpha, self.basis)
            G = _input_map(p, state, A, self.Minv)
            GtW2 = G.T @ W2
            H = 2.0 * (W1 + GtW2 @ G + W3) * s * s
            g = -2.0 * (GtW2 @ r + W3 @ u_prev) * s
            qp = BoxQP(0.5 * (H + H.T), g, lower, upper)
            try:
                sol = solve_box_qp(qp, warm_active=ctrl_state.warm_start)
            except NonConvergenceError:
                results.append((alpha, np.inf))
                continue
            cost = sol.cost + const
            results.append((alpha, cost))
            if best is None or cost < best[1]:
                best = (alpha, cost, sol, G)
        if best is None:
            raise ControllerFault("QP failed for every tilt candidate")

        alpha, cost, sol, G = best
        u = s * sol.x
        ctrl_state.alpha_prev = alpha
        ctrl_state.u_w_prev = u
        ctrl_state.warm_start = sol.active
        return ControlSolution(alpha=alpha, u_w=u, accel=G @ u + bias, cost=cost, candidates=results)


def control_step(params, layout, gains, weights, state, ref, ctrl_state, fixed_alpha=None):
    """One controller update; mutates ``ctrl_state``."""
    return Controller(params, layout, gains, weights, fixed_alpha).step(state, ref, ctrl_state)
