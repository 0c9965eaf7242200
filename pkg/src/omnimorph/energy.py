"""Hover inputs, shaft power, energy bookkeeping and the morphing break-even curve."""

from dataclasses import dataclass, field

import numpy as np

from .errors import HoverDeficitError
from .geometry import allocation_matrix

PINV_CUTOFF = 1e-12
HOVER_TOL = 1e-9


def hover_input(params, layout, alpha, mass=None, basis=None):
    """Minimum-norm squared speeds holding [m g e3; 0] with the body level.

    Raises HoverDeficitError when the hover wrench is not in the range of A(alpha).
    """
    mass = params.mass if mass is None else mass
    A = allocation_matrix(params, layout, alpha, basis)
    target = np.array([0.0, 0.0, mass * params.gravity, 0.0, 0.0, 0.0])
    u = np.linalg.pinv(A, rcond=PINV_CUTOFF) @ target
    deficit = np.linalg.norm(A @ u - target)
    if deficit > HOVER_TOL * max(1.0, np.linalg.norm(target)):
        raise HoverDeficitError(
            f"hover wrench unreachable at alpha={np.degrees(alpha):.3f} deg "
            f"(residual {deficit:.3e} N)", deficit)
    return u


def motor_power(params, u_w):
    """Shaft power of all motors, c_tau * sum |u_i|^(3/2)."""
    return params.c_tau * float(np.sum(np.abs(u_w) ** 1.5))


def delta_m_bar(params, layout, alpha_f):
    """Largest tilting-mechanism mass fraction for which morphing beats a fixed tilt.

    Solves P(u_h(0, m0 (1 + d))) = P(u_h(alpha_f, m0)). Since u_h is linear
    in the mass, the solution is closed-form and independent of m0, c_f, c_tau.
    """
    fixed = np.sum(np.abs(hover_input(params, layout, alpha_f, mass=1.0)) ** 1.5)
    level = np.sum(np.abs(hover_input(params, layout, 0.0, mass=1.0)) ** 1.5)
    return float((fixed / level) ** (2.0 / 3.0) - 1.0)


@dataclass
class EnergyAccount:
    drag_energy: float = 0.0
    prop_accel_energy: float = 0.0
    power: list = field(default_factory=list)


def accumulate_energy(account, params, u_prev, u_cur, dt):
    """Add one period of drag energy and propeller spin-up energy to ``account``.

    Only increases in propeller kinetic energy are charged; motors are
    assumed not to regenerate.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    p = motor_power(params, u_cur)
    account.power.append(p)
    account.drag_energy += p * dt
    # w^2 = |u_w| for a signed squared speed u_w = w|w|
    dke = 0.5 * params.prop_inertia * (np.abs(u_cur) - np.abs(u_prev))
    account.prop_accel_energy += float(np.sum(np.maximum(dke, 0.0)))
    return account
