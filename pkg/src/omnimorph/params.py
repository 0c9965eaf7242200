"""Physical constants of the platform and their default calibration."""

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidParameterError

GRAVITY = 9.81

MASS = 1.3150
INERTIA_DIAG = (1.16e-2, 1.13e-2, 1.13e-2)
ARM_LENGTH = 0.20

# Hover must become impossible at 72 deg with all eight props at full thrust:
# 8 * max_thrust * cos(72 deg) = m * g.
HOVER_LIMIT_DEG = 72.0
MAX_PROP_THRUST = MASS * GRAVITY / (8.0 * np.cos(np.radians(HOVER_LIMIT_DEG)))

THRUST_COEFF = 1.3e-5
DRAG_TO_THRUST = 0.016

PROP_MASS = 0.01
PROP_RADIUS = 0.0635


def rod_inertia(mass, radius):
    """Spin inertia of a propeller modelled as a thin rod of length 2*radius."""
    return mass * (2.0 * radius) ** 2 / 12.0


@dataclass(frozen=True)
class PlatformParams:
    """Platform constants. Angles in rad, squared speeds in (rad/s)^2.

    ``u_max`` bounds each signed squared speed symmetrically (bi-directional
    propellers). ``alpha_rate`` is the largest tilt change per control period.
    """

    mass: float = MASS
    inertia: np.ndarray = field(default_factory=lambda: np.diag(INERTIA_DIAG))
    arm_length: float = ARM_LENGTH
    c_f: float = THRUST_COEFF
    c_tau: float = DRAG_TO_THRUST * THRUST_COEFF
    u_max: float = MAX_PROP_THRUST / THRUST_COEFF
    alpha_min: float = 0.0
    alpha_max: float = np.radians(60.0)
    alpha_rate: float = np.radians(0.5)
    dt_ctrl: float = 0.004
    prop_inertia: float = rod_inertia(PROP_MASS, PROP_RADIUS)
    gravity: float = GRAVITY

    def __post_init__(self):
        J = np.asarray(self.inertia, dtype=float)
        object.__setattr__(self, "inertia", J)
        positive = ("mass", "c_f", "c_tau", "arm_length", "u_max", "alpha_rate",
                    "dt_ctrl", "gravity")
        for name in positive:
            if not getattr(self, name) > 0:
                raise InvalidParameterError(f"{name} must be positive, got {getattr(self, name)}")
        if self.prop_inertia < 0:
            raise InvalidParameterError("prop_inertia must be non-negative")
        if not 0.0 <= self.alpha_min < self.alpha_max <= np.pi / 2 + 1e-12:
            raise InvalidParameterError(
                f"need 0 <= alpha_min < alpha_max <= pi/2, got [{self.alpha_min}, {self.alpha_max}]")
        if J.shape != (3, 3) or not np.allclose(J, J.T):
            raise InvalidParameterError("inertia must be a symmetric 3x3 matrix")
        if np.linalg.eigvalsh(J).min() <= 0:
            raise InvalidParameterError("inertia must be positive definite")

    @property
    def inertia_inv(self):
        inv = self.__dict__.get("_inertia_inv")
        if inv is None:
            inv = np.linalg.inv(self.inertia)
            object.__setattr__(self, "_inertia_inv", inv)
        return inv

    @property
    def drag_ratio(self):
        """c_tau / c_f, in metres."""
        return self.c_tau / self.c_f

    @property
    def weight(self):
        return self.mass * self.gravity

    @property
    def max_thrust(self):
        return self.c_f * self.u_max

    def with_(self, **changes):
        return replace(self, **changes)


def calibrated_params(c_f=THRUST_COEFF, hover_limit_deg=HOVER_LIMIT_DEG, **overrides):
    """Defaults with ``u_max`` chosen so hover is lost exactly at ``hover_limit_deg``.

    ``c_tau`` keeps the default drag/thrust ratio unless overridden.
    """
    mass = overrides.get("mass", MASS)
    gravity = overrides.get("gravity", GRAVITY)
    max_thrust = mass * gravity / (8.0 * np.cos(np.radians(hover_limit_deg)))
    overrides.setdefault("c_tau", DRAG_TO_THRUST * c_f)
    return PlatformParams(c_f=c_f, u_max=max_thrust / c_f, **overrides)
