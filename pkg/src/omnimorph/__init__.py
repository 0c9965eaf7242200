"""Morphing octorotor: tilt-parameterized allocation, actuation and force-set
analysis, an optimal PD+QP tracking controller and a rigid-body simulator."""

from .actuation import ActuationTag, classify_actuation
from .controller import DEFAULT_GAINS, WEIGHT_PRESETS, Controller, ControlGains, OptWeights
from .dynamics import PlantConfig, Scenario, rk4_step, simulate
from .energy import delta_m_bar, hover_input, motor_power
from .errors import (ControllerFault, HoverDeficitError, InvalidParameterError,
                     NonConvergenceError, OmniMorphError, SimulationDiverged)
from .geometry import PropellerLayout, allocation_matrix, layout_for, propeller_rotation
from .params import PlatformParams, calibrated_params
from .trace import SimTrace, read_trace_csv, summarize, write_trace_csv
from .trajectory import Mission, paper_mission, sample
from .wrench_sets import inscribed_force_radius, omni_alpha_interval, support_force

__all__ = [
    "ActuationTag", "classify_actuation", "DEFAULT_GAINS", "WEIGHT_PRESETS", "Controller",
    "ControlGains", "OptWeights", "PlantConfig", "Scenario", "rk4_step", "simulate",
    "delta_m_bar", "hover_input", "motor_power", "ControllerFault", "HoverDeficitError",
    "InvalidParameterError", "NonConvergenceError", "OmniMorphError", "SimulationDiverged",
    "PropellerLayout", "allocation_matrix", "layout_for", "propeller_rotation",
    "PlatformParams", "calibrated_params", "SimTrace", "read_trace_csv", "summarize",
    "write_trace_csv", "Mission", "paper_mission", "sample", "inscribed_force_radius",
    "omni_alpha_interval", "support_force",
]
