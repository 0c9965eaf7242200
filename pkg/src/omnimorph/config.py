"""Scenario files: TOML with [platform], [controller], [mission], [plant], [output].

Every section and key is optional; omitted values fall back to the defaults.
Angles are given in degrees in the file (keys ending in ``_deg``).

    name = "case-b-degraded"

    [platform]
    c_f = 1.0e-5

    [controller]
    weights = "case-b"          # or a table with W1, W2, W3 diagonals
    W3 = 1e-4                   # optional scalar override of the W3 diagonal
    fixed_alpha_deg = 45.0

    [mission]
    name = "paper"              # or [[mission.segments]] tables

    [plant]
    cf_scale = 0.7

    [output]
    columns = ["t", "p_x", "p_y", "p_z", "alpha"]
"""

import re
from dataclasses import dataclass, field

import numpy as np
import tomli

from .controller import DEFAULT_GAINS, WEIGHT_PRESETS, ControlGains, OptWeights
from .dynamics import PlantConfig, Scenario
from .errors import InvalidParameterError
from .params import PlatformParams
from .trace import COLUMNS
from .trajectory import MISSIONS, Mission, Segment

GAIN_PRESETS = {"default": DEFAULT_GAINS}


class ConfigError(ValueError):
    """Bad scenario file; ``where`` names the offending key, ``line`` its line if known."""

    def __init__(self, message, where=None, line=None, path=None):
        self.where, self.line, self.path = where, line, path
        loc = path or "<config>"
        if line is not None:
            loc += f":{line}"
        if where:
            loc += f" [{where}]"
        super().__init__(f"{loc}: {message}")


@dataclass
class ScenarioConfig:
    name: str
    scenario: Scenario
    columns: list = field(default_factory=lambda: list(COLUMNS))
    directory: str = None


_PLATFORM_KEYS = {
    "mass", "inertia_diag", "arm_length", "c_f", "c_tau", "u_max", "alpha_min_deg",
    "alpha_max_deg", "alpha_rate_deg", "dt_ctrl", "prop_inertia", "gravity",
}
_PLANT_KEYS = {"cf_scale", "dt_sim", "sim_steps_per_ctrl", "divergence_radius"}
_CONTROLLER_KEYS = {"gains", "weights", "W3", "fixed_alpha_deg", "alpha0_deg"}
_MISSION_KEYS = {"name", "duration", "segments"}
_OUTPUT_KEYS = {"directory", "columns"}
_TOP_KEYS = {"name", "platform", "controller", "mission", "plant", "output"}


def _key_line(text, key):
    """Line of the first ``key =`` assignment, for diagnostics."""
    if text is None:
        return None
    leaf = key.split(".")[-1]
    pattern = re.compile(rf"^\s*{re.escape(leaf)}\s*=")
    for n, line in enumerate(text.splitlines(), 1):
        if pattern.match(line):
            return n
    return None


class _Reader:
    def __init__(self, text, path):
        self.text, self.path = text, path

    def fail(self, message, where):
        raise ConfigError(message, where, _key_line(self.text, where), self.path)

    def section(self, data, name, allowed):
        sec = data.get(name, {})
        if not isinstance(sec, dict):
            self.fail("expected a table", name)
        for key in sec:
            if key not in allowed:
                self.fail(f"unknown key (allowed: {', '.join(sorted(allowed))})", f"{name}.{key}")
        return sec

    def number(self, sec, name, key, default=None):
        if key not in sec:
            return default
        value = sec[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(f"expected a number, got {value!r}", f"{name}.{key}")
        return float(value)

    def vector(self, sec, name, key, size):
        value = sec[key]
        if (not isinstance(value, list) or len(value) != size
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)):
            self.fail(f"expected a list of {size} numbers", f"{name}.{key}")
        return np.array(value, dtype=float)


def _platform(r, data):
    sec = r.section(data, "platform", _PLATFORM_KEYS)
    kw = {}
    for key in ("mass", "arm_length", "c_f", "c_tau", "u_max", "dt_ctrl", "prop_inertia", "gravity"):
        if key in sec:
            kw[key] = r.number(sec, "platform", key)
    for key in ("alpha_min", "alpha_max", "alpha_rate"):
        if f"{key}_deg" in sec:
            kw[key] = np.radians(r.number(sec, "platform", f"{key}_deg"))
    if "inertia_diag" in sec:
        kw["inertia"] = np.diag(r.vector(sec, "platform", "inertia_diag", 3))
    if "c_f" in kw and "c_tau" not in kw:
        kw["c_tau"] = PlatformParams.__dataclass_fields__["c_tau"].default / \
            PlatformParams.__dataclass_fields__["c_f"].default * kw["c_f"]
    try:
        return PlatformParams(**kw)
    except InvalidParameterError as exc:
        field_name = str(exc).split()[0]
        r.fail(str(exc), f"platform.{field_name}")


def _controller(r, data):
    sec = r.section(data, "controller", _CONTROLLER_KEYS)
    gains = sec.get("gains", "default")
    if isinstance(gains, str):
        if gains not in GAIN_PRESETS:
            r.fail(f"unknown gains preset {gains!r}", "controller.gains")
        gains = GAIN_PRESETS[gains]
    elif isinstance(gains, dict):
        try:
            gains = ControlGains(**{k: np.asarray(v, dtype=float) for k, v in gains.items()})
        except (TypeError, ValueError) as exc:
            r.fail(str(exc), "controller.gains")
    else:
        r.fail("expected a preset name or a table", "controller.gains")

    weights = sec.get("weights", "case-a")
    if isinstance(weights, str):
        if weights not in WEIGHT_PRESETS:
            r.fail(f"unknown weights preset {weights!r} (have {', '.join(WEIGHT_PRESETS)})",
                   "controller.weights")
        weights = WEIGHT_PRESETS[weights]
    elif isinstance(weights, dict):
        try:
            weights = OptWeights(**{k: np.asarray(v, dtype=float) for k, v in weights.items()})
        except (TypeError, ValueError) as exc:
            r.fail(str(exc), "controller.weights")
    else:
        r.fail("expected a preset name or a table", "controller.weights")
    if "W3" in sec:
        w3 = r.number(sec, "controller", "W3")
        if not w3 > 0:
            r.fail("must be positive", "controller.W3")
        weights = OptWeights(weights.W1, weights.W2, np.full(8, w3))

    fixed = sec.get("fixed_alpha_deg")
    fixed = None if fixed is None else np.radians(r.number(sec, "controller", "fixed_alpha_deg"))
    alpha0 = sec.get("alpha0_deg")
    alpha0 = None if alpha0 is None else np.radians(r.number(sec, "controller", "alpha0_deg"))
    return gains, weights, fixed, alpha0


def _segment(r, raw, k):
    where = f"mission.segments[{k}]"
    if not isinstance(raw, dict):
        r.fail("expected a table", where)
    kind = raw.get("kind")
    kw = {"kind": kind, "duration": raw.get("duration")}
    if "delta" in raw:
        kw["delta"] = tuple(r.vector(raw, where, "delta", 3))
    if "axis" in raw:
        kw["axis"] = tuple(r.vector(raw, where, "axis", 3))
    if "angle_deg" in raw:
        kw["angle"] = np.radians(r.number(raw, where, "angle_deg"))
    extra = set(raw) - {"kind", "duration", "delta", "axis", "angle_deg"}
    if extra:
        r.fail(f"unknown segment keys {sorted(extra)}", where)
    try:
        return Segment(**kw)
    except (TypeError, ValueError) as exc:
        r.fail(str(exc), where)


def _mission(r, data):
    sec = r.section(data, "mission", _MISSION_KEYS)
    if "segments" in sec and "name" in sec:
        r.fail("give either a mission name or segments, not both", "mission.segments")
    if "segments" in sec:
        segs = sec["segments"]
        if not isinstance(segs, list) or not segs:
            r.fail("expected a non-empty array of tables", "mission.segments")
        mission = Mission([_segment(r, s, k) for k, s in enumerate(segs)])
    else:
        name = sec.get("name", "paper")
        if name not in MISSIONS:
            r.fail(f"unknown mission {name!r} (have {', '.join(MISSIONS)})", "mission.name")
        mission = MISSIONS[name]()
    duration = r.number(sec, "mission", "duration")
    if duration is not None and not duration > 0:
        r.fail("must be positive", "mission.duration")
    return mission, duration


def _plant(r, data, params):
    sec = r.section(data, "plant", _PLANT_KEYS)
    kw = {}
    for key in ("cf_scale", "dt_sim", "divergence_radius"):
        if key in sec:
            kw[key] = r.number(sec, "plant", key)
    if "sim_steps_per_ctrl" in sec:
        steps = sec["sim_steps_per_ctrl"]
        if not isinstance(steps, int) or isinstance(steps, bool):
            r.fail("expected an integer", "plant.sim_steps_per_ctrl")
        kw["sim_steps_per_ctrl"] = steps
    elif "dt_sim" in kw:
        kw["sim_steps_per_ctrl"] = max(1, int(round(params.dt_ctrl / kw["dt_sim"])))
    try:
        return PlantConfig(**kw)
    except ValueError as exc:
        r.fail(str(exc), "plant." + str(exc).split()[0])


def scenario_from_dict(data, name="scenario", text=None, path=None):
    r = _Reader(text, path)
    for key in data:
        if key not in _TOP_KEYS:
            r.fail(f"unknown top-level key (allowed: {', '.join(sorted(_TOP_KEYS))})", key)
    name = data.get("name", name)
    params = _platform(r, data)
    gains, weights, fixed, alpha0 = _controller(r, data)
    mission, duration = _mission(r, data)
    plant = _plant(r, data, params)
    out = r.section(data, "output", _OUTPUT_KEYS)
    columns = out.get("columns", list(COLUMNS))
    if not isinstance(columns, list) or not columns:
        r.fail("expected a non-empty list of column names", "output.columns")
    bad = [c for c in columns if c not in COLUMNS]
    if bad:
        r.fail(f"unknown trace columns {bad}", "output.columns")
    try:
        scenario = Scenario(params=params, gains=gains, weights=weights, mission=mission,
                            plant=plant, duration=duration, fixed_alpha=fixed, alpha0=alpha0,
                            name=name)
    except ValueError as exc:
        r.fail(str(exc), "plant")
    return ScenarioConfig(name=name, scenario=scenario, columns=columns,
                          directory=out.get("directory"))


def load_scenario(path):
    """Parse and validate a scenario file; raises ConfigError with location info."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigError(str(exc), path=str(path)) from exc
    text = raw.decode("utf-8", errors="replace")
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        line = getattr(exc, "lineno", None)
        if line is None:
            m = re.search(r"line (\d+)", str(exc))
            line = int(m.group(1)) if m else None
        raise ConfigError(f"syntax error: {exc}", line=line, path=str(path)) from exc
    stem = str(path).rsplit("/", 1)[-1].rsplit(".", 1)[0]
    return scenario_from_dict(data, name=stem, text=text, path=str(path))


def preset_scenario(preset, **overrides):
    """Scenario for a weights preset name on the default mission."""
    if preset not in WEIGHT_PRESETS:
        raise ConfigError(f"unknown preset {preset!r} (have {', '.join(WEIGHT_PRESETS)})",
                          where="preset")
    data = {"controller": {"weights": preset}}
    for section, values in overrides.items():
        data.setdefault(section, {}).update(values)
    return scenario_from_dict(data, name=preset)
