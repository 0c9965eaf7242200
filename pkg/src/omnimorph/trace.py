"""Simulation trace container, summary metrics and the CSV trace format."""

import csv
from dataclasses import dataclass

import numpy as np

from .state import quat_wxyz

SCHEMA = "omnimorph-trace v1"

COLUMNS = (
    ["t"]
    + [f"p_{a}" for a in "xyz"]
    + [f"pd_{a}" for a in "xyz"]
    + [f"q_{a}" for a in "wxyz"]
    + [f"qd_{a}" for a in "wxyz"]
    + ["alpha"]
    + [f"u_{i}" for i in range(1, 9)]
    + ["f_x", "f_y", "f_z", "tau_x", "tau_y", "tau_z"]
    + ["P_drag", "E_drag", "E_accel"]
)

_GROUPS = {
    "t": (0, 1), "p": (1, 4), "p_d": (4, 7), "q": (7, 11), "q_d": (11, 15),
    "alpha": (15, 16), "u_w": (16, 24), "wrench": (24, 30),
    "P_drag": (30, 31), "E_drag": (31, 32), "E_accel": (32, 33),
}


def _attitude_error_norm(q, q_d):
    # |e_R| = |sin(theta)| * |axis| ... computed through the rotation matrices
    from scipy.spatial.transform import Rotation
    from .controller import attitude_error
    R = Rotation.from_quat(q[[1, 2, 3, 0]]).as_matrix()
    R_d = Rotation.from_quat(q_d[[1, 2, 3, 0]]).as_matrix()
    return np.linalg.norm(attitude_error(R, R_d))


@dataclass
class SimTrace:
    """One row per control period; ``data`` has the columns in COLUMNS."""

    data: np.ndarray

    @classmethod
    def empty(cls):
        trace = cls(data=None)
        trace._rows = []
        return trace

    def append(self, t, state, ref, alpha, u_w, wrench, account):
        row = np.empty(len(COLUMNS))
        row[0] = t
        row[1:4] = state.p
        row[4:7] = ref.p_d
        row[7:11] = quat_wxyz(state.R)
        row[11:15] = quat_wxyz(ref.R_d)
        row[15] = alpha
        row[16:24] = u_w
        row[24:30] = wrench
        row[30] = account.power[-1]
        row[31] = account.drag_energy
        row[32] = account.prop_accel_energy
        self._rows.append(row)

    def freeze(self):
        return SimTrace(data=np.array(self._rows).reshape(-1, len(COLUMNS)))

    def __getattr__(self, name):
        if name in _GROUPS:
            a, b = _GROUPS[name]
            block = self.data[:, a:b]
            return block[:, 0] if b - a == 1 else block
        raise AttributeError(name)

    def __len__(self):
        return self.data.shape[0]

    def position_errors(self):
        return np.linalg.norm(self.p_d - self.p, axis=1)

    def attitude_errors(self):
        return np.array([_attitude_error_norm(q, qd) for q, qd in zip(self.q, self.q_d)])


@dataclass(frozen=True)
class Summary:
    mean_position_error: float
    mean_attitude_error: float
    drag_energy: float
    prop_accel_energy: float
    final_alpha: float

    def rows(self):
        return [
            ("mean position error [m]", self.mean_position_error),
            ("mean attitude error [-]", self.mean_attitude_error),
            ("drag energy [J]", self.drag_energy),
            ("propeller acceleration energy [J]", self.prop_accel_energy),
            ("final alpha [deg]", np.degrees(self.final_alpha)),
        ]


def summarize(trace):
    return Summary(
        mean_position_error=float(trace.position_errors().mean()),
        mean_attitude_error=float(trace.attitude_errors().mean()),
        drag_energy=float(trace.E_drag[-1]),
        prop_accel_energy=float(trace.E_accel[-1]),
        final_alpha=float(trace.alpha[-1]),
    )


def write_trace_csv(trace, path, columns=None):
    """Write the trace; values use repr() so re-reading is bit-exact."""
    columns = list(COLUMNS) if columns is None else list(columns)
    idx = [COLUMNS.index(c) for c in columns]
    with open(path, "w", newline="") as fh:
        fh.write(f"# {SCHEMA}\n")
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in trace.data[:, idx]:
            writer.writerow([repr(float(x)) for x in row])


def read_trace_csv(path):
    """Read a full-schema trace written by write_trace_csv."""
    with open(path, newline="") as fh:
        first = fh.readline().strip()
        if first != f"# {SCHEMA}":
            raise ValueError(f"{path}: expected schema header '# {SCHEMA}', got {first!r}")
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != tuple(COLUMNS):
            raise ValueError(f"{path}: only full-schema traces can be read back")
        rows = [[float(x) for x in row] for row in reader]
    return SimTrace(data=np.array(rows).reshape(-1, len(COLUMNS)))
