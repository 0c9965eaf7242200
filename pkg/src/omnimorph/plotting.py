"""PNG figures for the CLI reports. Uses the non-interactive Agg backend."""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "font.size": 9,
    "legend.fontsize": 8,
}


def _save(fig, path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_trace(trace, directory, label=""):
    """Tracking, tilt/inputs and energy figures for one simulation; returns the paths."""
    paths = []
    t = trace.t
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(3, 1, figsize=(6.5, 6), sharex=True)
        for k, (ax, name) in enumerate(zip(axes, "xyz")):
            ax.plot(t, trace.p_d[:, k], "k--", lw=1, label="reference")
            ax.plot(t, trace.p[:, k], lw=1.2, label="actual")
            ax.set_ylabel(f"{name} [m]")
        axes[0].legend(loc="upper right")
        axes[0].set_title(f"Position {label}".strip())
        axes[-1].set_xlabel("t [s]")
        paths.append(_save(fig, os.path.join(directory, "position.png")))

        fig, axes = plt.subplots(3, 1, figsize=(6.5, 6), sharex=True)
        axes[0].plot(t, trace.position_errors(), lw=1)
        axes[0].set_ylabel("|p_d - p| [m]")
        axes[1].plot(t, trace.attitude_errors(), lw=1)
        axes[1].set_ylabel("|e_R|")
        axes[2].plot(t, np.degrees(trace.alpha), lw=1.2)
        axes[2].set_ylabel("alpha [deg]")
        axes[2].set_xlabel("t [s]")
        axes[0].set_title(f"Tracking errors and tilt {label}".strip())
        paths.append(_save(fig, os.path.join(directory, "errors_alpha.png")))

        fig, axes = plt.subplots(2, 1, figsize=(6.5, 5), sharex=True)
        axes[0].plot(t, trace.u_w, lw=0.8)
        axes[0].set_ylabel("u_w [(rad/s)^2]")
        axes[0].set_title(f"Inputs and energy {label}".strip())
        axes[1].plot(t, trace.E_drag, lw=1.2, label="drag")
        axes[1].plot(t, trace.E_accel, lw=1.2, label="propeller acceleration")
        axes[1].set_ylabel("energy [J]")
        axes[1].set_xlabel("t [s]")
        axes[1].legend(loc="upper left")
        paths.append(_save(fig, os.path.join(directory, "inputs_energy.png")))
    return paths


def plot_rank(alpha_deg, ranks, path):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.5, 3))
        ax.step(alpha_deg, ranks, where="mid")
        ax.set_xlabel("alpha [deg]")
        ax.set_ylabel("rank")
        ax.set_yticks(range(0, 7))
        return _save(fig, path)


def plot_delta_m(alpha_deg, delta, path):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.5, 3.2))
        ax.plot(alpha_deg, 100.0 * np.asarray(delta))
        ax.set_xlabel("fixed tilt alpha_f [deg]")
        ax.set_ylabel("break-even mechanism mass [%]")
        return _save(fig, path)


def plot_radius(alpha_deg, radius, weight, path):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.5, 3.2))
        ax.plot(alpha_deg, radius, label="inscribed radius")
        ax.axhline(weight, color="k", ls="--", lw=1, label="weight")
        ax.set_xlabel("alpha [deg]")
        ax.set_ylabel("force [N]")
        ax.legend()
        return _save(fig, path)


def plot_force_set(points, path, title=""):
    """Scatter of force-set boundary samples, one colour per tilt. ``points`` maps alpha_deg -> (n, 3)."""
    with plt.rc_context(STYLE):
        fig = plt.figure(figsize=(5.5, 5))
        ax = fig.add_subplot(projection="3d")
        for alpha_deg, pts in points.items():
            ax.scatter(pts[:, 0], pts[:, 1], pts[:, 2], s=3, label=f"{alpha_deg:g} deg")
        ax.set_xlabel("f_x [N]")
        ax.set_ylabel("f_y [N]")
        ax.set_zlabel("f_z [N]")
        ax.legend(loc="upper left")
        if title:
            ax.set_title(title)
        return _save(fig, path)
