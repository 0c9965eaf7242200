import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from omnimorph.geometry import E3
from omnimorph.params import PlatformParams
from omnimorph.state import axis_angle_matrix
from omnimorph.trajectory import (Mission, Segment, hold, line_to, paper_mission, quintic,
                                  rotate, sample)


@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_quintic_is_monotone_blend(a, b):
    sa, sb = quintic(a)[0], quintic(b)[0]
    assert 0.0 <= sa <= 1.0
    if a <= b:
        assert sa <= sb + 1e-15


def test_quintic_boundaries():
    assert quintic(0.0) == (0.0, 0.0, 0.0)
    assert quintic(1.0) == (1.0, 0.0, 0.0)


def test_hold_has_no_motion():
    m = Mission([hold(2.0)], p0=np.array([1.0, 2.0, 3.0]))
    ref = sample(m, 1.3)
    np.testing.assert_array_equal(ref.p_d, [1.0, 2.0, 3.0])
    for v in (ref.v_d, ref.a_d, ref.w_d, ref.dw_d):
        np.testing.assert_array_equal(v, 0.0)
    np.testing.assert_array_equal(ref.R_d, np.eye(3))


def test_line_midpoint_velocity():
    ref = sample(Mission([line_to((0, 0, 1), 2.0)]), 1.0)
    np.testing.assert_allclose(ref.v_d, [0, 0, 0.9375])


def test_full_turn_closes():
    m = Mission([rotate((1, 0, 0), 2 * np.pi, 4.0)])
    np.testing.assert_allclose(sample(m, 4.0).R_d, np.eye(3), atol=1e-12)
    ts = np.linspace(0, 4.0, 4001)
    rates = [sample(m, t).R_d @ sample(m, t).w_d for t in ts]
    turned = np.trapezoid(np.array(rates), ts, axis=0)
    np.testing.assert_allclose(turned, [2 * np.pi, 0, 0], atol=1e-5)


def test_segment_validation():
    with pytest.raises(ValueError):
        Segment("spin", 1.0)
    with pytest.raises(ValueError):
        hold(0.0)
    with pytest.raises(ValueError):
        rotate((1, 1, 0), 1.0, 1.0)


def test_paper_mission_layout():
    m = paper_mission()
    assert m.duration == pytest.approx(21.0)
    start, end = sample(m, 0.0), sample(m, m.duration)
    np.testing.assert_allclose(start.p_d, end.p_d, atol=1e-12)
    np.testing.assert_allclose(start.R_d, end.R_d, atol=1e-12)
    np.testing.assert_allclose(sample(m, 8.0).R_d, axis_angle_matrix([1.0, 0.0, 0.0], np.radians(25)),
                               atol=1e-12)
    np.testing.assert_allclose(sample(m, 8.0).p_d, [1.0, 0.0, 1.0], atol=1e-12)


def test_paper_mission_is_continuous_at_joints():
    m = paper_mission()
    for t in m.starts[1:]:
        a, b = sample(m, t - 1e-9), sample(m, t + 1e-9)
        np.testing.assert_allclose(a.p_d, b.p_d, atol=1e-7)
        np.testing.assert_allclose(a.v_d, b.v_d, atol=1e-6)
        np.testing.assert_allclose(a.R_d, b.R_d, atol=1e-7)
        assert np.linalg.norm(b.a_d) < 10.0


def test_rates_match_finite_differences():
    m = paper_mission()
    h = 1e-3
    for t in np.arange(0.5, 20.5, 0.7):
        a, b, c = sample(m, t - h), sample(m, t), sample(m, t + h)
        np.testing.assert_allclose((c.p_d - a.p_d) / (2 * h), b.v_d, atol=1e-4)
        # R_dot = R hat(w)  ->  w = vee(R' R_dot)
        S = b.R_d.T @ (c.R_d - a.R_d) / (2 * h)
        w_fd = np.array([S[2, 1], S[0, 2], S[1, 0]])
        np.testing.assert_allclose(w_fd, b.w_d, atol=1e-4)


def test_single_axis_rate_norm():
    seg = rotate((1, 0, 0), 2 * np.pi, 6.0)
    m = Mission([seg])
    for t in (0.5, 3.0, 5.2):
        _, ds, _ = quintic(t / 6.0)
        assert np.linalg.norm(sample(m, t).w_d) == pytest.approx(ds / 6.0 * 2 * np.pi)


def test_paper_mission_needs_every_actuation_mode():
    # Thrust the body must produce: m (a_d + g e3), expressed in the body frame.
    p = PlatformParams()
    m = paper_mission()
    along_z, lateral, inverted = False, False, False
    for t in np.arange(0.0, m.duration, 0.01):
        ref = sample(m, t)
        f = ref.R_d.T @ (p.mass * (ref.a_d + p.gravity * E3))
        horizontal = np.linalg.norm(f[:2])
        along_z |= horizontal < 1e-9 and f[2] > 0
        lateral |= horizontal > 0.1 * np.linalg.norm(f) and f[2] > 0
        inverted |= f[2] < 0
    assert along_z and lateral and inverted
