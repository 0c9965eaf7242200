import numpy as np
import pytest

from omnimorph.actuation import (ActuationTag, classify_actuation, full_allocation,
                                 numerical_rank)
from omnimorph.geometry import allocation_matrix


def test_numerical_rank_basics(rng):
    assert numerical_rank(np.eye(6)) == 6
    a, b = rng.normal(size=6), rng.normal(size=9)
    assert numerical_rank(np.outer(a, b)) == 1
    assert numerical_rank(np.zeros((6, 9))) == 0


@pytest.mark.parametrize("tol", [0.0, 1.0, -1e-3])
def test_numerical_rank_rejects_bad_tolerance(tol):
    with pytest.raises(ValueError):
        numerical_rank(np.eye(3), tol)


def test_full_allocation_blocks(params, layout, rng):
    u = rng.uniform(-params.u_max, params.u_max, 8)
    F = full_allocation(params, layout, u, 0.4)
    assert F.shape == (6, 9)
    np.testing.assert_array_equal(F[:, :8], allocation_matrix(params, layout, 0.4))
    np.testing.assert_array_equal(full_allocation(params, layout, np.zeros(8), 0.4)[:, 8], 0.0)


def test_allocation_rank_table(params, layout):
    zero = np.zeros(8)
    assert classify_actuation(params, layout, 0.0, zero).rank == 4
    for deg in range(1, 90):
        assert classify_actuation(params, layout, np.radians(deg), zero).rank == 6
    assert classify_actuation(params, layout, np.pi / 2, zero).rank == 5


def test_level_tilt_special_cases(params, layout, rng):
    equal = classify_actuation(params, layout, 0.0, np.full(8, 1e5))
    assert equal.rank == 4
    assert equal.tag is ActuationTag.UNDERACTUATED
    mixed = classify_actuation(params, layout, 0.0, rng.uniform(-1e5, 1e5, 8))
    assert mixed.rank == 5
    assert mixed.tag is ActuationTag.REDUCED_MANIFOLD_5


def test_sideways_tilt_with_spinning_props_is_fully_actuated(params, layout, rng):
    cls = classify_actuation(params, layout, np.pi / 2, rng.uniform(-1e5, 1e5, 8))
    assert cls.allocation_rank == 5
    assert cls.rank == 6
    assert cls.tag is ActuationTag.FULLY_ACTUATED


def test_intermediate_tilt_is_redundant(params, layout):
    cls = classify_actuation(params, layout, np.pi / 4, np.zeros(8))
    assert cls.tag is ActuationTag.FULLY_ACTUATED_REDUNDANT
    assert cls.singular_values.shape == (6,)
    assert np.count_nonzero(cls.singular_values > 1e-9 * cls.singular_values[0]) == cls.rank
