"""Structural properties: metric axioms, support additivity, isometry."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setlaw import (
    Box,
    Direction,
    DirectionGrid,
    Ellipsoid,
    Interval,
    Polytope,
    embed,
    hausdorff_distance,
    make_direction_grid,
    minkowski_sum,
    scalar_mul,
    support_function,
)

finite = st.floats(min_value=-100, max_value=100, allow_nan=False)


def _sorted_pair(a, b):
    return (a, b) if a <= b else (b, a)


@given(finite, finite, finite, finite, finite, finite)
@settings(max_examples=200, deadline=None)
def test_interval_metric_axioms(a1, a2, b1, b2, c1, c2):
    a = Interval(*_sorted_pair(a1, a2))
    b = Interval(*_sorted_pair(b1, b2))
    c = Interval(*_sorted_pair(c1, c2))
    dab = hausdorff_distance(a, b)
    assert dab >= 0.0
    assert (dab == 0.0) == (a == b)
    assert dab == hausdorff_distance(b, a)
    assert dab <= hausdorff_distance(a, c) + hausdorff_distance(c, b) + 1e-12


@given(finite, finite, finite, finite, st.floats(min_value=0, max_value=50))
@settings(max_examples=200, deadline=None)
def test_interval_positive_homogeneity(a1, a2, b1, b2, lam):
    body = Interval(*_sorted_pair(a1, a2))
    for u in (Direction((1.0,)), Direction((-1.0,))):
        lhs = support_function(scalar_mul(lam, body), u)
        rhs = lam * support_function(body, u)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def _random_body(rng, dim, kind):
    if kind == 0 and dim == 1:
        lo, hi = np.sort(rng.uniform(-5, 5, 2))
        return Interval(lo, hi)
    if kind == 1:
        lo = rng.uniform(-5, 0, dim)
        hi = lo + rng.uniform(0, 5, dim)
        return Box(tuple(lo), tuple(hi))
    if kind == 2:
        return Polytope(rng.uniform(-5, 5, (rng.integers(1, 8), dim)))
    return Ellipsoid(tuple(rng.uniform(-2, 2, dim)), tuple(rng.uniform(0.1, 3, dim)))


@pytest.mark.parametrize("dim", [1, 2])
def test_support_additivity_over_random_pairs(dim):
    rng = np.random.default_rng(7 + dim)
    grid = make_direction_grid(1, 2, "exact1d") if dim == 1 else \
        make_direction_grid(2, 32, "uniform_angles_2d")
    kinds = [0, 1, 2] if dim == 1 else [1, 2, 3]
    for _ in range(500):
        a = _random_body(rng, dim, int(rng.choice(kinds)))
        b = _random_body(rng, dim, int(rng.choice(kinds)))
        total = minkowski_sum(a, b, grid)
        for u in grid:
            lhs = support_function(total, u)
            rhs = support_function(a, u) + support_function(b, u)
            assert abs(lhs - rhs) <= 1e-9


def test_embedding_isometry_matches_grid_hausdorff_exactly():
    rng = np.random.default_rng(31)
    grid = make_direction_grid(2, 64, "uniform_angles_2d")
    for _ in range(100):
        a = _random_body(rng, 2, int(rng.choice([1, 2, 3])))
        b = _random_body(rng, 2, int(rng.choice([1, 2, 3])))
        via_metric = hausdorff_distance(a, b, grid)
        via_embedding = float(np.abs(embed(a, grid).values - embed(b, grid).values).max())
        assert via_metric == via_embedding  # independent assembly, same floats


def test_grid_refinement_never_decreases_distance():
    rng = np.random.default_rng(5)
    coarse = make_direction_grid(2, 32, "uniform_angles_2d")
    fine = make_direction_grid(2, 128, "uniform_angles_2d")
    # 32 | 128 at matching phase: every coarse direction is a fine direction
    assert all(fine.index_of(u) is not None for u in coarse)
    for _ in range(50):
        a = _random_body(rng, 2, int(rng.choice([1, 2, 3])))
        b = _random_body(rng, 2, int(rng.choice([1, 2, 3])))
        assert hausdorff_distance(a, b, fine) >= hausdorff_distance(a, b, coarse) - 1e-15


def test_metric_axioms_bulk_1d():
    rng = np.random.default_rng(12)
    for _ in range(2000):
        a, b, c = (Interval(*np.sort(rng.uniform(-10, 10, 2))) for _ in range(3))
        dab = hausdorff_distance(a, b)
        assert dab >= 0.0
        assert dab == hausdorff_distance(b, a)
        assert dab <= hausdorff_distance(a, c) + hausdorff_distance(c, b) + 1e-12


def test_custom_grid_accepts_non_antipodal_sets():
    grid = DirectionGrid([Direction((1.0, 0.0)), Direction((0.0, 1.0))])
    assert not grid.antipodal_closed
    assert len(grid) == 2
