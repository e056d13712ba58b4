import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modap import (
    FeasiblePointError,
    InequalitySystem,
    eps_membership,
    eps_satisfies,
    fixed_step_direction,
    max_relative_violation,
    orthogonal_projection,
    positive_slice,
    pseudo_projection,
    reflection_vector,
    residual,
    vector_norm,
)

BOX = InequalitySystem([[1.0, 0.0], [0.0, 1.0]], [1.0, 1.0])  # x1 <= 1, x2 <= 1


def system_strategy(max_n=5, max_m=6):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        m = draw(st.integers(1, max_m))
        coef = st.floats(min_value=-5, max_value=5, allow_nan=False)
        a = np.array(
            [[draw(coef) for _ in range(n)] for _ in range(m)], dtype=float
        )
        # keep rows well away from zero so norms stay meaningful
        for i in range(m):
            if np.linalg.norm(a[i]) < 1e-2:
                a[i, i % n] += 1.0
        b = np.array([draw(coef) for _ in range(m)], dtype=float)
        x = np.array([draw(coef) for _ in range(n)], dtype=float)
        return InequalitySystem(a, b), x

    return build()


class TestInequalitySystem:
    def test_cached_norms_match_fresh(self):
        a = np.array([[3.0, 4.0], [1.0, -2.0], [0.5, 0.0]])
        sys = InequalitySystem(a, [1.0, 2.0, 3.0])
        fresh = (a * a).sum(axis=1)
        assert np.allclose(sys.row_norms_sq, fresh, rtol=1e-12)

    def test_zero_row_rejected_with_index(self):
        with pytest.raises(ValueError, match="row 1"):
            InequalitySystem([[1.0, 0.0], [0.0, 0.0]], [1.0, 1.0])

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            InequalitySystem([[1.0, 0.0]], [1.0, 2.0])

    def test_with_rhs_shares_rows(self):
        other = BOX.with_rhs([2.0, 3.0])
        assert other.a is BOX.a
        assert other.row_norms_sq is BOX.row_norms_sq
        assert np.array_equal(other.b, [2.0, 3.0])


class TestResidual:
    def test_hand_dot_product(self):
        sys = InequalitySystem([[3.0, 4.0]], [5.0])
        assert residual(sys, 0, [1.0, 1.0]) == 2.0

    def test_point_on_hyperplane(self):
        sys = InequalitySystem([[1.0, 0.0]], [0.0])
        assert residual(sys, 0, [0.0, 0.0]) == 0.0

    def test_feasible_interior(self):
        sys = InequalitySystem([[1.0, 0.0]], [1.0])
        assert residual(sys, 0, [0.5, 7.0]) == -0.5

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            residual(BOX, 2, [0.0, 0.0])
        with pytest.raises(IndexError):
            residual(BOX, -1, [0.0, 0.0])

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            residual(BOX, 0, [0.0, 0.0, 0.0])


class TestReflectionAndProjection:
    def test_reflection_hand_value(self):
        sys = InequalitySystem([[0.0, 2.0]], [2.0])
        assert np.array_equal(reflection_vector(sys, 0, [0.0, 3.0]), [0.0, 2.0])

    def test_reflection_zero_on_hyperplane(self):
        sys = InequalitySystem([[1.0, 2.0]], [5.0])
        assert np.array_equal(reflection_vector(sys, 0, [1.0, 2.0]), [0.0, 0.0])

    def test_reflection_points_away_for_interior(self):
        sys = InequalitySystem([[1.0, 0.0]], [0.0])
        assert np.array_equal(reflection_vector(sys, 0, [-2.0, 5.0]), [-2.0, 0.0])

    def test_projection_hand_values(self):
        sys = InequalitySystem([[0.0, 2.0]], [2.0])
        assert np.array_equal(orthogonal_projection(sys, 0, [0.0, 3.0]), [0.0, 1.0])
        sys2 = InequalitySystem([[1.0, 1.0]], [0.0])
        assert np.allclose(orthogonal_projection(sys2, 0, [1.0, 1.0]), [0.0, 0.0], atol=1e-15)


class TestPositiveSlice:
    def test_feasible_point_gives_zero_slice(self):
        sys = InequalitySystem([[1.0, 0.0]], [1.0])
        res = positive_slice(sys, 0, [0.5, 7.0])
        assert res.violated == 0
        assert np.array_equal(res.direction, [0.0, 0.0])

    def test_violated_point_hand_value(self):
        sys = InequalitySystem([[1.0, 0.0]], [1.0])
        res = positive_slice(sys, 0, [3.0, 0.0])
        assert res.violated == 1
        assert np.array_equal(res.direction, [2.0, 0.0])

    def test_boundary_counts_as_satisfied(self):
        sys = InequalitySystem([[1.0, 0.0]], [1.0])
        res = positive_slice(sys, 0, [1.0, 5.0])
        assert res.violated == 0
        assert np.array_equal(res.direction, [0.0, 0.0])


class TestPseudoProjection:
    def test_two_violated_rows_hand_average(self):
        direction, h = pseudo_projection(BOX, [3.0, 2.0])
        assert h == 2
        assert np.array_equal(direction, [1.0, 0.5])

    def test_feasible_point(self):
        direction, h = pseudo_projection(BOX, [0.0, 0.0])
        assert h == 0
        assert np.array_equal(direction, [0.0, 0.0])

    def test_single_violation_equals_slice(self):
        direction, h = pseudo_projection(BOX, [3.0, 0.0])
        assert h == 1
        assert np.array_equal(direction, positive_slice(BOX, 0, [3.0, 0.0]).direction)


class TestFixedStepDirection:
    def test_hand_normalization(self):
        # single row with phi(x) = (3, 4)
        sys = InequalitySystem([[3.0, 4.0]], [0.0])
        step = fixed_step_direction(sys, [3.0, 4.0], 2.0)
        assert step == pytest.approx([1.2, 1.6], rel=1e-12)

    def test_axis_aligned(self):
        sys = InequalitySystem([[0.0, 5.0]], [0.0])
        step = fixed_step_direction(sys, [0.0, 5.0], 1.0)
        assert step == pytest.approx([0.0, 1.0], rel=1e-12)

    def test_feasible_point_raises(self):
        with pytest.raises(FeasiblePointError):
            fixed_step_direction(BOX, [0.0, 0.0], 1.0)

    def test_bad_length_rejected(self):
        with pytest.raises(ValueError):
            fixed_step_direction(BOX, [3.0, 2.0], 0.0)


class TestEpsMembership:
    def test_feasible_any_eps(self):
        sys = InequalitySystem([[1.0, 0.0]], [1.0])
        assert eps_satisfies(sys, 0, [0.0, 0.0], 1e-12)

    def test_small_violation_inside_eps(self):
        sys = InequalitySystem([[1.0, 0.0]], [1.0])
        assert eps_satisfies(sys, 0, [1.0 + 5e-8, 0.0], 1e-7)
        assert not eps_satisfies(sys, 0, [2.0, 0.0], 1e-7)

    def test_membership_examples(self):
        assert eps_membership(BOX, [0.0, 0.0], 1e-7)
        near = [1.0 + 5e-8, 1.0 + 5e-8]
        assert eps_membership(BOX, near, 1e-7)
        assert not eps_membership(BOX, near, 1e-9)

    def test_eps_must_be_positive(self):
        with pytest.raises(ValueError):
            eps_membership(BOX, [0.0, 0.0], 0.0)


class TestMaxRelativeViolation:
    def test_feasible_is_zero(self):
        assert max_relative_violation(BOX, [0.0, 0.0]) == 0.0

    def test_hand_value(self):
        sys = InequalitySystem([[1.0, 0.0]], [1.0])
        assert max_relative_violation(sys, [3.0, 0.0]) == 2.0

    def test_row_scale_invariant_value(self):
        sys = InequalitySystem([[2.0, 0.0]], [2.0])
        assert max_relative_violation(sys, [3.0, 0.0]) == 2.0


# ---------------------------------------------------------------------------
# property tests


@settings(max_examples=80)
@given(system_strategy())
def test_projection_lands_on_hyperplane(sys_x):
    sys, x = sys_x
    for i in range(sys.m):
        p = orthogonal_projection(sys, i, x)
        lhs = float(np.dot(sys.a[i], p))
        assert abs(lhs - float(sys.b[i])) <= abs(float(sys.b[i])) * 1e-12 + 1e-12


@settings(max_examples=80)
@given(system_strategy())
def test_slice_flag_matches_residual_sign(sys_x):
    sys, x = sys_x
    for i in range(sys.m):
        res = positive_slice(sys, i, x)
        r = residual(sys, i, x)
        assert res.violated == (1 if r > 0 else 0)
        if res.violated:
            assert np.array_equal(res.direction, reflection_vector(sys, i, x))
        else:
            assert np.array_equal(res.direction, np.zeros(sys.n))


@settings(max_examples=60)
@given(system_strategy(), st.floats(min_value=0.01, max_value=100.0))
def test_row_scaling_leaves_decisions_unchanged(sys_x, c):
    sys, x = sys_x
    scaled = InequalitySystem(sys.a * c, sys.b * c)
    for i in range(sys.m):
        s1 = positive_slice(sys, i, x)
        s2 = positive_slice(scaled, i, x)
        assert s1.violated == s2.violated
        assert np.allclose(s1.direction, s2.direction, atol=1e-10, rtol=1e-10)
        assert eps_satisfies(sys, i, x, 1e-7) == eps_satisfies(scaled, i, x, 1e-7)
    assert max_relative_violation(sys, x) == pytest.approx(
        max_relative_violation(scaled, x), abs=1e-10, rel=1e-10
    )


@settings(max_examples=80)
@given(system_strategy(), st.floats(min_value=1e-3, max_value=10.0))
def test_fixed_step_has_requested_length(sys_x, length):
    sys, x = sys_x
    _, h = pseudo_projection(sys, x)
    if h == 0:
        return
    step = fixed_step_direction(sys, x, length)
    assert vector_norm(step) == pytest.approx(length, rel=1e-12)


@settings(max_examples=80)
@given(system_strategy())
def test_membership_equals_forall_rows(sys_x):
    sys, x = sys_x
    eps = 1e-7
    assert eps_membership(sys, x, eps) == all(
        eps_satisfies(sys, i, x, eps) for i in range(sys.m)
    )


@settings(max_examples=80)
@given(system_strategy())
def test_phi_reconstruction(sys_x):
    sys, x = sys_x
    direction, h = pseudo_projection(sys, x)
    total = np.zeros(sys.n)
    for i in range(sys.m):
        total = total + positive_slice(sys, i, x).direction
    assert np.allclose(direction * h, total, atol=1e-10)
    assert h == sum(positive_slice(sys, i, x).violated for i in range(sys.m))


def test_vector_norm_matches_math():
    assert vector_norm(np.array([3.0, 4.0])) == 5.0
