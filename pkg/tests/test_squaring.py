import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realization_lab import (alpha, assemble_L, construct_Tb, construct_Tc, is_minimal, pbh_controllable,
                             pbh_observable, sample_controllable_B, square_realization)
from realization_lab.errors import PreconditionError
from realization_lab.generators import random_minimal, random_nonminimal
from realization_lab.numeric import numeric_rank, random_complex
from realization_lab.squaring import validate_Tb, validate_Tc

from golden import JORDAN17, one_output_two_input, two_pole_mimo


def test_worked_example_with_supplied_factors():
    R = one_output_two_input(1.0)
    R_sq, T = square_realization(R, T_b=[[1.0], [1.0]], T_c=[[1.0]])
    np.testing.assert_array_equal(assemble_L(R_sq).L, [[0, 0, 1], [0, -1, 1], [1, 1, 0]])
    assert T.alpha == 1


@pytest.mark.parametrize("b", [1.0, -3.0, 0.25])
def test_square_realization_preserves_a_and_minimality(b):
    R = one_output_two_input(b)
    R_sq, T = square_realization(R, seed=4)
    assert R_sq.A is R.A or np.array_equal(R_sq.A, R.A)
    assert R_sq.dims == (2, 1, 1)
    assert is_minimal(R_sq).minimal
    np.testing.assert_allclose(R_sq.B, R.B @ T.T_b)
    np.testing.assert_allclose(R_sq.C, T.T_c @ R.C)
    np.testing.assert_allclose(R_sq.D, T.T_c @ R.D @ T.T_b)


def test_square_realization_rejects_non_minimal_and_bad_overrides():
    with pytest.raises(PreconditionError):
        square_realization(one_output_two_input(0.0))
    R = one_output_two_input(1.0)
    with pytest.raises(PreconditionError):
        square_realization(R, T_b=[[1.0], [0.0]])  # B T_b = e1 loses the mode at -1
    with pytest.raises(PreconditionError):
        square_realization(R, T_b=np.eye(2))        # wrong width: alpha is 1


def test_factor_width_is_alpha_and_identity_is_tried_first():
    R = two_pole_mimo()
    T_b = construct_Tb(R.A, R.B)
    assert T_b.shape == (2, 1)  # alpha = 1 < m = 2, so a random column is drawn
    assert validate_Tb(R.A, R.B, T_b)
    A = np.eye(2)
    np.testing.assert_array_equal(construct_Tb(A, np.eye(2)), np.eye(2))


def test_construct_rejects_uncontrollable_and_unobservable_pairs():
    R = one_output_two_input(0.0)
    with pytest.raises(PreconditionError):
        construct_Tb(R.A, R.B)
    with pytest.raises(PreconditionError):
        construct_Tc(np.diag([1.0, 2.0]), [[1.0, 0.0]])


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31), n=st.integers(1, 6), m=st.integers(1, 3), p=st.integers(1, 3))
def test_squared_random_systems_stay_minimal(seed, n, m, p):
    rng = np.random.default_rng(seed)
    R = random_minimal(rng, n, m, p)
    a = alpha(R.A)
    R_sq, T = square_realization(R, seed=seed)
    assert R_sq.dims == (n, a, a)
    assert numeric_rank(T.T_b) == a and numeric_rank(T.T_c) == a
    assert numeric_rank(R_sq.B) == a and numeric_rank(R_sq.C) == a
    assert is_minimal(R_sq, cross_check=True).minimal


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**31), m=st.integers(4, 7), p=st.integers(4, 7))
def test_jordan_factors_pass_pbh(seed, m, p):
    rng = np.random.default_rng(seed)
    J = JORDAN17.matrix()
    B = sample_controllable_B(JORDAN17, m, seed=seed)
    C = random_complex(rng, (p, 17))
    T_b, T_c = construct_Tb(J, B, seed=seed), construct_Tc(J, C, seed=seed)
    assert T_b.shape == (m, 4) and T_c.shape == (4, p)
    assert pbh_controllable(J, B @ T_b)[0]
    assert pbh_observable(J, T_c @ C)[0]
    assert validate_Tc(J, C, T_c)


def test_same_seed_same_factors():
    R = random_minimal(np.random.default_rng(5), 5, 3, 3)
    a = square_realization(R, seed=11)[1]
    b = square_realization(R, seed=11)[1]
    np.testing.assert_array_equal(a.T_b, b.T_b)
    np.testing.assert_array_equal(a.T_c, b.T_c)


def test_nonminimal_generator_is_rejected():
    R = random_nonminimal(np.random.default_rng(2), 4, 2, 2, "extra_mode")
    with pytest.raises(PreconditionError):
        square_realization(R)
