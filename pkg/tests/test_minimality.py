import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realization_lab import (Realization, alpha, associated, is_minimal, kalman_controllable,
                             kalman_observable, pbh_controllable, pbh_observable, rank_formula_check)
from realization_lab.generators import NONMINIMAL_KINDS, random_minimal, random_nonminimal
from realization_lab.minimality import controllability_matrix, observability_matrix
from realization_lab.numeric import null_space, numeric_rank

from golden import JORDAN17, one_output_two_input, rank_formula_system, two_pole_mimo


def test_krylov_matrices_shape():
    A = np.diag([1.0, 2.0, 3.0])
    assert controllability_matrix(A, np.ones((3, 2))).shape == (3, 6)
    assert observability_matrix(A, np.ones((1, 3))).shape == (3, 3)


def test_pbh_witness_is_the_uncontrollable_mode():
    R = one_output_two_input(0.0)
    ok, witness = pbh_controllable(R.A, R.B)
    assert not ok and witness == pytest.approx(-1.0)
    assert pbh_observable(R.A, R.C)[0]


def test_observability_witness_is_conjugated_back():
    A = np.diag([1j, -1j])
    C = np.array([[1.0, 0.0]])
    ok, witness = pbh_observable(A, C)
    assert not ok and witness == pytest.approx(-1j)


@pytest.mark.parametrize("b, minimal", [(0.0, False), (1.0, True), (-3.0, True)])
def test_one_output_two_input_minimality(b, minimal):
    assert is_minimal(one_output_two_input(b), cross_check=True).minimal is minimal


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31), n=st.integers(2, 6), m=st.integers(1, 3), p=st.integers(1, 3),
       kind=st.sampled_from(("minimal",) + NONMINIMAL_KINDS))
def test_pbh_and_kalman_agree_with_construction(seed, n, m, p, kind):
    rng = np.random.default_rng(seed)
    if kind == "minimal":
        R = random_minimal(rng, n, m, p)
    else:
        R = random_nonminimal(rng, n, m, p, kind)
    v = is_minimal(R, cross_check=True)
    assert v.minimal is (kind == "minimal")
    assert v.kalman_agrees
    assert kalman_controllable(R.A, R.B) == v.controllable
    assert kalman_observable(R.A, R.C) == v.observable
    if kind == "uncontrollable":
        assert not v.controllable
    if kind == "unobservable":
        assert not v.observable


def test_margins_reported_for_each_test():
    v = is_minimal(two_pole_mimo())
    assert set(v.margins) == {"controllability", "observability"}
    assert all(x > 1 for x in v.margins.values())
    assert v.to_dict()["minimal"] is True


def test_alpha_of_jordan_structure():
    assert alpha(JORDAN17.matrix()) == 4
    assert alpha(np.diag([0.0, 2.0])) == 1
    assert alpha(np.eye(3)) == 3


def test_rank_formula_fails_on_minimal_example():
    R = rank_formula_system()
    rf = rank_formula_check(R)
    assert (rf.lhs, rf.rhs, rf.holds) == (2, 3, False)
    assert rf.argmin == pytest.approx(0.0, abs=1e-9)
    assert is_minimal(R).minimal
    bordered = np.block([[-R.A, R.B], [R.C, R.D]])
    N = null_space(bordered)
    assert N.shape[1] == 1
    v = N[:, 0] / N[0, 0] * -1
    np.testing.assert_allclose(v, [-1, 1, -1], atol=1e-8)


def test_rank_formula_with_zero_feedthrough_block():
    rf = rank_formula_check(associated(rank_formula_system()))
    assert (rf.lhs, rf.rhs, rf.holds) == (3, 3, True)


def test_rank_formula_scalar_integrator():
    rf = rank_formula_check(Realization([[0.0]], [[1.0]], [[1.0]]))
    assert (rf.lhs, rf.rhs, rf.holds) == (2, 2, True)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31), n=st.integers(2, 5), m=st.integers(1, 3), p=st.integers(1, 3))
def test_rank_formula_fails_when_uncontrollable_and_rank_c_not_above_rank_b(seed, n, m, p):
    # at an uncontrollable mode the bordered rank is at most n - 1 + rank C
    rng = np.random.default_rng(seed)
    R = associated(random_nonminimal(rng, n, m, p, "uncontrollable"))
    if numeric_rank(R.C) > numeric_rank(R.B):
        R = Realization(R.A, R.B, R.C[: numeric_rank(R.B)])
    assert not rank_formula_check(R).holds


def test_rank_formula_can_hold_without_controllability():
    # the general "not controllable => formula fails" reading is false
    R = Realization(np.diag([0.0, 1.0]), [[1.0], [0.0]], np.eye(2))
    assert not is_minimal(R).controllable
    rf = rank_formula_check(R)
    assert (rf.lhs, rf.rhs, rf.holds) == (3, 3, True)
