import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realization_lab import (Realization, assemble_L, associated, closed_loop, eval_transfer,
                             inverse_realization, naive_square, split_L, spectrum)
from realization_lab.errors import DimensionError, PoleEvaluationError, PreconditionError
from realization_lab.numeric import random_complex

from golden import one_output_two_input, two_pole_mimo


def random_realization(rng, n, m, p, with_d=True):
    return Realization(random_complex(rng, (n, n)), random_complex(rng, (n, m)), random_complex(rng, (p, n)),
                       random_complex(rng, (p, m)) if with_d else None)


def test_dimensions_and_default_d():
    R = Realization(np.zeros((3, 3)), np.ones((3, 2)), np.ones((1, 3)))
    assert R.dims == (3, 2, 1)
    np.testing.assert_array_equal(R.D, np.zeros((1, 2)))
    assert not R.A.flags.writeable


@pytest.mark.parametrize("blocks", [
    dict(A=np.zeros((2, 3)), B=np.ones((2, 1)), C=np.ones((1, 2))),
    dict(A=np.zeros((2, 2)), B=np.ones((3, 1)), C=np.ones((1, 2))),
    dict(A=np.zeros((2, 2)), B=np.ones((2, 1)), C=np.ones((1, 3))),
    dict(A=np.zeros((2, 2)), B=np.ones((2, 1)), C=np.ones((1, 2)), D=np.ones((2, 2))),
    dict(A=np.zeros((2, 2)), B=np.ones((2, 0)), C=np.ones((1, 2))),
])
def test_dimension_mismatch_is_rejected(blocks):
    with pytest.raises(DimensionError):
        Realization(**blocks)


def test_dict_roundtrip_and_missing_d():
    R = two_pole_mimo(1, -2)
    back = Realization.from_dict(R.to_dict())
    assert back.allclose(R, atol=0)
    no_d = Realization.from_dict({"A": [[1]], "B": [[1, 2]], "C": [[3]]})
    assert no_d.D.shape == (1, 2)
    with pytest.raises(DimensionError):
        Realization.from_dict({"A": [[1]], "B": [[1]]})


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31), n=st.integers(1, 4), m=st.integers(1, 3), p=st.integers(1, 3))
def test_assemble_split_roundtrip(seed, n, m, p):
    R = random_realization(np.random.default_rng(seed), n, m, p)
    S = assemble_L(R)
    assert S.L.shape == (n + p, n + m)
    assert S.realization().allclose(R, atol=0)
    assert split_L(S.L, n).allclose(R, atol=0)


def test_split_rejects_bad_cut():
    with pytest.raises(DimensionError):
        split_L(np.eye(3), 3)


def test_associated_and_naive_square():
    R = one_output_two_input(1.0, d=5.0)
    np.testing.assert_array_equal(associated(R).D, 0)
    Rs = naive_square(R)
    assert Rs.dims == (2, 2, 2)
    np.testing.assert_array_equal(Rs.C[1], 0)
    np.testing.assert_array_equal(Rs.D, [[5, 0], [0, 0]])


def test_eval_transfer_against_explicit_inverse():
    rng = np.random.default_rng(0)
    R = random_realization(rng, 4, 2, 3)
    s = 3.0 + 2.0j
    want = R.C @ np.linalg.inv(s * np.eye(4) - R.A) @ R.B + R.D
    np.testing.assert_allclose(eval_transfer(R, s), want, atol=1e-12)


def test_eval_transfer_at_a_pole_raises():
    with pytest.raises(PoleEvaluationError):
        eval_transfer(two_pole_mimo(), 2.0)


def test_closed_loop_matches_direct_formula_and_requires_strictly_proper():
    rng = np.random.default_rng(1)
    R = random_realization(rng, 3, 2, 2, with_d=False)
    K = random_complex(rng, (2, 2))
    Rc = closed_loop(R, K)
    np.testing.assert_allclose(Rc.A, R.A + R.B @ K @ R.C)
    with pytest.raises(PreconditionError):
        closed_loop(two_pole_mimo(), K)
    with pytest.raises(DimensionError):
        closed_loop(R, np.ones((2, 3)))


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**31), n=st.integers(1, 4), m=st.integers(1, 3))
def test_inverse_realization_inverts_transfer(seed, n, m):
    rng = np.random.default_rng(seed)
    R = random_realization(rng, n, m, m, with_d=False).replace(D=np.eye(m))
    Ri = inverse_realization(R)
    s = 10.0 + 7.0j * (1 + np.abs(spectrum(R.A).values).max() + np.abs(spectrum(Ri.A).values).max())
    np.testing.assert_allclose(eval_transfer(R, s) @ eval_transfer(Ri, s), np.eye(m), atol=1e-9)


def test_inverse_realization_preconditions():
    with pytest.raises(PreconditionError):
        inverse_realization(one_output_two_input(1.0))
    with pytest.raises(PreconditionError):
        inverse_realization(associated(two_pole_mimo()))
