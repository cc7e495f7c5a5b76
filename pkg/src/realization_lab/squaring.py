"""
Compress a minimal realization to ``alpha`` inputs and outputs without
touching ``A``.

``alpha`` is the largest geometric multiplicity of ``A`` and is the least
number of columns a controlling ``B`` can have. ``T_b`` (m x alpha) and
``T_c`` (alpha x p) are drawn at random and certified by the PBH tests
rather than built from a Jordan decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalBreakdown, PreconditionError
from .minimality import alpha as alpha_of
from .minimality import is_minimal, pbh_controllable, pbh_observable
from .numeric import DEFAULT_TOL, Tolerances, as_cmatrix, child_seeds, numeric_rank, random_complex
from .realization import Realization

__all__ = [
    "SquaringTransform",
    "construct_Tb",
    "construct_Tc",
    "validate_Tb",
    "validate_Tc",
    "square_realization",
]


@dataclass(frozen=True, eq=False)
class SquaringTransform:
    T_b: np.ndarray
    T_c: np.ndarray
    alpha: int

    def to_dict(self) -> dict:
        return {"T_b": self.T_b, "T_c": self.T_c, "alpha": self.alpha}


def validate_Tb(A, B, T_b, tol: Tolerances = DEFAULT_TOL) -> bool:
    """``T_b`` has full column rank, ``B @ T_b`` has full column rank and ``(A, B T_b)`` is controllable."""
    T_b = np.asarray(T_b, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if T_b.ndim != 2 or T_b.shape[0] != B.shape[1]:
        return False
    k = T_b.shape[1]
    BT = B @ T_b
    return (numeric_rank(T_b, tol) == k and numeric_rank(BT, tol) == k
            and pbh_controllable(A, BT, tol)[0])


def validate_Tc(A, C, T_c, tol: Tolerances = DEFAULT_TOL) -> bool:
    T_c = np.asarray(T_c, dtype=complex)
    return validate_Tb(np.asarray(A).conj().T, np.asarray(C).conj().T, T_c.conj().T, tol)


def construct_Tb(A, B, tol: Tolerances = DEFAULT_TOL, seed: int = 0) -> np.ndarray:
    """Full-rank m x alpha ``T_b`` with ``(A, B T_b)`` controllable.

    Raises
    ------
    PreconditionError
        If ``(A, B)`` is not controllable.
    NumericalBreakdown
        If no verified draw is found within ``tol.max_retries + 1`` attempts.
    """
    A = as_cmatrix(A, "A")
    B = as_cmatrix(B, "B")
    ok, witness = pbh_controllable(A, B, tol)
    if not ok:
        raise PreconditionError(f"(A, B) is not controllable (PBH fails at {witness})")
    a = alpha_of(A, tol)
    m = B.shape[1]
    if m == a:
        eye = np.eye(m, dtype=complex)
        if validate_Tb(A, B, eye, tol):
            return eye
    rng = np.random.default_rng(seed)
    for _ in range(tol.max_retries + 1):
        T = random_complex(rng, (m, a))
        if validate_Tb(A, B, T, tol):
            return T
    raise NumericalBreakdown(f"no valid T_b found in {tol.max_retries + 1} draws")


def construct_Tc(A, C, tol: Tolerances = DEFAULT_TOL, seed: int = 0) -> np.ndarray:
    """Full-rank alpha x p ``T_c`` with ``(A, T_c C)`` observable (dual of :func:`construct_Tb`)."""
    A = as_cmatrix(A, "A")
    C = as_cmatrix(C, "C")
    ok, witness = pbh_observable(A, C, tol)
    if not ok:
        raise PreconditionError(f"(A, C) is not observable (PBH fails at {witness})")
    return construct_Tb(A.conj().T, C.conj().T, tol, seed).conj().T


def square_realization(R: Realization, tol: Tolerances = DEFAULT_TOL, seed: int = 0,
                       T_b=None, T_c=None) -> tuple[Realization, SquaringTransform]:
    """Return ``(A, B T_b, T_c C, T_c D T_b)`` and the transform used.

    `T_b` and `T_c` may be supplied; they are validated instead of drawn.
    Draws for the two sides use independent child seeds of `seed`.
    """
    verdict = is_minimal(R, tol)
    if not verdict.minimal:
        raise PreconditionError("square_realization needs a minimal realization; "
                                "use naive_square for non-minimal systems")
    a = alpha_of(R.A, tol)
    seed_b, seed_c = child_seeds(seed, 2)
    if T_b is None:
        T_b = construct_Tb(R.A, R.B, tol, seed_b)
    else:
        T_b = as_cmatrix(T_b, "T_b")
        if T_b.shape != (R.m, a) or not validate_Tb(R.A, R.B, T_b, tol):
            raise PreconditionError(f"supplied T_b is not a valid {R.m} x {a} squaring factor")
    if T_c is None:
        T_c = construct_Tc(R.A, R.C, tol, seed_c)
    else:
        T_c = as_cmatrix(T_c, "T_c")
        if T_c.shape != (a, R.p) or not validate_Tc(R.A, R.C, T_c, tol):
            raise PreconditionError(f"supplied T_c is not a valid {a} x {R.p} squaring factor")
    R_sq = Realization(R.A, R.B @ T_b, T_c @ R.C, T_c @ R.D @ T_b)
    return R_sq, SquaringTransform(np.asarray(T_b), np.asarray(T_c), a)
