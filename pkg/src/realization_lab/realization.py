"""
State-space realizations ``F(s) = C (sI - A)^{-1} B + D`` and the operations
that rebuild one realization from another: the block system matrix, the
strictly proper part, zero padding to a square shape, static output
feedback and the realization of the inverse function.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionError, PoleEvaluationError, PreconditionError
from .jsonio import matrix_from_json, matrix_to_json
from .numeric import DEFAULT_TOL, Tolerances, as_cmatrix, frozen, norm1, spectrum

__all__ = [
    "Realization",
    "SystemMatrix",
    "assemble_L",
    "split_L",
    "associated",
    "naive_square",
    "eval_transfer",
    "closed_loop",
    "inverse_realization",
]


@dataclass(frozen=True, eq=False)
class Realization:
    """The quadruple ``(A, B, C, D)`` with ``A`` n x n, ``B`` n x m, ``C`` p x n, ``D`` p x m.

    ``D`` defaults to zeros. Arrays are copied and made read-only.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray | None = None

    def __post_init__(self):
        A = as_cmatrix(self.A, "A")
        B = as_cmatrix(self.B, "B")
        C = as_cmatrix(self.C, "C")
        n = A.shape[0]
        if A.shape != (n, n) or n < 1:
            raise DimensionError(f"A must be square and non-empty, got {A.shape}")
        if B.shape[0] != n or B.shape[1] < 1:
            raise DimensionError(f"B must be {n} x m with m >= 1, got {B.shape}")
        if C.shape[1] != n or C.shape[0] < 1:
            raise DimensionError(f"C must be p x {n} with p >= 1, got {C.shape}")
        if self.D is None:
            D = frozen(np.zeros((C.shape[0], B.shape[1]), dtype=complex))
        else:
            D = as_cmatrix(self.D, "D")
        if D.shape != (C.shape[0], B.shape[1]):
            raise DimensionError(f"D must be {C.shape[0]} x {B.shape[1]}, got {D.shape}")
        for name, value in zip("ABCD", (A, B, C, D)):
            object.__setattr__(self, name, value)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    @property
    def p(self) -> int:
        return self.C.shape[0]

    @property
    def dims(self) -> tuple:
        return self.n, self.m, self.p

    def replace(self, **blocks) -> "Realization":
        data = {"A": self.A, "B": self.B, "C": self.C, "D": self.D}
        data.update(blocks)
        return Realization(**data)

    def allclose(self, other: "Realization", atol: float = 1e-12) -> bool:
        return self.dims == other.dims and all(
            np.allclose(x, y, rtol=0, atol=atol)
            for x, y in zip((self.A, self.B, self.C, self.D), (other.A, other.B, other.C, other.D)))

    @classmethod
    def from_dict(cls, data: dict) -> "Realization":
        """Build from ``{"A": ..., "B": ..., "C": ..., "D": ...}`` with ``[re, im]`` entries.

        ``D`` may be omitted, in which case it is zero.
        """
        if not isinstance(data, dict):
            raise DimensionError("realization must be a JSON object")
        missing = [k for k in "ABC" if k not in data]
        if missing:
            raise DimensionError(f"realization is missing blocks {missing}")
        blocks = {k: matrix_from_json(data[k], k) for k in "ABC"}
        if data.get("D") is not None:
            blocks["D"] = matrix_from_json(data["D"], "D")
        return cls(**blocks)

    def to_dict(self) -> dict:
        return {k: matrix_to_json(getattr(self, k)) for k in "ABCD"}

    def __repr__(self):
        return f"Realization(n={self.n}, m={self.m}, p={self.p})"


@dataclass(frozen=True, eq=False)
class SystemMatrix:
    """The block matrix ``L = [[A, B], [C, D]]`` with its partition sizes."""

    L: np.ndarray
    n: int
    m: int
    p: int

    def realization(self) -> Realization:
        return split_L(self.L, self.n)


def assemble_L(R: Realization) -> SystemMatrix:
    L = np.block([[R.A, R.B], [R.C, R.D]])
    return SystemMatrix(frozen(L), R.n, R.m, R.p)


def split_L(L, n: int) -> Realization:
    """Cut a (n+p) x (n+m) matrix back into ``(A, B, C, D)``."""
    L = np.asarray(L, dtype=complex)
    if L.ndim != 2 or not (0 < n < min(L.shape)):
        raise DimensionError(f"cannot split a {L.shape} matrix at n={n}")
    return Realization(L[:n, :n], L[:n, n:], L[n:, :n], L[n:, n:])


def associated(R: Realization) -> Realization:
    """The strictly proper part ``F(s) - F(inf)``: same ``A, B, C`` with ``D = 0``."""
    return Realization(R.A, R.B, R.C)


def naive_square(R: Realization) -> Realization:
    """Pad ``B`` with zero columns or ``C`` with zero rows until ``m == p``."""
    k = max(R.m, R.p)
    B = np.zeros((R.n, k), dtype=complex)
    C = np.zeros((k, R.n), dtype=complex)
    D = np.zeros((k, k), dtype=complex)
    B[:, :R.m] = R.B
    C[:R.p, :] = R.C
    D[:R.p, :R.m] = R.D
    return Realization(R.A, B, C, D)


def eval_transfer(R: Realization, s: complex, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``C (sI - A)^{-1} B + D`` via a linear solve.

    Raises
    ------
    PoleEvaluationError
        If `s` lies within the matching radius of an eigenvalue of ``A``.
    """
    s = complex(s)
    spec = spectrum(R.A)
    radius = tol.eig_match * (1.0 + spec.scale)
    dist = float(np.min(np.abs(spec.values - s)))
    if dist <= radius:
        raise PoleEvaluationError(f"s={s} is within {dist:.3g} of a pole (radius {radius:.3g})")
    X = scipy.linalg.solve(s * np.eye(R.n) - R.A, R.B)
    return R.C @ X + R.D


def closed_loop(R: Realization, K, tol: Tolerances = DEFAULT_TOL) -> Realization:
    """Static output feedback ``u = K y + u'`` applied to a strictly proper system.

    Returns ``(A + B K C, B, C, 0)``.
    """
    K = as_cmatrix(K, "K")
    if K.shape != (R.m, R.p):
        raise DimensionError(f"K must be {R.m} x {R.p}, got {K.shape}")
    if not np.allclose(R.D, 0, rtol=0, atol=tol.eig_match):
        raise PreconditionError("closed loop is defined on the strictly proper part; "
                                "call associated() first")
    return Realization(R.A + R.B @ K @ R.C, R.B, R.C)


def inverse_realization(R: Realization, tol: Tolerances = DEFAULT_TOL) -> Realization:
    """Realization ``(A - BC, B, -C, I)`` of ``F(s)^{-1}`` for ``D = I``."""
    if R.m != R.p:
        raise PreconditionError(f"inverse needs a square system, got m={R.m}, p={R.p}")
    eye = np.eye(R.m)
    if not np.allclose(R.D, eye, rtol=0, atol=tol.eig_match * (1 + norm1(R.D))):
        raise PreconditionError("inverse realization requires D = I")
    return Realization(R.A - R.B @ R.C, R.B, -R.C, eye)
