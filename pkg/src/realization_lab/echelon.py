"""
Row-subset independence specs, block unitary echelon reduction and the
selector matrix that compresses ``B`` to ``rho`` columns.

For ``A`` in Jordan form, ``(A, B)`` is controllable exactly when, inside
each eigenvalue's row block, the rows of ``B`` facing the last row of every
Jordan block are linearly independent. :func:`jordan_row_spec` produces that
list; the remaining functions work with any such list.

Row indices are 0-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionError, NumericalBreakdown, PreconditionError
from .jsonio import complex_from_json, complex_to_json
from .numeric import DEFAULT_TOL, Tolerances, as_cmatrix, numeric_rank, random_complex

__all__ = [
    "JordanSpec",
    "RowSpec",
    "jordan_row_spec",
    "jordan_col_spec",
    "check_row_spec",
    "block_echelon_reduce",
    "echelon_pivots",
    "is_block_echelon",
    "build_selector_T",
    "sample_controllable_B",
]


@dataclass(frozen=True)
class JordanSpec:
    """Symbolic Jordan structure: ``((eigenvalue, (k1, k2, ...)), ...)``.

    Eigenvalues must be exactly distinct; each group may hold several
    Jordan blocks.
    """

    groups: tuple

    def __post_init__(self):
        groups = tuple((complex(lam), tuple(int(k) for k in sizes)) for lam, sizes in self.groups)
        if not groups:
            raise DimensionError("Jordan spec needs at least one eigenvalue group")
        eigs = [lam for lam, _ in groups]
        if len(set(eigs)) != len(eigs):
            raise DimensionError("Jordan spec eigenvalues must be distinct")
        for lam, sizes in groups:
            if not sizes or min(sizes) < 1:
                raise DimensionError(f"block sizes for {lam} must be positive, got {sizes}")
        object.__setattr__(self, "groups", groups)

    @property
    def n(self) -> int:
        return sum(sum(sizes) for _, sizes in self.groups)

    @property
    def alpha(self) -> int:
        """Largest geometric multiplicity, i.e. the most blocks in one group."""
        return max(len(sizes) for _, sizes in self.groups)

    def matrix(self) -> np.ndarray:
        """Upper-triangular Jordan matrix with ones on the superdiagonal."""
        blocks = []
        for lam, sizes in self.groups:
            for k in sizes:
                blocks.append(lam * np.eye(k, dtype=complex) + np.eye(k, k=1, dtype=complex))
        return scipy.linalg.block_diag(*blocks)

    @classmethod
    def from_json(cls, data) -> "JordanSpec":
        """Parse ``[{"eig": [re, im], "blocks": [k1, k2, ...]}, ...]``."""
        if not isinstance(data, list) or not data:
            raise DimensionError("Jordan spec must be a non-empty list")
        groups = []
        for g in data:
            if not isinstance(g, dict) or "eig" not in g or "blocks" not in g:
                raise DimensionError("each Jordan group needs 'eig' and 'blocks'")
            blocks = g["blocks"]
            if not isinstance(blocks, list) or not all(
                    isinstance(k, int) and not isinstance(k, bool) for k in blocks):
                raise DimensionError("'blocks' must be a list of integers")
            groups.append((complex_from_json(g["eig"]), tuple(blocks)))
        return cls(tuple(groups))

    def to_json(self) -> list:
        return [{"eig": complex_to_json(lam), "blocks": list(sizes)} for lam, sizes in self.groups]


@dataclass(frozen=True)
class RowSpec:
    """Per-block row subsets that must be linearly independent.

    ``blocks`` is ``((height, (i1, i2, ...)), ...)`` with indices local to the
    block. Blocks are stacked top to bottom.
    """

    blocks: tuple

    def __post_init__(self):
        blocks = tuple((int(h), tuple(sorted(int(i) for i in idx))) for h, idx in self.blocks)
        for h, idx in blocks:
            if h < 1:
                raise DimensionError(f"block height must be positive, got {h}")
            if len(set(idx)) != len(idx) or any(not 0 <= i < h for i in idx):
                raise DimensionError(f"indices {idx} invalid for block height {h}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(h for h, _ in self.blocks)

    @property
    def rho(self) -> int:
        return max((len(idx) for _, idx in self.blocks), default=0)

    def offsets(self) -> list[int]:
        out, acc = [], 0
        for h, _ in self.blocks:
            out.append(acc)
            acc += h
        return out

    def global_rows(self) -> list[list[int]]:
        """Index sets shifted to positions in the stacked matrix."""
        return [[off + i for i in idx] for off, (_, idx) in zip(self.offsets(), self.blocks)]


def jordan_row_spec(spec: JordanSpec) -> RowSpec:
    """Last row of every Jordan block, grouped by eigenvalue."""
    blocks = []
    for _, sizes in spec.groups:
        ends = np.cumsum(sizes) - 1
        blocks.append((sum(sizes), tuple(int(e) for e in ends)))
    return RowSpec(tuple(blocks))


def jordan_col_spec(spec: JordanSpec) -> RowSpec:
    """First column of every Jordan block; apply it to ``C.T`` for observability."""
    blocks = []
    for _, sizes in spec.groups:
        starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
        blocks.append((sum(sizes), tuple(int(s) for s in starts)))
    return RowSpec(tuple(blocks))


def _check_height(B: np.ndarray, spec: RowSpec):
    if B.shape[0] != spec.n:
        raise DimensionError(f"matrix has {B.shape[0]} rows, spec covers {spec.n}")


def check_row_spec(B, spec: RowSpec, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff every listed row subset of `B` has full numeric rank."""
    B = as_cmatrix(B, "B")
    _check_height(B, spec)
    for rows in spec.global_rows():
        if rows and numeric_rank(B[rows], tol) < len(rows):
            return False
    return True


def _householder(x: np.ndarray) -> np.ndarray:
    """Unitary ``H`` with ``H @ x`` a multiple of ``e_1``."""
    k = x.size
    nx = np.linalg.norm(x)
    phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
    v = x.astype(complex).copy()
    v[0] += phase * nx
    vv = np.vdot(v, v).real
    if vv == 0:
        return np.eye(k, dtype=complex)
    return np.eye(k, dtype=complex) - 2.0 * np.outer(v, v.conj()) / vv


def _row_echelon_unitary(X: np.ndarray, tol: Tolerances) -> np.ndarray:
    """Unitary ``W`` such that ``W @ X`` is in row echelon form.

    Columns are scanned left to right; a column whose remaining part is above
    the cutoff receives a Householder reflection that creates the next pivot.
    """
    k, m = X.shape
    R = X.astype(complex).copy()
    W = np.eye(k, dtype=complex)
    cutoff = tol.rank_rel * max(k, m) * (np.linalg.norm(X, 2) if X.size else 0.0)
    r = 0
    for j in range(m):
        if r == k:
            break
        x = R[r:, j]
        if np.linalg.norm(x) <= cutoff:
            continue
        H = _householder(x)
        R[r:, :] = H @ R[r:, :]
        W[r:, :] = H @ W[r:, :]
        r += 1
    return W


def block_echelon_reduce(B, spec: RowSpec, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Block-diagonal unitary ``U`` and ``Bt`` with ``B = U @ Bt``.

    In each block the rows listed in `spec` are brought to row echelon form
    by a unitary acting on those rows only; other rows are left untouched.
    This is the permute, reduce, permute-back construction with the
    permutation folded into index bookkeeping.

    Raises
    ------
    PreconditionError
        If the listed rows are not linearly independent.
    """
    B = as_cmatrix(B, "B")
    _check_height(B, spec)
    if not check_row_spec(B, spec, tol):
        raise PreconditionError("listed rows are not linearly independent")
    n = spec.n
    U = np.eye(n, dtype=complex)
    Bt = B.copy()
    for rows in spec.global_rows():
        if not rows:
            continue
        W = _row_echelon_unitary(B[rows], tol)
        Bt[rows] = W @ B[rows]
        U[np.ix_(rows, rows)] = W.conj().T
    return U, Bt


def echelon_pivots(Bt, spec: RowSpec, tol: Tolerances = DEFAULT_TOL) -> list[list[int | None]]:
    """Pivot column of each listed row, per block (None for a zero row).

    An entry counts as nonzero above ``rank_rel * max(dims) * ||row||``.
    """
    Bt = np.asarray(Bt, dtype=complex)
    _check_height(Bt, spec)
    out = []
    for rows in spec.global_rows():
        piv = []
        for i in rows:
            row = Bt[i]
            thr = tol.rank_rel * max(Bt.shape) * np.linalg.norm(row)
            nz = np.flatnonzero(np.abs(row) > thr) if thr > 0 else np.zeros(0, int)
            piv.append(int(nz[0]) if nz.size else None)
        out.append(piv)
    return out


def is_block_echelon(Bt, spec: RowSpec, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Listed rows of every block have strictly increasing pivots."""
    for piv in echelon_pivots(Bt, spec, tol):
        if any(p is None for p in piv):
            return False
        if any(b <= a for a, b in zip(piv, piv[1:])):
            return False
    return True


def build_selector_T(B, spec: RowSpec, tol: Tolerances = DEFAULT_TOL, seed: int = 0) -> np.ndarray:
    """Full-rank m x rho ``T`` such that ``B @ T`` still satisfies `spec`.

    When ``m == rho`` the identity is tried first. Otherwise random complex
    Gaussian draws are verified with :func:`check_row_spec`.
    """
    B = as_cmatrix(B, "B")
    if not check_row_spec(B, spec, tol):
        raise PreconditionError("B does not satisfy the row spec")
    m, rho = B.shape[1], spec.rho
    if rho == 0:
        return np.zeros((m, 0), dtype=complex)
    if m < rho:
        raise PreconditionError(f"B has {m} columns, spec needs at least {rho}")
    if m == rho:
        return np.eye(m, dtype=complex)
    rng = np.random.default_rng(seed)
    for _ in range(tol.max_retries + 1):
        T = random_complex(rng, (m, rho))
        if numeric_rank(T, tol) == rho and check_row_spec(B @ T, spec, tol):
            return T
    raise NumericalBreakdown(f"no selector found in {tol.max_retries + 1} draws")


def sample_controllable_B(spec: JordanSpec, m: int, seed: int = 0, tol: Tolerances = DEFAULT_TOL,
                          rank: int | None = None) -> np.ndarray:
    """Random ``B`` (n x m) making ``(spec.matrix(), B)`` controllable.

    Entries are unit-variance complex Gaussians, resampled until the row
    spec holds. With ``rank`` given the result is a product of an n x rank
    and a rank x m factor, so its rank is exactly ``rank``; ``rank`` must lie
    in ``[rho, min(n, m)]``.
    """
    rows = jordan_row_spec(spec)
    rho, n = rows.rho, spec.n
    if m < rho:
        raise PreconditionError(f"m={m} is below the minimal input count rho={rho}")
    if rank is not None and not rho <= rank <= min(n, m):
        raise PreconditionError(f"rank {rank} outside [{rho}, {min(n, m)}]")
    rng = np.random.default_rng(seed)
    for _ in range(tol.max_retries + 1):
        if rank is None:
            B = random_complex(rng, (n, m))
        else:
            B = random_complex(rng, (n, rank)) @ random_complex(rng, (rank, m))
        if check_row_spec(B, rows, tol) and (rank is None or numeric_rank(B, tol) == rank):
            return B
    raise NumericalBreakdown(f"no controllable B found in {tol.max_retries + 1} draws")
