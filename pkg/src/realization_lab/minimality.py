"""
Classical minimality tests: Kalman rank, PBH (Hautus) rank tests, the
largest geometric multiplicity of ``A`` and the bordered-rank formula.

The PBH tests produce the verdicts used everywhere else. The Kalman test is
an independent code path kept for differential testing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .numeric import (DEFAULT_TOL, Tolerances, as_cmatrix, cluster_eigenvalues, numeric_rank,
                      rank_with_margin, spectrum)
from .realization import Realization, assemble_L, naive_square

__all__ = [
    "MinimalityVerdict",
    "controllability_matrix",
    "observability_matrix",
    "kalman_controllable",
    "kalman_observable",
    "pbh_controllable",
    "pbh_observable",
    "pbh_scan",
    "is_minimal",
    "alpha",
    "rank_formula_check",
    "RankFormula",
]


def controllability_matrix(A, B) -> np.ndarray:
    """``[B, AB, ..., A^{n-1} B]``."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    blocks = [B]
    for _ in range(A.shape[0] - 1):
        blocks.append(A @ blocks[-1])
    return np.hstack(blocks)


def observability_matrix(A, C) -> np.ndarray:
    return controllability_matrix(np.asarray(A).conj().T, np.asarray(C).conj().T).conj().T


def _reachable_dimension(A: np.ndarray, B: np.ndarray, tol: Tolerances) -> int:
    """Dimension of ``span[B, AB, A^2 B, ...]`` by orthogonalized Krylov steps.

    Each step keeps only the directions of ``A Q_new`` left after projecting
    out the basis found so far. This avoids the raw powers ``A^k B`` whose
    conditioning collapses for modest n.
    """
    n = A.shape[0]
    scale = max(float(np.linalg.norm(A, 2)), float(np.linalg.norm(B, 2)))
    if scale == 0:
        return 0

    def new_directions(X, Q):
        if Q.shape[1]:
            X = X - Q @ (Q.conj().T @ X)
            X = X - Q @ (Q.conj().T @ X)
        if X.size == 0:
            return X[:, :0]
        u, sv, _ = np.linalg.svd(X, full_matrices=False)
        keep = sv > tol.rank_rel * max(X.shape) * scale
        return u[:, keep]

    Q = new_directions(B, np.zeros((n, 0), dtype=complex))
    fresh = Q
    while fresh.shape[1] and Q.shape[1] < n:
        fresh = new_directions(A @ fresh, Q)
        Q = np.hstack([Q, fresh])
    return Q.shape[1]


def kalman_controllable(A, B, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Kalman test: the reachable subspace of ``(A, B)`` is all of ``C^n``.

    The Krylov space is built with orthogonalization instead of ranking
    ``[B, AB, ..., A^{n-1} B]`` directly; see :func:`controllability_matrix`
    for the textbook matrix.
    """
    A = as_cmatrix(A, "A")
    B = as_cmatrix(B, "B")
    return _reachable_dimension(A, B, tol) == A.shape[0]


def kalman_observable(A, C, tol: Tolerances = DEFAULT_TOL) -> bool:
    A = as_cmatrix(A, "A")
    C = as_cmatrix(C, "C")
    return kalman_controllable(A.conj().T, C.conj().T, tol)


class PBHResult(NamedTuple):
    ok: bool
    witness: complex | None
    margin: float


def pbh_scan(A, B, tol: Tolerances = DEFAULT_TOL) -> PBHResult:
    """Run ``rank [lambda I - A, B] = n`` over the eigenvalue cluster representatives.

    The margin is the smallest ``sigma_n / cutoff`` seen; it is above one
    exactly when the pair passes.
    """
    A = as_cmatrix(A, "A")
    B = as_cmatrix(B, "B")
    n = A.shape[0]
    eye = np.eye(n)
    margin = float("inf")
    witness = None
    a_norm = float(np.linalg.norm(A, 2))
    for lam in cluster_eigenvalues(A, tol).representatives:
        rm = rank_with_margin(np.hstack([lam * eye - A, B]), n, tol, scale=a_norm)
        margin = min(margin, rm.ratio)
        if rm.rank < n and witness is None:
            witness = complex(lam)
    return PBHResult(witness is None, witness, margin)


def pbh_controllable(A, B, tol: Tolerances = DEFAULT_TOL) -> tuple[bool, complex | None]:
    """PBH controllability test. Returns ``(verdict, first violating eigenvalue)``."""
    res = pbh_scan(A, B, tol)
    return res.ok, res.witness


def _pbh_obs_scan(A, C, tol) -> PBHResult:
    A = as_cmatrix(A, "A")
    C = as_cmatrix(C, "C")
    res = pbh_scan(A.conj().T, C.conj().T, tol)
    witness = None if res.witness is None else complex(np.conj(res.witness))
    return PBHResult(res.ok, witness, res.margin)


def pbh_observable(A, C, tol: Tolerances = DEFAULT_TOL) -> tuple[bool, complex | None]:
    """PBH observability test, via controllability of ``(A*, C*)``."""
    res = _pbh_obs_scan(A, C, tol)
    return res.ok, res.witness


@dataclass(frozen=True)
class MinimalityVerdict:
    controllable: bool
    observable: bool
    witnesses: dict = field(default_factory=dict)
    margins: dict = field(default_factory=dict)
    kalman_agrees: bool | None = None

    @property
    def minimal(self) -> bool:
        return self.controllable and self.observable

    def __bool__(self):
        return self.minimal

    def to_dict(self) -> dict:
        out = {
            "controllable": self.controllable,
            "observable": self.observable,
            "minimal": self.minimal,
            "witnesses": dict(self.witnesses),
            "margins": dict(self.margins),
        }
        if self.kalman_agrees is not None:
            out["kalman_agrees"] = self.kalman_agrees
        return out


def is_minimal(R: Realization, tol: Tolerances = DEFAULT_TOL, cross_check: bool = False) -> MinimalityVerdict:
    """Minimality as controllability plus observability (PBH).

    With ``cross_check=True`` the Kalman rank tests are also run and
    ``kalman_agrees`` records whether both routes give the same verdicts.
    """
    c = pbh_scan(R.A, R.B, tol)
    o = _pbh_obs_scan(R.A, R.C, tol)
    agrees = None
    if cross_check:
        agrees = (kalman_controllable(R.A, R.B, tol) == c.ok
                  and kalman_observable(R.A, R.C, tol) == o.ok)
    return MinimalityVerdict(
        controllable=c.ok,
        observable=o.ok,
        witnesses={"controllability": c.witness, "observability": o.witness},
        margins={"controllability": c.margin, "observability": o.margin},
        kalman_agrees=agrees,
    )


def alpha(A, tol: Tolerances = DEFAULT_TOL) -> int:
    """Largest geometric multiplicity among the eigenvalues of `A`."""
    return cluster_eigenvalues(A, tol).alpha


class RankFormula(NamedTuple):
    lhs: int
    rhs: int
    holds: bool
    argmin: complex
    candidates: int


def _bordered(R: Realization, lam: complex) -> np.ndarray:
    return np.block([[lam * np.eye(R.n) - R.A, R.B], [R.C, R.D]])


def _pencil_eigenvalues(R: Realization, tol: Tolerances) -> np.ndarray:
    """Finite points where ``[[lam I - A, B], [C, D]]`` can lose rank.

    The bordered matrix equals ``F + lam E`` with ``E = diag(I_n, 0)``. When
    it is not square with full normal rank, both sides are compressed by fixed
    pseudo-random matrices to an r x r pencil, r being the normal rank; every
    rank-drop point of the original pencil is an eigenvalue of the compressed
    one. Spurious extras are harmless because the caller re-evaluates the rank.
    """
    n, m, p = R.dims
    F = _bordered(R, 0.0)
    E = np.zeros_like(F)
    E[:n, :n] = np.eye(n)
    rng = np.random.default_rng(0x5EED)
    probes = rng.standard_normal(3) * (1 + np.linalg.norm(R.A, 1)) + 1j * rng.standard_normal(3)
    r0 = max(numeric_rank(F + z * E, tol) for z in probes)
    if r0 == 0:
        return np.zeros(0, dtype=complex)
    if F.shape[0] == F.shape[1] == r0:
        X, Y = F, E
    else:
        W = rng.standard_normal((r0, F.shape[0])) + 1j * rng.standard_normal((r0, F.shape[0]))
        V = rng.standard_normal((F.shape[1], r0)) + 1j * rng.standard_normal((F.shape[1], r0))
        X, Y = W @ F @ V, W @ E @ V
    # det(X + lam Y) = 0  <=>  X v = lam (-Y) v
    with np.errstate(all="ignore"):
        w = scipy.linalg.eigvals(X, -Y)
    bound = 1e8 * (1 + np.linalg.norm(R.A, 1) + np.linalg.norm(R.B, 1) + np.linalg.norm(R.C, 1))
    return w[np.isfinite(w) & (np.abs(w) < bound)]


def rank_formula_check(R: Realization, tol: Tolerances = DEFAULT_TOL) -> RankFormula:
    """Compare ``min_lam rank [[lam I - A, B], [C, D]]`` with ``n + min(rank B, rank C)``.

    The bordered matrix carries the realization's own ``D`` block; pass
    ``associated(R)`` for the strictly proper form with a zero block.

    The minimum over the complex plane is taken over a finite candidate set:
    cluster representatives of ``A``, the spectrum of the zero-padded square
    system matrix, and the finite eigenvalues of the pencil. The rank can
    only drop at pencil eigenvalues, so the set is exhaustive.
    """
    cands = [complex(z) for z in cluster_eigenvalues(R.A, tol).representatives]
    cands += [complex(z) for z in spectrum(assemble_L(naive_square(R)).L).values]
    cands += [complex(z) for z in _pencil_eigenvalues(R, tol)]
    # a generic point gives the normal rank even when every candidate is spurious
    cands.append(complex(1.0 + np.linalg.norm(R.A, 1), 0.5))
    best, arg = None, None
    for lam in cands:
        r = numeric_rank(_bordered(R, lam), tol)
        if best is None or r < best:
            best, arg = r, lam
    rhs = R.n + min(numeric_rank(R.B, tol), numeric_rank(R.C, tol))
    return RankFormula(best, rhs, best == rhs, arg, len(cands))
