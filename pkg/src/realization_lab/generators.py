"""
Random realizations whose minimality is known by construction.

Minimal systems are block-diagonal companion forms driven through the last
state of every block, hidden behind a well-conditioned similarity.
Non-minimal systems duplicate a mode so that one direction of the state is
unreachable or invisible.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericalBreakdown, PreconditionError
from .minimality import kalman_controllable, kalman_observable
from .numeric import DEFAULT_TOL, Tolerances, random_complex
from .realization import Realization

__all__ = ["companion", "random_similarity", "random_minimal", "random_nonminimal", "NONMINIMAL_KINDS"]

NONMINIMAL_KINDS = ("uncontrollable", "unobservable", "extra_mode")


def companion(roots) -> np.ndarray:
    """Companion matrix with ones on the superdiagonal and the coefficients in the last row."""
    roots = np.asarray(roots, dtype=complex)
    k = roots.size
    M = np.eye(k, k=1, dtype=complex)
    coeffs = np.poly(roots)  # leading 1, then c_{k-1}, ..., c_0
    M[-1, :] = -coeffs[::-1][:k]
    return M


def random_similarity(rng: np.random.Generator, n: int, max_cond: float = 100.0) -> np.ndarray:
    """Random complex ``S`` with condition number below `max_cond`."""
    for _ in range(100):
        S = np.eye(n) + 0.5 * random_complex(rng, (n, n)) / np.sqrt(n)
        if np.linalg.cond(S) < max_cond:
            return S
    raise NumericalBreakdown("could not draw a well-conditioned similarity")


def _partition(rng, n: int, k: int) -> list[int]:
    cuts = np.sort(rng.choice(np.arange(1, n), size=k - 1, replace=False)) if k > 1 else []
    edges = np.concatenate([[0], cuts, [n]]).astype(int)
    return [int(b - a) for a, b in zip(edges[:-1], edges[1:])]


def _conjugate(rng, A, B, C, D=None) -> Realization:
    S = random_similarity(rng, A.shape[0])
    Si = np.linalg.inv(S)
    return Realization(S @ A @ Si, S @ B, C @ Si, D)


def random_minimal(rng: np.random.Generator, n: int, m: int, p: int,
                   tol: Tolerances = DEFAULT_TOL, shared_roots: bool = True) -> Realization:
    """Random minimal ``(A, B, C)`` with ``D = 0``.

    ``A`` is block-diagonal with ``k <= min(m, p, n)`` companion blocks; with
    `shared_roots` the blocks may repeat one root, which raises the largest
    geometric multiplicity above one. Every block receives its own input
    column, and the random ``C`` is checked for observability.
    """
    if min(n, m, p) < 1:
        raise PreconditionError("n, m, p must be positive")
    for _ in range(100):
        k = int(rng.integers(1, min(m, p, n) + 1))
        sizes = _partition(rng, n, k)
        common = 2.0 * random_complex(rng, 1)[0]
        blocks, B = [], np.zeros((n, m), dtype=complex)
        row = 0
        for j, size in enumerate(sizes):
            roots = 2.0 * random_complex(rng, size)
            if shared_roots and k > 1:
                roots[0] = common
            blocks.append(companion(roots))
            row += size
            B[row - 1, j] = 1.0
        # spare inputs get generic columns
        if m > k:
            B[:, k:] = random_complex(rng, (n, m - k))
        A = np.zeros((n, n), dtype=complex)
        off = 0
        for blk in blocks:
            A[off:off + blk.shape[0], off:off + blk.shape[0]] = blk
            off += blk.shape[0]
        C = random_complex(rng, (p, n))
        if kalman_controllable(A, B, tol) and kalman_observable(A, C, tol):
            return _conjugate(rng, A, B, C)
    raise NumericalBreakdown("could not draw a minimal realization")


def random_nonminimal(rng: np.random.Generator, n: int, m: int, p: int, kind: str = "uncontrollable",
                      tol: Tolerances = DEFAULT_TOL) -> Realization:
    """Random non-minimal ``(A, B, C)`` with ``D = 0`` and ``n >= 2``.

    ``uncontrollable``: ``A = diag(A0, A0)``, ``B = [B0; B0]``, so the
    difference of the two copies is unreachable. ``unobservable``: the dual,
    ``C = [C0, C0]``. ``extra_mode``: one extra state repeating an eigenvalue
    of ``A0`` with a zero input row.
    """
    if n < 2:
        raise PreconditionError("a non-minimal realization needs n >= 2")
    if kind not in NONMINIMAL_KINDS:
        raise PreconditionError(f"kind must be one of {NONMINIMAL_KINDS}")
    if kind == "extra_mode":
        R0 = random_minimal(rng, n - 1, m, p, tol)
        lam = np.linalg.eigvals(R0.A)[0]
        A = np.zeros((n, n), dtype=complex)
        A[:-1, :-1] = R0.A
        A[-1, -1] = lam
        B = np.vstack([R0.B, np.zeros((1, m))])
        C = np.hstack([R0.C, random_complex(rng, (p, 1))])
        return _conjugate(rng, A, B, C)
    h = n // 2
    R0 = random_minimal(rng, h, m, p, tol)
    A = np.zeros((n, n), dtype=complex)
    A[:h, :h] = R0.A
    A[h:2 * h, h:2 * h] = R0.A
    if n % 2:
        A[-1, -1] = 2.0 * random_complex(rng, 1)[0]
    if kind == "uncontrollable":
        B = np.vstack([R0.B, R0.B, random_complex(rng, (n - 2 * h, m))])
        C = random_complex(rng, (p, n))
    else:
        B = random_complex(rng, (n, m))
        C = np.hstack([R0.C, R0.C, random_complex(rng, (p, n - 2 * h))])
    return _conjugate(rng, A, B, C)
