"""
Families of realizations generated from one system matrix ``L``:
polynomials ``psi(L)`` read as realization matrices, the inverse ``L^{-1}``,
and a randomized probe for minimal square systems whose ``A`` shares an
eigenvalue with ``L``.

For square ``L`` the implications

    spect(A~) and spect(psi(L)) disjoint  =>  psi(L) minimal  =>  L minimal

hold for every polynomial ``psi``; :func:`family_report` checks them per
instance and treats a violation as a numerical problem.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvariantFailure, PreconditionError, SingularFamilyError
from .generators import random_minimal
from .minimality import is_minimal
from .numeric import (DEFAULT_TOL, Tolerances, as_cmatrix, matrix_polynomial, numeric_rank, polyval,
                      spectra_intersect, spectrum)
from .realization import Realization, assemble_L, split_L

__all__ = [
    "FamilyReport",
    "psi_realization",
    "family_report",
    "invariant_subspace_containment",
    "inverse_matrix_family",
    "ProbeStats",
    "conjecture_probe",
]


def _require_square(R: Realization):
    if R.m != R.p:
        raise PreconditionError(f"system matrix must be square, got m={R.m}, p={R.p}")


def psi_realization(R: Realization, psi: Sequence[complex]) -> Realization:
    """Split ``psi(L)`` at the block boundary of ``L``.

    `psi` holds ascending coefficients, ``psi(s) = psi[0] + psi[1] s + ...``.
    A constant polynomial gives ``(c I, 0, 0, c I)``.
    """
    _require_square(R)
    P = matrix_polynomial(psi, assemble_L(R).L)
    n = R.n
    return Realization(P[:n, :n], P[:n, n:], P[n:, :n], P[n:, n:])


@dataclass(frozen=True, eq=False)
class FamilyReport:
    psi_coeffs: tuple
    tilde: Realization
    crit_i_tilde: bool
    minimal_tilde: bool
    minimal_L: bool
    chain_respected: bool

    def to_dict(self) -> dict:
        return {
            "psi_coeffs": list(self.psi_coeffs),
            "tilde": self.tilde.to_dict(),
            "spectrum_psi_L": spectrum(assemble_L(self.tilde).L).sorted(),
            "crit_i_tilde": self.crit_i_tilde,
            "minimal_tilde": self.minimal_tilde,
            "minimal_L": self.minimal_L,
            "chain_respected": self.chain_respected,
        }


def family_report(R: Realization, psi: Sequence[complex], tol: Tolerances = DEFAULT_TOL) -> FamilyReport:
    """Evaluate the disjointness / minimality chain for ``psi(L)``.

    Raises
    ------
    InvariantFailure
        If the chain is violated, which can only come from tolerance trouble.
    """
    tilde = psi_realization(R, psi)
    disjoint = not spectra_intersect(spectrum(tilde.A), spectrum(assemble_L(tilde).L), tol)
    min_tilde = is_minimal(tilde, tol).minimal
    min_L = is_minimal(R, tol).minimal
    chain = not (disjoint and not min_tilde) and not (min_tilde and not min_L)
    if not chain:
        raise InvariantFailure(
            f"implication chain violated (disjoint={disjoint}, minimal psi(L)={min_tilde}, "
            f"minimal L={min_L}); tolerances are likely too loose or too tight")
    return FamilyReport(tuple(complex(c) for c in psi), tilde, disjoint, min_tilde, min_L, chain)


def invariant_subspace_containment(L, psi: Sequence[complex], tol: Tolerances = DEFAULT_TOL) -> bool:
    """Every right and left eigenvector of `L` is an eigenvector of ``psi(L)``.

    Checks ``||psi(L) v - psi(lam) v|| <= 1e-8 (1 + ||psi(L)||) ||v||`` for the
    eigenvectors of ``L`` and of ``L*`` (the left ones). Generalized
    eigenvectors of defective ``L`` are not examined.
    """
    L = as_cmatrix(L, "L")
    if L.shape[0] != L.shape[1]:
        raise PreconditionError(f"L must be square, got {L.shape}")
    P = matrix_polynomial(psi, L)
    bound = 1e-8 * (1.0 + np.linalg.norm(P, 2))
    coeffs = np.asarray(psi, dtype=complex)
    for M, Q, cs in ((L, P, coeffs), (L.conj().T, P.conj().T, coeffs.conj())):
        w, V = np.linalg.eig(M)
        for lam, v in zip(w, V.T):
            if np.linalg.norm(Q @ v - polyval(cs, lam) * v) > bound * np.linalg.norm(v):
                return False
    return True


def inverse_matrix_family(R: Realization, tol: Tolerances = DEFAULT_TOL) -> Realization:
    """Split ``L^{-1}`` at the block boundary of ``L``.

    Raises
    ------
    SingularFamilyError
        If ``L`` is rectangular or numerically singular.
    """
    _require_square(R)
    L = assemble_L(R).L
    if numeric_rank(L, tol) < L.shape[0]:
        raise SingularFamilyError("system matrix is singular")
    return split_L(np.linalg.inv(L), R.n)


@dataclass(frozen=True, eq=False)
class ProbeStats:
    trials: int
    minimal_checked: int
    intersecting: int
    min_distance: float | None
    candidate_trial: int | None

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "minimal_checked": self.minimal_checked,
            "intersecting": self.intersecting,
            "min_distance": self.min_distance,
            "candidate_trial": self.candidate_trial,
        }


def conjecture_probe(n: int, p: int, trials: int, seed: int = 0,
                     tol: Tolerances = DEFAULT_TOL) -> tuple[Realization | None, ProbeStats]:
    """Search random minimal square systems with ``D = 0`` for ``spect(A)`` meeting ``spect(L)``.

    Trial ``i`` uses the generator seeded with ``(seed, i)``. A match counts
    as a candidate only when its distance is below a tenth of the matching
    threshold, which filters out near misses. The first candidate is returned
    together with the statistics; nothing is claimed either way.
    """
    if p < 1 or n < 1:
        raise PreconditionError("n and p must be positive")
    if trials <= 0:
        return None, ProbeStats(0, 0, 0, None, None)
    checked = hits = 0
    dmin = np.inf
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        R = random_minimal(rng, n, p, p, tol)
        if not is_minimal(R, tol).minimal:
            continue
        checked += 1
        sA, sL = spectrum(R.A), spectrum(assemble_L(R).L)
        d = float(np.min(np.abs(sA.values[:, None] - sL.values[None, :])))
        dmin = min(dmin, d)
        threshold = tol.eig_match * (1.0 + max(sA.scale, sL.scale))
        if any(mt.distance <= threshold / 10.0 for mt in spectra_intersect(sA, sL, tol)):
            hits += 1
            return R, ProbeStats(i + 1, checked, hits, dmin, i)
    return None, ProbeStats(trials, checked, hits, float(dmin) if checked else None, None)
