"""
Spectral minimality criteria built on static output feedback and on
completions of ``[[A, B], [C, *]]``.

Four verdicts are computed independently and compared:

(i)   PBH minimality;
(ii)  some gain ``K`` separates ``spect(A)`` from ``spect(A + BKC)``;
(iii) for each distinct eigenvalue ``l_j`` of ``A``, the completion
      ``D_j = (l_j - eps) I`` keeps ``l_j`` out of the spectrum of
      ``[[A, B], [C, D_j]]`` (on a square, full-rank counterpart);
(iv)  no eigenvalue of ``A`` survives in the spectrum of
      ``[[A, B], [C, D]]`` for every ``D``: proved by the per-eigenvalue
      completions of (iii), corroborated by random ``D`` samples.

The gain/completion bridge ``K = (lam I - D)^{-1}`` links (ii) and (iii):
for ``lam`` outside ``spect(D)``, ``lam`` is an eigenvalue of the completed
matrix iff it is an eigenvalue of ``A + B K C``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import NoGainFound, PreconditionError, SingularBridgeError
from .minimality import MinimalityVerdict, is_minimal
from .minimality import alpha as alpha_of
from .numeric import (DEFAULT_TOL, Match, Spectrum, Tolerances, as_cmatrix, child_seeds,
                      cluster_eigenvalues, norm1, numeric_rank, random_complex, spectra_distance,
                      spectra_intersect, spectrum)
from .realization import Realization, associated
from .squaring import construct_Tb, construct_Tc, square_realization

__all__ = [
    "FeedbackGain",
    "LambdaCheck",
    "Criterion3",
    "Criterion4",
    "CriteriaReport",
    "find_disjoining_feedback",
    "criterion_iii",
    "feedback_completion_bridge",
    "completion_disjoint",
    "per_eigenvalue_completion",
    "siso_all_D_check",
    "squared_counterpart",
    "sample_persistent_eigenvalues",
    "minimality_equivalence_report",
]


def _system_matrix(A, B, C, D) -> np.ndarray:
    return np.block([[A, B], [C, D]])


def _sample_scale(A) -> float:
    """Magnitude for random ``D`` draws: one plus the spectral radius of `A`.

    An eigenvalue of ``A`` can sit within ``O(1/|D|)`` of ``spect(L)`` while
    the matching radius grows like ``|D|``, so draws far beyond the spectrum
    would only probe the tolerance.
    """
    return 1.0 + float(np.max(np.abs(spectrum(A).values)))


# ------------------------------------------------------------ criterion ii ---

class FeedbackGain(NamedTuple):
    K: np.ndarray
    eta: float
    distance: float
    certified_factors: bool


def _gain_factors(R: Realization, tol: Tolerances, seed) -> tuple[np.ndarray, np.ndarray, bool]:
    """``T_b``, ``T_c`` from the squaring module, or generic full-rank stand-ins.

    The fallback only fires when ``(A, B)`` or ``(A, C)`` fails PBH; no gain
    can separate the spectra then, so the factors merely have to exist.
    """
    seed_b, seed_c = child_seeds(seed, 2)
    try:
        return construct_Tb(R.A, R.B, tol, seed_b), construct_Tc(R.A, R.C, tol, seed_c), True
    except PreconditionError:
        k = max(1, min(alpha_of(R.A, tol), R.m, R.p))
        rng = np.random.default_rng(seed_b)
        return random_complex(rng, (R.m, k)), random_complex(rng, (k, R.p)), False


def find_disjoining_feedback(R: Realization, tol: Tolerances = DEFAULT_TOL, seed: int = 0) -> FeedbackGain:
    """Gain ``K = eta T_b T_c`` with ``spect(A)`` and ``spect(A + BKC)`` disjoint.

    ``eta`` doubles from 1 up to ``2**max_retries``; the first success is
    returned. Works on the strictly proper part of `R`.

    Raises
    ------
    NoGainFound
        When escalation is exhausted; evidence that `R` is not minimal.
    """
    Ra = associated(R)
    T_b, T_c, certified = _gain_factors(Ra, tol, seed)
    base = T_b @ T_c
    spec_a = spectrum(Ra.A)
    persistent = None
    eta = 1.0
    for i in range(tol.max_retries + 1):
        eta = 2.0 ** i
        K = eta * base
        spec_cl = spectrum(Ra.A + Ra.B @ K @ Ra.C)
        matched = spectra_intersect(spec_a, spec_cl, tol)
        if not matched:
            return FeedbackGain(K, eta, spectra_distance(spec_a, spec_cl), certified)
        persistent = matched[0].left
    raise NoGainFound(f"no separating gain up to eta={eta:g}", last_eta=eta, persistent=persistent)


# ----------------------------------------------------------- criterion iii ---

class LambdaCheck(NamedTuple):
    lam: complex
    spectrum: np.ndarray
    disjoint: bool
    distance: float


@dataclass(frozen=True, eq=False)
class Criterion3:
    holds: bool
    epsilon: float
    per_lambda: tuple
    literal_intersection: tuple = ()
    halvings: int = 0

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "epsilon": self.epsilon,
            "halvings": self.halvings,
            "per_lambda": [{"lambda": c.lam, "spectrum": c.spectrum, "disjoint": c.disjoint,
                            "distance": c.distance} for c in self.per_lambda],
            "literal_intersection": list(self.literal_intersection),
        }


def _epsilon0(reps: np.ndarray) -> float:
    if reps.size < 2:
        return 1.0
    d = np.abs(reps[:, None] - reps[None, :])
    return float(d[np.triu_indices(reps.size, 1)].min()) / 8.0


def _require_square_full_rank(A, B, C, tol):
    n, m = B.shape
    p = C.shape[0]
    if m != p:
        raise PreconditionError(f"needs m = p, got m={m}, p={p}; square the system first")
    if numeric_rank(B, tol) < m or numeric_rank(C, tol) < p:
        raise PreconditionError("needs full-rank B and C; use the squared counterpart")


def _per_lambda(A, B, C, reps, eps, tol) -> list[LambdaCheck]:
    p = C.shape[0]
    scale_a = norm1(A)
    out = []
    for lam in reps:
        Lj = _system_matrix(A, B, C, (lam - eps) * np.eye(p))
        sj = spectrum(Lj)
        probe = Spectrum.of([lam], scale_a)
        hit = spectra_intersect(probe, sj, tol)
        out.append(LambdaCheck(complex(lam), sj.values, not hit, spectra_distance(probe, sj)))
    return out


def criterion_iii(R_sq: Realization, tol: Tolerances = DEFAULT_TOL) -> Criterion3:
    """Per-eigenvalue completion test on a square realization with full-rank ``B``, ``C``.

    ``eps`` starts at one eighth of the smallest gap between distinct
    eigenvalues of ``A`` (1 when there is only one) and is halved, up to
    ``max_retries`` times, while some ``l_j`` stays in the spectrum of its
    completed matrix. ``literal_intersection`` lists eigenvalues of ``A``
    present in every completed spectrum at the final ``eps``.
    """
    A, B, C = R_sq.A, R_sq.B, R_sq.C
    _require_square_full_rank(A, B, C, tol)
    reps = cluster_eigenvalues(A, tol).representatives
    eps = _epsilon0(reps)
    for halvings in range(tol.max_retries + 1):
        checks = _per_lambda(A, B, C, reps, eps, tol)
        if all(c.disjoint for c in checks):
            break
        eps /= 2.0
    else:
        eps *= 2.0
        halvings = tol.max_retries
    literal = []
    scale_a = norm1(A)
    for lam in reps:
        probe = Spectrum.of([lam], scale_a)
        if all(spectra_intersect(probe, Spectrum.of(c.spectrum, scale_a), tol) for c in checks):
            literal.append(complex(lam))
    return Criterion3(all(c.disjoint for c in checks), eps, tuple(checks), tuple(literal), halvings)


def per_eigenvalue_completion(A, B, C, tol: Tolerances = DEFAULT_TOL) -> list[tuple[complex, np.ndarray, bool]]:
    """``(l_j, D_j, cleared)`` for ``D_j = (l_j - eps) I`` with the criterion (iii) ``eps``."""
    crit = criterion_iii(Realization(A, B, C), tol)
    p = np.asarray(C).shape[0]
    return [(c.lam, (c.lam - crit.epsilon) * np.eye(p, dtype=complex), c.disjoint)
            for c in crit.per_lambda]


# ----------------------------------------------------------------- bridge ---

def feedback_completion_bridge(D, lam: complex, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Gain ``K = (lam I - D)^{-1}`` equivalent to completing with `D` at `lam`."""
    D = as_cmatrix(D, "D")
    if D.shape[0] != D.shape[1]:
        raise PreconditionError(f"D must be square, got {D.shape}")
    spec = spectrum(D)
    radius = tol.eig_match * (1.0 + spec.scale)
    if np.min(np.abs(spec.values - lam)) <= radius:
        raise SingularBridgeError(f"lambda={lam} is an eigenvalue of D")
    return np.linalg.inv(lam * np.eye(D.shape[0]) - D)


def completion_disjoint(A, B, C, D, tol: Tolerances = DEFAULT_TOL) -> tuple[bool, list[Match]]:
    """Whether ``spect(A)`` and ``spect([[A, B], [C, D]])`` are disjoint, with the matches."""
    A, B, C, D = (as_cmatrix(X, name) for X, name in zip((A, B, C, D), "ABCD"))
    if D.shape != (C.shape[0], B.shape[1]):
        raise PreconditionError(f"D must be {C.shape[0]} x {B.shape[1]}, got {D.shape}")
    if B.shape[1] != C.shape[0]:
        raise PreconditionError("completion needs m = p")
    matched = spectra_intersect(spectrum(A), spectrum(_system_matrix(A, B, C, D)), tol)
    return not matched, matched


def siso_all_D_check(R: Realization, d_samples: int = 100, seed: int = 0,
                     tol: Tolerances = DEFAULT_TOL) -> bool:
    """For scalar minimal `R`, no completion ``D`` lets an eigenvalue of ``A`` into the spectrum.

    Checks ``D = 0``, ``D = l_j`` for each distinct eigenvalue, and
    `d_samples` random complex scalars scaled by one plus the spectral radius of ``A``.
    """
    if R.m != 1 or R.p != 1:
        raise PreconditionError(f"needs a scalar system, got m={R.m}, p={R.p}")
    if not is_minimal(R, tol).minimal:
        raise PreconditionError("needs a minimal realization")
    rng = np.random.default_rng(seed)
    scale = _sample_scale(R.A)
    ds = [0j] + [complex(z) for z in cluster_eigenvalues(R.A, tol).representatives]
    ds += [complex(z) for z in scale * random_complex(rng, d_samples)]
    return all(completion_disjoint(R.A, R.B, R.C, [[d]], tol)[0] for d in ds)


# ------------------------------------------------------------ full report ---

def squared_counterpart(R: Realization, tol: Tolerances = DEFAULT_TOL, seed: int = 0) -> Realization | None:
    """Square realization with full-rank ``B``, ``C`` sharing ``A`` with `R`.

    Minimal inputs go through :func:`square_realization`. Otherwise ``B`` and
    ``C`` are compressed by generic full-rank factors to
    ``k = min(alpha, rank B, rank C)`` columns/rows, which cannot create
    controllability or observability. Returns None when ``B`` or ``C`` is zero.
    """
    try:
        return square_realization(R, tol, seed)[0]
    except PreconditionError:
        pass
    k = min(alpha_of(R.A, tol), numeric_rank(R.B, tol), numeric_rank(R.C, tol))
    if k == 0:
        return None
    rng = np.random.default_rng(child_seeds(seed, 3)[2])
    for _ in range(tol.max_retries + 1):
        T_b = random_complex(rng, (R.m, k))
        T_c = random_complex(rng, (k, R.p))
        B, C = R.B @ T_b, T_c @ R.C
        if numeric_rank(B, tol) == k and numeric_rank(C, tol) == k:
            return Realization(R.A, B, C, T_c @ R.D @ T_b)
    return None


@dataclass(frozen=True, eq=False)
class Criterion4:
    proved: bool
    completions: tuple
    holds_on_samples: bool
    persistent_lambda: complex | None
    samples: int

    def to_dict(self) -> dict:
        return {
            "proved": self.proved,
            "holds_on_samples": self.holds_on_samples,
            "persistent_lambda": self.persistent_lambda,
            "samples": self.samples,
            "completions": [{"lambda": lam, "D": D, "cleared": ok} for lam, D, ok in self.completions],
        }


def sample_persistent_eigenvalues(R: Realization, samples: int, seed, tol: Tolerances = DEFAULT_TOL) -> list[complex]:
    """Eigenvalues of ``A`` found in ``spect([[A, B], [C, D]])`` for every sampled ``D``."""
    rng = np.random.default_rng(seed)
    reps = cluster_eigenvalues(R.A, tol).representatives
    scale_a = norm1(R.A)
    d_scale = _sample_scale(R.A)
    alive = np.ones(reps.size, bool)
    for _ in range(samples):
        D = d_scale * random_complex(rng, (R.p, R.m))
        sL = spectrum(_system_matrix(R.A, R.B, R.C, D))
        for i, lam in enumerate(reps):
            if alive[i] and not spectra_intersect(Spectrum.of([lam], scale_a), sL, tol):
                alive[i] = False
    return [complex(z) for z in reps[alive]]


@dataclass(frozen=True, eq=False)
class CriteriaReport:
    crit_i: MinimalityVerdict
    crit_ii: dict
    crit_iii: Criterion3 | None
    crit_iv: Criterion4
    squared_dims: tuple | None = None
    notes: tuple = field(default=())

    @property
    def verdicts(self) -> dict:
        return {
            "i": self.crit_i.minimal,
            "ii": self.crit_ii["holds"],
            "iii": self.crit_iii.holds if self.crit_iii is not None else False,
            "iv": self.crit_iv.proved,
            "iv_sampled": self.crit_iv.holds_on_samples,
        }

    @property
    def consistent(self) -> bool:
        return len(set(self.verdicts.values())) == 1

    def to_dict(self) -> dict:
        return {
            "crit_i": self.crit_i.to_dict(),
            "crit_ii": dict(self.crit_ii),
            "crit_iii": None if self.crit_iii is None else self.crit_iii.to_dict(),
            "crit_iv": self.crit_iv.to_dict(),
            "squared_dims": None if self.squared_dims is None else list(self.squared_dims),
            "verdicts": self.verdicts,
            "consistent": self.consistent,
            "notes": list(self.notes),
        }


def minimality_equivalence_report(R: Realization, tol: Tolerances = DEFAULT_TOL, seed: int = 0,
                                  d_samples: int = 20) -> CriteriaReport:
    """Run criteria (i) to (iv) on `R` and report whether they agree.

    Non-disjointness for one particular ``D`` is never read as
    non-minimality; criterion (iv) is decided by the per-eigenvalue
    completions and only corroborated by the random samples.
    """
    ss = child_seeds(seed, 3)
    notes = []
    crit_i = is_minimal(R, tol)

    try:
        gain = find_disjoining_feedback(R, tol, ss[0])
        crit_ii = {"holds": True, "K": gain.K, "eta": gain.eta, "distance": gain.distance,
                   "certified_factors": gain.certified_factors}
    except NoGainFound as exc:
        crit_ii = {"holds": False, "K": None, "eta": exc.last_eta, "persistent": exc.persistent}

    Rsq = squared_counterpart(R, tol, ss[1])
    if Rsq is None:
        notes.append("B or C is zero; no full-rank squared counterpart exists")
        reps = cluster_eigenvalues(R.A, tol).representatives
        crit_iii = None
        crit_iv = Criterion4(False, (), False, complex(reps[0]), 0)
        return CriteriaReport(crit_i, crit_ii, crit_iii, crit_iv, None, tuple(notes))

    crit_iii = criterion_iii(Rsq, tol)
    completions = tuple((c.lam, (c.lam - crit_iii.epsilon) * np.eye(Rsq.p, dtype=complex), c.disjoint)
                        for c in crit_iii.per_lambda)
    persistent = sample_persistent_eigenvalues(Rsq, d_samples, ss[2], tol)
    crit_iv = Criterion4(
        proved=all(ok for _, _, ok in completions),
        completions=completions,
        holds_on_samples=not persistent,
        persistent_lambda=persistent[0] if persistent else None,
        samples=d_samples,
    )
    return CriteriaReport(crit_i, crit_ii, crit_iii, crit_iv, Rsq.dims, tuple(notes))
