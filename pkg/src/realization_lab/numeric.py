"""
Dense complex-matrix primitives.

Every rank and spectrum decision in the package goes through this module so
that a single :class:`Tolerances` object controls all thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import pdist

from .errors import DimensionError

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "Spectrum",
    "EigenClusters",
    "Match",
    "as_cmatrix",
    "frozen",
    "norm1",
    "spectrum",
    "rank_cutoff",
    "numeric_rank",
    "rank_with_margin",
    "null_space",
    "cluster_eigenvalues",
    "matrix_polynomial",
    "polyval",
    "spectra_intersect",
    "spectra_distance",
    "random_complex",
    "child_seeds",
]


@dataclass(frozen=True)
class Tolerances:
    """Thresholds used by rank and spectrum decisions.

    Parameters
    ----------
    rank_rel : float
        Relative singular-value cutoff. A singular value counts toward the
        rank when it exceeds ``rank_rel * sigma_max * max(rows, cols)``.
    eig_match : float
        Eigenvalue matching distance, scaled by ``1 + ||M||_1`` of the source
        matrices.
    max_retries : int
        Budget for randomized constructions, epsilon halving and gain
        doubling.
    """

    rank_rel: float = 1e-9
    eig_match: float = 1e-6
    max_retries: int = 32

    def __post_init__(self):
        if not (self.rank_rel > 0 and np.isfinite(self.rank_rel)):
            raise ValueError(f"rank_rel must be positive, got {self.rank_rel!r}")
        if not (self.eig_match > 0 and np.isfinite(self.eig_match)):
            raise ValueError(f"eig_match must be positive, got {self.eig_match!r}")
        if int(self.max_retries) != self.max_retries or self.max_retries < 0:
            raise ValueError(f"max_retries must be a non-negative integer, got {self.max_retries!r}")

    def replace(self, **changes) -> "Tolerances":
        data = self.to_dict()
        data.update({k: v for k, v in changes.items() if v is not None})
        return Tolerances(**data)

    def to_dict(self) -> dict:
        return {"rank_rel": self.rank_rel, "eig_match": self.eig_match,
                "max_retries": int(self.max_retries)}


DEFAULT_TOL = Tolerances()


def frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_cmatrix(M, name: str = "matrix") -> np.ndarray:
    """Return `M` as a finite 2-D complex128 array (copy, read-only)."""
    a = np.array(M, dtype=complex, copy=True)
    if a.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DimensionError(f"{name} has non-finite entries")
    return frozen(a)


def norm1(M) -> float:
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 1))


def child_seeds(seed, k: int) -> list:
    """`k` independent seed sequences derived from an int or a ``SeedSequence``."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return seed.spawn(k)


def random_complex(rng: np.random.Generator, shape) -> np.ndarray:
    """Unit-variance circular complex Gaussian samples."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


# ---------------------------------------------------------------- spectra ---

@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues of a square matrix, with multiplicity.

    ``scale`` is the 1-norm of the source matrix; it sets the matching
    radius in :func:`spectra_intersect`.
    """

    values: np.ndarray
    source_dim: int
    scale: float = 0.0

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex).ravel()
        if vals.size != self.source_dim:
            raise DimensionError(
                f"spectrum has {vals.size} values for source dimension {self.source_dim}")
        object.__setattr__(self, "values", frozen(vals))

    @classmethod
    def of(cls, values: Sequence[complex], scale: float = 0.0) -> "Spectrum":
        vals = np.asarray(values, dtype=complex).ravel()
        return cls(vals, vals.size, float(scale))

    def __len__(self):
        return self.source_dim

    def __iter__(self):
        return iter(self.values)

    def sorted(self) -> np.ndarray:
        """Values in lexicographic (real, imag) order."""
        return self.values[np.lexsort((self.values.imag, self.values.real))]


def _is_triangular(M: np.ndarray) -> bool:
    return not np.any(np.tril(M, -1)) or not np.any(np.triu(M, 1))


def spectrum(M) -> Spectrum:
    """All eigenvalues of square `M`.

    Triangular inputs return their diagonal verbatim, which keeps exactly
    specified Jordan matrices free of the ``eps**(1/k)`` splitting a dense
    eigensolver would introduce.
    """
    M = as_cmatrix(M)
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"spectrum needs a square matrix, got {M.shape}")
    if _is_triangular(M):
        vals = np.diag(M).copy()
    else:
        vals = scipy.linalg.eigvals(M)
    return Spectrum(vals, M.shape[0], norm1(M))


# ------------------------------------------------------------------- rank ---

def rank_cutoff(s: np.ndarray, shape, tol: Tolerances = DEFAULT_TOL, scale: float = 0.0) -> float:
    """``rank_rel * max(sigma_max, scale) * max(shape)``.

    `scale` floors the reference magnitude; pass ``||A||`` when ranking a
    shifted matrix ``A - lam I`` whose own norm may be pure rounding noise.
    """
    top = float(s[0]) if s.size else 0.0
    return tol.rank_rel * max(top, scale) * max(shape)


def numeric_rank(M, tol: Tolerances = DEFAULT_TOL, scale: float = 0.0) -> int:
    """Number of singular values above the cutoff (0 for a zero matrix)."""
    M = np.asarray(M, dtype=complex)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.count_nonzero(s > rank_cutoff(s, M.shape, tol, scale)))


class RankMargin(NamedTuple):
    rank: int
    sigma: float
    cutoff: float

    @property
    def ratio(self) -> float:
        """``sigma / cutoff`` for the singular value deciding full rank."""
        if self.cutoff == 0:
            return float("inf") if self.sigma > 0 else 0.0
        return self.sigma / self.cutoff


def rank_with_margin(M, target: int, tol: Tolerances = DEFAULT_TOL, scale: float = 0.0) -> RankMargin:
    """Numeric rank plus the `target`-th singular value and the cutoff.

    The ratio ``sigma/cutoff`` exceeds one exactly when the rank reaches
    `target`, so it doubles as the clearance margin of a full-rank test.
    """
    M = np.asarray(M, dtype=complex)
    s = np.linalg.svd(M, compute_uv=False) if M.size else np.zeros(0)
    cutoff = rank_cutoff(s, M.shape, tol, scale)
    rank = int(np.count_nonzero(s > cutoff)) if s.size and s[0] > 0 else 0
    sigma = float(s[target - 1]) if 0 < target <= s.size else 0.0
    return RankMargin(rank, sigma, cutoff)


def null_space(M, tol: Tolerances = DEFAULT_TOL, scale: float = 0.0) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical null space of `M`."""
    M = np.asarray(M, dtype=complex)
    rows, cols = M.shape
    if M.size == 0:
        return np.eye(cols, dtype=complex)
    _, s, vh = np.linalg.svd(M)
    r = int(np.count_nonzero(s > rank_cutoff(s, M.shape, tol, scale))) if s[0] > 0 else 0
    return vh[r:].conj().T.copy()


# ------------------------------------------------------------- clustering ---

@dataclass(frozen=True, eq=False)
class EigenClusters:
    """Distinct eigenvalues with algebraic and geometric multiplicities."""

    representatives: np.ndarray
    algebraic_mult: tuple
    geometric_mult: tuple
    diameters: tuple = field(default=())
    warning: str | None = None

    @property
    def q(self) -> int:
        return len(self.algebraic_mult)

    @property
    def alpha(self) -> int:
        return max(self.geometric_mult)

    def gap(self) -> float:
        """Smallest distance between distinct representatives (inf when q = 1)."""
        reps = self.representatives
        if reps.size < 2:
            return float("inf")
        d = np.abs(reps[:, None] - reps[None, :])
        return float(d[np.triu_indices(reps.size, 1)].min())


def cluster_eigenvalues(A, tol: Tolerances = DEFAULT_TOL) -> EigenClusters:
    """Group eigenvalues of `A` by single linkage at radius ``eig_match*(1+||A||_1)``.

    The representative of each cluster is the member mean; geometric
    multiplicity is ``n - rank(A - rep*I)``.
    """
    A = as_cmatrix(A, "A")
    n = A.shape[0]
    spec = spectrum(A)
    vals = spec.values
    radius = tol.eig_match * (1.0 + spec.scale)
    if n == 1:
        labels = np.array([1])
    else:
        pts = np.column_stack([vals.real, vals.imag])
        labels = fcluster(linkage(pdist(pts), method="single"), t=radius, criterion="distance")

    groups = []
    for lab in np.unique(labels):
        members = vals[labels == lab]
        groups.append(members)
    reps = np.array([g.mean() for g in groups], dtype=complex)
    order = np.lexsort((reps.imag, reps.real))
    groups = [groups[i] for i in order]
    reps = reps[order]

    notes = []
    alg, geo, diam = [], [], []
    eye = np.eye(n)
    a_norm = float(np.linalg.norm(A, 2))
    for rep, members in zip(reps, groups):
        d = float(np.max(np.abs(members[:, None] - members[None, :]))) if members.size > 1 else 0.0
        g = n - numeric_rank(A - rep * eye, tol, scale=a_norm)
        if not 1 <= g <= members.size:
            notes.append(f"geometric multiplicity {g} at {rep:.6g} clipped to [1, {members.size}]")
            g = min(max(g, 1), members.size)
        alg.append(int(members.size))
        geo.append(int(g))
        diam.append(d)
    if any(d > 10 * radius for d in diam):
        notes.append(f"cluster diameter {max(diam):.3g} exceeds 10x matching radius {radius:.3g}")
    warning = "; ".join(notes) or None
    return EigenClusters(frozen(reps), tuple(alg), tuple(geo), tuple(diam), warning)


# ------------------------------------------------------------ polynomials ---

def matrix_polynomial(coeffs: Sequence[complex], M) -> np.ndarray:
    """Evaluate ``sum_k coeffs[k] * M**k`` by Horner's rule."""
    coeffs = [complex(c) for c in coeffs]
    if not coeffs:
        raise ValueError("polynomial needs at least one coefficient")
    M = as_cmatrix(M)
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"matrix polynomial needs a square matrix, got {M.shape}")
    eye = np.eye(M.shape[0], dtype=complex)
    out = coeffs[-1] * eye
    for c in reversed(coeffs[:-1]):
        out = out @ M + c * eye
    return out


def polyval(coeffs: Sequence[complex], x):
    """Scalar counterpart of :func:`matrix_polynomial` (same coefficient order)."""
    out = 0j
    for c in reversed(list(coeffs)):
        out = out * x + complex(c)
    return out


# --------------------------------------------------------------- matching ---

class Match(NamedTuple):
    left: complex
    right: complex
    distance: float


def _threshold(S1: Spectrum, S2: Spectrum, tol: Tolerances) -> float:
    return tol.eig_match * (1.0 + max(S1.scale, S2.scale))


def spectra_intersect(S1: Spectrum, S2: Spectrum, tol: Tolerances = DEFAULT_TOL) -> list[Match]:
    """Greedy minimum-distance matching of two spectra.

    A pair is reported when its distance is at most
    ``eig_match * (1 + max(S1.scale, S2.scale))``. Each value is used at
    most once, so multiplicities are respected. An empty list certifies
    disjointness at that tolerance.
    """
    a, b = S1.values, S2.values
    if a.size == 0 or b.size == 0:
        return []
    thr = _threshold(S1, S2, tol)
    d = np.abs(a[:, None] - b[None, :])
    flat = np.argsort(d, axis=None, kind="stable")
    used_a = np.zeros(a.size, bool)
    used_b = np.zeros(b.size, bool)
    out = []
    for k in flat:
        i, j = divmod(int(k), b.size)
        if d[i, j] > thr:
            break
        if used_a[i] or used_b[j]:
            continue
        used_a[i] = used_b[j] = True
        out.append(Match(complex(a[i]), complex(b[j]), float(d[i, j])))
    return out


def spectra_distance(S1: Spectrum, S2: Spectrum) -> float:
    """Smallest distance between any value of `S1` and any value of `S2`."""
    if len(S1) == 0 or len(S2) == 0:
        return float("inf")
    return float(np.min(np.abs(S1.values[:, None] - S2.values[None, :])))
