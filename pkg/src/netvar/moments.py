"""First and second moments of the edge-indicator vector.

Each potential edge is a Bernoulli variable; the edge set of a graph is a
binary random vector whose joint behaviour is summarized here by the
marginal success probabilities, the pairwise success probabilities, and
the covariance matrix.  The default covariance estimator is the plug-in
form ``p_ij_hat - p_i_hat * p_j_hat`` built from empirical proportions; an
``m/(m-1)`` bias-corrected variant is available.

Covariance matrices of binary vectors obey hard bounds (diagonal in
[0, 1/4], Cauchy-Schwarz on the off-diagonal, non-negative eigenvalues
summing to at most k/4); :func:`validate_covariance` reports every breach.
"""

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graphs import SampleSet

SYMMETRY_TOL = 1e-12
EIG_CLAMP_TOL = 1e-9
BOUND_TOL = 1e-9


class CovMatrix:
    """Symmetric k x k covariance matrix with lazily cached eigenvalues.

    Construction accepts asymmetry up to 1e-12 in absolute value and then
    symmetrizes as (M + M^T)/2, so downstream behaviour is deterministic.
    Eigenvalues are computed once (thread-safe, idempotent), sorted in
    descending order, and clamped to 0 when within -1e-9; the raw minimum
    is kept for diagnostics.

    A ``CovMatrix`` may carry an exact rational view of its entries
    (supplied by the moment estimator or the decimal CSV parser).  The
    Monte Carlo module uses it to resolve ties exactly; when absent, the
    binary values of the float entries are taken as exact.
    """

    def __init__(self, entries, exact: tuple[tuple[Fraction, ...], ...] | None = None):
        arr = np.asarray(entries, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"covariance matrix must be square, got shape {arr.shape}")
        if arr.shape[0] < 1:
            raise ValueError("covariance matrix must be at least 1 x 1")
        if not np.isfinite(arr).all():
            raise ValueError("covariance matrix entries must be finite")
        gap = np.abs(arr - arr.T).max()
        if gap > SYMMETRY_TOL:
            raise ValueError(f"matrix asymmetric beyond {SYMMETRY_TOL}: max |M - M^T| = {gap}")
        arr = (arr + arr.T) / 2.0
        arr.setflags(write=False)
        self._entries = arr
        self._exact = exact
        self._lock = threading.Lock()
        self._spectrum: tuple[np.ndarray, float] | None = None

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def k(self) -> int:
        return self._entries.shape[0]

    def _compute_spectrum(self) -> tuple[np.ndarray, float]:
        with self._lock:
            if self._spectrum is None:
                raw = np.linalg.eigvalsh(self._entries)[::-1]
                clamped = np.where((raw < 0) & (raw >= -EIG_CLAMP_TOL), 0.0, raw)
                clamped.setflags(write=False)
                self._spectrum = (clamped, float(raw.min()))
        return self._spectrum

    @property
    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in descending order, tiny negatives clamped to 0."""
        return self._compute_spectrum()[0]

    @property
    def min_raw_eigenvalue(self) -> float:
        return self._compute_spectrum()[1]

    @property
    def clamped(self) -> bool:
        """True when the eigensolver emitted values in [-1e-9, 0)."""
        raw_min = self.min_raw_eigenvalue
        return -EIG_CLAMP_TOL <= raw_min < 0

    def trace(self) -> float:
        return float(np.trace(self._entries))

    def exact_entries(self) -> tuple[tuple[Fraction, ...], ...]:
        """Entries as exact rationals; float entries exactify bit-for-bit."""
        if self._exact is None:
            self._exact = tuple(
                tuple(Fraction(v) for v in row) for row in self._entries.tolist()
            )
        return self._exact

    def submatrix(self, idx: Sequence[int]) -> "CovMatrix":
        ids = list(idx)
        exact = None
        if self._exact is not None:
            exact = tuple(tuple(self._exact[i][j] for j in ids) for i in ids)
        return CovMatrix(self._entries[np.ix_(ids, ids)], exact=exact)

    def __repr__(self):
        return f"CovMatrix(k={self.k})"

    @classmethod
    def from_csv_text(cls, text: str) -> "CovMatrix":
        """Parse k lines of k comma-separated decimals; decimals are exact."""
        from decimal import Decimal, InvalidOperation

        rows, exact = [], []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            cells = [c.strip() for c in line.split(",")]
            try:
                exact.append(tuple(Fraction(Decimal(c)) for c in cells))
            except InvalidOperation:
                raise ValueError(f"line {lineno}: invalid number in covariance CSV") from None
            rows.append([float(c) for c in cells])
        if not rows:
            raise ValueError("empty covariance CSV")
        if any(len(r) != len(rows) for r in rows):
            raise ValueError(
                f"covariance CSV must be square, got {len(rows)} rows of widths "
                f"{sorted({len(r) for r in rows})}"
            )
        return cls(np.array(rows), exact=tuple(exact))


@dataclass(frozen=True)
class MomentEstimate:
    """Empirical first and second moments of the edge indicators.

    ``p_hat[i]`` is the edge frequency, ``p_hat2[i, j]`` the joint
    frequency of edges i and j (diagonal equals ``p_hat``), and ``sigma``
    the covariance matrix under the chosen estimator.
    """

    p_hat: np.ndarray
    p_hat2: np.ndarray
    sigma: CovMatrix
    m: int
    estimator: str = "plugin"

    def __post_init__(self):
        self.p_hat.setflags(write=False)
        self.p_hat2.setflags(write=False)

    @property
    def k(self) -> int:
        return self.p_hat.shape[0]


@dataclass(frozen=True)
class Violation:
    kind: str
    where: tuple[int, ...]
    value: float
    bound: float


@dataclass(frozen=True)
class Diagnostic:
    valid: bool
    violations: tuple[Violation, ...]

    def __bool__(self):
        return self.valid


def estimate_moments(samples: SampleSet, estimator: str = "plugin") -> MomentEstimate:
    """Estimate moments from an incidence matrix.

    The computation runs on integer counts, so every reported float is the
    correctly rounded value of a rational with denominator m (first
    moments), m^2 (plug-in covariance) or m*(m-1) (bias-corrected), and
    the covariance carries those rationals exactly.
    """
    if estimator not in ("plugin", "unbiased"):
        raise ValueError(f"estimator must be 'plugin' or 'unbiased', got {estimator!r}")
    m = samples.m
    if estimator == "unbiased" and m < 2:
        raise ValueError("bias-corrected estimator needs at least 2 samples")
    x = samples.incidence.astype(np.float64)
    s1 = np.rint(x.sum(axis=0)).astype(np.int64)
    s2 = np.rint(x.T @ x).astype(np.int64)  # exact: integer-valued float matmul

    p_hat = s1 / m
    p_hat2 = s2 / m
    num = m * s2 - np.outer(s1, s1)  # m^2 * plug-in covariance, exact integers
    den = m * m if estimator == "plugin" else m * (m - 1)
    sigma = num / den
    # diagonal in the literal p*(1-p) form; floats stay <= 1/4 exactly
    scale = 1.0 if estimator == "plugin" else m / (m - 1.0)
    np.fill_diagonal(sigma, scale * p_hat * (1.0 - p_hat))

    exact = tuple(
        tuple(Fraction(int(num[i, j]), den) for j in range(samples.k))
        for i in range(samples.k)
    )
    return MomentEstimate(p_hat, p_hat2, CovMatrix(sigma, exact=exact), m, estimator)


def validate_covariance(sigma: CovMatrix, tol: float = BOUND_TOL) -> Diagnostic:
    """Check the binary-vector covariance bounds, reporting every breach.

    Checks: diagonal within [0, 1/4], off-diagonal within the
    Cauchy-Schwarz envelope and within 1/4 in absolute value, eigenvalues
    above -1e-9, and trace at most k/4; all with ``tol`` slack.
    """
    ent = sigma.entries
    k = sigma.k
    violations: list[Violation] = []

    for i in range(k):
        d = ent[i, i]
        if d < -tol or d > 0.25 + tol:
            violations.append(Violation("diagonal_range", (i,), float(d), 0.25))
    for i in range(k):
        for j in range(i + 1, k):
            off = abs(ent[i, j])
            if off > 0.25 + tol:
                violations.append(Violation("offdiag_quarter", (i, j), float(ent[i, j]), 0.25))
            cs = np.sqrt(max(ent[i, i], 0.0) * max(ent[j, j], 0.0))
            if off > cs + tol:
                violations.append(Violation("cauchy_schwarz", (i, j), float(ent[i, j]), float(cs)))

    raw_min = sigma.min_raw_eigenvalue
    if raw_min < -tol:
        violations.append(Violation("negative_eigenvalue", (), raw_min, 0.0))
    tr = sigma.trace()
    if tr > k / 4.0 + tol:
        violations.append(Violation("trace_bound", (), tr, k / 4.0))

    return Diagnostic(valid=not violations, violations=tuple(violations))


def eigenvalues(sigma: CovMatrix) -> np.ndarray:
    """Descending eigenvalues of the covariance matrix (clamped at 0)."""
    return sigma.eigenvalues


def marginal_subvector(est: MomentEstimate, idx: Sequence[int]) -> MomentEstimate:
    """Restrict an estimate to a subset of edges.

    Any subvector of a binary random vector is again a binary random
    vector, so the restriction of the moments is the moments of the
    restriction; this function commutes with :func:`estimate_moments`.
    """
    ids = list(idx)
    if not ids:
        raise ValueError("index list must be non-empty")
    if any(not 0 <= i < est.k for i in ids):
        raise ValueError(f"indices out of range [0, {est.k})")
    if any(b <= a for a, b in zip(ids, ids[1:])):
        raise ValueError("indices must be strictly increasing")
    sel = np.array(ids)
    return MomentEstimate(
        est.p_hat[sel].copy(),
        est.p_hat2[np.ix_(sel, sel)].copy(),
        est.sigma.submatrix(ids),
        est.m,
        est.estimator,
    )


def block_independence(
    sigma: CovMatrix, part_a: Sequence[int], part_b: Sequence[int], tol: float = BOUND_TOL
) -> tuple[bool, float]:
    """Zero cross-covariance check between two disjoint index blocks.

    For binary vectors a zero cross-covariance block is equivalent to
    independence of the two subvectors.  Returns the verdict and the
    largest cross-entry magnitude.
    """
    a, b = list(part_a), list(part_b)
    if not a or not b:
        raise ValueError("both index sets must be non-empty")
    if set(a) & set(b):
        raise ValueError(f"index sets overlap: {sorted(set(a) & set(b))}")
    for i in a + b:
        if not 0 <= i < sigma.k:
            raise ValueError(f"index {i} out of range [0, {sigma.k})")
    cross = sigma.entries[np.ix_(a, b)]
    max_abs = float(np.abs(cross).max())
    return max_abs <= tol, max_abs
