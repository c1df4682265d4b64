"""Monte Carlo significance values under the maximum-entropy null.

Replicates draw an m x k matrix of independent fair bits, form the
plug-in covariance, and evaluate a distance-from-maximum-entropy
statistic (large means far from the null):

* total:       k/4 - tr(sigma*)
* generalized: 4^-k - det(sigma*)
* frobenius:   sum((lambda* - 1/4)^2)

The p-value is the proportion of replicates whose statistic is >= the
observed one.  Two implementation guarantees matter here:

1. Determinism and thread-count invariance.  Work is split into chunks
   whose size depends only on (m, k); chunk c draws from a counter-based
   generator keyed by (seed, c), so every replicate's randomness is a
   pure function of (seed, replicate index) and the tally is identical
   for any number of workers.

2. Exact ties.  Replicate statistics are rationals with denominator m^2;
   an observed covariance that sits exactly on such a rational (it does
   for covariance matrices entered as decimals, and for any covariance
   estimated from a sample set) ties with positive probability.  Floats
   cannot resolve those ties reliably, so replicates within a small
   margin of the observed value are re-evaluated in exact rational
   arithmetic.  ``p_value * R`` is therefore exactly the number of
   replicates with statistic >= observed.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import lcm, sqrt

import numpy as np

from .moments import CovMatrix
from .variability import StatKind

CHUNK_TARGET = 1 << 22  # bernoulli draws per chunk, caps worker memory
NEAR_TIE_REL = 1e-11  # well above kernel float error, well below grid spacing
EXACT_TIE_MAX_K = 64  # beyond this, tie atoms are unreachable; floats decide


@dataclass(frozen=True)
class McConfig:
    replicates: int
    m: int
    k: int
    seed: int
    stat: StatKind

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError(f"replicate count must be >= 1, got {self.replicates}")
        if self.m < 1 or self.k < 1:
            raise ValueError(f"need m >= 1 and k >= 1, got m={self.m}, k={self.k}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


@dataclass(frozen=True)
class McEstimate:
    p_value: float
    replicates: int
    stderr: float
    seed: int
    observed_statistic: float
    stat: StatKind
    estimator: str = "proportion"

    @property
    def below_resolution(self) -> bool:
        """True when no replicate reached the observed statistic (p < 1/R)."""
        return self.p_value == 0.0


def _chunk_size(m: int, k: int) -> int:
    return max(1, min(4096, CHUNK_TARGET // max(1, m * k)))


def _chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    key = np.array([seed, chunk_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _resolve_workers(workers: int | None) -> int:
    cap = os.environ.get("NETVAR_THREADS")
    limit = max(1, int(cap)) if cap else None
    w = workers if workers is not None else (os.cpu_count() or 1)
    if limit is not None:
        w = min(w, limit)
    return max(1, w)


def _draw_counts(seed: int, chunk_index: int, n: int, m: int, k: int):
    """Integer-valued count arrays for n replicates: column sums and cross sums."""
    x = (_chunk_rng(seed, chunk_index).random((n, m, k)) < 0.5).astype(np.float64)
    s1 = x.sum(axis=1)
    s2 = np.matmul(x.transpose(0, 2, 1), x)  # exact: entries are integers < 2^53
    return s1, s2


def _float_stats(kind: StatKind, s1, s2, m: int, k: int) -> np.ndarray:
    """Vectorized statistic over replicates from the count arrays."""
    cov = (m * s2 - s1[:, :, None] * s1[:, None, :]) / float(m * m)
    if kind is StatKind.TOTAL:
        return k / 4.0 - np.trace(cov, axis1=1, axis2=2)
    if kind is StatKind.GENERALIZED:
        return 4.0 ** (-k) - np.linalg.det(cov)
    diff = cov - 0.25 * np.eye(k)
    return (diff * diff).sum(axis=(1, 2))


def _int_det(mat: list[list[int]]) -> int:
    """Fraction-free Bareiss determinant of an integer matrix."""
    n = len(mat)
    m = [row[:] for row in mat]
    sign, prev = 1, 1
    for i in range(n - 1):
        if m[i][i] == 0:
            for r in range(i + 1, n):
                if m[r][i] != 0:
                    m[i], m[r] = m[r], m[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) // prev
            m[r][i] = 0
        prev = m[i][i]
    return sign * m[-1][-1]


def _exact_det(entries: tuple[tuple[Fraction, ...], ...]) -> Fraction:
    den = lcm(*(f.denominator for row in entries for f in row))
    ints = [[int(f * den) for f in row] for row in entries]
    return Fraction(_int_det(ints), den ** len(entries))


def observed_statistic_exact(kind: StatKind, sigma: CovMatrix) -> Fraction:
    """Observed statistic as an exact rational (same form as the replicates)."""
    ent = sigma.exact_entries()
    k = sigma.k
    if kind is StatKind.TOTAL:
        return Fraction(k, 4) - sum(ent[i][i] for i in range(k))
    if kind is StatKind.GENERALIZED:
        return Fraction(1, 4) ** k - _exact_det(ent)
    quarter = Fraction(1, 4)
    total = sum((ent[i][i] - quarter) ** 2 for i in range(k))
    total += 2 * sum(ent[i][j] ** 2 for i in range(k) for j in range(i + 1, k))
    return total


def _observed_float(kind: StatKind, sigma: CovMatrix) -> float:
    """Observed statistic in plain floats (used above the exact-tie cap)."""
    k = sigma.k
    if kind is StatKind.TOTAL:
        return k / 4.0 - sigma.trace()
    if kind is StatKind.GENERALIZED:
        return 4.0**-k - float(np.linalg.det(sigma.entries))
    diff = sigma.entries - 0.25 * np.eye(k)
    return float((diff * diff).sum())


def _replicate_stat_exact(kind: StatKind, s1_row, s2_row, m: int, k: int) -> Fraction:
    """Exact statistic of one replicate from its integer counts."""
    den = m * m
    num = [
        [m * int(s2_row[i, j]) - int(s1_row[i]) * int(s1_row[j]) for j in range(k)]
        for i in range(k)
    ]
    if kind is StatKind.TOTAL:
        return Fraction(k, 4) - Fraction(sum(num[i][i] for i in range(k)), den)
    if kind is StatKind.GENERALIZED:
        return Fraction(1, 4) ** k - Fraction(_int_det(num), den**k)
    quarter = Fraction(1, 4)
    total = sum((Fraction(num[i][i], den) - quarter) ** 2 for i in range(k))
    total += 2 * sum(Fraction(num[i][j], den) ** 2 for i in range(k) for j in range(i + 1, k))
    return total


def _near_margin(kind: StatKind, k: int, t0f: float) -> float:
    """Width of the band around the observed value that goes to exact checks.

    Scaled to each statistic's magnitude: kernel float error is at most a
    few 1e-14 of it, while distinct rational outcomes differ by at least
    ~scale/(4 m^2), so for any workable m the band isolates true ties.
    """
    if kind is StatKind.TOTAL:
        scale = max(k / 4.0, abs(t0f))
    elif kind is StatKind.GENERALIZED:
        scale = max(4.0**-k, abs(t0f), 1e-300)
    else:
        scale = max(k * k / 16.0, abs(t0f))
    return NEAR_TIE_REL * scale


def null_statistic(stat: StatKind, m: int, k: int, rng: np.random.Generator) -> float:
    """Draw one replicate from the null and return its statistic."""
    x = (rng.random((m, k)) < 0.5).astype(np.float64)
    s1 = x.sum(axis=0)[None, :]
    s2 = (x.T @ x)[None, :, :]
    return float(_float_stats(stat, s1, s2, m, k)[0])


def sample_null_statistics(stat: StatKind, m: int, k: int, count: int, seed: int) -> np.ndarray:
    """Deterministic batch of null statistics (same stream as mc_pvalue)."""
    chunk = _chunk_size(m, k)
    parts = []
    produced = 0
    for c in range((count + chunk - 1) // chunk):
        n = min(chunk, count - produced)
        s1, s2 = _draw_counts(seed, c, n, m, k)
        parts.append(_float_stats(stat, s1, s2, m, k))
        produced += n
    return np.concatenate(parts)


def _chunk_tally(seed, chunk_index, n, m, k, kinds, t0f, t0_exact, margin):
    """Count replicates with statistic >= observed, exactly, for one chunk."""
    s1, s2 = _draw_counts(seed, chunk_index, n, m, k)
    counts = []
    for kind in kinds:
        stats = _float_stats(kind, s1, s2, m, k)
        if k > EXACT_TIE_MAX_K:
            counts.append(int((stats >= t0f[kind]).sum()))
            continue
        hits = int((stats > t0f[kind] + margin[kind]).sum())
        near = np.flatnonzero(np.abs(stats - t0f[kind]) <= margin[kind])
        for r in near:
            if _replicate_stat_exact(kind, s1[r], s2[r], m, k) >= t0_exact[kind]:
                hits += 1
        counts.append(hits)
    return counts


def mc_pvalues(
    sigma: CovMatrix,
    kinds: tuple[StatKind, ...],
    replicates: int,
    m: int,
    seed: int,
    workers: int | None = None,
    estimator: str = "proportion",
) -> list[McEstimate]:
    """Monte Carlo p-values for several statistics over one replicate stream.

    All requested statistics are evaluated on the same null draws (the
    draws depend only on seed, m and k).  ``estimator`` selects the plain
    proportion (default) or the conventional (count+1)/(R+1) variant.
    """
    if estimator not in ("proportion", "add_one"):
        raise ValueError(f"estimator must be 'proportion' or 'add_one', got {estimator!r}")
    k = sigma.k
    if replicates < 1:
        raise ValueError(f"replicate count must be >= 1, got {replicates}")
    if m < 1:
        raise ValueError(f"sample count must be >= 1, got {m}")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must fit in an unsigned 64-bit integer")

    if k <= EXACT_TIE_MAX_K:
        t0_exact = {kind: observed_statistic_exact(kind, sigma) for kind in kinds}
        t0f = {kind: float(v) for kind, v in t0_exact.items()}
    else:
        t0_exact = {kind: None for kind in kinds}
        t0f = {kind: _observed_float(kind, sigma) for kind in kinds}
    margin = {kind: _near_margin(kind, k, v) for kind, v in t0f.items()}

    chunk = _chunk_size(m, k)
    n_chunks = (replicates + chunk - 1) // chunk
    sizes = [min(chunk, replicates - c * chunk) for c in range(n_chunks)]

    def task(c):
        return _chunk_tally(seed, c, sizes[c], m, k, kinds, t0f, t0_exact, margin)

    n_workers = _resolve_workers(workers)
    if n_workers == 1 or n_chunks == 1:
        tallies = [task(c) for c in range(n_chunks)]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            tallies = list(pool.map(task, range(n_chunks)))

    out = []
    for pos, kind in enumerate(kinds):
        count = sum(t[pos] for t in tallies)
        if estimator == "proportion":
            p = count / replicates
        else:
            p = (count + 1) / (replicates + 1)
        stderr = sqrt(p * (1.0 - p) / replicates)
        out.append(McEstimate(p, replicates, stderr, seed, t0f[kind], kind, estimator))
    return out


def mc_pvalue(
    sigma: CovMatrix,
    cfg: McConfig,
    workers: int | None = None,
    estimator: str = "proportion",
) -> McEstimate:
    """Monte Carlo p-value of one statistic; see :func:`mc_pvalues`."""
    if sigma.k != cfg.k:
        raise ValueError(f"covariance dimension {sigma.k} != configured k {cfg.k}")
    return mc_pvalues(
        sigma, (cfg.stat,), cfg.replicates, cfg.m, cfg.seed, workers, estimator
    )[0]
