"""Elemental-set machinery: subset weights, chain ratios, simulation.

The weight of a row subset E of a design matrix X is the Gram-determinant
ratio |X_E' X_E| / |X' X|.  Determinants are taken with slogdet (pivoted
LU accumulating log magnitude and sign) so enumerating many subsets
neither overflows nor loses precision.  When the subset size equals the
column count the weights over all subsets sum to 1 (Cauchy-Binet); for
larger subsets of size k they sum to C(l - c, k - c).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .dist import MvtParams, mvt_sample_rows
from .errors import DomainError, RankError, SizeError
from .rng import derive_seed

__all__ = [
    "ElementalWeight",
    "as_design_matrix",
    "enumerate_elemental",
    "weight_of_set",
    "all_weights",
    "chain_ratios",
    "subset_by_rank",
    "expected_weight_sum",
    "simulate_weight_distribution",
    "load_design_csv",
]

ENUMERATION_CAP = 1_000_000


@dataclass(frozen=True)
class ElementalWeight:
    indices: tuple  # sorted, 1-based
    weight: float


def as_design_matrix(x) -> np.ndarray:
    """Validate an l x c design matrix: 2-D, finite, full column rank."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 2:
        raise DomainError(f"design matrix must be 2-D, got shape {arr.shape}")
    l, c = arr.shape
    if l < c:
        raise DomainError(f"need at least as many rows as columns, got {l}x{c}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("design matrix contains non-finite entries")
    sign, _ = np.linalg.slogdet(arr.T @ arr)
    if sign <= 0:
        raise RankError("design matrix is rank deficient (|X'X| <= 0)")
    return arr


def _check_subset(e, l: int) -> tuple:
    idx = tuple(sorted(int(i) for i in e))
    if len(idx) != len(set(idx)):
        raise DomainError(f"subset has repeated indices: {e!r}")
    if not idx or idx[0] < 1 or idx[-1] > l:
        raise DomainError(f"subset indices must lie in 1..{l}, got {e!r}")
    return idx


def enumerate_elemental(l: int, p: int):
    """All (p+1)-row subsets of {1..l} in lexicographic order."""
    if not isinstance(l, (int, np.integer)) or not isinstance(p, (int, np.integer)):
        raise DomainError("l and p must be integers")
    if l < p + 1:
        raise DomainError(f"need l >= p+1, got l={l}, p={p}")
    return [tuple(c) for c in combinations(range(1, int(l) + 1), int(p) + 1)]


def _log_gram_det(rows: np.ndarray):
    sign, logdet = np.linalg.slogdet(rows.T @ rows)
    return sign, logdet


def weight_of_set(x, e) -> float:
    """Gram-determinant share |X_E'X_E| / |X'X| of the row subset e (1-based)."""
    arr = as_design_matrix(x)
    idx = _check_subset(e, arr.shape[0])
    if len(idx) < arr.shape[1]:
        raise DomainError(
            f"subset of size {len(idx)} cannot span {arr.shape[1]} columns"
        )
    sign_full, log_full = _log_gram_det(arr)
    rows = arr[np.array(idx) - 1]
    sign_e, log_e = _log_gram_det(rows)
    if sign_e <= 0:
        return 0.0
    return float(math.exp(log_e - log_full))


def all_weights(x, set_size: int | None = None, cap: int = ENUMERATION_CAP):
    """Weights of every subset of the given size (default: the column count).

    With the default size the weights sum to 1 by Cauchy-Binet.
    """
    arr = as_design_matrix(x)
    l, c = arr.shape
    k = c if set_size is None else int(set_size)
    if k < c or k > l:
        raise DomainError(f"set size must lie in [{c}, {l}], got {k}")
    count = math.comb(l, k)
    if count > cap:
        raise SizeError(
            f"C({l},{k}) = {count} subsets exceeds the cap {cap}; "
            "use sampled-sets mode instead"
        )
    sign_full, log_full = _log_gram_det(arr)
    out = []
    for combo in combinations(range(l), k):
        sign_e, log_e = _log_gram_det(arr[list(combo)])
        w = float(math.exp(log_e - log_full)) if sign_e > 0 else 0.0
        out.append(ElementalWeight(tuple(i + 1 for i in combo), w))
    return out


def expected_weight_sum(l: int, cols: int, set_size: int) -> float:
    """Cauchy-Binet value of the weight sum over all size-k subsets."""
    return float(math.comb(l - cols, set_size - cols))


def chain_ratios(x, e) -> np.ndarray:
    """Determinant ratios t_i from rank-one updates by the rows outside e.

    Starting from M_0 = X_E'X_E, each remaining row (in index order) is
    added as an outer product; t_i = |M_{i-1}| / |M_i| in (0, 1].  The
    product of the ratios telescopes to weight_of_set(x, e).
    """
    arr = as_design_matrix(x)
    idx = _check_subset(e, arr.shape[0])
    base = arr[np.array(idx) - 1]
    m = base.T @ base
    sign, log_prev = np.linalg.slogdet(m)
    if sign <= 0:
        raise RankError(f"base subset {idx} gives a singular Gram matrix")
    rest = [i for i in range(1, arr.shape[0] + 1) if i not in set(idx)]
    ratios = []
    for i in rest:
        row = arr[i - 1]
        m = m + np.outer(row, row)
        sign, log_new = np.linalg.slogdet(m)
        if sign <= 0:
            raise RankError("rank-one update produced a non-positive determinant")
        ratios.append(math.exp(log_prev - log_new))
        log_prev = log_new
    return np.array(ratios)


def subset_by_rank(l: int, k: int, rank: int) -> tuple:
    """rank-th (0-based) k-subset of {1..l} in lexicographic order."""
    if rank < 0 or rank >= math.comb(l, k):
        raise DomainError(f"rank {rank} out of range for C({l},{k})")
    out = []
    start = 1
    for slot in range(k, 0, -1):
        for v in range(start, l - slot + 2):
            block = math.comb(l - v, slot - 1)
            if rank < block:
                out.append(v)
                start = v + 1
                break
            rank -= block
    return tuple(out)


def simulate_weight_distribution(
    p: MvtParams,
    l: int,
    n_matrices: int,
    seed: int,
    mode: str = "sampled-sets",
    intercept: bool = False,
) -> np.ndarray:
    """Elemental weights of simulated t-distributed design matrices.

    Each matrix has l rows of dim-variate t draws (plus an optional
    constant column); elemental sets have dim+1 rows.  Mode "all" emits
    every subset's weight per matrix, "sampled-sets" one uniformly chosen
    subset per matrix.  Deterministic for a fixed seed.
    """
    if mode not in ("all", "sampled-sets"):
        raise DomainError(f"mode must be 'all' or 'sampled-sets', got {mode!r}")
    if l < p.dim + 1:
        raise DomainError(f"need l >= dim+1 rows, got l={l}, dim={p.dim}")
    k = p.dim + 1
    out = []
    for j in range(int(n_matrices)):
        x = mvt_sample_rows(p, l, derive_seed(seed, 2 * j))
        if intercept:
            x = np.column_stack([np.ones(l), x])
        if mode == "all":
            out.extend(ew.weight for ew in all_weights(x, set_size=k))
        else:
            rng = np.random.Generator(
                np.random.Philox(np.random.SeedSequence(entropy=[derive_seed(seed, 2 * j + 1)]))
            )
            rank = int(rng.integers(0, math.comb(l, k)))
            out.append(weight_of_set(x, subset_by_rank(l, k, rank)))
    return np.array(out)


def load_design_csv(path) -> np.ndarray:
    """Read a headerless CSV of reals as a design matrix."""
    try:
        arr = np.loadtxt(path, delimiter=",", ndmin=2)
    except OSError:
        raise
    except Exception as exc:
        raise DomainError(f"could not parse design matrix CSV {path}: {exc}") from exc
    return as_design_matrix(arr)
