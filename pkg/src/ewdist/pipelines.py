"""Reproduction pipelines behind the CLI commands.

Pure functions: they take parameters and a seed and return rows/summaries
ready for serialization.  All replication loops derive child seeds by
index, so results are independent of worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import approx, elemental, goftests, product
from .dist import MvtParams, beta_cdf, beta_sample, mvt_sample_rows, w_sample
from .errors import DomainError, RegimeError
from .rng import derive_seed, worker_count

__all__ = [
    "DEFAULT_GOF_GRID",
    "FIGURE_PAIRS",
    "compare_cdf_rows",
    "gof_table_rows",
    "omega_rows",
    "elemental_matrix_rows",
    "elemental_simulation_report",
    "w_beta_gap",
]

# the 30 (m1, m2, nu) combinations of the reported test table
DEFAULT_GOF_GRID = (
    (3, 2, 50), (3, 2, 150),
    (7, 2, 50), (7, 2, 150),
    (17, 2, 50), (17, 2, 150),
    (6, 5, 50), (6, 5, 150),
    (10, 5, 50), (10, 5, 150),
    (20, 5, 50), (20, 5, 150),
    (11, 10, 50), (11, 10, 150),
    (15, 10, 50), (15, 10, 150),
    (25, 10, 50), (25, 10, 150),
    (16, 15, 50), (16, 15, 150),
    (20, 15, 50), (20, 15, 150),
    (30, 15, 50), (30, 15, 150),
    (26, 25, 50), (26, 25, 150),
    (30, 25, 50), (30, 25, 150),
    (40, 25, 50), (40, 25, 150),
)

# the eight CDF-comparison panels at nu = 50; (2, 1) appears twice as printed
FIGURE_PAIRS = ((1, 1), (2, 1), (2, 1), (3, 2), (11, 5), (12, 5), (11, 10), (12, 10))


def _require_approx_regime(m1, m2, nu):
    if not (m2 <= m1 < nu):
        raise RegimeError(
            f"approximation regime requires m2 <= m1 < nu, got m1={m1}, m2={m2}, nu={nu}"
        )


def w_beta_gap(m1, m2, nu, n, seed) -> float:
    """Exact sup gap between the W sample's ECDF and the proposed Beta CDF."""
    _require_approx_regime(m1, m2, nu)
    shape = approx.approx_shape(m2)
    sample = w_sample(m1, m2, nu, n, seed)
    return goftests.ks_one_sample(sample, lambda x: beta_cdf(x, shape)).statistic


def compare_cdf_rows(m1, m2, nu, n, grid_points, seed):
    """Rows (w, ecdf_w, beta_cdf, abs_gap) on a uniform w grid, plus md."""
    _require_approx_regime(m1, m2, nu)
    if grid_points < 1:
        raise DomainError("grid_points must be positive")
    shape = approx.approx_shape(m2)
    sample = np.sort(w_sample(m1, m2, nu, n, seed))
    emp = goftests.EmpiricalCdf(sample, sample.size)
    grid = np.linspace(0.0, 1.0, grid_points + 1)
    bcdf = np.asarray(beta_cdf(grid, shape))
    ecdf_vals = goftests.ecdf_eval(emp, grid)
    gaps = np.abs(ecdf_vals - bcdf)
    rows = [
        (float(g), float(e), float(b), float(a))
        for g, e, b, a in zip(grid, ecdf_vals, bcdf, gaps)
    ]
    return rows, {"md": float(gaps.max())}


def _parallel_map(fn, items):
    workers = worker_count()
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def gof_table_rows(grid, n, replications, seed, alpha=0.01):
    """One row per grid entry per replication, two-sample mode.

    Row: (m1, m2, nu, n, rep, ks, ks_identical, ad, ad_identical).
    """
    grid = [tuple(map(float, row)) for row in grid]
    for m1, m2, nu in grid:
        _require_approx_regime(m1, m2, nu)

    def one(task):
        row_idx, rep = task
        m1, m2, nu = grid[row_idx]
        rep_seed = derive_seed(derive_seed(seed, row_idx), rep)
        w = w_sample(m1, m2, nu, n, derive_seed(rep_seed, 0))
        ref = beta_sample(approx.approx_shape(m2), n, derive_seed(rep_seed, 1))
        ks = goftests.ks_two_sample(w, ref, alpha=alpha)
        ad = goftests.ad_two_sample(w, ref, alpha=alpha)
        return (
            m1, m2, nu, int(n), int(rep),
            ks.statistic, ks.identical, ad.statistic, ad.identical,
        )

    tasks = [(i, r) for i in range(len(grid)) for r in range(int(replications))]
    return _parallel_map(one, tasks)


def omega_rows(rho, n2, n, grid_points, seed):
    """CDF comparison grid and moment table for the product law.

    Grid rows: ("cdf", omega, numeric cdf, Monte Carlo ecdf).
    Moment rows: ("moment", k, closed form, Monte Carlo mean of Omega^k).
    """
    spec = product.ProductSpec(rho, n2)
    draws = np.sort(product.omega_sample(spec, n, seed))
    emp = goftests.EmpiricalCdf(draws, draws.size)
    grid = np.linspace(1e-8, 1.0 - 1e-8, grid_points)
    cdf_num = np.asarray(product.omega_cdf_numeric(spec, grid))
    ecdf_mc = goftests.ecdf_eval(emp, grid)
    rows = [
        ("cdf", float(g), float(c), float(e))
        for g, c, e in zip(grid, cdf_num, ecdf_mc)
    ]
    for k in range(0, 4):
        mc = float(np.mean(draws**k))
        rows.append(("moment", float(k), product.omega_moment(spec, k), mc))
    gap = goftests.ks_one_sample(draws, lambda x: product.omega_cdf_numeric(spec, x))
    return rows, {"sup_gap_numeric_vs_mc": float(gap.statistic)}


def elemental_matrix_rows(matrix):
    """Per-subset weights of a provided design matrix plus the weight sum."""
    weights = elemental.all_weights(matrix)
    rows = [(" ".join(str(i) for i in ew.indices), ew.weight) for ew in weights]
    total = float(sum(ew.weight for ew in weights))
    return rows, {"cauchy_binet_sum": total, "cauchy_binet_expected": 1.0}


def elemental_simulation_report(rho, nu, l, n_matrices, seed, mode="sampled-sets",
                                intercept=False):
    """Simulated weights under the t model plus product-law KS distances.

    The product-law comparison is reported for both factor-count
    conventions (l - rho and l - rho - 1); neither is asserted.
    """
    params = MvtParams(dim=int(rho), dof=float(nu), scale=np.eye(int(rho)))
    weights = elemental.simulate_weight_distribution(
        params, int(l), int(n_matrices), seed, mode=mode, intercept=intercept
    )
    rows = [(int(i), float(wt)) for i, wt in enumerate(weights)]

    # weight-sum check on the first generated matrix (same stream as above)
    first = mvt_sample_rows(params, int(l), derive_seed(seed, 0))
    if intercept:
        first = np.column_stack([np.ones(int(l)), first])
    cols = first.shape[1]
    k = int(rho) + 1
    cb_sum = float(sum(ew.weight for ew in elemental.all_weights(first, set_size=k)))

    summary = {
        "cauchy_binet_sum_first_matrix": cb_sum,
        "cauchy_binet_expected": elemental.expected_weight_sum(int(l), cols, k),
        "n_weights": len(rows),
    }
    eligible = weights[(weights > 0.0) & (weights < 1.0)]
    for n2 in (int(l) - int(rho), int(l) - int(rho) - 1):
        key = f"ks_vs_product_n2_{n2}"
        if n2 >= 1 and eligible.size:
            spec = product.ProductSpec(int(rho), n2)
            res = goftests.ks_one_sample(
                eligible, lambda x, sp=spec: product.omega_cdf_numeric(sp, x)
            )
            summary[key] = float(res.statistic)
        else:
            summary[key] = None
    return rows, summary
