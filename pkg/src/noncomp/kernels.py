"""Numeric hot loops with numba-compiled and pure-numpy implementations.

The numba path is used by default. Set the environment variable
``NONCOMP_NO_NUMBA=1`` before import to force the numpy fallback (useful on
platforms where numba is unavailable or for benchmarking, see
``benchmarks/bench_kernels.py``). Both paths compute identical results in
float64.
"""

import os

import numpy as np

_SQRT_2PI = float(np.sqrt(2.0 * np.pi))

USE_NUMBA = os.environ.get("NONCOMP_NO_NUMBA", "").strip().lower() not in (
    "1", "true", "yes",
)
if USE_NUMBA:
    try:
        from numba import njit, prange
    except ImportError:  # pragma: no cover
        USE_NUMBA = False


def cosine_scores_numpy(unit_matrix, unit_query):
    """Dot products of one unit vector against rows of a unit-row matrix."""
    return unit_matrix @ unit_query


def nc_scores_numpy(values, mu, sigma, smooth=False, raw_density=False):
    """Batch multivariate non-compositionality scores.

    values: (m, n) feature matrix, mu/sigma: per-feature Gaussian parameters
    (sigma is the standard deviation). The rectified-difference product uses
    the raw deviations v_i - mu_i; the density factor is evaluated on
    standardized coordinates unless raw_density is set, in which case the
    plain normal density (which can exceed 1) is used.
    """
    diffs = values - mu
    if raw_density:
        dens = np.exp(-0.5 * (diffs / sigma) ** 2) / (sigma * _SQRT_2PI)
    else:
        z = diffs / sigma
        dens = np.exp(-0.5 * z * z) / _SQRT_2PI
    p = np.prod(dens, axis=1)
    if smooth:
        # softplus, stable for large |x|
        rect = np.maximum(diffs, 0.0) + np.log1p(np.exp(-np.abs(diffs)))
    else:
        rect = np.maximum(diffs, 0.0)
    return np.prod(rect, axis=1) * (1.0 - p)


if USE_NUMBA:

    @njit(parallel=True, cache=True)
    def _cosine_scores_jit(unit_matrix, unit_query):
        n, d = unit_matrix.shape
        out = np.empty(n)
        for i in prange(n):
            s = 0.0
            for j in range(d):
                s += unit_matrix[i, j] * unit_query[j]
            out[i] = s
        return out

    @njit(parallel=True, cache=True)
    def _nc_scores_jit(values, mu, sigma, smooth, raw_density):
        m, n = values.shape
        out = np.empty(m)
        inv_sqrt_2pi = 1.0 / np.sqrt(2.0 * np.pi)
        for i in prange(m):
            rect = 1.0
            dens = 1.0
            for j in range(n):
                d = values[i, j] - mu[j]
                z = d / sigma[j]
                phi = inv_sqrt_2pi * np.exp(-0.5 * z * z)
                if raw_density:
                    phi = phi / sigma[j]
                dens *= phi
                if smooth:
                    if d > 0.0:
                        rect *= d + np.log1p(np.exp(-d))
                    else:
                        rect *= np.log1p(np.exp(d))
                else:
                    rect *= d if d > 0.0 else 0.0
            out[i] = rect * (1.0 - dens)
        return out

    def cosine_scores_numba(unit_matrix, unit_query):
        return _cosine_scores_jit(
            np.ascontiguousarray(unit_matrix, dtype=np.float64),
            np.ascontiguousarray(unit_query, dtype=np.float64),
        )

    def nc_scores_numba(values, mu, sigma, smooth=False, raw_density=False):
        return _nc_scores_jit(
            np.ascontiguousarray(values, dtype=np.float64),
            np.ascontiguousarray(mu, dtype=np.float64),
            np.ascontiguousarray(sigma, dtype=np.float64),
            smooth,
            raw_density,
        )

    cosine_scores = cosine_scores_numba
    nc_scores = nc_scores_numba
else:  # pragma: no cover - exercised via NONCOMP_NO_NUMBA runs
    cosine_scores = cosine_scores_numpy
    nc_scores = nc_scores_numpy
