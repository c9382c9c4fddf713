"""Vectorized evaluation of arithmetic weights over all monics of one degree.

A monic f = T^n + a_{n-1}T^{n-1} + ... + a_0 is identified with the integer
idx = sum(a_i q^i), and whole-degree sweeps work on numpy arrays indexed by
idx.  The factorization data needed by Lambda_j and delta_m is only the
degree n and the number of distinct irreducible factors of each degree, so a
sieve suffices: for every irreducible P with deg P <= n//2 and every power
P^k of degree <= n, mark the multiples of P^k among M_n.  Whatever degree is
left unaccounted after the small factors belongs to a single irreducible
factor of degree > n//2.

The per-f key packs the distinct-factor count for degree d into the d-th
nibble of an int64, so a whole profile is one np.unique away.  Counts never
reach 16 because n <= 15 is enforced.
"""

from __future__ import annotations

import functools

import numpy as np

from .arith_fn import delta_from_counts, lambda_from_counts, mean_increment
from .fq_poly import FieldParams, monic_irreducibles

__all__ = [
    "MAX_SWEEP",
    "BudgetError",
    "degree_profile",
    "lambda_values",
    "lambda_tilde_values",
    "delta_values",
    "natural_mask",
    "residue_codes",
]

MAX_SWEEP = 10_000_000  # q^n above this is a budget error, not a slow success


class BudgetError(ValueError):
    """An enumeration larger than the configured budget was requested."""


def _check_scale(q: int, n: int) -> int:
    if n < 0 or n > 15:
        raise ValueError("sweep degree must be in [0, 15]")
    size = q**n
    if size > MAX_SWEEP:
        raise BudgetError(f"sweep over {size} monics exceeds the {MAX_SWEEP} budget")
    return size


@functools.lru_cache(maxsize=32)
def _digit_table(q: int, m: int) -> np.ndarray:
    """Shape (q^m, m): base-q digits of each index, digit i in column i."""
    if m == 0:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.arange(q**m, dtype=np.int64)
    return np.stack([(idx // q**i) % q for i in range(m)], axis=1)


def _multiple_indices(q: int, n: int, g: tuple[int, ...]) -> np.ndarray:
    """Indices of g*h over all monic h with deg(g*h) = n; g monic, coeffs low-first."""
    dg = len(g) - 1
    mh = n - dg
    digits = _digit_table(q, mh)
    size = q**mh
    idx = np.zeros(size, dtype=np.int64)
    for r in range(n):
        c = np.zeros(size, dtype=np.int64)
        for i in range(max(0, r - dg), min(r, mh - 1) + 1):
            gi = g[r - i]
            if gi:
                c += gi * digits[:, i]
        if 0 <= r - mh <= dg:
            c += g[r - mh]  # the leading coefficient of h is 1
        idx += (c % q) * q**r
    return idx


@functools.lru_cache(maxsize=16)
def _profile_cached(q: int, n: int) -> tuple[np.ndarray, tuple[tuple[tuple[int, int], ...], ...]]:
    field = FieldParams(q)
    size = _check_scale(q, n)
    if n == 0:
        return np.zeros(1, dtype=np.int64), ((),)
    wdeg = np.zeros(size, dtype=np.int64)
    key = np.zeros(size, dtype=np.int64)
    for d in range(1, n // 2 + 1):
        for p in monic_irreducibles(field, d):
            gk = (1,)
            for k in range(1, n // d + 1):
                gk = tuple(
                    sum(gk[i] * p.coeffs[r - i] for i in range(max(0, r - d), min(r, len(gk) - 1) + 1)) % q
                    for r in range(len(gk) + d)
                )
                idx = _multiple_indices(q, n, gk)
                wdeg[idx] += d
                if k == 1:
                    key[idx] += np.int64(16) ** d
    res = n - wdeg
    key += np.where(res > 0, np.int64(16) ** res, np.int64(0))
    codes, inverse = np.unique(key, return_inverse=True)
    count_sets = tuple(
        tuple((d, int(code >> (4 * d)) & 15) for d in range(1, n + 1) if (code >> (4 * d)) & 15)
        for code in codes
    )
    return inverse.astype(np.int64), count_sets


def degree_profile(field: FieldParams, n: int) -> tuple[np.ndarray, tuple[tuple[tuple[int, int], ...], ...]]:
    """Per-monic profile of degree-n factorizations.

    Returns (group, count_sets): group[idx] is the row of count_sets holding
    that f's distinct-factor degree counts as sorted (degree, count) pairs.
    """
    return _profile_cached(field.q, n)


def _spread(group: np.ndarray, per_key: list[int]) -> np.ndarray:
    return np.asarray(per_key, dtype=np.int64)[group]


def lambda_values(field: FieldParams, j: int, n: int) -> np.ndarray:
    """Lambda_j(f) for every f in M_n, indexed by monic index."""
    group, count_sets = degree_profile(field, n)
    return _spread(group, [lambda_from_counts(j, n, c) for c in count_sets])


def lambda_tilde_values(field: FieldParams, j: int, n: int) -> np.ndarray:
    group, count_sets = degree_profile(field, n)
    mean = mean_increment(j, n)
    return _spread(group, [lambda_from_counts(j, n, c) - mean for c in count_sets])


def delta_values(field: FieldParams, m: int, n: int) -> np.ndarray:
    group, count_sets = degree_profile(field, n)
    return _spread(group, [delta_from_counts(m, c) for c in count_sets])


def natural_mask(field: FieldParams, n: int) -> np.ndarray:
    """Boolean mask over M_n of f with f(0) != 0."""
    size = _check_scale(field.q, n)
    return np.arange(size, dtype=np.int64) % field.q != 0


def residue_codes(field: FieldParams, n: int, m: int) -> np.ndarray:
    """Integer code of f mod T^m for every f in M_n (used to index value tables)."""
    q = field.q
    size = _check_scale(q, n)
    codes = np.arange(size, dtype=np.int64) % q**m
    if n < m:
        codes += q**n  # the monic leading coefficient sits below the cutoff
    return codes
