"""Multiplicative-number-theory weights on monic polynomials.

The central objects are the higher von Mangoldt weights Lambda_j: Lambda_0
is the indicator of constants, Lambda_1 = Lambda puts deg P on prime powers
P^k, and in general Lambda_j is supported on products of at most j distinct
irreducibles.  Two independent formulas are implemented:

- ``lambda_j_recursive``: the divisor-sum recursion
  Lambda_j(f) = sum over prime-power cofactors of Lambda_{j-1}(d) Lambda(f/d)
  plus Lambda_{j-1}(f) deg f,
- ``lambda_j_mobius``: the direct convolution
  Lambda_j(f) = sum over monic divisors d of mu(d) deg(f/d)^j.

They are cross-checked exhaustively in the test suite; do not merge them.

Everything here depends on f only through its factorization type (the
multiset of (degree, multiplicity) pairs of its irreducible factors), so all
recursions are memoized on that type and are field-size independent.
"""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction
from math import comb

from .fq_poly import FieldParams, Poly, factor

__all__ = [
    "factor_type",
    "mobius",
    "monic_divisors",
    "lambda_j_recursive",
    "lambda_j_mobius",
    "lambda_tilde",
    "mean_increment",
    "e_natural",
    "delta_m",
    "vm_average_closed",
    "lambda_from_counts",
    "delta_from_counts",
]

# A factorization type is a sorted tuple of (degree, multiplicity) pairs, one
# per distinct irreducible factor.  Units have the empty type.
FactorType = tuple[tuple[int, int], ...]


def factor_type(f: Poly, seed: int = 0) -> FactorType:
    return tuple(sorted((p.degree, e) for p, e in factor(f, seed).factors))


def mobius(f: Poly) -> int:
    """(-1)^k on products of k distinct irreducibles, 0 on squareful f."""
    if f.is_zero:
        raise ValueError("mobius of zero")
    t = factor_type(f)
    if any(e > 1 for _, e in t):
        return 0
    return -1 if len(t) % 2 else 1


def monic_divisors(f: Poly):
    """All monic divisors of f, from exponent vectors over its factorization."""
    if f.is_zero:
        raise ValueError("divisors of zero")
    fac = factor(f)
    primes = [p for p, _ in fac.factors]
    for exps in itertools.product(*(range(e + 1) for _, e in fac.factors)):
        d = Poly.one(f.field)
        for p, e in zip(primes, exps):
            d = d * p**e
        yield d


# -- the divisor-sum recursion ------------------------------------------------


def _reduce_type(t: FactorType, i: int, k: int) -> FactorType:
    d, e = t[i]
    rest = t[:i] + t[i + 1 :]
    if e - k > 0:
        rest = rest + ((d, e - k),)
    return tuple(sorted(rest))


@functools.lru_cache(maxsize=None)
def _lambda_rec_type(j: int, t: FactorType) -> int:
    if j == 0:
        return 1 if not t else 0
    n = sum(d * e for d, e in t)
    total = n * _lambda_rec_type(j - 1, t)
    for i, (d, e) in enumerate(t):
        for k in range(1, e + 1):  # cofactor f/d = P_i^k, the only primes surviving Lambda
            total += d * _lambda_rec_type(j - 1, _reduce_type(t, i, k))
    return total


def lambda_j_recursive(j: int, f: Poly) -> int:
    if j < 0:
        raise ValueError("order must be >= 0")
    if f.is_zero:
        raise ValueError("Lambda_j of zero")
    return _lambda_rec_type(j, factor_type(f))


# -- the Mobius convolution ---------------------------------------------------


def lambda_j_mobius(j: int, f: Poly) -> int:
    """Literal sum of mu(d) deg(f/d)^j over all monic divisors d."""
    if j < 1:
        raise ValueError("order must be >= 1")
    if f.is_zero:
        raise ValueError("Lambda_j of zero")
    n = f.degree
    total = 0
    for d in monic_divisors(f):
        mu = mobius(d)
        if mu:
            total += mu * (n - d.degree) ** j
    return total


# -- grouped evaluation from degree counts ------------------------------------
#
# Both Lambda_j and delta_m depend on f only through n = deg f and the counts
# c_d = number of distinct irreducible factors of degree d.  These grouped
# forms are what the vectorized full-degree sweeps evaluate per distinct key.


def counts_from_type(t: FactorType) -> tuple[tuple[int, int], ...]:
    """Collapse a factorization type to sorted (degree, distinct-factor count)."""
    acc: dict[int, int] = {}
    for d, _ in t:
        acc[d] = acc.get(d, 0) + 1
    return tuple(sorted(acc.items()))


@functools.lru_cache(maxsize=None)
def lambda_from_counts(j: int, n: int, counts: tuple[tuple[int, int], ...]) -> int:
    """Lambda_j for any f of degree n whose distinct-factor degree counts are given.

    Inclusion-exclusion over how many factors of each degree enter the
    squarefree divisor; 0**0 = 1 makes j = 0 the constant-indicator case.
    """
    if j < 0 or n < 0:
        raise ValueError("bad arguments")
    total = 0
    degree_list = [d for d, _ in counts]
    count_list = [c for _, c in counts]
    for picks in itertools.product(*(range(c + 1) for c in count_list)):
        used = sum(d * s for d, s in zip(degree_list, picks))
        if used > n:
            continue
        sign = -1 if sum(picks) % 2 else 1
        weight = 1
        for c, s in zip(count_list, picks):
            weight *= comb(c, s)
        total += sign * weight * (n - used) ** j
    return total


@functools.lru_cache(maxsize=None)
def delta_from_counts(m: int, counts: tuple[tuple[int, int], ...]) -> int:
    """Sum of mu(d) over monic divisors with deg d < m, from degree counts.

    Convolution of the factors (1 - z^d)^{c_d} truncated below z^m, then a
    coefficient sum; exact integers throughout.
    """
    if m < 1:
        raise ValueError("cutoff must be >= 1")
    coeffs = [0] * m
    coeffs[0] = 1
    for d, c in counts:
        for _ in range(c):
            if d >= m:
                break
            for i in range(m - 1, d - 1, -1):
                coeffs[i] -= coeffs[i - d]
    return sum(coeffs)


def delta_m(m: int, f: Poly) -> int:
    if f.is_zero:
        raise ValueError("delta_m of zero")
    return delta_from_counts(m, counts_from_type(factor_type(f)))


# -- centered weights and averages --------------------------------------------


def mean_increment(j: int, n: int) -> int:
    """n^j - (n-1)^j, the full-degree mean of Lambda_j (0**0 = 1 convention)."""
    return n**j - (n - 1) ** j


def lambda_tilde(j: int, f: Poly) -> int:
    """Lambda_j centered by its full-degree average n^j - (n-1)^j."""
    if f.is_zero:
        raise ValueError("Lambda~_j of zero")
    return lambda_j_recursive(j, f) - mean_increment(j, f.degree)


def vm_average_closed(field: FieldParams, j: int, n: int) -> int:
    """q^n (n^j - (n-1)^j), the exact value of the full sum over M_n."""
    if n < 1 or j < 1:
        raise ValueError("need n >= 1 and j >= 1")
    return field.q**n * mean_increment(j, n)


@functools.lru_cache(maxsize=None)
def _e_natural_cached(q: int, j: int, n: int) -> Fraction:
    from . import bulk  # deferred: bulk builds on this module

    field = FieldParams(q)
    values = bulk.lambda_values(field, j, n)
    total = int(values[bulk.natural_mask(field, n)].sum())
    return Fraction(total, q ** (n - 1) * (q - 1))


def e_natural(field: FieldParams, j: int, n: int) -> Fraction:
    """Exact average of Lambda_j over monic degree-n f with f(0) != 0."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    if j < 0:
        raise ValueError("order must be >= 0")
    return _e_natural_cached(field.q, j, n)
