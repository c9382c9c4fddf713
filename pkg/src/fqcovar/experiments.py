"""Covariance experiments: exact finite-q statistics against their q -> infinity limits.

Three empirical covariances, all exact rationals:
  experiment 1: plain product of two almost-prime weights over one degree;
  experiment 2: the centered version (limit drops the top term of the sum);
  experiment 3: short-interval sums, bucketed by shared top coefficients.
The closed-form limit of each is limit_sum with upper n, n-1, n-h-2.

step_identity_sides computes the congruence/character bridge exactly: the
left side in integer arithmetic over the centered natural weights, the right
side in floating point from even nontrivial character sums.  The two agree
to rounding error at every finite q; the derivation needs only three exact
facts (scalar sums of even characters, the vanishing of the centered sum
against the trivial character, and the vanishing of full character sums at
degrees past the modulus).

frobenius_ensemble_average is the equidistribution experiment: spectral
statistics averaged over primitive even characters against the matching
exact Haar integral, converging as q grows at fixed modulus degree.

h = -1 in a report encodes the centered no-interval case (experiment 2):
an interval of width q^0 around f degenerates to f itself one step below
h = 0, which keeps a single report schema for the whole family.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import json
import time
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import bulk
from .arith_fn import lambda_from_counts, mean_increment
from .bulk import BudgetError
from .characters import build_unit_group, enumerate_characters, value_tables
from .fq_poly import FieldParams
from .lfunc import coeffs_from_values, spectrum_from_coeffs
from .rmt import h_covariance_exact, h_statistic

__all__ = [
    "BudgetError",
    "CovarReport",
    "CSV_HEADER",
    "DEFAULT_MAX_ENUM",
    "limit_sum",
    "covar1_empirical",
    "covar2_empirical",
    "covar3_empirical",
    "step_identity_sides",
    "step_identity_check",
    "frobenius_ensemble_average",
    "q_sweep",
    "write_reports_csv",
    "write_reports_json",
]

DEFAULT_MAX_ENUM = 10_000_000


def limit_sum(j: int, k: int, upper: int) -> int:
    """Sum of (d^j - (d-1)^j)(d^k - (d-1)^k) for d = 1..upper; 0 for upper <= 0."""
    return sum(mean_increment(j, d) * mean_increment(k, d) for d in range(1, upper + 1))


def _check_enum(q: int, n: int, max_enum: int) -> None:
    if q**n > max_enum:
        raise BudgetError(f"{q}^{n} = {q**n} monics exceeds the {max_enum} budget")


def _profile_products(q: int, n: int, j: int, k: int, center: bool) -> int:
    """Sum over all monics of degree n of the (optionally centered) weight product.

    Works on the factorization-type profile, so the arithmetic is a handful
    of exact integer products regardless of q^n.
    """
    field = FieldParams(q)
    group, count_sets = bulk.degree_profile(field, n)
    multiplicity = np.bincount(group, minlength=len(count_sets))
    mu_j = mean_increment(j, n) if center else 0
    mu_k = mean_increment(k, n) if center else 0
    total = 0
    for key, counts in enumerate(count_sets):
        lj = lambda_from_counts(j, n, counts) - mu_j
        lk = lambda_from_counts(k, n, counts) - mu_k
        total += int(multiplicity[key]) * lj * lk
    return total


def covar1_empirical(q: int, n: int, j: int, k: int, max_enum: int = DEFAULT_MAX_ENUM) -> Fraction:
    """Exact average of the plain weight product over monics of degree n."""
    if n < 1 or j < 0 or k < 0:
        raise ValueError("need n >= 1 and j, k >= 0")
    _check_enum(q, n, max_enum)
    return Fraction(_profile_products(q, n, j, k, center=False), q**n)


def covar2_empirical(q: int, n: int, j: int, k: int, max_enum: int = DEFAULT_MAX_ENUM) -> Fraction:
    """Exact average of the centered weight product.

    Computed twice: directly, and as covar1 minus the product of means.  The
    two are one algebraic identity apart and must agree exactly.
    """
    if n < 1 or j < 0 or k < 0:
        raise ValueError("need n >= 1 and j, k >= 0")
    _check_enum(q, n, max_enum)
    direct = Fraction(_profile_products(q, n, j, k, center=True), q**n)
    subtracted = covar1_empirical(q, n, j, k, max_enum) - mean_increment(j, n) * mean_increment(
        k, n
    )
    assert direct == subtracted, (direct, subtracted)
    return direct


def covar3_empirical(
    q: int, n: int, h: int, j: int, k: int, max_enum: int = DEFAULT_MAX_ENUM
) -> Fraction:
    """Exact normalized covariance of centered interval sums at offset width h.

    Buckets are the intervals themselves: monic index blocks of length
    q^{h+1} sharing top coefficients.  One pass accumulates both weight sums
    per bucket; the interval structure collapses the double normalization
    q^{-(h+1)} q^{-n} times the q^{h+1} members per bucket into plain q^{-n}.

    h = -1 is accepted and means the degenerate one-polynomial interval, so
    it dispatches to the centered product; h above n-4 violates the limit
    theorem's hypothesis and warns, but the finite-q value is still exact.
    """
    if h == -1:
        return covar2_empirical(q, n, j, k, max_enum)
    if n < 1 or j < 0 or k < 0:
        raise ValueError("need n >= 1 and j, k >= 0")
    if not 0 <= h < n:
        raise ValueError("need -1 <= h <= n-1")
    if h > n - 4:
        warnings.warn(
            f"h = {h} exceeds n - 4 = {n - 4}: outside the limit theorem's hypothesis",
            RuntimeWarning,
            stacklevel=2,
        )
    _check_enum(q, n, max_enum)
    field = FieldParams(q)
    width = q ** (h + 1)
    sums = []
    for order in (j, k):
        if sums and order == j:
            sums.append(sums[0])
            continue
        per_bucket = bulk.lambda_values(field, order, n).reshape(-1, width).sum(axis=1)
        sums.append([int(s) - width * mean_increment(order, n) for s in per_bucket])
    total = sum(a * b for a, b in zip(sums[0], sums[1]))
    return Fraction(total, q**n)


# -- the congruence/character bridge ------------------------------------------


def _scale_codes(q: int, m: int, c: int) -> np.ndarray:
    """Permutation of residue codes mod T^m induced by the scalar c."""
    idx = np.arange(q**m, dtype=np.int64)
    out = np.zeros_like(idx)
    for i in range(m):
        out += (((idx // q**i) % q) * c % q) * q**i
    return out


def step_identity_sides(
    q: int, n: int, h: int, j: int, k: int, max_enum: int = DEFAULT_MAX_ENUM
) -> tuple[Fraction, complex]:
    """Both sides of the interval-to-character bridge at finite q.

    Left: (q^{h+1}/(q-1)) times the sum over congruent pairs mod T^{n-h} of
    degree-n polynomials with nonzero constant term, weighting each by the
    naturally centered weights.  All arithmetic is in scaled integers: the
    centered weight times |M_n with nonzero constant| is an integer, so the
    pair sum is an exact rational.

    Right: q^{h+1}(q-1)/Phi times the sum over even nontrivial characters of
    the weighted character-sum products, in floating point.

    Centering makes the trivial character drop out exactly, and full
    character sums vanish at degree n >= n-h, which is why the two sides
    agree to rounding error and not merely asymptotically.
    """
    if n < 1 or not 0 <= h < n:
        raise ValueError("need n >= 1 and 0 <= h <= n-1")
    if j < 0 or k < 0:
        raise ValueError("need j, k >= 0")
    _check_enum(q, n, max_enum)
    field = FieldParams(q)
    m = n - h
    denom = q ** (n - 1) * (q - 1)  # count of degree-n monics with nonzero constant
    mask = bulk.natural_mask(field, n)
    codes = bulk.residue_codes(field, n, m)
    size = q**m

    scaled = []  # class sums of denom * (weight - natural mean), per unit residue
    lam_by_order: dict[int, np.ndarray] = {}
    for order in (j, k):
        if order in lam_by_order:
            scaled.append(scaled[0])
            continue
        lam = bulk.lambda_values(field, order, n)
        lam_by_order[order] = lam
        centered = denom * lam - int(lam[mask].sum())
        per_class = np.zeros(size, dtype=np.int64)
        np.add.at(per_class, codes[mask], centered[mask])
        gathered = np.zeros(size, dtype=np.int64)
        for c in range(1, q):
            gathered += per_class[_scale_codes(q, m, c)]
        scaled.append(gathered)
    pair_total = sum(int(a) * int(b) for a, b in zip(scaled[0], scaled[1]))
    lhs = Fraction(q ** (h + 1), q - 1) * Fraction(pair_total, denom**2)

    group = build_unit_group(field, m)
    evens = [c for c in enumerate_characters(group) if c.is_even and not c.is_trivial]
    class_sums = {}
    for order, lam in lam_by_order.items():
        full = np.zeros(size, dtype=np.int64)
        np.add.at(full, codes, lam)
        class_sums[order] = full.astype(float)
    acc = 0j
    for start in range(0, len(evens), 128):
        blk = evens[start : start + 128]
        tables = value_tables(group, blk)
        u_j = tables @ class_sums[j]
        u_k = u_j if k == j else tables @ class_sums[k]
        acc += complex(np.sum(u_j * np.conj(u_k)))
    rhs = q ** (h + 1) * (q - 1) / group.size * acc
    return lhs, rhs


def step_identity_check(
    q: int, n: int, h: int, j: int, k: int, max_enum: int = DEFAULT_MAX_ENUM
) -> float:
    """|left - right| of the bridge; an exact identity, so rounding-size only."""
    lhs, rhs = step_identity_sides(q, n, h, j, k, max_enum)
    return abs(complex(float(lhs)) - rhs)


# -- equidistribution ----------------------------------------------------------


def frobenius_ensemble_average(
    q: int, big_m: int, j: int, k: int, n: int, block: int = 64
) -> tuple[complex, int]:
    """Spectral covariance averaged over primitive even characters, with its limit.

    The ensemble is all primitive even characters mod T^{big_m + 1}; each
    contributes the order-(j,k) weight product of its degree-n spectral
    statistic.  Paired with the exact Haar unitary average on dimension
    big_m - 1, which is the q -> infinity value by equidistribution.
    """
    if big_m < 3:
        raise ValueError("need modulus parameter >= 3")
    field = FieldParams(q)
    m = big_m + 1
    group = build_unit_group(field, m)
    targets = [c for c in enumerate_characters(group) if c.is_even and c.is_primitive]
    acc = 0j
    for start in range(0, len(targets), block):
        blk = targets[start : start + block]
        tables = value_tables(group, blk)
        for chi, row in zip(blk, tables):
            coeffs = coeffs_from_values(row, q, m)
            spec = spectrum_from_coeffs(q, m, chi.char_id, True, coeffs)
            stats = spec.stats(max(n, spec.dim))
            left = h_statistic(j, n, stats)
            right = left if k == j else h_statistic(k, n, stats)
            acc += left * right.conjugate()
    return acc / len(targets), h_covariance_exact(j, k, n, n, big_m - 1)


# -- sweeps and reports --------------------------------------------------------

CSV_HEADER = [
    "experiment",
    "q",
    "n",
    "h",
    "j",
    "k",
    "empirical_num",
    "empirical_den",
    "empirical_f64",
    "limit",
    "deviation",
    "seed",
    "millis",
]


@dataclass(frozen=True)
class CovarReport:
    """One grid point of a sweep; empirical is None when the point errored."""

    experiment: int
    q: int
    n: int
    h: int
    j: int
    k: int
    empirical: Fraction | None
    limit: int
    seed: int
    millis: int | None = None
    error: str | None = None

    @property
    def deviation(self) -> float | None:
        if self.empirical is None:
            return None
        return abs(float(self.empirical) - self.limit)

    def row(self) -> list[str]:
        ok = self.empirical is not None
        return [
            str(self.experiment),
            str(self.q),
            str(self.n),
            str(self.h),
            str(self.j),
            str(self.k),
            str(self.empirical.numerator) if ok else "",
            str(self.empirical.denominator) if ok else "",
            repr(float(self.empirical)) if ok else "",
            str(self.limit),
            repr(self.deviation) if ok else "",
            str(self.seed),
            "" if self.millis is None else str(self.millis),
        ]


def _limit_upper(experiment: int, n: int, h: int) -> int:
    if experiment == 1:
        return n
    if experiment == 2:
        return n - 1
    return n - h - 2  # h = -1 folds into the experiment-2 value


def _run_point(
    experiment: int, q: int, n: int, h: int, j: int, k: int, seed: int, max_enum: int, timing: bool
) -> CovarReport:
    limit = limit_sum(j, k, _limit_upper(experiment, n, h))
    started = time.perf_counter()
    try:
        if experiment == 1:
            value = covar1_empirical(q, n, j, k, max_enum)
        elif experiment == 2:
            value = covar2_empirical(q, n, j, k, max_enum)
        elif experiment == 3:
            value = covar3_empirical(q, n, h, j, k, max_enum)
        else:
            raise ValueError(f"unknown experiment {experiment}")
    except BudgetError as err:
        return CovarReport(experiment, q, n, h, j, k, None, limit, seed, None, str(err))
    millis = int((time.perf_counter() - started) * 1000) if timing else None
    return CovarReport(experiment, q, n, h, j, k, value, limit, seed, millis)


def q_sweep(
    experiment: int,
    qs: list[int],
    n: int,
    h: int,
    j: int,
    k: int,
    seed: int = 0,
    max_enum: int = DEFAULT_MAX_ENUM,
    threads: int = 1,
    timing: bool = False,
) -> list[CovarReport]:
    """One report per prime in grid order; budget failures are recorded, not fatal.

    Points are independent, so they may run on a thread pool; the merge is
    by grid position, which makes the output order (and bytes) independent
    of the thread count.
    """
    if experiment in (1, 2):
        h = -1
    args = [(experiment, q, n, h, j, k, seed, max_enum, timing) for q in qs]
    if threads <= 1 or len(args) <= 1:
        return [_run_point(*a) for a in args]
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda a: _run_point(*a), args))


def write_reports_csv(reports: list[CovarReport], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for report in reports:
        writer.writerow(report.row())


def write_reports_json(reports: list[CovarReport], fh) -> None:
    items = []
    for r in reports:
        ok = r.empirical is not None
        items.append(
            {
                "experiment": r.experiment,
                "q": r.q,
                "n": r.n,
                "h": r.h,
                "j": r.j,
                "k": r.k,
                "empirical_num": r.empirical.numerator if ok else None,
                "empirical_den": r.empirical.denominator if ok else None,
                "empirical_f64": float(r.empirical) if ok else None,
                "limit": r.limit,
                "deviation": r.deviation,
                "seed": r.seed,
                "millis": r.millis,
            }
        )
    json.dump(items, fh, indent=2)
    fh.write("\n")


def reports_to_csv_text(reports: list[CovarReport]) -> str:
    buf = io.StringIO()
    write_reports_csv(reports, buf)
    return buf.getvalue()
