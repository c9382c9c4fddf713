"""Short intervals around a monic polynomial and their weighted counts.

The interval I(f;h) is the set of monic g with deg(f - g) <= h, i.e. the
q^{h+1} polynomials sharing the coefficients of T^{h+1}..T^n with f.  Those
shared high coefficients make intervals the fibers of a quotient map, so an
IntervalSpec normalizes its center (low coefficients zeroed) and spec
equality is interval equality.

Star is the coefficient-reversal involution on polynomials with nonzero
constant term; it swaps interval membership with a congruence condition mod
a power of T, which is what connects interval statistics to Dirichlet
characters.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .arith_fn import e_natural, lambda_j_recursive, lambda_tilde
from .fq_poly import FieldParams, Poly, enumerate_monics

__all__ = [
    "IntervalSpec",
    "interval_members",
    "psi_j_tilde",
    "psi_j_tilde_natural",
    "involution_star",
    "shift_map",
    "valuation_decomposition_check",
]


@dataclass(frozen=True)
class IntervalSpec:
    """I(center; h), center monic of degree > h; holds q^{h+1} members."""

    center: Poly
    h: int

    def __post_init__(self) -> None:
        if not self.center.is_monic:
            raise ValueError("interval center must be monic")
        if not 0 <= self.h < self.center.degree:
            raise ValueError("need 0 <= h < deg(center)")
        rep = Poly(self.center.field, (0,) * (self.h + 1) + self.center.coeffs[self.h + 1 :])
        object.__setattr__(self, "center", rep)

    @property
    def field(self) -> FieldParams:
        return self.center.field

    @property
    def degree(self) -> int:
        return self.center.degree


def interval_members(spec: IntervalSpec) -> Iterator[Poly]:
    """All monic g with deg(center - g) <= h, low coefficients in index order."""
    q = spec.field.q
    high = spec.center.coeffs[spec.h + 1 :]
    for idx in range(q ** (spec.h + 1)):
        low = []
        rem = idx
        for _ in range(spec.h + 1):
            rem, c = divmod(rem, q)
            low.append(c)
        yield Poly(spec.field, tuple(low) + high)


def psi_j_tilde(j: int, spec: IntervalSpec) -> int:
    """Sum of the centered weight Lambda~_j over the interval."""
    return sum(lambda_tilde(j, g) for g in interval_members(spec))


def psi_j_tilde_natural(j: int, spec: IntervalSpec) -> Fraction:
    """Sum of Lambda_j - E_j^nat(n) over interval members with g(0) != 0."""
    mean = e_natural(spec.field, j, spec.degree)
    total = Fraction(0)
    for g in interval_members(spec):
        if g.constant_term != 0:
            total += lambda_j_recursive(j, g) - mean
    return total


def involution_star(f: Poly) -> Poly:
    """Coefficient reversal a_0 + ... + a_n T^n -> a_n + ... + a_0 T^n."""
    if f.is_zero or f.constant_term == 0:
        raise ValueError("star requires a nonzero constant term")
    return Poly(f.field, f.coeffs[::-1])


def shift_map(f: Poly, i: int) -> Poly:
    """The cofactor f / T^i; defined only when T^i divides f."""
    if i < 0:
        raise ValueError("shift must be >= 0")
    if any(c != 0 for c in f.coeffs[:i]):
        raise ValueError("T^i does not divide f")
    return Poly(f.field, f.coeffs[i:])


def valuation_decomposition_check(j: int, spec: IntervalSpec) -> bool:
    """Split the interval sum of Lambda_j by the power of T dividing each member.

    Members with T-valuation i <= h are T^i g for g monic of degree n - i
    with g(0) != 0; the single member with valuation > h is the normalized
    center itself.  Returns whether the regrouped sum matches exactly.
    """
    lhs = sum(lambda_j_recursive(j, g) for g in interval_members(spec))
    field, n, h, center = spec.field, spec.degree, spec.h, spec.center
    rhs = 0
    for i in range(h + 1):
        shifted = Poly.monomial(field, i)
        for g in enumerate_monics(field, n - i):
            if g.constant_term == 0:
                continue
            lifted = shifted * g
            if (lifted - center).degree <= h:
                rhs += lambda_j_recursive(j, lifted)
    rhs += lambda_j_recursive(j, Poly.monomial(field, h + 1) * shift_map(center, h + 1))
    return lhs == rhs
