from __future__ import annotations

from fractions import Fraction

import pytest

from fqcovar.fq_poly import FieldParams, Poly, enumerate_monics, factor
from fqcovar.intervals import (
    IntervalSpec,
    interval_members,
    involution_star,
    psi_j_tilde,
    psi_j_tilde_natural,
    shift_map,
    valuation_decomposition_check,
)

F2 = FieldParams(2)
F3 = FieldParams(3)


def test_spec_normalizes_center():
    a = IntervalSpec(Poly.from_text("1,1,0,1@2"), 1)  # T^3 + T + 1
    b = IntervalSpec(Poly.from_text("0,0,0,1@2"), 1)  # T^3
    assert a == b  # same interval: low two coefficients are free
    assert a.center == Poly.from_text("0,0,0,1@2")
    c = IntervalSpec(Poly.from_text("1,1,0,1@2"), 2)
    assert c != a


def test_spec_validation():
    with pytest.raises(ValueError):
        IntervalSpec(Poly.from_text("0,1,1@2").scale(1), 2)  # h >= deg
    with pytest.raises(ValueError):
        IntervalSpec(Poly.from_text("0,2@3"), 0)  # not monic
    with pytest.raises(ValueError):
        IntervalSpec(Poly.t(F2), -1)


def test_interval_members_examples():
    members = set(interval_members(IntervalSpec(Poly.from_text("0,0,1@2"), 0)))
    assert members == {Poly.from_text("0,0,1@2"), Poly.from_text("1,0,1@2")}
    # count q^{h+1}
    assert len(list(interval_members(IntervalSpec(Poly.monomial(F3, 3), 1)))) == 9
    # h = n-1 gives all of M_n
    full = set(interval_members(IntervalSpec(Poly.monomial(F2, 3), 2)))
    assert full == set(enumerate_monics(F2, 3))
    # all members monic of the same degree
    for g in interval_members(IntervalSpec(Poly.monomial(F3, 4), 2)):
        assert g.is_monic and g.degree == 4


def test_psi_j_tilde_examples():
    assert psi_j_tilde(1, IntervalSpec(Poly.monomial(F2, 2), 1)) == 0
    assert psi_j_tilde(1, IntervalSpec(Poly.monomial(F2, 2), 0)) == 0
    # full-interval sum of the centered weight vanishes for every order
    for q in (2, 3):
        field = FieldParams(q)
        for n in (2, 3, 4):
            for j in (1, 2, 3):
                assert psi_j_tilde(j, IntervalSpec(Poly.monomial(field, n), n - 1)) == 0


def test_psi_j_tilde_natural_examples():
    assert psi_j_tilde_natural(1, IntervalSpec(Poly.monomial(F2, 2), 1)) == 0
    assert psi_j_tilde_natural(0, IntervalSpec(Poly.monomial(F2, 2), 1)) == 0
    # [DERIVED] F_3, center T^2, h=0: natural members T^2+1, T^2+2 carry
    # Lambda values 2, 0 while E_1^nat(2) = 4/3, so the sum is -2/3
    assert psi_j_tilde_natural(1, IntervalSpec(Poly.monomial(F3, 2), 0)) == Fraction(-2, 3)


def test_involution_star():
    f = Poly.from_text("1,0,2@3")
    assert involution_star(f) == Poly.from_text("2,0,1@3")
    palindrome = Poly.from_text("1,1,1@2")
    assert involution_star(palindrome) == palindrome
    # (f*)* = f
    for g in enumerate_monics(F3, 3):
        if g.constant_term != 0:
            assert involution_star(involution_star(g)) == g
    with pytest.raises(ValueError):
        involution_star(Poly.t(F2))
    with pytest.raises(ValueError):
        involution_star(Poly.zero(F2))


def test_star_is_multiplicative():
    # ((T+1)^2)* = (T^2+1)* = 1+T^2 over F_2
    f = Poly.from_text("1,1@2")
    assert involution_star(f * f) == involution_star(f) * involution_star(f)
    for a in enumerate_monics(F3, 2):
        for b in enumerate_monics(F3, 1):
            if a.constant_term and b.constant_term:
                assert involution_star(a * b) == involution_star(a) * involution_star(b)


def test_star_preserves_arithmetic_weights():
    from fqcovar.arith_fn import lambda_j_recursive, mobius

    for f in enumerate_monics(F3, 4):
        if f.constant_term == 0:
            continue
        g = involution_star(f).monic()[1]
        assert mobius(f) == mobius(g)
        for j in (1, 2):
            assert lambda_j_recursive(j, f) == lambda_j_recursive(j, g)


@pytest.mark.parametrize("q,max_n", [(2, 5), (3, 5)])
def test_star_congruence_equivalence_exhaustive(q, max_n):
    """deg(f1 - f2) <= h iff star(f1) = star(f2) mod T^{n-h}."""
    field = FieldParams(q)
    for n in range(2, max_n + 1):
        naturals = [f for f in enumerate_monics(field, n) if f.constant_term != 0]
        stars = [involution_star(f) for f in naturals]
        for h in range(0, n):
            for i1, f1 in enumerate(naturals):
                for i2, f2 in enumerate(naturals):
                    lhs = (f1 - f2).degree <= h
                    rhs = stars[i1].truncate(n - h) == stars[i2].truncate(n - h)
                    assert lhs == rhs


def test_shift_map():
    assert shift_map(Poly.from_text("0,1,1@2"), 1) == Poly.from_text("1,1@2")
    f = Poly.from_text("1,1,1@2")
    assert shift_map(f, 0) == f
    assert shift_map(Poly(F3, (0, 0, 0, 2)), 2) == Poly(F3, (0, 2))
    with pytest.raises(ValueError):
        shift_map(Poly.from_text("1,1@2"), 1)


@pytest.mark.parametrize(
    "q,n,h,j",
    [(2, 2, 1, 1), (3, 3, 1, 2), (2, 4, 2, 3), (3, 4, 0, 1), (2, 5, 4, 2), (3, 3, 2, 0)],
)
def test_valuation_decomposition(q, n, h, j):
    field = FieldParams(q)
    assert valuation_decomposition_check(j, IntervalSpec(Poly.monomial(field, n), h))
    # also on a center with nontrivial high coefficients
    center = Poly.monomial(field, n) + Poly.monomial(field, n - 1)
    if n - 1 > h:
        assert valuation_decomposition_check(j, IntervalSpec(center, h))


def test_interval_bucket_partition():
    """Buckets of M_n sharing high coefficients are exactly the intervals."""
    field = FieldParams(3)
    n, h = 3, 1
    buckets: dict[tuple, list] = {}
    for f in enumerate_monics(field, n):
        buckets.setdefault(f.coeffs[h + 1 :], []).append(f)
    assert all(len(v) == 3 ** (h + 1) for v in buckets.values())
    for high, members in buckets.items():
        spec = IntervalSpec(members[0], h)
        assert set(interval_members(spec)) == set(members)
