from __future__ import annotations

import math
import random

import numpy as np
import pytest

from fqcovar.characters import (
    Character,
    build_unit_group,
    character_from_json,
    character_to_json,
    char_value,
    classify,
    enumerate_characters,
    orthogonality_residual,
    phi,
    phi_even,
    phi_even_primitive,
    phi_primitive,
    unit_sum_check,
    value_tables,
)
from fqcovar.fq_poly import FieldParams, Poly, enumerate_monics

F2 = FieldParams(2)
F3 = FieldParams(3)
F5 = FieldParams(5)


def test_group_orders():
    assert build_unit_group(F3, 2).size == 6
    assert build_unit_group(F2, 1).size == 1
    assert build_unit_group(F5, 3).size == 100
    g = build_unit_group(F3, 2)
    assert math.prod(g.orders) == 6
    assert len(g.unit_codes) == 6


def test_group_guard():
    with pytest.raises(ValueError):
        build_unit_group(FieldParams(65521), 2)
    with pytest.raises(ValueError):
        build_unit_group(F2, 0)


@pytest.mark.parametrize("q,m", [(2, 1), (2, 4), (3, 1), (3, 3), (5, 2), (7, 2)])
def test_dlog_is_a_bijection(q, m):
    """Every unit has a unique exponent vector; products add exponents."""
    field = FieldParams(q)
    g = build_unit_group(field, m)
    units = g.unit_codes
    vecs = {tuple(g.dlog[c]) for c in units}
    assert len(vecs) == g.size
    assert all(tuple(g.dlog[c]) >= (0,) * len(g.orders) for c in units)
    # non-units carry the -1 sentinel
    assert not g.orders or all(g.dlog[c][0] == -1 for c in range(0, q**m, q))
    # generator orders are exact
    from fqcovar.characters import _pow_code

    for gen, o in zip(g.generators, g.orders):
        assert _pow_code(q, m, gen, o) == 1
        for d in range(1, o):
            if o % d == 0:
                assert _pow_code(q, m, gen, d) != 1


def test_character_count_and_ids():
    g = build_unit_group(F3, 2)
    chars = list(enumerate_characters(g))
    assert len(chars) == 6
    assert [c.char_id for c in chars] == list(range(6))
    assert sum(c.is_trivial for c in chars) == 1
    trivial = next(c for c in chars if c.is_trivial)
    assert all(
        abs(v - 1) < 1e-12 for v in trivial.values[trivial.group.unit_codes]
    )


def test_q2_m3_count():
    assert len(list(enumerate_characters(build_unit_group(F2, 3)))) == 4


@pytest.mark.parametrize("q", (2, 3, 5, 7))
@pytest.mark.parametrize("m", (1, 2, 3))
def test_classification_counts(q, m):
    field = FieldParams(q)
    group = build_unit_group(field, m)
    flags = [classify(c) for c in enumerate_characters(group)]
    assert len(flags) == phi(q, m)
    assert sum(f.is_even for f in flags) == phi_even(q, m)
    assert sum(f.is_primitive for f in flags) == phi_primitive(q, m)
    assert sum(f.is_even and f.is_primitive for f in flags) == phi_even_primitive(q, m)


def test_counts_q3_m3_frozen():
    # phi = 18, even 9, primitive 12, even primitive 6
    assert (phi(3, 3), phi_even(3, 3), phi_primitive(3, 3), phi_even_primitive(3, 3)) == (
        18,
        9,
        12,
        6,
    )


@pytest.mark.parametrize("q", (2, 3, 5))
def test_primitive_tower(q):
    """phi(T^m) equals the cumulative primitive count over moduli T^d, d <= m."""
    for m in range(1, 5):
        assert phi(q, m) == sum(phi_primitive(q, d) for d in range(m + 1))
        assert phi_even(q, m) == sum(phi_even_primitive(q, d) for d in range(m + 1))


def test_enumerated_primitive_means_not_induced():
    """Primitive iff the character separates points that merge mod T^{m-1}."""
    group = build_unit_group(F3, 3)
    sub = build_unit_group(F3, 2)
    for chi in enumerate_characters(group):
        # chi is induced by a character mod T^2 iff constant on fibers of
        # reduction, i.e. trivial on 1 + a T^2
        induced = all(
            abs(chi.values[1 + 9 * a] - 1) < 1e-12 for a in range(3)
        )
        assert chi.is_primitive == (not induced)
    assert sub.size == 6


def test_value_properties():
    group = build_unit_group(F5, 2)
    rng = random.Random(3)
    for chi in enumerate_characters(group):
        vals = chi.values
        units = group.unit_codes
        assert np.allclose(np.abs(vals[units]), 1.0, atol=1e-12)
        assert vals[0] == 0 and vals[5] == 0  # multiples of T
        assert abs(vals[1] - 1) < 1e-12  # chi(1) = 1
        # complete multiplicativity through the code product
        from fqcovar.characters import _mul_code

        for _ in range(20):
            x, y = rng.choice(units), rng.choice(units)
            assert abs(vals[_mul_code(5, 2, x, y)] - vals[x] * vals[y]) < 1e-12


def test_char_value_on_polys():
    group = build_unit_group(F3, 2)
    for chi in enumerate_characters(group):
        # reduction mod T^2 happens internally
        f = Poly.from_text("1,1,2,1@3")
        g = Poly.from_text("1,1@3")
        assert abs(char_value(chi, f) - char_value(chi, g)) < 1e-12
        assert char_value(chi, Poly.t(F3) * g) == 0
        if chi.is_even:
            assert abs(char_value(chi, g.scale(2)) - char_value(chi, g)) < 1e-12


def test_multiplicativity_on_random_polys():
    group = build_unit_group(F5, 3)
    rng = random.Random(9)
    chars = list(enumerate_characters(group))
    for _ in range(40):
        chi = rng.choice(chars)
        f = Poly(F5, [rng.randrange(5) for _ in range(4)] + [1])
        g = Poly(F5, [rng.randrange(5) for _ in range(4)] + [1])
        assert abs(char_value(chi, f * g) - char_value(chi, f) * char_value(chi, g)) < 1e-12


def test_orthogonality():
    group = build_unit_group(F3, 3)
    f = Poly.from_text("1,1@3")
    g = Poly.from_text("1,1,0,2@3")  # same residue mod T^3? no: 1,1,0 vs 1,1,2... different
    assert orthogonality_residual(group, f, f) <= 1e-10
    assert orthogonality_residual(group, f, Poly.from_text("2,1@3")) <= 1e-10
    assert orthogonality_residual(group, Poly.t(F3), f) <= 1e-10
    assert orthogonality_residual(group, f, g) <= 1e-10
    # congruent pair with equal residues
    h = f + Poly.monomial(F3, 5)
    assert orthogonality_residual(group, f, h) <= 1e-10


def test_unit_sum_identity():
    for q, m in ((2, 2), (3, 2), (5, 2), (7, 1)):
        group = build_unit_group(FieldParams(q), m)
        for chi in enumerate_characters(group):
            assert unit_sum_check(chi)
            if q == 2:
                assert chi.is_even  # F_2 has no nonzero scalars but 1


def test_batched_value_tables_match_single():
    group = build_unit_group(F3, 3)
    chars = list(enumerate_characters(group))
    tables = value_tables(group, chars)
    assert tables.shape == (18, 27)
    for i, chi in enumerate(chars):
        assert np.allclose(tables[i], chi.values, atol=1e-14)


def test_json_round_trip():
    group = build_unit_group(F5, 2)
    for chi in enumerate_characters(group):
        text = character_to_json(chi)
        back = character_from_json(group, text)
        assert back.exponents == chi.exponents
        assert back.char_id == chi.char_id
    with pytest.raises(ValueError):
        character_from_json(build_unit_group(F3, 2), character_to_json(chi))


def test_exponent_validation():
    group = build_unit_group(F3, 2)
    with pytest.raises(ValueError):
        Character(group, (99,) * len(group.orders))
    with pytest.raises(ValueError):
        Character(group, (0,) * (len(group.orders) + 1))


def test_even_characters_restrict_to_cosets():
    """Even characters are functions of the monic part: chi(cf) = chi(f)."""
    group = build_unit_group(F5, 2)
    for chi in enumerate_characters(group):
        if not chi.is_even:
            continue
        for f in enumerate_monics(F5, 2):
            for c in range(2, 5):
                assert abs(char_value(chi, f.scale(c)) - char_value(chi, f)) < 1e-12
