"""Dirichlet characters modulo T^m.

The unit group (F_q[T]/T^m)^x is presented as a direct product of cyclic
factors found greedily: repeatedly take an element of maximal order in the
quotient by the factors chosen so far (orders by brute force over all
residues, vectorized), adjust it to have that exact order in the full group,
and extend the discrete-log table.  The final table assigns every unit its
exponent vector, which is verified to be a bijection, so the presentation is
proved correct for each modulus actually built.

A character is an exponent-vector dual: chi(g_l) = exp(2*pi*i a_l / o_l).
Classification (trivial / even / primitive) is integer arithmetic on
discrete logs; floating point enters only in value tables, which are built
lazily because q^m-sized complex tables per character are only needed inside
L-function sums.

Residues mod T^m are encoded as integers sum(c_i q^i), matching the monic
index encoding used by the sweep module.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .fq_poly import FieldParams, Poly, residue_code

__all__ = [
    "MAX_GROUP",
    "UnitGroup",
    "Character",
    "CharacterFlags",
    "build_unit_group",
    "enumerate_characters",
    "classify",
    "char_value",
    "orthogonality_residual",
    "unit_sum_check",
    "character_to_json",
    "character_from_json",
    "phi",
    "phi_even",
    "phi_primitive",
    "phi_even_primitive",
]

MAX_GROUP = 120_000  # unit-group order guard; larger moduli are a resource error


# -- residue-code arithmetic --------------------------------------------------


def _digits(q: int, m: int, x: int) -> list[int]:
    out = []
    for _ in range(m):
        x, c = divmod(x, q)
        out.append(c)
    return out


def _mul_code(q: int, m: int, x: int, y: int) -> int:
    a, b = _digits(q, m, x), _digits(q, m, y)
    out = 0
    for r in range(m - 1, -1, -1):
        c = sum(a[i] * b[r - i] for i in range(r + 1)) % q
        out = out * q + c
    return out


def _pow_code(q: int, m: int, x: int, e: int) -> int:
    out, base = 1, x
    while e:
        if e & 1:
            out = _mul_code(q, m, out, base)
        base = _mul_code(q, m, base, base)
        e >>= 1
    return out


def _mul_all(q: int, m: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Elementwise residue product of two code arrays."""
    xd = [(x // q**i) % q for i in range(m)]
    yd = [(y // q**i) % q for i in range(m)]
    out = np.zeros_like(x)
    for r in range(m - 1, -1, -1):
        c = xd[0] * yd[r]
        for i in range(1, r + 1):
            c = c + xd[i] * yd[r - i]
        out = out * q + c % q
    return out


# -- the unit group -----------------------------------------------------------


class UnitGroup:
    """(F_q[T]/T^m)^x with a verified direct-product presentation.

    generators[l] has exact order orders[l]; dlog maps every unit code to its
    exponent vector (row of -1 on non-units).
    """

    def __init__(
        self,
        field: FieldParams,
        m: int,
        generators: tuple[int, ...],
        orders: tuple[int, ...],
        dlog: np.ndarray,
    ):
        self.field = field
        self.m = m
        self.generators = generators
        self.orders = orders
        self.dlog = dlog
        self.size = phi(field.q, m)
        self.exponent = math.lcm(*orders) if orders else 1

    @property
    def unit_codes(self) -> np.ndarray:
        codes = np.arange(self.field.q**self.m, dtype=np.int64)
        return codes[codes % self.field.q != 0]

    def code_of(self, f: Poly) -> int:
        if f.field.q != self.field.q:
            raise ValueError("mixed fields")
        return residue_code(f, self.m)

    def __repr__(self) -> str:
        return f"UnitGroup(q={self.field.q}, m={self.m}, orders={self.orders})"


def build_unit_group(field: FieldParams, m: int) -> UnitGroup:
    if m < 1:
        raise ValueError("modulus degree must be >= 1")
    q = field.q
    order = phi(q, m)
    if order > MAX_GROUP:
        raise ValueError(f"unit group of order {order} exceeds the {MAX_GROUP} guard")
    size = q**m
    codes = np.arange(size, dtype=np.int64)
    unit_mask = codes % q != 0

    generators: list[int] = []
    orders: list[int] = []
    table: dict[int, tuple[int, ...]] = {1: ()}
    while len(table) < order:
        in_sub = np.zeros(size, dtype=bool)
        in_sub[list(table)] = True
        # order of every unit coset in G / <generators so far>
        cord = np.zeros(size, dtype=np.int64)
        power = codes.copy()
        k = 1
        while True:
            hit = unit_mask & (cord == 0) & in_sub[power]
            cord[hit] = k
            if not (unit_mask & (cord == 0)).any():
                break
            power = _mul_all(q, m, power, codes)
            k += 1
        t = int(cord[unit_mask].max())
        g = int(np.nonzero(unit_mask & (cord == t))[0][0])
        # make the representative an exact t-th root of 1: divide out the
        # subgroup part of g^t, solving t*u = s mod o per factor
        s = table[_pow_code(q, m, g, t)]
        for l, (o, s_l) in enumerate(zip(orders, s)):
            gd = math.gcd(t, o)
            assert s_l % gd == 0, "maximal-order pick left an unsolvable adjustment"
            u = (s_l // gd) * pow(t // gd, -1, o // gd) % (o // gd)
            g = _mul_code(q, m, g, _pow_code(q, m, generators[l], (o - u) % o))
        assert _pow_code(q, m, g, t) == 1
        extended: dict[int, tuple[int, ...]] = {}
        ge = 1
        for e in range(t):
            for code, vec in table.items():
                extended[_mul_code(q, m, code, ge)] = vec + (e,)
            ge = _mul_code(q, m, ge, g)
        assert len(extended) == len(table) * t, "chosen factor is not independent"
        table = extended
        generators.append(g)
        orders.append(t)

    assert len(table) == order
    dlog = np.full((size, len(orders)), -1, dtype=np.int64)
    for code, vec in table.items():
        dlog[code] = vec
    return UnitGroup(field, m, tuple(generators), tuple(orders), dlog)


# -- characters ---------------------------------------------------------------


class CharacterFlags(NamedTuple):
    is_trivial: bool
    is_even: bool
    is_primitive: bool


class Character:
    """A character of the unit group, given by one exponent per cyclic factor."""

    def __init__(self, group: UnitGroup, exponents: Sequence[int]):
        if len(exponents) != len(group.orders):
            raise ValueError("exponent vector length mismatch")
        if any(not 0 <= a < o for a, o in zip(exponents, group.orders)):
            raise ValueError("exponent out of range")
        self.group = group
        self.exponents = tuple(exponents)
        L = group.exponent
        self._weights = np.asarray(
            [a * (L // o) for a, o in zip(self.exponents, group.orders)], dtype=np.int64
        )
        self._values: np.ndarray | None = None

    # integer phase of chi on a residue code, in units of 1/L turns
    def _phase(self, code: int) -> int:
        return int(self.group.dlog[code] @ self._weights) % self.group.exponent

    @property
    def char_id(self) -> int:
        out = 0
        for a, o in zip(self.exponents, self.group.orders):
            out = out * o + a
        return out

    @property
    def is_trivial(self) -> bool:
        return not any(self.exponents)

    @property
    def is_even(self) -> bool:
        """True when chi is 1 on every nonzero scalar."""
        q = self.group.field.q
        return all(self._phase(c) == 0 for c in range(1, q))

    @property
    def is_primitive(self) -> bool:
        """True when chi does not factor through the modulus T^{m-1}."""
        q, m = self.group.field.q, self.group.m
        if m == 1:
            return not self.is_trivial  # only the trivial character is induced from T^0
        kernel_gen = 1 + q ** (m - 1)  # generates {1 + a T^{m-1}}, cyclic of order q
        return self._phase(kernel_gen) != 0

    @property
    def values(self) -> np.ndarray:
        """chi on every residue code mod T^m; 0 on non-units.  Cached."""
        if self._values is None:
            self._values = value_tables(self.group, [self])[0]
        return self._values

    def value(self, f: Poly) -> complex:
        return complex(self.values[self.group.code_of(f)])

    def __repr__(self) -> str:
        return (
            f"Character(q={self.group.field.q}, m={self.group.m}, "
            f"exponents={self.exponents})"
        )


def value_tables(group: UnitGroup, chars: Sequence[Character]) -> np.ndarray:
    """Value tables for a batch of characters, shape (len(chars), q^m)."""
    size = group.field.q**group.m
    if not chars:
        return np.zeros((0, size), dtype=complex)
    L = group.exponent
    weights = np.stack([c._weights for c in chars])
    phases = (weights @ group.dlog.T) % L
    out = np.exp((2j * np.pi / L) * phases)
    out[:, np.arange(size) % group.field.q == 0] = 0
    return out


def enumerate_characters(group: UnitGroup) -> Iterator[Character]:
    """All phi(T^m) characters, in char_id order (last exponent fastest)."""
    for exps in itertools.product(*(range(o) for o in group.orders)):
        yield Character(group, exps)


def classify(chi: Character) -> CharacterFlags:
    return CharacterFlags(chi.is_trivial, chi.is_even, chi.is_primitive)


def char_value(chi: Character, f: Poly) -> complex:
    return chi.value(f)


def orthogonality_residual(group: UnitGroup, f: Poly, g: Poly) -> float:
    """Deviation of (1/phi) sum over chi of conj(chi(f)) chi(g) from its indicator."""
    cf, cg = group.code_of(f), group.code_of(g)
    q = group.field.q
    both_units = cf % q != 0 and cg % q != 0
    indicator = 1.0 if both_units and cf == cg else 0.0
    if not both_units:
        return abs(indicator)  # every term has a zero factor
    L = group.exponent
    diff = group.dlog[cg] - group.dlog[cf]
    total = 0j
    for exps in itertools.product(*(range(o) for o in group.orders)):
        phase = sum(a * (L // o) * d for a, o, d in zip(exps, group.orders, diff)) % L
        total += np.exp(2j * np.pi * phase / L)
    return abs(total / group.size - indicator)


def unit_sum_check(chi: Character) -> bool:
    """Sum of chi over nonzero scalars is (q-1) on even characters, else 0."""
    q = chi.group.field.q
    total = sum(complex(chi.values[c]) for c in range(1, q))
    expect = (q - 1.0) if chi.is_even else 0.0
    return abs(total - expect) <= 1e-10


# -- counting formulas --------------------------------------------------------


def phi(q: int, m: int) -> int:
    """Order of the unit group mod T^m (1 for the empty modulus)."""
    if m < 0:
        raise ValueError("negative modulus degree")
    return 1 if m == 0 else q ** (m - 1) * (q - 1)


def phi_even(q: int, m: int) -> int:
    """Number of even characters mod T^m."""
    if m < 0:
        raise ValueError("negative modulus degree")
    return 1 if m == 0 else q ** (m - 1)


def phi_primitive(q: int, m: int) -> int:
    """Number of primitive characters mod T^m.

    The closed form q^m (1 - 1/q)^2 holds for m >= 2; mod T every nontrivial
    character is primitive, and the empty modulus contributes the trivial
    character, making phi(T^m) the cumulative sum over 0 <= d <= m.
    """
    if m < 0:
        raise ValueError("negative modulus degree")
    if m == 0:
        return 1
    if m == 1:
        return q - 2
    return q ** (m - 2) * (q - 1) ** 2


def phi_even_primitive(q: int, m: int) -> int:
    """Number of even primitive characters mod T^m."""
    if m < 0:
        raise ValueError("negative modulus degree")
    if m == 0:
        return 1
    if m == 1:
        return 0  # mod T, even means trivial and primitive means nontrivial
    return q ** (m - 2) * (q - 1)


# -- JSON export --------------------------------------------------------------


def character_to_json(chi: Character) -> str:
    return json.dumps(
        {
            "q": chi.group.field.q,
            "m": chi.group.m,
            "exponent_vector": list(chi.exponents),
            "is_even": chi.is_even,
            "is_primitive": chi.is_primitive,
        }
    )


def character_from_json(group: UnitGroup, text: str) -> Character:
    obj = json.loads(text)
    if obj["q"] != group.field.q or obj["m"] != group.m:
        raise ValueError("character JSON does not match this group")
    chi = Character(group, tuple(obj["exponent_vector"]))
    if chi.is_even != obj["is_even"] or chi.is_primitive != obj["is_primitive"]:
        raise ValueError("stored flags disagree with reconstruction")
    return chi
