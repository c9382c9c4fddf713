"""Exact arithmetic in F_q (q prime) and in the polynomial ring F_q[T].

Polynomials are dense coefficient tuples, lowest degree first, with no
trailing zeros; the zero polynomial has the empty tuple and the sentinel
degree ``ZERO_DEGREE``.  Every operation is pure and every value immutable,
so all of this is safe to use from worker threads.

Factorization is complete (squarefree split, distinct-degree split, then
randomized equal-degree splitting); the equal-degree stage takes an explicit
seed so factorizations are reproducible.

The text format ``c0,c1,...,cn@q`` (e.g. ``0,1,1@2`` for T^2+T over F_2) is
the one polynomial serialization used everywhere: CLI arguments, CSV cells,
logs.  ``Poly.from_text`` / ``Poly.to_text`` round-trip bit-exactly.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

__all__ = [
    "ZERO_DEGREE",
    "FieldParams",
    "Poly",
    "Factorization",
    "poly_gcd",
    "factor",
    "is_irreducible",
    "enumerate_monics",
    "monic_from_index",
    "monic_index",
    "residue_code",
    "monic_irreducibles",
    "irreducible_count",
]

ZERO_DEGREE = -1  # degrees of nonzero polynomials are >= 0, so -1 sorts below all of them

_MAX_Q = 1 << 16


@dataclass(frozen=True)
class FieldParams:
    """The prime field F_q.  q is validated by trial division at construction."""

    q: int

    def __post_init__(self) -> None:
        q = self.q
        if not isinstance(q, int) or q < 2 or q > _MAX_Q:
            raise ValueError(f"field size must be an integer in [2, {_MAX_Q}], got {q!r}")
        if q % 2 == 0 and q != 2:
            raise ValueError(f"{q} is not prime")
        d = 3
        while d * d <= q:
            if q % d == 0:
                raise ValueError(f"{q} is not prime")
            d += 2

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.q

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("inverse of zero residue")
        return pow(a, self.q - 2, self.q)


def _trim(coeffs: list[int]) -> tuple[int, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    """An element of F_q[T] as an immutable coefficient tuple (lowest first)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldParams, coeffs: Sequence[int]):
        q = field.q
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", _trim([c % q for c in coeffs]))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field: FieldParams) -> "Poly":
        return cls(field, ())

    @classmethod
    def one(cls, field: FieldParams) -> "Poly":
        return cls(field, (1,))

    @classmethod
    def constant(cls, field: FieldParams, c: int) -> "Poly":
        return cls(field, (c,))

    @classmethod
    def t(cls, field: FieldParams) -> "Poly":
        return cls(field, (0, 1))

    @classmethod
    def monomial(cls, field: FieldParams, n: int, c: int = 1) -> "Poly":
        return cls(field, (0,) * n + (c,))

    @classmethod
    def from_text(cls, text: str) -> "Poly":
        """Parse the ``c0,c1,...,cn@q`` format."""
        body, sep, qs = text.partition("@")
        if not sep or not body:
            raise ValueError(f"malformed polynomial text {text!r}")
        try:
            q = int(qs)
            coeffs = [int(c) for c in body.split(",")]
        except ValueError as exc:
            raise ValueError(f"malformed polynomial text {text!r}") from exc
        field = FieldParams(q)
        if any(c < 0 or c >= q for c in coeffs):
            raise ValueError(f"coefficient out of range in {text!r}")
        return cls(field, coeffs)

    def to_text(self) -> str:
        if not self.coeffs:
            return f"0@{self.field.q}"
        return ",".join(str(c) for c in self.coeffs) + f"@{self.field.q}"

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_one(self) -> bool:
        return self.coeffs == (1,)

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def leading(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def constant_term(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    # -- ring operations ---------------------------------------------------

    def _same_field(self, other: "Poly") -> None:
        if self.field.q != other.field.q:
            raise ValueError("mixed fields")

    def __add__(self, other: "Poly") -> "Poly":
        self._same_field(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % self.field.q
        return Poly(self.field, out)

    def __neg__(self) -> "Poly":
        q = self.field.q
        return Poly(self.field, [(-c) % q for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._same_field(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(self.field)
        q = self.field.q
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return Poly(self.field, [c % q for c in out])

    def scale(self, c: int) -> "Poly":
        q = self.field.q
        c %= q
        return Poly(self.field, [(c * a) % q for a in self.coeffs])

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._same_field(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        q = self.field.q
        db = other.degree
        inv_lead = self.field.inv(other.leading)
        rem = list(self.coeffs)
        quot = [0] * max(len(rem) - db, 0)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i] % q
            if c:
                factor_c = (c * inv_lead) % q
                quot[i - db] = factor_c
                for j, cb in enumerate(other.coeffs):
                    rem[i - db + j] = (rem[i - db + j] - factor_c * cb) % q
        return Poly(self.field, quot), Poly(self.field, rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative exponent")
        result = Poly.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def pow_mod(self, e: int, modulus: "Poly") -> "Poly":
        if e < 0:
            raise ValueError("negative exponent")
        result = Poly.one(self.field) % modulus
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result

    def monic(self) -> tuple[int, "Poly"]:
        """Split off the unit: returns (leading coefficient, monic associate)."""
        if self.is_zero:
            raise ValueError("zero polynomial has no monic associate")
        u = self.leading
        if u == 1:
            return 1, self
        return u, self.scale(self.field.inv(u))

    def derivative(self) -> "Poly":
        q = self.field.q
        return Poly(self.field, [(i * c) % q for i, c in enumerate(self.coeffs)][1:])

    def evaluate(self, a: int) -> int:
        q = self.field.q
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * a + c) % q
        return acc

    def truncate(self, m: int) -> "Poly":
        """The residue mod T^m (drop coefficients of T^m and above)."""
        return Poly(self.field, self.coeffs[:m])

    # -- hashing / display ---------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Poly)
            and self.field.q == other.field.q
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self.coeffs))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append("T" if c == 1 else f"{c}T")
            else:
                terms.append(f"T^{i}" if c == 1 else f"{c}T^{i}")
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"Poly({self.to_text()!r})"


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic greatest common divisor; gcd(0,0) is 0."""
    a, b = f, g
    while not b.is_zero:
        a, b = b, a % b
    if a.is_zero:
        return a
    return a.monic()[1]


# -- enumeration and indexing ----------------------------------------------
#
# The monic polynomial T^n + a_{n-1}T^{n-1} + ... + a_0 has index
# sum(a_i q^i), so index order is lexicographic with a_0 varying fastest.


def monic_from_index(field: FieldParams, n: int, idx: int) -> Poly:
    q = field.q
    coeffs = []
    rem = idx
    for _ in range(n):
        rem, c = divmod(rem, q)
        coeffs.append(c)
    coeffs.append(1)
    return Poly(field, coeffs)


def monic_index(f: Poly) -> int:
    """Inverse of monic_from_index for monic f of positive degree (or degree 0)."""
    if not f.is_monic:
        raise ValueError("monic_index requires a monic polynomial")
    q = f.field.q
    idx = 0
    for c in reversed(f.coeffs[:-1]):
        idx = idx * q + c
    return idx


def residue_code(f: Poly, m: int) -> int:
    """Integer code sum(c_i q^i, i < m) of the residue f mod T^m."""
    q = f.field.q
    code = 0
    for i in range(min(m, len(f.coeffs)) - 1, -1, -1):
        code = code * q + f.coeffs[i]
    return code


def enumerate_monics(field: FieldParams, n: int) -> Iterator[Poly]:
    """All q^n monic polynomials of degree n, index (= lex, a_0 fastest) order."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    for idx in range(field.q**n):
        yield monic_from_index(field, n, idx)


# -- factorization -----------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    """unit × product of P_i^{e_i} with the P_i distinct monic irreducibles."""

    field: FieldParams
    unit: int
    factors: tuple[tuple[Poly, int], ...]

    def product(self) -> Poly:
        out = Poly.constant(self.field, self.unit)
        for p, e in self.factors:
            out = out * p**e
        return out

    @property
    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def degrees(self) -> tuple[int, ...]:
        """Degrees of the distinct irreducible factors (sorted)."""
        return tuple(sorted(p.degree for p, _ in self.factors))


def _pth_root(f: Poly) -> Poly:
    # valid when f'(T) = 0 over the prime field: f = g(T^p) and g has the
    # same coefficients (Frobenius is the identity on F_p)
    p = f.field.q
    return Poly(f.field, f.coeffs[::p])


def _equal_degree_split(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Cantor-Zassenhaus: f monic squarefree, all factors of degree d."""
    n = f.degree
    if n == d:
        return [f]
    q = f.field.q
    field = f.field
    while True:
        u = Poly(field, [rng.randrange(q) for _ in range(n)])
        if u.degree < 1:
            continue
        if q % 2 == 1:
            w = u.pow_mod((q**d - 1) // 2, f) - Poly.one(field)
        else:
            # char 2: use the trace map sum u^{2^i}, i < d
            w = Poly.zero(field)
            t = u % f
            for _ in range(d):
                w = (w + t) % f
                t = (t * t) % f
        g = poly_gcd(w, f)
        if 0 < g.degree < n:
            return _equal_degree_split(g, d, rng) + _equal_degree_split(f // g, d, rng)


def _distinct_degree_split(f: Poly, rng: random.Random) -> list[Poly]:
    """Split a monic squarefree f into irreducibles."""
    field = f.field
    q = field.q
    out: list[Poly] = []
    rem = f
    h = Poly.t(field) % rem
    d = 0
    while rem.degree > 0:
        d += 1
        if 2 * d > rem.degree:
            out.append(rem)  # leftover has no factor of degree <= deg/2, hence irreducible
            break
        h = h.pow_mod(q, rem)
        g = poly_gcd(h - Poly.t(field), rem)
        if g.degree > 0:
            out.extend(_equal_degree_split(g, d, rng))
            rem = rem // g
            if rem.degree > 0:
                h = h % rem
    return out


def _factor_monic(f: Poly, rng: random.Random, out: dict[Poly, int], mult: int) -> None:
    while f.degree > 0:
        df = f.derivative()
        if df.is_zero:
            f = _pth_root(f)
            mult *= f.field.q
            continue
        g = poly_gcd(f, df)
        if g.degree == 0:
            for p in _distinct_degree_split(f, rng):
                out[p] = out.get(p, 0) + mult
            return
        _factor_monic(f // g, rng, out, mult)
        f = g


def factor(f: Poly, seed: int = 0) -> Factorization:
    """Complete factorization into monic irreducibles; deterministic per seed."""
    if f.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    unit, g = f.monic()
    rng = random.Random(f"{seed}|{f.field.q}|{f.coeffs}")
    out: dict[Poly, int] = {}
    _factor_monic(g, rng, out, 1)
    factors = tuple(sorted(out.items(), key=lambda pe: (pe[0].degree, pe[0].coeffs)))
    return Factorization(f.field, unit, factors)


def is_irreducible(f: Poly) -> bool:
    """Deterministic Rabin test (monic normalization applied internally)."""
    if f.degree < 1:
        return False
    _, g = f.monic()
    n = g.degree
    if n == 1:
        return True
    q = g.field.q
    t = Poly.t(g.field)
    if t.pow_mod(q**n, g) != t % g:
        return False
    for ell in _prime_divisors(n):
        w = t.pow_mod(q ** (n // ell), g) - t
        if poly_gcd(w, g).degree != 0:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@functools.lru_cache(maxsize=None)
def _irreducibles_cached(q: int, d: int) -> tuple[Poly, ...]:
    field = FieldParams(q)
    return tuple(f for f in enumerate_monics(field, d) if is_irreducible(f))


def monic_irreducibles(field: FieldParams, d: int) -> tuple[Poly, ...]:
    """All monic irreducibles of degree d, in index order (cached)."""
    if d < 1:
        return ()
    return _irreducibles_cached(field.q, d)


def irreducible_count(q: int, n: int) -> int:
    """Necklace count (1/n) sum over d|n of mu(d) q^{n/d}."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _mobius_int(d) * q ** (n // d)
    assert total % n == 0
    return total // n


def _mobius_int(n: int) -> int:
    out = 1
    for p in _prime_divisors(n):
        if n % (p * p) == 0:
            return 0
        out = -out
    return out
