"""Exact covariance statistics of almost-primes in F_q[T].

Subpackage map:

- ``fq_poly``: prime-field and polynomial-ring arithmetic, factorization,
  enumeration of monics.
- ``arith_fn``: the higher von Mangoldt weights, their centered variants,
  divisor-counting corrections, and exact mean values.
- ``bulk``: vectorized evaluation of those weights over all monics of a
  given degree at once.
- ``intervals``: short-interval sums and the involution/shift symmetries
  relating them to arithmetic progressions.
- ``characters``: the unit group mod T^m, its Dirichlet characters, and
  their classification (even/odd, primitive/imprimitive).
- ``lfunc``: character L-polynomials, their Frobenius spectra, and the
  exact explicit-formula identities the spectra satisfy.
- ``rmt``: Haar-unitary sampling, symmetric-function statistics of spectra,
  exact covariance formulas, and Monte Carlo integration.
- ``experiments``: empirical covariance measurements at finite q against
  their large-q limits, and the sweep harness behind the CLI.
- ``cli``: the ``fqcovar`` command line.
"""

from __future__ import annotations

from .fq_poly import (
    FieldParams,
    Poly,
    Factorization,
    factor,
    is_irreducible,
    enumerate_monics,
    monic_irreducibles,
    irreducible_count,
)

__all__ = [
    "FieldParams",
    "Poly",
    "Factorization",
    "factor",
    "is_irreducible",
    "enumerate_monics",
    "monic_irreducibles",
    "irreducible_count",
]

__version__ = "0.1.0"
