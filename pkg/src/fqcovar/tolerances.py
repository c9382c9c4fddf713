"""Centralized numeric tolerances.

Character and spectrum arithmetic is floating point; every downstream
comparison states its tolerance through this one object so the CLI can
override them coherently.  Values sit two orders above double-precision
noise at the largest desk-scale magnitudes (q^{n/2} of a few hundred).
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["Tolerances", "DEFAULT"]


@dataclass(frozen=True)
class Tolerances:
    root: float = 1e-6  # L-root modulus deviation and trivial-zero detection
    orthogonality: float = 1e-10  # character orthogonality and unit sums
    reconstruction: float = 1e-6  # spectrum -> polynomial round trip


DEFAULT = Tolerances()
