"""Haar-unitary spectra and the symmetric-function statistics built on them.

Everything here is a class function, so a sample is reduced immediately to
its power traces p_k = Tr(g^k); matrices are discarded.  The weight
H_j^{(n)} is the random-matrix analogue of the order-j von Mangoldt weight
at degree n, defined by H_1^{(n)} = -p_n and the same convolution recursion
the arithmetic weight satisfies.  Hook Schur functions s_{(m,1^k)} are the
orthonormal frame everything is expanded in; the alternating Pieri telescope
evaluates them stably, and the bialternant determinant is kept only as a
test oracle.

Exact Haar averages come in two independently computed forms (a closed-form
sum and a Schur-coefficient pairing); Monte Carlo estimates of the same
quantities are the floating-point cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SpectrumStats",
    "HookPartition",
    "SymFnValues",
    "haar_sample",
    "haar_spectra",
    "h_statistic",
    "sym_fn_values",
    "hook_schur",
    "hook_schur_bialternant",
    "h_to_schur_coeffs",
    "h_covariance_exact",
    "h_statistic_bound",
    "z_log_deriv_direct",
    "z_log_deriv_series",
    "series_tail_bound",
    "dyson_exact",
    "mc_integrate",
    "ratio_theorem_closed",
    "ratio_theorem_check",
]


@dataclass(frozen=True)
class SpectrumStats:
    """Dimension and power traces p_1..p_K of one unitary conjugacy class."""

    dim: int
    powers: tuple[complex, ...]

    def __post_init__(self) -> None:
        if self.dim < 0:
            raise ValueError("dimension must be >= 0")
        if any(abs(p) > self.dim + 1e-9 for p in self.powers):
            raise ValueError("|Tr(g^k)| cannot exceed the dimension")

    def power(self, k: int) -> complex:
        if not 1 <= k <= len(self.powers):
            raise ValueError(f"power trace p_{k} not available (have {len(self.powers)})")
        return self.powers[k - 1]

    @classmethod
    def from_eigenvalues(cls, eigenvalues: np.ndarray, depth: int) -> "SpectrumStats":
        w = np.asarray(eigenvalues, dtype=complex)
        acc = np.ones_like(w)
        powers = []
        for _ in range(depth):
            acc = acc * w
            powers.append(complex(acc.sum()))
        return cls(len(w), tuple(powers))

    @classmethod
    def from_angles(cls, angles: tuple[float, ...], depth: int) -> "SpectrumStats":
        return cls.from_eigenvalues(np.exp(2j * np.pi * np.asarray(angles)), depth)


@dataclass(frozen=True)
class HookPartition:
    """The partition (arm, 1^leg): one row of length arm >= 1 and leg extra rows of 1."""

    arm: int
    leg: int

    def __post_init__(self) -> None:
        if self.arm < 1 or self.leg < 0:
            raise ValueError("need arm >= 1 and leg >= 0")

    @property
    def size(self) -> int:
        return self.arm + self.leg

    @property
    def rows(self) -> int:
        return self.leg + 1


@dataclass(frozen=True)
class SymFnValues:
    """e_0..e_N and h_0..h_K of a spectrum; e_t = 0 for t > N structurally."""

    dim: int
    e: tuple[complex, ...]
    h: tuple[complex, ...]

    def elementary(self, t: int) -> complex:
        if t < 0:
            return 0j
        return self.e[t] if t <= self.dim else 0j

    def complete(self, t: int) -> complex:
        if t < 0:
            return 0j
        if t >= len(self.h):
            raise ValueError(f"h_{t} not computed (depth {len(self.h) - 1})")
        return self.h[t]


# -- sampling -----------------------------------------------------------------


def haar_spectra(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Eigenvalues of `count` independent Haar unitaries, shape (count, dim).

    Ginibre matrix, QR, then rescaling each Q column by the phase of the
    matching R diagonal entry; without that correction QR output is not
    Haar-distributed.
    """
    if dim < 1 or count < 1:
        raise ValueError("need dim >= 1 and count >= 1")
    g = rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=-2, axis2=-1).copy()
    d /= np.abs(d)
    q = q * d[:, None, :]
    return np.linalg.eigvals(q)


def haar_sample(dim: int, rng: np.random.Generator, depth: int = 12) -> SpectrumStats:
    """One Haar-distributed spectrum reduced to power traces p_1..p_depth."""
    return SpectrumStats.from_eigenvalues(haar_spectra(dim, 1, rng)[0], depth)


# -- the H statistic ----------------------------------------------------------


def h_statistic(j: int, n: int, s: SpectrumStats) -> complex:
    """H_j^{(n)} from H_1^{(n)} = -p_n by the convolution recursion."""
    if j < 1 or n < 1:
        raise ValueError("need j >= 1 and n >= 1")
    if len(s.powers) < n:
        raise ValueError("insufficient power traces")
    table: dict[tuple[int, int], complex] = {(1, r): -s.powers[r - 1] for r in range(1, n + 1)}
    for jj in range(2, j + 1):
        for r in range(1, n + 1):
            total = r * table[(jj - 1, r)]
            for lam in range(1, r):
                total += table[(1, lam)] * table[(jj - 1, r - lam)]
            table[(jj, r)] = total
    return table[(j, n)]


def h_statistic_bound(j: int, r: int, dim: int) -> float:
    """Upper bound for |H_j^{(r)}| on U(dim), from the hook expansion.

    |e_t| <= C(N,t) and |h_t| <= C(t+N-1, N-1) on the unit circle, applied
    to each telescope term of each hook in the expansion.
    """
    total = 0.0
    for nu in range(1, min(r, dim) + 1):
        arm, leg = r - nu + 1, nu - 1
        hook_bound = sum(
            math.comb(dim, leg - i) * math.comb(arm + i + dim - 1, dim - 1)
            for i in range(leg + 1)
        )
        total += (nu**j - (nu - 1) ** j) * hook_bound
    return float(total)


# -- symmetric functions ------------------------------------------------------


def sym_fn_values(s: SpectrumStats, depth: int | None = None) -> SymFnValues:
    """e_0..e_N and h_0..h_depth from power traces by Newton's identities."""
    n_dim = s.dim
    depth = len(s.powers) if depth is None else depth
    if depth > len(s.powers) or n_dim > len(s.powers):
        raise ValueError("insufficient power traces")
    e: list[complex] = [1.0 + 0j]
    for t in range(1, n_dim + 1):
        acc = 0j
        for i in range(1, t + 1):
            acc += (-1) ** (i - 1) * e[t - i] * s.powers[i - 1]
        e.append(acc / t)
    h: list[complex] = [1.0 + 0j]
    for t in range(1, depth + 1):
        acc = 0j
        for i in range(1, t + 1):
            acc += h[t - i] * s.powers[i - 1]
        h.append(acc / t)
    return SymFnValues(n_dim, tuple(e), tuple(h))


def hook_schur(hook: HookPartition, s: SpectrumStats | SymFnValues) -> complex:
    """s_{(arm,1^leg)} by the alternating telescope of the Pieri relation.

    s_{(m,1^k)} = sum over i of (-1)^i e_{k-i} h_{m+i}.  For hooks with more
    rows than the dimension the Schur polynomial in N variables is zero and
    the telescope cancels on its own, so no convention branch is needed.
    """
    vals = s if isinstance(s, SymFnValues) else sym_fn_values(s)
    m, k = hook.arm, hook.leg
    return sum((-1) ** i * vals.elementary(k - i) * vals.complete(m + i) for i in range(k + 1))


def hook_schur_bialternant(hook: HookPartition, eigenvalues: np.ndarray) -> complex:
    """Determinant-ratio evaluation; test oracle only.

    Degenerate spectra (an eigenvalue gap below 1e-6) make the Vandermonde
    denominator numerically meaningless and are rejected.
    """
    w = np.asarray(eigenvalues, dtype=complex)
    n_dim = len(w)
    gaps = np.abs(w[:, None] - w[None, :])[np.triu_indices(n_dim, 1)]
    if gaps.size and gaps.min() < 1e-6:
        raise ValueError("spectrum too degenerate for the bialternant formula")
    if hook.rows > n_dim:
        return 0j
    lam = [hook.arm] + [1] * hook.leg + [0] * (n_dim - hook.rows)
    num = np.linalg.det(w[:, None] ** [lam[t] + n_dim - 1 - t for t in range(n_dim)])
    den = np.linalg.det(w[:, None] ** [n_dim - 1 - t for t in range(n_dim)])
    return complex(num / den)


def h_to_schur_coeffs(j: int, r: int, dim: int) -> list[tuple[HookPartition, int]]:
    """Integer hook expansion of H_j^{(r)} on U(dim).

    H_j^{(r)} = sum over nu of (-1)^nu (nu^j - (nu-1)^j) s_{(r-nu+1, 1^{nu-1})},
    truncated at nu = r and nu = dim.
    """
    if j < 1 or r < 1:
        raise ValueError("need j >= 1 and r >= 1")
    return [
        (HookPartition(r - nu + 1, nu - 1), (-1) ** nu * (nu**j - (nu - 1) ** j))
        for nu in range(1, min(r, dim) + 1)
    ]


def h_covariance_exact(j: int, k: int, n: int, m: int, dim: int) -> int:
    """Exact Haar average of H_j^{(n)} conj(H_k^{(m)}) on U(dim).

    Computed twice: the closed-form sum over d <= min(n, dim), and the pairing
    of the two hook expansions under Schur orthonormality.  The two integer
    results must agree; disagreement is a bug, not noise.
    """
    if j < 1 or k < 1 or n < 1 or m < 1:
        raise ValueError("orders and degrees must be >= 1")
    if n != m:
        closed = 0  # expansions share no hook shape across different sizes
    else:
        closed = sum(
            (d**j - (d - 1) ** j) * (d**k - (d - 1) ** k) for d in range(1, min(n, dim) + 1)
        )
    paired = 0
    right = {hook: c for hook, c in h_to_schur_coeffs(k, m, dim)}
    for hook, c in h_to_schur_coeffs(j, n, dim):
        paired += c * right.get(hook, 0)
    assert closed == paired, (closed, paired)
    return closed


def dyson_exact(n: int, dim: int) -> int:
    """The Haar average of |Tr(g^n)|^2 on U(dim)."""
    return min(n, dim)


# -- generating-series spot check ---------------------------------------------


def z_log_deriv_direct(j: int, x: float, s: SpectrumStats) -> complex:
    """(-1)^j Z^(j)/Z at e^{-beta} = x, from the finite elementary-symmetric sums.

    Z(beta) = det(1 - e^{-beta} g) = sum over t of (-1)^t e_t x^t, so the
    j-th beta-derivative just inserts t^j.
    """
    vals = sym_fn_values(s)
    num = sum((-1) ** t * vals.elementary(t) * t**j * x**t for t in range(s.dim + 1))
    den = sum((-1) ** t * vals.elementary(t) * x**t for t in range(s.dim + 1))
    return num / den


def z_log_deriv_series(j: int, x: float, s: SpectrumStats, depth: int) -> complex:
    """Truncated expansion sum over r <= depth of x^r H_j^{(r)}."""
    return sum(x**r * h_statistic(j, r, s) for r in range(1, depth + 1))


def series_tail_bound(j: int, x: float, dim: int, depth: int) -> float:
    """Rigorous bound on the truncation error of z_log_deriv_series.

    Sums x^r h_statistic_bound(j, r, dim) for r > depth until the terms are
    negligible; the terms decay geometrically for x < 1.
    """
    if not 0 < x < 1:
        raise ValueError("need 0 < x < 1")
    total, r = 0.0, depth + 1
    while True:
        term = x**r * h_statistic_bound(j, r, dim)
        total += term
        if term < 1e-18 * max(total, 1.0):
            return total
        r += 1


# -- Monte Carlo --------------------------------------------------------------

_CHUNK = 4096


def mc_integrate(f, dim: int, samples: int, rng: np.random.Generator, depth: int = 12):
    """Monte Carlo Haar average of a class statistic.

    f maps a SpectrumStats to a complex scalar or a 1-d numpy vector (many
    statistics per sample pass is how the test suites stay inside their time
    budgets).  Returns (mean, stderr) with matching shapes; stderr combines
    real and imaginary scatter.
    """
    if samples < 1:
        raise ValueError("need samples >= 1")
    total = None
    total_sq = None
    done = 0
    while done < samples:
        count = min(_CHUNK, samples - done)
        spectra = haar_spectra(dim, count, rng)
        for row in spectra:
            val = np.atleast_1d(np.asarray(f(SpectrumStats.from_eigenvalues(row, depth))))
            if total is None:
                total = np.zeros(val.shape, dtype=complex)
                total_sq = np.zeros(val.shape, dtype=float)
            total += val
            total_sq += np.abs(val) ** 2
        done += count
    mean = total / samples
    if samples > 1:
        var = (total_sq / samples - np.abs(mean) ** 2) * samples / (samples - 1)
        stderr = np.sqrt(np.maximum(var, 0.0) / samples)
    else:
        stderr = np.full(mean.shape, np.inf)
    if mean.shape == (1,):
        return complex(mean[0]), float(stderr[0])
    return mean, stderr


# -- ratio theorem ------------------------------------------------------------


def ratio_theorem_closed(a: complex, b: complex, c: complex, d: complex, dim: int) -> complex:
    """Closed form of the Haar average of det(1-Ag)det(1-B/g)/(det(1-Cg)det(1-D/g))."""
    _ratio_domain(a, b, c, d)
    term1 = (1 - b * c) * (1 - a * d) / ((1 - a * b) * (1 - c * d))
    term2 = (a * b) ** dim * (a - c) * (b - d) / ((a * b - 1) * (1 - c * d))
    return term1 + term2


def _ratio_domain(a: complex, b: complex, c: complex, d: complex) -> None:
    if abs(c) >= 1 or abs(d) >= 1:
        raise ValueError("need |C| < 1 and |D| < 1")
    if abs(1 - a * b) < 1e-12 or abs(1 - c * d) < 1e-12:
        raise ValueError("pole parameters: AB = 1 or CD = 1")


def ratio_theorem_check(
    a: complex,
    b: complex,
    c: complex,
    d: complex,
    dim: int,
    samples: int,
    rng: np.random.Generator,
) -> tuple[complex, complex, bool]:
    """MC estimate of the determinant-ratio average against the closed form.

    Returns (mc_mean, closed_value, within 5 standard errors).
    """
    _ratio_domain(a, b, c, d)
    closed = ratio_theorem_closed(a, b, c, d, dim)

    total = 0j
    total_sq = 0.0
    done = 0
    while done < samples:
        count = min(_CHUNK, samples - done)
        w = haar_spectra(dim, count, rng)
        vals = np.prod((1 - a * w) * (1 - b * w.conj()) / ((1 - c * w) * (1 - d * w.conj())), axis=1)
        total += vals.sum()
        total_sq += float((np.abs(vals) ** 2).sum())
        done += count
    mean = total / samples
    var = (total_sq / samples - abs(mean) ** 2) * samples / max(samples - 1, 1)
    stderr = math.sqrt(max(var, 0.0) / samples)
    return mean, closed, abs(mean - closed) <= 5 * stderr + 1e-12
