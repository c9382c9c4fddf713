"""Command line frontend: identity suites, experiments, sweeps, CSV/JSON output.

Exit codes: 0 when the requested run succeeds and every asserted check
passes, 1 when a mathematical check fails, 2 for usage errors (unknown
flags, malformed values, budget overruns).  Results go to stdout unless
--out names a file.  A --config file of key=value lines supplies defaults;
explicit flags always win.  Every row or report carries the seed and the
parameters that reproduce it, and with the default flags the bytes written
for a given configuration are identical across runs.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import os
import random
import sys
from math import comb

import numpy as np

from . import bulk
from .arith_fn import lambda_j_mobius, lambda_j_recursive, mean_increment
from .bulk import BudgetError
from .characters import Character, build_unit_group, enumerate_characters
from .experiments import (
    DEFAULT_MAX_ENUM,
    frobenius_ensemble_average,
    q_sweep,
    step_identity_check,
    write_reports_csv,
    write_reports_json,
)
from .fq_poly import FieldParams, Poly, enumerate_monics, factor, poly_gcd
from .lfunc import IntegrityError, frobenius_spectrum, l_polynomial, weil_rh_check
from .rmt import dyson_exact, h_covariance_exact, haar_spectra, ratio_theorem_check
from .tolerances import DEFAULT, Tolerances

__all__ = ["main"]


class UsageError(ValueError):
    pass


_REQUIRED = object()


def _q_list(text: str) -> list[int]:
    try:
        qs = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"bad prime list {text!r}") from exc
    if not qs:
        raise UsageError("empty prime list")
    return qs


def _bool_flag(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"bad boolean {text!r}")


def _format_name(text: str) -> str:
    if text not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, not {text!r}")
    return text


# Per-command merge tables: dest -> (converter for config strings, default).
# argparse declares every flag with default None; a None after parsing means
# "not given on the command line", which is when the config file may fill in.
_COMMON = {
    "seed": (int, 0),
    "out": (str, None),
}
_BUDGET = {"max_enum": (int, DEFAULT_MAX_ENUM)}
_TABULAR = {"format": (_format_name, "csv")}
_TOL = {
    "tol_root": (float, DEFAULT.root),
    "tol_orthogonality": (float, DEFAULT.orthogonality),
    "tol_reconstruction": (float, DEFAULT.reconstruction),
}
_SPECS: dict[str, dict] = {
    "factor": {**_COMMON},
    "lambda": {**_COMMON, "j": (int, _REQUIRED)},
    "lfun": {**_COMMON, **_TOL, "q": (_q_list, _REQUIRED), "m": (int, _REQUIRED), "char": (int, None)},
    "frobenius": {
        **_COMMON,
        **_TABULAR,
        "q": (_q_list, _REQUIRED),
        "big_m": (int, _REQUIRED),
        "j": (int, 1),
        "k": (int, 1),
        "n": (int, 1),
    },
    "identities": {
        **_COMMON,
        **_BUDGET,
        "q": (_q_list, _REQUIRED),
        "max_deg": (int, 6),
        "max_j": (int, 4),
        "pairs": (int, 300),
    },
    "covar": {
        **_COMMON,
        **_BUDGET,
        **_TABULAR,
        "experiment": (int, _REQUIRED),
        "q": (_q_list, _REQUIRED),
        "n": (int, _REQUIRED),
        "h": (int, -1),
        "j": (int, 1),
        "k": (int, 1),
        "timing": (_bool_flag, False),
    },
    "ratio": {
        **_COMMON,
        "a": (complex, _REQUIRED),
        "b": (complex, _REQUIRED),
        "c": (complex, _REQUIRED),
        "d": (complex, _REQUIRED),
        "dim": (int, _REQUIRED),
        "samples": (int, 100_000),
    },
    "rmt-mc": {
        **_COMMON,
        "dim": (int, 4),
        "n": (int, 4),
        "samples": (int, 20_000),
    },
    "sweep": {
        **_COMMON,
        **_BUDGET,
        **_TABULAR,
        "experiment": (int, _REQUIRED),
        "q": (_q_list, _REQUIRED),
        "n": (int, _REQUIRED),
        "h": (int, -1),
        "j": (int, 1),
        "k": (int, 1),
        "threads": (int, 0),
        "timing": (_bool_flag, False),
    },
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fqcovar",
        description="Exact covariance statistics of almost-primes in F_q[T].",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="key=value file of defaults; flags win")
        p.add_argument("--seed", type=int, help="RNG seed, recorded in output (default 0)")
        p.add_argument("--out", help="output file (default stdout)")
        return p

    p = command("factor", "factor polynomials given as c0,...,cn@q text")
    p.add_argument("poly", nargs="+", help="polynomials in c0,...,cn@q form")

    p = command("lambda", "evaluate the order-j prime power weight")
    p.add_argument("--j", type=int, help="weight order (required)")
    p.add_argument("poly", nargs="+", help="polynomials in c0,...,cn@q form")

    p = command("lfun", "L-series coefficients, spectra, and root-modulus audit")
    p.add_argument("--q", type=_q_list, help="comma separated primes")
    p.add_argument("--m", type=int, help="modulus degree")
    p.add_argument("--char", type=int, help="print one character's data instead of the audit")
    p.add_argument("--tol-root", type=float, help="root modulus tolerance")
    p.add_argument("--tol-orthogonality", type=float, help="orthogonality tolerance")
    p.add_argument("--tol-reconstruction", type=float, help="round trip tolerance")

    p = command("frobenius", "primitive-even spectral averages against Haar values")
    p.add_argument("--q", type=_q_list, help="comma separated primes")
    p.add_argument("--M", dest="big_m", type=int, help="family parameter, modulus degree M+1")
    p.add_argument("--j", type=int, help="left statistic order (default 1)")
    p.add_argument("--k", type=int, help="right statistic order (default 1)")
    p.add_argument("--n", type=int, help="statistic degree (default 1)")
    p.add_argument("--format", type=_format_name, help="csv or json (default csv)")

    p = command("identities", "exhaustive exact-identity suites for the weights")
    p.add_argument("--q", type=_q_list, help="comma separated primes")
    p.add_argument("--max-deg", type=int, help="largest degree to enumerate (default 6)")
    p.add_argument("--max-j", type=int, help="largest weight order (default 4)")
    p.add_argument("--pairs", type=int, help="sampled coprime pairs (default 300)")
    p.add_argument("--max-enum", type=int, help="polynomial visit budget")

    p = command("covar", "one covariance experiment point per prime")
    p.add_argument("--experiment", type=int, help="1, 2, or 3")
    p.add_argument("--q", type=_q_list, help="comma separated primes")
    p.add_argument("--n", type=int, help="degree of the monics")
    p.add_argument("--h", type=int, help="interval offset exponent; -1 for no interval")
    p.add_argument("--j", type=int, help="left weight order (default 1)")
    p.add_argument("--k", type=int, help="right weight order (default 1)")
    p.add_argument("--max-enum", type=int, help="polynomial visit budget")
    p.add_argument("--format", type=_format_name, help="csv or json (default csv)")
    p.add_argument("--timing", action="store_true", default=None, help="fill the millis column")

    p = command("ratio", "closed-form unitary average ratio against Monte Carlo")
    p.add_argument("--A", dest="a", type=complex, help="numerator parameter")
    p.add_argument("--B", dest="b", type=complex, help="conjugate numerator parameter")
    p.add_argument("--C", dest="c", type=complex, help="denominator parameter, |C| < 1")
    p.add_argument("--D", dest="d", type=complex, help="conjugate denominator parameter, |D| < 1")
    p.add_argument("--N", dest="dim", type=int, help="matrix dimension")
    p.add_argument("--samples", type=int, help="Monte Carlo samples (default 100000)")

    p = command("rmt-mc", "Monte Carlo audit of exact unitary-group averages")
    p.add_argument("--dim", type=int, help="matrix dimension (default 4)")
    p.add_argument("--n", type=int, help="largest statistic degree (default 4)")
    p.add_argument("--samples", type=int, help="Monte Carlo samples (default 20000)")

    p = command("sweep", "covariance convergence sweep over a prime grid")
    p.add_argument("--experiment", type=int, help="1, 2, or 3")
    p.add_argument("--q", type=_q_list, help="comma separated primes")
    p.add_argument("--n", type=int, help="degree of the monics")
    p.add_argument("--h", type=int, help="interval offset exponent; -1 for no interval")
    p.add_argument("--j", type=int, help="left weight order (default 1)")
    p.add_argument("--k", type=int, help="right weight order (default 1)")
    p.add_argument("--max-enum", type=int, help="polynomial visit budget")
    p.add_argument("--format", type=_format_name, help="csv or json (default csv)")
    p.add_argument("--threads", type=int, help="worker pool size (default: all cores)")
    p.add_argument("--timing", action="store_true", default=None, help="fill the millis column")

    return parser


def _load_config(path: str) -> dict[str, str]:
    cfg: dict[str, str] = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, sep, value = line.partition("=")
                if not sep:
                    raise UsageError(f"{path}:{lineno}: expected key=value")
                cfg[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    return cfg


def _resolve(args: argparse.Namespace, cfg: dict[str, str]) -> None:
    """Fill unset flags from the config file, then from the defaults table."""
    spec = _SPECS[args.command]
    for dest, (conv, default) in spec.items():
        if getattr(args, dest, None) is not None:
            cfg.pop(dest, None)  # flag wins; drop so leftovers mean typos
            continue
        raw = cfg.pop(dest, None)
        if raw is not None:
            value = conv(raw) if isinstance(raw, str) else raw
        elif default is _REQUIRED:
            raise UsageError(f"missing --{dest.replace('_', '-')}")
        else:
            value = default
        setattr(args, dest, value)
    if cfg:
        raise UsageError(f"unknown config keys: {', '.join(sorted(cfg))}")


def _open_out(path: str | None):
    if path is None:
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w")


def _parse_polys(texts: list[str]) -> list[Poly]:
    out = []
    for text in texts:
        try:
            out.append(Poly.from_text(text))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    return out


def _character_by_id(group, char_id: int) -> Character:
    if not 0 <= char_id < group.size:
        raise UsageError(f"char id {char_id} outside 0..{group.size - 1}")
    exps = []
    for order in reversed(group.orders):
        exps.append(char_id % order)
        char_id //= order
    return Character(group, tuple(reversed(exps)))


def _complex_text(z: complex) -> str:
    if abs(z.imag) < 1e-12:
        return repr(float(z.real))
    return repr(complex(z))


def _cmd_factor(args, out) -> int:
    for f in _parse_polys(args.poly):
        if f.is_zero:
            raise UsageError("cannot factor the zero polynomial")
        fac = factor(f, seed=args.seed)
        parts = [f"{p.to_text()}^{e}" for p, e in fac.factors]
        if fac.unit != 1 or not parts:
            parts.insert(0, str(fac.unit))
        out.write(f"{f.to_text()} = {' * '.join(parts)}\n")
    return 0


def _cmd_lambda(args, out) -> int:
    if args.j < 0:
        raise UsageError("need --j >= 0")
    for f in _parse_polys(args.poly):
        if f.is_zero or not f.is_monic:
            raise UsageError(f"{f.to_text()}: weight is defined on monic polynomials")
        out.write(f"{f.to_text()} {lambda_j_recursive(args.j, f)}\n")
    return 0


def _cmd_lfun(args, out) -> int:
    tol = Tolerances(
        root=args.tol_root,
        orthogonality=args.tol_orthogonality,
        reconstruction=args.tol_reconstruction,
    )
    for q in args.q:
        group = build_unit_group(FieldParams(q), args.m)
        if args.char is None:
            checked = weil_rh_check(group, tol)
            out.write(f"q={q} m={args.m} nontrivial={checked} root_tol={tol.root} ok\n")
            continue
        chi = _character_by_id(group, args.char)
        if chi.is_trivial:
            raise UsageError("char id 0 is the trivial character; no L-series data")
        lpoly = l_polynomial(group, chi)
        coeffs = ",".join(_complex_text(c) for c in lpoly.coeffs)
        out.write(
            f"q={q} m={args.m} char={args.char} even={chi.is_even} "
            f"primitive={chi.is_primitive} coeffs={coeffs}\n"
        )
        if chi.is_primitive:
            spec = frobenius_spectrum(group, chi, tol)
            angles = ",".join("%.15f" % t for t in spec.angles)
            out.write(f"  unit_zero_order={spec.lambda_chi} angles={angles}\n")
    return 0


_FROBENIUS_HEADER = ["q", "M", "j", "k", "n", "ensemble_re", "ensemble_im", "haar", "deviation", "seed"]


def _cmd_frobenius(args, out) -> int:
    rows = []
    for q in args.q:
        avg, haar = frobenius_ensemble_average(q, args.big_m, args.j, args.k, args.n)
        rows.append(
            {
                "q": q,
                "M": args.big_m,
                "j": args.j,
                "k": args.k,
                "n": args.n,
                "ensemble_re": avg.real,
                "ensemble_im": avg.imag,
                "haar": haar,
                "deviation": abs(avg - haar),
                "seed": args.seed,
            }
        )
    if args.format == "json":
        json.dump(rows, out, indent=2)
        out.write("\n")
    else:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(_FROBENIUS_HEADER)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else str(v) for v in row.values()])
    return 0


def _cmd_identities(args, out) -> int:
    failures: list[str] = []
    for q in args.q:
        field = FieldParams(q)
        route_checks = 0
        for n in range(1, args.max_deg + 1):
            if q**n > args.max_enum:
                raise BudgetError(f"{q}^{n} monics exceeds the {args.max_enum} budget")
            for f in enumerate_monics(field, n):
                for j in range(args.max_j + 1):
                    via_recursion = lambda_j_recursive(j, f)
                    if j >= 1 and via_recursion != lambda_j_mobius(j, f):
                        failures.append(f"q={q} route mismatch at {f.to_text()} j={j}")
                    if not 0 <= via_recursion <= n**j:
                        failures.append(f"q={q} bound violated at {f.to_text()} j={j}")
                    route_checks += 1
        out.write(f"q={q} recursion_vs_divisor_sum_and_bounds ok checks={route_checks}\n")

        for n in range(1, args.max_deg + 1):
            for j in range(1, args.max_j + 1):
                total = int(bulk.lambda_values(field, j, n).sum())
                if total != q**n * mean_increment(j, n):
                    failures.append(f"q={q} full sum off at n={n} j={j}")
        out.write(f"q={q} full_degree_sums ok checks={args.max_deg * args.max_j}\n")

        rng = random.Random(f"identities|{args.seed}|{q}")
        done = 0
        while done < args.pairs:
            f = Poly(field, [rng.randrange(q) for _ in range(rng.randrange(1, 4))] + [1])
            g = Poly(field, [rng.randrange(q) for _ in range(rng.randrange(1, 4))] + [1])
            if poly_gcd(f, g).degree != 0:
                continue
            done += 1
            for j in range(args.max_j + 1):
                expect = sum(
                    comb(j, l) * lambda_j_recursive(l, f) * lambda_j_recursive(j - l, g)
                    for l in range(j + 1)
                )
                if lambda_j_recursive(j, f * g) != expect:
                    failures.append(
                        f"q={q} coprime convolution off at {f.to_text()}, {g.to_text()} j={j}"
                    )
        out.write(f"q={q} coprime_convolution ok pairs={args.pairs} seed={args.seed}\n")

        residual = step_identity_check(q, 4, 0, 1, 1, args.max_enum)
        if residual > 1e-6 * q**5:
            failures.append(f"q={q} congruence bridge residual {residual}")
        out.write(f"q={q} congruence_bridge ok residual={residual:.3e}\n")

    for line in failures:
        print(f"FAIL {line}", file=sys.stderr)
    return 1 if failures else 0


def _cmd_covar(args, out) -> int:
    _check_experiment(args)
    reports = q_sweep(
        args.experiment, args.q, args.n, args.h, args.j, args.k,
        seed=args.seed, max_enum=args.max_enum, timing=bool(args.timing),
    )
    _write_reports(reports, args.format, out)
    errored = [r for r in reports if r.error]
    for r in errored:
        print(f"q={r.q}: {r.error}", file=sys.stderr)
    return 2 if errored and len(errored) == len(reports) else 0


def _cmd_sweep(args, out) -> int:
    _check_experiment(args)
    threads = args.threads if args.threads > 0 else os.cpu_count() or 1
    reports = q_sweep(
        args.experiment, args.q, args.n, args.h, args.j, args.k,
        seed=args.seed, max_enum=args.max_enum, threads=threads, timing=bool(args.timing),
    )
    _write_reports(reports, args.format, out)
    for r in reports:
        if r.error:
            print(f"q={r.q}: {r.error}", file=sys.stderr)
    if args.experiment == 1:
        # convergence is a theorem for the plain product: deviations must not
        # grow along ascending q; the interval experiment is report-only
        good = sorted((r for r in reports if r.empirical is not None), key=lambda r: r.q)
        devs = [r.deviation for r in good]
        if any(late > early + 1e-12 for early, late in zip(devs, devs[1:])):
            print(f"FAIL deviations not non-increasing in q: {devs}", file=sys.stderr)
            return 1
    return 0


def _check_experiment(args) -> None:
    if args.experiment not in (1, 2, 3):
        raise UsageError("--experiment must be 1, 2, or 3")
    if args.experiment == 3 and args.h < 0:
        raise UsageError("experiment 3 needs --h >= 0")


def _write_reports(reports, fmt: str, out) -> None:
    if fmt == "json":
        write_reports_json(reports, out)
    else:
        write_reports_csv(reports, out)


def _cmd_ratio(args, out) -> int:
    if args.dim < 1 or args.samples < 1:
        raise UsageError("need --N >= 1 and --samples >= 1")
    rng = np.random.default_rng(args.seed)
    mean, closed, ok = ratio_theorem_check(
        args.a, args.b, args.c, args.d, args.dim, args.samples, rng
    )
    out.write(
        f"lhs {_complex_text(mean)} rhs {_complex_text(closed)} "
        f"N={args.dim} samples={args.samples} seed={args.seed} within_5se={ok}\n"
    )
    return 0 if ok else 1


def _cmd_rmt_mc(args, out) -> int:
    if args.dim < 1 or args.n < 1 or args.samples < 2:
        raise UsageError("need --dim >= 1, --n >= 1, --samples >= 2")
    rng = np.random.default_rng(args.seed)
    spectra = haar_spectra(args.dim, args.samples, rng)
    power = {t: spectra**t for t in range(1, args.n + 1)}
    traces = {t: power[t].sum(axis=1) for t in power}

    # vectorized power-trace recursion for the order-j statistics per sample
    h_rows: dict[tuple[int, int], np.ndarray] = {}
    for t in range(1, args.n + 1):
        h_rows[(1, t)] = -traces[t]
    for j in (2, 3):
        for t in range(1, args.n + 1):
            acc = t * h_rows[(j - 1, t)]
            for a in range(1, t):
                acc = acc + h_rows[(1, a)] * h_rows[(j - 1, t - a)]
            h_rows[(j, t)] = acc

    rows = []
    for t in range(1, args.n + 1):
        rows.append((f"trace_pair n={t}", np.abs(traces[t]) ** 2, dyson_exact(t, args.dim)))
    for j, k in ((1, 1), (1, 2), (2, 2), (3, 3)):
        samples = h_rows[(j, args.n)] * np.conj(h_rows[(k, args.n)])
        rows.append(
            (f"h_covariance j={j} k={k} n={args.n}",
             samples,
             h_covariance_exact(j, k, args.n, args.n, args.dim))
        )

    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["statistic", "mc", "exact", "se", "ok", "samples", "seed"])
    bad = 0
    for name, values, exact in rows:
        mean = complex(values.mean())
        se = float(np.std(values) / np.sqrt(values.size))
        ok = abs(mean - exact) <= 5 * se + 1e-12
        bad += not ok
        writer.writerow(
            [name, _complex_text(mean), str(exact), repr(se), str(ok),
             str(args.samples), str(args.seed)]
        )
    return 1 if bad else 0


_DISPATCH = {
    "factor": _cmd_factor,
    "lambda": _cmd_lambda,
    "lfun": _cmd_lfun,
    "frobenius": _cmd_frobenius,
    "identities": _cmd_identities,
    "covar": _cmd_covar,
    "ratio": _cmd_ratio,
    "rmt-mc": _cmd_rmt_mc,
    "sweep": _cmd_sweep,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config) if args.config else {}
        _resolve(args, cfg)
        with _open_out(args.out) as out:
            return _DISPATCH[args.command](args, out)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 2
    except BudgetError as err:
        print(f"budget exceeded: {err}", file=sys.stderr)
        return 2
    except IntegrityError as err:
        print(f"check failed: {err}", file=sys.stderr)
        return 1
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
