"""Command-line interface.

    guessbound bound --n-total 1e6
    guessbound fixed-point --n-total 1e5 --format table
    guessbound tables --format csv
    guessbound hash keys.hex --n-out 8 --seed 0 --out k.hex --truncate-to 4
    guessbound oracle --quick

Exit codes: 0 success, 2 bad flags, 3 infeasible parameters, 4 I/O or
format error, 5 oracle failure.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
import sys
from pathlib import Path

import click

from . import __version__
from .bounds import ProtocolParams, analyze, epsilon_of_length, fixed_point_real
from .errors import (
    BudgetExceeded,
    DimensionError,
    FormatError,
    InfeasibleParameters,
    NoSolution,
)
from .hashing import hash_key, random_matrix, toeplitz_matrix, truncate_key
from .keyio import read_keys, write_keys, write_matrix
from .numerics import LOG2_10, Log2Prob, log2_to_decimal_string
from .oracle import run_all_suites
from .tables import reproduce_tables

__all__ = ["cli", "main", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4
EXIT_ORACLE = 5

_PROB_RE = re.compile(r"^\s*([0-9]*\.?[0-9]+)(?:[eE]([+-]?[0-9]+))?\s*$")


def parse_probability(text: str) -> Log2Prob:
    """Parse ``1e-9`` or ``2e-3277`` straight into log2 form, without underflow."""
    m = _PROB_RE.match(text)
    if m is None:
        raise ValueError(f"cannot parse probability {text!r}")
    mant = float(m.group(1))
    exp10 = int(m.group(2) or 0)
    if mant <= 0.0:
        raise ValueError("probability must be positive")
    return Log2Prob((math.log10(mant) + exp10) * LOG2_10)


def _parse_count(text: str) -> int:
    value = float(text)
    if not value.is_integer() or value < 1:
        raise ValueError(f"{text!r} is not a positive whole number")
    return int(value)


class CountType(click.ParamType):
    name = "count"

    def convert(self, value, param, ctx):
        if isinstance(value, int):
            return value
        try:
            return _parse_count(value)
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


class ProbabilityType(click.ParamType):
    name = "probability"

    def convert(self, value, param, ctx):
        if isinstance(value, Log2Prob):
            return value
        try:
            p = parse_probability(value)
        except ValueError as exc:
            self.fail(str(exc), param, ctx)
        if p.exponent >= 0.0:
            self.fail("epsilon must be below 1", param, ctx)
        return p


COUNT = CountType()
PROBABILITY = ProbabilityType()


def _prob_fields(name: str, p: Log2Prob | None, digits: int) -> dict:
    if p is None:
        return {f"{name}_log2": None, f"{name}_decimal": None}
    return {f"{name}_log2": p.exponent, f"{name}_decimal": log2_to_decimal_string(p, digits)}


def _emit(records: list[dict], fmt: str, out: Path | None, command: str) -> None:
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command}
        if len(records) == 1:
            doc.update(records[0])
        else:
            doc["rows"] = records
        text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        fields = list(records[0])
        for r in records[1:]:
            fields += [k for k in r if k not in fields]
        writer = csv.DictWriter(buf, fieldnames=["schema_version", *fields], lineterminator="\n")
        writer.writeheader()
        for r in records:
            writer.writerow({"schema_version": SCHEMA_VERSION, **r})
        text = buf.getvalue()
    else:
        lines = []
        for r in records:
            width = max(len(k) for k in r)
            lines += [f"{k:<{width}}  {'' if v is None else v}" for k, v in r.items()]
            lines.append("")
        text = "\n".join(lines)
    if out is None:
        click.echo(text, nl=False)
    else:
        try:
            out.write_text(text, encoding="utf-8")
        except OSError as exc:
            _fail(EXIT_IO, f"cannot write {out}: {exc}")


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _params(n_total, n_key, n_pe, q_tol, f, epsilon) -> ProtocolParams:
    try:
        return ProtocolParams.standard(n_total, n_key=n_key, n_pe=n_pe, q_tol=q_tol, f=f, eps_target=epsilon)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None


def protocol_options(fn):
    opts = [
        click.option("--n-total", type=COUNT, default=1_000_000, show_default=True, help="Total sifted length N_tol."),
        click.option("--n-key", type=COUNT, default=None, help="Key-generation length N [0.78 N_tol]."),
        click.option("--n-pe", type=COUNT, default=None, help="Parameter-estimation length N_z [0.22 N_tol]."),
        click.option("--q-tol", type=float, default=0.0214, show_default=True, help="Channel error tolerance."),
        click.option("--f", "f", type=float, default=1.1, show_default=True, help="Error-correction inefficiency."),
        click.option("--epsilon", type=PROBABILITY, default="1e-9", show_default=True, help="Target security level."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def output_options(fn):
    fn = click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write here instead of stdout.")(fn)
    fn = click.option("--digits", type=click.IntRange(1, 17), default=3, show_default=True, help="Significant digits of decimal renderings.")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["json", "csv", "table"]), default="json", show_default=True)(fn)
    return fn


@click.group()
@click.version_option(__version__, prog_name="guessbound")
def cli():
    """Guessing-probability bounds for finite-key QKD keys."""


@cli.command()
@protocol_options
@click.option("--known-bits", type=click.IntRange(min=0), multiple=True, help="Also report the bound when Eve knows this many bits (repeatable).")
@output_options
def bound(n_total, n_key, n_pe, q_tol, f, epsilon, known_bits, fmt, digits, out):
    """Key length, the baseline bound and the tightened fixed-point bound."""
    params = _params(n_total, n_key, n_pe, q_tol, f, epsilon)
    try:
        rep = analyze(params)
    except (InfeasibleParameters, NoSolution) as exc:
        _fail(EXIT_INFEASIBLE, str(exc))
    if rep.n2 is not None:
        bad = [t for t in known_bits if t > rep.n2]
        if bad:
            raise click.BadParameter(f"{bad[0]} exceeds n2 = {rep.n2}", param_hint="--known-bits")
        rep = analyze(params, known_bits=known_bits)
    inter = rep.intermediates
    rec = {
        "n_total": params.n_total,
        "n_key": params.n_key,
        "n_pe": params.n_pe,
        "q_tol": params.q_tol,
        "f": params.f,
        **_prob_fields("eps", params.eps_target, digits),
        "mu": inter.mu,
        "h_q_tol": inter.hQ,
        "n1": rep.n1,
        **_prob_fields("lemma1_bound", rep.lemma1_bound, digits),
        "thm2_applicable": rep.thm2_bound is not None,
        "n2_real": rep.n2_real,
        "n2": rep.n2,
        **_prob_fields("eps_kprime", rep.eps_kprime, digits),
        **_prob_fields("thm2_bound", rep.thm2_bound, digits),
        "rate_r": rep.rate_r,
        "rate_rprime": rep.rate_rprime,
    }
    for t, p in sorted(rep.kpa.items()):
        rec.update(_prob_fields(f"kpa_t{t}", p, digits))
    _emit([rec], fmt, out, "bound")


@cli.command("fixed-point")
@protocol_options
@output_options
def fixed_point(n_total, n_key, n_pe, q_tol, f, epsilon, fmt, digits, out):
    """Solve 2^-n2 = eps(n2) and report n2 and eps(n2)."""
    params = _params(n_total, n_key, n_pe, q_tol, f, epsilon)
    try:
        n2_real = fixed_point_real(params)
        n2 = math.floor(n2_real)
        eps_kprime = epsilon_of_length(params, n2)
    except (InfeasibleParameters, NoSolution) as exc:
        _fail(EXIT_INFEASIBLE, str(exc))
    rec = {
        "n_total": params.n_total,
        "n_key": params.n_key,
        "n_pe": params.n_pe,
        "n2_real": n2_real,
        "n2": n2,
        **_prob_fields("eps_kprime", eps_kprime, digits),
        **_prob_fields("bound", Log2Prob(min(0.0, float(1 - n2))), digits),
    }
    _emit([rec], fmt, out, "fixed-point")


@cli.command()
@click.option("--q-tol", type=float, default=0.0214, show_default=True)
@click.option("--f", "f", type=float, default=1.1, show_default=True)
@click.option("--epsilon", type=PROBABILITY, default="1e-9", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "table"]), default="csv", show_default=True)
@click.option("--digits", type=click.IntRange(1, 17), default=3, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
def tables(q_tol, f, epsilon, fmt, digits, out):
    """Recompute the N_tol = 1e4, 1e5, 1e6 comparison rows."""
    try:
        rows = reproduce_tables(q_tol=q_tol, f=f, eps_target=epsilon)
    except (InfeasibleParameters, NoSolution, ValueError) as exc:
        _fail(EXIT_INFEASIBLE, str(exc))
    records = []
    for r in rows:
        records.append(
            {
                "n_total": r.n_total,
                "n": r.n,
                **_prob_fields("p_g_prior_loose", r.p_g_prior_loose, digits),
                **_prob_fields("p_g_prior_eps", r.p_g_prior_eps, digits),
                **_prob_fields("p_g_thm2", r.p_g_thm2, digits),
                **_prob_fields("eps", r.eps, digits),
                **_prob_fields("eps_prime", r.eps_prime, digits),
                "eps_prime_decade": r.eps_prime_decade,
                "n_prime_fixed_point": r.n_prime_fixed_point,
                "n_prime_at_decade": r.n_prime_at_decade,
                "r": round(r.r, 6),
                "r_prime_fixed_point": round(r.r_prime_fixed_point, 6),
                "r_prime_at_decade": round(r.r_prime_at_decade, 6),
                "note": r.note,
            }
        )
    _emit(records, fmt, out, "tables")


@cli.command("hash")
@click.argument("keys_in", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--n-out", type=COUNT, required=True, help="Output key length n.")
@click.option("--kind", type=click.Choice(["random", "toeplitz"]), default="random", show_default=True)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True)
@click.option("--truncate-to", type=COUNT, default=None, help="Also write the first n2 bits of every key.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True, help="Hashed keys k.")
@click.option("--truncated-out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Truncated keys k' [OUT.truncated].")
@click.option("--matrix-out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Matrix descriptor [OUT.matrix].")
def hash_cmd(keys_in, n_out, kind, seed, truncate_to, out, truncated_out, matrix_out):
    """Hash sifted keys with a seeded matrix: k = R s, optionally k' = first n2 bits of k."""
    if truncate_to is not None and truncate_to > n_out:
        raise click.BadParameter(f"{truncate_to} exceeds --n-out {n_out}", param_hint="--truncate-to")
    try:
        keys = read_keys(keys_in)
    except FormatError as exc:
        _fail(EXIT_IO, f"{keys_in}: {exc}")
    except (OSError, UnicodeDecodeError) as exc:
        _fail(EXIT_IO, f"cannot read {keys_in}: {exc}")
    N = keys[0].length
    try:
        R = random_matrix(seed, n_out, N) if kind == "random" else toeplitz_matrix(seed, n_out, N)
    except DimensionError as exc:
        _fail(EXIT_IO, f"matrix {n_out}x{N}: {exc}")
    ks = [hash_key(R, s) for s in keys]
    try:
        write_keys(out, ks)
        write_matrix(matrix_out or out.with_name(out.name + ".matrix"), R)
        if truncate_to is not None:
            kps = [truncate_key(k, truncate_to) for k in ks]
            write_keys(truncated_out or out.with_name(out.name + ".truncated"), kps)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write output: {exc}")


@cli.command()
@click.option("--quick", is_flag=True, help="Smaller sweeps (seconds instead of about a minute).")
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "table"]), default="table", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
def oracle(quick, fmt, out):
    """Run the exhaustive enumeration suites and print one verdict per invariant."""
    try:
        results = run_all_suites(quick=quick)
    except (BudgetExceeded, DimensionError) as exc:
        _fail(EXIT_ORACLE, str(exc))
    if fmt == "table":
        lines = []
        for r in results:
            lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
            lines += [f"      e.g. {e}" for e in r.examples]
            lines += [f"      failure: {x}" for x in r.failures[:20]]
        text = "\n".join(lines) + "\n"
        if out is None:
            click.echo(text, nl=False)
        else:
            out.write_text(text, encoding="utf-8")
    else:
        records = [
            {
                "suite": r.name,
                "passed": r.passed,
                "cases": r.cases,
                "failures": len(r.failures),
                "detail": r.detail,
                "examples": "; ".join(r.examples),
            }
            for r in results
        ]
        _emit(records, fmt, out, "oracle")
    if not all(r.passed for r in results):
        sys.exit(EXIT_ORACLE)


def main(argv: list[str] | None = None) -> None:
    cli.main(args=argv, prog_name="guessbound")


if __name__ == "__main__":
    main()
