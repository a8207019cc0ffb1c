"""Recompute both comparison tables (key length, bounds, rates) for the default setup.

The ``n'`` column is given two ways. ``n_prime_fixed_point`` is the fixed
point ``n2`` itself. ``n_prime_at_decade`` is the key length obtained when
``eps'`` is set to exactly ``10**-D``, where ``D`` is the integer decade of
the tightened bound ``2**-(n2-1)``; only this reading gives the reference
values 136, 1.12e3 and 1.10e4. At ``N_tol = 1e4`` the two differ visibly:
``2**-136`` is about ``10**-40.9`` while the row's ``eps'`` is ``10**-32``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bounds import ProtocolParams, analyze, key_length
from .numerics import Log2Prob

__all__ = ["TableRow", "PRIOR_LOOSE", "PRIOR_EPS", "table_row", "reproduce_tables", "DEFAULT_N_TOTALS"]

DEFAULT_N_TOTALS = (10_000, 100_000, 1_000_000)
# earlier guessing-probability bounds quoted for comparison; constants
PRIOR_LOOSE = Log2Prob.from_log10(-6.0)
PRIOR_EPS = Log2Prob.from_log10(-9.0)


@dataclass(frozen=True)
class TableRow:
    n_total: int
    n: int
    p_g_prior_loose: Log2Prob
    p_g_prior_eps: Log2Prob
    p_g_thm2: Log2Prob
    eps: Log2Prob
    eps_prime: Log2Prob
    eps_prime_decade: int
    n_prime_fixed_point: int
    n_prime_at_decade: int
    r: float
    r_prime_fixed_point: float
    r_prime_at_decade: float

    @property
    def discrepancy_bits(self) -> int:
        return self.n_prime_at_decade - self.n_prime_fixed_point

    @property
    def note(self) -> str:
        implied = -self.n_prime_at_decade * math.log10(2.0)
        return (
            f"n' at eps'=1e-{self.eps_prime_decade} is {self.n_prime_at_decade} bits "
            f"(2^-n' = 10^{implied:.1f}); fixed point n2 = {self.n_prime_fixed_point}"
        )


def table_row(params: ProtocolParams) -> TableRow:
    rep = analyze(params)
    if rep.thm2_bound is None:
        raise ValueError(f"fixed point not below n1 at N_tol = {params.n_total}")
    decade = math.floor(-rep.thm2_bound.log10)
    n_dec = key_length(params, Log2Prob.from_log10(-decade))
    return TableRow(
        n_total=params.n_total,
        n=rep.n1,
        p_g_prior_loose=PRIOR_LOOSE,
        p_g_prior_eps=PRIOR_EPS,
        p_g_thm2=rep.thm2_bound,
        eps=params.eps_target,
        eps_prime=rep.eps_kprime,
        eps_prime_decade=decade,
        n_prime_fixed_point=rep.n2,
        n_prime_at_decade=n_dec,
        r=rep.rate_r,
        r_prime_fixed_point=rep.rate_rprime,
        r_prime_at_decade=n_dec / params.n_total,
    )


def reproduce_tables(n_totals=DEFAULT_N_TOTALS, **overrides) -> list[TableRow]:
    """One row per total sifted length; ``overrides`` go to :meth:`ProtocolParams.standard`."""
    return [table_row(ProtocolParams.standard(n, **overrides)) for n in n_totals]
