"""Exhaustive, exact-rational checks of the classical guessing-probability facts.

Eve's side information is classical: she knows some positions of the sifted
string and is uniformly ignorant of the rest. Every verdict below is an
integer comparison; no floating point enters a pass/fail decision.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from ._backend import kernels
from .errors import BudgetExceeded, DimensionError
from .hashing import (
    BitMatrix,
    BitVector,
    hash_key,
    random_matrix,
    submatrix_rows,
    toeplitz_matrix,
    truncate_key,
)

__all__ = [
    "STRING_BUDGET_BITS",
    "MATRIX_BUDGET_BITS",
    "EveKnowledge",
    "GuessReport",
    "Lemma2Verdict",
    "SuiteResult",
    "gf2_rank",
    "exact_guessing_probability",
    "verify_lemma2_truncation",
    "collision_rate",
    "lemma2_sweep",
    "key_function_sweep",
    "lemma1_sanity_sweep",
    "universality_sweep",
    "commutation_sweep",
    "run_all_suites",
]

STRING_BUDGET_BITS = 24
MATRIX_BUDGET_BITS = 16


@dataclass(frozen=True)
class EveKnowledge:
    """Known ``(position, bit)`` pairs of an ``N``-bit sifted string."""

    N: int
    known: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self) -> None:
        known = frozenset((int(p), int(b)) for p, b in self.known)
        positions = [p for p, _ in known]
        if len(set(positions)) != len(positions):
            raise ValueError("a position is listed with two different values")
        if any(not 0 <= p < self.N for p in positions):
            raise ValueError(f"known position outside [0, {self.N})")
        if any(b not in (0, 1) for _, b in known):
            raise ValueError("known bit values must be 0 or 1")
        object.__setattr__(self, "known", known)

    @classmethod
    def nothing(cls, N: int) -> EveKnowledge:
        return cls(N)

    @classmethod
    def everything(cls, s: BitVector) -> EveKnowledge:
        return cls(s.length, frozenset((j, s[j]) for j in range(s.length)))

    @classmethod
    def random(cls, N: int, t: int, rng: random.Random) -> EveKnowledge:
        positions = rng.sample(range(N), t)
        return cls(N, frozenset((p, rng.getrandbits(1)) for p in positions))

    @property
    def t(self) -> int:
        return len(self.known)

    def masks(self) -> tuple[int, int]:
        """``(mask, values)`` as MSB-first integers over ``N`` bits."""
        mask = values = 0
        for p, b in self.known:
            mask |= 1 << (self.N - 1 - p)
            values |= b << (self.N - 1 - p)
        return mask, values


@dataclass(frozen=True)
class GuessReport:
    p_exact: Fraction
    argmax_key: BitVector
    distribution_support: int
    strings_enumerated: int


@dataclass(frozen=True)
class Lemma2Verdict:
    passed: bool
    p_k: Fraction
    p_kprime: Fraction


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    detail: str = ""
    examples: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.cases > 0 and not self.failures


def gf2_rank(R: BitMatrix) -> int:
    rows = R.row_ints()
    rank = 0
    for bit in reversed(range(R.cols)):
        pivot = next((i for i in range(rank, len(rows)) if (rows[i] >> bit) & 1), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and (rows[i] >> bit) & 1:
                rows[i] ^= rows[rank]
        rank += 1
    return rank


def exact_guessing_probability(R: BitMatrix, eve: EveKnowledge) -> GuessReport:
    """Eve's optimal guessing probability for ``k = R s`` by full enumeration.

    Every one of the ``2**(N - t)`` sifted strings consistent with Eve's
    knowledge is hashed and tallied; the best guess is the most frequent key.
    """
    if R.cols != eve.N:
        raise DimensionError(f"matrix has {R.cols} columns, Eve's model has N = {eve.N}")
    free = eve.N - eve.t
    if free > STRING_BUDGET_BITS:
        raise BudgetExceeded(f"2^{free} consistent strings exceed the 2^{STRING_BUDGET_BITS} budget")
    if R.cols > 64 or R.rows > 64:
        raise BudgetExceeded("enumeration supports at most 64 rows and 64 columns")
    mask, values = eve.masks()
    best, arg, support, total = kernels.guess_tally(R.row_ints(), R.cols, mask, values)
    return GuessReport(
        p_exact=Fraction(best, total),
        argmax_key=BitVector.from_int(arg, R.rows),
        distribution_support=support,
        strings_enumerated=total,
    )


def verify_lemma2_truncation(R: BitMatrix, eve: EveKnowledge, n2: int) -> Lemma2Verdict:
    """Check ``p(k) <= p(k')`` where ``k'`` comes from the first ``n2`` rows."""
    if not 1 <= n2 <= R.rows:
        raise DimensionError(f"n2 = {n2} outside [1, {R.rows}]")
    p_k = exact_guessing_probability(R, eve).p_exact
    p_kp = exact_guessing_probability(submatrix_rows(R, n2), eve).p_exact
    return Lemma2Verdict(p_k <= p_kp, p_k, p_kp)


def collision_rate(n: int, N: int, x: BitVector, y: BitVector) -> Fraction:
    """Fraction of all ``n x N`` matrices with ``R x = R y``, by enumeration."""
    if x.length != N or y.length != N:
        raise DimensionError("x and y must both have N bits")
    if n < 1 or N < 1:
        raise DimensionError("n and N must be positive")
    if n * N > MATRIX_BUDGET_BITS:
        raise BudgetExceeded(f"2^{n * N} matrices exceed the 2^{MATRIX_BUDGET_BITS} budget")
    hits = kernels.count_collisions(n, N, x.to_int(), y.to_int())
    return Fraction(hits, 1 << (n * N))


def lemma2_sweep(seeds: Iterable[int] = range(1000), max_rows: int = 4, max_cols: int = 8) -> SuiteResult:
    """Every shape ``n <= max_rows``, ``n <= N <= max_cols``, every ``t <= N``, every ``n2 <= n``."""
    res = SuiteResult("lemma2_truncation")
    strict = equal = 0
    for seed in seeds:
        rng = random.Random(seed)
        for n in range(1, max_rows + 1):
            for N in range(n, max_cols + 1):
                R = random_matrix(seed, n, N)
                for t in range(N + 1):
                    eve = EveKnowledge.random(N, t, rng)
                    p_k = exact_guessing_probability(R, eve).p_exact
                    for n2 in range(1, n + 1):
                        p_kp = exact_guessing_probability(submatrix_rows(R, n2), eve).p_exact
                        res.cases += 1
                        if not p_k <= p_kp:
                            res.failures.append(f"seed={seed} n={n} N={N} t={t} n2={n2}: {p_k} > {p_kp}")
                        elif p_k < p_kp:
                            strict += 1
                            if strict == 1:
                                res.examples.append(f"seed={seed} {n}x{N} t={t} n2={n2}: p(k)={p_k} < p(k')={p_kp}")
                        else:
                            equal += 1
    res.detail = f"{res.cases} (R, Eve, n2) configurations; {strict} strict, {equal} equal"
    return res


def key_function_sweep(seeds: Iterable[int] = range(200), max_bits: int = 4) -> SuiteResult:
    """Random deterministic maps of a random key distribution never lower the max probability."""
    res = SuiteResult("key_function_generality")
    for seed in seeds:
        rng = random.Random(seed)
        for n in range(1, max_bits + 1):
            weights = [rng.randrange(0, 8) for _ in range(1 << n)]
            if not any(weights):
                weights[0] = 1
            total = sum(weights)
            p_k = Fraction(max(weights), total)
            m = rng.randrange(1, n + 1)
            g = [rng.randrange(1 << m) for _ in range(1 << n)]
            image = Counter()
            for key, w in enumerate(weights):
                image[g[key]] += w
            p_gk = Fraction(max(image.values()), total)
            res.cases += 1
            if not p_k <= p_gk:
                res.failures.append(f"seed={seed} n={n}: {p_k} > {p_gk}")
    res.detail = f"{res.cases} random maps"
    return res


def lemma1_sanity_sweep(seeds: Iterable[int] = range(200), max_rows: int = 6, max_cols: int = 12) -> SuiteResult:
    """Full-rank ``R`` with no side information gives exactly ``2**-n``."""
    res = SuiteResult("lemma1_full_rank_uniform")
    for seed in seeds:
        rng = random.Random(seed)
        n = rng.randint(1, max_rows)
        N = rng.randint(n, max_cols)
        R = random_matrix(seed, n, N)
        if gf2_rank(R) != n:
            continue
        p = exact_guessing_probability(R, EveKnowledge.nothing(N)).p_exact
        res.cases += 1
        if p != Fraction(1, 1 << n):
            res.failures.append(f"seed={seed} n={n} N={N}: p = {p}")
        elif len(res.examples) < 3:
            res.examples.append(f"seed={seed} {n}x{N}: p = {p}")
    res.detail = f"{res.cases} full-rank matrices, p = 2^-n exactly"
    return res


def universality_sweep(max_product: int = MATRIX_BUDGET_BITS, all_pairs_cols: int = 4) -> SuiteResult:
    """Collision rate ``2**-n`` for every nonzero difference, every ``n N <= max_product``.

    ``R x = R y`` depends on ``(x, y)`` only through ``x ^ y``, so each
    nonzero difference ``d`` is checked as the pair ``(d, 0)``; for
    ``N <= all_pairs_cols`` every ordered pair ``x != y`` is enumerated too.
    """
    res = SuiteResult("two_universality")
    for n in range(1, max_product + 1):
        for N in range(1, max_product // n + 1):
            expected = Fraction(1, 1 << n)
            if N == 1:
                res.examples.append(f"n={n}: collision rate {expected}")
            zero = BitVector.zeros(N)
            for d in range(1, 1 << N):
                rate = collision_rate(n, N, BitVector.from_int(d, N), zero)
                res.cases += 1
                if rate != expected:
                    res.failures.append(f"n={n} N={N} d={d:0{N}b}: {rate} != {expected}")
            if N <= all_pairs_cols:
                for a, b in itertools.permutations(range(1 << N), 2):
                    rate = collision_rate(n, N, BitVector.from_int(a, N), BitVector.from_int(b, N))
                    res.cases += 1
                    if rate != expected:
                        res.failures.append(f"n={n} N={N} x={a:0{N}b} y={b:0{N}b}: {rate}")
    res.detail = f"{res.cases} (n, N, x, y) cases"
    return res


def commutation_sweep(cases: int = 10_000, max_cols: int = 512, exhaustive_cols: int = 6, seed: int = 0) -> SuiteResult:
    """``truncate(R s, n2) == submatrix(R, n2) s`` for both matrix kinds.

    Exhaustive over all shapes, seeds 0..3 and all strings for
    ``N <= exhaustive_cols``; randomized up to ``max_cols`` otherwise.
    """
    res = SuiteResult("truncation_commutation")

    def check(R: BitMatrix, s: BitVector, n2: int, tag: str) -> None:
        res.cases += 1
        if truncate_key(hash_key(R, s), n2) != hash_key(submatrix_rows(R, n2), s):
            res.failures.append(tag)

    for N in range(2, exhaustive_cols + 1):
        for n1 in range(1, N + 1):
            for ms in range(4):
                mats = [random_matrix(ms, n1, N)]
                if n1 < N:
                    mats.append(toeplitz_matrix(ms, n1, N))
                for R in mats:
                    for sv in range(1 << N):
                        s = BitVector.from_int(sv, N)
                        for n2 in range(1, n1 + 1):
                            check(R, s, n2, f"{R.kind} seed={ms} {n1}x{N} s={sv} n2={n2}")

    rng = random.Random(seed)
    for i in range(cases):
        N = rng.randint(2, max_cols)
        n1 = rng.randint(1, N - 1)
        n2 = rng.randint(1, n1)
        ms = rng.getrandbits(64)
        R = random_matrix(ms, n1, N) if i % 2 == 0 else toeplitz_matrix(ms, n1, N)
        s = BitVector.from_int(rng.getrandbits(N), N)
        check(R, s, n2, f"{R.kind} seed={ms} {n1}x{N} n2={n2}")
    res.detail = f"{res.cases} cases, exhaustive for N <= {exhaustive_cols}, random up to N = {max_cols}"
    return res


def run_all_suites(quick: bool = False) -> list[SuiteResult]:
    """The suites run by the ``oracle`` command; ``quick`` shrinks every sweep."""
    if quick:
        return [
            lemma2_sweep(range(20)),
            key_function_sweep(range(50)),
            lemma1_sanity_sweep(range(50)),
            universality_sweep(max_product=8),
            commutation_sweep(cases=500, max_cols=128, exhaustive_cols=4),
        ]
    return [
        lemma2_sweep(),
        key_function_sweep(),
        lemma1_sanity_sweep(),
        universality_sweep(),
        commutation_sweep(),
    ]
