"""Finite-key length formula, its inverse in epsilon, and guessing-probability bounds.

The key-length condition for an ``eps``-secure ``n``-bit key is::

    n <= N [1 - h(Q_tol + mu)] - f N h(Q_tol) - log2(2 / eps^3)
    mu = sqrt((N + N_z) / (N N_z) * (N_z + 1) / N_z * ln(2 / eps))

All epsilons are handled as :class:`~guessbound.numerics.Log2Prob`, and every
root find is a plain bisection over a monotone residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import Inapplicable, InfeasibleParameters, NoSolution
from .numerics import LOG2_10, Log2Prob, binary_entropy, log2_add

__all__ = [
    "ProtocolParams",
    "BoundIntermediates",
    "BoundReport",
    "FixedPoint",
    "SOLVER_TOL",
    "mu_term",
    "intermediates",
    "key_length_real",
    "key_length",
    "epsilon_of_length",
    "fixed_point_real",
    "fixed_point_n2",
    "lemma1_bound",
    "thm2_bound",
    "kpa_bound",
    "analyze",
]

SOLVER_TOL = 1e-6
_LN2 = math.log(2.0)

DEFAULT_Q_TOL = 0.0214
DEFAULT_F = 1.1
DEFAULT_KEY_FRACTION = 0.78
DEFAULT_PE_FRACTION = 0.22
DEFAULT_LOG2_EPS = -9.0 * LOG2_10


@dataclass(frozen=True)
class ProtocolParams:
    """Public finite-key inputs.

    ``eps_target`` is the security level demanded of the full-length key;
    the correctness parameter is taken equal to it.
    """

    n_total: int
    n_key: int
    n_pe: int
    q_tol: float = DEFAULT_Q_TOL
    f: float = DEFAULT_F
    eps_target: Log2Prob = field(default_factory=lambda: Log2Prob(DEFAULT_LOG2_EPS))

    def __post_init__(self) -> None:
        if self.n_key < 1 or self.n_pe < 1:
            raise ValueError("n_key and n_pe must both be >= 1")
        if self.n_key + self.n_pe > self.n_total:
            raise ValueError(
                f"n_key + n_pe = {self.n_key + self.n_pe} exceeds n_total = {self.n_total}"
            )
        if not 0.0 <= self.q_tol < 0.5:
            raise ValueError(f"q_tol = {self.q_tol} outside [0, 0.5)")
        if not self.f >= 1.0:
            raise ValueError(f"f = {self.f} must be >= 1")
        if not isinstance(self.eps_target, Log2Prob):
            object.__setattr__(self, "eps_target", Log2Prob(self.eps_target))
        if not self.eps_target.exponent < 0.0:
            raise ValueError("eps_target must be < 1")

    @classmethod
    def standard(
        cls,
        n_total: int,
        *,
        n_key: int | None = None,
        n_pe: int | None = None,
        q_tol: float = DEFAULT_Q_TOL,
        f: float = DEFAULT_F,
        eps_target: Log2Prob | None = None,
    ) -> ProtocolParams:
        """The table setup: 78 % / 22 % split, Q_tol 2.14 %, f 1.1, eps 1e-9."""
        n_total = int(n_total)
        return cls(
            n_total=n_total,
            n_key=round(DEFAULT_KEY_FRACTION * n_total) if n_key is None else int(n_key),
            n_pe=round(DEFAULT_PE_FRACTION * n_total) if n_pe is None else int(n_pe),
            q_tol=q_tol,
            f=f,
            eps_target=Log2Prob(DEFAULT_LOG2_EPS) if eps_target is None else eps_target,
        )


@dataclass(frozen=True)
class BoundIntermediates:
    mu: float
    hQ: float
    ln2e: float
    rhs: float


@dataclass(frozen=True)
class BoundReport:
    n_total: int
    n1: int
    eps_k: Log2Prob
    lemma1_bound: Log2Prob
    n2: int | None
    eps_kprime: Log2Prob | None
    thm2_bound: Log2Prob | None
    rate_r: float
    rate_rprime: float | None
    n2_real: float | None = None
    intermediates: BoundIntermediates | None = None
    kpa: dict[int, Log2Prob] = field(default_factory=dict)


class FixedPoint(NamedTuple):
    n2: int
    eps_kprime: Log2Prob


def _log2_eps(eps: Log2Prob | float) -> float:
    return eps.exponent if isinstance(eps, Log2Prob) else float(eps)


def mu_term(params: ProtocolParams, eps: Log2Prob | float) -> float:
    """Statistical fluctuation ``mu`` at security level ``eps``.

    ``ln(2/eps)`` is formed as ``(1 - log2 eps) ln 2`` so arbitrarily small
    epsilons never leave the log domain.
    """
    l2e = _log2_eps(eps)
    ln2e = (1.0 - l2e) * _LN2
    if ln2e < 0.0:
        raise ValueError("mu_term: eps >= 2 gives a negative argument under the root")
    N, Nz = params.n_key, params.n_pe
    return math.sqrt((N + Nz) / (N * Nz) * (Nz + 1) / Nz * ln2e)


def intermediates(params: ProtocolParams, eps: Log2Prob | float) -> BoundIntermediates:
    """Evaluate every term of the key-length formula at ``eps``.

    Raises :class:`InfeasibleParameters` when ``Q_tol + mu >= 1/2``.
    """
    l2e = _log2_eps(eps)
    mu = mu_term(params, l2e)
    q = params.q_tol + mu
    if q >= 0.5:
        raise InfeasibleParameters(
            f"Q_tol + mu = {q:.6g} >= 0.5 (mu = {mu:.6g}); entropy term outside its monotone range"
        )
    N = params.n_key
    hQ = binary_entropy(params.q_tol)
    rhs = N * (1.0 - binary_entropy(q)) - params.f * N * hQ - (1.0 - 3.0 * l2e)
    return BoundIntermediates(mu=mu, hQ=hQ, ln2e=(1.0 - l2e) * _LN2, rhs=rhs)


def key_length_real(params: ProtocolParams, eps: Log2Prob | float) -> float:
    return intermediates(params, eps).rhs


def key_length(params: ProtocolParams, eps: Log2Prob | float) -> int:
    """Largest integer key length allowed at ``eps``; 0 if the formula is negative."""
    rhs = key_length_real(params, eps)
    return max(0, math.floor(rhs))


def _rhs_or_neg_inf(params: ProtocolParams, l2e: float) -> float:
    try:
        return key_length_real(params, l2e)
    except InfeasibleParameters:
        return -math.inf


def epsilon_of_length(params: ProtocolParams, n2: int) -> Log2Prob:
    """Security level at which the formula yields exactly ``n2`` bits.

    Bisects ``log2 eps`` over ``[-20 N, 0]`` down to :data:`SOLVER_TOL` and
    returns the upper end of the final bracket, the side on which the
    key-length inequality still holds.
    """
    if n2 < 1:
        raise ValueError("n2 must be >= 1")
    lo, hi = -20.0 * params.n_key, 0.0
    if _rhs_or_neg_inf(params, hi) < n2:
        raise NoSolution(f"no eps <= 1 admits a {n2}-bit key")
    if _rhs_or_neg_inf(params, lo) >= n2:
        raise NoSolution(f"root for n2 = {n2} lies below log2 eps = {lo}")
    while hi - lo > SOLVER_TOL:
        mid = 0.5 * (lo + hi)
        if _rhs_or_neg_inf(params, mid) >= n2:
            hi = mid
        else:
            lo = mid
    return Log2Prob(hi)


def _fixed_point_residual(params: ProtocolParams, n2: float) -> float:
    # 4 n2 + 1 + f N h(Q) - N [1 - h(Q + mu)], with mu at ln(2/eps) = (n2 + 1) ln 2
    return n2 - _rhs_or_neg_inf(params, -n2)


def fixed_point_real(params: ProtocolParams) -> float:
    """Real root ``n2*`` of ``2**-n2 = eps(n2)``; returns the lower bracket end."""
    lo, hi = 1.0, float(params.n_key)
    if key_length(params, -1.0) <= 0 or _fixed_point_residual(params, lo) > 0.0:
        raise InfeasibleParameters("no positive fixed point: key length is too short at these parameters")
    if _fixed_point_residual(params, hi) <= 0.0:
        raise NoSolution("fixed-point residual does not change sign on [1, N]")
    while hi - lo > SOLVER_TOL:
        mid = 0.5 * (lo + hi)
        if _fixed_point_residual(params, mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return lo


def fixed_point_n2(params: ProtocolParams) -> FixedPoint:
    """Floored fixed-point length and the security level of a key that long."""
    n2 = math.floor(fixed_point_real(params))
    return FixedPoint(n2, epsilon_of_length(params, n2))


def lemma1_bound(n1: int, eps_k: Log2Prob | float) -> Log2Prob:
    """``log2(2**-n1 + eps_k)``."""
    if n1 < 1:
        raise ValueError("n1 must be >= 1")
    return log2_add(float(-n1), eps_k)


def thm2_bound(params: ProtocolParams, n1: int) -> tuple[Log2Prob, int]:
    """Tightened bound ``2**-(n2 - 1)`` for an ``n1``-bit key.

    Raises :class:`Inapplicable` when ``n1 <= n2``; callers then fall back to
    :func:`lemma1_bound`.
    """
    n2, _ = fixed_point_n2(params)
    if n1 <= n2:
        raise Inapplicable(f"n1 = {n1} does not exceed the fixed point n2 = {n2}")
    return Log2Prob(min(0.0, float(-(n2 - 1)))), n2


def kpa_bound(n2: int, t: int) -> Log2Prob:
    """Bound when Eve knows ``t`` bits of the ``n2``-bit key, capped at 1."""
    if t < 0 or t > n2:
        raise ValueError(f"known bits t = {t} outside [0, n2 = {n2}]")
    return Log2Prob(min(0.0, float(-(n2 - t - 1))))


def analyze(params: ProtocolParams, known_bits: list[int] | tuple[int, ...] = ()) -> BoundReport:
    """Full pipeline: n1 at ``eps_target``, the baseline bound, then the fixed point.

    Truncated-key fields are ``None`` when the fixed point is not shorter than n1.
    """
    eps_k = params.eps_target
    inter = intermediates(params, eps_k)
    n1 = key_length(params, eps_k)
    if n1 < 1:
        raise InfeasibleParameters(f"key length at eps_target is {inter.rhs:.6g} bits; no key")
    lemma1 = lemma1_bound(n1, eps_k)

    n2_real = fixed_point_real(params)
    n2 = math.floor(n2_real)
    kpa: dict[int, Log2Prob] = {}
    if n2 < n1:
        eps_kprime = epsilon_of_length(params, n2)
        thm2, _ = thm2_bound(params, n1)
        for t in known_bits:
            kpa[int(t)] = kpa_bound(n2, int(t))
        n2_out, rate_rprime = n2, n2 / params.n_total
    else:
        eps_kprime = thm2 = None
        n2_out = rate_rprime = None
    return BoundReport(
        n_total=params.n_total,
        n1=n1,
        eps_k=eps_k,
        lemma1_bound=lemma1,
        n2=n2_out,
        eps_kprime=eps_kprime,
        thm2_bound=thm2,
        rate_r=n1 / params.n_total,
        rate_rprime=rate_rprime,
        n2_real=n2_real,
        intermediates=inter,
        kpa=kpa,
    )
