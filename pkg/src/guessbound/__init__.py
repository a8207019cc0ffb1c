"""Tightened guessing-probability bounds for finite-key QKD keys.

A key distilled by a two-universal GF(2) matrix can be cut to its first
``n2`` bits, and that prefix is itself a key hashed by a submatrix. Eve
cannot guess the long key more easily than the short one, so choosing
``n2`` with ``2**-n2 = eps(n2)`` bounds the guessing probability of the
full key by ``2**-(n2 - 1)``.

Modules: :mod:`.numerics` (entropy, log-domain probabilities),
:mod:`.bounds` (key-length formula and solvers), :mod:`.hashing`
(matrices and hashing), :mod:`.oracle` (exhaustive checks), :mod:`.keyio`
(file formats), :mod:`.tables` and :mod:`.cli`.
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .bounds import (
    BoundReport,
    ProtocolParams,
    analyze,
    epsilon_of_length,
    fixed_point_n2,
    key_length,
    kpa_bound,
    lemma1_bound,
    mu_term,
    thm2_bound,
)
from .errors import (
    BudgetExceeded,
    DimensionError,
    FormatError,
    GuessBoundError,
    Inapplicable,
    InfeasibleParameters,
    NoSolution,
)
from .hashing import (
    BitMatrix,
    BitVector,
    HashSeed,
    hash_key,
    random_matrix,
    submatrix_rows,
    toeplitz_matrix,
    truncate_key,
)
from .numerics import Log2Prob, binary_entropy, log2_add, log2_to_decimal_string
from .oracle import (
    EveKnowledge,
    GuessReport,
    collision_rate,
    exact_guessing_probability,
    verify_lemma2_truncation,
)
