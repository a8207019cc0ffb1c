"""Binary entropy and base-2 log-domain probability arithmetic.

Every probability in this package is carried as ``log2(p)``: the bounds of
interest reach 10^-3277, far below the smallest positive double.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

__all__ = [
    "Log2Prob",
    "binary_entropy",
    "log2_add",
    "log2_to_decimal_string",
    "parse_decimal_string",
    "LOG10_2",
    "LOG2_10",
]

LOG10_2 = math.log10(2.0)
LOG2_10 = math.log2(10.0)

_DECIMAL_RE = re.compile(r"^\s*([0-9]+(?:\.[0-9]*)?)\s*(?:×|x|\*)\s*10\^\(?(-?[0-9]+)\)?\s*$")


@dataclass(frozen=True, order=True)
class Log2Prob:
    """A probability stored as its base-2 logarithm.

    ``exponent`` is ``log2(p)``; ``-inf`` encodes ``p = 0``. Ordering follows
    the ordering of the underlying probabilities.
    """

    exponent: float

    def __post_init__(self) -> None:
        e = float(self.exponent)
        if math.isnan(e):
            raise ValueError("log2 probability must not be NaN")
        if e > 0.0:
            raise ValueError(f"log2 probability {e} > 0 is not a probability")
        object.__setattr__(self, "exponent", e)

    @classmethod
    def zero(cls) -> Log2Prob:
        return cls(-math.inf)

    @classmethod
    def from_prob(cls, p: float) -> Log2Prob:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability {p} outside [0, 1]")
        return cls(math.log2(p) if p > 0.0 else -math.inf)

    @classmethod
    def from_log10(cls, log10_p: float) -> Log2Prob:
        return cls(log10_p * LOG2_10)

    @property
    def log10(self) -> float:
        return self.exponent * LOG10_2

    @property
    def is_zero(self) -> bool:
        return self.exponent == -math.inf

    def prob(self) -> float:
        """Linear-domain value; underflows to 0.0 below ~2^-1074."""
        return 2.0**self.exponent

    def __str__(self) -> str:
        return log2_to_decimal_string(self)


def binary_entropy(x: float) -> float:
    """Binary Shannon entropy ``h(x) = -x log2 x - (1-x) log2(1-x)`` in bits."""
    if not math.isfinite(x) or x < 0.0 or x > 1.0:
        raise ValueError(f"binary_entropy: argument {x!r} outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def _exp(a: Log2Prob | float) -> float:
    return a.exponent if isinstance(a, Log2Prob) else float(a)


def log2_add(a: Log2Prob | float, b: Log2Prob | float) -> Log2Prob:
    """Return ``log2(2**a + 2**b)`` without leaving the log domain.

    Plain floats are accepted as exponents. The result is clamped at 0 when
    rounding would push a sum of probabilities equal to 1 above it.
    """
    x, y = _exp(a), _exp(b)
    hi, lo = (x, y) if x >= y else (y, x)
    if lo == -math.inf:
        return Log2Prob(hi)
    return Log2Prob(min(0.0, hi + math.log2(1.0 + 2.0 ** (lo - hi))))


def log2_to_decimal_string(a: Log2Prob | float, digits: int = 3) -> str:
    """Render ``2**a`` as ``"c×10^e"`` with ``1 <= c < 10``.

    ``digits`` is the number of significant digits of ``c``. The exponent is
    floored, never rounded; if rounding ``c`` reaches 10 the mantissa is
    renormalised.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    x = _exp(a)
    if x == -math.inf:
        return "0"
    t = x * LOG10_2
    e = math.floor(t)
    c = 10.0 ** (t - e)
    c = round(c, digits - 1)
    if c >= 10.0:
        c /= 10.0
        e += 1
    return f"{c:.{digits - 1}f}×10^{e}"


def parse_decimal_string(text: str) -> Log2Prob:
    """Inverse of :func:`log2_to_decimal_string` (up to the rendered digits)."""
    if text.strip() == "0":
        return Log2Prob.zero()
    m = _DECIMAL_RE.match(text)
    if m is None:
        raise ValueError(f"cannot parse {text!r} as c×10^e")
    c, e = float(m.group(1)), int(m.group(2))
    if c <= 0.0:
        raise ValueError(f"mantissa must be positive in {text!r}")
    return Log2Prob((math.log10(c) + e) * LOG2_10)
