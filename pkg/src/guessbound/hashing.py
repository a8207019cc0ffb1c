"""Privacy-amplification hashing over GF(2).

Bit strings are packed into ``uint64`` words, MSB first: bit ``i`` of a
vector is bit ``63 - i % 64`` of word ``i // 64``, so the big-endian byte
image of the words is the MSB-first serialization. Pad bits are zero.

Matrices come from a seeded SplitMix64 stream read row-major, MSB first,
one 64-bit output per 64 matrix bits. Because the stream is continuous
across rows, the first ``n2`` rows of ``random_matrix(seed, n1, N)`` are
exactly ``random_matrix(seed, n2, N)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ._backend import kernels
from .errors import DimensionError

__all__ = [
    "EXPLICIT_RANDOM",
    "MODIFIED_TOEPLITZ",
    "SplitMix64",
    "splitmix64_stream",
    "stream_bits",
    "HashSeed",
    "BitVector",
    "BitMatrix",
    "random_matrix",
    "toeplitz_matrix",
    "toeplitz_from_diagonal",
    "hash_key",
    "truncate_key",
    "submatrix_rows",
]

EXPLICIT_RANDOM = "explicit-random"
MODIFIED_TOEPLITZ = "modified-toeplitz"
KINDS = (EXPLICIT_RANDOM, MODIFIED_TOEPLITZ)

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Scalar SplitMix64 generator."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def __iter__(self):
        return self

    def __next__(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * MIX1) & MASK64
        z = ((z ^ (z >> 27)) * MIX2) & MASK64
        return z ^ (z >> 31)


def splitmix64_stream(seed: int, count: int) -> np.ndarray:
    """First ``count`` SplitMix64 outputs for ``seed`` as a uint64 array."""
    # uint64 arithmetic wraps modulo 2**64, which is what the generator needs
    k = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & MASK64) + k * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


def stream_bits(seed: int, nbits: int) -> np.ndarray:
    """First ``nbits`` bits of the SplitMix64 stream, MSB of each output first."""
    words = splitmix64_stream(seed, -(-nbits // 64))
    return np.unpackbits(words.astype(">u8").view(np.uint8))[:nbits]


def _pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a trailing axis of 0/1 values into MSB-first uint64 words."""
    bits = np.asarray(bits, dtype=np.uint8)
    length = bits.shape[-1]
    nwords = max(1, -(-length // 64))
    padded = np.zeros(bits.shape[:-1] + (nwords * 64,), dtype=np.uint8)
    padded[..., :length] = bits
    packed = np.packbits(padded, axis=-1)
    return np.ascontiguousarray(packed.view(">u8").astype(np.uint64))


def _unpack_words(words: np.ndarray, length: int) -> np.ndarray:
    be = np.ascontiguousarray(words.astype(">u8"))
    return np.unpackbits(be.view(np.uint8), axis=-1)[..., :length]


@dataclass(frozen=True)
class HashSeed:
    seed: int

    def __post_init__(self) -> None:
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def diagonal(self, length: int) -> BitVector:
        """Seed-derived diagonal string for a modified Toeplitz matrix."""
        return BitVector.from_bits(stream_bits(self.seed, length))


def _seed_value(seed: HashSeed | int) -> int:
    return seed.seed if isinstance(seed, HashSeed) else HashSeed(int(seed)).seed


class BitVector:
    """Immutable packed bit string."""

    __slots__ = ("length", "words")

    def __init__(self, length: int, words: np.ndarray):
        words = np.array(words, dtype=np.uint64).reshape(-1)
        if length < 0 or words.shape[0] != max(1, -(-length // 64)):
            raise DimensionError(f"{words.shape[0]} words cannot hold exactly {length} bits")
        rem = length % 64
        if rem and int(words[-1]) & ((1 << (64 - rem)) - 1):
            raise ValueError("pad bits beyond the vector length must be zero")
        if length == 0 and int(words[0]):
            raise ValueError("pad bits beyond the vector length must be zero")
        words.setflags(write=False)
        self.length = length
        self.words = words

    @classmethod
    def from_bits(cls, bits: Iterable[int] | np.ndarray) -> BitVector:
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
        if arr.ndim != 1:
            raise DimensionError("from_bits expects a flat bit sequence")
        if arr.size and arr.max() > 1:
            raise ValueError("bits must be 0 or 1")
        return cls(arr.shape[0], _pack_bits(arr))

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length, np.zeros(max(1, -(-length // 64)), dtype=np.uint64))

    @classmethod
    def from_int(cls, value: int, length: int) -> BitVector:
        """Bit 0 is the most significant of ``length`` bits of ``value``."""
        if value < 0 or value >> length:
            raise ValueError(f"{value} does not fit in {length} bits")
        nwords = max(1, -(-length // 64))
        data = (value << (64 * nwords - length)).to_bytes(8 * nwords, "big")
        return cls(length, np.frombuffer(data, dtype=">u8").astype(np.uint64))

    @classmethod
    def from_bytes(cls, data: bytes, length: int) -> BitVector:
        """Inverse of :meth:`to_bytes`."""
        nbytes = -(-length // 8)
        if len(data) != nbytes:
            raise DimensionError(f"{len(data)} bytes given for {length} bits")
        bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
        if bits[length:].any():
            raise ValueError("pad bits beyond the vector length must be zero")
        return cls.from_bits(bits[:length])

    @classmethod
    def from_hex(cls, text: str, length: int) -> BitVector:
        """Parse ``ceil(length/4)`` hex digits, first bit = top bit of the first digit."""
        digits = -(-length // 4)
        if len(text) != digits:
            raise DimensionError(f"expected {digits} hex digits for {length} bits, got {len(text)}")
        value = int(text, 16) if text else 0
        pad = digits * 4 - length
        if value & ((1 << pad) - 1):
            raise ValueError("hex string sets bits beyond the declared length")
        return cls.from_int(value >> pad, length)

    def to_bits(self) -> np.ndarray:
        return _unpack_words(self.words, self.length)

    def to_int(self) -> int:
        return int.from_bytes(self.words.astype(">u8").tobytes(), "big") >> (
            64 * self.words.shape[0] - self.length
        )

    def to_bytes(self) -> bytes:
        return self.words.astype(">u8").tobytes()[: -(-self.length // 8)]

    def to_hex(self) -> str:
        digits = -(-self.length // 4)
        if digits == 0:
            return ""
        return format(self.to_int() << (digits * 4 - self.length), f"0{digits}x")

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (int(self.words[i // 64]) >> (63 - i % 64)) & 1

    def __xor__(self, other: BitVector) -> BitVector:
        if other.length != self.length:
            raise DimensionError("xor of vectors of different lengths")
        return BitVector(self.length, self.words ^ other.words)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and bool(np.array_equal(self.words, other.words))

    def __hash__(self) -> int:
        return hash((self.length, self.words.tobytes()))

    def __repr__(self) -> str:
        if self.length <= 64:
            return f"BitVector({''.join(map(str, self.to_bits()))})"
        return f"BitVector(length={self.length}, hex={self.to_hex()[:16]}...)"


class BitMatrix:
    """Immutable ``rows x cols`` GF(2) matrix with packed rows.

    ``seed`` and ``diagonal`` are provenance only; the packed ``words`` are
    authoritative.
    """

    __slots__ = ("rows", "cols", "kind", "seed", "diagonal", "words", "_row_ints")

    def __init__(
        self,
        words: np.ndarray,
        cols: int,
        kind: str = EXPLICIT_RANDOM,
        seed: int | None = None,
        diagonal: BitVector | None = None,
    ):
        if kind not in KINDS:
            raise ValueError(f"unknown matrix kind {kind!r}")
        words = np.array(words, dtype=np.uint64)
        if words.ndim != 2 or words.shape[1] != max(1, -(-cols // 64)):
            raise DimensionError("word array does not match the column count")
        if words.shape[0] < 1:
            raise DimensionError("a matrix needs at least one row")
        words.setflags(write=False)
        self.rows = words.shape[0]
        self.cols = cols
        self.kind = kind
        self.seed = seed
        self.diagonal = diagonal
        self.words = words
        self._row_ints: list[int] | None = None

    @classmethod
    def from_bits(cls, bits, kind: str = EXPLICIT_RANDOM, seed: int | None = None, diagonal=None) -> BitMatrix:
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim != 2:
            raise DimensionError("from_bits expects a 2-D bit array")
        if arr.size and arr.max() > 1:
            raise ValueError("bits must be 0 or 1")
        return cls(_pack_bits(arr), arr.shape[1], kind=kind, seed=seed, diagonal=diagonal)

    @classmethod
    def from_bytes(cls, data: bytes, rows: int, cols: int, kind: str = EXPLICIT_RANDOM, seed=None) -> BitMatrix:
        """Inverse of :meth:`to_bytes`: a row-major MSB-first bit stream."""
        flat = BitVector.from_bytes(data, rows * cols).to_bits()
        return cls.from_bits(flat.reshape(rows, cols), kind=kind, seed=seed)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_bits(self) -> np.ndarray:
        return _unpack_words(self.words, self.cols)

    def to_bytes(self) -> bytes:
        return BitVector.from_bits(self.to_bits().reshape(-1)).to_bytes()

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.words[i])

    def row_ints(self) -> list[int]:
        """Rows as MSB-first integers (column 0 is the top bit)."""
        if self._row_ints is None:
            shift = 64 * self.words.shape[1] - self.cols
            self._row_ints = [
                int.from_bytes(w.astype(">u8").tobytes(), "big") >> shift for w in self.words
            ]
        return list(self._row_ints)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.words, other.words))

    def __hash__(self) -> int:
        return hash((self.shape, self.words.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols}, kind={self.kind}, seed={self.seed})"


def _check_dims(n: int, N: int, strict: bool) -> None:
    if n < 1 or (n >= N if strict else n > N):
        rel = "<" if strict else "<="
        raise DimensionError(f"need 1 <= n {rel} N, got n={n}, N={N}")


def random_matrix(seed: HashSeed | int, n: int, N: int) -> BitMatrix:
    """Seeded ``n x N`` matrix with every bit drawn from SplitMix64."""
    _check_dims(n, N, strict=False)
    s = _seed_value(seed)
    bits = stream_bits(s, n * N).reshape(n, N)
    return BitMatrix.from_bits(bits, kind=EXPLICIT_RANDOM, seed=s)


def toeplitz_from_diagonal(d: BitVector | Iterable[int], n: int, N: int, seed: int | None = None) -> BitMatrix:
    """``[I_n | T]`` with ``T[i][j] = d[j - i + n - 1]`` over a length ``N-1`` string."""
    _check_dims(n, N, strict=True)
    dv = d if isinstance(d, BitVector) else BitVector.from_bits(d)
    if dv.length != N - 1:
        raise DimensionError(f"diagonal string must have N-1 = {N - 1} bits, got {dv.length}")
    dbits = dv.to_bits()
    i = np.arange(n)[:, np.newaxis]
    j = np.arange(N - n)[np.newaxis, :]
    bits = np.zeros((n, N), dtype=np.uint8)
    bits[np.arange(n), np.arange(n)] = 1
    bits[:, n:] = dbits[j - i + n - 1]
    return BitMatrix.from_bits(bits, kind=MODIFIED_TOEPLITZ, seed=seed, diagonal=dv)


def toeplitz_matrix(seed: HashSeed | int, n: int, N: int) -> BitMatrix:
    """Modified Toeplitz matrix whose diagonal string comes from the seed stream."""
    _check_dims(n, N, strict=True)
    s = _seed_value(seed)
    return toeplitz_from_diagonal(HashSeed(s).diagonal(N - 1), n, N, seed=s)


def hash_key(R: BitMatrix, s: BitVector) -> BitVector:
    """GF(2) product ``R s``: word-wise AND, then popcount parity per row."""
    if s.length != R.cols:
        raise DimensionError(f"key has {s.length} bits, matrix has {R.cols} columns")
    return BitVector.from_bits(kernels.gf2_matvec(R.words, s.words))


def truncate_key(k: BitVector, n2: int) -> BitVector:
    """Keep the first ``n2`` bits."""
    if not 1 <= n2 <= k.length:
        raise IndexError(f"n2 = {n2} outside [1, {k.length}]")
    return BitVector.from_bits(k.to_bits()[:n2])


def submatrix_rows(R: BitMatrix, n2: int) -> BitMatrix:
    """The first ``n2`` rows of ``R``, same kind and provenance."""
    if not 1 <= n2 <= R.rows:
        raise IndexError(f"n2 = {n2} outside [1, {R.rows}]")
    return BitMatrix(R.words[:n2], R.cols, kind=R.kind, seed=R.seed, diagonal=R.diagonal)
