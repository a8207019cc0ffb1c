"""Text file formats for keys and hashing matrices.

Key files::

    bits=<length>
    <hex key>        # one per line, MSB first, ceil(length/4) digits

Matrix files::

    <rows> <cols> <kind> <seed>
    <hex row>        # only for *-materialized kinds, one per matrix row

``seed`` is a decimal 64-bit integer or ``-``. ``explicit-random`` and
``modified-toeplitz`` are regenerated from the seed; a matrix the seed
cannot reproduce (a row-truncated Toeplitz matrix, say) is written with
its kind suffixed ``-materialized`` and its rows spelled out.
"""

from __future__ import annotations

import io
import os
import re
from typing import IO, Iterable

from .errors import DimensionError, FormatError
from .hashing import (
    EXPLICIT_RANDOM,
    KINDS,
    MODIFIED_TOEPLITZ,
    BitMatrix,
    BitVector,
    random_matrix,
    toeplitz_matrix,
)

__all__ = [
    "MATERIALIZED_SUFFIX",
    "format_keys",
    "parse_keys",
    "read_keys",
    "write_keys",
    "format_matrix",
    "parse_matrix",
    "read_matrix",
    "write_matrix",
    "regenerate",
]

MATERIALIZED_SUFFIX = "-materialized"
_HEADER_RE = re.compile(r"^bits=(\d+)$")
_HEX_RE = re.compile(r"[0-9a-fA-F]*")


def _check_hex(text: str, line: int) -> None:
    m = _HEX_RE.match(text)
    if m.end() != len(text):
        raise FormatError(f"invalid hex digit {text[m.end()]!r}", line=line, column=m.end() + 1)


def format_keys(keys: Iterable[BitVector]) -> str:
    keys = list(keys)
    if not keys:
        raise ValueError("need at least one key to infer the bit length")
    length = keys[0].length
    if any(k.length != length for k in keys):
        raise DimensionError("all keys in one file must have the same length")
    return f"bits={length}\n" + "".join(k.to_hex() + "\n" for k in keys)


def parse_keys(text: str) -> list[BitVector]:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty key file", line=1)
    m = _HEADER_RE.match(lines[0].strip())
    if m is None:
        raise FormatError("first line must be 'bits=<length>'", line=1, column=1)
    length = int(m.group(1))
    digits = -(-length // 4)
    keys = []
    for lineno, raw in enumerate(lines[1:], start=2):
        s = raw.strip()
        if not s:
            continue
        _check_hex(s, lineno)
        if len(s) != digits:
            raise FormatError(f"expected {digits} hex digits for {length} bits, got {len(s)}", line=lineno)
        try:
            keys.append(BitVector.from_hex(s, length))
        except ValueError as exc:
            raise FormatError(str(exc), line=lineno, column=len(s)) from None
    if not keys:
        raise FormatError("key file holds a header but no keys", line=len(lines))
    return keys


def regenerate(kind: str, seed: int, rows: int, cols: int) -> BitMatrix:
    if kind == EXPLICIT_RANDOM:
        return random_matrix(seed, rows, cols)
    if kind == MODIFIED_TOEPLITZ:
        return toeplitz_matrix(seed, rows, cols)
    raise ValueError(f"unknown matrix kind {kind!r}")


def _regenerable(R: BitMatrix) -> bool:
    if R.seed is None:
        return False
    try:
        return regenerate(R.kind, R.seed, R.rows, R.cols) == R
    except DimensionError:
        return False


def format_matrix(R: BitMatrix, materialize: bool = False) -> str:
    seed = "-" if R.seed is None else str(R.seed)
    if not materialize and _regenerable(R):
        return f"{R.rows} {R.cols} {R.kind} {seed}\n"
    body = "".join(R.row(i).to_hex() + "\n" for i in range(R.rows))
    return f"{R.rows} {R.cols} {R.kind}{MATERIALIZED_SUFFIX} {seed}\n" + body


def parse_matrix(text: str) -> BitMatrix:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty matrix file", line=1)
    fields = lines[0].split()
    if len(fields) != 4:
        raise FormatError("header must be 'rows cols kind seed'", line=1)
    try:
        rows, cols = int(fields[0]), int(fields[1])
    except ValueError:
        raise FormatError("rows and cols must be integers", line=1) from None
    kind, seed_text = fields[2], fields[3]
    materialized = kind.endswith(MATERIALIZED_SUFFIX)
    base_kind = kind[: -len(MATERIALIZED_SUFFIX)] if materialized else kind
    if base_kind not in KINDS:
        raise FormatError(f"unknown matrix kind {kind!r}", line=1)
    if seed_text == "-":
        seed = None
    else:
        try:
            seed = int(seed_text)
        except ValueError:
            raise FormatError(f"seed {seed_text!r} is not an integer", line=1) from None
    if rows < 1 or cols < 1:
        raise FormatError("rows and cols must be positive", line=1)

    if not materialized:
        if seed is None:
            raise FormatError("a seeded kind needs a seed", line=1)
        body = [ln for ln in lines[1:] if ln.strip()]
        if body:
            raise FormatError("rows given for a seed-regenerated kind", line=2)
        try:
            return regenerate(base_kind, seed, rows, cols)
        except (DimensionError, ValueError) as exc:
            raise FormatError(str(exc), line=1) from None

    body = [(i, ln.strip()) for i, ln in enumerate(lines[1:], start=2) if ln.strip()]
    if len(body) != rows:
        raise FormatError(f"expected {rows} matrix rows, found {len(body)}", line=len(lines))
    digits = -(-cols // 4)
    bits = []
    for lineno, s in body:
        _check_hex(s, lineno)
        if len(s) != digits:
            raise FormatError(f"expected {digits} hex digits for {cols} columns, got {len(s)}", line=lineno)
        try:
            bits.append(BitVector.from_hex(s, cols).to_bits())
        except ValueError as exc:
            raise FormatError(str(exc), line=lineno) from None
    return BitMatrix.from_bits(bits, kind=base_kind, seed=seed)


def _read(source: str | os.PathLike | IO[str]) -> str:
    if isinstance(source, io.TextIOBase) or hasattr(source, "read"):
        return source.read()
    with open(source, encoding="ascii") as fh:
        return fh.read()


def _write(dest: str | os.PathLike | IO[str], text: str) -> None:
    if hasattr(dest, "write"):
        dest.write(text)
        return
    with open(dest, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def read_keys(source) -> list[BitVector]:
    return parse_keys(_read(source))


def write_keys(dest, keys: Iterable[BitVector]) -> None:
    _write(dest, format_keys(keys))


def read_matrix(source) -> BitMatrix:
    return parse_matrix(_read(source))


def write_matrix(dest, R: BitMatrix, materialize: bool = False) -> None:
    _write(dest, format_matrix(R, materialize=materialize))
