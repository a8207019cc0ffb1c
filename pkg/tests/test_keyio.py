import io

import pytest

from guessbound.errors import DimensionError, FormatError
from guessbound.hashing import BitVector, random_matrix, submatrix_rows, toeplitz_matrix
from guessbound.keyio import (
    format_keys,
    format_matrix,
    parse_keys,
    parse_matrix,
    read_keys,
    read_matrix,
    write_keys,
    write_matrix,
)


def test_key_round_trip_odd_length(tmp_path):
    keys = [BitVector.from_int(v, 10) for v in (0, 1, 0x3FF, 0x2A5)]
    text = format_keys(keys)
    assert text.splitlines()[:3] == ["bits=10", "000", "004"]
    path = tmp_path / "k.txt"
    write_keys(path, keys)
    assert read_keys(path) == keys


def test_keys_tolerate_blank_lines_and_upper_case():
    assert parse_keys("bits=8\n\nAB\n\n") == [BitVector.from_int(0xAB, 8)]


@pytest.mark.parametrize(
    "text,line,column",
    [
        ("", 1, None),
        ("bits=x\n00\n", 1, 1),
        ("bits=8\n0g\n", 2, 2),
        ("bits=8\nabc\n", 2, None),
        ("bits=6\nff\n", 2, 2),
        ("bits=8\n", 1, None),
    ],
)
def test_key_format_errors(text, line, column):
    with pytest.raises(FormatError) as info:
        parse_keys(text)
    assert info.value.line == line
    if column is not None:
        assert info.value.column == column
    assert f"line {line}" in str(info.value)


def test_format_keys_errors():
    with pytest.raises(ValueError):
        format_keys([])
    with pytest.raises(DimensionError):
        format_keys([BitVector.zeros(3), BitVector.zeros(4)])


@pytest.mark.parametrize("make", [lambda: random_matrix(7, 5, 13), lambda: toeplitz_matrix(7, 5, 13)])
def test_seeded_matrix_is_one_line(make):
    R = make()
    text = format_matrix(R)
    assert text == f"5 13 {R.kind} 7\n"
    assert parse_matrix(text) == R


def test_truncated_toeplitz_is_materialized(tmp_path):
    R = submatrix_rows(toeplitz_matrix(3, 6, 20), 2)
    text = format_matrix(R)
    assert text.startswith("2 20 modified-toeplitz-materialized 3\n")
    path = tmp_path / "m.txt"
    write_matrix(path, R)
    assert read_matrix(path) == R


def test_forced_materialization_round_trip():
    R = random_matrix(1, 3, 9)
    text = format_matrix(R, materialize=True)
    assert len(text.splitlines()) == 4
    assert parse_matrix(text) == R
    assert read_matrix(io.StringIO(text)) == R


@pytest.mark.parametrize(
    "text,line",
    [
        ("", 1),
        ("2 4 explicit-random\n", 1),
        ("a 4 explicit-random 0\n", 1),
        ("2 4 circulant 0\n", 1),
        ("2 4 explicit-random x\n", 1),
        ("2 4 explicit-random -\n", 1),
        ("2 4 explicit-random 0\nf\n", 2),
        ("5 4 explicit-random 0\n", 1),
        ("2 4 explicit-random-materialized -\nf\n", 2),
        ("2 4 explicit-random-materialized -\nf\nz\n", 3),
        ("2 4 explicit-random-materialized -\nf\nff\n", 3),
    ],
)
def test_matrix_format_errors(text, line):
    with pytest.raises(FormatError) as info:
        parse_matrix(text)
    assert info.value.line == line
