"""Regenerate tests/golden_splitmix.json from a standalone SplitMix64.

    python scripts/make_splitmix_golden.py > tests/golden_splitmix.json
"""

import json
import sys

M = 2**64


def splitmix64(seed, count):
    x = seed % M
    out = []
    for _ in range(count):
        x = (x + 0x9E3779B97F4A7C15) % M
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) % M
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) % M
        out.append(z ^ (z >> 31))
    return out


def matrix_rows_hex(seed, n, N):
    """Row-major MSB-first bits of the stream, one hex string per row."""
    words = splitmix64(seed, -(-n * N // 64))
    bits = "".join(format(w, "064b") for w in words)
    rows = []
    for i in range(n):
        row = bits[i * N : (i + 1) * N]
        pad = -len(row) % 4
        rows.append(format(int(row + "0" * pad, 2), f"0{(len(row) + pad) // 4}x"))
    return rows


def main():
    doc = {
        "outputs": {str(s): [format(v, "016x") for v in splitmix64(s, 4)] for s in (0, 1, 42, 2**64 - 1)},
        "matrices": [
            {"seed": s, "n": n, "N": N, "rows": matrix_rows_hex(s, n, N)}
            for s, n, N in [(0, 1, 64), (0, 3, 10), (1, 2, 100), (7, 5, 13)]
        ],
    }
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
