"""Pure-Python / numpy implementations of the hot kernels.

Signatures mirror ``_kernels.pyx`` exactly; the backend module picks one at
import time. Single-word conventions: bit ``j`` of an ``N``-bit string is
bit ``N-1-j`` of the integer (MSB first).
"""

import numpy as np


def gf2_matvec(rows, s):
    """Parity of ``rows[i] & s`` for each packed row; returns uint8 bits."""
    rows = np.asarray(rows, dtype=np.uint64)
    s = np.asarray(s, dtype=np.uint64)
    if rows.shape[0] == 0:
        return np.zeros(0, dtype=np.uint8)
    ones = np.bitwise_count(rows & s[np.newaxis, :]).sum(axis=1, dtype=np.int64)
    return (ones & 1).astype(np.uint8)


def guess_tally(rows, n_cols, known_mask, known_values):
    """Enumerate every ``n_cols``-bit string consistent with the known bits.

    ``rows`` are single-word matrix rows. For each consistent ``s`` the key
    ``k = R s`` is formed row by row and tallied. Returns
    ``(max_count, argmax_key, support, total)`` where ``argmax_key`` is the
    smallest key reaching ``max_count``.
    """
    rows = [int(r) for r in rows]
    n = len(rows)
    free = [n_cols - 1 - j for j in range(n_cols) if not (known_mask >> (n_cols - 1 - j)) & 1]
    base = known_values & known_mask
    counts = {}
    n_free = len(free)
    for x in range(1 << n_free):
        s = base
        for j in range(n_free):
            if (x >> j) & 1:
                s |= 1 << free[j]
        k = 0
        for r in rows:
            k = (k << 1) | ((r & s).bit_count() & 1)
        counts[k] = counts.get(k, 0) + 1
    best = max(counts.values())
    arg = min(k for k, c in counts.items() if c == best)
    return best, arg, len(counts), 1 << n_free


def count_collisions(n_rows, n_cols, x, y):
    """Number of ``n_rows x n_cols`` matrices ``R`` (all of them) with ``R x = R y``."""
    mask = (1 << n_cols) - 1
    total = 1 << (n_rows * n_cols)
    m = np.arange(total, dtype=np.uint64)
    agree = np.ones(total, dtype=bool)
    for i in range(n_rows):
        r = (m >> np.uint64(i * n_cols)) & np.uint64(mask)
        px = np.bitwise_count(r & np.uint64(x)) & 1
        py = np.bitwise_count(r & np.uint64(y)) & 1
        agree &= px == py
    return int(agree.sum())
