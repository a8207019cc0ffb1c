"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import random
import timeit

import numpy as np

from guessbound import _backend
from guessbound.hashing import random_matrix


def cases():
    rng = np.random.default_rng(0)
    rows = rng.integers(0, 2**64, size=(2048, 64), dtype=np.uint64)
    s = rng.integers(0, 2**64, size=64, dtype=np.uint64)
    yield "gf2_matvec 2048x4096", lambda k: k.gf2_matvec(rows, s)

    R = random_matrix(1, 8, 20)
    yield "guess_tally 8x20, t=4", lambda k: k.guess_tally(R.row_ints(), 20, 0xF0000, 0x50000)

    R2 = random_matrix(2, 4, 8)
    yield "guess_tally 4x8, t=0", lambda k: k.guess_tally(R2.row_ints(), 8, 0, 0)

    x, y = random.Random(3).getrandbits(4), 0
    yield "count_collisions 4x4", lambda k: k.count_collisions(4, 4, x, y)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = {"python": _backend.python_kernels}
    if _backend.compiled_kernels is not None:
        backends["cython"] = _backend.compiled_kernels
    print(f"{'kernel':<26}" + "".join(f"{b:>14}" for b in backends) + ("   speedup" if len(backends) > 1 else ""))
    for name, fn in cases():
        times = {}
        for b, mod in backends.items():
            timer = timeit.Timer(lambda: fn(mod))
            number, _ = timer.autorange()
            times[b] = min(timer.repeat(args.repeat, number)) / number
        line = f"{name:<26}" + "".join(f"{times[b] * 1e6:>11.1f} us" for b in backends)
        if "cython" in times:
            line += f"   {times['python'] / times['cython']:>6.1f}x"
        print(line)


if __name__ == "__main__":
    main()
