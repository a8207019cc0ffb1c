"""Regenerate tests/golden.json with an independent 60-digit mpmath evaluation.

Shares no code with the package: the entropy, fluctuation term, key-length
right-hand side and both root finds are rewritten here in mpmath.

    python scripts/make_golden.py > tests/golden.json
"""

import json
import sys

from mpmath import floor, log, mp, mpf, sqrt

mp.dps = 60

Q = mpf("0.0214")
F = mpf("1.1")
LOG2_EPS = -9 * log(10, 2)


def h(x):
    if x == 0 or x == 1:
        return mpf(0)
    return -x * log(x, 2) - (1 - x) * log(1 - x, 2)


def setup(n_total):
    N = mpf(78) * n_total / 100
    Nz = mpf(22) * n_total / 100

    def mu(l2e):
        return sqrt((N + Nz) / (N * Nz) * (Nz + 1) / Nz * (1 - l2e) * log(2))

    def rhs(l2e):
        m = mu(l2e)
        if Q + m >= mpf("0.5"):
            return None
        return N * (1 - h(Q + m)) - F * N * h(Q) - (1 - 3 * l2e)

    return N, Nz, mu, rhs


def bisect(pred, lo, hi, iters=400):
    # pred(lo) False, pred(hi) True
    for _ in range(iters):
        mid = (lo + hi) / 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def row(n_total):
    N, Nz, mu, rhs = setup(n_total)
    n1_real = rhs(LOG2_EPS)

    def above(n2):
        r = rhs(-n2)
        return r is None or r < n2

    fp_lo, _ = bisect(above, mpf(1), N)
    n2 = int(floor(fp_lo))

    def eps_of_length(n):
        _, hi = bisect(lambda l2e: rhs(l2e) is not None and rhs(l2e) >= n, -20 * N, mpf(0), 200)
        return hi

    l2e_n2 = eps_of_length(n2)
    eps_decade = int(floor((n2 - 1) * log(2, 10)))
    return {
        "n_total": n_total,
        "mu_at_eps": float(mu(LOG2_EPS)),
        "n1_real": float(n1_real),
        "n1": int(floor(n1_real)),
        "n2_star": float(fp_lo),
        "n2": n2,
        "log2_eps_kprime": float(l2e_n2),
        "thm2_neg_log10": float((n2 - 1) * log(2, 10)),
        "eps_prime_decade": eps_decade,
        "n_prime_at_decade": int(floor(rhs(-eps_decade * log(10, 2)))),
    }


def main():
    out = {
        "generator": "scripts/make_golden.py (mpmath, 60 digits)",
        "q_tol": "0.0214",
        "f": "1.1",
        "epsilon": "1e-9",
        "binary_entropy_0.0214": float(h(mpf("0.0214"))),
        "rows": [row(10**k) for k in (4, 5, 6)],
    }
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
