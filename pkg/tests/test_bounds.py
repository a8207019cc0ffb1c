import math

import pytest

from guessbound.bounds import (
    SOLVER_TOL,
    ProtocolParams,
    _fixed_point_residual,
    analyze,
    epsilon_of_length,
    fixed_point_n2,
    fixed_point_real,
    intermediates,
    key_length,
    key_length_real,
    kpa_bound,
    lemma1_bound,
    mu_term,
    thm2_bound,
)
from guessbound.errors import Inapplicable, InfeasibleParameters, NoSolution
from guessbound.numerics import LOG10_2, Log2Prob, log2_add

EPS9 = Log2Prob.from_log10(-9)


def golden_row(golden, n_total):
    return next(r for r in golden["rows"] if r["n_total"] == n_total)


def test_params_defaults_follow_table_setup():
    p = ProtocolParams.standard(1e6)
    assert (p.n_key, p.n_pe, p.q_tol, p.f) == (780_000, 220_000, 0.0214, 1.1)
    assert p.eps_target.log10 == pytest.approx(-9.0)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n_total=10, n_key=8, n_pe=3),
        dict(n_total=10, n_key=0, n_pe=3),
        dict(n_total=10, n_key=5, n_pe=5, q_tol=0.5),
        dict(n_total=10, n_key=5, n_pe=5, f=0.9),
        dict(n_total=10, n_key=5, n_pe=5, eps_target=Log2Prob(0.0)),
    ],
)
def test_params_validation(kwargs):
    with pytest.raises(ValueError):
        ProtocolParams(**kwargs)


def test_mu_matches_high_precision(golden):
    p = ProtocolParams(1_000_000, 780_000, 220_000)
    mu = mu_term(p, EPS9)
    assert mu == pytest.approx(golden_row(golden, 1_000_000)["mu_at_eps"], rel=1e-12)
    assert mu == pytest.approx(0.011172, abs=1e-6)


def test_mu_zero_at_eps_two():
    assert mu_term(ProtocolParams.standard(1e4), 1.0) == 0.0
    with pytest.raises(ValueError):
        mu_term(ProtocolParams.standard(1e4), 1.5)


def test_mu_decreases_with_block_size():
    sizes = [10, 100, 1_000, 10_000, 100_000]
    mus = [mu_term(ProtocolParams(2 * n, n, n), EPS9) for n in sizes]
    assert all(a > b for a, b in zip(mus, mus[1:]))


def test_intermediates_ranges():
    inter = intermediates(ProtocolParams.standard(1e5), EPS9)
    assert inter.mu >= 0.0 and 0.0 <= inter.hQ <= 1.0 and inter.ln2e > 0.0
    assert inter.ln2e == pytest.approx(math.log(2 / 1e-9))


@pytest.mark.parametrize("n_total,reference_n", [(10_000, 2.01e3), (100_000, 4.06e4), (1_000_000, 4.90e5)])
def test_key_length_table(golden, n_total, reference_n):
    n = key_length(ProtocolParams.standard(n_total), EPS9)
    assert n == golden_row(golden, n_total)["n1"]
    assert abs(n - reference_n) <= 0.01 * reference_n


def test_key_length_infeasible_when_entropy_saturates():
    p = ProtocolParams.standard(1e6, q_tol=0.499)
    with pytest.raises(InfeasibleParameters):
        key_length(p, EPS9)


def test_key_length_zero_when_formula_negative():
    p = ProtocolParams(n_total=2000, n_key=1000, n_pe=1000, q_tol=0.1, f=2.0)
    assert key_length_real(p, EPS9) < 0
    assert key_length(p, EPS9) == 0


@pytest.mark.parametrize("log10_eps", [-3, -9, -20, -30])
def test_epsilon_of_length_inverts_key_length(table_params, log10_eps):
    eps0 = Log2Prob.from_log10(log10_eps)
    n = key_length(table_params, eps0)
    assert n >= 1
    eps = epsilon_of_length(table_params, n)
    assert eps.exponent <= eps0.exponent + SOLVER_TOL
    assert key_length(table_params, eps) == n


def test_key_length_of_epsilon_is_identity_on_range(table_params):
    top = key_length(table_params, EPS9)
    for n in range(1, top, max(1, top // 97)):
        assert key_length(table_params, epsilon_of_length(table_params, n)) == n


def test_epsilon_strictly_increasing_in_length(table_params):
    top = key_length(table_params, EPS9)
    ns = sorted(set(range(1, top, max(1, top // 50))) | {top - 1, top})
    eps = [epsilon_of_length(table_params, n).exponent for n in ns]
    assert all(a < b for a, b in zip(eps, eps[1:]))


def test_epsilon_of_length_no_solution():
    p = ProtocolParams.standard(1e4)
    longest = math.floor(key_length_real(p, 0.0))
    with pytest.raises(NoSolution):
        epsilon_of_length(p, longest + 1)
    with pytest.raises(ValueError):
        epsilon_of_length(p, 0)


@pytest.mark.parametrize("n_total,decade", [(100_000, 327), (1_000_000, 3277)])
def test_epsilon_at_fixed_point_length(golden, n_total, decade):
    row = golden_row(golden, n_total)
    eps = epsilon_of_length(ProtocolParams.standard(n_total), row["n2"])
    assert eps.exponent == pytest.approx(row["log2_eps_kprime"], abs=1e-5)
    assert -eps.log10 == pytest.approx(decade, rel=0.002)


def test_fixed_point_matches_high_precision(golden, table_params):
    row = golden_row(golden, table_params.n_total)
    assert fixed_point_real(table_params) == pytest.approx(row["n2_star"], abs=1e-5)
    n2, eps = fixed_point_n2(table_params)
    assert n2 == row["n2"]
    assert eps.exponent == pytest.approx(row["log2_eps_kprime"], abs=1e-5)


@pytest.mark.parametrize("n_total,decade", [(10_000, 32), (1_000_000, 3277)])
def test_fixed_point_decade(n_total, decade):
    _, eps = fixed_point_n2(ProtocolParams.standard(n_total))
    assert -eps.log10 == pytest.approx(decade, rel=0.02)


def test_fixed_point_residual_strictly_increasing(table_params):
    # sign scan: g must cross zero exactly once on [1, N]
    N = table_params.n_key
    grid = [1 + (N - 1) * i / 4000 for i in range(4001)]
    g = [_fixed_point_residual(table_params, x) for x in grid]
    finite = [v for v in g if math.isfinite(v)]
    assert all(a < b for a, b in zip(finite, finite[1:]))
    assert g[0] < 0 < g[-1]
    assert sum(1 for a, b in zip(g, g[1:]) if a <= 0 < b) == 1


def test_fixed_point_infeasible():
    with pytest.raises(InfeasibleParameters):
        fixed_point_n2(ProtocolParams.standard(1e4, q_tol=0.3))


def test_floor_safety(table_params):
    n2, eps = fixed_point_n2(table_params)
    assert eps.exponent <= -n2
    assert log2_add(-n2, eps).exponent <= -(n2 - 1)


def test_fixed_point_optimality(table_params):
    star = fixed_point_real(table_params)
    n2 = math.floor(star)
    totals = {}
    for n in range(max(1, n2 - 40), n2 + 41):
        totals[n] = log2_add(-n, epsilon_of_length(table_params, n)).exponent
    # no length beats 2^-n2*; the best achievable total is within one bit of it
    assert all(t > -star for t in totals.values())
    assert min(totals.values()) - (-star) <= 1.0


def test_length_sum_minimum_is_not_at_fixed_point():
    # records why optimality is stated on values: the argmin sits a few bits above n2*
    p = ProtocolParams.standard(1e4)
    star = fixed_point_real(p)
    totals = {n: log2_add(-n, epsilon_of_length(p, n)).exponent for n in range(100, 130)}
    best = min(totals, key=totals.get)
    assert 2 < best - star < 8


def test_lemma1_examples():
    assert lemma1_bound(30, Log2Prob.zero()).exponent == -30.0
    assert lemma1_bound(1, Log2Prob(-1.0)).exponent == 0.0
    b = lemma1_bound(490_000, EPS9)
    assert b.log10 == pytest.approx(-9.0, abs=1e-9)
    with pytest.raises(ValueError):
        lemma1_bound(0, EPS9)


@pytest.mark.parametrize("n_total,reference_neg_log10", [(100_000, 327), (1_000_000, 3277 - math.log10(2))])
def test_thm2_examples(golden, n_total, reference_neg_log10):
    row = golden_row(golden, n_total)
    bound, n2 = thm2_bound(ProtocolParams.standard(n_total), row["n1"])
    assert n2 == row["n2"]
    assert bound.exponent == -(n2 - 1)
    assert -bound.log10 == pytest.approx(row["thm2_neg_log10"], abs=1e-9)
    assert -bound.log10 == pytest.approx(reference_neg_log10, rel=0.02)


def test_thm2_inapplicable_at_boundary():
    p = ProtocolParams.standard(1e4)
    n2, _ = fixed_point_n2(p)
    with pytest.raises(Inapplicable):
        thm2_bound(p, n2)
    bound, _ = thm2_bound(p, n2 + 1)
    assert bound.exponent == -(n2 - 1)


def test_kpa_examples():
    assert kpa_bound(100, 0) == Log2Prob(-99.0)
    assert kpa_bound(100, 99).exponent == 0.0
    assert kpa_bound(100, 100).exponent == 0.0
    assert kpa_bound(100, 50) == Log2Prob(-49.0)
    with pytest.raises(ValueError):
        kpa_bound(100, 101)


def test_kpa_zero_matches_thm2():
    p = ProtocolParams.standard(1e5)
    n1 = key_length(p, EPS9)
    bound, n2 = thm2_bound(p, n1)
    assert kpa_bound(n2, 0) == bound


def test_analyze_invariants(table_params):
    rep = analyze(table_params, known_bits=[0, 10])
    assert rep.n2 < rep.n1
    assert rep.thm2_bound < rep.lemma1_bound
    assert rep.rate_r == rep.n1 / table_params.n_total
    assert rep.rate_rprime == rep.n2 / table_params.n_total
    assert rep.kpa[0] == rep.thm2_bound
    assert rep.kpa[10].exponent == -(rep.n2 - 11)


def test_analyze_without_fixed_point_gain():
    # eps_target so small that n1 sits below the fixed point
    p = ProtocolParams.standard(1e4, eps_target=Log2Prob.from_log10(-33))
    rep = analyze(p)
    assert rep.n1 >= 1
    assert rep.n1 <= fixed_point_n2(p).n2
    assert rep.thm2_bound is None and rep.n2 is None


def test_analyze_rejects_keyless_parameters():
    p = ProtocolParams(n_total=2000, n_key=1000, n_pe=1000, q_tol=0.1, f=2.0)
    with pytest.raises(InfeasibleParameters):
        analyze(p)


def test_log10_constant():
    assert LOG10_2 == pytest.approx(math.log10(2))
