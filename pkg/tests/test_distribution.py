import math
from collections import Counter
from fractions import Fraction

import pytest

from gmlu.classes import AdmissibleTuple
from gmlu.distribution import (
    ClassDistribution,
    ClassEntry,
    boltzmann_entropy,
    build_distribution,
    comparability_constant,
    dominating_class_sweep,
    entropy_vs_depth,
    estimate_separation_probability,
    exact_separation_probability,
    majority_report,
    make_depth_rule,
    phase_constants,
    sample_profiles,
    shannon_entropy,
    verify_monotone_connection,
)
from gmlu.vocab import Vocabulary

V1 = Vocabulary(("p",))
V2 = Vocabulary(("p", "q"))


# -- distributions and entropies ----------------------------------------------


def test_distribution_n3_d1():
    dist = build_distribution(3, 1, V1)
    table = {e.tup.entries: (e.size, e.probability) for e in dist.entries}
    assert table == {
        (0, 1): (1, Fraction(1, 8)),
        (1, 0): (1, Fraction(1, 8)),
        (1, 1): (6, Fraction(3, 4)),
    }


def test_distribution_n1_symmetric():
    dist = build_distribution(1, 1, V1)
    assert [e.probability for e in dist.entries] == [Fraction(1, 2), Fraction(1, 2)]


def test_distribution_n4_d2():
    dist = build_distribution(4, 2, V1)
    table = {e.tup.entries: e.size for e in dist.entries}
    assert table == {(0, 2): 1, (1, 2): 4, (2, 0): 1, (2, 1): 4, (2, 2): 6}


def test_probabilities_sum_to_one_exactly():
    for vocab in (V1, V2):
        for n in range(1, 9 if vocab is V1 else 6):
            for d in range(1, n + 1):
                dist = build_distribution(n, d, vocab)
                assert sum(e.probability for e in dist.entries) == 1


def test_entropy_worked_example():
    dist = build_distribution(3, 1, V1)
    h_b = boltzmann_entropy(dist)
    h_s = shannon_entropy(dist)
    assert h_b == pytest.approx(0.75 * math.log2(6), abs=1e-12)
    assert h_b == pytest.approx(1.93872, abs=5e-6)
    assert h_s == pytest.approx(1.06128, abs=5e-6)
    assert h_s + h_b == pytest.approx(3.0, abs=1e-9)


def test_single_class_degenerate_entropies():
    dist = ClassDistribution(
        3, 3, V1, (ClassEntry(AdmissibleTuple((3, 0), 3, 3), 8, Fraction(1)),)
    )
    assert shannon_entropy(dist) == 0.0
    assert boltzmann_entropy(dist) == 3.0  # log2 of t^n


def test_entropy_identity_everywhere():
    for vocab in (V1, V2):
        for n in range(1, 9 if vocab is V1 else 6):
            for d in range(1, n + 1):
                dist = build_distribution(n, d, vocab)
                total = shannon_entropy(dist) + boltzmann_entropy(dist)
                assert abs(total - n * len(vocab.symbols)) < 1e-9


def test_entropy_vs_depth_n8():
    rows = entropy_vs_depth(8, V1)
    shannons = [row.shannon for row in rows]
    assert shannons[0] < shannons[1] < shannons[2] < shannons[3]
    assert shannons[3] == shannons[4] == shannons[7]
    boltzmanns = [row.boltzmann for row in rows]
    assert boltzmanns[0] > boltzmanns[1] > boltzmanns[2] > boltzmanns[3]
    assert boltzmanns[3] == boltzmanns[7]


def test_boltzmann_over_isomorphism_classes_is_expected_log_multinomial():
    # at d >= n every class is an isomorphism class of size multinomial(n; counts)
    from gmlu.combinatorics import multinomial

    n = 6
    dist = build_distribution(n, n, V1)
    expected = sum(
        Fraction(multinomial(n, [a, n - a]), 2**n)
        * math.log2(multinomial(n, [a, n - a]))
        for a in range(n + 1)
    )
    assert boltzmann_entropy(dist) == pytest.approx(float(expected), abs=1e-12)


def test_entropy_constant_from_half_n_as_partitions_coincide():
    for n in (2, 5, 6):
        pivot = math.ceil(n / 2)
        base = build_distribution(n, pivot, V1).size_multiset()
        for d in range(pivot, n + 1):
            assert build_distribution(n, d, V1).size_multiset() == base


# -- phase constants and majority ------------------------------------------------


def test_phase_constants_t2():
    consts = phase_constants(V1)
    assert consts.t == 2
    assert consts.c1 == pytest.approx(1.17741, abs=5e-6)
    # sqrt(pi / (2 t^3 (4t)^(1/(t-1)))) at t=2 is sqrt(pi/128)
    assert consts.c2 == pytest.approx(math.sqrt(math.pi / 128), abs=1e-12)
    assert consts.c2 < consts.c1


def test_phase_constants_t4():
    consts = phase_constants(V2)
    assert consts.c1 == pytest.approx(math.sqrt(8 * math.log(8)) / 4, abs=1e-12)
    assert consts.c1 == pytest.approx(1.02, abs=5e-3)
    assert consts.c2 < consts.c1


def test_majority_n64_d1():
    rep = majority_report(64, 1, V1)
    assert rep.has_majority
    assert rep.max_tuple.entries == (1, 1)
    assert rep.regime == "majority (d <= n/t - c1*sqrt(n))"


def test_majority_n64_d32_none():
    rep = majority_report(64, 32, V1)
    assert not rep.has_majority
    assert rep.max_probability == Fraction(math.comb(64, 32), 2**64)


def test_majority_n4_d2():
    rep = majority_report(4, 2, V1)
    assert rep.candidate is not None
    assert rep.candidate_probability == Fraction(6, 16)
    assert not rep.has_majority


def test_majority_four_types():
    rep = majority_report(8, 1, V2)
    # all four types realized at least once, by inclusion-exclusion
    expected = Fraction(
        sum((-1) ** k * math.comb(4, k) * (4 - k) ** 8 for k in range(5)), 4**8
    )
    assert rep.candidate_probability == expected == Fraction(5103, 8192)
    assert rep.has_majority
    # at depth 2 the all-capped tuple is no longer the largest class
    rep2 = majority_report(8, 2, V2)
    assert rep2.max_tuple.entries == (1, 2, 2, 2)
    assert not rep2.has_majority


# -- sampling ---------------------------------------------------------------------


def test_sampling_is_deterministic():
    a = sample_profiles(10, V1, 50, seed=7)
    b = sample_profiles(10, V1, 50, seed=7)
    assert a == b
    assert a != sample_profiles(10, V1, 50, seed=8)


def test_sampling_mean_concentration():
    profiles = sample_profiles(100, V1, 10**5, seed=123)
    mean = sum(p.counts[0] for p in profiles) / len(profiles)
    assert abs(mean - 50) <= 3 * 5  # within 3 per-sample sigma of n/t


def test_sampling_unit_profiles():
    for profile in sample_profiles(1, V2, 20, seed=0):
        assert sorted(profile.counts) == [0, 0, 0, 1]


def test_sampled_frequencies_match_exact_probabilities():
    n, d, trials = 6, 2, 10**5
    dist = build_distribution(n, d, V1)
    freq = Counter(
        tuple(min(c, d) for c in p.counts)
        for p in sample_profiles(n, V1, trials, seed=2024)
    )
    for entry in dist.entries:
        p = float(entry.probability)
        se = math.sqrt(p * (1 - p) / trials)
        assert abs(freq[entry.tup.entries] / trials - p) <= 4 * se + 1e-12


def test_separation_probability_exact_and_sampled():
    exact = exact_separation_probability(4, 4, V1)
    assert exact == 1 - sum(
        Fraction(math.comb(4, a), 16) ** 2 for a in range(5)
    )
    sampled = estimate_separation_probability(4, 4, V1, trials=20000, seed=9)
    se = math.sqrt(float(exact) * (1 - float(exact)) / 20000)
    assert abs(sampled - float(exact)) <= 4 * se


def test_separation_low_depth_rarely_separates():
    # both types almost surely show up at least once when n is large
    assert estimate_separation_probability(400, 1, V1, trials=2000, seed=5) == 0.0


# -- sweeps -----------------------------------------------------------------------


def test_depth_rules():
    below = make_depth_rule("below-sqrt", 2.0, V1)
    assert below(16) == max(1, 8 - 8) == 1
    assert below(64) == 16
    quarter = make_depth_rule("below-quarter", 1.0, V1)
    assert quarter(16) == 6
    above = make_depth_rule("above-sqrt", 0.0, V1)
    assert above(256) == 128
    with pytest.raises(ValueError):
        make_depth_rule("nope", 1.0, V1)


def test_dominating_sweep_low_depth_tends_to_one():
    rows = dominating_class_sweep(lambda n: 1, V1, [4, 8, 16, 32])
    probs = [row.candidate_probability for row in rows]
    assert probs == sorted(probs)
    # both types present: inclusion-exclusion gives (2^n - 2) / 2^n
    assert probs[-1] == Fraction(2**32 - 2, 2**32)


def test_dominating_sweep_half_depth_vanishes():
    rows = dominating_class_sweep(
        lambda n: n // 2, V1, [8, 32, 128]
    )
    probs = [float(row.max_probability) for row in rows]
    assert probs == sorted(probs, reverse=True)
    assert probs[-1] == pytest.approx(
        math.comb(128, 64) / 2**128, rel=1e-12
    )


# -- monotone connection ------------------------------------------------------------


def test_comparability_constant():
    assert comparability_constant(V1) == 5
    assert comparability_constant(V2) == 19


def test_monotone_exact_mode_is_vacuous_at_tiny_scale():
    for n in range(1, 6):
        for d in range(1, min(n, 3) + 1):
            rep = verify_monotone_connection(n, d, V1, mode="exact")
            assert rep.pair_count == 0 and rep.ok


def test_monotone_bounds_mode_small_grid():
    rep = verify_monotone_connection(26, 6, V1, mode="bounds")
    assert rep.pair_count > 0
    assert rep.ok


def test_monotone_comparable_pair_example():
    # (1, d) against (2 + c_tau, d) is comparable once entries allow it
    d = 8
    n = 40
    rep = verify_monotone_connection(n, d, V1, mode="bounds")
    pairs_exist = rep.pair_count > 0
    assert pairs_exist and rep.ok


def test_monotone_mode_validation():
    with pytest.raises(ValueError):
        verify_monotone_connection(4, 1, V1, mode="fast")
