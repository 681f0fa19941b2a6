"""Class-size distributions, their entropies, and phase-transition reports.

The probability of a class is its exact size over t^n, kept as a
rational so threshold comparisons (majority, dominance) never hinge on
rounding.  Entropies are the only floating-point quantities: base-2
logs of exact integers and rationals.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .classes import AdmissibleTuple, class_size, enumerate_admissible
from .complexity import exact_complexity, lower_bound, upper_bound
from .config import DEFAULT_CAPS, SearchCaps
from .models import ModelProfile
from .vocab import Vocabulary


@dataclass(frozen=True)
class ClassEntry:
    tup: AdmissibleTuple
    size: int
    probability: Fraction


@dataclass(frozen=True)
class ClassDistribution:
    """All classes of one (n, d) pair with exact sizes and probabilities."""

    n: int
    d: int
    vocab: Vocabulary
    entries: tuple[ClassEntry, ...]

    def max_entry(self) -> ClassEntry:
        """Largest class; ties broken by lexicographic tuple order."""
        return max(self.entries, key=lambda e: e.size)

    def size_multiset(self) -> tuple[int, ...]:
        return tuple(sorted(e.size for e in self.entries))


def build_distribution(n: int, d: int, vocab: Vocabulary) -> ClassDistribution:
    denom = vocab.t**n
    entries = []
    total = 0
    for tup in enumerate_admissible(n, d, vocab):
        sz = class_size(tup)
        total += sz
        entries.append(ClassEntry(tup, sz, Fraction(sz, denom)))
    if total != denom:
        raise AssertionError(
            f"class sizes sum to {total}, expected {denom}; counting bug"
        )
    return ClassDistribution(n, d, vocab, tuple(entries))


def _log2_fraction(p: Fraction) -> float:
    return math.log2(p.numerator) - math.log2(p.denominator)


def boltzmann_entropy(dist: ClassDistribution) -> float:
    """Expected log2 class size over the distribution."""
    return sum(float(e.probability) * math.log2(e.size) for e in dist.entries)


def shannon_entropy(dist: ClassDistribution) -> float:
    """Expected -log2 class probability over the distribution."""
    return -sum(
        float(e.probability) * _log2_fraction(e.probability) for e in dist.entries
    )


@dataclass(frozen=True)
class DepthEntropyRow:
    d: int
    class_count: int
    shannon: float
    boltzmann: float

    @property
    def entropy_sum(self) -> float:
        return self.shannon + self.boltzmann


def entropy_vs_depth(n: int, vocab: Vocabulary) -> list[DepthEntropyRow]:
    """Both entropies for every depth 1..n.

    The Shannon entropy strictly grows and the Boltzmann entropy
    strictly falls while 2d < n; from d >= n/2 on, classes are plain
    isomorphism classes and both stay constant.
    """
    rows = []
    for d in range(1, n + 1):
        dist = build_distribution(n, d, vocab)
        rows.append(
            DepthEntropyRow(
                d, len(dist.entries), shannon_entropy(dist), boltzmann_entropy(dist)
            )
        )
    return rows


@dataclass(frozen=True)
class PhaseConstants:
    """Explicit majority-threshold constants for the type count t."""

    c1: float
    c2: float
    t: int

    def __post_init__(self):
        if not self.c2 < self.c1:
            raise ValueError(f"expected c2 < c1, got {self.c2} >= {self.c1}")


def phase_constants(vocab: Vocabulary) -> PhaseConstants:
    """c1 = (1/t) sqrt(2t ln 2t); c2 = sqrt(pi / (2 t^3 (4t)^(1/(t-1))))."""
    t = vocab.t
    c1 = math.sqrt(2 * t * math.log(2 * t)) / t
    c2 = math.sqrt(math.pi / (2 * t**3 * (4 * t) ** (1.0 / (t - 1))))
    return PhaseConstants(c1, c2, t)


@dataclass(frozen=True)
class MajorityReport:
    n: int
    d: int
    candidate: AdmissibleTuple | None
    candidate_probability: Fraction
    max_tuple: AdmissibleTuple
    max_probability: Fraction
    has_majority: bool
    regime: str | None


def majority_report(n: int, d: int, vocab: Vocabulary) -> MajorityReport:
    """Exact majority check, annotated with the threshold regime.

    The candidate is the all-capped tuple (d, ..., d) when admissible;
    the true maximum class is reported either way, and majority means
    exact probability above one half.
    """
    dist = build_distribution(n, d, vocab)
    t = vocab.t
    candidate_entries = tuple([d] * t)
    candidate = None
    candidate_probability = Fraction(0)
    for e in dist.entries:
        if e.tup.entries == candidate_entries:
            candidate = e.tup
            candidate_probability = e.probability
            break
    best = dist.max_entry()
    consts = phase_constants(vocab)
    if d <= n / t - consts.c1 * math.sqrt(n):
        regime = "majority (d <= n/t - c1*sqrt(n))"
    elif d >= n / t - consts.c2 * math.sqrt(n):
        regime = "no-majority (d >= n/t - c2*sqrt(n))"
    else:
        regime = None
    return MajorityReport(
        n,
        d,
        candidate,
        candidate_probability,
        best.tup,
        best.probability,
        best.probability > Fraction(1, 2),
        regime,
    )


def sample_profiles(
    n: int, vocab: Vocabulary, count: int, seed: int
) -> list[ModelProfile]:
    """Uniform random models: each point's type drawn independently.

    Deterministic for a fixed seed (Mersenne Twister via random.Random).
    """
    if count < 1:
        raise ValueError("count must be positive")
    rng = random.Random(seed)
    t = vocab.t
    out = []
    for _ in range(count):
        counts = Counter(rng.choices(range(t), k=n))
        out.append(ModelProfile(tuple(counts.get(i, 0) for i in range(t))))
    return out


def estimate_separation_probability(
    n: int, d: int, vocab: Vocabulary, trials: int, seed: int
) -> float:
    """Sampled probability that two independent uniform models land in
    different classes, decided by tuple equality (the class bijection
    makes this exact per pair)."""
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = random.Random(seed)
    t = vocab.t
    separable = 0
    for _ in range(trials):
        a = Counter(rng.choices(range(t), k=n))
        b = Counter(rng.choices(range(t), k=n))
        ta = tuple(min(a.get(i, 0), d) for i in range(t))
        tb = tuple(min(b.get(i, 0), d) for i in range(t))
        if ta != tb:
            separable += 1
    return separable / trials


def exact_separation_probability(n: int, d: int, vocab: Vocabulary) -> Fraction:
    """Exact probability that two independent uniform models differ as
    classes: one minus the collision probability."""
    dist = build_distribution(n, d, vocab)
    collision = sum((e.probability**2 for e in dist.entries), Fraction(0))
    return 1 - collision


@dataclass(frozen=True)
class SweepRow:
    n: int
    d: int
    candidate_probability: Fraction
    max_tuple: AdmissibleTuple
    max_probability: Fraction


def dominating_class_sweep(
    d_rule: Callable[[int], int], vocab: Vocabulary, n_values: Iterable[int]
) -> list[SweepRow]:
    """Exact candidate and maximum class probabilities along a depth rule.

    The trend over n (toward one, bounded away, or toward zero) is what
    the table exhibits; no limit claim is asserted.
    """
    rows = []
    t = vocab.t
    for n in n_values:
        d = d_rule(n)
        if d < 1:
            raise ValueError(f"depth rule gave d={d} at n={n}")
        dist = build_distribution(n, d, vocab)
        candidate_entries = tuple([d] * t)
        candidate_probability = Fraction(0)
        for e in dist.entries:
            if e.tup.entries == candidate_entries:
                candidate_probability = e.probability
                break
        best = dist.max_entry()
        rows.append(SweepRow(n, d, candidate_probability, best.tup, best.probability))
    return rows


_DEPTH_RULES = ("below-sqrt", "below-quarter", "above-sqrt")


def make_depth_rule(kind: str, a: float, vocab: Vocabulary) -> Callable[[int], int]:
    """Built-in depth rules d(n) around n/t, rounded down, clamped to 1."""
    t = vocab.t
    if kind == "below-sqrt":
        return lambda n: max(1, math.floor(n / t - a * math.sqrt(n)))
    if kind == "below-quarter":
        return lambda n: max(1, math.floor(n / t - a * n**0.25))
    if kind == "above-sqrt":
        return lambda n: max(1, math.floor(n / t + a * math.sqrt(n)))
    raise ValueError(f"unknown depth rule {kind!r}; choose from {_DEPTH_RULES}")


def comparability_constant(vocab: Vocabulary) -> int:
    """Gap a coordinatewise-ordered tuple pair must exceed to be
    comparable for the monotone connection: t(2|tau|+1) - 1."""
    return vocab.t * (2 * len(vocab.symbols) + 1) - 1


@dataclass(frozen=True)
class MonotonePair:
    """One comparable pair with the values its check compared.

    In exact mode the complexity fields hold exact complexities; in
    bounds mode they hold the canonical upper bound of the smaller
    tuple and the closed-form lower bound of the larger one.
    """

    smaller: AdmissibleTuple
    larger: AdmissibleTuple
    smaller_size: int
    larger_size: int
    smaller_complexity: int
    larger_complexity: int
    ok: bool


@dataclass(frozen=True)
class MonotoneConnectionReport:
    n: int
    d: int
    mode: str
    pair_count: int
    failures: tuple[MonotonePair, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_monotone_connection(
    n: int,
    d: int,
    vocab: Vocabulary,
    mode: str = "bounds",
    caps: SearchCaps = DEFAULT_CAPS,
) -> MonotoneConnectionReport:
    """Check the monotone connection on all comparable distinct pairs.

    Pairs are comparable when coordinatewise ordered with entry-sum gap
    above t(2|tau|+1) - 1.  In bounds mode the check is
    upper(smaller) < lower(larger) and |smaller| < |larger|; in exact
    mode (tiny scale) it is the biconditional between the exact size
    and exact complexity orders.
    """
    if mode not in ("bounds", "exact"):
        raise ValueError(f"mode must be 'bounds' or 'exact', not {mode!r}")
    c_tau = comparability_constant(vocab)
    tuples = enumerate_admissible(n, d, vocab)
    sizes = [class_size(tup) for tup in tuples]
    if mode == "exact":
        complexities = [exact_complexity(tup, vocab, caps=caps) for tup in tuples]
        los = his = None
    else:
        complexities = None
        los = [lower_bound(tup) for tup in tuples]
        his = [upper_bound(tup, vocab).value for tup in tuples]
    # bucket by entry sum so only pairs with a large enough gap are walked
    by_sum: dict[int, list[int]] = {}
    for i, tup in enumerate(tuples):
        by_sum.setdefault(sum(tup.entries), []).append(i)
    pair_count = 0
    failures = []
    for s1, idx1 in by_sum.items():
        for s2, idx2 in by_sum.items():
            if s2 - s1 <= c_tau:
                continue
            for i in idx1:
                ei = tuples[i].entries
                for j in idx2:
                    if not all(a <= b for a, b in zip(ei, tuples[j].entries)):
                        continue
                    pair_count += 1
                    if mode == "exact":
                        ok = (sizes[i] < sizes[j]) == (
                            complexities[i] < complexities[j]
                        )
                        pair = MonotonePair(
                            tuples[i], tuples[j], sizes[i], sizes[j],
                            complexities[i], complexities[j], ok,
                        )
                    else:
                        ok = his[i] < los[j] and sizes[i] < sizes[j]
                        pair = MonotonePair(
                            tuples[i], tuples[j], sizes[i], sizes[j],
                            his[i], los[j], ok,
                        )
                    if not ok:
                        failures.append(pair)
    return MonotoneConnectionReport(n, d, mode, pair_count, tuple(failures))
