"""Finite models as type-count profiles, and global formula evaluation.

Truth of a depth-bounded counting formula depends only on how many
points realize each propositional type, so a model is kept up to
isomorphism as a count vector of length t.  A pointed model adds the
type of its evaluation point; for well-formed formulas (every literal
under a modality) the point is irrelevant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .formulas import And, BoxLt, BoxNeq, DiamondEq, DiamondGeq, Formula, Lit, Or
from .vocab import Vocabulary


class VocabularyMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class ModelProfile:
    """A model of size n up to isomorphism: counts[i] points of type i."""

    counts: tuple[int, ...]

    def __post_init__(self):
        if not self.counts or any(c < 0 for c in self.counts):
            raise ValueError(f"bad counts {self.counts}")
        if sum(self.counts) < 1:
            raise ValueError("a model needs at least one point")

    @property
    def n(self) -> int:
        return sum(self.counts)

    def realized_types(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.counts) if c > 0)


@dataclass(frozen=True)
class PointedProfile:
    """A profile together with the type of the evaluation point."""

    profile: ModelProfile
    point_type: int

    def __post_init__(self):
        if not 0 <= self.point_type < len(self.profile.counts):
            raise ValueError(f"point type {self.point_type} out of range")
        if self.profile.counts[self.point_type] < 1:
            raise ValueError(f"point type {self.point_type} not realized")

    def sort_key(self):
        return (self.profile.counts, self.point_type)


def _check_vocab(profile: ModelProfile, vocab: Vocabulary):
    if len(profile.counts) != vocab.t:
        raise VocabularyMismatchError(
            f"profile has {len(profile.counts)} type counts, vocabulary has {vocab.t}"
        )


def sat_types(f: Formula, profile: ModelProfile, vocab: Vocabulary) -> frozenset[int]:
    """Types whose points satisfy f in this model.

    Modal subformulas are point-independent, so they contribute either
    every type or none; literals and their boolean combinations select
    types directly.
    """
    _check_vocab(profile, vocab)
    all_types = frozenset(range(vocab.t))

    def rec(g: Formula) -> frozenset[int]:
        if isinstance(g, Lit):
            try:
                return vocab.literal_types(g.symbol, g.positive)
            except KeyError:
                raise VocabularyMismatchError(f"unknown symbol {g.symbol!r}") from None
        if isinstance(g, And):
            return rec(g.left) & rec(g.right)
        if isinstance(g, Or):
            return rec(g.left) | rec(g.right)
        count = sum(profile.counts[i] for i in rec(g.sub))
        if isinstance(g, DiamondGeq):
            holds = count >= g.grade
        elif isinstance(g, BoxLt):
            holds = profile.n - count < g.grade
        elif isinstance(g, DiamondEq):
            holds = count == g.grade
        elif isinstance(g, BoxNeq):
            holds = profile.n - count != g.grade
        else:
            raise TypeError(f"not a formula: {g!r}")
        return all_types if holds else frozenset()

    return rec(f)


def count_satisfying(f: Formula, profile: ModelProfile, vocab: Vocabulary) -> int:
    """Number of points of the model satisfying f."""
    return sum(profile.counts[i] for i in sat_types(f, profile, vocab))


def evaluate(profile: ModelProfile, f: Formula, vocab: Vocabulary) -> bool:
    """Global truth: f holds at every point of the model."""
    sat = sat_types(f, profile, vocab)
    return all(i in sat for i in profile.realized_types())


def evaluate_pointed(pm: PointedProfile, f: Formula, vocab: Vocabulary) -> bool:
    """Truth at the distinguished point."""
    return pm.point_type in sat_types(f, pm.profile, vocab)


def enumerate_profiles(n: int, vocab: Vocabulary) -> Iterator[ModelProfile]:
    """All size-n profiles over the vocabulary, in lexicographic count order."""
    t = vocab.t

    def rec(prefix: tuple[int, ...], remaining: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == t - 1:
            yield prefix + (remaining,)
            return
        for c in range(remaining + 1):
            yield from rec(prefix + (c,), remaining - c)

    for counts in rec((), n):
        yield ModelProfile(counts)


def pointed_profiles(n: int, vocab: Vocabulary) -> list[PointedProfile]:
    """All pointed size-n profiles, ordered by (counts, point type)."""
    out = []
    for profile in enumerate_profiles(n, vocab):
        for i in profile.realized_types():
            out.append(PointedProfile(profile, i))
    return out
