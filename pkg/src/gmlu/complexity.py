"""Description complexity of equivalence classes.

Upper bounds come from explicit canonical defining formulas.  Lower
bounds come from minimum-cost covers of a directed graph built from the
class tuple; the cover cost is a certified obstruction in the formula
size game.  A brute-force search over all depth-bounded formulas,
deduplicated by semantic signature, supplies exact values at tiny scale
and doubles as the separating-formula oracle for the game tests.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from itertools import combinations

from .classes import AdmissibleTuple, tuple_of_profile
from .config import DEFAULT_CAPS, ScaleCapError, SearchCaps
from .formulas import (
    And,
    BoxLt,
    BoxNeq,
    DiamondEq,
    DiamondGeq,
    Formula,
    Lit,
    Or,
    format_formula,
    size,
)
from .models import ModelProfile, enumerate_profiles
from .vocab import Vocabulary


def type_formula(vocab: Vocabulary, type_index: int) -> Formula:
    """Conjunction of the literals of one propositional type."""
    lits = [Lit(sym, pos) for sym, pos in vocab.type_literals(type_index)]
    out = lits[0]
    for lit in lits[1:]:
        out = And(out, lit)
    return out


def _conjunction(parts: list[Formula]) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def canonical_formula(tup: AdmissibleTuple, vocab: Vocabulary) -> Formula:
    """A formula defining the class among size-n models.

    With two or more capped entries, every type count is stated: exact
    counts for entries below d, thresholds for capped ones.  With at
    most one capped entry the type with the most points can be left
    implicit, since all other counts pin it down.
    """
    if vocab.t != tup.t:
        raise ValueError("tuple length does not match vocabulary")
    d = tup.d
    if tup.k_d >= 2:
        parts = [
            DiamondEq(e, type_formula(vocab, i))
            for i, e in enumerate(tup.entries)
            if e < d
        ] + [
            DiamondGeq(d, type_formula(vocab, i))
            for i, e in enumerate(tup.entries)
            if e == d
        ]
    else:
        j = tup.max_index()
        parts = [
            DiamondEq(e, type_formula(vocab, i))
            for i, e in enumerate(tup.entries)
            if i != j
        ]
    return _conjunction(parts)


@dataclass(frozen=True)
class UpperBoundReport:
    """Size of the canonical formula, with the printed closed form.

    ``value`` (the size function applied to the formula) is the
    authoritative bound.  For the all-but-largest variant the closed
    form is systematically one less than the actual size; both are
    reported rather than silently reconciled.
    """

    value: int
    closed_form: int
    matches: bool
    variant: str
    formula: Formula

    @property
    def formula_text(self) -> str:
        return format_formula(self.formula)


def upper_bound(tup: AdmissibleTuple, vocab: Vocabulary) -> UpperBoundReport:
    """size(canonical_formula(tup)) plus the closed-form cross-check."""
    f = canonical_formula(tup, vocab)
    value = size(f)
    t = tup.t
    ntau = len(vocab.symbols)
    if tup.k_d >= 2:
        closed = sum(tup.entries) + t * (2 * ntau + 1) - tup.k_d - 1
        variant = "all-types"
    else:
        j = tup.max_index()
        closed = (sum(tup.entries) - tup.entries[j]) + (t - 1) * (2 * ntau + 1) - 2
        variant = "all-but-largest"
    return UpperBoundReport(value, closed, closed == value, variant, f)


def lower_bound(tup: AdmissibleTuple) -> int:
    """Closed-form lower bound on the description complexity.

    Sum of all entries when at least two entries are capped; otherwise
    the sum without the type holding the most points.
    """
    if tup.k_d >= 2:
        return sum(tup.entries)
    return sum(tup.entries) - tup.entries[tup.max_index()]


@dataclass(frozen=True)
class CoverGraph:
    """Directed graph over the support of a tuple.

    Vertices are the realized type indices.  Edges (i, j) exist for
    every ordered pair of distinct support indices, except from the
    designated largest-coordinate index to targets below the cap; each
    edge records an adjacent class obtained by retyping one point.
    """

    tup: AdmissibleTuple
    designated: int
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]


def build_cover_graph(tup: AdmissibleTuple) -> CoverGraph:
    supp = tup.support
    if not supp:
        raise ValueError("tuple has empty support")
    jhat = tup.max_index()
    edges = tuple(
        (i, j)
        for i in supp
        for j in supp
        if i != j and (i != jhat or tup.entries[j] == tup.d)
    )
    return CoverGraph(tup, jhat, supp, edges)


def is_cover(graph: CoverGraph, subset: frozenset[int]) -> bool:
    """A subset covers edge (i, j) through i, or through j when the
    j-entry sits below the cap."""
    entries, d = graph.tup.entries, graph.tup.d
    return all(
        i in subset or (j in subset and entries[j] < d) for i, j in graph.edges
    )


def cover_cost(graph: CoverGraph, subset: frozenset[int]) -> int:
    return sum(graph.tup.entries[i] for i in subset)


def find_min_cover(
    graph: CoverGraph, caps: SearchCaps = DEFAULT_CAPS
) -> tuple[int, frozenset[int]]:
    """Exhaustive minimum-cost cover; deterministic tie-break by subset order."""
    supp = graph.vertices
    if len(supp) > caps.cover_max_support:
        raise ScaleCapError(
            f"support {len(supp)} exceeds cover search cap {caps.cover_max_support}"
        )
    best: tuple[int, tuple[int, ...]] | None = None
    for k in range(len(supp) + 1):
        for combo in combinations(supp, k):
            subset = frozenset(combo)
            if is_cover(graph, subset):
                cand = (cover_cost(graph, subset), combo)
                if best is None or cand < best:
                    best = cand
    assert best is not None  # the full support always covers
    return best[0], frozenset(best[1])


def min_cover_cost(graph: CoverGraph, caps: SearchCaps = DEFAULT_CAPS) -> int:
    return find_min_cover(graph, caps)[0]


def representative_profile(tup: AdmissibleTuple) -> ModelProfile:
    """The class member whose surplus points all take the designated
    largest-coordinate type."""
    j = tup.max_index()
    counts = list(tup.entries)
    counts[j] = tup.n - (sum(tup.entries) - tup.entries[j])
    return ModelProfile(tuple(counts))


class FormulaSearch:
    """Size-ordered enumeration of depth-bounded formulas over a fixed
    profile family, deduplicated by semantic signature.

    Each candidate carries a pointwise signature: per profile, the
    bitmask of types whose points satisfy it.  The signature is a
    congruence for all connectives, so keeping only the smallest
    formula per signature preserves minimal sizes.  Formulas whose
    literals are all covered by a modality additionally get a global
    signature (one bit per profile); those are the candidates that can
    define or separate classes.

    Grade-0 threshold modalities are semantically constant, so they are
    seeded once as size-1 constants instead of being re-derived at
    every size.
    """

    def __init__(self, vocab: Vocabulary, d: int, profiles: list[ModelProfile]):
        if d < 1:
            raise ValueError("counting depth must be at least 1")
        self.vocab = vocab
        self.d = d
        self.profiles = tuple(profiles)
        if len({p.counts for p in self.profiles}) != len(self.profiles):
            raise ValueError("profiles must be distinct")
        self.counts = [p.counts for p in self.profiles]
        self.sizes = [p.n for p in self.profiles]
        self.t = vocab.t
        self._full = (1 << self.t) - 1
        self._all_profiles_mask = (1 << len(self.profiles)) - 1
        # level s holds the signatures first reached at size s; searches are
        # shared and extend lazily, so growth is serialized
        self.inner_levels: list[dict] = [{}]
        self.outer_levels: list[dict] = [{}]
        self._inner_seen: set = set()
        self._outer_seen: set = set()
        self.max_built = 0
        self._lock = threading.Lock()

    # -- signature helpers ------------------------------------------------

    def _point_counts(self, sig) -> list[int]:
        return [
            sum(c for j, c in enumerate(self.counts[i]) if (sig[i] >> j) & 1)
            for i in range(len(self.profiles))
        ]

    def _add_inner(self, sig, formula, level) -> None:
        if sig not in self._inner_seen:
            self._inner_seen.add(sig)
            level[sig] = formula

    def _add_outer(self, mask, formula, outer_level, inner_level) -> None:
        if mask not in self._outer_seen:
            self._outer_seen.add(mask)
            outer_level[mask] = formula
        sig = tuple(
            self._full if (mask >> i) & 1 else 0 for i in range(len(self.profiles))
        )
        self._add_inner(sig, formula, inner_level)

    # -- enumeration -------------------------------------------------------

    def _build_next(self) -> None:
        s = self.max_built + 1
        inner_new: dict = {}
        outer_new: dict = {}
        if s == 1:
            for sym in self.vocab.symbols:
                for pos in (True, False):
                    mask = 0
                    for j in self.vocab.literal_types(sym, pos):
                        mask |= 1 << j
                    self._add_inner(
                        (mask,) * len(self.profiles), Lit(sym, pos), inner_new
                    )
            anchor = Lit(self.vocab.symbols[0], True)
            self._add_outer(
                self._all_profiles_mask, DiamondGeq(0, anchor), outer_new, inner_new
            )
            self._add_outer(0, BoxLt(0, anchor), outer_new, inner_new)
        # boolean combinations of smaller pieces
        for s1 in range(1, s - 1):
            s2 = s - 1 - s1
            if s2 < s1:
                break
            for sig1, f1 in self.inner_levels[s1].items():
                for sig2, f2 in self.inner_levels[s2].items():
                    self._add_inner(
                        tuple(a & b for a, b in zip(sig1, sig2)),
                        And(f1, f2),
                        inner_new,
                    )
                    self._add_inner(
                        tuple(a | b for a, b in zip(sig1, sig2)),
                        Or(f1, f2),
                        inner_new,
                    )
            for m1, f1 in self.outer_levels[s1].items():
                for m2, f2 in self.outer_levels[s2].items():
                    self._add_outer(m1 & m2, And(f1, f2), outer_new, inner_new)
                    self._add_outer(m1 | m2, Or(f1, f2), outer_new, inner_new)
        # modal atoms over smaller inner pieces
        for k in range(1, min(self.d, s - 1) + 1):
            for sig, f in self.inner_levels[s - k].items():
                cnts = self._point_counts(sig)
                geq = self._mask(c >= k for c in cnts)
                lt = self._mask(
                    self.sizes[i] - c < k for i, c in enumerate(cnts)
                )
                self._add_outer(geq, DiamondGeq(k, f), outer_new, inner_new)
                self._add_outer(lt, BoxLt(k, f), outer_new, inner_new)
        for k in range(0, min(self.d - 1, s - 2) + 1):
            for sig, f in self.inner_levels[s - k - 1].items():
                cnts = self._point_counts(sig)
                eq = self._mask(c == k for c in cnts)
                neq = self._mask(
                    self.sizes[i] - c != k for i, c in enumerate(cnts)
                )
                self._add_outer(eq, DiamondEq(k, f), outer_new, inner_new)
                self._add_outer(neq, BoxNeq(k, f), outer_new, inner_new)
        self.inner_levels.append(inner_new)
        self.outer_levels.append(outer_new)
        self.max_built = s

    @staticmethod
    def _mask(bits) -> int:
        mask = 0
        for i, b in enumerate(bits):
            if b:
                mask |= 1 << i
        return mask

    def first_outer_match(self, predicate, max_size: int):
        """Smallest (size, formula) whose global signature satisfies the
        predicate, or None when nothing matches up to max_size."""
        for s in range(1, max_size + 1):
            if s > self.max_built:
                with self._lock:
                    while s > self.max_built:
                        self._build_next()
            for mask, formula in self.outer_levels[s].items():
                if predicate(mask):
                    return s, formula
        return None


_class_searches: dict = {}


def _search_for(vocab: Vocabulary, n: int, d: int):
    key = (vocab.symbols, n, d)
    if key not in _class_searches:
        profiles = list(enumerate_profiles(n, vocab))
        index = {p.counts: i for i, p in enumerate(profiles)}
        _class_searches[key] = (FormulaSearch(vocab, d, profiles), profiles, index)
    return _class_searches[key]


def exact_complexity(
    tup: AdmissibleTuple,
    vocab: Vocabulary,
    max_size: int | None = None,
    caps: SearchCaps = DEFAULT_CAPS,
) -> int | None:
    """Exact description complexity by brute-force search, or None when no
    defining formula exists within max_size.

    The search runs over all size-n profiles, so a hit is a formula that
    is true on exactly the class members.  Enforced tiny scale.
    """
    if len(vocab.symbols) > caps.exact_max_symbols:
        raise ScaleCapError(
            f"|tau|={len(vocab.symbols)} exceeds exact-search cap "
            f"{caps.exact_max_symbols}"
        )
    if tup.n > caps.exact_max_n or tup.d > caps.exact_max_d:
        raise ScaleCapError(
            f"(n={tup.n}, d={tup.d}) exceeds exact-search caps "
            f"({caps.exact_max_n}, {caps.exact_max_d})"
        )
    search, profiles, _ = _search_for(vocab, tup.n, tup.d)
    target = 0
    for i, p in enumerate(profiles):
        if tuple_of_profile(p, tup.d) == tup:
            target |= 1 << i
    limit = max_size if max_size is not None else upper_bound(tup, vocab).value
    hit = search.first_outer_match(lambda mask: mask == target, limit)
    return hit[0] if hit else None


def minimal_separating_size(
    vocab: Vocabulary,
    d: int,
    n: int,
    true_profiles,
    false_profiles,
    max_size: int,
) -> tuple[int, Formula] | None:
    """Smallest formula of the depth-d fragment true on every profile of
    the first family and false on every profile of the second, or None.

    Shares one cached size-n search per (vocabulary, d); families that
    overlap are unseparable and return None immediately.
    """
    true_counts = {p.counts for p in true_profiles}
    false_counts = {p.counts for p in false_profiles}
    if true_counts & false_counts:
        return None
    search, _, index = _search_for(vocab, n, d)
    need = avoid = 0
    for c in true_counts:
        need |= 1 << index[c]
    for c in false_counts:
        avoid |= 1 << index[c]
    return search.first_outer_match(
        lambda mask: (mask & need) == need and not (mask & avoid), max_size
    )
