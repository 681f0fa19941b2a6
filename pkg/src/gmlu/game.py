"""The formula-size game for the depth-d counting fragment.

A position holds a resource budget and two sets of pointed models: the
left side must end up satisfying the formula the spoiler S is
implicitly building, the right side must end up refuting it.  S wins by
reaching a literal that splits the sides; the duplicator D wins when
the budget runs out.  S has a winning strategy with budget r exactly
when some formula of size at most r in the depth-d fragment separates
the sides.

Point selections inside counting moves are canonicalized as type-count
subvectors: the game only ever inspects propositional types, so which
concrete points get picked is irrelevant.  Or/and splits are enumerated
as two-block partitions of the deduplicated model sets; overlapping or
empty blocks never change the winner, since any win that uses them
embeds into a win at the same budget without them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .complexity import minimal_separating_size
from .config import DEFAULT_CAPS, ScaleCapError, SearchCaps
from .formulas import DiamondGeq, Formula, Lit, format_formula
from .models import PointedProfile, pointed_profiles
from .vocab import Vocabulary

S_WINS = "S"
D_WINS = "D"


@dataclass(frozen=True)
class GamePosition:
    resource: int
    left: frozenset[PointedProfile]
    right: frozenset[PointedProfile]
    modal_move_made: bool = False

    def __post_init__(self):
        if self.resource < 0:
            raise ValueError("resource must be nonnegative")
        sizes = {pm.profile.n for pm in self.left | self.right}
        if len(sizes) > 1:
            raise ValueError(f"models of mixed sizes {sizes} in one position")

    @property
    def n(self) -> int | None:
        for pm in self.left | self.right:
            return pm.profile.n
        return None


class GameMove:
    pass


@dataclass(frozen=True)
class PropMove(GameMove):
    literal: Lit


@dataclass(frozen=True)
class OrSplitMove(GameMove):
    part1: frozenset[PointedProfile]
    part2: frozenset[PointedProfile]
    r1: int
    r2: int


@dataclass(frozen=True)
class AndSplitMove(GameMove):
    part1: frozenset[PointedProfile]
    part2: frozenset[PointedProfile]
    r1: int
    r2: int


# A selection assigns each model of a side a type-count subvector of the
# required size.  Exact-count moves let S pick, per model on one side,
# either a P-set ("P", grade+1 points) or an N-set ("N", n-grade+1).
Selection = tuple[PointedProfile, tuple[int, ...]]
LabelledSelection = tuple[PointedProfile, tuple[str, tuple[int, ...]]]


@dataclass(frozen=True)
class DiaGeqMove(GameMove):
    grade: int
    left_selections: tuple[Selection, ...]
    right_selections: tuple[Selection, ...]


@dataclass(frozen=True)
class BoxLtMove(GameMove):
    grade: int
    left_selections: tuple[Selection, ...]
    right_selections: tuple[Selection, ...]


@dataclass(frozen=True)
class DiaEqMove(GameMove):
    grade: int
    left_selections: tuple[Selection, ...]
    right_selections: tuple[LabelledSelection, ...]


@dataclass(frozen=True)
class BoxNeqMove(GameMove):
    grade: int
    left_selections: tuple[LabelledSelection, ...]
    right_selections: tuple[Selection, ...]


@dataclass(frozen=True)
class MoveOutcome:
    """Either an immediate winner, or the successor positions; when there
    are two, the duplicator picks."""

    winner: str | None
    positions: tuple[GamePosition, ...] = ()


def _subvectors(counts: tuple[int, ...], total: int) -> list[tuple[int, ...]]:
    """All type-count vectors v <= counts with sum(v) = total."""
    if total < 0 or total > sum(counts):
        return []
    out: list[tuple[int, ...]] = []

    def rec(i: int, left: int, acc: list[int]):
        if i == len(counts) - 1:
            if left <= counts[i]:
                out.append(tuple(acc + [left]))
            return
        for v in range(min(counts[i], left) + 1):
            rec(i + 1, left - v, acc + [v])

    rec(0, total, [])
    return out


def _touched(pm: PointedProfile, vec: tuple[int, ...]):
    for i, v in enumerate(vec):
        if v > 0:
            yield PointedProfile(pm.profile, i)


def _complement(counts: tuple[int, ...], vec: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(c - v for c, v in zip(counts, vec))


def _sorted_models(models: frozenset[PointedProfile]) -> list[PointedProfile]:
    return sorted(models, key=PointedProfile.sort_key)


def _selection_products(models, size: int) -> list[tuple[Selection, ...]]:
    """Every way of assigning each model a size-point subvector."""
    assignments: list[tuple] = [()]
    for pm in _sorted_models(models):
        vecs = _subvectors(pm.profile.counts, size)
        if not vecs:
            return []
        assignments = [a + ((pm, v),) for a in assignments for v in vecs]
    return assignments


def _labelled_products(
    models, p_size: int, n_size: int
) -> list[tuple[LabelledSelection, ...]]:
    assignments: list[tuple] = [()]
    for pm in _sorted_models(models):
        opts = [("P", v) for v in _subvectors(pm.profile.counts, p_size)]
        opts += [("N", v) for v in _subvectors(pm.profile.counts, n_size)]
        if not opts:
            return []
        assignments = [a + ((pm, o),) for a in assignments for o in opts]
    return assignments


def legal_moves(pos: GamePosition, d: int, vocab: Vocabulary) -> list[GameMove]:
    """All moves available to S, point selections up to type symmetry."""
    if pos.resource < 1:
        raise ValueError("no moves at resource 0 (the position is lost for S)")
    r = pos.resource
    n = pos.n if pos.n is not None else 0
    moves: list[GameMove] = []
    if pos.modal_move_made:
        for sym in vocab.symbols:
            for positive in (True, False):
                moves.append(PropMove(Lit(sym, positive)))
    for move_cls, side in ((OrSplitMove, pos.left), (AndSplitMove, pos.right)):
        if r >= 3 and len(side) >= 2:
            items = _sorted_models(side)
            for k in range(1, len(items)):
                for combo in combinations(items, k):
                    part1 = frozenset(combo)
                    part2 = side - part1
                    for r1 in range(1, r - 1):
                        moves.append(move_cls(part1, part2, r1, r - 1 - r1))
    for k in range(0, min(d, r - 1) + 1):
        for sl in _selection_products(pos.left, k):
            for sr in _selection_products(pos.right, n - k + 1):
                moves.append(DiaGeqMove(k, sl, sr))
        for sl in _selection_products(pos.left, n - k + 1):
            for sr in _selection_products(pos.right, k):
                moves.append(BoxLtMove(k, sl, sr))
    for k in range(0, min(d - 1, r - 1) + 1):
        for sl in _selection_products(pos.left, k):
            for sr in _labelled_products(pos.right, k + 1, n - k + 1):
                moves.append(DiaEqMove(k, sl, sr))
        for sl in _labelled_products(pos.left, k + 1, n - k + 1):
            for sr in _selection_products(pos.right, k):
                moves.append(BoxNeqMove(k, sl, sr))
    return moves


def _check_selection(selections, models, expected_size: int):
    if frozenset(pm for pm, _ in selections) != models or len(selections) != len(
        models
    ):
        raise ValueError("selections must cover the side exactly once each")
    for pm, vec in selections:
        if len(vec) != len(pm.profile.counts):
            raise ValueError("selection vector length mismatch")
        if any(v < 0 or v > c for v, c in zip(vec, pm.profile.counts)):
            raise ValueError(f"selection {vec} exceeds counts {pm.profile.counts}")
        if sum(vec) != expected_size:
            raise ValueError(f"selection {vec} does not pick {expected_size} points")


def _check_labelled(selections, models, p_size: int, n_size: int):
    if frozenset(pm for pm, _ in selections) != models or len(selections) != len(
        models
    ):
        raise ValueError("selections must cover the side exactly once each")
    for pm, (label, vec) in selections:
        if label not in ("P", "N"):
            raise ValueError(f"bad selection label {label!r}")
        _check_selection(((pm, vec),), frozenset({pm}), p_size if label == "P" else n_size)


def apply_move(pos: GamePosition, move: GameMove, vocab: Vocabulary) -> MoveOutcome:
    """Play one move of S; prop moves end the game, splits hand D a choice."""
    r = pos.resource
    if r < 1:
        raise ValueError("no moves at resource 0")
    n = pos.n if pos.n is not None else 0
    if isinstance(move, PropMove):
        if not pos.modal_move_made:
            raise ValueError("literal moves are only legal after a modal move")
        types = vocab.literal_types(move.literal.symbol, move.literal.positive)
        s_wins = all(pm.point_type in types for pm in pos.left) and all(
            pm.point_type not in types for pm in pos.right
        )
        return MoveOutcome(S_WINS if s_wins else D_WINS)
    if isinstance(move, (OrSplitMove, AndSplitMove)):
        side = pos.left if isinstance(move, OrSplitMove) else pos.right
        if move.part1 | move.part2 != side:
            raise ValueError("split parts must cover the side")
        if move.r1 < 1 or move.r2 < 1 or move.r1 + move.r2 + 1 != r:
            raise ValueError(f"bad resource split ({move.r1}, {move.r2}) of {r}")
        if isinstance(move, OrSplitMove):
            succ = (
                GamePosition(move.r1, move.part1, pos.right, pos.modal_move_made),
                GamePosition(move.r2, move.part2, pos.right, pos.modal_move_made),
            )
        else:
            succ = (
                GamePosition(move.r1, pos.left, move.part1, pos.modal_move_made),
                GamePosition(move.r2, pos.left, move.part2, pos.modal_move_made),
            )
        return MoveOutcome(None, succ)
    k = move.grade
    if k >= r:
        raise ValueError(f"grade {k} needs resource above {r}")
    new_left: set[PointedProfile] = set()
    new_right: set[PointedProfile] = set()
    if isinstance(move, DiaGeqMove):
        _check_selection(move.left_selections, pos.left, k)
        _check_selection(move.right_selections, pos.right, n - k + 1)
        for pm, vec in move.left_selections:
            new_left.update(_touched(pm, vec))
        for pm, vec in move.right_selections:
            new_right.update(_touched(pm, vec))
        budget = r - k
    elif isinstance(move, BoxLtMove):
        _check_selection(move.left_selections, pos.left, n - k + 1)
        _check_selection(move.right_selections, pos.right, k)
        for pm, vec in move.left_selections:
            new_left.update(_touched(pm, vec))
        for pm, vec in move.right_selections:
            new_right.update(_touched(pm, vec))
        budget = r - k
    elif isinstance(move, DiaEqMove):
        _check_selection(move.left_selections, pos.left, k)
        _check_labelled(move.right_selections, pos.right, k + 1, n - k + 1)
        for pm, vec in move.left_selections:
            new_left.update(_touched(pm, vec))
            new_right.update(_touched(pm, _complement(pm.profile.counts, vec)))
        for pm, (label, vec) in move.right_selections:
            (new_left if label == "P" else new_right).update(_touched(pm, vec))
        budget = r - k - 1
    elif isinstance(move, BoxNeqMove):
        _check_labelled(move.left_selections, pos.left, k + 1, n - k + 1)
        _check_selection(move.right_selections, pos.right, k)
        for pm, vec in move.right_selections:
            new_right.update(_touched(pm, vec))
            new_left.update(_touched(pm, _complement(pm.profile.counts, vec)))
        for pm, (label, vec) in move.left_selections:
            (new_right if label == "P" else new_left).update(_touched(pm, vec))
        budget = r - k - 1
    else:
        raise TypeError(f"not a game move: {move!r}")
    return MoveOutcome(
        None,
        (GamePosition(budget, frozenset(new_left), frozenset(new_right), True),),
    )


class _Solver:
    """Memoized exact solver over bitmask-encoded positions.

    Pointed profiles of one domain size are indexed once; sides become
    int bitmasks.  Counting moves are enumerated by folding per-model
    contribution options with deduplication at every step, which keeps
    the branching at the level of distinct successor positions rather
    than distinct selections.
    """

    def __init__(self, vocab: Vocabulary, n: int, d: int):
        self.vocab = vocab
        self.n = n
        self.d = d
        self.pms = pointed_profiles(n, vocab)
        self.pm_index = {pm: i for i, pm in enumerate(self.pms)}
        self.lit_masks = []
        for sym in vocab.symbols:
            for positive in (True, False):
                types = vocab.literal_types(sym, positive)
                mask = 0
                for i, pm in enumerate(self.pms):
                    if pm.point_type in types:
                        mask |= 1 << i
                self.lit_masks.append(mask)
        self._bit: dict[tuple[tuple[int, ...], int], int] = {}
        for i, pm in enumerate(self.pms):
            self._bit[(pm.profile.counts, pm.point_type)] = 1 << i
        self._sel_cache: dict = {}
        self._pair_cache: dict = {}
        self.memo: dict = {}

    def encode(self, models) -> int:
        mask = 0
        for pm in models:
            mask |= 1 << self.pm_index[pm]
        return mask

    def _support_mask(self, counts: tuple[int, ...], types) -> int:
        mask = 0
        for i in types:
            mask |= self._bit[(counts, i)]
        return mask

    def _sel_masks(self, counts: tuple[int, ...], m: int) -> tuple[int, ...]:
        """Distinct contribution masks of m-point selections from a model."""
        key = (counts, m)
        if key not in self._sel_cache:
            if m < 0 or m > sum(counts):
                masks: tuple[int, ...] = ()
            elif m == 0:
                masks = (0,)
            else:
                supp = [i for i, c in enumerate(counts) if c > 0]
                found = set()
                for size in range(1, len(supp) + 1):
                    for types in combinations(supp, size):
                        if size <= m <= sum(counts[i] for i in types):
                            found.add(self._support_mask(counts, types))
                masks = tuple(sorted(found))
            self._sel_cache[key] = masks
        return self._sel_cache[key]

    def _sel_pairs(self, counts: tuple[int, ...], k: int):
        """Distinct (picked-mask, complement-mask) pairs of exact k-point picks."""
        key = (counts, k)
        if key not in self._pair_cache:
            pairs = set()
            for vec in _subvectors(counts, k):
                pmask = self._support_mask(
                    counts, (i for i, v in enumerate(vec) if v > 0)
                )
                nmask = self._support_mask(
                    counts, (i for i, (c, v) in enumerate(zip(counts, vec)) if c > v)
                )
                pairs.add((pmask, nmask))
            self._pair_cache[key] = tuple(sorted(pairs))
        return self._pair_cache[key]

    @staticmethod
    def _bits(mask: int):
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def _fold(self, option_lists) -> set[tuple[int, int]]:
        acc = {(0, 0)}
        for opts in option_lists:
            if not opts:
                return set()
            acc = {(a | x, b | y) for (a, b) in acc for (x, y) in opts}
        return acc

    def _threshold_successors(self, A: int, B: int, left_size: int, right_size: int):
        opts = []
        for i in self._bits(A):
            c = self.pms[i].profile.counts
            opts.append([(m, 0) for m in self._sel_masks(c, left_size)])
        for i in self._bits(B):
            c = self.pms[i].profile.counts
            opts.append([(0, m) for m in self._sel_masks(c, right_size)])
        return self._fold(opts)

    def _exact_successors(self, A: int, B: int, k: int, swapped: bool):
        """Exact-count successors; ``swapped`` runs the dual move."""
        n = self.n
        opts = []
        pick_side, choice_side = (B, A) if swapped else (A, B)
        for i in self._bits(pick_side):
            c = self.pms[i].profile.counts
            pairs = self._sel_pairs(c, k)
            if swapped:
                opts.append([(nm, pm) for (pm, nm) in pairs])
            else:
                opts.append(list(pairs))
        for i in self._bits(choice_side):
            c = self.pms[i].profile.counts
            here = [(m, 0) for m in self._sel_masks(c, k + 1)]
            here += [(0, m) for m in self._sel_masks(c, n - k + 1)]
            if swapped:
                here = [(b, a) for (a, b) in here]
            opts.append(here)
        return self._fold(opts)

    def win(self, r: int, A: int, B: int, modal_made: bool) -> bool:
        if A == 0 and B == 0:
            # with any budget left S makes a free grade-0 move, then a literal
            return r >= 1
        if r == 0:
            return False
        key = (r, A, B, modal_made)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        result = False
        if modal_made:
            for lm in self.lit_masks:
                if not (A & ~lm) and not (B & lm):
                    result = True
                    break
        n = self.n
        if not result:
            for k in range(0, min(self.d, r - 1) + 1):
                for A2, B2 in self._threshold_successors(A, B, k, n - k + 1):
                    if self.win(r - k, A2, B2, True):
                        result = True
                        break
                if result:
                    break
                for A2, B2 in self._threshold_successors(A, B, n - k + 1, k):
                    if self.win(r - k, A2, B2, True):
                        result = True
                        break
                if result:
                    break
        if not result:
            for k in range(0, min(self.d - 1, r - 1) + 1):
                for swapped in (False, True):
                    for A2, B2 in self._exact_successors(A, B, k, swapped):
                        if self.win(r - k - 1, A2, B2, True):
                            result = True
                            break
                    if result:
                        break
                if result:
                    break
        if not result and r >= 3:
            result = self._split_wins(r, A, B, modal_made)
        self.memo[key] = result
        return result

    def _split_wins(self, r: int, A: int, B: int, modal_made: bool) -> bool:
        for r1 in range(1, r - 1):
            r2 = r - 1 - r1
            sub = (A - 1) & A
            while sub:
                if self.win(r1, sub, B, modal_made) and self.win(
                    r2, A ^ sub, B, modal_made
                ):
                    return True
                sub = (sub - 1) & A
            sub = (B - 1) & B
            while sub:
                if self.win(r1, A, sub, modal_made) and self.win(
                    r2, A, B ^ sub, modal_made
                ):
                    return True
                sub = (sub - 1) & B
        return False


_solvers: dict = {}


def _solver_for(vocab: Vocabulary, n: int, d: int) -> _Solver:
    key = (vocab.symbols, n, d)
    if key not in _solvers:
        _solvers[key] = _Solver(vocab, n, d)
    return _solvers[key]


def _check_caps(pos: GamePosition, vocab: Vocabulary, caps: SearchCaps):
    if len(vocab.symbols) > caps.game_max_symbols:
        raise ScaleCapError(
            f"|tau|={len(vocab.symbols)} exceeds game cap {caps.game_max_symbols}"
        )
    if pos.resource > caps.game_max_resource:
        raise ScaleCapError(
            f"resource {pos.resource} exceeds game cap {caps.game_max_resource}"
        )
    if len(pos.left) + len(pos.right) > caps.game_max_models:
        raise ScaleCapError(
            f"{len(pos.left) + len(pos.right)} models exceed game cap "
            f"{caps.game_max_models}"
        )
    if pos.n is not None and pos.n > caps.game_max_n:
        raise ScaleCapError(f"domain size {pos.n} exceeds game cap {caps.game_max_n}")


def solve(
    pos: GamePosition, d: int, vocab: Vocabulary, caps: SearchCaps = DEFAULT_CAPS
) -> str:
    """Exact winner of the game from this starting position."""
    if d < 1:
        raise ValueError("counting depth must be at least 1")
    _check_caps(pos, vocab, caps)
    if pos.n is None:
        return S_WINS if pos.resource >= 1 else D_WINS
    solver = _solver_for(vocab, pos.n, d)
    won = solver.win(
        pos.resource, solver.encode(pos.left), solver.encode(pos.right),
        pos.modal_move_made,
    )
    return S_WINS if won else D_WINS


def _pm_json(pm: PointedProfile) -> dict:
    return {"counts": list(pm.profile.counts), "point_type": pm.point_type}


def _move_json(move: GameMove) -> dict:
    if isinstance(move, PropMove):
        return {"kind": "prop", "literal": format_formula(move.literal)}
    if isinstance(move, (OrSplitMove, AndSplitMove)):
        return {
            "kind": "or-split" if isinstance(move, OrSplitMove) else "and-split",
            "r1": move.r1,
            "r2": move.r2,
            "part1": [_pm_json(pm) for pm in _sorted_models(move.part1)],
            "part2": [_pm_json(pm) for pm in _sorted_models(move.part2)],
        }
    kinds = {
        DiaGeqMove: "<>=",
        BoxLtMove: "[]<",
        DiaEqMove: "<>==",
        BoxNeqMove: "[]!=",
    }

    def sel_json(sel):
        pm, choice = sel
        if isinstance(choice[0], str):
            return {"model": _pm_json(pm), "set": choice[0], "pick": list(choice[1])}
        return {"model": _pm_json(pm), "pick": list(choice)}

    return {
        "kind": kinds[type(move)],
        "grade": move.grade,
        "left_selections": [sel_json(s) for s in move.left_selections],
        "right_selections": [sel_json(s) for s in move.right_selections],
    }


def strategy_trace(
    pos: GamePosition, d: int, vocab: Vocabulary, caps: SearchCaps = DEFAULT_CAPS
) -> dict:
    """Winning strategy of S as a nested move tree, or the bare D verdict."""
    if solve(pos, d, vocab, caps) == D_WINS:
        return {"winner": D_WINS}

    def value(p: GamePosition) -> str:
        if p.n is None:
            return S_WINS if p.resource >= 1 else D_WINS
        solver = _solver_for(vocab, p.n, d)
        won = solver.win(
            p.resource, solver.encode(p.left), solver.encode(p.right),
            p.modal_move_made,
        )
        return S_WINS if won else D_WINS

    def rec(p: GamePosition) -> dict:
        node = {
            "resource": p.resource,
            "left": [_pm_json(pm) for pm in _sorted_models(p.left)],
            "right": [_pm_json(pm) for pm in _sorted_models(p.right)],
        }
        for move in legal_moves(p, d, vocab):
            outcome = apply_move(p, move, vocab)
            if outcome.winner == S_WINS:
                node["move"] = _move_json(move)
                node["winner"] = S_WINS
                return node
            if outcome.winner is None and all(
                value(q) == S_WINS for q in outcome.positions
            ):
                node["move"] = _move_json(move)
                node["children"] = [rec(q) for q in outcome.positions]
                return node
        raise AssertionError("no winning move found at a position S wins")

    return rec(pos)


def _trivial_truth(vocab: Vocabulary) -> Formula:
    """A size-1 tautology: at least zero points satisfy the first symbol."""
    return DiamondGeq(0, Lit(vocab.symbols[0], True))


@dataclass(frozen=True)
class GameFormulaCheck:
    """Agreement between the game value and the separating-formula search."""

    resource: int
    winner: str
    separating_size: int | None
    formula: Formula | None
    agree: bool

    @property
    def formula_text(self) -> str | None:
        return None if self.formula is None else format_formula(self.formula)


def check_game_formula_equivalence(
    resource: int,
    left,
    right,
    d: int,
    vocab: Vocabulary,
    caps: SearchCaps = DEFAULT_CAPS,
) -> GameFormulaCheck:
    """S wins at this budget iff a separating formula of that size exists."""
    pos = GamePosition(resource, frozenset(left), frozenset(right), False)
    winner = solve(pos, d, vocab, caps)
    if pos.n is None:
        found = (1, _trivial_truth(vocab)) if resource >= 1 else None
    else:
        found = minimal_separating_size(
            vocab,
            d,
            pos.n,
            [pm.profile for pm in pos.left],
            [pm.profile for pm in pos.right],
            resource,
        )
    agree = (winner == S_WINS) == (found is not None)
    return GameFormulaCheck(
        resource,
        winner,
        found[0] if found else None,
        found[1] if found else None,
        agree,
    )
