import pytest

from gmlu.config import ScaleCapError
from gmlu.game import (
    D_WINS,
    DiaGeqMove,
    GamePosition,
    OrSplitMove,
    PropMove,
    S_WINS,
    apply_move,
    check_game_formula_equivalence,
    legal_moves,
    solve,
    strategy_trace,
)
from gmlu.formulas import Lit
from gmlu.models import ModelProfile, PointedProfile, pointed_profiles
from gmlu.vocab import Vocabulary

from oracles import LabeledGame, counts_of

V1 = Vocabulary(("p",))


def pp(counts, point):
    return PointedProfile(ModelProfile(counts), point)


ALL_P = pp((2, 0), 0)
MIXED_P = pp((1, 1), 0)
MIXED_NOT_P = pp((1, 1), 1)


def test_resource_zero_loses():
    pos = GamePosition(0, frozenset({ALL_P}), frozenset({MIXED_P}))
    assert solve(pos, 1, V1) == D_WINS


def test_spec_example_box_lt_one():
    pos = GamePosition(2, frozenset({ALL_P}), frozenset({MIXED_P}))
    assert solve(pos, 1, V1) == S_WINS
    assert solve(GamePosition(1, pos.left, pos.right), 1, V1) == D_WINS


def test_same_model_both_sides_is_duplicator_win():
    for r in range(7):
        pos = GamePosition(r, frozenset({MIXED_P}), frozenset({MIXED_NOT_P}))
        assert solve(pos, 2, V1) == D_WINS


def test_same_model_lemma_sweep():
    """Propositionally equivalent pointed versions of one profile on both
    sides lose for S, whatever else the position holds."""
    for n in (2, 3):
        for pm in pointed_profiles(n, V1):
            extra = pointed_profiles(n, V1)[0]
            for d in (1, 2):
                for r in range(0, 7):
                    pos = GamePosition(
                        r, frozenset({pm, extra}), frozenset({pm})
                    )
                    assert solve(pos, d, V1) == D_WINS, (pm, d, r)


def test_no_prop_moves_before_modal_move():
    pos = GamePosition(1, frozenset({ALL_P}), frozenset())
    moves = legal_moves(pos, 1, V1)
    assert not any(isinstance(m, PropMove) for m in moves)
    after = GamePosition(1, frozenset({ALL_P}), frozenset(), modal_move_made=True)
    assert any(isinstance(m, PropMove) for m in legal_moves(after, 1, V1))


def test_legal_moves_rejects_resource_zero():
    with pytest.raises(ValueError):
        legal_moves(GamePosition(0, frozenset({ALL_P}), frozenset()), 1, V1)


def test_dia_geq_move_includes_singleton_selections():
    pos = GamePosition(2, frozenset({ALL_P}), frozenset({MIXED_P}))
    dia = [m for m in legal_moves(pos, 1, V1) if isinstance(m, DiaGeqMove)]
    grades = {m.grade for m in dia}
    assert 1 in grades  # k=0 needs n+1 points on the right, so only k=1


def test_apply_prop_move():
    pos = GamePosition(
        1, frozenset({ALL_P}), frozenset({MIXED_NOT_P}), modal_move_made=True
    )
    assert apply_move(pos, PropMove(Lit("p", True)), V1).winner == S_WINS
    assert apply_move(pos, PropMove(Lit("p", False)), V1).winner == D_WINS


def test_apply_or_split_returns_both_positions():
    a, b = pp((3, 0), 0), pp((1, 2), 0)
    pos = GamePosition(5, frozenset({a, b}), frozenset({pp((2, 1), 0)}))
    move = OrSplitMove(frozenset({a}), frozenset({b}), 2, 2)
    outcome = apply_move(pos, move, V1)
    assert outcome.winner is None and len(outcome.positions) == 2
    assert {p.resource for p in outcome.positions} == {2}
    assert {frozenset(p.left) for p in outcome.positions} == {
        frozenset({a}), frozenset({b}),
    }


def test_apply_dia_geq_decrements_resource_by_grade():
    pos = GamePosition(4, frozenset({ALL_P}), frozenset({MIXED_P}))
    move = DiaGeqMove(
        1,
        left_selections=((ALL_P, (1, 0)),),
        right_selections=((MIXED_P, (1, 1)),),
    )
    outcome = apply_move(pos, move, V1)
    (nxt,) = outcome.positions
    assert nxt.resource == 3
    assert nxt.modal_move_made
    assert nxt.left == frozenset({pp((2, 0), 0)})
    assert nxt.right == frozenset({pp((1, 1), 0), pp((1, 1), 1)})


def test_apply_move_validates_selection():
    pos = GamePosition(4, frozenset({ALL_P}), frozenset({MIXED_P}))
    bad = DiaGeqMove(
        1, left_selections=((ALL_P, (0, 1)),), right_selections=((MIXED_P, (1, 1)),)
    )
    with pytest.raises(ValueError):
        apply_move(pos, bad, V1)


def test_every_legal_move_applies():
    pos = GamePosition(4, frozenset({ALL_P, MIXED_P}), frozenset({MIXED_NOT_P}))
    for move in legal_moves(pos, 2, V1):
        outcome = apply_move(pos, move, V1)
        assert outcome.winner in (None, S_WINS, D_WINS)


def test_monotone_in_resource():
    pms = pointed_profiles(2, V1) + pointed_profiles(3, V1)
    seen = []
    for n in (2, 3):
        for a in pointed_profiles(n, V1):
            for b in pointed_profiles(n, V1):
                wins = [
                    solve(GamePosition(r, frozenset({a}), frozenset({b})), 1, V1)
                    for r in range(0, 6)
                ]
                seen.append(wins)
                # once S wins, S keeps winning with more budget
                for lo, hi in zip(wins, wins[1:]):
                    assert not (lo == S_WINS and hi == D_WINS)
    assert any(S_WINS in w for w in seen)


def test_empty_sides():
    assert solve(GamePosition(1, frozenset(), frozenset()), 1, V1) == S_WINS
    assert solve(GamePosition(0, frozenset(), frozenset()), 1, V1) == D_WINS
    # one empty side: a constant formula separates at size 1
    assert solve(GamePosition(1, frozenset({ALL_P}), frozenset()), 1, V1) == S_WINS
    assert solve(GamePosition(1, frozenset(), frozenset({ALL_P})), 1, V1) == S_WINS


def test_caps():
    big = frozenset({pp((5, 0), 0)})
    with pytest.raises(ScaleCapError):
        solve(GamePosition(2, big, frozenset()), 1, V1)
    with pytest.raises(ScaleCapError):
        solve(GamePosition(9, frozenset({ALL_P}), frozenset()), 1, V1)


def test_equivalence_check_spec_example():
    chk = check_game_formula_equivalence(2, {ALL_P}, {MIXED_P}, 1, V1)
    assert chk.agree and chk.winner == S_WINS and chk.separating_size == 2
    chk = check_game_formula_equivalence(1, {ALL_P}, {MIXED_P}, 1, V1)
    assert chk.agree and chk.winner == D_WINS and chk.separating_size is None
    chk = check_game_formula_equivalence(6, {MIXED_P}, {MIXED_P}, 2, V1)
    assert chk.agree and chk.winner == D_WINS


def test_found_separating_formulas_really_separate():
    from gmlu.formulas import counting_depth, size
    from gmlu.models import evaluate

    for n in (2, 3):
        pms = pointed_profiles(n, V1)
        for a in pms:
            for b in pms:
                for d in (1, 2):
                    chk = check_game_formula_equivalence(5, {a}, {b}, d, V1)
                    assert chk.agree
                    if chk.formula is not None:
                        assert size(chk.formula) == chk.separating_size <= 5
                        assert counting_depth(chk.formula) <= d
                        assert evaluate(a.profile, chk.formula, V1)
                        assert not evaluate(b.profile, chk.formula, V1)


def test_trace_of_winning_strategy():
    pos = GamePosition(2, frozenset({ALL_P}), frozenset({MIXED_P}))
    trace = strategy_trace(pos, 1, V1)
    assert trace["move"]["kind"] in ("<>=", "[]<", "<>==", "[]!=")
    child = trace["children"][0]
    assert child["move"]["kind"] == "prop" and child["winner"] == S_WINS
    lost = strategy_trace(GamePosition(1, pos.left, pos.right), 1, V1)
    assert lost == {"winner": D_WINS}


def test_solver_matches_labeled_game():
    """Type-count canonicalization is sound: the solver agrees with a game
    played on labeled models with explicit point sets."""
    n, d = 2, 1
    game = LabeledGame(n, d, V1)
    assignments = [(0, 0), (0, 1), (1, 1)]
    for a_assign in assignments:
        for b_assign in assignments:
            for a_pt in range(n):
                for b_pt in range(n):
                    for r in range(0, 4):
                        labeled = game.spoiler_wins(
                            r,
                            frozenset({(a_assign, a_pt)}),
                            frozenset({(b_assign, b_pt)}),
                            False,
                        )
                        pos = GamePosition(
                            r,
                            frozenset({pp(counts_of(a_assign, 2), a_assign[a_pt])}),
                            frozenset({pp(counts_of(b_assign, 2), b_assign[b_pt])}),
                        )
                        assert (solve(pos, d, V1) == S_WINS) == labeled, (
                            a_assign, b_assign, a_pt, b_pt, r,
                        )


def test_solver_matches_labeled_game_n3_spots():
    n = 3
    cases = [
        ((0, 0, 0), 0, (0, 0, 1), 0),
        ((0, 0, 1), 2, (0, 1, 1), 1),
        ((0, 1, 1), 0, (1, 1, 1), 0),
        ((0, 0, 1), 0, (0, 1, 0), 1),
    ]
    for d in (1, 2):
        game = LabeledGame(n, d, V1)
        for a_assign, a_pt, b_assign, b_pt in cases:
            for r in range(0, 5):
                labeled = game.spoiler_wins(
                    r,
                    frozenset({(a_assign, a_pt)}),
                    frozenset({(b_assign, b_pt)}),
                    False,
                )
                pos = GamePosition(
                    r,
                    frozenset({pp(counts_of(a_assign, 2), a_assign[a_pt])}),
                    frozenset({pp(counts_of(b_assign, 2), b_assign[b_pt])}),
                )
                assert (solve(pos, d, V1) == S_WINS) == labeled, (
                    d, a_assign, b_assign, r,
                )


def test_game_recovers_exact_description_complexity():
    """Independent route to the exact complexity: the least budget at which
    S separates a class representative from every other class equals the
    brute-force search value."""
    from gmlu.classes import enumerate_admissible
    from gmlu.complexity import exact_complexity, representative_profile, upper_bound

    for n in (1, 2, 3):
        for d in (1, 2):
            tuples = enumerate_admissible(n, d, V1)
            reps = {tup: representative_profile(tup) for tup in tuples}

            def pointed(profile):
                return PointedProfile(profile, profile.realized_types()[0])

            for tup in tuples:
                others = frozenset(
                    pointed(reps[other]) for other in tuples if other != tup
                )
                if 1 + len(others) > 4:
                    continue  # game cap on models per position
                mine = frozenset({pointed(reps[tup])})
                limit = upper_bound(tup, V1).value
                via_game = next(
                    r
                    for r in range(1, limit + 1)
                    if solve(GamePosition(r, mine, others), d, V1) == S_WINS
                )
                assert via_game == exact_complexity(tup, V1), (n, d, tup)


def test_solver_matches_slow_reference():
    """The bitmask solver and a reference built purely from legal_moves and
    apply_move agree on every tiny position."""

    def slow(pos: GamePosition, d: int, memo) -> bool:
        key = (pos.resource, pos.left, pos.right, pos.modal_move_made)
        if key in memo:
            return memo[key]
        if not pos.left and not pos.right:
            memo[key] = pos.resource >= 1
            return memo[key]
        if pos.resource == 0:
            memo[key] = False
            return False
        result = False
        for move in legal_moves(pos, d, V1):
            outcome = apply_move(pos, move, V1)
            if outcome.winner == S_WINS:
                result = True
            elif outcome.winner is None and all(
                slow(q, d, memo) for q in outcome.positions
            ):
                result = True
            if result:
                break
        memo[key] = result
        return result

    memo = {}
    pms = pointed_profiles(2, V1)
    for a in [frozenset(), *({pm} for pm in pms)]:
        for b in [frozenset(), *({pm} for pm in pms)]:
            for r in range(0, 5):
                pos = GamePosition(r, frozenset(a), frozenset(b))
                assert (solve(pos, 2, V1) == S_WINS) == slow(pos, 2, memo), (a, b, r)
