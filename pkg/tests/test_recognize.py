import math

import numpy as np
import pytest

from chessrec import board as cb
from chessrec import recognize as rec
from chessrec.board import Color, Move, MoveKind, PieceKind
from chessrec.simulate import NoiseModel, observe

from conftest import NOISELESS, make_observation, quiet_positions, random_game_samples

SQ = cb.parse_square


# ---------------------------------------------------------------------------
# score_move


def test_score_quiet_move_hand_value(initial_state):
    obs = make_observation(occupancy={SQ("e2"): 0.1, SQ("e4"): 0.8})
    move = cb.move_from_uci(initial_state, "e2e4")
    score = rec.score_move(move, obs, initial_state)
    assert score == pytest.approx(math.sqrt(0.9 * 0.8), abs=1e-12)


def test_score_capture_hand_value():
    prev = cb.from_fen("4k3/8/8/4p1p1/8/5N2/8/4K3 w - - 0 1")
    move = cb.move_from_uci(prev, "f3e5")
    obs = make_observation(
        occupancy={SQ("f3"): 0.1, SQ("e5"): 0.8},
        color={SQ("e5"): 0.7},
    )
    score = rec.score_move(move, obs, prev)
    assert score == pytest.approx((0.9 * 0.8 * 0.7) ** (1 / 3), abs=1e-12)


def test_score_castle_unanimity():
    prev = cb.from_fen("4k3/8/8/8/8/8/8/4K2R w K - 0 1")
    move = cb.move_from_uci(prev, "e1g1")
    obs = make_observation(
        occupancy={SQ("e1"): 0.0, SQ("h1"): 0.0, SQ("g1"): 1.0, SQ("f1"): 1.0}
    )
    assert rec.score_move(move, obs, prev) == pytest.approx(1.0, abs=1e-12)


def test_score_en_passant_three_factors():
    prev = cb.from_fen("rnbqkbnr/ppp1p1pp/8/3pPp2/8/8/PPPP1PPP/RNBQKBNR w KQkq f6 0 3")
    move = cb.move_from_uci(prev, "e5f6")
    obs = make_observation(
        occupancy={SQ("e5"): 0.2, SQ("f6"): 0.9, SQ("f5"): 0.1}
    )
    assert rec.score_move(move, obs, prev) == pytest.approx(
        (0.8 * 0.9 * 0.9) ** (1 / 3), abs=1e-12
    )


def test_score_illegal_move_rejected(initial_state):
    obs = make_observation()
    with pytest.raises(cb.IllegalMoveError):
        rec.score_move(Move(SQ("e2"), SQ("e5")), obs, initial_state)


def test_score_monotone_in_each_factor(initial_state):
    move = cb.move_from_uci(initial_state, "e2e4")
    base = rec.score_move(
        move, make_observation(occupancy={SQ("e2"): 0.4, SQ("e4"): 0.6}), initial_state
    )
    more_empty = rec.score_move(
        move, make_observation(occupancy={SQ("e2"): 0.3, SQ("e4"): 0.6}), initial_state
    )
    more_occupied = rec.score_move(
        move, make_observation(occupancy={SQ("e2"): 0.4, SQ("e4"): 0.7}), initial_state
    )
    assert more_empty > base
    assert more_occupied > base


def test_geometric_mean_argmax_invariant_under_common_scaling():
    rng = np.random.default_rng(0)
    for _ in range(50):
        arity = int(rng.integers(2, 5))
        sets = rng.uniform(0.05, 1.0, size=(6, arity))
        for c in (0.5, 0.25, 1.0):
            base = [rec._geometric_mean(list(fs)) for fs in sets]
            scaled = [rec._geometric_mean(list(c * fs)) for fs in sets]
            assert int(np.argmax(base)) == int(np.argmax(scaled))


# ---------------------------------------------------------------------------
# sd / esd


def test_sd_noiseless_exact(initial_state):
    obs = observe(initial_state, NOISELESS, 0)
    pred = rec.sd_recognize(obs)
    assert pred.predicted_placement == initial_state.board
    assert pred.predicted_move is None and pred.score is None
    assert pred.invocations == rec.InvocationCounts(type=64)


def test_sd_single_flip_costs_one_square(initial_state):
    obs = observe(initial_state, NOISELESS, 0)
    types = obs.types.copy()
    wrong = np.zeros(13)
    wrong[12] = 1.0  # call a1 a black king
    types[0] = wrong
    flipped = type(obs)(occupancy=obs.occupancy, color=obs.color, types=types)
    pred = rec.sd_recognize(flipped)
    matches = sum(1 for a, b in zip(pred.predicted_placement, initial_state.board) if a == b)
    assert matches == 63


def test_esd_noiseless_counts(initial_state):
    obs = observe(initial_state, NOISELESS, 0)
    pred = rec.esd_recognize(obs)
    assert pred.predicted_placement == initial_state.board
    assert pred.invocations == rec.InvocationCounts(occupancy=64, color=32, type=32)


def test_esd_color_restriction_beats_sd_on_cross_color_confusion():
    # a stream of noisy boards: esd square accuracy should not fall below sd's
    samples = random_game_samples(60, first_seed=50, noise_seed=3)
    sd_preds, esd_preds, truths = [], [], []
    for _, obs, truth, _ in samples:
        sd_preds.append(rec.sd_recognize(obs))
        esd_preds.append(rec.esd_recognize(obs))
        truths.append(truth)
    sd_metrics = rec.evaluate(sd_preds, truths)
    esd_metrics = rec.evaluate(esd_preds, truths)
    assert esd_metrics["square_accuracy_mean"] >= sd_metrics["square_accuracy_mean"]


# ---------------------------------------------------------------------------
# ia


def test_ia_noiseless_finds_the_move(initial_state):
    move = cb.move_from_uci(initial_state, "e2e4")
    after = cb.apply_move(initial_state, move)
    pred = rec.ia_recognize(initial_state, observe(after, NOISELESS, 0))
    assert pred.predicted_move == move
    assert pred.predicted_placement == after.board


def test_ia_capture_stays_legal_even_when_wrong():
    prev = cb.from_fen("4k3/8/8/4p1p1/8/5N2/8/4K3 w - - 0 1")
    true_move = cb.move_from_uci(prev, "f3g5")
    after = cb.apply_move(prev, true_move)
    pred = rec.ia_recognize(prev, observe(after, NOISELESS, 0))
    assert pred.predicted_move in cb.legal_moves(prev)


def test_ia_tie_breaks_to_smaller_origin(initial_state):
    obs = make_observation()  # everything 0.5: total tie
    pred = rec.ia_recognize(initial_state, obs)
    candidates = {m.origin for m in cb.legal_moves(initial_state)}
    assert pred.predicted_move.origin == min(candidates)
    dests = {
        m.destination
        for m in cb.legal_moves(initial_state)
        if m.origin == pred.predicted_move.origin
    }
    assert pred.predicted_move.destination == min(dests)


def test_ia_invocation_formula(initial_state):
    move = cb.move_from_uci(initial_state, "e2e4")
    after = cb.apply_move(initial_state, move)
    pred = rec.ia_recognize(initial_state, observe(after, NOISELESS, 0))
    moves = cb.legal_moves(initial_state)
    candidates = {m.origin for m in moves}
    dests = {m.destination for m in moves if m.origin == pred.predicted_move.origin}
    assert pred.invocations.occupancy == len(candidates) + len(dests)
    assert pred.invocations.color == 0 and pred.invocations.type == 0


def test_ia_game_over():
    mate = cb.from_fen("rnb1kbnr/pppp1ppp/8/4p3/6Pq/5P2/PPPPP2P/RNBQKBNR w KQkq - 1 3")
    with pytest.raises(rec.GameOverError):
        rec.ia_recognize(mate, make_observation())


# ---------------------------------------------------------------------------
# cpa


def test_cpa_matches_brute_force_argmax(initial_state):
    move = cb.move_from_uci(initial_state, "e2e4")
    after = cb.apply_move(initial_state, move)
    obs = observe(after, NOISELESS, 0)
    pred = rec.cpa_recognize(initial_state, obs)

    def brute_score(m):
        return math.sqrt((1 - obs.occupancy[m.origin]) * obs.occupancy[m.destination])

    best = max(cb.legal_moves(initial_state), key=lambda m: (brute_score(m), -m.origin, -m.destination))
    assert pred.predicted_move == best == move
    assert pred.score == pytest.approx(brute_score(move), abs=1e-12)


def test_cpa_total_tie_takes_first_legal_move(initial_state):
    obs = make_observation()  # all occupancies 0.5
    pred = rec.cpa_recognize(initial_state, obs)
    assert pred.predicted_move == cb.legal_moves(initial_state)[0]
    assert pred.score == pytest.approx(0.5, abs=1e-12)


def test_cpa_beats_ia_on_adversarial_observation(initial_state):
    # decoy origin d2 looks slightly more emptied than the true origin e2,
    # but no destination of d2 looks occupied; the joint argmax recovers e2e4
    true_move = cb.move_from_uci(initial_state, "e2e4")
    obs = make_observation(
        occupancy={SQ("d2"): 0.03, SQ("e2"): 0.05, SQ("e4"): 0.9},
        base_occ=0.1,
    )
    ia_pred = rec.ia_recognize(initial_state, obs)
    cpa_pred = rec.cpa_recognize(initial_state, obs)
    assert ia_pred.predicted_move.origin == SQ("d2")
    assert ia_pred.predicted_move != true_move
    assert cpa_pred.predicted_move == true_move


def test_ia_invocations_never_exceed_cpa():
    for prev, obs, _, _ in random_game_samples(80, first_seed=70, noise_seed=9):
        ia = rec.ia_recognize(prev, obs).invocations
        cpa = rec.cpa_recognize(prev, obs).invocations
        assert ia <= cpa


# ---------------------------------------------------------------------------
# cps


def test_cps_disambiguates_captures_with_color():
    # knight can take either pawn; both destinations read occupied, so cpa
    # ties and falls to lexicographic order while cps reads the color
    prev = cb.from_fen("4k3/8/8/4p1p1/8/5N2/8/4K3 w - - 0 1")
    true_move = cb.move_from_uci(prev, "f3g5")
    obs = observe(cb.apply_move(prev, true_move), NOISELESS, 0)
    cps_pred = rec.cps_recognize(prev, obs)
    cpa_pred = rec.cpa_recognize(prev, obs)
    assert cps_pred.predicted_move == true_move
    assert cpa_pred.predicted_move == cb.move_from_uci(prev, "f3e5")  # tie-break victim
    assert cps_pred.invocations.color >= 1


def test_cps_selects_castle_over_quiet_king_step():
    prev = cb.from_fen("4k3/8/8/8/8/8/8/4K2R w K - 0 1")
    castle = cb.move_from_uci(prev, "e1g1")
    obs = observe(cb.apply_move(prev, castle), NOISELESS, 0)
    cps_pred = rec.cps_recognize(prev, obs)
    assert cps_pred.predicted_move == castle
    # cpa sees only the king squares and ties with Kf1, which sorts first
    cpa_pred = rec.cpa_recognize(prev, obs)
    assert cpa_pred.predicted_move == cb.move_from_uci(prev, "e1f1")


def test_cps_equals_cpa_without_special_moves():
    noise = NoiseModel(seed=13)
    for i, prev in enumerate(quiet_positions(40, seed=5)):
        obs = observe(prev, noise, ply_seed=i)
        assert rec.cps_recognize(prev, obs) == rec.cpa_recognize(prev, obs)


def test_cps_en_passant_recognized():
    prev = cb.from_fen("rnbqkbnr/ppp1p1pp/8/3pPp2/8/8/PPPP1PPP/RNBQKBNR w KQkq f6 0 3")
    ep = cb.move_from_uci(prev, "e5f6")
    obs = observe(cb.apply_move(prev, ep), NOISELESS, 0)
    assert rec.cps_recognize(prev, obs).predicted_move == ep


def test_cps_promotion_prefers_type_mass(initial_state):
    prev = cb.from_fen("3n3k/4P3/8/8/8/8/8/4K3 w - - 0 1")
    promo = next(
        m for m in cb.legal_moves(prev)
        if m.destination == SQ("e8") and m.promotion is PieceKind.KNIGHT
    )
    after = cb.apply_move(prev, promo)
    obs = observe(after, NOISELESS, 0)
    pred = rec.cps_recognize(prev, obs)
    assert pred.predicted_move == promo  # the type signal names the knight
    assert pred.invocations.type >= 1


# ---------------------------------------------------------------------------
# tk


def test_tk64_equals_cps_and_tk1_degenerates():
    for prev, obs, _, _ in random_game_samples(50, first_seed=90, noise_seed=10):
        cps_pred = rec.cps_recognize(prev, obs)
        assert rec.topk_recognize(64, prev, obs) == cps_pred
        tk1 = rec.topk_recognize(1, prev, obs)
        probe_best = max(
            sorted({m.origin for m in cb.legal_moves(prev)}),
            key=lambda sq: (1 - obs.occupancy[sq], -sq),
        )
        assert tk1.predicted_move.origin == probe_best


def test_tk_invocations_monotone_in_k():
    for prev, obs, _, _ in random_game_samples(60, first_seed=120, noise_seed=11):
        cps_counts = rec.cps_recognize(prev, obs).invocations
        previous = None
        for k in (2, 3, 4, 5):
            counts = rec.topk_recognize(k, prev, obs).invocations
            assert counts <= cps_counts
            if previous is not None:
                assert previous <= counts
            previous = counts


def test_tk_accuracy_approaches_cps():
    samples = random_game_samples(
        250, first_seed=300, noise_seed=12, capture_weight=6.0, castle_weight=6.0
    )
    truths = [truth for _, _, truth, _ in samples]
    accuracy = {}
    for k in (2, 3, 4, 5):
        preds = [rec.topk_recognize(k, prev, obs) for prev, obs, _, _ in samples]
        accuracy[k] = rec.evaluate(preds, truths)["board_accuracy"]
    cps_acc = rec.evaluate(
        [rec.cps_recognize(prev, obs) for prev, obs, _, _ in samples], truths
    )["board_accuracy"]
    for k in (2, 3, 4, 5):
        assert accuracy[k] <= cps_acc + 0.02
    assert accuracy[5] >= cps_acc - 0.02


def test_domain_aware_predictions_always_legal():
    for prev, obs, _, _ in random_game_samples(60, first_seed=400, noise_seed=13,
                                               capture_weight=4.0):
        legal = cb.legal_moves(prev)
        for pred in (
            rec.ia_recognize(prev, obs),
            rec.cpa_recognize(prev, obs),
            rec.cps_recognize(prev, obs),
            rec.topk_recognize(3, prev, obs),
        ):
            assert pred.predicted_move in legal
            assert 0.0 <= pred.score <= 1.0


# ---------------------------------------------------------------------------
# evaluate


def test_evaluate_identical_is_perfect(initial_state):
    pred = rec.Prediction(predicted_placement=initial_state.board)
    metrics = rec.evaluate([pred], [initial_state])
    assert metrics["board_accuracy"] == 1.0
    assert metrics["square_accuracy_mean"] == 1.0


def test_evaluate_one_wrong_square_arithmetic(initial_state):
    placement = list(initial_state.board)
    placement[0] = cb.EMPTY
    preds = [
        rec.Prediction(predicted_placement=initial_state.board),
        rec.Prediction(predicted_placement=tuple(placement)),
    ]
    metrics = rec.evaluate(preds, [initial_state, initial_state])
    assert metrics["board_accuracy"] == 0.5
    assert metrics["square_accuracy_mean"] == pytest.approx((1 + 63 / 64) / 2)


def test_evaluate_board_accuracy_matches_independence_model():
    # with error rate e per square, exact-board probability is (1-e)^64
    rng = np.random.default_rng(17)
    e = 0.01
    truth = cb.BoardState.initial()
    preds = []
    for _ in range(4000):
        placement = list(truth.board)
        for sq in range(64):
            if rng.random() < e:
                placement[sq] = (placement[sq] + 1) % 13
        preds.append(rec.Prediction(predicted_placement=tuple(placement)))
    metrics = rec.evaluate(preds, [truth] * 4000)
    expected = (1 - e) ** 64
    assert metrics["board_accuracy"] == pytest.approx(expected, abs=0.035)


def test_evaluate_length_mismatch(initial_state):
    with pytest.raises(ValueError):
        rec.evaluate([], [initial_state])


def test_evaluate_move_accuracy(initial_state):
    move = cb.move_from_uci(initial_state, "e2e4")
    after = cb.apply_move(initial_state, move)
    pred = rec.ia_recognize(initial_state, observe(after, NOISELESS, 0))
    metrics = rec.evaluate([pred], [after], true_moves=[move])
    assert metrics["move_accuracy"] == 1.0


def test_prediction_score_move_coupling(initial_state):
    with pytest.raises(ValueError):
        rec.Prediction(predicted_placement=initial_state.board, score=0.5)


def test_recognizer_config_parsing():
    assert rec.RecognizerConfig.parse("tk-3").name == "tk-3"
    assert rec.RecognizerConfig.parse("cps").name == "cps"
    with pytest.raises(ValueError):
        rec.RecognizerConfig.parse("tk-0")
    with pytest.raises(ValueError):
        rec.RecognizerConfig.parse("nope")
