"""Quantum strategy evaluation: Born behaviors, correlators, the ternary
GHZ reference strategy, and noise curves."""

import itertools
import json
import math

import numpy as np
import pytest

from lingame.algebra import AbelianGroup
from lingame.errors import GameFormatError, ValidationError
from lingame.games import (Behavior, chsh_game, make_game, mermin_ghz3_game,
                           success_probability)
from lingame.strategies import (NoisyState, QuantumStrategy, correlators,
                                ghz3_reference_strategy, load_strategy,
                                noisy_success, parse_strategy_file,
                                strategy_behavior, success_from_correlators)

from oracles import behavior_from_full_correlators

Z2 = AbelianGroup((2,))
Z3 = AbelianGroup((3,))


def _random_behavior(rng, group, questions, players):
    g = group.size
    rows = 1
    for q in questions:
        rows *= q
    table = rng.random((rows, g**players))
    table /= table.sum(axis=1, keepdims=True)
    return Behavior(group, questions, table)


def _random_strategy(rng, dims, questions, outcomes):
    def random_basis(dim):
        gauss = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        q, _ = np.linalg.qr(gauss)
        return [q[:, o] for o in range(dim)]

    state = rng.normal(size=math.prod(dims)) \
        + 1j * rng.normal(size=math.prod(dims))
    state /= np.linalg.norm(state)
    measurements = [[random_basis(d)[:outcomes] if d == outcomes
                     else random_basis(d)
                     for _ in range(q)]
                    for d, q in zip(dims, questions)]
    return QuantumStrategy(dims, state, measurements)


# ---------------------------------------------------------------------------
# Construction and validation


def test_state_norm_validated():
    with pytest.raises(ValidationError):
        QuantumStrategy((2,), np.array([1.0, 1.0]), [[
            [np.array([1, 0]), np.array([0, 1])]]])


def test_density_matrix_validated():
    eye = np.eye(4) / 4
    meas = [[[np.array([1, 0]), np.array([0, 1])]]] * 2
    QuantumStrategy((2, 2), eye, meas)
    with pytest.raises(ValidationError):
        QuantumStrategy((2, 2), np.eye(4), meas)  # trace 4
    skew = eye.copy()
    skew[0, 1] = 0.3
    with pytest.raises(ValidationError):
        QuantumStrategy((2, 2), skew, meas)  # not Hermitian


def test_invalid_projectors_name_player_and_question():
    v0 = np.array([1, 0])
    bad = np.array([1, 1]) / math.sqrt(2)
    meas = [
        [[v0, np.array([0, 1])], [v0, bad]],  # question 1 not orthogonal
        [[v0, np.array([0, 1])], [v0, np.array([0, 1])]],
    ]
    with pytest.raises(ValidationError) as err:
        QuantumStrategy((2, 2), np.array([1, 0, 0, 0], dtype=complex), meas)
    assert "(0, 1)" in str(err.value)


def test_incomplete_family_rejected():
    v0 = np.array([1, 0, 0])
    v1 = np.array([0, 1, 0])
    # third outcome repeats v0: sums to a rank-2 operator, not identity
    meas = [[[v0, v1, v0]]]
    with pytest.raises(ValidationError):
        QuantumStrategy((3,), np.array([1, 0, 0], dtype=complex), meas)


def test_measurement_count_must_match_players():
    with pytest.raises(ValidationError):
        QuantumStrategy((2, 2), np.array([1, 0, 0, 0], dtype=complex),
                        [[[np.array([1, 0]), np.array([0, 1])]]])


def test_rank_two_projector_matrix_accepted():
    meas = [[[np.eye(2), np.zeros((2, 2))]]]
    strategy = QuantumStrategy((2,), np.array([0, 1], dtype=complex), meas)
    assert not strategy.rank_one


# ---------------------------------------------------------------------------
# Born behaviors


def test_product_state_computational_deterministic():
    basis = [np.array([1, 0]), np.array([0, 1])]
    meas = [[basis, basis], [basis, basis]]
    strategy = QuantumStrategy((2, 2), np.array([1, 0, 0, 0], dtype=complex),
                               meas)
    game = chsh_game(2, 2)
    behavior = strategy_behavior(strategy, game)
    for x in game.inputs():
        assert behavior.prob(((0,), (0,)), x) == pytest.approx(1.0)


def test_maximally_mixed_gives_uniform_behavior():
    strategy = ghz3_reference_strategy()
    mixed = QuantumStrategy((3, 3, 3), np.eye(27) / 27,
                            strategy.measurements())
    game = mermin_ghz3_game()
    behavior = strategy_behavior(mixed, game)
    assert np.abs(behavior.table - 1 / 27).max() < 1e-12


def test_strategy_game_compatibility_checked():
    strategy = ghz3_reference_strategy()
    with pytest.raises(ValidationError):
        strategy_behavior(strategy, chsh_game(2, 2))
    with pytest.raises(ValidationError):
        strategy_behavior(strategy, chsh_game(3, 2))


def test_born_behaviors_are_non_signaling():
    rng = np.random.default_rng(149)
    game = make_game(Z2, (2, 2),
                     [int(v) for v in rng.integers(0, 2, size=4)])
    strategy = _random_strategy(rng, (2, 2), (2, 2), 2)
    behavior = strategy_behavior(strategy, game)
    table = behavior.table.reshape(2, 2, 2, 2)  # x, y, a, b
    # Alice's marginal cannot depend on Bob's question, and vice versa
    alice = table.sum(axis=3)
    bob = table.sum(axis=2)
    assert np.abs(alice[:, 0, :] - alice[:, 1, :]).max() < 1e-9
    assert np.abs(bob[0, :, :] - bob[1, :, :]).max() < 1e-9


def test_pure_vector_and_density_paths_agree():
    rng = np.random.default_rng(151)
    game = make_game(Z3, (2, 2), [int(v) for v in rng.integers(0, 3, size=4)])
    strategy = _random_strategy(rng, (3, 3), (2, 2), 3)
    rho = np.outer(strategy.state, strategy.state.conj())
    mixed = QuantumStrategy((3, 3), rho, strategy.measurements())
    b1 = strategy_behavior(strategy, game)
    b2 = strategy_behavior(mixed, game)
    assert np.abs(b1.table - b2.table).max() < 1e-11


# ---------------------------------------------------------------------------
# GHZ reference strategy


def test_ghz3_reference_wins_with_certainty():
    game = mermin_ghz3_game()
    strategy = ghz3_reference_strategy()
    value = success_probability(game, strategy_behavior(strategy, game))
    assert abs(value - 1.0) < 1e-9


def test_ghz3_bases_orthonormal():
    strategy = ghz3_reference_strategy()
    for i in range(3):
        for x in range(3):
            vectors = [strategy.vector(i, x, o) for o in range(3)]
            gram = np.array([[v.conj() @ w for w in vectors] for v in vectors])
            assert np.abs(gram - np.eye(3)).max() < 1e-9


def test_ghz3_observables_traceless():
    strategy = ghz3_reference_strategy()
    for k in range(1, 3):
        for i in range(3):
            for x in range(3):
                observable = sum(
                    Z3.character((k,), (o,)).conjugate()
                    * strategy.projector(i, x, o)
                    for o in range(3))
                assert abs(np.trace(observable)) < 1e-9


def test_ghz3_wins_every_promise_input():
    game = mermin_ghz3_game()
    behavior = strategy_behavior(ghz3_reference_strategy(), game)
    for x in game.support():
        win = sum(behavior.prob(answers, x)
                  for answers in itertools.product([(0,), (1,), (2,)],
                                                   repeat=3)
                  if Z3.add(Z3.add(answers[0], answers[1]), answers[2])
                  == game.predicate_value(x))
        assert win == pytest.approx(1.0, abs=1e-9)


# ---------------------------------------------------------------------------
# Correlators


def test_all_zero_behavior_has_unit_correlators():
    table = np.zeros((4, 9))
    table[:, 0] = 1.0  # both players always answer 0
    behavior = Behavior(Z3, (2, 2), table)
    tensor = correlators(behavior, Z3)
    assert np.abs(tensor.full - 1).max() < 1e-12


def test_trivial_character_row_is_one():
    rng = np.random.default_rng(157)
    behavior = _random_behavior(rng, Z3, (3, 3, 3), 3)
    tensor = correlators(behavior, Z3)
    assert np.abs(tensor.diagonal[0] - 1).max() < 1e-9
    assert np.abs(tensor.full).max() <= 1 + 1e-9


def test_correlator_group_mismatch():
    behavior = Behavior(Z2, (2, 2), np.full((4, 4), 0.25))
    with pytest.raises(ValidationError):
        correlators(behavior, Z3)


def test_success_formulas_agree_on_random_behaviors():
    rng = np.random.default_rng(163)
    game = mermin_ghz3_game()
    for _ in range(100):
        behavior = _random_behavior(rng, Z3, (3, 3, 3), 3)
        direct = success_probability(game, behavior)
        via_fourier = success_from_correlators(game,
                                               correlators(behavior, Z3))
        assert abs(direct - via_fourier) < 1e-10


def test_fourier_round_trip_against_oracle():
    rng = np.random.default_rng(167)
    for _ in range(100):
        behavior = _random_behavior(rng, Z3, (2, 2), 2)
        tensor = correlators(behavior, Z3)
        rebuilt = behavior_from_full_correlators(tensor.full, Z3, (2, 2))
        assert np.abs(rebuilt - behavior.table).max() < 1e-10


def test_success_from_correlators_mismatch_errors():
    behavior = Behavior(Z3, (3, 3, 3), np.full((27, 27), 1 / 27))
    tensor = correlators(behavior, Z3)
    with pytest.raises(ValidationError):
        success_from_correlators(chsh_game(2, 2), tensor)  # group mismatch
    grid_game = make_game(Z3, (2, 2, 2), lambda x: (0,))
    with pytest.raises(ValidationError):
        success_from_correlators(grid_game, tensor)  # grid mismatch


def test_ghz3_success_via_correlators():
    game = mermin_ghz3_game()
    behavior = strategy_behavior(ghz3_reference_strategy(), game)
    tensor = correlators(behavior, Z3)
    assert success_from_correlators(game, tensor) == pytest.approx(1.0,
                                                                   abs=1e-9)


# ---------------------------------------------------------------------------
# Noise curves


def test_noisy_success_matches_closed_form():
    game = mermin_ghz3_game()
    strategy = ghz3_reference_strategy()
    for v in (0.0, 0.5, 1.0):
        assert noisy_success(game, strategy, v) == pytest.approx(
            (1 + 2 * v) / 3, abs=1e-9)


def test_noisy_success_affine_three_point():
    game = mermin_ghz3_game()
    strategy = ghz3_reference_strategy()
    w0 = noisy_success(game, strategy, 0.0)
    w_half = noisy_success(game, strategy, 0.5)
    w1 = noisy_success(game, strategy, 1.0)
    assert abs(w_half - (w0 + w1) / 2) < 1e-12


def test_noisy_state_behavior_is_affine_mixture():
    game = mermin_ghz3_game()
    strategy = ghz3_reference_strategy()
    base = strategy_behavior(strategy, game).table
    for v in (0.3, 0.7):
        noisy = NoisyState(strategy, v).as_strategy()
        table = strategy_behavior(noisy, game).table
        assert np.abs(table - (v * base + (1 - v) / 27)).max() < 1e-12


def test_noisy_success_rejects_bad_visibility():
    game = mermin_ghz3_game()
    strategy = ghz3_reference_strategy()
    with pytest.raises(ValidationError):
        noisy_success(game, strategy, 1.5)
    with pytest.raises(ValidationError):
        noisy_success(game, strategy, -0.1)


# ---------------------------------------------------------------------------
# Bound dominance


def test_quantum_success_bounded_by_quantum_bound():
    from lingame.qbounds import quantum_bound
    rng = np.random.default_rng(173)
    for _ in range(25):
        values = [int(v) for v in rng.integers(0, 2, size=4)]
        game = make_game(Z2, (2, 2), values)
        strategy = _random_strategy(rng, (2, 2), (2, 2), 2)
        success = success_probability(game, strategy_behavior(strategy, game))
        assert success <= quantum_bound(game).bound + 1e-9


# ---------------------------------------------------------------------------
# Strategy files


def test_fixture_strategy_round_trip():
    strategy = load_strategy("fixtures/ghz3.strategy")
    game = mermin_ghz3_game()
    value = success_probability(game, strategy_behavior(strategy, game))
    assert abs(value - 1.0) < 1e-9


def test_parse_strategy_rejects_unknown_keys():
    with open("fixtures/ghz3.strategy", encoding="utf-8") as fh:
        doc = json.load(fh)
    doc["extra"] = 1
    with pytest.raises(GameFormatError):
        parse_strategy_file(json.dumps(doc))


def test_parse_strategy_error_paths_cite_indices():
    with open("fixtures/ghz3.strategy", encoding="utf-8") as fh:
        doc = json.load(fh)
    doc["measurements"][1][2][0][1] = [1.0, "oops"]
    with pytest.raises(GameFormatError) as err:
        parse_strategy_file(json.dumps(doc))
    assert "measurements[1][2][0][1]" in str(err.value)


def test_parse_strategy_rejects_bad_dims():
    with pytest.raises(GameFormatError):
        parse_strategy_file(json.dumps(
            {"dims": [0], "state": {"amplitudes": []}, "measurements": []}))


def test_parse_strategy_rejects_invalid_projectors():
    doc = {
        "dims": [2],
        "state": {"amplitudes": [[1.0, 0.0], [0.0, 0.0]]},
        "measurements": [[[[[1.0, 0.0], [0.0, 0.0]],
                           [[1.0, 0.0], [0.0, 0.0]]]]],
    }
    with pytest.raises(GameFormatError):
        parse_strategy_file(json.dumps(doc))


def test_parse_strategy_density_form():
    doc = {
        "dims": [2],
        "state": {"density": [[[0.5, 0.0], [0.0, 0.0]],
                              [[0.0, 0.0], [0.5, 0.0]]]},
        "measurements": [[[[[1.0, 0.0], [0.0, 0.0]],
                           [[0.0, 0.0], [1.0, 0.0]]]]],
    }
    strategy = parse_strategy_file(json.dumps(doc))
    assert not strategy.is_pure
