import numpy as np

from hmsopt import Bid, EvalBudget, RunConfig, make_suite, run_hms, stream_from_seed
from hmsopt.hms import (
    HmsState,
    grouping_phase_hms,
    init_state,
    mental_search_phase,
    movement_phase,
)

from conftest import ScriptedStream, make_box_objective


def small_cfg(**kwargs):
    defaults = dict(pop_size=10, nfe_max=500, k_clusters=3, seed=0)
    defaults.update(kwargs)
    return RunConfig(**defaults)


def make_state(objective, positions, nfe_max=1000):
    budget = EvalBudget(nfe_max)
    population = []
    for row in positions:
        value = objective(np.asarray(row, dtype=float))
        budget.nfe += 1
        population.append(Bid(np.asarray(row, dtype=float).copy(), value))
    best = min(population, key=lambda b: b.value)
    return HmsState(population, Bid(best.position.copy(), best.value), budget,
                    history=[(budget.nfe, best.value)])


class TestInitState:
    def test_counts_and_bounds(self, plain_sphere):
        cfg = small_cfg()
        state = init_state(plain_sphere, cfg, stream_from_seed(1))
        assert state.nfe == cfg.pop_size
        assert len(state.population) == cfg.pop_size
        for bid in state.population:
            assert np.all(bid.position >= plain_sphere.lower)
            assert np.all(bid.position <= plain_sphere.upper)
            assert bid.value == plain_sphere(bid.position)
        assert state.best.value == min(b.value for b in state.population)

    def test_history_non_increasing(self, plain_sphere):
        state = init_state(plain_sphere, small_cfg(pop_size=30, nfe_max=600), stream_from_seed(2))
        values = [v for _, v in state.history]
        assert values == sorted(values, reverse=True)


class TestMentalSearchPhase:
    def test_bid_at_best_unchanged(self, plain_sphere):
        # single bid is the best-so-far: every candidate equals the bid
        cfg = small_cfg(pop_size=1, nfe_max=100, k_clusters=1)
        state = make_state(plain_sphere, [[3.0, 4.0]], nfe_max=100)
        before = state.population[0].position.copy()
        mental_search_phase(state, cfg, plain_sphere, stream_from_seed(3))
        assert np.array_equal(state.population[0].position, before)
        assert cfg.q_min <= state.nfe - 1 <= cfg.q_max

    def test_exact_evaluation_count(self, plain_sphere):
        cfg = small_cfg(pop_size=6, nfe_max=200, q_min=2, q_max=2)
        state = init_state(plain_sphere, cfg, stream_from_seed(4))
        before = state.nfe
        mental_search_phase(state, cfg, plain_sphere, stream_from_seed(5))
        assert state.nfe - before == 2 * cfg.pop_size

    def test_greedy_never_worsens(self, plain_sphere):
        cfg = small_cfg(pop_size=12, nfe_max=2000)
        state = init_state(plain_sphere, cfg, stream_from_seed(6))
        before = [b.value for b in state.population]
        mental_search_phase(state, cfg, plain_sphere, stream_from_seed(7))
        after = [b.value for b in state.population]
        assert all(a <= b for a, b in zip(after, before))

    def test_bitwise_reproducible(self, plain_sphere):
        cfg = small_cfg(pop_size=8, nfe_max=400)
        states = []
        for _ in range(2):
            state = init_state(plain_sphere, cfg, stream_from_seed(8))
            mental_search_phase(state, cfg, plain_sphere, stream_from_seed(9))
            states.append(state)
        a, b = states
        for bid_a, bid_b in zip(a.population, b.population):
            assert np.array_equal(bid_a.position, bid_b.position)
            assert bid_a.value == bid_b.value

    def test_stops_at_budget(self, plain_sphere):
        cfg = small_cfg(pop_size=10, nfe_max=13)
        state = init_state(plain_sphere, cfg, stream_from_seed(10))
        mental_search_phase(state, cfg, plain_sphere, stream_from_seed(11))
        assert state.nfe == 13

    def test_candidates_stay_in_bounds(self):
        obj = make_box_objective(dim=3, bound=1.0)
        cfg = small_cfg(pop_size=6, nfe_max=300)
        state = init_state(obj, cfg, stream_from_seed(12))
        mental_search_phase(state, cfg, obj, stream_from_seed(13))
        for bid in state.population:
            assert np.all(bid.position >= obj.lower) and np.all(bid.position <= obj.upper)


class TestGroupingPhase:
    def test_winner_is_argmin_of_cluster_means(self, plain_sphere):
        # three tight spatial groups with values making the middle group best
        positions = [
            [-50.0, 0.0], [-50.5, 0.0], [-49.5, 0.0],   # cluster mean value 5
            [0.0, 50.0], [0.5, 50.0], [-0.5, 50.0],     # cluster mean value 2
            [50.0, -50.0], [50.5, -50.0], [49.5, -50.0] # cluster mean value 9
        ]
        values = [5.0, 4.0, 6.0, 2.0, 1.5, 2.5, 9.0, 8.0, 10.0]
        state = make_state(plain_sphere, positions)
        for bid, value in zip(state.population, values):
            bid.value = value
        cfg = small_cfg(pop_size=9, k_clusters=3)
        rng = ScriptedStream(choice=lambda n, size, replace: np.array([0, 3, 6]))
        winner, w, assignment = grouping_phase_hms(state, cfg, rng)
        members = assignment.members(winner)
        assert sorted(members.tolist()) == [3, 4, 5]
        assert w.value == 1.5
        assert np.array_equal(w.position, np.array([0.5, 50.0]))

    def test_identical_bids_tie_break(self, plain_sphere):
        positions = [[1.0, 1.0]] * 6
        state = make_state(plain_sphere, positions)
        cfg = small_cfg(pop_size=6, k_clusters=2)
        winner, w, assignment = grouping_phase_hms(state, cfg, stream_from_seed(15))
        assert winner == 0
        assert w.value == state.population[0].value

    def test_w_copy_is_independent(self, plain_sphere):
        cfg = small_cfg(pop_size=8, k_clusters=2)
        state = init_state(plain_sphere, cfg, stream_from_seed(16))
        _, w, _ = grouping_phase_hms(state, cfg, stream_from_seed(17))
        w.position[:] = 1e9
        for bid in state.population:
            assert not np.array_equal(bid.position, w.position)


class TestMovementPhase:
    def test_half_pull_toward_w(self, plain_sphere):
        state = make_state(plain_sphere, [[4.0, 2.0], [10.0, 10.0]])
        w = Bid(np.array([4.0, 2.0]), state.population[0].value)
        rng = ScriptedStream(random=lambda size: np.full(size, 0.5))
        movement_phase(state, w, np.array([0]), 1.0, rng, plain_sphere)
        assert state.population[1].position.tolist() == [7.0, 6.0]
        assert state.population[1].value == plain_sphere(np.array([7.0, 6.0]))

    def test_c_zero_is_identity(self, plain_sphere):
        state = make_state(plain_sphere, [[4.0, 2.0], [10.0, 10.0]])
        w = Bid(np.array([4.0, 2.0]), 0.0)
        rng = ScriptedStream(random=lambda size: np.full(size, 0.7))
        movement_phase(state, w, np.array([0]), 0.0, rng, plain_sphere)
        assert state.population[1].position.tolist() == [10.0, 10.0]

    def test_r_one_lands_on_w(self, plain_sphere):
        state = make_state(plain_sphere, [[4.0, 2.0], [10.0, 10.0]])
        w = Bid(np.array([4.0, 2.0]), 0.0)
        rng = ScriptedStream(random=lambda size: np.ones(size))
        movement_phase(state, w, np.array([0]), 1.0, rng, plain_sphere)
        assert state.population[1].position.tolist() == [4.0, 2.0]

    def test_exempt_members_untouched(self, plain_sphere):
        cfg = small_cfg(pop_size=10, k_clusters=3, nfe_max=1000)
        state = init_state(plain_sphere, cfg, stream_from_seed(18))
        winner, w, assignment = grouping_phase_hms(state, cfg, stream_from_seed(19))
        members = assignment.members(winner)
        frozen = {int(i): state.population[i].position.copy() for i in members}
        movement_phase(state, w, members, cfg.C, stream_from_seed(20), plain_sphere)
        for i, pos in frozen.items():
            assert np.array_equal(state.population[i].position, pos)

    def test_budget_stops_movement(self, plain_sphere):
        state = make_state(plain_sphere, [[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]], nfe_max=4)
        # budget allows a single move: nfe is 3 after init, cap 4
        w = Bid(np.array([1.0, 1.0]), state.population[0].value)
        before = state.population[2].position.copy()
        rng = ScriptedStream(random=lambda size: np.full(size, 0.5))
        movement_phase(state, w, np.array([0]), 1.0, rng, plain_sphere)
        assert state.nfe == 4
        assert np.array_equal(state.population[2].position, before)

    def test_moves_are_clamped(self):
        obj = make_box_objective(dim=2, bound=5.0)
        state = make_state(obj, [[5.0, 5.0], [-5.0, -5.0]])
        w = Bid(np.array([5.0, 5.0]), 0.0)
        rng = ScriptedStream(random=lambda size: np.full(size, 0.5))
        movement_phase(state, w, np.array([0]), 3.0, rng, obj)  # overshoot with C=3
        assert np.all(state.population[1].position <= obj.upper)
        assert np.all(state.population[1].position >= obj.lower)


class TestRunHms:
    def test_shifted_sphere_pilot(self):
        sphere = make_suite("classic10", 2, 7)[0]
        result = run_hms(sphere, RunConfig(pop_size=20, nfe_max=10_000, seed=1))
        assert result.error < 1e-4

    def test_init_only_budget(self, plain_sphere):
        cfg = RunConfig(pop_size=25, nfe_max=25, seed=3)
        result = run_hms(plain_sphere, cfg)
        twin = init_state(plain_sphere, cfg, stream_from_seed(3))
        assert result.best_value == twin.best.value
        assert np.array_equal(result.best_position, twin.best.position)
        assert result.nfe_used == 25

    def test_deterministic_run(self, plain_sphere):
        cfg = RunConfig(pop_size=15, nfe_max=2_000, seed=11)
        a = run_hms(plain_sphere, cfg)
        b = run_hms(plain_sphere, cfg)
        assert a.best_value == b.best_value
        assert np.array_equal(a.best_position, b.best_position)
        assert a.history == b.history
        assert a.nfe_used == b.nfe_used

    def test_result_invariants(self):
        sphere = make_suite("classic10", 2, 5)[0]
        result = run_hms(sphere, RunConfig(pop_size=12, nfe_max=3_000, seed=4))
        assert result.error >= -1e-12
        assert result.nfe_used == 3_000
        values = [v for _, v in result.history]
        assert values == sorted(values, reverse=True)
        nfes = [n for n, _ in result.history]
        assert nfes == sorted(nfes)
        assert np.all(result.best_position >= sphere.lower)
        assert np.all(result.best_position <= sphere.upper)
