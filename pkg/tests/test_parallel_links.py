"""Phase refinement and the full parallel-links solver."""

from fractions import Fraction

import pytest

from pqlab import (
    AdversaryLinkOracle,
    AlgorithmInvariantViolated,
    CongestionOracle,
    LinkLoads,
    Network,
    QueryLedger,
    consistent_completions,
    parallel_links_game,
    solve_parallel_links,
    step_link_game,
)
from pqlab.games import link_tables
from pqlab.instances import gen_random_step_links
from pqlab.parallel_links import (
    PhasePlan,
    default_group_factor,
    is_delta_equilibrium,
    refine_profile,
)

F = Fraction


class TestDeltaEquilibrium:
    def test_even_split_on_step_instance(self):
        tables = [[1, 1, 1, 1, 1], [0, 0, 0, 2, 2]]
        assert is_delta_equilibrium(tables, (2, 2), 1, 0)

    def test_all_on_cheapest_is_n_equilibrium(self):
        tables = [[1, 1, 1, 1, 1], [0, 0, 0, 2, 2]]
        assert is_delta_equilibrium(tables, (4, 0), 4, 0)

    def test_profitable_deviation_detected(self):
        tables = [[0, 2, 2, 2, 2], [0, 1, 1, 1, 1]]
        assert not is_delta_equilibrium(tables, (4, 0), 1, 0)

    def test_divisibility_required_off_special(self):
        tables = [[0, 1, 1, 1], [0, 1, 1, 1]]
        assert not is_delta_equilibrium(tables, (1, 2), 2, 1)
        assert is_delta_equilibrium(tables, (1, 2), 2, 0)


class TestPhasePlan:
    def test_deltas_descend_to_one(self):
        plan = PhasePlan(2, 16)
        assert plan.deltas() == [16, 8, 4, 2, 1]

    def test_non_power_boundary(self):
        plan = PhasePlan(3, 10)
        assert plan.deltas() == [9, 3, 1]

    def test_default_group_factor(self):
        assert default_group_factor(1) == 2
        assert default_group_factor(8) == 3
        assert default_group_factor(16) == 4


class TestRefineProfile:
    def test_no_moves_when_already_settled(self):
        game = parallel_links_game([[1] * 5, [1] * 5], 4)
        oracle = CongestionOracle(game)
        out = refine_profile(oracle, LinkLoads((2, 2), 0), 1, group_factor=2)
        assert out.loads == (2, 2)

    def test_moves_one_group_off_the_flat_link(self):
        # All four players sit on the constant link; one group of two must
        # move to the cheap half of the stepped link.
        game = parallel_links_game([[1, 1, 1, 1, 1], [0, 0, 0, 2, 2]], 4)
        oracle = CongestionOracle(game)
        out = refine_profile(oracle, LinkLoads((4, 0), 0), 2, group_factor=2)
        assert out.loads == (2, 2)
        assert is_delta_equilibrium(link_tables(game), out.loads, 2, 0)


def solve_and_check(game, kf=None):
    oracle = CongestionOracle(game)
    result = solve_parallel_links(oracle, kf)
    tables = link_tables(game)
    assert sum(result.loads.loads) == game.players
    assert is_delta_equilibrium(tables, result.loads.loads, 1, result.loads.special)
    for delta, loads in result.checkpoints:
        assert is_delta_equilibrium(tables, loads, delta, result.loads.special)
    kf_used = result.group_factor
    m = len(tables)
    for trace in result.traces:
        assert trace.moved_groups <= max(kf_used * m, (kf_used - 1) * (m + 1))
        assert max(trace.added) <= 2 * kf_used
    assert result.queries_used <= result.query_bound
    return result


class TestSolveParallelLinks:
    def test_single_link_one_query(self):
        game = parallel_links_game([[0, 3, 3, 3]], 3)
        oracle = CongestionOracle(game)
        result = solve_parallel_links(oracle)
        assert result.loads.loads == (3,)
        assert result.queries_used == 1

    def test_two_link_step_game_exact_split(self):
        result = solve_and_check(step_link_game(16, 5))
        assert result.loads.loads == (5, 11)

    def test_matches_a_pure_equilibrium_on_small_instances(self):
        from pqlab.verify import brute_force_pure_ne

        for seed in range(25):
            game = gen_random_step_links(3, 6, seed)
            result = solve_and_check(game)
            ne_loads = {
                tuple(ne.get((i,), 0) for i in range(3))
                for ne in brute_force_pure_ne(game)
            }
            assert result.loads.loads in ne_loads

    def test_random_instances_large_n(self):
        for seed in range(10):
            game = gen_random_step_links(8, 10_000 + seed * 997, seed)
            solve_and_check(game)

    def test_explicit_group_factor(self):
        solve_and_check(step_link_game(64, 21), kf=4)

    def test_query_growth_is_logarithmic_in_n(self):
        small = solve_and_check(gen_random_step_links(8, 2**10, 3))
        large = solve_and_check(gen_random_step_links(8, 2**20, 3))
        assert large.queries_used <= 2.5 * small.queries_used


class TestAgainstAdversary:
    @pytest.mark.parametrize("exp", [6, 10, 14])
    def test_forced_binary_search(self, exp):
        n = 2**exp
        oracle = AdversaryLinkOracle(n)
        result = solve_parallel_links(oracle)
        # Termination is only sound once a single completion remains, and
        # closing the gap takes at least floor(log2 n) queries.
        completions = list(consistent_completions(oracle.state))
        assert len(completions) == 1
        location = completions[0]
        assert result.loads.loads == (location, n - location)
        threshold = exp  # floor(log2 n) for powers of two
        for queries_seen, size in enumerate(oracle.completion_history, start=1):
            if queries_seen < threshold:
                assert size >= 2
        assert result.queries_used >= threshold

    def test_committed_game_confirms_equilibrium(self):
        oracle = AdversaryLinkOracle(512)
        result = solve_parallel_links(oracle)
        game = oracle.committed_game()
        assert is_delta_equilibrium(
            link_tables(game), result.loads.loads, 1, result.loads.special
        )


class _NonMonotoneOracle:
    """Breaks the nondecreasing-cost promise to exercise the guard."""

    def __init__(self):
        self.players = 4
        self.network = Network((0, 1), {0: (0, 1), 1: (0, 1)}, 0, 1)
        self.ledger = QueryLedger()

    def query_loads(self, assignment):
        out = {}
        for path, load in assignment.items():
            if path == (0,):
                out[path] = F(10 - load)  # decreasing: invalid game
            else:
                out[path] = F(1)
        self.ledger.record("q", "r")
        return out


def test_non_monotone_hidden_costs_detected():
    with pytest.raises(AlgorithmInvariantViolated):
        solve_parallel_links(_NonMonotoneOracle())


def test_single_player_takes_cheapest_link():
    game = parallel_links_game([[0, 4], [0, 2], [0, 7]], 1)
    result = solve_and_check(game)
    assert result.loads.loads == (0, 1, 0)
