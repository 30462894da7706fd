import numpy as np
import pytest

from moead_uraw.adaptation import (
    AdaptationSkipped,
    Archive,
    add_subproblems,
    archive_insert,
    archive_trim,
    reciprocal_gap_weight,
    remove_overcrowded,
    sparsity_level,
    sparsity_report,
)
from moead_uraw.core import Individual, Subproblem


def brute_force_sparsity(F, m, exclude_self=True):
    """Independent reference: sort all pairwise distances, multiply the m smallest."""
    F = np.asarray(F, dtype=float)
    out = []
    for i in range(F.shape[0]):
        d = sorted(
            float(np.linalg.norm(F[j] - F[i]))
            for j in range(F.shape[0])
            if not (exclude_self and j == i)
        )
        out.append(float(np.prod(d[: min(m, len(d))])))
    return np.array(out)


def make_individual(f, x=None):
    f = np.asarray(f, dtype=float)
    return Individual(np.zeros(3) if x is None else x, f)


def make_subproblems(objectives):
    objectives = np.asarray(objectives, dtype=float)
    m = objectives.shape[1]
    uniform = np.full(m, 1.0 / m)
    return [
        Subproblem(uniform, np.empty(0, dtype=np.int64), make_individual(f))
        for f in objectives
    ]


def make_archive(objectives, n_dec=3):
    ep = Archive(np.asarray(objectives).shape[1], n_dec)
    for i, f in enumerate(objectives):
        ep.insert(np.full(n_dec, float(i)), f)
    return ep


class TestSparsityLevel:
    def test_two_nearest_distances_on_a_line(self):
        pop = [make_individual(f) for f in [(0, 0), (1, 0), (3, 0), (7, 0)]]
        assert sparsity_level(pop[0], pop, 2) == pytest.approx(3.0)

    def test_duplicate_objectives_give_zero(self):
        pop = [make_individual(f) for f in [(1, 1), (1, 1), (5, 5), (9, 9)]]
        assert sparsity_level(pop[0], pop, 2) == 0.0

    def test_unit_grid_interior_point(self):
        grid = [(i, j) for i in range(3) for j in range(3)]
        pop = [make_individual(f) for f in grid]
        center = pop[4]  # (1, 1)
        assert sparsity_level(center, pop, 2) == pytest.approx(1.0)

    def test_outside_individual_keeps_all_members(self):
        pop = [make_individual(f) for f in [(0, 0), (2, 0)]]
        outsider = make_individual((1, 0))
        assert sparsity_level(outsider, pop, 2) == pytest.approx(1.0)

    def test_too_few_neighbors_rejected(self):
        pop = [make_individual(f) for f in [(0, 0), (1, 0)]]
        with pytest.raises(ValueError):
            sparsity_level(pop[0], pop, 2)

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(10)
        for n, m in [(20, 2), (57, 3), (120, 4), (200, 6)]:
            F = rng.random((n, m)) * 10
            got = sparsity_report(F, m)
            want = brute_force_sparsity(F, m)
            np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-12)

    def test_scaled_distances_equal_prescaled_input(self):
        rng = np.random.default_rng(11)
        F = rng.random((30, 3)) * np.array([2.0, 4.0, 6.0])
        scale = np.array([2.0, 4.0, 6.0])
        np.testing.assert_allclose(
            sparsity_report(F, 3, scale), brute_force_sparsity(F / scale, 3),
            rtol=1e-12,
        )
        pop = [make_individual(f) for f in F]
        got = sparsity_level(pop[0], pop, 3, scale=scale)
        assert got == pytest.approx(brute_force_sparsity(F / scale, 3)[0], rel=1e-12)


class TestRemoveOvercrowded:
    def test_duplicate_pair_loses_a_member_first(self):
        F = [(0.0, 0.0), (5.0, 5.0), (5.0, 5.0), (9.0, 1.0), (1.0, 9.0)]
        survivors = remove_overcrowded(make_subproblems(F), 1)
        remaining = np.array([sp.solution.f for sp in survivors])
        assert sum(np.array_equal(r, [5.0, 5.0]) for r in remaining) == 1

    def test_matches_iterative_oracle(self):
        rng = np.random.default_rng(3)
        F = rng.random((6, 2)) * 4
        survivors = remove_overcrowded(make_subproblems(F), 2)

        rows = [tuple(f) for f in F]
        for _ in range(2):
            levels = brute_force_sparsity(np.array(rows), 2)
            rows.pop(int(np.argmin(levels)))
        got = [tuple(sp.solution.f) for sp in survivors]
        assert got == rows

    def test_perturbed_cluster_loses_member_first(self):
        grid = [(float(i), float(j)) for i in range(3) for j in range(3)]
        grid[4] = (1.7, 1.7)  # pushed toward the (2, 2) corner
        survivors = remove_overcrowded(make_subproblems(grid), 1)
        remaining = {tuple(sp.solution.f) for sp in survivors}
        removed = set(map(tuple, grid)) - remaining
        assert removed <= {(1.7, 1.7), (2.0, 2.0)}
        levels = brute_force_sparsity(np.array(grid), 2)
        assert removed == {tuple(grid[int(np.argmin(levels))])}

    def test_cannot_remove_whole_population(self):
        with pytest.raises(ValueError):
            remove_overcrowded(make_subproblems([(0, 0), (1, 1)]), 2)

    def test_reference_point_tie_break_drops_mismatched_weight(self):
        # duplicate pair: one weight owns the shared point (balanced gaps),
        # the other belongs on the opposite front end
        z = np.zeros(2)
        dup = np.array([1.0, 1.0])
        pop = [
            Subproblem(np.array([0.5, 0.5]), np.empty(0, dtype=np.int64),
                       make_individual(dup)),
            Subproblem(np.array([0.98, 0.02]), np.empty(0, dtype=np.int64),
                       make_individual(dup)),
            Subproblem(np.array([0.5, 0.5]), np.empty(0, dtype=np.int64),
                       make_individual((9.0, 1.0))),
            Subproblem(np.array([0.5, 0.5]), np.empty(0, dtype=np.int64),
                       make_individual((1.0, 9.0))),
        ]
        survivors = remove_overcrowded(pop, 1, z_star=z)
        weights = [tuple(sp.weight) for sp in survivors]
        assert (0.98, 0.02) not in weights  # own-value 0.98 vs 0.5: laggard goes
        assert len(survivors) == 3

    def test_tie_break_without_reference_uses_lowest_index(self):
        dup = np.array([1.0, 1.0])
        pop = make_subproblems([dup, dup, (9.0, 1.0), (1.0, 9.0)])
        survivors = remove_overcrowded(pop, 1)
        assert survivors[0] is pop[1]


class TestReciprocalGapWeight:
    def test_hand_evaluated_gaps(self):
        w = reciprocal_gap_weight((1.0, 3.0), (0.0, 0.0))
        np.testing.assert_allclose(w, [0.75, 0.25], atol=1e-15)

    def test_equal_gaps_give_uniform(self):
        w = reciprocal_gap_weight((3.0, 3.0, 3.0), (1.0, 1.0, 1.0))
        np.testing.assert_allclose(w, [1 / 3] * 3, atol=1e-15)

    def test_zero_gap_rejected(self):
        with pytest.raises(ValueError):
            reciprocal_gap_weight((1.0, 0.0), (0.0, 0.0))

    def test_output_on_simplex(self):
        rng = np.random.default_rng(0)
        for _ in range(300):
            m = int(rng.integers(2, 7))
            w = reciprocal_gap_weight(rng.uniform(0.05, 5.0, m), np.zeros(m))
            assert np.all(w >= 0)
            assert w.sum() == pytest.approx(1.0, abs=1e-12)


class TestAddSubproblems:
    def test_weight_and_solution_installed(self):
        pop = make_subproblems([(4.0, 1.0), (1.0, 4.0), (3.0, 3.0)])
        ep = make_archive([(1.0, 3.0)])
        z = np.zeros(2)
        extended = add_subproblems(pop, ep, 1, z)
        assert len(extended) == 4
        new = extended[-1]
        np.testing.assert_allclose(new.weight, [0.75, 0.25], atol=1e-15)
        np.testing.assert_array_equal(new.solution.f, [1.0, 3.0])

    def test_most_isolated_member_selected(self):
        pop = make_subproblems([(0.0, 0.1), (0.1, 0.0), (0.05, 0.05)])
        ep = make_archive([(0.04, 0.12), (5.0, 0.02)])  # near vs far, incomparable
        extended = add_subproblems(pop, ep, 1, np.full(2, -1.0))
        np.testing.assert_array_equal(extended[-1].solution.f, [5.0, 0.02])

    def test_side_condition_member_skipped(self):
        z = np.zeros(2)
        ep = make_archive([(2.0, 0.0), (1.0, 3.0)])  # first touches z* in f2
        pop = make_subproblems([(4.0, 1.0), (1.0, 4.0), (3.0, 3.0)])
        extended = add_subproblems(pop, ep, 2, z)
        added = [tuple(sp.solution.f) for sp in extended[3:]]
        assert added == [(1.0, 3.0), (1.0, 3.0)]

    def test_all_members_violating_raises(self):
        z = np.zeros(2)
        ep = make_archive([(2.0, 0.0), (0.0, 3.0)])
        pop = make_subproblems([(4.0, 1.0), (1.0, 4.0)])
        with pytest.raises(AdaptationSkipped):
            add_subproblems(pop, ep, 1, z)

    def test_empty_archive_raises(self):
        pop = make_subproblems([(4.0, 1.0), (1.0, 4.0)])
        with pytest.raises(AdaptationSkipped):
            add_subproblems(pop, Archive(2, 3), 1, np.zeros(2))

    def test_population_size_conserved_through_cycle(self):
        rng = np.random.default_rng(8)
        F = rng.random((30, 3)) + 0.5
        pop = make_subproblems(F)
        ep = make_archive(rng.random((12, 3)) + 0.5)
        z = np.zeros(3)
        nus = 4
        survivors = remove_overcrowded(pop, nus)
        assert len(survivors) + nus == len(pop)
        restored = add_subproblems(survivors, ep, nus, z)
        assert len(restored) == len(pop)


class TestArchiveInsert:
    def test_empty_plus_candidate_gives_singleton(self):
        ep = Archive(2, 3)
        out = archive_insert(ep, make_individual((1.0, 2.0)))
        assert len(out) == 1 and len(ep) == 0

    def test_incomparable_candidates_accumulate(self):
        ep = make_archive([(1.0, 2.0)])
        out = archive_insert(ep, make_individual((2.0, 1.0)))
        assert len(out) == 2

    def test_dominating_candidate_sweeps_members(self):
        ep = make_archive([(1.0, 2.0), (2.0, 1.0)])
        out = archive_insert(ep, make_individual((0.5, 0.5)))
        assert len(out) == 1
        np.testing.assert_array_equal(out.objectives[0], [0.5, 0.5])

    def test_dominated_candidate_rejected(self):
        ep = make_archive([(1.0, 1.0)])
        out = archive_insert(ep, make_individual((2.0, 2.0)))
        assert len(out) == 1
        np.testing.assert_array_equal(out.objectives[0], [1.0, 1.0])

    def test_duplicate_objectives_not_added(self):
        ep = make_archive([(1.0, 2.0)])
        out = archive_insert(ep, make_individual((1.0, 2.0)))
        assert len(out) == 1

    def test_pairwise_nondominance_with_random_insertions(self):
        rng = np.random.default_rng(5)
        for m in (2, 3):
            ep = Archive(m, 2)
            for _ in range(10_000):
                ep.insert(rng.random(2), rng.random(m))
                F = ep.objectives
                le = (F[:, None, :] <= F[None, :, :]).all(-1)
                lt = (F[:, None, :] < F[None, :, :]).any(-1)
                dominated = le & lt
                np.fill_diagonal(dominated, False)
                assert not dominated.any()
            # duplicates never appear either
            assert len(np.unique(ep.objectives, axis=0)) == len(ep)


class TestArchiveTrim:
    def _overfull(self, rng, count, m=2):
        # mutually nondominated points on a descending curve
        f1 = np.sort(rng.random(count))
        f2 = 1.0 - f1 + 0.001
        F = np.column_stack([f1, f2])[:, :m]
        if m == 3:
            F = np.column_stack([f1, 1 - f1, rng.random(count) * 0.001 + 2.0])
        return make_archive(F)

    def test_under_cap_unchanged(self):
        ep = make_archive([(1.0, 2.0), (2.0, 1.0)])
        out = archive_trim(ep, pop_size=2)
        assert len(out) == 2

    def test_one_over_cap_single_removal(self):
        rng = np.random.default_rng(1)
        ep = self._overfull(rng, 9)
        out = archive_trim(ep, pop_size=4)  # cap 8
        assert len(out) == 8

    def test_outlier_removed_under_literal_policy(self):
        cluster = [(0.50, 0.53), (0.51, 0.52), (0.52, 0.51), (0.53, 0.50)]
        outlier = (0.0, 10.0)
        ep = make_archive(cluster + [outlier])
        out = archive_trim(ep, pop_size=2)  # cap 4
        assert len(out) == 4
        assert not any(np.array_equal(r, outlier) for r in out.objectives)

    def test_lowest_policy_keeps_outlier(self):
        cluster = [(0.50, 0.53), (0.51, 0.52), (0.52, 0.51), (0.53, 0.50)]
        outlier = (0.0, 10.0)
        ep = make_archive(cluster + [outlier])
        out = archive_trim(ep, pop_size=2, policy="lowest")
        assert any(np.array_equal(r, outlier) for r in out.objectives)

    @pytest.mark.parametrize("policy", ["highest", "lowest"])
    def test_matches_recomputing_oracle(self, policy):
        rng = np.random.default_rng(14)
        ep = self._overfull(rng, 25)
        cap = 18
        out = archive_trim(ep, pop_size=9, policy=policy)  # cap 18

        rows = [tuple(f) for f in ep.objectives]
        while len(rows) > cap:
            levels = brute_force_sparsity(np.array(rows), 2)
            pick = int(np.argmax(levels) if policy == "highest" else np.argmin(levels))
            rows.pop(pick)
        assert [tuple(f) for f in out.objectives] == rows

    def test_unknown_policy_rejected(self):
        ep = make_archive([(1.0, 2.0)])
        with pytest.raises(ValueError):
            archive_trim(ep, 1, policy="median")
