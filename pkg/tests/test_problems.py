import json

import numpy as np
import pytest

from moead_uraw.core import rng_stream
from moead_uraw.problems import (
    OutOfBoundsError,
    ProblemDef,
    ShapeSpec,
    available_problems,
    evaluate,
    evaluate_population,
    get_problem,
    load_shape_registry,
    optimal_solution,
    random_population,
    random_solution,
)

# Reference evaluations of the concave baseline problem (10 variables,
# 3 objectives, 2 position parameters), frozen from an independent
# implementation of the same benchmark toolkit.
ORACLE_X = np.array([
    [1.13783890382196, 0.39981342549122, 2.57104400359446, 7.38059326152385,
     0.18024697236177, 4.76511856888059, 4.94868612529733, 5.03603867466566,
     1.57950371631846, 5.02059681386812],
    [1.24461287529011, 3.47327010872662, 5.43623388146076, 7.94615451354421,
     5.40004134634819, 1.01695950794045, 5.48432969385307, 1.62513156036691,
     5.43756079090007, 16.845612279212],
    [1.3483917307458, 3.40633721753899, 5.78151771907546, 2.63492324427142,
     6.94416921281742, 2.88016099935476, 13.1911070274896, 2.97957306442058,
     3.87758428471048, 11.4314968749729],
    [1.04757801036099, 1.88111694935307, 2.00402875380894, 5.70334301516702,
     4.55333751888472, 8.27804323815833, 6.40662120721998, 8.26948687327702,
     0.229783478365364, 13.1661986496426],
])
ORACLE_F = np.array([
    [0.706332603289956, 1.14447455569412, 6.03537463248557],
    [0.963434680277201, 1.09292165133283, 6.05832165357606],
    [1.07075915988437, 1.19846384116053, 5.82348456594644],
    [0.334946480439561, 0.839576787685893, 6.19071079640542],
])


class TestDefinitions:
    def test_default_dimensions(self):
        p2 = get_problem("WFG4", 2)
        assert (p2.k, p2.l, p2.n) == (2, 10, 12)
        p5 = get_problem("WFG4", 5)
        assert (p5.k, p5.l, p5.n) == (4, 10, 14)

    def test_bounds_scale_with_index(self):
        p = get_problem("WFG4", 2)
        np.testing.assert_array_equal(p.upper, 2.0 * np.arange(1, 13))
        np.testing.assert_array_equal(p.lower, np.zeros(12))

    def test_position_params_must_divide(self):
        with pytest.raises(ValueError):
            ProblemDef(name="WFG4", m=4, k=4, l=10)

    def test_all_variants_registered(self):
        names = available_problems()
        for i in range(1, 9):
            assert f"WFG4{i}" in names
        assert "WFG4" in names

    def test_unknown_problem(self):
        with pytest.raises(KeyError):
            get_problem("WFG99", 2)


class TestEvaluate:
    def test_matches_external_reference(self):
        problem = ProblemDef(name="WFG4", m=3, k=2, l=8)
        for x, f_expected in zip(ORACLE_X, ORACLE_F):
            f = evaluate(problem, x)
            np.testing.assert_allclose(f, f_expected, atol=1e-9)

    def test_optimal_points_lie_on_unit_sphere(self):
        # concave front: de-scaled optimal objectives have unit norm
        rng = rng_stream(4)
        for m in (2, 3, 4):
            problem = get_problem("WFG4", m)
            scale = 2.0 * np.arange(1, m + 1)
            for _ in range(50):
                x = optimal_solution(problem, rng.random(problem.k))
                f = evaluate(problem, x)
                assert np.sum((f / scale) ** 2) == pytest.approx(1.0, abs=1e-9)

    def test_no_point_inside_unit_sphere(self):
        # the concave front is a lower bound for every feasible point
        problem = get_problem("WFG4", 3)
        scale = 2.0 * np.arange(1, 4)
        X = random_population(problem, 2000, rng_stream(8))
        F = evaluate_population(problem, X)
        norms = np.sum((F / scale) ** 2, axis=1)
        assert np.all(norms >= 1.0 - 1e-9)

    def test_objectives_nonnegative_and_bounded(self):
        # fuzz every registered variant within its scale envelope
        rng = rng_stream(12)
        for name in available_problems():
            problem = get_problem(name, 3)
            expo = problem.shape.exponent
            hi = max(1.0, 2.0 ** expo)  # largest achievable shape value
            X = random_population(problem, 2000, rng)
            F = evaluate_population(problem, X)
            assert np.all(F >= 0.0), name
            scale = 2.0 * np.arange(1, 4)
            # distance parameter adds at most 1 to each scaled objective
            assert np.all(F / scale <= hi + 1.0 + 1e-9), name

    def test_out_of_bounds_rejected(self):
        problem = get_problem("WFG4", 2)
        x = problem.upper.copy()
        x[0] += 1e-6
        with pytest.raises(OutOfBoundsError):
            evaluate(problem, x)

    def test_wrong_length_rejected(self):
        problem = get_problem("WFG4", 2)
        with pytest.raises(ValueError):
            evaluate(problem, np.zeros(5))


class TestShapeVariants:
    def test_linear_front_sums_to_one(self):
        problem = get_problem("WFG46", 3)
        scale = 2.0 * np.arange(1, 4)
        rng = rng_stream(3)
        for _ in range(50):
            x = optimal_solution(problem, rng.random(problem.k))
            f = evaluate(problem, x)
            assert np.sum(f / scale) == pytest.approx(1.0, abs=1e-9)

    def test_sharpened_front_exponent(self):
        # the sharpened concave variant is the concave front raised elementwise
        base = get_problem("WFG41", 2)
        strong = get_problem("WFG43", 2)
        assert strong.shape.exponent == 0.5
        scale = np.array([2.0, 4.0])
        rng = rng_stream(6)
        for _ in range(20):
            pos = rng.random(base.k)
            f_base = evaluate(base, optimal_solution(base, pos)) / scale
            f_strong = evaluate(strong, optimal_solution(strong, pos)) / scale
            np.testing.assert_allclose(f_strong, f_base ** 0.5, atol=1e-12)

    def test_disconnected_tail_covers_gaps(self):
        problem = get_problem("WFG47", 2)
        rng = rng_stream(9)
        F = np.array([
            evaluate(problem, optimal_solution(problem, rng.random(problem.k)))
            for _ in range(400)
        ])
        # last objective oscillates: its de-scaled range spans most of [0, 1]
        f2 = F[:, 1] / 4.0
        assert f2.min() < 0.25 and f2.max() > 0.9

    def test_registry_file_override(self, tmp_path):
        config = {"CUSTOM": {"head": "convex", "exponent": 3.0}}
        path = tmp_path / "shapes.json"
        path.write_text(json.dumps(config))
        registry = load_shape_registry(path)
        assert registry["CUSTOM"] == ShapeSpec(head="convex", exponent=3.0)
        problem = get_problem("custom", 2, registry=registry)
        assert problem.shape.exponent == 3.0

    def test_bad_shape_rejected(self):
        with pytest.raises(ValueError):
            ShapeSpec(head="bogus")


class TestRandomSolution:
    def test_bounds_respected(self):
        problem = get_problem("WFG4", 2)
        rng = rng_stream(21)
        for _ in range(200):
            x = random_solution(problem, rng)
            assert np.all(x >= 0.0) and np.all(x <= problem.upper)

    def test_seeded_determinism(self):
        problem = get_problem("WFG4", 2)
        a = random_solution(problem, rng_stream(33))
        b = random_solution(problem, rng_stream(33))
        np.testing.assert_array_equal(a, b)

    def test_component_means_track_scale(self):
        # component i is uniform on [0, 2i], so its mean is i
        problem = get_problem("WFG4", 2)
        X = random_population(problem, 100_000, rng_stream(2))
        means = X.mean(axis=0)
        np.testing.assert_allclose(means, np.arange(1, 13), rtol=0.02)
