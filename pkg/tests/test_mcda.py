"""Core scoring engine: utilities, Choquet aggregation, trees, intervals."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from benchrank.errors import ValidationError
from benchrank.mcda import (
    ChoquetParams,
    Direction,
    MeasurementProfile,
    UtilityFunction,
    apply_utility,
    choquet_2add,
    evaluate_interval,
    evaluate_tree,
    importance_and_interaction,
    load_model,
    model_from_doc,
    model_to_doc,
    save_model,
)

from .conftest import maxcut_utility
from .util import random_capacity, random_tree, tree_metrics


class TestApplyUtility:
    def test_breakpoints_exact(self):
        f = maxcut_utility()
        # displayed utility table: 0->0, 17->0.133, 70->0.4, 140->0.667, 1000->1
        for v, expected in [(0, 0.0), (17, 0.133), (70, 0.4), (140, 0.667), (1000, 1.0)]:
            assert apply_utility(f, v) == pytest.approx(expected, abs=1e-3)

    def test_interpolation_midpoint(self):
        # hand oracle: halfway between (70, 0.4) and (140, 2/3)
        assert apply_utility(maxcut_utility(), 105) == pytest.approx(
            0.4 + 0.5 * (2 / 3 - 0.4), abs=1e-9
        )
        assert apply_utility(maxcut_utility(), 105) == pytest.approx(0.5333, abs=1e-3)

    def test_clamps_below_bad(self):
        assert apply_utility(maxcut_utility(), -5) == 0.0

    def test_extrapolates_above_best(self):
        f = maxcut_utility()
        slope = (1.0 - 2 / 3) / (1000 - 140)
        assert apply_utility(f, 2000) == pytest.approx(1.0 + 1000 * slope, rel=1e-12)

    def test_lower_is_better(self):
        latency = UtilityFunction(
            metric_id="latency_ms",
            direction=Direction.LOWER_IS_BETTER,
            breakpoints=((100.0, 0.0), (10.0, 0.5), (1.0, 1.0)),
            bad_index=0,
            good_index=2,
        )
        assert apply_utility(latency, 100) == 0.0
        assert apply_utility(latency, 1) == 1.0
        assert apply_utility(latency, 55) == pytest.approx(0.25)
        assert apply_utility(latency, 500) == 0.0  # worse than Bad clamps
        assert apply_utility(latency, 0.5) > 1.0  # better than Good keeps growing

    def test_nondecreasing_along_preference(self):
        f = maxcut_utility()
        grid = np.linspace(-50, 1500, 400)
        values = [apply_utility(f, v) for v in grid]
        assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))

    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError):
            apply_utility(maxcut_utility(), float("nan"))
        with pytest.raises(ValidationError):
            apply_utility(maxcut_utility(), float("inf"))

    def test_rejects_non_monotone_utilities(self):
        with pytest.raises(ValidationError):
            UtilityFunction(
                metric_id="m",
                direction=Direction.HIGHER_IS_BETTER,
                breakpoints=((0.0, 0.0), (1.0, 0.6), (2.0, 0.5), (3.0, 1.0)),
                bad_index=0,
                good_index=3,
            )


class TestChoquet:
    def test_idempotent_on_equal_inputs(self):
        p = ChoquetParams({"a": 0.5, "b": 0.5})
        assert choquet_2add(p, {"a": 0.4, "b": 0.4}) == pytest.approx(0.4)

    def test_pure_min(self):
        p = ChoquetParams({"a": 0.0, "b": 0.0}, min_weights={("a", "b"): 1.0})
        assert choquet_2add(p, {"a": 0.3, "b": 0.9}) == pytest.approx(0.3)

    def test_mixed_hand_value(self):
        # 0.3*0.4 + 0.2*(2/3) + 0.5*max(0.4, 2/3) = 0.12 + 2/15 + 1/3
        p = ChoquetParams({"a": 0.3, "b": 0.2}, max_weights={("a", "b"): 0.5})
        got = choquet_2add(p, {"a": 0.4, "b": 2 / 3})
        assert got == pytest.approx(0.12 + 2 / 15 + 1 / 3, abs=1e-12)
        assert got == pytest.approx(0.5867, abs=1e-3)

    def test_input_mismatch_rejected(self):
        p = ChoquetParams({"a": 0.5, "b": 0.5})
        with pytest.raises(ValidationError):
            choquet_2add(p, {"a": 0.1})
        with pytest.raises(ValidationError):
            choquet_2add(p, {"a": 0.1, "b": 0.2, "c": 0.3})
        with pytest.raises(ValidationError):
            choquet_2add(p, {"a": -0.1, "b": 0.2})

    def test_sum_to_one_enforced_not_fixed(self):
        with pytest.raises(ValidationError, match="refusing to renormalize"):
            ChoquetParams({"a": 0.5, "b": 0.6})

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=60, deadline=None)
    def test_normalization_and_monotonicity(self, seed):
        rng = np.random.default_rng(seed)
        children = [f"c{i}" for i in range(int(rng.integers(2, 7)))]
        p = random_capacity(rng, children)
        zeros = {c: 0.0 for c in children}
        ones = {c: 1.0 for c in children}
        assert abs(choquet_2add(p, zeros)) <= 1e-9
        assert abs(choquet_2add(p, ones) - 1.0) <= 1e-9
        x = {c: float(rng.uniform(0, 2)) for c in children}
        y = {c: x[c] + float(rng.uniform(0, 1)) for c in children}
        assert choquet_2add(p, x) <= choquet_2add(p, y) + 1e-12
        a = float(rng.uniform(0, 3))
        same = {c: a for c in children}
        assert choquet_2add(p, same) == pytest.approx(a, abs=1e-9)


class TestImportanceInteraction:
    def test_weighted_sum_reduces_to_weights(self):
        p = ChoquetParams({"a": 0.7, "b": 0.3})
        importance, interaction = importance_and_interaction(p)
        assert importance == pytest.approx({"a": 0.7, "b": 0.3})
        assert interaction[("a", "b")] == 0.0

    def test_hand_example(self):
        p = ChoquetParams({"a": 0.3, "b": 0.2}, max_weights={("a", "b"): 0.5})
        importance, interaction = importance_and_interaction(p)
        assert importance["a"] == pytest.approx(0.55)
        assert importance["b"] == pytest.approx(0.45)
        assert interaction[("a", "b")] == pytest.approx(-0.5)

    def test_fixture_capacity_shows_redundancy(self, two_kpi_tree):
        params = two_kpi_tree.node("overall").choquet
        importance, interaction = importance_and_interaction(params)
        # MaxCut slightly more important, negative interaction (redundancy)
        assert importance["maxcut"] > importance["maxclique"]
        assert interaction[("maxclique", "maxcut")] < 0

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=40, deadline=None)
    def test_importance_sums_to_one(self, seed):
        rng = np.random.default_rng(seed)
        children = [f"c{i}" for i in range(int(rng.integers(2, 7)))]
        importance, _ = importance_and_interaction(random_capacity(rng, children))
        assert math.fsum(importance.values()) == pytest.approx(1.0, abs=1e-9)
        assert all(v >= 0 for v in importance.values())


class TestEvaluateTree:
    def test_all_bad_scores_zero(self, two_kpi_tree):
        profile = MeasurementProfile("junk", {"qscore_maxcut": 0, "qscore_maxclique": 0})
        result = evaluate_tree(two_kpi_tree, profile)
        assert result.root_score == pytest.approx(0.0, abs=1e-12)
        assert all(abs(v) < 1e-12 for v in result.scores.values())

    def test_all_good_scores_one(self, two_kpi_tree):
        profile = MeasurementProfile(
            "great", {"qscore_maxcut": 1000, "qscore_maxclique": 1000}
        )
        result = evaluate_tree(two_kpi_tree, profile)
        assert result.root_score == pytest.approx(1.0, abs=1e-9)

    def test_composes_utility_and_choquet(self, two_kpi_tree):
        profile = MeasurementProfile(
            "advantage", {"qscore_maxcut": 140, "qscore_maxclique": 110}
        )
        result = evaluate_tree(two_kpi_tree, profile)
        params = two_kpi_tree.node("overall").choquet
        u_cut = apply_utility(two_kpi_tree.node("maxcut").utility, 140)
        u_clq = apply_utility(two_kpi_tree.node("maxclique").utility, 110)
        expected = choquet_2add(params, {"maxcut": u_cut, "maxclique": u_clq})
        assert result.root_score == pytest.approx(expected, abs=1e-12)
        assert result.scores["maxcut"] == pytest.approx(u_cut)

    def test_missing_leaf_metric_names_the_node(self, two_kpi_tree):
        with pytest.raises(ValidationError, match="maxclique"):
            evaluate_tree(two_kpi_tree, MeasurementProfile("x", {"qscore_maxcut": 3}))


class TestEvaluateInterval:
    def test_degenerate_equals_point(self, two_kpi_tree):
        profile = MeasurementProfile(
            "a",
            {"qscore_maxcut": 70, "qscore_maxclique": 110},
            intervals={"qscore_maxcut": (70, 70)},
        )
        point = evaluate_tree(two_kpi_tree, profile)
        boxed = evaluate_interval(two_kpi_tree, profile)
        for node_id, (lo, hi) in boxed.intervals.items():
            assert lo == pytest.approx(point.scores[node_id], abs=1e-12)
            assert hi == pytest.approx(point.scores[node_id], abs=1e-12)

    def test_widening_never_narrows_root(self, two_kpi_tree):
        narrow = MeasurementProfile(
            "a",
            {"qscore_maxcut": 70, "qscore_maxclique": 110},
            intervals={"qscore_maxcut": (60, 90)},
        )
        wide = MeasurementProfile(
            "a",
            {"qscore_maxcut": 70, "qscore_maxclique": 110},
            intervals={"qscore_maxcut": (50, 130)},
        )
        lo_n, hi_n = evaluate_interval(two_kpi_tree, narrow).root_interval
        lo_w, hi_w = evaluate_interval(two_kpi_tree, wide).root_interval
        assert lo_w <= lo_n + 1e-12
        assert hi_w >= hi_n - 1e-12

    def test_lo_above_hi_rejected(self):
        with pytest.raises(ValidationError):
            MeasurementProfile("a", {"m": 1.0}, intervals={"m": (2.0, 1.0)})

    def test_monte_carlo_containment(self):
        # independent oracle: sample profiles inside the box, every point
        # evaluation must land inside the reported interval
        rng = np.random.default_rng(42)
        tree = random_tree(rng, max_depth=1)  # one aggregation over leaves
        metrics = tree_metrics(tree)
        boxes = {m: tuple(sorted(rng.uniform(0, 1, 2))) for m in metrics}
        profile = MeasurementProfile(
            "mc", {m: (lo + hi) / 2 for m, (lo, hi) in boxes.items()}, intervals=boxes
        )
        result = evaluate_interval(tree, profile)
        lo, hi = result.root_interval
        for _ in range(100):
            sample = {m: float(rng.uniform(*boxes[m])) for m in metrics}
            score = evaluate_tree(tree, MeasurementProfile("s", sample)).root_score
            assert lo - 1e-9 <= score <= hi + 1e-9


class TestModelFile:
    def test_round_trip_value_identical(self, two_kpi_tree, tmp_path):
        path = tmp_path / "model.json"
        save_model(two_kpi_tree, path)
        loaded = load_model(path)
        assert loaded == two_kpi_tree
        # and a second save is byte-identical
        twice = tmp_path / "model2.json"
        save_model(loaded, twice)
        assert path.read_bytes() == twice.read_bytes()

    def test_schema_version_mandatory(self, two_kpi_tree):
        doc = model_to_doc(two_kpi_tree)
        del doc["schema_version"]
        with pytest.raises(ValidationError, match="schema_version"):
            model_from_doc(doc)


class TestTreeValidation:
    def test_rejects_two_parents(self):
        from benchrank.mcda import CriteriaTree, aggregation, criterion

        from .util import linear_utility

        leaf = criterion("leaf", "leaf", linear_utility("m"))
        a = aggregation("a", "a", ChoquetParams({"leaf": 0.5, "b": 0.5}))
        b = aggregation("b", "b", ChoquetParams({"leaf": 1.0, "c": 0.0}))
        c = criterion("c", "c", linear_utility("m2"))
        with pytest.raises(ValidationError, match="two parents"):
            CriteriaTree(nodes={n.id: n for n in (leaf, a, b, c)}, root="a")

    def test_rejects_orphan(self):
        from benchrank.mcda import CriteriaTree, aggregation, criterion

        from .util import linear_utility

        x = criterion("x", "x", linear_utility("m1"))
        y = criterion("y", "y", linear_utility("m2"))
        stray = criterion("stray", "stray", linear_utility("m3"))
        root = aggregation("root", "root", ChoquetParams({"x": 0.5, "y": 0.5}))
        with pytest.raises(ValidationError, match="stray"):
            CriteriaTree(nodes={n.id: n for n in (x, y, stray, root)}, root="root")

    def test_rejects_missing_child(self):
        from benchrank.mcda import CriteriaTree, aggregation

        root = aggregation("root", "root", ChoquetParams({"gone": 0.5, "also": 0.5}))
        with pytest.raises(ValidationError, match="missing child"):
            CriteriaTree(nodes={"root": root}, root="root")
