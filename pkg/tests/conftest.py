"""Shared fixtures: the two-criterion worked example used across the suite."""

from __future__ import annotations

import pytest

from benchrank.mcda import (
    ChoquetParams,
    CriteriaTree,
    Direction,
    MeasurementProfile,
    UtilityFunction,
    criterion,
    two_level_tree,
)


def maxcut_utility() -> UtilityFunction:
    # Elicited from ranked Q-scores (0, 17, 70, 140, 1000) with intensity
    # gaps (2, 4, 4, 5): cumulative sums (0, 2, 6, 10, 15) rescaled by 1/15.
    return UtilityFunction(
        metric_id="qscore_maxcut",
        direction=Direction.HIGHER_IS_BETTER,
        breakpoints=((0.0, 0.0), (17.0, 2 / 15), (70.0, 0.4), (140.0, 2 / 3), (1000.0, 1.0)),
        bad_index=0,
        good_index=4,
    )


def maxclique_utility() -> UtilityFunction:
    # Same gap pattern over the MaxClique reference values (0, 12, 70, 110, 1000).
    return UtilityFunction(
        metric_id="qscore_maxclique",
        direction=Direction.HIGHER_IS_BETTER,
        breakpoints=((0.0, 0.0), (12.0, 2 / 15), (70.0, 0.4), (110.0, 2 / 3), (1000.0, 1.0)),
        bad_index=0,
        good_index=4,
    )


def fixture_capacity() -> ChoquetParams:
    # From ranking all-Bad < Good(clique) < Good(cut) < all-Good with gaps
    # (Strong, VeryWeak, VeryWeak): targets (0, 2/3, 5/6, 1), solved to
    # w_cut=1/3, w_clique=1/6, max-pair weight 1/2 (redundancy).
    return ChoquetParams(
        singleton_weights={"maxcut": 1 / 3, "maxclique": 1 / 6},
        min_weights={},
        max_weights={("maxcut", "maxclique"): 1 / 2},
    )


def fixture_tree() -> CriteriaTree:
    return two_level_tree(
        root_id="overall",
        root_label="Overall score",
        params=fixture_capacity(),
        leaves=[
            criterion("maxcut", "Q-score MaxCut", maxcut_utility()),
            criterion("maxclique", "Q-score MaxClique", maxclique_utility()),
        ],
        scope_label="quantum annealers",
        metric_aggregation={"qscore_maxcut": "max", "qscore_maxclique": "max"},
    )


@pytest.fixture
def two_kpi_tree() -> CriteriaTree:
    return fixture_tree()


@pytest.fixture
def dwave_profiles() -> list[MeasurementProfile]:
    return [
        MeasurementProfile("dwave-2000q", {"qscore_maxcut": 70.0, "qscore_maxclique": 70.0}),
        MeasurementProfile("dwave-advantage", {"qscore_maxcut": 140.0, "qscore_maxclique": 110.0}),
    ]
