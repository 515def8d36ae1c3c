"""Tests for the merit-order dispatch."""

from __future__ import annotations

import itertools

import numpy as np

from gridtep.dispatch import (
    bus_generation,
    cut_off_outputs,
    injections_from_dispatch,
    merit_order,
    merit_order_dispatch,
    select_slack,
)

from _toys import build_case, gen, line


def two_gen_case():
    return build_case(
        [0, 0, 120],
        [line(1, 1, 2), line(2, 2, 3), line(3, 1, 3)],
        [gen(1, 50.0, cost=1.0), gen(2, 100.0, cost=2.0)],
    )


def test_cheapest_unit_fills_first():
    """50 MW at cost 1 and 100 MW at cost 2 cover 120 MW as 50 + 70."""
    case = two_gen_case()
    result = merit_order_dispatch(case, np.array([0.0, 0.0, 120.0]))
    assert result.schedule == (50.0, 70.0)
    assert result.deficit == 0.0


def test_zero_demand_dispatches_nothing():
    case = two_gen_case()
    result = merit_order_dispatch(case, np.zeros(3))
    assert result.schedule == (0.0, 0.0)
    assert result.total_output == 0.0


def test_shortfall_becomes_deficit_and_curtails_proportionally():
    """Demand above online capacity sheds load pro rata per bus."""
    case = build_case(
        [0, 60, 120],
        [line(1, 1, 2), line(2, 2, 3)],
        [gen(1, 100.0, cost=1.0), gen(2, 100.0, cost=2.0)],
    )
    result = merit_order_dispatch(case, np.array([0.0, 60.0, 120.0]),
                                  offline=frozenset([1]))
    assert result.schedule == (100.0, 0.0)
    np.testing.assert_allclose(result.deficit, 80.0)
    np.testing.assert_allclose(result.served_demand, [0.0, 100 / 3, 200 / 3])
    np.testing.assert_allclose(result.served_demand.sum(), 100.0)


def test_merit_order_breaks_cost_ties_by_bus():
    case = build_case(
        [0, 0, 100],
        [line(1, 1, 2), line(2, 2, 3)],
        [gen(3, 50.0, cost=1.0), gen(1, 50.0, cost=1.0), gen(2, 50.0, cost=0.5)],
    )
    assert merit_order(case) == [2, 1, 0]


def test_slack_unit_prefers_slack_bus_then_capacity():
    """The slack bus's generator balances when online; otherwise the
    biggest online unit does, ties to the lowest bus id."""
    case = build_case(
        [0, 0, 100],
        [line(1, 1, 2), line(2, 2, 3)],
        [gen(1, 50.0), gen(2, 80.0), gen(3, 80.0)],
    )
    assert select_slack(case, {0, 1, 2}) == 0
    assert select_slack(case, {1, 2}) == 1
    assert select_slack(case, {2}) == 2
    assert select_slack(case, set()) is None


def test_dispatch_ignores_demand_bus_permutation():
    """Total dispatch depends on total demand, not on its bus split."""
    case = two_gen_case()
    a = merit_order_dispatch(case, np.array([10.0, 40.0, 70.0]))
    b = merit_order_dispatch(case, np.array([70.0, 10.0, 40.0]))
    assert a.schedule == b.schedule


def test_merit_dispatch_is_cost_minimal():
    """On an exhaustive 1 MW grid, no feasible schedule covering the same
    demand costs less than the merit-order one."""
    case = build_case(
        [0, 0, 9],
        [line(1, 1, 2), line(2, 2, 3)],
        [gen(1, 4.0, cost=3.0), gen(2, 5.0, cost=1.0), gen(3, 6.0, cost=2.0)],
    )
    demand = np.array([0.0, 0.0, 9.0])
    result = merit_order_dispatch(case, demand)
    merit_cost = sum(
        mw * g.operating_cost for mw, g in zip(result.schedule, case.generators)
    )
    caps = [int(g.capacity_mw) for g in case.generators]
    best = min(
        sum(mw * g.operating_cost for mw, g in zip(combo, case.generators))
        for combo in itertools.product(*(range(c + 1) for c in caps))
        if sum(combo) == 9
    )
    np.testing.assert_allclose(merit_cost, best)


def test_injections_balance_to_zero():
    """Generation minus served demand sums to zero, even under deficit."""
    case = two_gen_case()
    for offline in (frozenset(), frozenset([0]), frozenset([1])):
        result = merit_order_dispatch(case, np.array([0.0, 0.0, 120.0]),
                                      offline=offline)
        inj = injections_from_dispatch(case, result)
        np.testing.assert_allclose(inj.sum(), 0.0, atol=1e-9)


def test_bus_generation_aggregates_fleet():
    case = build_case(
        [0, 0, 100],
        [line(1, 1, 2), line(2, 2, 3)],
        [gen(1, 60.0), gen(1, 60.0), gen(2, 60.0)],
    )
    g = bus_generation(case, (10.0, 20.0, 30.0))
    np.testing.assert_allclose(g, [30.0, 30.0, 0.0])


def test_cut_off_outputs_use_base_schedule():
    """A forced-out unit's lost output is what it produced in the
    intact-fleet dispatch, not zero."""
    case = two_gen_case()
    base = merit_order_dispatch(case, np.array([0.0, 0.0, 120.0])).schedule
    assert cut_off_outputs(case, base, frozenset([0])) == {0: 50.0}
    assert cut_off_outputs(case, base, frozenset()) == {}
