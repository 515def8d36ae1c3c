"""Tests for scenario evaluation: batching, caching, determinism."""

from __future__ import annotations

import numpy as np
import pytest

from gridtep.adequacy import is_valid_sample, nodal_balance
from gridtep.contingency import enumerate_deterministic
from gridtep.evaluation import (
    EvalConfig,
    PlanEvaluator,
    base_schedules,
    build_record,
)
from gridtep.network import (
    ActiveNetwork,
    Chromosome,
    apply_plan,
    scenario_demand,
)

from _toys import mcs_toy_case


def toy_net(case):
    return apply_plan(case, Chromosome.from_ints([]))


def test_mcs_evaluation_is_deterministic_per_entropy():
    case = mcs_toy_case()
    net = toy_net(case)
    config = EvalConfig(mode="mcs", n_mcs=200)
    a = PlanEvaluator(case, net, config, entropy=[7, 1]).evaluate(net)
    b = PlanEvaluator(case, net, config, entropy=[7, 1]).evaluate(net)
    np.testing.assert_array_equal(a.report.edns, b.report.edns)
    np.testing.assert_array_equal(a.report.congestion_probability,
                                  b.report.congestion_probability)
    assert a.ec == b.ec

    c = PlanEvaluator(case, net, config, entropy=[8, 1]).evaluate(net)
    assert not np.array_equal(a.report.edns, c.report.edns)


def test_capacity_cache_returns_same_object():
    case = mcs_toy_case()
    net = toy_net(case)
    evaluator = PlanEvaluator(case, net, EvalConfig(mode="mcs", n_mcs=100),
                              entropy=[1, 1])
    assert evaluator.evaluate(net) is evaluator.evaluate(net)
    grown = net.with_capacities([c + 5 for c in net.capacities])
    assert evaluator.evaluate(grown) is not evaluator.evaluate(net)


def test_evaluator_rejects_foreign_topology():
    case = mcs_toy_case()
    net = toy_net(case)
    other = apply_plan(case, Chromosome.from_ints([]))
    trimmed = ActiveNetwork(buses=other.buses, lines=other.lines[:3],
                            capacities=other.capacities[:3],
                            slack_bus=other.slack_bus)
    evaluator = PlanEvaluator(case, net, EvalConfig(mode="n1"), entropy=[1, 1])
    with pytest.raises(ValueError):
        evaluator.evaluate(trimmed)


def test_deterministic_mode_matches_manual_state_weighting():
    """The n1 evaluator must agree with a by-hand pass over the same
    states: equal weights, drop states invalid at the given ratings,
    renormalize, average."""
    case = mcs_toy_case()
    net = toy_net(case)
    evaluator = PlanEvaluator(case, net, EvalConfig(mode="n1"), entropy=[1, 1])
    result = evaluator.evaluate(net)

    peak = case.ldc.peak_month()
    demand = scenario_demand(case, peak)
    schedule = base_schedules(case)[peak - 1]
    caps = np.asarray(net.capacities)
    kept_dns = []
    for state in enumerate_deterministic(case, net, 1):
        rec = build_record(case, net, demand, state, schedule)
        balance = nodal_balance(net, rec.flows, rec.demand, rec.generation,
                                capacities=caps)
        if is_valid_sample(balance, rec.demand, rec.generation):
            kept_dns.append(balance.total_dns + rec.deficit)
    expected_edns = float(np.mean(kept_dns))

    np.testing.assert_allclose(result.report.edns, expected_edns)
    assert result.report.samples_used[0] == len(kept_dns)


def test_deterministic_mode_replicates_peak_month():
    case = mcs_toy_case()
    net = toy_net(case)
    result = PlanEvaluator(case, net, EvalConfig(mode="n2"), entropy=[1, 1]
                           ).evaluate(net)
    assert np.ptp(result.report.edns) == 0.0
    assert np.ptp(result.report.ewl) == 0.0


def test_generous_ratings_remove_all_shortfalls():
    case = mcs_toy_case()
    net = toy_net(case)
    big = net.with_capacities([1e9] * len(net.lines))
    evaluator = PlanEvaluator(case, big, EvalConfig(mode="n1"), entropy=[1, 1])
    result = evaluator.evaluate(big)
    # Line outages redistribute flow but nothing is truncated, so the only
    # remaining shortfalls come from generator-outage deficits.
    assert np.all(result.report.ewl == 0.0)
    assert np.all(result.report.congestion_probability == 0.0)

    gens_only = [
        s for s in enumerate_deterministic(case, big, 1) if s.gens_out
    ]
    peak = case.ldc.peak_month()
    demand_total = scenario_demand(case, peak).sum()
    deficits = []
    for state in gens_only:
        online = sum(
            g.capacity_mw
            for k, g in enumerate(case.generators)
            if k not in state.gens_out
        )
        deficits.append(max(0.0, demand_total - online))
    n_states = len(list(enumerate_deterministic(case, big, 1)))
    expected = sum(deficits) / n_states
    np.testing.assert_allclose(result.report.edns[0], expected)
