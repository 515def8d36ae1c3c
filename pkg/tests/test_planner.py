"""Tests for chromosome pricing and the genetic search."""

from __future__ import annotations

import itertools
import math

import pytest

from gridtep.network import Chromosome, load_case
from gridtep.planner import (
    GaConfig,
    PlanSettings,
    case_generation_investment,
    evaluate_chromosome,
    run,
)

from _toys import build_case, ga_toy_case, gen, line

from test_network import BUNDLED

N1 = PlanSettings(mode="n1")


def test_plan_that_strands_a_generator_is_infeasible():
    """The bundled case parks two new generators on line-less buses; the
    empty build plan leaves them islanded and prices at infinity."""
    case = load_case(BUNDLED)
    rec = evaluate_chromosome(case, Chromosome.from_ints([0] * 14), N1, seed=0)
    assert not rec.feasible
    assert math.isinf(rec.j)
    # G_inv survives so J still decomposes as EC + T_inv + G_inv.
    assert rec.breakdown.g_inv == case_generation_investment(case)


def test_chromosome_pricing_is_deterministic():
    case = ga_toy_case()
    bits = Chromosome.from_ints([1, 0, 0, 1, 0, 0])
    settings = PlanSettings(mode="mcs", n_mcs=150)
    a = evaluate_chromosome(case, bits, settings, seed=11)
    b = evaluate_chromosome(case, bits, settings, seed=11)
    assert a.j == b.j
    assert a.capacities == b.capacities
    assert a.sizing == b.sizing


def test_seed_changes_monte_carlo_pricing():
    case = ga_toy_case()
    bits = Chromosome.from_ints([1, 0, 0, 1, 0, 0])
    settings = PlanSettings(mode="mcs", n_mcs=150)
    a = evaluate_chromosome(case, bits, settings, seed=11)
    b = evaluate_chromosome(case, bits, settings, seed=12)
    assert a.j != b.j


def test_ga_matches_exhaustive_on_single_candidate():
    case = build_case(
        [0, 40, 40],
        [
            line(1, 1, 2, cap=60.0),
            line(2, 2, 3, cap=30.0),
            line(3, 1, 3, cap=30.0),
            line(4, 1, 3, cap=30.0, status="candidate"),
        ],
        [gen(1, 120.0, cost=1.0), gen(2, 60.0, cost=2.0)],
    )
    ga = GaConfig(population_size=2, generations=3, seed=4)
    result = run(case, ga, N1)
    exhaustive = min(
        (evaluate_chromosome(case, Chromosome.from_ints(bits), N1, ga.seed)
         for bits in ([0], [1])),
        key=lambda rec: rec.j,
    )
    assert result.best.j == exhaustive.j
    assert result.best.chromosome == exhaustive.chromosome


def test_history_tracks_best_so_far():
    case = ga_toy_case()
    ga = GaConfig(population_size=4, generations=5, seed=2)
    result = run(case, ga, N1)
    assert len(result.history) == ga.generations + 1
    assert all(b <= a for a, b in zip(result.history, result.history[1:]))
    assert result.history[-1] == result.best.j


def test_ga_is_reproducible():
    case = ga_toy_case()
    ga = GaConfig(population_size=4, generations=3, seed=9)
    a = run(case, ga, N1)
    b = run(case, ga, N1)
    assert a.history == b.history
    assert a.best.chromosome == b.best.chromosome


def test_ga_config_validation():
    with pytest.raises(ValueError):
        GaConfig(population_size=1)
    with pytest.raises(ValueError):
        GaConfig(population_size=4, elitism_count=4)


def test_exhaustive_landscape_is_not_flat():
    """The GA toy must actually discriminate between plans; otherwise the
    exhaustive-vs-GA comparison proves nothing."""
    case = ga_toy_case()
    values = set()
    for combo in itertools.product([0, 1], repeat=3):
        bits = Chromosome.from_ints(list(combo) + [0, 0, 0])
        values.add(evaluate_chromosome(case, bits, N1, seed=0).j)
    assert len(values) > 1
