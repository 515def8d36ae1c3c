"""Genetic-algorithm search over candidate-line build plans.

Each chromosome (one bit per candidate line) is priced by applying the
plan, growing line capacities through the roulette sizing loop, and
rolling the final network up into the objective J = EC + T_inv + G_inv.
Evaluations are memoized per bit pattern and fully determined by
(case, chromosome, mode, seed). Plans whose intact topology strands a
demand bus or a generator get an infinite-J sentinel instead of an
evaluation.

The outer loop is a plain generational GA: tournament selection, uniform
crossover, per-bit mutation, and elitism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .adequacy import ExpectationReport
from .contingency import is_islanded
from .costs import CostBreakdown, generation_investment, objective
from .evaluation import EvalConfig, PlanEvaluator, base_schedules
from .network import Chromosome, NetworkCase, apply_plan
from .rng import DOMAIN_GA, chromosome_entropy, substream
from .sizing import POLICY_NL, SizingConfig, sizing_loop


@dataclass(frozen=True)
class PlanSettings:
    """Everything about how a chromosome is priced (mode and knobs)."""

    mode: str = "mcs"  # mcs | n1 | n2
    policy: str = POLICY_NL  # nl | wel
    n_mcs: int = 1000
    delta_f: float = 5.0
    congestion_threshold: float = 0.1
    max_sizing_iterations: int = 200
    max_resamples: int = 1000


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 30
    generations: int = 450
    crossover_rate: float = 0.9
    mutation_rate: float | None = None  # default 1/chromosome-length
    tournament_size: int = 2
    elitism_count: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if not 0 <= self.elitism_count < self.population_size:
            raise ValueError("elitism_count must be < population_size")


@dataclass(frozen=True)
class SizingSummary:
    iterations: int
    stop_reason: str
    final_total_capacity: float


@dataclass(frozen=True)
class FitnessRecord:
    chromosome: Chromosome
    feasible: bool
    line_ids: tuple[int, ...]  # active lines, existing first
    capacities: tuple[float, ...]  # final ratings, aligned with line_ids
    breakdown: CostBreakdown
    report: ExpectationReport | None
    sizing: SizingSummary | None

    @property
    def j(self) -> float:
        return self.breakdown.j


@dataclass(frozen=True)
class PlanResult:
    best: FitnessRecord
    history: tuple[float, ...]  # best-so-far J after init and each generation
    mode: str
    policy: str


INFEASIBLE_SENTINEL = math.inf


def _infeasible_record(chromosome: Chromosome, g_inv: float) -> FitnessRecord:
    # inf propagates through the breakdown so j = ec + t_inv + g_inv holds.
    return FitnessRecord(
        chromosome=chromosome,
        feasible=False,
        line_ids=(),
        capacities=(),
        breakdown=objective(INFEASIBLE_SENTINEL, 0.0, 0.0,
                            INFEASIBLE_SENTINEL, g_inv),
        report=None,
        sizing=None,
    )


def case_generation_investment(case: NetworkCase) -> float:
    """G_inv in k$; independent of the line plan, computed once per case."""
    return generation_investment(case, base_schedules(case))


def evaluate_chromosome(
    case: NetworkCase,
    chromosome: Chromosome,
    settings: PlanSettings,
    seed: int,
    g_inv: float | None = None,
) -> FitnessRecord:
    """Full pricing of one build plan: sizing loop plus cost rollup."""
    if g_inv is None:
        g_inv = case_generation_investment(case)
    net = apply_plan(case, chromosome)
    if is_islanded(case, net, frozenset(), frozenset()):
        return _infeasible_record(chromosome, g_inv)

    entropy = chromosome_entropy(seed, chromosome.bits)
    evaluator = PlanEvaluator(
        case, net,
        EvalConfig(mode=settings.mode, n_mcs=settings.n_mcs,
                   max_resamples=settings.max_resamples),
        entropy,
    )
    trace = sizing_loop(
        net,
        evaluator.sizing_evaluate,
        SizingConfig(
            policy=settings.policy,
            delta_f=settings.delta_f,
            congestion_threshold=settings.congestion_threshold,
            max_iterations=settings.max_sizing_iterations,
        ),
        entropy,
    )
    final_net = net.with_capacities(trace.final_capacities)
    ev = evaluator.evaluate(final_net)
    breakdown = objective(ev.edns_k, ev.egns_k, ev.ewl_k, ev.t_inv, g_inv)
    return FitnessRecord(
        chromosome=chromosome,
        feasible=True,
        line_ids=final_net.line_ids,
        capacities=final_net.capacities,
        breakdown=breakdown,
        report=ev.report,
        sizing=SizingSummary(
            iterations=trace.iterations,
            stop_reason=trace.stop_reason,
            final_total_capacity=float(sum(final_net.capacities)),
        ),
    )


def _tournament(rng, fitness: list[float], size: int) -> int:
    picks = rng.integers(0, len(fitness), size=size)
    return int(min(picks, key=lambda k: (fitness[k], k)))


def run(
    case: NetworkCase,
    ga: GaConfig,
    settings: PlanSettings,
) -> PlanResult:
    """Evolve build plans toward minimum J and return the best found."""
    n_bits = len(case.candidate_lines)
    g_inv = case_generation_investment(case)
    memo: dict[tuple[bool, ...], FitnessRecord] = {}

    def priced(bits: tuple[bool, ...]) -> FitnessRecord:
        rec = memo.get(bits)
        if rec is None:
            rec = evaluate_chromosome(case, Chromosome(bits), settings,
                                      ga.seed, g_inv)
            memo[bits] = rec
        return rec

    if n_bits == 0:
        rec = priced(())
        return PlanResult(best=rec, history=(rec.j,) * (ga.generations + 1),
                          mode=settings.mode, policy=settings.policy)

    rng = substream([ga.seed, 0], DOMAIN_GA)
    mutation_rate = ga.mutation_rate if ga.mutation_rate is not None else 1.0 / n_bits

    population = [
        tuple(bool(b) for b in rng.random(n_bits) < 0.5)
        for _ in range(ga.population_size)
    ]
    records = [priced(bits) for bits in population]
    best = min(records, key=lambda r: r.j)
    history = [best.j]

    for _ in range(ga.generations):
        fitness = [r.j for r in records]
        ranked = sorted(range(len(population)), key=lambda k: (fitness[k], k))
        next_pop = [population[k] for k in ranked[:ga.elitism_count]]
        while len(next_pop) < ga.population_size:
            p1 = population[_tournament(rng, fitness, ga.tournament_size)]
            p2 = population[_tournament(rng, fitness, ga.tournament_size)]
            if rng.random() < ga.crossover_rate:
                mix = rng.random(n_bits) < 0.5
                child = tuple(a if m else b for a, b, m in zip(p1, p2, mix))
            else:
                child = p1
            flips = rng.random(n_bits) < mutation_rate
            child = tuple(b ^ f for b, f in zip(child, flips))
            next_pop.append(child)
        population = next_pop
        records = [priced(bits) for bits in population]
        gen_best = min(records, key=lambda r: r.j)
        if gen_best.j < best.j:
            best = gen_best
        history.append(best.j)

    return PlanResult(best=best, history=tuple(history),
                      mode=settings.mode, policy=settings.policy)
