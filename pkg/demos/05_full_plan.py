"""End-to-end expansion planning: genetic search over build plans.

The outer loop of the planner decides WHICH candidate lines to build; the
inner machinery (Monte Carlo adequacy + roulette sizing, demos 03 and 04)
decides HOW LARGE they should be and what the plan really costs:

    J(plan) = EC + T_inv + G_inv

    EC     expected cost of unserved demand, stranded generation, and
           congestion, priced from the simulated adequacy indices;
    T_inv  line investment: capital on new lines (and on upgrade MW in
           WEL mode) plus a rating-proportional operating charge;
    G_inv  generator capital and dispatch operating cost — identical for
           every plan, but kept in J so totals match across studies.

Build plans are bit strings over the candidate list. A small genetic
algorithm (tournament selection, uniform crossover, bit-flip mutation,
one elite) searches the 2^14 plans of the bundled case; every chromosome
is priced by a full sizing run at its own derived random stream, so the
search is reproducible and revisits cost nothing.

This demo runs a deliberately small configuration (deterministic n-1
contingency pricing) so it finishes in seconds; the CLI exposes the full
Monte Carlo study:

    gridtep plan --case cases/fig1-7bus.json --mode mcs --policy wel \
        --seed 0 --pop-size 10 --generations 20 --out out/

Run:  python demos/05_full_plan.py
"""

from __future__ import annotations

from pathlib import Path

from gridtep import GaConfig, PlanSettings, load_case, run

CASE = Path(__file__).resolve().parent.parent / "cases" / "fig1-7bus.json"


def main() -> None:
    case = load_case(CASE)
    settings = PlanSettings(mode="n1", policy="nl")
    ga = GaConfig(population_size=8, generations=10, seed=0)

    print(f"searching {2 ** len(case.candidate_lines)} possible build plans"
          f" (population {ga.population_size}, {ga.generations} generations,"
          " n-1 pricing)\n")
    result = run(case, ga, settings)

    print("generation  best J so far (M$)")
    for g, j in enumerate(result.history):
        print(f"{g:>10}  {j / 1000:12.2f}")

    best = result.best
    chosen = [ln for bit, ln in zip(best.chromosome.bits, case.candidate_lines)
              if bit]
    print(f"\nbest plan builds {len(chosen)} of"
          f" {len(case.candidate_lines)} candidates:")
    for ln in chosen:
        pos = best.line_ids.index(ln.id)
        print(f"  line {ln.id:>2} ({ln.from_bus}->{ln.to_bus}):"
              f" sized to {best.capacities[pos]:.0f} MW")

    money = best.breakdown.in_millions()
    print(f"\ncost breakdown (M$): EC {money['ec']:.2f}"
          f" + T_inv {money['t_inv']:.2f} + G_inv {money['g_inv']:.2f}"
          f" = J {money['j']:.2f}")
    if best.sizing is not None:
        print(f"sizing stopped by {best.sizing.stop_reason} at"
              f" {best.sizing.final_total_capacity:.0f} MW total rating")


if __name__ == "__main__":
    main()
