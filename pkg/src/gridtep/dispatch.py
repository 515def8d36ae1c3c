"""Merit-order generation dispatch.

Online units are loaded cheapest-first (ties broken by bus id) until the
scenario demand is covered; the marginal unit takes the remainder. When
the slack bus's generator is offline, the largest-capacity online unit
(ties: lowest bus id) absorbs the balancing role. If online capacity
falls short of demand, every bus's demand is curtailed proportionally so
the dispatch still balances, and the shortfall is reported for the
adequacy accounting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import GeneratorSpec, NetworkCase


@dataclass(frozen=True)
class DispatchResult:
    schedule: tuple[float, ...]  # MW per generator, case fleet order
    served_demand: np.ndarray  # MW per bus, after any curtailment
    deficit: float  # MW of demand that could not be covered
    slack_unit: int | None  # fleet index of the balancing unit

    @property
    def total_output(self) -> float:
        return float(sum(self.schedule))


def merit_order(case: NetworkCase) -> list[int]:
    """Fleet indices sorted by operating cost, ties by bus id."""
    return sorted(
        range(len(case.generators)),
        key=lambda k: (case.generators[k].operating_cost, case.generators[k].bus),
    )


def select_slack(case: NetworkCase, online: set[int]) -> int | None:
    """Balancing unit for a set of online fleet indices.

    The slack bus's own generator when online; otherwise the
    largest-capacity online unit, ties broken by lowest bus id.
    """
    if not online:
        return None
    for k in online:
        if case.generators[k].bus == case.slack_bus:
            return k
    return min(online, key=lambda k: (-case.generators[k].capacity_mw,
                                      case.generators[k].bus))


def merit_order_dispatch(
    case: NetworkCase,
    demand: np.ndarray,
    offline: frozenset[int] = frozenset(),
) -> DispatchResult:
    """Dispatch the online fleet against a per-bus demand vector."""
    demand = np.asarray(demand, dtype=float)
    total_demand = float(demand.sum())
    online = {k for k in range(len(case.generators)) if k not in offline}
    slack_unit = select_slack(case, online)

    schedule = [0.0] * len(case.generators)
    remaining = total_demand
    for k in merit_order(case):
        if k not in online or remaining <= 0:
            continue
        take = min(case.generators[k].capacity_mw, remaining)
        schedule[k] = take
        remaining -= take

    if remaining > 1e-9:
        # Online capacity short of demand: shed load proportionally so the
        # network problem stays balanced; the deficit feeds the DNS tally.
        deficit = remaining
        served = demand * ((total_demand - deficit) / total_demand) \
            if total_demand > 0 else demand.copy()
    else:
        deficit = 0.0
        served = demand.copy()

    return DispatchResult(
        schedule=tuple(schedule),
        served_demand=served,
        deficit=deficit,
        slack_unit=slack_unit,
    )


def injections_from_dispatch(
    case: NetworkCase, result: DispatchResult
) -> np.ndarray:
    """Net per-bus injection vector (generation minus served demand)."""
    inj = -result.served_demand.astype(float).copy()
    for k, mw in enumerate(result.schedule):
        if mw:
            inj[case.bus_index[case.generators[k].bus]] += mw
    return inj


def bus_generation(case: NetworkCase, schedule: tuple[float, ...]) -> np.ndarray:
    """Aggregate a fleet schedule into per-bus generation totals."""
    g = np.zeros(len(case.buses))
    for k, mw in enumerate(schedule):
        if mw:
            g[case.bus_index[case.generators[k].bus]] += mw
    return g


def cut_off_outputs(
    case: NetworkCase,
    base_schedule: tuple[float, ...],
    offline_gens: frozenset[int],
) -> dict[int, float]:
    """Output each offline unit would have produced under the intact-fleet
    base dispatch; this is the generation treated as not supplied when the
    unit is forced out."""
    return {k: base_schedule[k] for k in offline_gens if base_schedule[k] > 0}
