"""Contingency state generation.

Two sources of outage states share one representation:

* Monte Carlo sampling — each line and generator is drawn out with its
  forced outage rate. States that island the network or leave fewer than
  the minimum number of generators online are rejected and redrawn, up
  to a resample budget.
* Deterministic enumeration — every single (N-1) or pair (N-2) outage
  over lines and generators, with the same feasibility screen;
  surviving states carry equal weights that sum to one.

A state islands the network when any demand bus, or any bus hosting an
online generator, is cut off from the slack bus. Buses with neither
demand nor online generation may dangle; the load-flow treats them as
zero-injection dead ends.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .dcflow import connected_components
from .errors import ResampleBudgetError
from .network import ActiveNetwork, NetworkCase


@dataclass(frozen=True)
class OutageState:
    lines_out: frozenset[int]  # line ids
    gens_out: frozenset[int]  # fleet indices
    weight: float = 1.0


@dataclass(frozen=True)
class SamplerConfig:
    max_resamples: int = 1000


def is_islanded(
    case: NetworkCase,
    net: ActiveNetwork,
    lines_out: frozenset[int],
    gens_out: frozenset[int] = frozenset(),
) -> bool:
    """True when a demand bus or an online generator's bus loses its path
    to the slack bus once the given lines are removed."""
    in_service = np.array([ln.id not in lines_out for ln in net.lines])
    comp = connected_components(net, in_service)
    slack_comp = comp[net.bus_index[net.slack_bus]]
    for b in case.buses:
        if b.base_demand > 0 and comp[net.bus_index[b.id]] != slack_comp:
            return True
    for k, g in enumerate(case.generators):
        if k not in gens_out and comp[net.bus_index[g.bus]] != slack_comp:
            return True
    return False


def _feasible(
    case: NetworkCase,
    net: ActiveNetwork,
    lines_out: frozenset[int],
    gens_out: frozenset[int],
) -> bool:
    online = len(case.generators) - len(gens_out)
    if online < case.min_online_generators:
        return False
    return not is_islanded(case, net, lines_out, gens_out)


def sample_state(
    case: NetworkCase,
    net: ActiveNetwork,
    rng: np.random.Generator,
    config: SamplerConfig = SamplerConfig(),
) -> OutageState:
    """Draw one feasible outage state.

    Each element goes out when its uniform draw falls below its forced
    outage rate. Infeasible draws (islanding / too few units online) are
    rejected and redrawn; exceeding the resample budget raises
    ResampleBudgetError.
    """
    for _ in range(config.max_resamples):
        u_lines = rng.random(len(net.lines))
        u_gens = rng.random(len(case.generators))
        lines_out = frozenset(
            ln.id for ln, u in zip(net.lines, u_lines)
            if u < ln.forced_outage_rate
        )
        gens_out = frozenset(
            k for k, (g, u) in enumerate(zip(case.generators, u_gens))
            if u < g.forced_outage_rate
        )
        if _feasible(case, net, lines_out, gens_out):
            return OutageState(lines_out=lines_out, gens_out=gens_out)
    raise ResampleBudgetError(
        f"no feasible outage state within {config.max_resamples} draws")


def enumerate_deterministic(
    case: NetworkCase, net: ActiveNetwork, order: int
) -> list[OutageState]:
    """All feasible outage states of the given contingency order.

    Order 1 lists every single line or generator outage; order 2 lists
    every unordered pair of element outages. The intact state is never
    included. Feasible states get equal weights summing to one.
    """
    if order not in (1, 2):
        raise ValueError(f"contingency order must be 1 or 2, got {order}")

    elements: list[tuple[frozenset[int], frozenset[int]]] = []
    for ln in net.lines:
        elements.append((frozenset([ln.id]), frozenset()))
    for k in range(len(case.generators)):
        elements.append((frozenset(), frozenset([k])))

    if order == 1:
        combos = elements
    else:
        combos = [
            (l1 | l2, g1 | g2)
            for (l1, g1), (l2, g2) in combinations(elements, 2)
        ]

    feasible = [
        OutageState(lines_out=lo, gens_out=go)
        for lo, go in combos
        if _feasible(case, net, lo, go)
    ]
    if not feasible:
        return []
    w = 1.0 / len(feasible)
    return [
        OutageState(lines_out=s.lines_out, gens_out=s.gens_out, weight=w)
        for s in feasible
    ]
