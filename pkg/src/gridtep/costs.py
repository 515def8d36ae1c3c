"""Monetary aggregation.

Expected-cost components price the adequacy expectations over the 12
monthly scenarios at 730 hours each: demand not served, generation not
served plus per-generator revenue loss on cut-off output, and wheeling
loss. Transmission investment combines a capital charge on new line
capacity (length-scaled rate 0.35*F + 0.19 k$/km, charged on the
increment for upgraded existing lines) with an operating charge on every
active line weighted by its outage-compensation factor
OCF = (1 - FOR)/FOR. Generation investment is capital on new units plus
the operating cost of the intact-network base dispatch; it does not
depend on the line plan. The objective is J = EC + T_inv + G_inv.

Everything is kept in k$ internally; reports convert to M$.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .network import (
    CANDIDATE,
    ActiveNetwork,
    CostParameters,
    NetworkCase,
)


@dataclass(frozen=True)
class CostBreakdown:
    edns_cost: float  # k$
    egns_cost: float
    ewl_cost: float
    ec: float
    t_inv: float
    g_inv: float
    j: float

    def in_millions(self) -> dict[str, float]:
        return {
            "edns_cost": self.edns_cost / 1000.0,
            "egns_cost": self.egns_cost / 1000.0,
            "ewl_cost": self.ewl_cost / 1000.0,
            "ec": self.ec / 1000.0,
            "t_inv": self.t_inv / 1000.0,
            "g_inv": self.g_inv / 1000.0,
            "j": self.j / 1000.0,
        }


def _check_12(name: str, values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.shape != (12,):
        raise ValueError(f"{name} must have 12 monthly entries, got shape {arr.shape}")
    return arr


def edns_cost(edns_by_month, costs: CostParameters) -> float:
    """730 * sum_t c_edns(t) * EDNS(t), in k$."""
    edns = _check_12("edns_by_month", edns_by_month)
    return float(costs.hours_per_month * np.dot(np.asarray(costs.c_edns), edns))


def egns_cost(
    egns_by_month,
    ego_by_month_per_gen,
    costs: CostParameters,
    generators,
) -> float:
    """730 * sum_t [c_egns(t)*EGNS(t) + sum_s c_rl(s)*EGO_s(t)], in k$."""
    egns = _check_12("egns_by_month", egns_by_month)
    ego = np.asarray(ego_by_month_per_gen, dtype=float)
    if ego.shape != (12, len(generators)):
        raise ValueError(
            f"ego_by_month_per_gen must have shape (12, {len(generators)}), "
            f"got {ego.shape}")
    rl = np.array([g.revenue_loss_rate for g in generators], dtype=float)
    monthly = np.asarray(costs.c_egns) * egns + ego @ rl
    return float(costs.hours_per_month * monthly.sum())


def ewl_cost(ewl_by_month, costs: CostParameters) -> float:
    """730 * sum_t c_ewl(t) * EWL(t), in k$."""
    ewl = _check_12("ewl_by_month", ewl_by_month)
    return float(costs.hours_per_month * np.dot(np.asarray(costs.c_ewl), ewl))


def line_capital_rate(capacity_mw: float) -> float:
    """Capital cost per km of line at the given rating: 0.35*F + 0.19 k$/km."""
    if capacity_mw < 0:
        raise ValueError("capacity must be >= 0")
    return 0.35 * capacity_mw + 0.19


def outage_compensation_factor(forced_outage_rate: float) -> float:
    """(1 - FOR) / FOR; zero (with a warning) for FOR = 0."""
    if forced_outage_rate == 0:
        warnings.warn(
            "line with FOR = 0 gets outage compensation factor 0; "
            "its operating charge vanishes", stacklevel=2)
        return 0.0
    return (1.0 - forced_outage_rate) / forced_outage_rate


def transmission_investment(
    net: ActiveNetwork,
    costs: CostParameters,
    include_operating: bool = True,
) -> float:
    """Line investment for a sized network, in k$.

    Capital: new lines pay the full-rating rate times length; existing
    lines pay only for capacity added beyond their base rating, at the
    rate evaluated on that increment. Operating: every active line pays
    c_t2 * length * rating * OCF.
    """
    capital = 0.0
    operating = 0.0
    for pos, ln in enumerate(net.lines):
        cap = net.capacities[pos]
        if ln.status == CANDIDATE:
            capital += line_capital_rate(cap) * ln.length_km
        else:
            increment = cap - ln.base_capacity_mw
            if increment > 0:
                capital += line_capital_rate(increment) * ln.length_km
        if include_operating:
            ocf = outage_compensation_factor(ln.forced_outage_rate)
            operating += costs.c_t2 * ln.length_km * cap * ocf
    return capital + operating


def generation_investment(case: NetworkCase, base_schedules) -> float:
    """Generator investment in k$: capital on new units plus the operating
    cost of the monthly base dispatch.

    ``base_schedules`` holds one fleet schedule (MW per generator) per
    month, from the intact-network merit dispatch. Capital rates are
    k$/kW and operating rates k$/kWh, hence the factor-1000 conversions
    from the MW/MWh quantities.
    """
    capital = sum(
        g.capital_cost * g.capacity_mw * 1000.0
        for g in case.generators if g.is_new
    )
    total_mw = np.zeros(len(case.generators))
    for schedule in base_schedules:
        total_mw += np.asarray(schedule, dtype=float)
    rates = np.array([g.operating_cost * 1000.0 for g in case.generators])
    operating = case.costs.hours_per_month * float(np.dot(rates, total_mw))
    return capital + operating


def objective(
    edns_k: float, egns_k: float, ewl_k: float, t_inv: float, g_inv: float
) -> CostBreakdown:
    """Assemble the full breakdown; J = EC + T_inv + G_inv."""
    ec = edns_k + egns_k + ewl_k
    return CostBreakdown(
        edns_cost=edns_k,
        egns_cost=egns_k,
        ewl_cost=ewl_k,
        ec=ec,
        t_inv=t_inv,
        g_inv=g_inv,
        j=ec + t_inv + g_inv,
    )
