"""Power draw and operator revenue for a switch decision.

Revenue per slot has two streams.  Energy revenue is the electricity
cost avoided relative to leaving every station on: the power saving in
watts, integrated over the slot, priced per kWh.  It can be negative
when offloading makes the macro amplifier work harder than the small
cells it replaced.  Leasing revenue is the secondary network's payment
for the resource blocks of every off SBS.
"""

from __future__ import annotations

import math

from .feasibility import offload_contribution, offloaded_mbs_load
from .model import (
    InfeasibleSwitchError,
    RevenueBreakdown,
    Scenario,
    SwitchVector,
)

# watt-minutes per kilowatt-hour: 1000 W x 60 min
WATT_MIN_PER_KWH = 60000.0


def energy_factor(scenario: Scenario) -> float:
    """kWh per watt of sustained draw over one slot."""
    return scenario.grid.slot_min / WATT_MIN_PER_KWH


def all_on_power_slot(scenario: Scenario, slot: int) -> float:
    """Network power draw in watts with every station serving its own load."""
    return scenario._allon_power_by_slot[slot]


def hetnet_power_slot(scenario: Scenario, slot: int, switch: SwitchVector) -> float:
    """Network power draw in watts under a switch vector.

    The macro cell runs at its offloaded load; off SBSs draw sleep
    power.  Raises InfeasibleSwitchError if the offloaded macro load
    exceeds 1, where the hardware power model stops being defined.
    """
    mbs_load = offloaded_mbs_load(scenario, slot, switch)
    if mbs_load > 1.0:
        raise InfeasibleSwitchError(
            f"offloaded macro load {mbs_load} exceeds 1 in slot {slot}"
        )
    active = scenario._active_power_by_slot[slot]
    sleep = scenario._sleep_powers
    gamma = switch.gamma
    total = scenario.stations[0].power(mbs_load)
    for j in range(1, len(gamma)):
        total += active[j] if gamma[j] else sleep[j]
    return total


def power_saving_slot(scenario: Scenario, slot: int, switch: SwitchVector) -> float:
    """Watts saved versus the all-on network; negative when switching costs power."""
    return all_on_power_slot(scenario, slot) - hetnet_power_slot(scenario, slot, switch)


def energy_revenue_slot(scenario: Scenario, slot: int, switch: SwitchVector) -> float:
    """Electricity cost avoided in this slot, in currency units."""
    saving = power_saving_slot(scenario, slot, switch)
    return saving * energy_factor(scenario) * scenario._elec_by_slot[slot]


def leasing_revenue_slot(scenario: Scenario, slot: int, switch: SwitchVector) -> float:
    """Income from leasing the resource blocks of every off SBS."""
    price = scenario._spectrum_by_slot[slot]
    demands = scenario._demands_by_slot[slot]
    gamma = switch.gamma
    revenue = 0.0
    for j in range(1, len(gamma)):
        if not gamma[j]:
            revenue += demands[j - 1] * price
    return revenue


def total_revenue_slot(
    scenario: Scenario, slot: int, switch: SwitchVector
) -> RevenueBreakdown:
    """Canonical per-slot objective; every solver reports through this."""
    return RevenueBreakdown.of(
        energy_revenue_slot(scenario, slot, switch),
        leasing_revenue_slot(scenario, slot, switch),
    )


def sbs_off_weights(scenario: Scenario, slot: int) -> list[float]:
    """Marginal revenue of switching each SBS off, one weight per SBS.

    Both revenue streams are additive across off stations: the SBS-side
    power terms are independent, the macro power model is linear in
    load, and leasing income is a per-station product.  Total revenue of
    any switch vector therefore equals the sum of these weights over its
    off set, which gives solvers an O(1)-update objective.
    """
    mbs = scenario.stations[0]
    factor = energy_factor(scenario)
    elec = scenario._elec_by_slot[slot]
    rb_price = scenario._spectrum_by_slot[slot]
    weights = []
    for j in range(1, scenario.num_sbs + 1):
        bs = scenario.stations[j]
        saving = (
            bs.power(scenario.load(j, slot))
            - bs.p_sleep
            - offload_contribution(scenario, j, slot) * mbs.zeta * mbs.p_tx
        )
        weights.append(saving * factor * elec + scenario.demand(j, slot) * rb_price)
    return weights


def closed_form_revenue_slot(
    scenario: Scenario, slot: int, switch: SwitchVector
) -> float:
    """Total revenue via the additive weights; agrees with the canonical
    breakdown to within float re-association (~1e-12)."""
    weights = sbs_off_weights(scenario, slot)
    revenue = 0.0
    for j in range(1, scenario.num_sbs + 1):
        if not switch.is_on(j):
            revenue += weights[j - 1]
    return revenue


def daily_revenue(
    scenario: Scenario, switches: list[SwitchVector]
) -> RevenueBreakdown:
    """Re-evaluate a full day of switch vectors through the canonical objective."""
    if len(switches) != scenario.num_slots:
        raise ValueError(
            f"{len(switches)} switch vectors for {scenario.num_slots} slots"
        )
    energy = math.fsum(
        energy_revenue_slot(scenario, t, sw) for t, sw in enumerate(switches)
    )
    leasing = math.fsum(
        leasing_revenue_slot(scenario, t, sw) for t, sw in enumerate(switches)
    )
    return RevenueBreakdown.of(energy, leasing)
