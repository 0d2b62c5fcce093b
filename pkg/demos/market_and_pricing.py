"""
Dynamic pricing and the secondary spectrum market
=================================================

The same network and traffic under four market designs: fixed or
traffic-following (dynamic) prices, crossed with non-delay-tolerant
demand (served the moment it appears) or delay-tolerant demand (shifted
toward the cheapest spectrum slot).  Delay tolerance moves the demand
peak into the overnight trough, exactly when stations can actually
sleep, so more blocks get leased at a lower unit price and both sides
of the market win.
"""

import math

from hetlease import SaParams, leasing_revenue_slot, reference_variants, solve_day

variants = reference_variants()
params = SaParams(rng_seed=0)

print(f"{'variant':<12} {'daily rev':>10} {'SN spend':>10} {'RBs leased':>10} {'cost/RB':>9}")
rows = {}
for name, scenario in variants.items():
    result = solve_day(scenario, "sa", params)
    leased = sum(
        scenario.demand(j, t)
        for t in range(scenario.num_slots)
        for j in range(1, scenario.num_sbs + 1)
        if not result.per_slot_switch[t].is_on(j)
    )
    spend = math.fsum(
        leasing_revenue_slot(scenario, t, result.per_slot_switch[t])
        for t in range(scenario.num_slots)
    )
    unit = spend / leased if leased else float("nan")
    rows[name] = (result.daily.total, spend, leased, unit)
    print(f"{name:<12} {result.daily.total:>10.3f} {spend:>10.3f} {leased:>10,} {unit:>9.5f}")

dt, ndt = rows["dynamic-dt"], rows["dynamic-ndt"]
print("\nunder dynamic pricing, delay-tolerant demand changes the market:")
print(f"  primary revenue : {ndt[0]:8.2f} -> {dt[0]:8.2f}  ({dt[0] / ndt[0] - 1:+.1%})")
print(f"  secondary spend : {ndt[1]:8.2f} -> {dt[1]:8.2f}  ({dt[1] / ndt[1] - 1:+.1%})")
print(f"  blocks leased   : {ndt[2]:8,} -> {dt[2]:8,}  ({dt[2] / ndt[2] - 1:+.1%})")
print(f"  unit cost       : {ndt[3]:8.5f} -> {dt[3]:8.5f}  ({dt[3] / ndt[3] - 1:+.1%})")

# Crucially the served traffic itself never moves: switching decisions
# route the same primary load either locally or through the macro, so
# throughput is identical across all four designs (the invariance the
# metrics module checks).  Only money changes hands differently.
