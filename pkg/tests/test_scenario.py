import logging

import numpy as np
import pytest
import yaml

from hetlease import (
    BsKind,
    ConfigError,
    CsvFormatError,
    PriceKind,
    PricePolicy,
    TimeGrid,
    TrafficSeries,
    bench_scenario,
    build_pricing,
    build_scenario,
    default_electricity_multipliers,
    default_parameter_set,
    dt_shift,
    dynamic_electricity_price,
    dynamic_spectrum_price,
    ingest_activity_csv,
    load_config,
    normalize_series,
    offloaded_mbs_load,
    reference_config,
    reference_scenario,
    save_config,
    scenario_to_config,
    sn_demand_from_pn,
    synth_traffic,
    validate_config,
)
from hetlease.model import SwitchVector


class TestSynthTraffic:
    def test_shape_and_positivity(self):
        raw = synth_traffic(0, 144, 5)
        assert raw.shape == (5, 144)
        assert raw.min() > 0

    def test_deterministic_per_seed(self):
        assert np.array_equal(synth_traffic(3, 48, 4), synth_traffic(3, 48, 4))
        assert not np.array_equal(synth_traffic(3, 48, 4), synth_traffic(4, 48, 4))

    def test_station_series_are_independent_of_count(self):
        # station i's series must not change when more stations are added
        small = synth_traffic(9, 24, 2)
        large = synth_traffic(9, 24, 6)
        assert np.array_equal(small, large[:2])

    def test_diurnal_shape(self):
        raw = synth_traffic(0, 144, 1)[0]
        hours = (np.arange(144) + 0.5) * (24 / 144)
        peak_hour = hours[np.argmax(raw)]
        trough_hour = hours[np.argmin(raw)]
        assert 11 <= peak_hour <= 19
        assert trough_hour <= 9 or trough_hour >= 22

    def test_unknown_profile(self):
        with pytest.raises(ConfigError):
            synth_traffic(0, 144, 1, profile="square")


class TestIngestCsv:
    HEADER = "grid_id,slot_index,internet_activity\n"

    def write(self, tmp_path, body):
        path = tmp_path / "activity.csv"
        path.write_text(self.HEADER + body)
        return path

    def test_constant_single_grid(self, tmp_path):
        body = "".join(f"42,{t},5.0\n" for t in range(6))
        path = self.write(tmp_path, body)
        series = ingest_activity_csv(path, {42: 0}, 1, 6)
        assert np.array_equal(series, np.full((1, 6), 5.0))

    def test_grids_aggregate_by_sum(self, tmp_path):
        body = "1,0,2.0\n2,0,3.5\n1,1,1.0\n2,1,1.0\n"
        path = self.write(tmp_path, body)
        series = ingest_activity_csv(path, {1: 0, 2: 0}, 1, 2)
        assert np.array_equal(series, [[5.5, 2.0]])

    def test_unassigned_grid_is_ignored(self, tmp_path):
        body = "1,0,2.0\n999,0,77.0\n"
        path = self.write(tmp_path, body)
        series = ingest_activity_csv(path, {1: 0}, 1, 1)
        assert series[0, 0] == 2.0

    def test_bad_header(self, tmp_path):
        path = tmp_path / "activity.csv"
        path.write_text("grid,slot,value\n1,0,2.0\n")
        with pytest.raises(CsvFormatError):
            ingest_activity_csv(path, {1: 0}, 1, 1)

    def test_bad_row_reports_line_number(self, tmp_path):
        path = self.write(tmp_path, "1,0,2.0\n1,one,3.0\n")
        with pytest.raises(CsvFormatError, match="line 3"):
            ingest_activity_csv(path, {1: 0}, 1, 2)

    def test_slot_out_of_range(self, tmp_path):
        path = self.write(tmp_path, "1,9,2.0\n")
        with pytest.raises(CsvFormatError, match="slot_index"):
            ingest_activity_csv(path, {1: 0}, 1, 3)

    def test_negative_activity(self, tmp_path):
        path = self.write(tmp_path, "1,0,-2.0\n")
        with pytest.raises(CsvFormatError, match="negative"):
            ingest_activity_csv(path, {1: 0}, 1, 1)

    def test_station_without_grid(self, tmp_path):
        path = self.write(tmp_path, "1,0,2.0\n")
        with pytest.raises(ConfigError):
            ingest_activity_csv(path, {1: 0}, 2, 1)

    def test_assigned_grid_never_appears(self, tmp_path):
        path = self.write(tmp_path, "1,0,2.0\n")
        with pytest.raises(ConfigError, match="never appears"):
            ingest_activity_csv(path, {1: 0, 2: 1}, 2, 1)

    def test_missing_slots_fill_zero_and_warn(self, tmp_path, caplog):
        path = self.write(tmp_path, "1,0,2.0\n")
        with caplog.at_level(logging.WARNING):
            series = ingest_activity_csv(path, {1: 0}, 1, 4)
        assert np.array_equal(series, [[2.0, 0.0, 0.0, 0.0]])
        assert any("missing" in rec.message for rec in caplog.records)


class TestNormalize:
    def test_constant_series_becomes_all_ones(self):
        out = normalize_series(np.full((2, 5), 3.7))
        for ts in out:
            assert np.array_equal(ts.values, np.ones(5))

    def test_peak_maps_to_one(self):
        out = normalize_series(np.array([[1.0, 4.0, 2.0]]))
        assert np.array_equal(out[0].values, [0.25, 1.0, 0.5])

    def test_all_zero_station_rejected(self):
        with pytest.raises(ConfigError):
            normalize_series(np.zeros((1, 4)))


class TestSnDemand:
    MICRO = default_parameter_set()[BsKind.MICRO]

    def test_zero_beta_zero_demand(self):
        ts = TrafficSeries(values=[0.5, 1.0])
        demand = sn_demand_from_pn([ts], [self.MICRO], beta=0.0)
        assert np.array_equal(demand, np.zeros((1, 2), dtype=np.int64))

    def test_full_load_micro(self):
        # floor(0.7 * 1.0 * 50)
        ts = TrafficSeries(values=[1.0])
        demand = sn_demand_from_pn([ts], [self.MICRO], beta=0.7)
        assert demand[0, 0] == 35

    def test_never_exceeds_station_blocks(self):
        rng = np.random.default_rng(0)
        ts = TrafficSeries(values=rng.uniform(0, 1, 100))
        demand = sn_demand_from_pn([ts], [self.MICRO], beta=1.0)
        assert demand.max() <= self.MICRO.rb_capacity
        assert demand.dtype == np.int64

    def test_beta_out_of_range(self):
        ts = TrafficSeries(values=[0.5])
        with pytest.raises(ConfigError):
            sn_demand_from_pn([ts], [self.MICRO], beta=1.5)


class TestDtShift:
    def test_peak_moves_onto_cheapest_slot(self):
        length = 24
        demand = np.zeros((2, length), dtype=np.int64)
        demand[0, 10] = 9           # aggregate peak at slot 10
        demand[1, 10] = 5
        demand[1, 4] = 2
        price = np.ones(length)
        price[3] = 0.2              # cheapest at slot 3
        shifted = dt_shift(demand, price)
        assert np.array_equal(shifted, np.roll(demand, -7, axis=1))
        assert int(np.argmax(shifted.sum(axis=0))) == 3

    def test_totals_preserved_per_station(self):
        rng = np.random.default_rng(5)
        demand = rng.integers(0, 30, size=(4, 144))
        price = rng.uniform(0.1, 0.2, size=144)
        shifted = dt_shift(demand, price)
        assert np.array_equal(shifted.sum(axis=1), demand.sum(axis=1))

    def test_length_mismatch(self):
        with pytest.raises(ConfigError):
            dt_shift(np.zeros((1, 4), dtype=np.int64), np.ones(5))


class TestPricing:
    def test_default_multipliers_have_mean_one(self):
        mult = default_electricity_multipliers(144)
        assert mult.mean() == pytest.approx(1.0, rel=1e-12)
        assert mult.min() > 0

    def test_dynamic_electricity_scales_the_flat_price(self):
        mult = default_electricity_multipliers(144)
        price = dynamic_electricity_price(mult, 0.1293)
        assert price.min() == pytest.approx(0.1293 * mult.min(), rel=1e-12)
        assert price.max() == pytest.approx(0.1293 * mult.max(), rel=1e-12)

    def test_dynamic_spectrum_keeps_the_daily_mean(self):
        traffic = normalize_series(synth_traffic(1, 144, 4))
        price = dynamic_spectrum_price(traffic, 0.13)
        assert price.mean() == pytest.approx(0.13, abs=1e-12)
        # affine map into [0.5, 1.5] then mean-rescale: extremes keep ratio 3
        assert price.max() / price.min() == pytest.approx(3.0, rel=1e-9)

    def test_dynamic_spectrum_follows_traffic(self):
        traffic = normalize_series(synth_traffic(1, 144, 4))
        aggregate = np.sum([ts.values for ts in traffic], axis=0)
        price = dynamic_spectrum_price(traffic, 0.13)
        assert int(np.argmax(price)) == int(np.argmax(aggregate))
        assert int(np.argmin(price)) == int(np.argmin(aggregate))

    def test_constant_traffic_warns_and_degenerates(self, caplog):
        traffic = [TrafficSeries(values=np.full(6, 0.4))]
        with caplog.at_level(logging.WARNING):
            price = dynamic_spectrum_price(traffic, 0.13)
        assert np.array_equal(price, np.full(6, 0.13))
        assert any("constant" in rec.message for rec in caplog.records)

    def test_fixed_policy_rejects_shaped_multipliers(self):
        with pytest.raises(ConfigError):
            PricePolicy(kind=PriceKind.FIXED, electricity_multipliers=[1.0, 1.2])

    def test_build_pricing_fixed_is_flat(self):
        traffic = normalize_series(synth_traffic(0, 12, 2))
        pricing = build_pricing(PricePolicy(), traffic, TimeGrid(horizon_min=120, slot_min=10))
        assert np.array_equal(pricing.electricity, np.full(12, 0.1293))
        assert np.array_equal(pricing.spectrum, np.full(12, 0.13))

    def test_build_pricing_checks_multiplier_length(self):
        traffic = normalize_series(synth_traffic(0, 12, 2))
        policy = PricePolicy(
            kind=PriceKind.DYNAMIC, electricity_multipliers=np.ones(7)
        )
        with pytest.raises(ConfigError):
            build_pricing(policy, traffic, TimeGrid(horizon_min=120, slot_min=10))


class TestConfig:
    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError):
            validate_config({"grdi": {}})
        with pytest.raises(ConfigError):
            validate_config({"traffic": {"sede": 1}})

    def test_unknown_station_field_rejected(self):
        with pytest.raises(ConfigError):
            validate_config({"stations": [{"kind": "macro", "power": 10}]})

    def test_station_overrides_apply(self):
        config = validate_config(
            {"stations": [{"kind": "macro"}, {"kind": "micro", "p_o": 60.0}]}
        )
        scn = build_scenario(config)
        assert scn.stations[1].p_o == 60.0
        assert scn.stations[1].p_sleep == 39.0

    def test_scale_factors_cap_the_peak(self):
        config = validate_config(
            {
                "stations": [{"kind": "macro"}, {"kind": "micro"}],
                "traffic": {"seed": 1, "scale": [0.5, 1.0]},
            }
        )
        scn = build_scenario(config)
        assert scn.traffic[0].values.max() == pytest.approx(0.5, rel=1e-12)
        assert scn.traffic[1].values.max() == pytest.approx(1.0, rel=1e-12)

    def test_round_trip_through_yaml(self, tmp_path):
        config = reference_config(pricing="dynamic", demand_mode="dt")
        path = tmp_path / "scenario.yaml"
        save_config(config, path)
        rebuilt = build_scenario(load_config(path))
        original = build_scenario(config)
        for a, b in zip(original.traffic, rebuilt.traffic):
            assert np.array_equal(a.values, b.values)
        assert np.array_equal(original.sn_demand, rebuilt.sn_demand)
        assert np.array_equal(original.pricing.electricity, rebuilt.pricing.electricity)
        assert np.array_equal(original.pricing.spectrum, rebuilt.pricing.spectrum)

    def test_scenario_remembers_its_config(self):
        scn = reference_scenario()
        config = scenario_to_config(scn)
        again = build_scenario(config)
        assert np.array_equal(scn.sn_demand, again.sn_demand)

    def test_yaml_is_plain_data(self, tmp_path):
        path = tmp_path / "scenario.yaml"
        save_config(reference_config(), path)
        data = yaml.safe_load(path.read_text())
        assert data["demand"]["beta"] == 0.7


class TestStockScenarios:
    def test_reference_network_mix(self):
        scn = reference_scenario()
        kinds = [bs.kind for bs in scn.stations]
        assert kinds[0] == BsKind.MACRO
        assert len(kinds) == 13
        for kind in (BsKind.RRH, BsKind.MICRO, BsKind.PICO, BsKind.FEMTO):
            assert kinds.count(kind) == 3

    def test_variants_share_traffic(self, variants):
        assert set(variants) == {"fixed-ndt", "fixed-dt", "dynamic-ndt", "dynamic-dt"}
        base = variants["fixed-ndt"]
        for scn in variants.values():
            for i in range(base.num_sbs + 1):
                assert np.array_equal(scn.traffic[i].values, base.traffic[i].values)

    def test_variants_differ_where_expected(self, variants):
        fixed, dynamic = variants["fixed-ndt"], variants["dynamic-ndt"]
        assert not np.array_equal(fixed.pricing.spectrum, dynamic.pricing.spectrum)
        ndt, dt = variants["dynamic-ndt"], variants["dynamic-dt"]
        assert not np.array_equal(ndt.sn_demand, dt.sn_demand)
        assert np.array_equal(ndt.sn_demand.sum(axis=1), dt.sn_demand.sum(axis=1))

    def test_bench_instance_keeps_every_switch_feasible(self):
        scn = bench_scenario(4)
        for slot in range(scn.num_slots):
            for mask in range(16):
                switch = SwitchVector.from_off_mask(mask, 4)
                assert offloaded_mbs_load(scn, slot, switch) <= scn.mbs_capacity_limit

    def test_bench_worst_case_stays_under_the_limit(self):
        scn = bench_scenario(16)
        all_off = SwitchVector.from_off_mask((1 << 16) - 1, 16)
        worst = max(
            offloaded_mbs_load(scn, slot, all_off) for slot in range(scn.num_slots)
        )
        assert worst <= scn.mbs_capacity_limit
