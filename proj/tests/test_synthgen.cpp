#include <doctest.h>

#include <cmath>
#include <iostream>
#include <map>

#include "support/testutil.hpp"
#include "voltspy/synthgen.hpp"

using namespace voltspy;

namespace {

ScenarioConfig base_config() {
    ScenarioConfig cfg;
    cfg.vehicle = vehicle_presets()[0];
    cfg.driver = style_profiles()[1];
    cfg.driver_id = "tester";
    cfg.route = route_presets()[0];
    cfg.occupancy = 1;
    cfg.aux_w = 500.0;
    cfg.sample_period_s = 1.0;
    cfg.noise_seed = 7;
    cfg.trip_id = "t_base";
    return cfg;
}

}  // namespace

TEST_CASE("instantaneous_power: standstill draws exactly the auxiliary load") {
    const auto& vp = vehicle_presets()[0];
    CHECK(instantaneous_power(0.0, 0.0, 0.0, vp, vp.mass_kg, 750.0) == 750.0);
    CHECK(instantaneous_power(0.0, 0.0, 0.1, vp, vp.mass_kg, 0.0) == 0.0);
}

TEST_CASE("instantaneous_power: flat-road cruise matches the closed form") {
    const auto& vp = vehicle_presets()[1];
    const double v = 13.0, m = vp.mass_kg + 150.0, aux = 300.0;
    const double expect =
        (0.5 * 1.225 * vp.cda_m2 * v * v * v + vp.crr * m * 9.81 * v) / vp.eta + aux;
    CHECK(instantaneous_power(v, 0.0, 0.0, vp, m, aux) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("instantaneous_power: regeneration scales braking power by eta_regen") {
    const auto& vp = vehicle_presets()[0];
    const double v = 10.0, a = -2.0, m = vp.mass_kg;
    const double traction =
        m * a * v + 0.5 * 1.225 * vp.cda_m2 * v * v * v + vp.crr * m * 9.81 * v;
    REQUIRE(traction < 0.0);
    CHECK(instantaneous_power(v, a, 0.0, vp, m, 100.0) ==
          doctest::Approx(vp.eta_regen * traction + 100.0).epsilon(1e-12));
}

TEST_CASE("generate_trip: deterministic for a fixed config") {
    const auto cfg = base_config();
    const Trip a = generate_trip(cfg);
    const Trip b = generate_trip(cfg);
    CHECK(a == b);
    CHECK(a.samples.size() >= 60);
    CHECK(a.samples.size() <= 2400);
}

TEST_CASE("generate_trip: cumulative channels and energy conservation") {
    auto cfg = base_config();
    for (uint64_t seed : {1ull, 2ull, 3ull}) {
        cfg.noise_seed = seed;
        const Trip t = generate_trip(cfg);
        for (size_t i = 1; i < t.samples.size(); ++i) {
            CHECK(t.samples[i].t > t.samples[i - 1].t);
            CHECK(t.samples[i].energy_consumed_wh >= t.samples[i - 1].energy_consumed_wh);
            CHECK(t.samples[i].energy_regen_wh >= t.samples[i - 1].energy_regen_wh);
            CHECK(t.samples[i].energy_regen_wh <= t.samples[i].energy_consumed_wh);
        }
        const auto& last = t.samples.back();
        const double net = last.energy_consumed_wh - last.energy_regen_wh;
        const double from_soc = last.capacity_wh * (100.0 - last.soc_pct) / 100.0;
        CHECK(std::fabs(net - from_soc) <= 1e-6 * std::max(1.0, net));
    }
}

TEST_CASE("generate_trip: occupancy strictly increases consumption") {
    auto cfg = base_config();
    cfg.occupancy = 1;
    const Trip one = generate_trip(cfg);
    cfg.occupancy = 5;
    const Trip five = generate_trip(cfg);
    CHECK(five.samples.back().energy_consumed_wh > one.samples.back().energy_consumed_wh);
}

TEST_CASE("generate_trip: auxiliary load on a zero-speed route integrates exactly") {
    auto cfg = base_config();
    cfg.driver.noise_amp = 0.0;  // vehicle never moves
    cfg.route.segments = {{50.0, 0.0, 0.0}, {50.0, 0.0, 0.0}};
    cfg.aux_w = 1500.0;
    const Trip hot = generate_trip(cfg);
    cfg.aux_w = 0.0;
    const Trip cold = generate_trip(cfg);
    REQUIRE(hot.samples.size() == cold.samples.size());
    const double duration_h = hot.samples.back().t / 3600.0;
    const double diff =
        hot.samples.back().energy_consumed_wh - cold.samples.back().energy_consumed_wh;
    CHECK(diff == doctest::Approx(1500.0 * duration_h).epsilon(1e-9));
}

TEST_CASE("generate_trip: zero regen efficiency never accumulates regen") {
    auto cfg = base_config();
    cfg.vehicle.eta_regen = 0.0;
    const Trip t = generate_trip(cfg);
    CHECK(t.samples.back().energy_regen_wh == 0.0);
}

TEST_CASE("generate_trip: same route and seed give the same speed profile across vehicles") {
    auto cfg = base_config();
    cfg.vehicle = vehicle_presets()[0];
    const Trip a = generate_trip(cfg);
    cfg.vehicle = vehicle_presets()[4];
    const Trip b = generate_trip(cfg);
    REQUIRE(a.samples.size() == b.samples.size());
    size_t power_diff = 0;
    for (size_t i = 0; i < a.samples.size(); ++i) {
        // rpm = speed * drive ratio (plus a few rpm of sensor noise).
        const double va = *a.samples[i].rpm / vehicle_presets()[0].drive_ratio_per_m;
        const double vb = *b.samples[i].rpm / vehicle_presets()[4].drive_ratio_per_m;
        CHECK(std::fabs(va - vb) < 1.5);
        if (std::fabs(*a.samples[i].motor_power_w - *b.samples[i].motor_power_w) > 100.0)
            ++power_diff;
    }
    CHECK(power_diff > a.samples.size() / 4);  // but the power profiles differ
}

TEST_CASE("generate_trip: battery depletion raises an error") {
    auto cfg = base_config();
    cfg.vehicle.capacity_wh = 40.0;
    CHECK_THROWS_AS(generate_trip(cfg), DataError);
}

TEST_CASE("generate_dataset: grid sizes and determinism") {
    CHECK(desk_grid().size() == 6300);
    CHECK(full_grid().size() == 42525);
    CHECK(driver_study_grid().size() == 672);

    const auto grid = desk_grid();
    std::vector<ScenarioConfig> slice(grid.begin(), grid.begin() + 12);
    const Dataset a = generate_dataset(slice, 42);
    const Dataset b = generate_dataset(slice, 42);
    CHECK(a.trips.size() == 12);
    for (size_t i = 0; i < a.trips.size(); ++i) CHECK(a.trips[i] == b.trips[i]);

    const Dataset c = generate_dataset(slice, 43);
    bool any_diff = false;
    for (size_t i = 0; i < a.trips.size() && !any_diff; ++i)
        if (!(a.trips[i] == c.trips[i])) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("generate_dataset: style separation in consumption averages") {
    // Strict ordering of group means per vehicle; a slice of the desk grid
    // keeps this fast, the acceptance suite exercises the full grid.
    const auto grid = desk_grid();
    std::vector<ScenarioConfig> slice;
    for (size_t i = 0; i < grid.size(); i += 7) slice.push_back(grid[i]);
    const Dataset ds = generate_dataset(slice, 42);

    std::map<std::string, std::map<std::string, std::pair<double, size_t>>> acc;
    for (const auto& t : ds.trips) {
        auto& cell = acc[*t.labels.vehicle][*t.labels.style];
        cell.first += t.samples.back().consumption_avg_mwh;
        cell.second += 1;
    }
    for (const auto& [vehicle, styles] : acc) {
        const auto mean = [&](const char* s) {
            const auto& cell = styles.at(s);
            return cell.first / static_cast<double>(cell.second);
        };
        CAPTURE(vehicle);
        CHECK(mean("aggressive") > mean("moderate"));
        CHECK(mean("moderate") > mean("defensive"));
    }
}

TEST_CASE("route presets: distinct start or end signatures") {
    const auto& routes = route_presets();
    REQUIRE(routes.size() == 21);
    for (size_t i = 0; i < routes.size(); ++i) {
        REQUIRE(routes[i].segments.size() >= 2);
        for (size_t j = i + 1; j < routes.size(); ++j) {
            const bool same_start = routes[i].origin == routes[j].origin;
            const bool same_end = routes[i].destination == routes[j].destination;
            CHECK((!same_start || !same_end));
        }
    }
}

TEST_CASE("driver profiles: aggressiveness ordering") {
    const auto& styles = style_profiles();
    REQUIRE(styles.size() == 3);
    CHECK(styles[0].accel_ms2 > styles[1].accel_ms2);
    CHECK(styles[1].accel_ms2 > styles[2].accel_ms2);
}

TEST_CASE("synthgen diagnostics" * doctest::skip(false)) {
    auto cfg = base_config();
    for (size_t si = 0; si < 3; ++si) {
        cfg.driver = style_profiles()[si];
        const Trip t = generate_trip(cfg);
        double pmin = 1e18, pmax = -1e18, stops = 0;
        for (const auto& s : t.samples) {
            pmin = std::min(pmin, *s.motor_power_w);
            pmax = std::max(pmax, *s.motor_power_w);
            if (*s.rpm < 1.0) ++stops;
        }
        std::cout << "[diag] style=" << cfg.driver.style << " n=" << t.samples.size()
                  << " consumed=" << t.samples.back().energy_consumed_wh
                  << " regen=" << t.samples.back().energy_regen_wh
                  << " cons_avg=" << t.samples.back().consumption_avg_mwh << " pmin=" << pmin
                  << " pmax=" << pmax
                  << " stop_frac=" << stops / static_cast<double>(t.samples.size()) << "\n";
    }
}
