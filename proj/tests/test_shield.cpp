#include <doctest.h>

#include <cmath>

#include "support/testutil.hpp"
#include "voltspy/shield.hpp"
#include "voltspy/synthgen.hpp"

using namespace voltspy;

TEST_CASE("aggregate_trip: w=1 is the identity") {
    const Trip t = test::make_trip("a", 17);
    const Trip out = aggregate_trip(t, 1);
    REQUIRE(out.samples.size() == t.samples.size());
    for (size_t i = 0; i < t.samples.size(); ++i) {
        CHECK(std::fabs(out.samples[i].t - t.samples[i].t) <= 1e-12);
        CHECK(std::fabs(out.samples[i].energy_consumed_wh - t.samples[i].energy_consumed_wh) <=
              1e-12);
        CHECK(std::fabs(out.samples[i].soc_pct - t.samples[i].soc_pct) <= 1e-12);
    }
    CHECK(out.labels == t.labels);
}

TEST_CASE("aggregate_trip: pairwise means") {
    Trip t = test::make_trip("a", 4);
    for (size_t i = 0; i < 4; ++i) t.samples[i].soc_pct = static_cast<double>(i + 1);
    const Trip out = aggregate_trip(t, 2);
    REQUIRE(out.samples.size() == 2);
    CHECK(out.samples[0].soc_pct == doctest::Approx(1.5));
    CHECK(out.samples[1].soc_pct == doctest::Approx(3.5));
    CHECK(out.samples[0].t == doctest::Approx(0.5));
}

TEST_CASE("aggregate_trip: output length, remainder dropped, short trips empty") {
    Rng rng(40);
    for (int rep = 0; rep < 20; ++rep) {
        const size_t n = 2 + static_cast<size_t>(rng.index(150));
        const size_t w = 1 + static_cast<size_t>(rng.index(20));
        const Trip t = test::make_trip("a", n);
        const Trip out = aggregate_trip(t, w);
        CHECK(out.samples.size() == n / w);
    }
    const Trip t = test::make_trip("a", 5);
    const Trip empty = aggregate_trip(t, 10);
    CHECK(empty.samples.empty());
    CHECK(empty.trip_id == "a");
}

TEST_CASE("aggregate_trip: cumulative channels stay non-decreasing") {
    auto cfg = [] {
        ScenarioConfig c;
        c.vehicle = vehicle_presets()[0];
        c.driver = style_profiles()[0];
        c.driver_id = "d";
        c.route = route_presets()[0];
        c.noise_seed = 3;
        c.trip_id = "x";
        return c;
    }();
    const Trip t = generate_trip(cfg);
    for (size_t w : {2ul, 7ul, 10ul}) {
        const Trip out = aggregate_trip(t, w);
        for (size_t i = 1; i < out.samples.size(); ++i) {
            CHECK(out.samples[i].energy_consumed_wh >= out.samples[i - 1].energy_consumed_wh);
            CHECK(out.samples[i].energy_regen_wh >= out.samples[i - 1].energy_regen_wh);
        }
    }
}

TEST_CASE("aggregate_trip: commutes with channel selection") {
    Trip t = test::make_trip("a", 20);
    for (auto& s : t.samples) {
        s.motor_power_w = s.energy_consumed_wh * 2.0;
        s.rpm = 100.0;
    }
    const Trip agg_then_drop = [&] {
        Trip out = aggregate_trip(t, 3);
        for (auto& s : out.samples) s.motor_power_w.reset();
        return out;
    }();
    const Trip drop_then_agg = [&] {
        Trip copy = t;
        for (auto& s : copy.samples) s.motor_power_w.reset();
        return aggregate_trip(copy, 3);
    }();
    CHECK(agg_then_drop == drop_then_agg);
}

TEST_CASE("stratified_reduce: proportions and edge cases") {
    Rng rng(41);
    FeatureMatrix m;
    m.names = {"x"};
    const auto add = [&](const std::string& cls, size_t n) {
        for (size_t i = 0; i < n; ++i) {
            const double v = rng.uniform();
            m.append_row({&v, 1}, cls, {"t" + cls + std::to_string(i), 0});
        }
    };

    SUBCASE("target equals row count: unchanged multiset") {
        add("a", 500);
        add("b", 500);
        const auto out = stratified_reduce(m, 1000, 5);
        CHECK(out.rows() == 1000);
        CHECK(label_histogram(out.labels) == label_histogram(m.labels));
    }
    SUBCASE("50/50 preserved") {
        add("a", 500);
        add("b", 500);
        const auto out = stratified_reduce(m, 100, 5);
        auto hist = label_histogram(out.labels);
        CHECK(hist[0].second == 50);
        CHECK(hist[1].second == 50);
    }
    SUBCASE("90/10 at target 50 becomes 45/5") {
        add("a", 90);
        add("b", 10);
        const auto out = stratified_reduce(m, 50, 5);
        auto hist = label_histogram(out.labels);
        CHECK(hist[0].second == 45);
        CHECK(hist[1].second == 5);
    }
    SUBCASE("target below class count errors") {
        add("a", 5);
        add("b", 5);
        add("c", 5);
        CHECK_THROWS_AS(stratified_reduce(m, 2, 5), DataError);
        CHECK_THROWS_AS(stratified_reduce(m, 100, 5), DataError);  // above row count
    }
    SUBCASE("deterministic per seed") {
        add("a", 40);
        add("b", 20);
        const auto o1 = stratified_reduce(m, 30, 9);
        const auto o2 = stratified_reduce(m, 30, 9);
        CHECK(o1.values == o2.values);
    }
}

TEST_CASE("sweep: usage errors") {
    Dataset ds;
    TripLabels l;
    l.occupancy = 2;
    ds.trips.push_back(test::make_trip("a", 30, l));
    CHECK_THROWS_AS(sweep(ds, Objective::occupancy, {10}, {ModelKind::RF}, 1), UsageError);
}

TEST_CASE("sweep: oversized window names the size") {
    Dataset ds;
    for (int i = 0; i < 6; ++i) {
        TripLabels l;
        l.style = i % 2 == 0 ? "aggressive" : "defensive";
        ds.trips.push_back(test::make_trip("t" + std::to_string(i), 20, l));
    }
    CHECK_THROWS_WITH_AS(sweep(ds, Objective::style, {64}, {ModelKind::DT}, 1),
                         doctest::Contains("64"), DataError);
}

TEST_CASE("sweep: equal row budget across sizes and sane output shape") {
    // Tiny synthetic set so the sweep runs fast: trips of ~40+ samples.
    std::vector<ScenarioConfig> grid;
    uint64_t seq = 0;
    for (size_t si = 0; si < 3; ++si)
        for (size_t ri = 0; ri < 2; ++ri)
            for (size_t rep = 0; rep < 6; ++rep) {
                ScenarioConfig cfg;
                cfg.vehicle = vehicle_presets()[si % 2 == 0 ? 0 : 3];
                cfg.driver = style_profiles()[si];
                cfg.driver_id = "d";
                cfg.route = route_presets()[ri];
                cfg.noise_seed = seq++;
                cfg.trip_id = "t" + std::to_string(seq);
                grid.push_back(std::move(cfg));
            }
    const Dataset ds = generate_dataset(grid, 11);

    const auto res = sweep(ds, Objective::style, {5, 25}, {ModelKind::DT}, 3);
    REQUIRE(res.cells.size() == 2);
    CHECK(res.cells[0].window_size == 5);
    CHECK(res.cells[1].window_size == 25);
    for (const auto& c : res.cells) {
        CHECK(c.accuracy >= 0.0);
        CHECK(c.accuracy <= 1.0);
    }
    const std::string csv = res.to_csv();
    CHECK(csv.find("window_size,model_kind,accuracy,macro_f1\n") == 0);
    CHECK(csv.find("\n5,dt,") != std::string::npos);
}
