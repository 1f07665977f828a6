#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "support/testutil.hpp"
#include "voltspy/telemetry.hpp"

using namespace voltspy;

namespace {

const char* kSamplesTwoRows =
    "trip_id,t,capacity_wh,soc_pct,energy_consumed_wh,energy_regen_wh,consumption_avg_mwh\n"
    "a,0,40000,100,0,0,0\n"
    "a,1,40000,99.9,5,1,3000\n";

const char* kLabelsStyleNeutral =
    "trip_id,driver,vehicle,style,occupancy,aux_w,origin,destination\n"
    "a,,bmw_i3,neutral,2,500,c0,c5\n";

Dataset parse(const std::string& samples, const std::string& labels) {
    std::istringstream s(samples), l(labels);
    return parse_trip_csv(s, l);
}

}  // namespace

TEST_CASE("parse_trip_csv: minimal two-row file") {
    const Dataset ds = parse(kSamplesTwoRows, kLabelsStyleNeutral);
    REQUIRE(ds.trips.size() == 1);
    const Trip& t = ds.trips[0];
    CHECK(t.trip_id == "a");
    REQUIRE(t.samples.size() == 2);
    CHECK(t.samples[0].t == 0.0);
    CHECK(t.samples[1].energy_consumed_wh == 5.0);
    CHECK(!t.samples[0].motor_power_w.has_value());
}

TEST_CASE("parse_trip_csv: style alias neutral becomes moderate") {
    const Dataset ds = parse(kSamplesTwoRows, kLabelsStyleNeutral);
    CHECK(ds.trips[0].labels.style == "moderate");
    CHECK(ds.trips[0].labels.occupancy == 2);
    CHECK(ds.trips[0].labels.aux_w == 500.0);
    CHECK(!ds.trips[0].labels.driver.has_value());
}

TEST_CASE("parse_trip_csv: validation errors carry line numbers") {
    const std::string header =
        "trip_id,t,capacity_wh,soc_pct,energy_consumed_wh,energy_regen_wh,consumption_avg_mwh\n";
    const std::string labels = "trip_id,driver,vehicle,style,occupancy,aux_w,origin,destination\n";

    SUBCASE("soc above 100") {
        CHECK_THROWS_WITH_AS(parse(header + "a,0,40000,120,0,0,0\na,1,40000,99,1,0,1\n", labels),
                             doctest::Contains("line 2"), DataError);
    }
    SUBCASE("malformed number") {
        CHECK_THROWS_WITH_AS(parse(header + "a,0,40000,100,0,0,0\na,1,forty,99,1,0,1\n", labels),
                             doctest::Contains("line 3"), DataError);
    }
    SUBCASE("duplicate timestamp") {
        CHECK_THROWS_WITH_AS(parse(header + "a,1,40000,100,0,0,0\na,1,40000,99,1,0,1\n", labels),
                             doctest::Contains("duplicate"), DataError);
    }
    SUBCASE("non-monotone timestamp") {
        CHECK_THROWS_WITH_AS(parse(header + "a,2,40000,100,0,0,0\na,1,40000,99,1,0,1\n", labels),
                             doctest::Contains("monotone"), DataError);
    }
    SUBCASE("decreasing cumulative energy") {
        CHECK_THROWS_AS(parse(header + "a,0,40000,100,5,0,0\na,1,40000,99,1,0,1\n", labels),
                        DataError);
    }
    SUBCASE("single-sample trip") {
        CHECK_THROWS_AS(parse(header + "a,0,40000,100,0,0,0\n", labels), DataError);
    }
    SUBCASE("occupancy out of range") {
        CHECK_THROWS_AS(
            parse(kSamplesTwoRows,
                  "trip_id,driver,vehicle,style,occupancy,aux_w,origin,destination\na,,,,9,,,\n"),
            DataError);
    }
    SUBCASE("unknown style") {
        CHECK_THROWS_AS(
            parse(kSamplesTwoRows,
                  "trip_id,driver,vehicle,style,occupancy,aux_w,origin,destination\na,,,calm,,,,\n"),
            DataError);
    }
}

TEST_CASE("telemetry: parse then re-serialize round-trips") {
    Rng rng(99);
    Dataset ds;
    for (int k = 0; k < 8; ++k) {
        TripLabels labels;
        labels.vehicle = "veh" + std::to_string(k % 3);
        labels.style = k % 2 == 0 ? "aggressive" : "defensive";
        labels.occupancy = 1 + k % 5;
        if (k % 2 == 0) labels.aux_w = 500.0;
        if (k % 3 == 0) labels.origin = "c1";
        Trip t = test::make_trip("trip" + std::to_string(k), 10 + static_cast<size_t>(k), labels);
        if (k % 2 == 1)
            for (auto& s : t.samples) {
                s.motor_power_w = rng.uniform(-5000.0, 30000.0);
                s.rpm = rng.uniform(0.0, 4000.0);
            }
        ds.trips.push_back(std::move(t));
    }

    std::ostringstream samples, labels;
    write_samples_csv(ds, samples);
    write_labels_csv(ds, labels);
    const Dataset back = parse(samples.str(), labels.str());

    REQUIRE(back.trips.size() == ds.trips.size());
    for (size_t i = 0; i < ds.trips.size(); ++i) CHECK(back.trips[i] == ds.trips[i]);
    CHECK(back.label_schema() == ds.label_schema());
}

TEST_CASE("dataset: common channels require every trip") {
    Dataset ds;
    ds.trips.push_back(test::make_trip("a", 5));
    ds.trips.push_back(test::make_trip("b", 5));
    CHECK(ds.common_channels().size() == 5);
    for (auto& s : ds.trips[0].samples) s.rpm = 100.0;
    CHECK(ds.common_channels().size() == 5);  // only one trip has rpm
    for (auto& s : ds.trips[1].samples) s.rpm = 50.0;
    const auto ch = ds.common_channels();
    CHECK(ch.size() == 6);
    CHECK(ch.back() == "rpm");
}

TEST_CASE("split_train_test: exact proportions and determinism") {
    FeatureMatrix m;
    m.names = {"x"};
    const size_t counts[4] = {40, 30, 20, 10};
    for (size_t c = 0; c < 4; ++c)
        for (size_t i = 0; i < counts[c]; ++i) {
            const double v = static_cast<double>(c * 100 + i);
            m.append_row({&v, 1}, "class" + std::to_string(c), {"t", 0});
        }

    auto [train, test] = split_train_test(m, 0.8, 7, true);
    CHECK(train.rows() == 80);
    CHECK(test.rows() == 20);
    auto hist = label_histogram(test.labels);
    CHECK(hist[0].second == 8);
    CHECK(hist[1].second == 6);
    CHECK(hist[2].second == 4);
    CHECK(hist[3].second == 2);

    auto [train2, test2] = split_train_test(m, 0.8, 7, true);
    CHECK(train2.values == train.values);
    CHECK(test2.labels == test.labels);

    // Partition property: disjoint and covering.
    std::multiset<double> all(m.values.begin(), m.values.end());
    std::multiset<double> got(train.values.begin(), train.values.end());
    got.insert(test.values.begin(), test.values.end());
    CHECK(got == all);
}

TEST_CASE("split_train_test: ten balanced rows give an 8/2 split") {
    FeatureMatrix m;
    m.names = {"x"};
    for (int i = 0; i < 10; ++i) {
        const double v = i;
        m.append_row({&v, 1}, i < 5 ? "a" : "b", {"t", 0});
    }
    auto [train, test] = split_train_test(m, 0.8, 3, true);
    CHECK(train.rows() == 8);
    CHECK(test.rows() == 2);
    auto hist = label_histogram(test.labels);
    CHECK(hist[0].second == 1);
    CHECK(hist[1].second == 1);
}

TEST_CASE("split_train_test: single-row class fails under stratification") {
    FeatureMatrix m;
    m.names = {"x"};
    const double v = 1.0;
    m.append_row({&v, 1}, "lonely", {"t", 0});
    m.append_row({&v, 1}, "other", {"t", 0});
    m.append_row({&v, 1}, "other", {"t", 0});
    CHECK_THROWS_WITH_AS(split_train_test(m, 0.8, 1, true), doctest::Contains("lonely"), DataError);
}

TEST_CASE("undersample_balance: already balanced input is unchanged as a multiset") {
    Rng rng(5);
    auto m = test::blob_matrix(rng, 5, 2, 2);
    const auto out = undersample_balance(m, 11);
    CHECK(out.rows() == 10);
    CHECK(label_histogram(out.labels) == label_histogram(m.labels));
}

TEST_CASE("undersample_balance: reduces every class to the minority count") {
    Rng rng(6);
    FeatureMatrix m;
    m.names = {"x"};
    const auto add = [&](const std::string& cls, size_t n) {
        for (size_t i = 0; i < n; ++i) {
            const double v = rng.uniform();
            m.append_row({&v, 1}, cls, {"t", 0});
        }
    };
    add("a", 10);
    add("b", 4);
    const auto out = undersample_balance(m, 3);
    auto hist = label_histogram(out.labels);
    CHECK(hist[0].second == 4);
    CHECK(hist[1].second == 4);

    FeatureMatrix m2;
    m2.names = {"x"};
    for (const auto& cls : {"a", "a", "a", "a", "a", "a", "a", "b", "b", "b", "c", "c", "c"}) {
        const double v = rng.uniform();
        m2.append_row({&v, 1}, cls, {"t", 0});
    }
    const auto o1 = undersample_balance(m2, 1);
    const auto o2 = undersample_balance(m2, 2);
    for (const auto& [cls, count] : label_histogram(o1.labels)) CHECK(count == 3);
    for (const auto& [cls, count] : label_histogram(o2.labels)) CHECK(count == 3);

    CHECK_THROWS_AS(undersample_balance(FeatureMatrix{}, 1), DataError);
}
