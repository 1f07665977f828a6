#include "voltspy/synthgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include <nlohmann/json.hpp>

#include "voltspy/csvio.hpp"
#include "voltspy/parallel.hpp"
#include "voltspy/rng.hpp"

namespace voltspy {

namespace {

constexpr double kAirDensity = 1.225;
constexpr double kGravity = 9.81;
constexpr double kOccupantMassKg = 75.0;

// Battery state-of-health range: wide so capacity alone does not pin down
// the vehicle model.
constexpr double kSohLo = 0.55;
constexpr double kSohHi = 1.00;

// Speed model.
constexpr double kStopProb = 0.55;        // chance of a stop at a segment boundary
constexpr double kOscPerNoise = 0.22;     // pedal dither fraction per m/s of noise amp
constexpr double kBrakeRatio = 1.3;       // braking strength over accel strength
constexpr double kStopSpeed = 0.35;       // below this a braking vehicle is stopped
constexpr size_t kMaxSamples = 2400;      // hard duration cap

// Channel sensor noise.
constexpr double kPowerNoiseW = 12.0;
constexpr double kPowerNoiseRel = 0.004;
constexpr double kTorqueNoiseNm = 0.6;
constexpr double kRpmNoise = 3.0;

}  // namespace

double instantaneous_power(double v, double a, double slope, const VehicleParams& vp,
                           double total_mass, double aux_w) {
    const double traction = total_mass * a * v + 0.5 * kAirDensity * vp.cda_m2 * v * v * v +
                            vp.crr * total_mass * kGravity * v +
                            total_mass * kGravity * std::sin(slope) * v;
    if (traction >= 0.0) return traction / vp.eta + aux_w;
    return vp.eta_regen * traction + aux_w;
}

Trip generate_trip(const ScenarioConfig& cfg) {
    if (cfg.occupancy < 1 || cfg.occupancy > 5)
        throw DataError("generate_trip: occupancy must be in [1,5]");
    if (cfg.aux_w < 0.0) throw DataError("generate_trip: aux_w must be >= 0");
    if (cfg.route.segments.size() < 2)
        throw DataError("generate_trip: route needs at least 2 segments");
    if (!(cfg.sample_period_s > 0.0)) throw DataError("generate_trip: bad sample period");

    Rng speed_rng(mix_seed(cfg.noise_seed, hash_str("speed")));
    Rng sensor_rng(mix_seed(cfg.noise_seed, hash_str("sensor")));

    const double dt = cfg.sample_period_s;
    const double total_mass = cfg.vehicle.mass_kg + kOccupantMassKg * cfg.occupancy;
    const double capacity = cfg.vehicle.capacity_wh * sensor_rng.uniform(kSohLo, kSohHi);
    const double a_max = cfg.driver.accel_ms2;
    const double brake_max = kBrakeRatio * a_max;
    const double gain = a_max / 3.0;
    const double osc_frac = kOscPerNoise * cfg.driver.noise_amp;
    // Aggressive drivers dwell less at stops.
    const double dwell_scale = std::clamp(1.9 - 0.45 * a_max, 0.4, 1.8);

    const auto& segs = cfg.route.segments;
    std::vector<double> seg_end(segs.size());
    double acc_len = 0.0;
    for (size_t s = 0; s < segs.size(); ++s) {
        acc_len += segs[s].length_m;
        seg_end[s] = acc_len;
    }

    struct SegPlan {
        double target = 0.0;
        bool stop_at_end = false;
        int dwell = 0;
        double osc_period = 10.0;
    };
    auto plan_segment = [&](size_t s) {
        SegPlan p;
        const double jitter = speed_rng.uniform(-0.05, 0.05);
        p.target = std::max(0.0, segs[s].limit_mps * cfg.driver.speed_mult * (1.0 + jitter));
        const double stop_roll = speed_rng.uniform();
        const double dwell_raw = speed_rng.uniform(3.0, 14.0);
        p.osc_period = speed_rng.uniform(6.0, 14.0);
        p.stop_at_end = s + 1 == segs.size() || stop_roll < kStopProb;
        p.dwell = std::max(2, static_cast<int>(std::lround(dwell_raw * dwell_scale)));
        return p;
    };

    Trip trip;
    trip.trip_id = cfg.trip_id.empty() ? cfg.route.id : cfg.trip_id;
    trip.labels.driver = cfg.driver_id;
    trip.labels.vehicle = cfg.vehicle.name;
    trip.labels.style = cfg.driver.style;
    trip.labels.occupancy = cfg.occupancy;
    trip.labels.aux_w = cfg.aux_w;
    trip.labels.origin = cfg.route.origin;
    trip.labels.destination = cfg.route.destination;

    double pos = 0.0, v = 0.0, phase = 0.0;
    size_t seg = 0;
    SegPlan plan = plan_segment(0);
    int dwell_remaining = 0;
    bool done = false;
    int tail_samples = 0;

    double consumed = 0.0, regen = 0.0, prev_power = 0.0, prev_v = 0.0;

    for (size_t i = 0; i < kMaxSamples && !done; ++i) {
        const double t = static_cast<double>(i) * dt;

        if (i > 0) {
            if (dwell_remaining > 0) {
                v = 0.0;
                --dwell_remaining;
                if (dwell_remaining == 0) {
                    if (seg + 1 >= segs.size()) {
                        done = true;
                    } else {
                        pos = seg_end[seg];
                        ++seg;
                        plan = plan_segment(seg);
                    }
                }
            } else {
                const double remaining = seg_end[seg] - pos;
                const double brake_dist =
                    v * v / (2.0 * 0.8 * brake_max) + v * dt;
                double target;
                bool stopping = false;
                if (plan.stop_at_end && remaining <= brake_dist) {
                    target = 0.0;
                    stopping = true;
                } else {
                    phase += 2.0 * std::numbers::pi / plan.osc_period;
                    target = plan.target * (1.0 + osc_frac * std::sin(phase));
                }
                double a_des = std::clamp(gain * (target - v), -brake_max, a_max);
                double v_new = v + a_des * dt;
                if (!stopping || v > 1.0)
                    v_new += cfg.driver.noise_amp * speed_rng.normal() * std::sqrt(dt);
                else
                    speed_rng.normal();  // keep the stream position fixed
                v_new = std::max(0.0, v_new);
                if (stopping && v_new <= kStopSpeed) v_new = 0.0;
                pos += 0.5 * (v + v_new) * dt;
                v = v_new;

                if (stopping && v == 0.0) {
                    if (seg + 1 >= segs.size()) {
                        if (++tail_samples >= 2) done = true;
                    } else {
                        dwell_remaining = plan.dwell;
                    }
                } else if (!plan.stop_at_end && pos >= seg_end[seg]) {
                    if (seg + 1 >= segs.size()) {
                        done = true;
                    } else {
                        ++seg;
                        plan = plan_segment(seg);
                    }
                }
            }
        }

        const double a = i == 0 ? 0.0 : (v - prev_v) / dt;
        const double slope = segs[seg].slope_rad;
        const double power =
            instantaneous_power(v, a, slope, cfg.vehicle, total_mass, cfg.aux_w);

        if (i > 0) {
            const double step_wh = 0.5 * (prev_power + power) * dt / 3600.0;
            if (step_wh >= 0.0)
                consumed += step_wh;
            else
                regen += -step_wh;
            if (regen > consumed) regen = consumed;  // recovered energy was spent first
        }
        const double net = consumed - regen;
        if (net >= capacity)
            throw DataError("generate_trip: trip depletes the battery; use a larger capacity");

        TelemetrySample s;
        s.t = t;
        s.capacity_wh = capacity;
        s.soc_pct = std::max(0.0, 100.0 * (1.0 - net / capacity));
        s.energy_consumed_wh = consumed;
        s.energy_regen_wh = regen;
        s.consumption_avg_mwh = t > 0.0 ? 1000.0 * net / (t / 3600.0) : 0.0;
        s.motor_power_w =
            power + sensor_rng.normal() * (kPowerNoiseW + kPowerNoiseRel * std::fabs(power));
        double force = total_mass * a;
        if (v > 0.05)
            force += 0.5 * kAirDensity * cfg.vehicle.cda_m2 * v * v +
                     cfg.vehicle.crr * total_mass * kGravity +
                     total_mass * kGravity * std::sin(slope);
        s.torque_nm = force / cfg.vehicle.drive_ratio_per_m + sensor_rng.normal() * kTorqueNoiseNm;
        s.rpm = std::max(
            0.0, v * cfg.vehicle.drive_ratio_per_m * 60.0 / (2.0 * std::numbers::pi) +
                     sensor_rng.normal() * kRpmNoise);
        trip.samples.push_back(s);

        prev_power = power;
        prev_v = v;
    }

    return trip;
}

Dataset generate_dataset(const std::vector<ScenarioConfig>& grid, uint64_t master_seed) {
    if (grid.empty()) throw DataError("generate_dataset: empty grid");

    Dataset ds;
    ds.trips.resize(grid.size());
    parallel_for(grid.size(), [&](size_t i) {
        ScenarioConfig cfg = grid[i];
        cfg.noise_seed = mix_seed(master_seed, cfg.noise_seed);
        ds.trips[i] = generate_trip(cfg);
    });

    std::set<std::string> ids;
    for (const auto& t : ds.trips)
        if (!ids.insert(t.trip_id).second)
            throw DataError("generate_dataset: duplicate trip_id " + t.trip_id);
    return ds;
}

// ---- Presets ---------------------------------------------------------------

const std::vector<VehicleParams>& vehicle_presets() {
    // Synthetic analogs of the simulated fleet, not measured parameters.
    static const std::vector<VehicleParams> v = {
        {"bmw_i3", 1345.0, 0.69, 0.0105, 0.90, 0.62, 42200.0, 27.7},
        {"vw_id3", 1805.0, 0.59, 0.0110, 0.91, 0.58, 58000.0, 24.0},
        {"vw_id4", 2120.0, 0.67, 0.0115, 0.90, 0.66, 77000.0, 26.0},
        {"vw_eup", 1160.0, 0.60, 0.0100, 0.89, 0.55, 36800.0, 29.5},
        {"suv",    2380.0, 0.95, 0.0120, 0.88, 0.60, 90000.0, 22.0},
    };
    return v;
}

const std::vector<DriverProfile>& style_profiles() {
    static const std::vector<DriverProfile> v = {
        {"aggressive", 1.10, 2.50, 0.50},
        {"moderate", 1.00, 1.60, 0.30},
        {"defensive", 0.91, 0.95, 0.16},
    };
    return v;
}

namespace {

struct CityProfile {
    // Departure and arrival roads: (length, limit, slope) pairs.
    RouteSegment dep[2];
    RouteSegment arr[2];
};

const std::array<CityProfile, 10>& city_profiles() {
    static const std::array<CityProfile, 10> cities = {{
        {{{130, 8.5, 0.030}, {190, 12.0, 0.012}}, {{180, 11.0, -0.020}, {110, 7.0, 0.004}}},
        {{{150, 11.5, -0.024}, {200, 14.0, -0.006}}, {{170, 12.5, 0.016}, {120, 8.0, -0.010}}},
        {{{110, 7.5, 0.048}, {170, 10.5, 0.022}}, {{200, 13.5, -0.032}, {130, 9.0, -0.014}}},
        {{{160, 13.0, -0.010}, {210, 15.5, 0.004}}, {{150, 10.0, 0.026}, {100, 6.5, 0.040}}},
        {{{140, 9.5, 0.000}, {180, 11.5, -0.028}}, {{160, 12.0, 0.036}, {120, 8.5, 0.018}}},
        {{{120, 10.0, 0.020}, {200, 13.0, 0.034}}, {{190, 14.0, -0.044}, {110, 7.5, -0.006}}},
        {{{170, 12.0, -0.036}, {160, 9.0, -0.016}}, {{140, 10.5, 0.008}, {130, 9.5, 0.030}}},
        {{{100, 6.5, 0.014}, {190, 11.0, 0.042}}, {{180, 13.0, -0.002}, {140, 10.0, -0.024}}},
        {{{150, 14.5, 0.006}, {170, 16.0, -0.020}}, {{120, 8.0, -0.038}, {150, 11.5, 0.010}}},
        {{{130, 9.0, -0.042}, {150, 10.0, 0.028}}, {{170, 11.0, 0.022}, {160, 12.5, -0.016}}},
    }};
    return cities;
}

std::string city_name(size_t k) { return "c" + std::to_string(k); }

RouteProfile make_route(size_t route_idx, size_t origin, size_t destination) {
    const auto& cities = city_profiles();
    RouteProfile r;
    r.id = "r" + std::to_string(route_idx);
    r.origin = city_name(origin);
    r.destination = city_name(destination);
    r.segments.push_back(cities[origin].dep[0]);
    r.segments.push_back(cities[origin].dep[1]);
    // Middle segments: fixed per route, derived from a constant stream.
    Rng mid(mix_seed(0x5e9f3a11ULL, route_idx));
    const int n_mid = 2 + static_cast<int>(mid.index(3));
    for (int m = 0; m < n_mid; ++m) {
        RouteSegment seg;
        seg.length_m = 150.0 + 90.0 * mid.uniform();
        seg.limit_mps = 9.0 + 7.0 * mid.uniform();
        seg.slope_rad = mid.uniform(-0.03, 0.03);
        r.segments.push_back(seg);
    }
    r.segments.push_back(cities[destination].arr[0]);
    r.segments.push_back(cities[destination].arr[1]);
    return r;
}

}  // namespace

const std::vector<RouteProfile>& route_presets() {
    static const std::vector<RouteProfile> routes = [] {
        // (origin, destination) city pairs; the first 7 are the desk set and
        // cover all 10 city ids.
        const std::pair<size_t, size_t> pairs[21] = {
            {0, 5}, {0, 6}, {1, 5}, {1, 7}, {2, 8}, {3, 9}, {4, 9},
            {5, 0}, {6, 1}, {7, 2}, {8, 3}, {9, 4}, {2, 6}, {3, 7},
            {4, 8}, {5, 1}, {6, 0}, {7, 9}, {8, 0}, {9, 3}, {1, 4},
        };
        std::vector<RouteProfile> out;
        for (size_t i = 0; i < 21; ++i) out.push_back(make_route(i, pairs[i].first, pairs[i].second));
        return out;
    }();
    return routes;
}

namespace {

DriverProfile desk_driver(size_t style_idx, size_t rep, std::string* id_out) {
    const DriverProfile& base = style_profiles()[style_idx];
    Rng jit(mix_seed(hash_str(base.style), rep));
    DriverProfile d = base;
    d.speed_mult *= 1.0 + jit.uniform(-0.02, 0.02);
    d.accel_ms2 *= 1.0 + jit.uniform(-0.07, 0.07);
    d.noise_amp *= 1.0 + jit.uniform(-0.10, 0.10);
    *id_out = "d_" + base.style.substr(0, 3) + std::to_string(rep);
    return d;
}

std::vector<ScenarioConfig> build_grid(size_t n_routes, const std::vector<double>& aux_levels,
                                       size_t n_reps) {
    std::vector<ScenarioConfig> grid;
    uint64_t seq = 0;
    size_t trip_no = 0;
    char idbuf[16];
    for (const auto& vehicle : vehicle_presets())
        for (size_t si = 0; si < style_profiles().size(); ++si)
            for (int occ = 1; occ <= 5; ++occ)
                for (double aux : aux_levels)
                    for (size_t ri = 0; ri < n_routes; ++ri)
                        for (size_t rep = 0; rep < n_reps; ++rep) {
                            ScenarioConfig cfg;
                            cfg.vehicle = vehicle;
                            cfg.driver = desk_driver(si, rep, &cfg.driver_id);
                            cfg.route = route_presets()[ri];
                            cfg.occupancy = occ;
                            cfg.aux_w = aux;
                            cfg.sample_period_s = 1.0;
                            cfg.noise_seed = seq++;
                            std::snprintf(idbuf, sizeof(idbuf), "t%05zu", trip_no++);
                            cfg.trip_id = idbuf;
                            grid.push_back(std::move(cfg));
                        }
    return grid;
}

}  // namespace

std::vector<ScenarioConfig> desk_grid() { return build_grid(7, {0.0, 500.0, 1000.0, 1500.0}, 3); }

std::vector<ScenarioConfig> full_grid() { return build_grid(21, {0.0, 500.0, 1000.0}, 9); }

std::vector<ScenarioConfig> driver_study_grid() {
    static const std::vector<std::pair<std::string, DriverProfile>> drivers = {
        {"amber", {"aggressive", 1.12, 2.60, 0.55}},
        {"blake", {"moderate", 1.02, 1.75, 0.36}},
        {"casey", {"moderate", 0.98, 1.45, 0.24}},
        {"devon", {"defensive", 0.90, 0.95, 0.15}},
    };
    std::vector<ScenarioConfig> grid;
    uint64_t seq = 0;
    size_t trip_no = 0;
    char idbuf[16];
    for (const auto& [name, profile] : drivers)
        for (size_t vi = 0; vi < 2; ++vi)
            for (size_t ri = 0; ri < 7; ++ri)
                for (int occ : {1, 3})
                    for (double aux : {0.0, 500.0})
                        for (size_t rep = 0; rep < 3; ++rep) {
                            ScenarioConfig cfg;
                            cfg.vehicle = vehicle_presets()[vi];
                            cfg.driver = profile;
                            cfg.driver_id = name;
                            cfg.route = route_presets()[ri];
                            cfg.occupancy = occ;
                            cfg.aux_w = aux;
                            cfg.sample_period_s = 1.0;
                            cfg.noise_seed = seq++;
                            std::snprintf(idbuf, sizeof(idbuf), "t%05zu", trip_no++);
                            cfg.trip_id = idbuf;
                            grid.push_back(std::move(cfg));
                        }
    return grid;
}

std::string presets_json() {
    nlohmann::ordered_json j;
    for (const auto& v : vehicle_presets()) {
        nlohmann::ordered_json jv;
        jv["mass_kg"] = v.mass_kg;
        jv["cda_m2"] = v.cda_m2;
        jv["crr"] = v.crr;
        jv["eta"] = v.eta;
        jv["eta_regen"] = v.eta_regen;
        jv["capacity_wh"] = v.capacity_wh;
        jv["drive_ratio_per_m"] = v.drive_ratio_per_m;
        j["vehicles"][v.name] = jv;
    }
    for (const auto& d : style_profiles()) {
        nlohmann::ordered_json jd;
        jd["speed_mult"] = d.speed_mult;
        jd["accel_ms2"] = d.accel_ms2;
        jd["noise_amp"] = d.noise_amp;
        j["styles"][d.style] = jd;
    }
    for (const auto& r : route_presets()) {
        nlohmann::ordered_json jr;
        jr["origin"] = r.origin;
        jr["destination"] = r.destination;
        double len = 0.0;
        for (const auto& s : r.segments) len += s.length_m;
        jr["length_m"] = len;
        jr["segments"] = r.segments.size();
        j["routes"][r.id] = jr;
    }
    j["grids"] = {{"desk", "5 vehicles x 3 styles x 5 occupancies x 4 aux x 7 routes x 3 reps"},
                  {"full", "5 vehicles x 3 styles x 5 occupancies x 3 aux x 21 routes x 9 reps"}};
    return j.dump(2);
}

}  // namespace voltspy
