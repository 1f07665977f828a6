#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "voltspy/telemetry.hpp"

namespace voltspy {

struct VehicleParams {
    std::string name;
    double mass_kg = 0.0;
    double cda_m2 = 0.0;    // drag area Cd*A
    double crr = 0.0;       // rolling resistance coefficient
    double eta = 0.0;       // drivetrain efficiency (0,1]
    double eta_regen = 0.0; // regeneration efficiency [0,1)
    double capacity_wh = 0.0;
    double drive_ratio_per_m = 0.0;  // gear ratio / wheel radius, rad per meter
};

struct DriverProfile {
    std::string style;      // aggressive | moderate | defensive
    double speed_mult = 1.0;   // target speed over the limit
    double accel_ms2 = 1.5;    // acceleration aggressiveness
    double noise_amp = 0.3;    // speed noise amplitude, m/s
};

struct RouteSegment {
    double length_m = 0.0;
    double limit_mps = 0.0;
    double slope_rad = 0.0;
};

struct RouteProfile {
    std::string id;
    std::string origin;       // city id
    std::string destination;  // city id
    std::vector<RouteSegment> segments;
};

struct ScenarioConfig {
    VehicleParams vehicle;
    DriverProfile driver;
    std::string driver_id;
    RouteProfile route;
    int occupancy = 1;          // adds 75 kg per occupant
    double aux_w = 0.0;
    double sample_period_s = 1.0;
    uint64_t noise_seed = 0;
    std::string trip_id;
};

// Battery-terminal power for one operating point. Traction demand over the
// drivetrain efficiency when pulling, scaled by the regen efficiency when
// braking; auxiliary load always added.
double instantaneous_power(double v, double a, double slope, const VehicleParams& vp,
                           double total_mass, double aux_w);

// One seeded trip: a target-tracking speed profile over the route segments
// (stops at some segment boundaries, style-scaled dither) integrated into
// the battery channels. Pure function of the config.
Trip generate_trip(const ScenarioConfig& cfg);

// One trip per config, seeds derived per config from the master seed.
Dataset generate_dataset(const std::vector<ScenarioConfig>& grid, uint64_t master_seed);

const std::vector<VehicleParams>& vehicle_presets();  // 5 models
const std::vector<DriverProfile>& style_profiles();   // 3 canonical styles
const std::vector<RouteProfile>& route_presets();     // 21 routes over 10 city ids

// 5 vehicles x 3 styles x 5 occupancies x 4 aux levels x 7 routes x 3
// repetitions = 6300 trips. Driver ids name the (style, repetition) pair.
std::vector<ScenarioConfig> desk_grid();
// 5 x 3 x 5 x 3 aux levels x 21 routes x 9 repetitions = 42,525 trips.
std::vector<ScenarioConfig> full_grid();
// Four named drivers with distinct personal profiles; the driver
// identification study setup (672 trips).
std::vector<ScenarioConfig> driver_study_grid();

std::string presets_json();

}  // namespace voltspy
