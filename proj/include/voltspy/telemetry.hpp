#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "voltspy/matrix.hpp"

namespace voltspy {

// One timestamped reading of the battery channels. Core channels are always
// present; extras depend on the data source.
struct TelemetrySample {
    double t = 0.0;  // seconds since trip start
    double capacity_wh = 0.0;
    double soc_pct = 0.0;
    double energy_consumed_wh = 0.0;
    double energy_regen_wh = 0.0;
    double consumption_avg_mwh = 0.0;
    std::optional<double> soh_pct;
    std::optional<double> motor_power_w;
    std::optional<double> torque_nm;
    std::optional<double> rpm;

    bool operator==(const TelemetrySample&) const = default;
};

inline constexpr std::array<const char*, 5> kCoreChannels = {
    "capacity_wh", "soc_pct", "energy_consumed_wh", "energy_regen_wh", "consumption_avg_mwh"};
inline constexpr std::array<const char*, 4> kExtraChannels = {"soh_pct", "motor_power_w",
                                                              "torque_nm", "rpm"};

// Channel value by name; nullopt for an absent extra.
std::optional<double> channel_value(const TelemetrySample& s, const std::string& channel);

struct TripLabels {
    std::optional<std::string> driver;
    std::optional<std::string> vehicle;
    std::optional<std::string> style;  // aggressive | moderate | defensive
    std::optional<int> occupancy;      // 1..5
    std::optional<double> aux_w;
    std::optional<std::string> origin;
    std::optional<std::string> destination;

    bool operator==(const TripLabels&) const = default;
    bool any() const;
    // Label value as a categorical string, nullopt if absent or unknown name.
    std::optional<std::string> get(const std::string& name) const;
};

inline constexpr std::array<const char*, 7> kLabelNames = {
    "driver", "vehicle", "style", "occupancy", "aux_w", "origin", "destination"};

struct Trip {
    std::string trip_id;
    std::vector<TelemetrySample> samples;
    TripLabels labels;

    bool operator==(const Trip&) const = default;
};

struct Dataset {
    std::vector<Trip> trips;

    // Label names carried by at least one trip.
    std::vector<std::string> label_schema() const;
    // Channels present in every sample of every trip (core + shared extras).
    std::vector<std::string> common_channels() const;
};

// Long-format samples CSV plus a labels CSV keyed by trip_id. Validates all
// Trip/TelemetrySample invariants; throws DataError with a line number on
// malformed rows. The style alias "neutral" maps to "moderate".
Dataset parse_trip_csv(std::istream& samples, std::istream& labels);

void write_samples_csv(const Dataset& ds, std::ostream& out);
void write_labels_csv(const Dataset& ds, std::ostream& out);

// 80/20-style split. `ratio` is the train fraction. Stratified mode keeps
// class proportions within one row per class; both sides preserve input row
// order. Deterministic for a fixed seed.
std::pair<FeatureMatrix, FeatureMatrix> split_train_test(const FeatureMatrix& rows, double ratio,
                                                         uint64_t seed, bool stratify);

// Every class reduced to the minority-class count by seeded sampling
// without replacement.
FeatureMatrix undersample_balance(const FeatureMatrix& rows, uint64_t seed);

}  // namespace voltspy
