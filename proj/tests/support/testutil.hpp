#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "voltspy/matrix.hpp"
#include "voltspy/rng.hpp"
#include "voltspy/telemetry.hpp"

namespace voltspy::test {

inline bool close_rel(double a, double b, double rel, double abs_floor = 1e-9) {
    const double diff = std::fabs(a - b);
    return diff <= abs_floor || diff <= rel * std::max(std::fabs(a), std::fabs(b));
}

inline std::vector<double> random_series(Rng& rng, size_t n, double lo = -5.0, double hi = 5.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

// Small labeled matrix: per class, rows drawn around a class-specific center.
inline FeatureMatrix blob_matrix(Rng& rng, size_t per_class, size_t n_classes, size_t dims,
                                 double spread = 0.5, double separation = 3.0) {
    FeatureMatrix m;
    for (size_t j = 0; j < dims; ++j) m.names.push_back("f" + std::to_string(j));
    std::vector<double> row(dims);
    for (size_t c = 0; c < n_classes; ++c) {
        for (size_t i = 0; i < per_class; ++i) {
            for (size_t j = 0; j < dims; ++j)
                row[j] = separation * static_cast<double>(c) + spread * rng.normal();
            m.append_row(row, "class" + std::to_string(c),
                         {"trip" + std::to_string(c * per_class + i), 0});
        }
    }
    return m;
}

// A hand-built telemetry trip with the five core channels and no extras.
inline Trip make_trip(const std::string& id, size_t n, TripLabels labels = {}) {
    Trip t;
    t.trip_id = id;
    t.labels = labels;
    double consumed = 0.0, regen = 0.0;
    for (size_t i = 0; i < n; ++i) {
        TelemetrySample s;
        s.t = static_cast<double>(i);
        s.capacity_wh = 40000.0;
        consumed += 2.0 + 0.3 * std::sin(0.7 * static_cast<double>(i));
        regen += 0.2;
        if (regen > consumed) regen = consumed;
        s.energy_consumed_wh = consumed;
        s.energy_regen_wh = regen;
        s.soc_pct = 100.0 * (1.0 - (consumed - regen) / s.capacity_wh);
        s.consumption_avg_mwh = i == 0 ? 0.0 : 1000.0 * (consumed - regen) / (s.t / 3600.0);
        t.samples.push_back(s);
    }
    return t;
}

}  // namespace voltspy::test
