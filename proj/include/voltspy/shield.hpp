#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "voltspy/attacks.hpp"
#include "voltspy/telemetry.hpp"

namespace voltspy {

// Mean aggregation over consecutive non-overlapping w-sample windows; the
// countermeasure. Trailing remainder dropped, labels preserved. A trip
// shorter than w comes back empty (callers filter).
Trip aggregate_trip(const Trip& trip, size_t w);

// Seeded subsample preserving class proportions within one row per class.
FeatureMatrix stratified_reduce(const FeatureMatrix& rows, size_t target_count, uint64_t seed);

struct SweepCell {
    size_t window_size = 0;
    ModelKind kind = ModelKind::RF;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
};

struct SweepResult {
    Objective objective = Objective::style;
    uint64_t seed = 0;
    std::vector<size_t> sizes;  // ascending
    std::vector<SweepCell> cells;

    // window_size,model_kind,accuracy,macro_f1
    std::string to_csv() const;
    double accuracy_at(size_t size, ModelKind kind) const;
};

// The accuracy-degradation sweep: per window size, aggregate every trip,
// equalize the row count across sizes (to the count at the largest size,
// further capped by base_row_cap) by stratified reduction, and run the
// per-sample attack.
SweepResult sweep(const Dataset& ds, Objective objective, std::vector<size_t> sizes,
                  const std::vector<ModelKind>& kinds, uint64_t seed,
                  size_t base_row_cap = 25000);

}  // namespace voltspy
