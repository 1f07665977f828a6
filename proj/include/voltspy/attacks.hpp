#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "voltspy/featurex.hpp"
#include "voltspy/learners.hpp"
#include "voltspy/metrics.hpp"
#include "voltspy/telemetry.hpp"

namespace voltspy {

enum class Objective { style, vehicle, occupancy, auxiliary, driver, origin, destination };

const char* objective_name(Objective o);
Objective objective_from_name(const std::string& name);
const std::vector<Objective>& all_objectives();

enum class FlowKind { per_sample, catalog };

// One of the seven canonical attack pipelines: which label to infer, which
// of the two extraction flows to use, and how to window the trips.
struct AttackSpec {
    Objective objective = Objective::style;
    FlowKind flow = FlowKind::per_sample;
    WindowSpec window = WindowSpec::per_sample();
    std::string target_label = "style";
    double region_fraction = 0.2;
};

AttackSpec canonical_spec(Objective objective, double region_fraction = 0.2);

struct AttackResult {
    AttackSpec spec;
    ModelKind kind = ModelKind::RF;
    Hyperparams best;
    EvalReport report;
    uint64_t seed = 0;
    size_t trip_count = 0;
    std::vector<std::pair<std::string, size_t>> class_histogram;
    std::vector<std::pair<std::string, size_t>> train_histogram;  // post-balance

    std::string to_json() const;
};

struct AttackOptions {
    uint64_t seed = 42;
    bool balance = false;       // undersample the training rows to balance
    double train_ratio = 0.8;
    // Stratified row cap applied before splitting, for tractable grid
    // searches on per-sample flows (a full desk grid is ~1M samples).
    size_t row_cap = 25000;
};

// Full pipeline from a labeled dataset: segment, extract, split (row-level
// for per-sample, trip-level for catalog), optional balance, impute/select/
// standardize fit on train, grid search per kind, evaluate on the held-out
// rows. Deterministic for a fixed seed.
std::vector<AttackResult> run_attack(const Dataset& ds, const AttackSpec& spec,
                                     const std::vector<ModelKind>& kinds,
                                     const AttackOptions& opt);

// Same pipeline starting from already-extracted rows (labels filled in);
// the countermeasure sweep enters here after aggregation.
std::vector<AttackResult> run_attack_rows(FeatureMatrix rows, const AttackSpec& spec,
                                          const std::vector<ModelKind>& kinds,
                                          const AttackOptions& opt);

// Mean accuracy drop over `repeats` seeded within-column shuffles, ranked
// descending (ties by feature name).
std::vector<std::pair<std::string, double>> permutation_importance(
    const Model& model, const FeatureMatrix& X_test, const std::vector<std::string>& y_test,
    int repeats, uint64_t seed);

}  // namespace voltspy
