#include "voltspy/shield.hpp"

#include <algorithm>
#include <map>

#include "voltspy/csvio.hpp"
#include "voltspy/rng.hpp"

namespace voltspy {

namespace {

// Mean of an optional channel over a window; absent unless present in every
// sample of the window.
std::optional<double> mean_extra(const std::vector<TelemetrySample>& samples, size_t start,
                                 size_t w, const char* channel) {
    double acc = 0.0;
    for (size_t i = start; i < start + w; ++i) {
        const auto v = channel_value(samples[i], channel);
        if (!v) return std::nullopt;
        acc += *v;
    }
    return acc / static_cast<double>(w);
}

}  // namespace

Trip aggregate_trip(const Trip& trip, size_t w) {
    if (w < 1) throw DataError("aggregate_trip: window size must be >= 1");
    Trip out;
    out.trip_id = trip.trip_id;
    out.labels = trip.labels;
    const size_t n = trip.samples.size();
    out.samples.reserve(n / w);
    for (size_t start = 0; start + w <= n; start += w) {
        TelemetrySample agg;
        double t = 0.0, cap = 0.0, soc = 0.0, cons = 0.0, regen = 0.0, avg = 0.0;
        for (size_t i = start; i < start + w; ++i) {
            const auto& s = trip.samples[i];
            t += s.t;
            cap += s.capacity_wh;
            soc += s.soc_pct;
            cons += s.energy_consumed_wh;
            regen += s.energy_regen_wh;
            avg += s.consumption_avg_mwh;
        }
        const double dw = static_cast<double>(w);
        agg.t = t / dw;
        agg.capacity_wh = cap / dw;
        agg.soc_pct = soc / dw;
        agg.energy_consumed_wh = cons / dw;
        agg.energy_regen_wh = regen / dw;
        agg.consumption_avg_mwh = avg / dw;
        agg.soh_pct = mean_extra(trip.samples, start, w, "soh_pct");
        agg.motor_power_w = mean_extra(trip.samples, start, w, "motor_power_w");
        agg.torque_nm = mean_extra(trip.samples, start, w, "torque_nm");
        agg.rpm = mean_extra(trip.samples, start, w, "rpm");
        out.samples.push_back(agg);
    }
    return out;
}

FeatureMatrix stratified_reduce(const FeatureMatrix& rows, size_t target_count, uint64_t seed) {
    const size_t n = rows.rows();
    if (target_count > n) throw DataError("stratified_reduce: target exceeds row count");

    std::map<std::string, std::vector<size_t>> by_class;
    for (size_t i = 0; i < n; ++i) by_class[rows.labels[i]].push_back(i);
    if (target_count < by_class.size())
        throw DataError("stratified_reduce: target " + std::to_string(target_count) +
                        " is smaller than the class count " + std::to_string(by_class.size()));

    // Largest-remainder quotas: proportional within one row per class.
    struct Quota {
        std::string cls;
        size_t base;
        double frac;
    };
    std::vector<Quota> quotas;
    size_t assigned = 0;
    for (const auto& [cls, idx] : by_class) {
        const double exact = static_cast<double>(target_count) * static_cast<double>(idx.size()) /
                             static_cast<double>(n);
        const auto base = static_cast<size_t>(exact);
        quotas.push_back({cls, base, exact - static_cast<double>(base)});
        assigned += base;
    }
    std::sort(quotas.begin(), quotas.end(), [](const Quota& a, const Quota& b) {
        return a.frac != b.frac ? a.frac > b.frac : a.cls < b.cls;
    });
    for (size_t q = 0; assigned < target_count; ++q, ++assigned) quotas[q % quotas.size()].base += 1;

    Rng rng(mix_seed(seed, hash_str("reduce")));
    std::vector<size_t> keep;
    keep.reserve(target_count);
    std::map<std::string, size_t> quota_of;
    for (const auto& q : quotas) quota_of[q.cls] = q.base;
    for (auto& [cls, idx] : by_class) {
        Rng class_rng = rng.derive(hash_str(cls));
        const size_t take = std::min(quota_of[cls], idx.size());
        auto pick = sample_without_replacement(class_rng, idx.size(), take);
        for (size_t p : pick) keep.push_back(idx[p]);
    }
    std::sort(keep.begin(), keep.end());
    return rows.take_rows(keep);
}

double SweepResult::accuracy_at(size_t size, ModelKind kind) const {
    for (const auto& c : cells)
        if (c.window_size == size && c.kind == kind) return c.accuracy;
    throw DataError("sweep: no cell for size " + std::to_string(size));
}

std::string SweepResult::to_csv() const {
    std::string out = "window_size,model_kind,accuracy,macro_f1\n";
    for (const auto& c : cells) {
        out += std::to_string(c.window_size);
        out += ',';
        out += model_kind_name(c.kind);
        out += ',';
        out += format_double(c.accuracy);
        out += ',';
        out += format_double(c.macro_f1);
        out += '\n';
    }
    return out;
}

SweepResult sweep(const Dataset& ds, Objective objective, std::vector<size_t> sizes,
                  const std::vector<ModelKind>& kinds, uint64_t seed, size_t base_row_cap) {
    if (objective != Objective::style && objective != Objective::vehicle)
        throw UsageError("sweep: objective must use the per-sample flow (style or vehicle)");
    if (sizes.empty()) throw UsageError("sweep: no window sizes");
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

    const AttackSpec spec = canonical_spec(objective);

    auto rows_at = [&](size_t w) {
        Dataset agg;
        for (const auto& t : ds.trips) {
            Trip at = aggregate_trip(t, w);
            if (!at.samples.empty()) agg.trips.push_back(std::move(at));
        }
        if (agg.trips.empty())
            throw DataError("sweep: window size " + std::to_string(w) + " empties the dataset");
        return std::pair<Dataset, size_t>(std::move(agg), 0);
    };

    // Row count at the largest size fixes the training budget for all sizes,
    // so data volume never confounds the window-size effect.
    const size_t max_size = sizes.back();
    size_t target_rows = 0;
    {
        auto [agg, unused] = rows_at(max_size);
        for (const auto& t : agg.trips) target_rows += t.samples.size();
    }
    if (base_row_cap > 0) target_rows = std::min(target_rows, base_row_cap);

    SweepResult result;
    result.objective = objective;
    result.seed = seed;
    result.sizes = sizes;

    for (size_t w : sizes) {
        auto [agg, unused] = rows_at(w);

        AttackOptions opt;
        opt.seed = seed;
        opt.row_cap = target_rows;  // equalize rows across sizes
        const auto results = run_attack(agg, spec, kinds, opt);
        for (const auto& r : results)
            result.cells.push_back({w, r.kind, r.report.accuracy, r.report.macro_f1});
    }
    return result;
}

}  // namespace voltspy
