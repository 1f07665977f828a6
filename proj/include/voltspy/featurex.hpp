#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "voltspy/matrix.hpp"
#include "voltspy/telemetry.hpp"

namespace voltspy {

enum class WindowMode { per_sample, full_trip, fixed, head, tail };

// Windowing rule for a trip. fixed(n) cuts consecutive non-overlapping
// n-sample windows (trailing remainder dropped); head/tail first restrict
// to the leading/trailing ceil(fraction*len) samples.
struct WindowSpec {
    WindowMode mode = WindowMode::full_trip;
    int n = 0;
    double fraction = 1.0;

    static WindowSpec per_sample() { return {WindowMode::per_sample, 1, 1.0}; }
    static WindowSpec full_trip() { return {WindowMode::full_trip, 0, 1.0}; }
    static WindowSpec fixed(int n);
    static WindowSpec head(double fraction, int n);
    static WindowSpec tail(double fraction, int n);

    const char* mode_name() const;
};

struct SampleWindow {
    size_t start = 0;
    size_t len = 0;
};

std::vector<SampleWindow> segment(const Trip& trip, const WindowSpec& spec);

// The fixed per-channel catalog, 33 features in a pinned order.
const std::vector<std::string>& catalog_feature_names();

// Column names for a channel set: "<channel>__<feature>", channel-major.
std::vector<std::string> catalog_column_names(const std::vector<std::string>& channels);

// Catalog features of one window of one channel series.
void catalog_features(std::span<const double> series, std::span<double> out33);

// One row per window, catalog features over all channels. Labels are left
// for the caller to assign (the attack knows the target).
FeatureMatrix catalog_matrix(const Trip& trip, const WindowSpec& spec,
                             const std::vector<std::string>& channels);

// One row per sample, raw channel values.
FeatureMatrix per_sample_matrix(const Trip& trip, const std::vector<std::string>& channels);

// Replaces NaN/inf by the train-column median of finite values (0 when a
// column has none). Fit on train, applied unchanged elsewhere.
struct Imputer {
    std::vector<double> medians;
    static Imputer fit(const FeatureMatrix& train);
    void apply(FeatureMatrix& m) const;
};

// ANOVA F-test against the labels with Benjamini-Hochberg FDR at q;
// constant columns always dropped; a floor keeps the 32 smallest-p
// features when fewer than 8 pass.
struct FeatureSelector {
    std::vector<std::string> kept;
    static FeatureSelector fit(const FeatureMatrix& train, double fdr_q = 0.05);
    FeatureMatrix apply(const FeatureMatrix& m) const;
};

struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stdev;  // population std, floored to 1 when < 1e-12
    static Standardizer fit(const FeatureMatrix& train);
    void apply(FeatureMatrix& m) const;
};

// Convenience wrappers applying a fit to train plus any other matrices.
void impute_fit_apply(FeatureMatrix& train, std::vector<FeatureMatrix*> others);
void standardize_fit_apply(FeatureMatrix& train, std::vector<FeatureMatrix*> others);

}  // namespace voltspy
