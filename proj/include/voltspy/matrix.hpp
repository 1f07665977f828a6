#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "voltspy/common.hpp"

namespace voltspy {

// Where a feature row came from: the trip and the window index within it.
struct RowOrigin {
    std::string trip_id;
    int window_idx = 0;
};

// Fixed-width named feature rows with per-row labels. Row-major storage.
struct FeatureMatrix {
    std::vector<std::string> names;
    std::vector<double> values;  // rows() * cols()
    std::vector<std::string> labels;
    std::vector<RowOrigin> origin;

    size_t cols() const { return names.size(); }
    size_t rows() const { return names.empty() ? 0 : values.size() / names.size(); }

    std::span<const double> row(size_t i) const { return {values.data() + i * cols(), cols()}; }
    std::span<double> row(size_t i) { return {values.data() + i * cols(), cols()}; }
    double& at(size_t i, size_t j) { return values[i * cols() + j]; }
    double at(size_t i, size_t j) const { return values[i * cols() + j]; }

    void append_row(std::span<const double> vals, std::string label, RowOrigin o) {
        values.insert(values.end(), vals.begin(), vals.end());
        labels.push_back(std::move(label));
        origin.push_back(std::move(o));
    }

    // New matrix containing the given rows, in the given order.
    FeatureMatrix take_rows(std::span<const size_t> idx) const;

    // New matrix keeping only the named columns, in their current order.
    FeatureMatrix take_columns(const std::vector<std::string>& keep) const;
};

// Sorted unique labels and per-row class ids; classifiers index classes by
// position in `classes` (ties always resolve to the lowest index).
struct ClassEncoding {
    std::vector<std::string> classes;
    std::vector<int> y;
};

ClassEncoding encode_labels(const FeatureMatrix& m);
std::vector<std::string> sorted_unique_labels(const std::vector<std::string>& labels);

// Per-class row counts keyed by label.
std::vector<std::pair<std::string, size_t>> label_histogram(const std::vector<std::string>& labels);

// CSV form: feature columns then label,trip_id,window_idx.
void write_matrix_csv(const FeatureMatrix& m, std::ostream& out);
FeatureMatrix read_matrix_csv(std::istream& in);

}  // namespace voltspy
