#include "voltspy/matrix.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

#include "voltspy/csvio.hpp"

namespace voltspy {

FeatureMatrix FeatureMatrix::take_rows(std::span<const size_t> idx) const {
    FeatureMatrix out;
    out.names = names;
    out.values.reserve(idx.size() * cols());
    out.labels.reserve(idx.size());
    out.origin.reserve(idx.size());
    for (size_t i : idx) {
        auto r = row(i);
        out.values.insert(out.values.end(), r.begin(), r.end());
        out.labels.push_back(labels[i]);
        out.origin.push_back(origin[i]);
    }
    return out;
}

FeatureMatrix FeatureMatrix::take_columns(const std::vector<std::string>& keep) const {
    std::set<std::string> keep_set(keep.begin(), keep.end());
    std::vector<size_t> col_idx;
    FeatureMatrix out;
    for (size_t j = 0; j < names.size(); ++j) {
        if (keep_set.count(names[j])) {
            col_idx.push_back(j);
            out.names.push_back(names[j]);
        }
    }
    out.values.reserve(rows() * col_idx.size());
    for (size_t i = 0; i < rows(); ++i) {
        auto r = row(i);
        for (size_t j : col_idx) out.values.push_back(r[j]);
    }
    out.labels = labels;
    out.origin = origin;
    return out;
}

std::vector<std::string> sorted_unique_labels(const std::vector<std::string>& labels) {
    std::vector<std::string> classes(labels.begin(), labels.end());
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    return classes;
}

ClassEncoding encode_labels(const FeatureMatrix& m) {
    ClassEncoding enc;
    enc.classes = sorted_unique_labels(m.labels);
    std::unordered_map<std::string, int> index;
    for (size_t c = 0; c < enc.classes.size(); ++c) index[enc.classes[c]] = static_cast<int>(c);
    enc.y.reserve(m.labels.size());
    for (const auto& l : m.labels) enc.y.push_back(index.at(l));
    return enc;
}

std::vector<std::pair<std::string, size_t>> label_histogram(const std::vector<std::string>& labels) {
    std::map<std::string, size_t> counts;
    for (const auto& l : labels) ++counts[l];
    return {counts.begin(), counts.end()};
}

void write_matrix_csv(const FeatureMatrix& m, std::ostream& out) {
    for (const auto& n : m.names) out << n << ',';
    out << "label,trip_id,window_idx\n";
    for (size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        for (double v : r) out << format_double(v) << ',';
        out << m.labels[i] << ',' << m.origin[i].trip_id << ',' << m.origin[i].window_idx << '\n';
    }
}

FeatureMatrix read_matrix_csv(std::istream& in) {
    FeatureMatrix m;
    std::string line;
    if (!std::getline(in, line)) throw DataError("feature csv: missing header");
    auto header = split_csv(strip_cr(line));
    if (header.size() < 3) throw DataError("feature csv: header too short");
    const size_t n_features = header.size() - 3;
    for (size_t j = 0; j < n_features; ++j) m.names.emplace_back(header[j]);
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        auto sv = strip_cr(line);
        if (sv.empty()) continue;
        auto fields = split_csv(sv);
        if (fields.size() != header.size())
            throw DataError("feature csv line " + std::to_string(line_no) + ": field count mismatch");
        for (size_t j = 0; j < n_features; ++j) {
            auto v = parse_double(fields[j]);
            if (!v)
                throw DataError("feature csv line " + std::to_string(line_no) + ": bad number '" +
                                std::string(fields[j]) + "'");
            m.values.push_back(*v);
        }
        m.labels.emplace_back(fields[n_features]);
        RowOrigin o;
        o.trip_id = std::string(fields[n_features + 1]);
        auto idx = parse_long(fields[n_features + 2]);
        if (!idx)
            throw DataError("feature csv line " + std::to_string(line_no) + ": bad window index");
        o.window_idx = static_cast<int>(*idx);
        m.origin.push_back(std::move(o));
    }
    return m;
}

}  // namespace voltspy
