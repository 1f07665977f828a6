#include "voltspy/telemetry.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>

#include "voltspy/csvio.hpp"
#include "voltspy/rng.hpp"

namespace voltspy {

namespace {

std::string canonical_style(std::string_view s) {
    if (s == "neutral") return "moderate";  // the middle style goes by both names
    return std::string(s);
}

bool valid_style(const std::string& s) {
    return s == "aggressive" || s == "moderate" || s == "defensive";
}

[[noreturn]] void fail_line(const char* file, size_t line_no, const std::string& msg) {
    throw DataError(std::string(file) + " line " + std::to_string(line_no) + ": " + msg);
}

}  // namespace

std::optional<double> channel_value(const TelemetrySample& s, const std::string& channel) {
    if (channel == "capacity_wh") return s.capacity_wh;
    if (channel == "soc_pct") return s.soc_pct;
    if (channel == "energy_consumed_wh") return s.energy_consumed_wh;
    if (channel == "energy_regen_wh") return s.energy_regen_wh;
    if (channel == "consumption_avg_mwh") return s.consumption_avg_mwh;
    if (channel == "soh_pct") return s.soh_pct;
    if (channel == "motor_power_w") return s.motor_power_w;
    if (channel == "torque_nm") return s.torque_nm;
    if (channel == "rpm") return s.rpm;
    return std::nullopt;
}

bool TripLabels::any() const {
    return driver || vehicle || style || occupancy || aux_w || origin || destination;
}

std::optional<std::string> TripLabels::get(const std::string& name) const {
    if (name == "driver") return driver;
    if (name == "vehicle") return vehicle;
    if (name == "style") return style;
    if (name == "origin") return origin;
    if (name == "destination") return destination;
    if (name == "occupancy") {
        if (!occupancy) return std::nullopt;
        return std::to_string(*occupancy);
    }
    if (name == "aux_w") {
        if (!aux_w) return std::nullopt;
        return format_double(*aux_w);
    }
    return std::nullopt;
}

std::vector<std::string> Dataset::label_schema() const {
    std::vector<std::string> out;
    for (const char* name : kLabelNames) {
        bool present = false;
        for (const auto& t : trips)
            if (t.labels.get(name)) {
                present = true;
                break;
            }
        if (present) out.emplace_back(name);
    }
    return out;
}

std::vector<std::string> Dataset::common_channels() const {
    std::vector<std::string> out(kCoreChannels.begin(), kCoreChannels.end());
    for (const char* extra : kExtraChannels) {
        bool everywhere = !trips.empty();
        for (const auto& t : trips) {
            for (const auto& s : t.samples) {
                if (!channel_value(s, extra).has_value()) {
                    everywhere = false;
                    break;
                }
            }
            if (!everywhere) break;
        }
        if (everywhere) out.emplace_back(extra);
    }
    return out;
}

Dataset parse_trip_csv(std::istream& samples, std::istream& labels) {
    Dataset ds;
    std::unordered_map<std::string, size_t> trip_index;

    std::string line;
    if (!std::getline(samples, line)) throw DataError("samples csv: empty file");
    auto header = split_csv(strip_cr(line));
    std::unordered_map<std::string_view, size_t> col;
    for (size_t j = 0; j < header.size(); ++j) col[header[j]] = j;
    const char* required[] = {"trip_id",        "t",
                              "capacity_wh",    "soc_pct",
                              "energy_consumed_wh", "energy_regen_wh",
                              "consumption_avg_mwh"};
    for (const char* name : required)
        if (!col.count(name)) throw DataError(std::string("samples csv: missing column ") + name);

    auto col_of = [&](const char* name) -> long {
        auto it = col.find(name);
        return it == col.end() ? -1 : static_cast<long>(it->second);
    };
    const long c_trip = col_of("trip_id"), c_t = col_of("t");
    const long c_core[5] = {col_of("capacity_wh"), col_of("soc_pct"), col_of("energy_consumed_wh"),
                            col_of("energy_regen_wh"), col_of("consumption_avg_mwh")};
    const long c_extra[4] = {col_of("soh_pct"), col_of("motor_power_w"), col_of("torque_nm"),
                             col_of("rpm")};

    size_t line_no = 1;
    while (std::getline(samples, line)) {
        ++line_no;
        auto sv = strip_cr(line);
        if (sv.empty()) continue;
        auto f = split_csv(sv);
        if (f.size() != header.size()) fail_line("samples csv", line_no, "field count mismatch");

        auto num = [&](long j) -> double {
            auto v = parse_double(f[static_cast<size_t>(j)]);
            if (!v)
                fail_line("samples csv", line_no,
                          "bad number '" + std::string(f[static_cast<size_t>(j)]) + "' in column " +
                              std::string(header[static_cast<size_t>(j)]));
            return *v;
        };

        TelemetrySample s;
        s.t = num(c_t);
        s.capacity_wh = num(c_core[0]);
        s.soc_pct = num(c_core[1]);
        s.energy_consumed_wh = num(c_core[2]);
        s.energy_regen_wh = num(c_core[3]);
        s.consumption_avg_mwh = num(c_core[4]);
        std::optional<double>* extras[4] = {&s.soh_pct, &s.motor_power_w, &s.torque_nm, &s.rpm};
        for (int k = 0; k < 4; ++k) {
            if (c_extra[k] < 0) continue;
            auto field = f[static_cast<size_t>(c_extra[k])];
            if (field.empty()) continue;  // empty cell = absent extra
            *extras[k] = num(c_extra[k]);
        }

        if (s.t < 0.0) fail_line("samples csv", line_no, "negative timestamp");
        if (!(s.capacity_wh > 0.0)) fail_line("samples csv", line_no, "capacity_wh must be > 0");
        if (s.soc_pct < 0.0 || s.soc_pct > 100.0)
            fail_line("samples csv", line_no, "soc_pct out of [0,100]");
        if (s.soh_pct && (*s.soh_pct < 0.0 || *s.soh_pct > 100.0))
            fail_line("samples csv", line_no, "soh_pct out of [0,100]");

        std::string trip_id(f[static_cast<size_t>(c_trip)]);
        if (trip_id.empty()) fail_line("samples csv", line_no, "empty trip_id");
        auto [it, inserted] = trip_index.try_emplace(trip_id, ds.trips.size());
        if (inserted) {
            ds.trips.emplace_back();
            ds.trips.back().trip_id = trip_id;
        }
        Trip& trip = ds.trips[it->second];
        if (!trip.samples.empty()) {
            const TelemetrySample& prev = trip.samples.back();
            if (s.t == prev.t)
                fail_line("samples csv", line_no, "duplicate timestamp for trip " + trip_id);
            if (s.t < prev.t)
                fail_line("samples csv", line_no, "non-monotone timestamp for trip " + trip_id);
            if (s.energy_consumed_wh < prev.energy_consumed_wh)
                fail_line("samples csv", line_no, "energy_consumed_wh decreased in trip " + trip_id);
            if (s.energy_regen_wh < prev.energy_regen_wh)
                fail_line("samples csv", line_no, "energy_regen_wh decreased in trip " + trip_id);
        }
        trip.samples.push_back(s);
    }

    for (const auto& t : ds.trips)
        if (t.samples.size() < 2)
            throw DataError("trip " + t.trip_id + " has fewer than 2 samples");

    // Labels file.
    if (!std::getline(labels, line)) throw DataError("labels csv: empty file");
    auto lheader = split_csv(strip_cr(line));
    std::unordered_map<std::string_view, size_t> lcol;
    for (size_t j = 0; j < lheader.size(); ++j) lcol[lheader[j]] = j;
    if (!lcol.count("trip_id")) throw DataError("labels csv: missing column trip_id");

    auto lcol_of = [&](const char* name) -> long {
        auto it = lcol.find(name);
        return it == lcol.end() ? -1 : static_cast<long>(it->second);
    };
    const long lc_trip = lcol_of("trip_id");
    const long lc[7] = {lcol_of("driver"),  lcol_of("vehicle"), lcol_of("style"),
                        lcol_of("occupancy"), lcol_of("aux_w"),  lcol_of("origin"),
                        lcol_of("destination")};

    std::unordered_map<std::string, bool> labeled;
    line_no = 1;
    while (std::getline(labels, line)) {
        ++line_no;
        auto sv = strip_cr(line);
        if (sv.empty()) continue;
        auto f = split_csv(sv);
        if (f.size() != lheader.size()) fail_line("labels csv", line_no, "field count mismatch");

        std::string trip_id(f[static_cast<size_t>(lc_trip)]);
        auto it = trip_index.find(trip_id);
        if (it == trip_index.end())
            fail_line("labels csv", line_no, "label row for unknown trip " + trip_id);
        if (labeled.count(trip_id))
            fail_line("labels csv", line_no, "duplicate label row for trip " + trip_id);
        labeled[trip_id] = true;

        auto field = [&](long j) -> std::string_view {
            return j < 0 ? std::string_view{} : f[static_cast<size_t>(j)];
        };
        TripLabels& L = ds.trips[it->second].labels;
        if (auto v = field(lc[0]); !v.empty()) L.driver = std::string(v);
        if (auto v = field(lc[1]); !v.empty()) L.vehicle = std::string(v);
        if (auto v = field(lc[2]); !v.empty()) {
            std::string style = canonical_style(v);
            if (!valid_style(style))
                fail_line("labels csv", line_no, "unknown style '" + std::string(v) + "'");
            L.style = style;
        }
        if (auto v = field(lc[3]); !v.empty()) {
            auto occ = parse_long(v);
            if (!occ || *occ < 1 || *occ > 5)
                fail_line("labels csv", line_no, "occupancy must be an integer in [1,5]");
            L.occupancy = static_cast<int>(*occ);
        }
        if (auto v = field(lc[4]); !v.empty()) {
            auto aux = parse_double(v);
            if (!aux || *aux < 0.0) fail_line("labels csv", line_no, "aux_w must be >= 0");
            L.aux_w = *aux;
        }
        if (auto v = field(lc[5]); !v.empty()) L.origin = std::string(v);
        if (auto v = field(lc[6]); !v.empty()) L.destination = std::string(v);
    }

    return ds;
}

void write_samples_csv(const Dataset& ds, std::ostream& out) {
    bool has_extra[4] = {false, false, false, false};
    for (const auto& t : ds.trips)
        for (const auto& s : t.samples) {
            has_extra[0] |= s.soh_pct.has_value();
            has_extra[1] |= s.motor_power_w.has_value();
            has_extra[2] |= s.torque_nm.has_value();
            has_extra[3] |= s.rpm.has_value();
        }

    out << "trip_id,t,capacity_wh,soc_pct,energy_consumed_wh,energy_regen_wh,consumption_avg_mwh";
    for (int k = 0; k < 4; ++k)
        if (has_extra[k]) out << ',' << kExtraChannels[static_cast<size_t>(k)];
    out << '\n';

    for (const auto& t : ds.trips) {
        for (const auto& s : t.samples) {
            out << t.trip_id << ',' << format_double(s.t) << ',' << format_double(s.capacity_wh)
                << ',' << format_double(s.soc_pct) << ',' << format_double(s.energy_consumed_wh)
                << ',' << format_double(s.energy_regen_wh) << ','
                << format_double(s.consumption_avg_mwh);
            const std::optional<double> extras[4] = {s.soh_pct, s.motor_power_w, s.torque_nm, s.rpm};
            for (int k = 0; k < 4; ++k) {
                if (!has_extra[k]) continue;
                out << ',';
                if (extras[k]) out << format_double(*extras[k]);
            }
            out << '\n';
        }
    }
}

void write_labels_csv(const Dataset& ds, std::ostream& out) {
    out << "trip_id,driver,vehicle,style,occupancy,aux_w,origin,destination\n";
    for (const auto& t : ds.trips) {
        const TripLabels& L = t.labels;
        out << t.trip_id << ',';
        out << (L.driver ? *L.driver : "") << ',';
        out << (L.vehicle ? *L.vehicle : "") << ',';
        out << (L.style ? *L.style : "") << ',';
        if (L.occupancy) out << *L.occupancy;
        out << ',';
        if (L.aux_w) out << format_double(*L.aux_w);
        out << ',';
        out << (L.origin ? *L.origin : "") << ',';
        out << (L.destination ? *L.destination : "") << '\n';
    }
}

std::pair<FeatureMatrix, FeatureMatrix> split_train_test(const FeatureMatrix& rows, double ratio,
                                                         uint64_t seed, bool stratify) {
    if (rows.rows() == 0) throw DataError("split_train_test: empty input");
    if (!(ratio > 0.0 && ratio < 1.0)) throw DataError("split_train_test: ratio must be in (0,1)");

    std::vector<size_t> test_mark(rows.rows(), 0);
    Rng rng(mix_seed(seed, hash_str("split")));

    if (stratify) {
        std::map<std::string, std::vector<size_t>> by_class;
        for (size_t i = 0; i < rows.rows(); ++i) by_class[rows.labels[i]].push_back(i);
        for (auto& [cls, idx] : by_class) {
            if (idx.size() < 2)
                throw DataError("split_train_test: class '" + cls +
                                "' has a single row; cannot stratify");
            const auto n_test =
                static_cast<size_t>(std::llround((1.0 - ratio) * static_cast<double>(idx.size())));
            rng.shuffle(idx);
            for (size_t k = 0; k < n_test; ++k) test_mark[idx[k]] = 1;
        }
    } else {
        std::vector<size_t> idx(rows.rows());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        rng.shuffle(idx);
        const auto n_test =
            static_cast<size_t>(std::llround((1.0 - ratio) * static_cast<double>(idx.size())));
        for (size_t k = 0; k < n_test; ++k) test_mark[idx[k]] = 1;
    }

    std::vector<size_t> train_idx, test_idx;
    for (size_t i = 0; i < rows.rows(); ++i) (test_mark[i] ? test_idx : train_idx).push_back(i);
    return {rows.take_rows(train_idx), rows.take_rows(test_idx)};
}

FeatureMatrix undersample_balance(const FeatureMatrix& rows, uint64_t seed) {
    if (rows.rows() == 0) throw DataError("undersample_balance: empty input");

    std::map<std::string, std::vector<size_t>> by_class;
    for (size_t i = 0; i < rows.rows(); ++i) by_class[rows.labels[i]].push_back(i);

    size_t minority = rows.rows();
    for (const auto& [cls, idx] : by_class) minority = std::min(minority, idx.size());

    Rng rng(mix_seed(seed, hash_str("undersample")));
    std::vector<size_t> keep;
    for (auto& [cls, idx] : by_class) {
        Rng class_rng = rng.derive(hash_str(cls));
        auto pick = sample_without_replacement(class_rng, idx.size(), minority);
        for (size_t p : pick) keep.push_back(idx[p]);
    }
    std::sort(keep.begin(), keep.end());
    return rows.take_rows(keep);
}

}  // namespace voltspy
