#include "voltspy/featurex.hpp"

#include <algorithm>
#include <cmath>

#include "voltspy/kernels.hpp"
#include "voltspy/stats.hpp"

namespace voltspy {

namespace {

constexpr double kVarEps = 1e-12;
constexpr size_t kDftCoeffs = 7;

double quantile_sorted(const std::vector<double>& sorted, double q) {
    const size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = q * static_cast<double>(n - 1);
    const auto lo = static_cast<size_t>(h);
    if (lo + 1 >= n) return sorted[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

WindowSpec WindowSpec::fixed(int n) {
    if (n < 2) throw DataError("WindowSpec: fixed window needs n >= 2");
    return {WindowMode::fixed, n, 1.0};
}

WindowSpec WindowSpec::head(double fraction, int n) {
    if (n < 2) throw DataError("WindowSpec: head window needs n >= 2");
    if (!(fraction > 0.0 && fraction <= 1.0)) throw DataError("WindowSpec: fraction in (0,1]");
    return {WindowMode::head, n, fraction};
}

WindowSpec WindowSpec::tail(double fraction, int n) {
    if (n < 2) throw DataError("WindowSpec: tail window needs n >= 2");
    if (!(fraction > 0.0 && fraction <= 1.0)) throw DataError("WindowSpec: fraction in (0,1]");
    return {WindowMode::tail, n, fraction};
}

const char* WindowSpec::mode_name() const {
    switch (mode) {
        case WindowMode::per_sample: return "per_sample";
        case WindowMode::full_trip: return "full_trip";
        case WindowMode::fixed: return "fixed";
        case WindowMode::head: return "head";
        case WindowMode::tail: return "tail";
    }
    return "?";
}

std::vector<SampleWindow> segment(const Trip& trip, const WindowSpec& spec) {
    const size_t len = trip.samples.size();
    std::vector<SampleWindow> out;
    switch (spec.mode) {
        case WindowMode::per_sample:
            out.reserve(len);
            for (size_t i = 0; i < len; ++i) out.push_back({i, 1});
            break;
        case WindowMode::full_trip:
            out.push_back({0, len});
            break;
        case WindowMode::fixed: {
            const auto n = static_cast<size_t>(spec.n);
            for (size_t start = 0; start + n <= len; start += n) out.push_back({start, n});
            break;
        }
        case WindowMode::head:
        case WindowMode::tail: {
            const auto n = static_cast<size_t>(spec.n);
            const auto region =
                static_cast<size_t>(std::ceil(spec.fraction * static_cast<double>(len)));
            const size_t base = spec.mode == WindowMode::head ? 0 : len - region;
            for (size_t off = 0; off + n <= region; off += n) out.push_back({base + off, n});
            break;
        }
    }
    return out;
}

const std::vector<std::string>& catalog_feature_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v = {"mean",     "variance",  "skewness",
                                      "kurtosis", "minimum",   "maximum",
                                      "q10",      "q25",       "q50",
                                      "q75",      "q90",       "abs_energy",
                                      "mean_abs_change", "count_above_mean", "trend_slope"};
        for (int lag = 1; lag <= 4; ++lag) v.push_back("autocorr_lag" + std::to_string(lag));
        for (size_t k = 0; k < kDftCoeffs; ++k) v.push_back("dft_mag_" + std::to_string(k));
        for (size_t k = 0; k < kDftCoeffs; ++k) v.push_back("dft_phase_" + std::to_string(k));
        return v;
    }();
    return names;
}

std::vector<std::string> catalog_column_names(const std::vector<std::string>& channels) {
    std::vector<std::string> out;
    out.reserve(channels.size() * catalog_feature_names().size());
    for (const auto& ch : channels)
        for (const auto& f : catalog_feature_names()) out.push_back(ch + "__" + f);
    return out;
}

void catalog_features(std::span<const double> x, std::span<double> out) {
    const size_t n = x.size();
    const double dn = static_cast<double>(n);

    const double mean = kernels::sum(x) / dn;
    const auto cs = kernels::centered_sums(x, mean);
    const double variance = cs.m2 / dn;
    const bool flat = variance < kVarEps;
    const double skew = flat ? 0.0 : (cs.m3 / dn) / std::pow(variance, 1.5);
    const double kurt = flat ? 0.0 : (cs.m4 / dn) / (variance * variance) - 3.0;
    const auto mm = kernels::minmax(x);

    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());

    size_t i = 0;
    out[i++] = mean;
    out[i++] = variance;
    out[i++] = skew;
    out[i++] = kurt;
    out[i++] = mm.min;
    out[i++] = mm.max;
    for (double q : {0.1, 0.25, 0.5, 0.75, 0.9}) out[i++] = quantile_sorted(sorted, q);
    out[i++] = kernels::dot(x, x);
    out[i++] = n >= 2 ? kernels::abs_change_sum(x) / static_cast<double>(n - 1) : 0.0;
    out[i++] = static_cast<double>(kernels::count_above(x, mean));

    // Least-squares slope against the sample index.
    if (n >= 2) {
        const double ibar = (dn - 1.0) / 2.0;
        double num = 0.0;
        for (size_t t = 0; t < n; ++t) num += (static_cast<double>(t) - ibar) * (x[t] - mean);
        const double den = dn * (dn * dn - 1.0) / 12.0;
        out[i++] = num / den;
    } else {
        out[i++] = 0.0;
    }

    for (size_t lag = 1; lag <= 4; ++lag) {
        if (lag >= n || flat) {
            out[i++] = 0.0;
        } else {
            const double cov = kernels::lag_cov_sum(x, mean, lag) / static_cast<double>(n - lag);
            out[i++] = cov / variance;
        }
    }

    // DFT of the raw series; coefficients beyond floor(n/2) are zero.
    double re[kDftCoeffs], im[kDftCoeffs];
    const size_t k_keep = std::min(kDftCoeffs, n / 2 + 1);
    kernels::dft_low(x, k_keep, re, im);
    for (size_t k = 0; k < kDftCoeffs; ++k)
        out[i + k] = k < k_keep ? std::hypot(re[k], im[k]) : 0.0;
    for (size_t k = 0; k < kDftCoeffs; ++k) {
        const double mag = out[i + k];
        out[i + kDftCoeffs + k] = (k < k_keep && mag >= 1e-12) ? std::atan2(im[k], re[k]) : 0.0;
    }
}

FeatureMatrix catalog_matrix(const Trip& trip, const WindowSpec& spec,
                             const std::vector<std::string>& channels) {
    FeatureMatrix m;
    m.names = catalog_column_names(channels);
    const auto windows = segment(trip, spec);
    const size_t stride = catalog_feature_names().size();
    std::vector<double> row(m.names.size());
    std::vector<double> series;
    int widx = 0;
    for (const auto& w : windows) {
        for (size_t c = 0; c < channels.size(); ++c) {
            series.clear();
            for (size_t s = w.start; s < w.start + w.len; ++s)
                series.push_back(*channel_value(trip.samples[s], channels[c]));
            catalog_features(series, std::span<double>(row.data() + c * stride, stride));
        }
        m.append_row(row, "", {trip.trip_id, widx++});
    }
    return m;
}

FeatureMatrix per_sample_matrix(const Trip& trip, const std::vector<std::string>& channels) {
    FeatureMatrix m;
    m.names = channels;
    std::vector<double> row(channels.size());
    int widx = 0;
    for (const auto& s : trip.samples) {
        for (size_t c = 0; c < channels.size(); ++c) row[c] = *channel_value(s, channels[c]);
        m.append_row(row, "", {trip.trip_id, widx++});
    }
    return m;
}

Imputer Imputer::fit(const FeatureMatrix& train) {
    if (train.rows() == 0) throw DataError("Imputer: empty train matrix");
    Imputer imp;
    imp.medians.resize(train.cols(), 0.0);
    std::vector<double> finite;
    for (size_t j = 0; j < train.cols(); ++j) {
        finite.clear();
        for (size_t i = 0; i < train.rows(); ++i) {
            const double v = train.at(i, j);
            if (std::isfinite(v)) finite.push_back(v);
        }
        if (finite.empty()) continue;  // median 0
        std::sort(finite.begin(), finite.end());
        const size_t n = finite.size();
        imp.medians[j] = n % 2 == 1 ? finite[n / 2] : 0.5 * (finite[n / 2 - 1] + finite[n / 2]);
    }
    return imp;
}

void Imputer::apply(FeatureMatrix& m) const {
    for (size_t i = 0; i < m.rows(); ++i) {
        auto row = m.row(i);
        for (size_t j = 0; j < row.size(); ++j)
            if (!std::isfinite(row[j])) row[j] = medians[j];
    }
}

FeatureSelector FeatureSelector::fit(const FeatureMatrix& train, double fdr_q) {
    const auto enc = encode_labels(train);
    const size_t k = enc.classes.size();
    if (k < 2) throw DataError("select_features: single-class input");
    const size_t n = train.rows();

    struct Candidate {
        double p;
        size_t col;
    };
    std::vector<Candidate> cands;

    std::vector<double> group_sum(k), group_count(k);
    for (size_t j = 0; j < train.cols(); ++j) {
        double lo = train.at(0, j), hi = lo;
        for (size_t i = 1; i < n; ++i) {
            const double v = train.at(i, j);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (lo == hi) continue;  // constant columns are always dropped

        std::fill(group_sum.begin(), group_sum.end(), 0.0);
        std::fill(group_count.begin(), group_count.end(), 0.0);
        double total = 0.0;
        for (size_t i = 0; i < n; ++i) {
            group_sum[static_cast<size_t>(enc.y[i])] += train.at(i, j);
            group_count[static_cast<size_t>(enc.y[i])] += 1.0;
            total += train.at(i, j);
        }
        const double grand_mean = total / static_cast<double>(n);
        double ssb = 0.0;
        for (size_t g = 0; g < k; ++g) {
            if (group_count[g] == 0.0) continue;
            const double gm = group_sum[g] / group_count[g];
            ssb += group_count[g] * (gm - grand_mean) * (gm - grand_mean);
        }
        double ssw = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const auto g = static_cast<size_t>(enc.y[i]);
            const double d = train.at(i, j) - group_sum[g] / group_count[g];
            ssw += d * d;
        }
        const double d1 = static_cast<double>(k - 1);
        const double d2 = static_cast<double>(n) - static_cast<double>(k);
        double p = 1.0;
        if (d2 >= 1.0) {
            if (ssw <= 0.0) {
                p = ssb > 0.0 ? 0.0 : 1.0;
            } else {
                const double f = (ssb / d1) / (ssw / d2);
                p = f_survival(f, d1, d2);
            }
        }
        cands.push_back({p, j});
    }

    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        return a.p != b.p ? a.p < b.p : a.col < b.col;
    });

    const size_t m = cands.size();
    size_t n_pass = 0;
    for (size_t r = m; r >= 1; --r) {
        if (cands[r - 1].p <= fdr_q * static_cast<double>(r) / static_cast<double>(m)) {
            n_pass = r;
            break;
        }
    }
    size_t n_keep = n_pass;
    if (n_pass < 8) n_keep = std::min<size_t>(m, 32);

    std::vector<size_t> cols;
    for (size_t r = 0; r < n_keep; ++r) cols.push_back(cands[r].col);
    std::sort(cols.begin(), cols.end());

    FeatureSelector sel;
    for (size_t c : cols) sel.kept.push_back(train.names[c]);
    return sel;
}

FeatureMatrix FeatureSelector::apply(const FeatureMatrix& m) const { return m.take_columns(kept); }

Standardizer Standardizer::fit(const FeatureMatrix& train) {
    if (train.rows() == 0) throw DataError("Standardizer: empty train matrix");
    Standardizer st;
    const size_t n = train.rows();
    st.mean.resize(train.cols());
    st.stdev.resize(train.cols());
    for (size_t j = 0; j < train.cols(); ++j) {
        double sum = 0.0;
        for (size_t i = 0; i < n; ++i) sum += train.at(i, j);
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double d = train.at(i, j) - mean;
            ss += d * d;
        }
        double sd = std::sqrt(ss / static_cast<double>(n));
        if (sd < 1e-12) sd = 1.0;
        st.mean[j] = mean;
        st.stdev[j] = sd;
    }
    return st;
}

void Standardizer::apply(FeatureMatrix& m) const {
    for (size_t i = 0; i < m.rows(); ++i) {
        auto row = m.row(i);
        for (size_t j = 0; j < row.size(); ++j) row[j] = (row[j] - mean[j]) / stdev[j];
    }
}

void impute_fit_apply(FeatureMatrix& train, std::vector<FeatureMatrix*> others) {
    const auto imp = Imputer::fit(train);
    imp.apply(train);
    for (auto* m : others) imp.apply(*m);
}

void standardize_fit_apply(FeatureMatrix& train, std::vector<FeatureMatrix*> others) {
    const auto st = Standardizer::fit(train);
    st.apply(train);
    for (auto* m : others) st.apply(*m);
}

}  // namespace voltspy
