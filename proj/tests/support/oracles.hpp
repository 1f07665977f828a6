#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

// Direct-definition oracles for the feature catalog. Deliberately naive and
// independent of the kernel-backed implementation: plain loops, O(n^2) DFT,
// textbook formulas.
namespace voltspy::test::oracle {

inline double mean(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

inline double variance(const std::vector<double>& x) {
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size());
}

inline double skewness(const std::vector<double>& x) {
    const double var = variance(x);
    if (var < 1e-12) return 0.0;
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += std::pow(v - m, 3.0);
    return (s / static_cast<double>(x.size())) / std::pow(var, 1.5);
}

inline double kurtosis_excess(const std::vector<double>& x) {
    const double var = variance(x);
    if (var < 1e-12) return 0.0;
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += std::pow(v - m, 4.0);
    return (s / static_cast<double>(x.size())) / (var * var) - 3.0;
}

inline double quantile(std::vector<double> x, double q) {
    std::sort(x.begin(), x.end());
    if (x.size() == 1) return x[0];
    const double h = q * static_cast<double>(x.size() - 1);
    const auto lo = static_cast<size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, x.size() - 1);
    return x[lo] + (h - std::floor(h)) * (x[hi] - x[lo]);
}

inline double abs_energy(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

inline double mean_abs_change(const std::vector<double>& x) {
    if (x.size() < 2) return 0.0;
    double s = 0.0;
    for (size_t i = 1; i < x.size(); ++i) s += std::fabs(x[i] - x[i - 1]);
    return s / static_cast<double>(x.size() - 1);
}

inline double count_above_mean(const std::vector<double>& x) {
    const double m = mean(x);
    double c = 0.0;
    for (double v : x)
        if (v > m) c += 1.0;
    return c;
}

inline double trend_slope(const std::vector<double>& x) {
    const size_t n = x.size();
    if (n < 2) return 0.0;
    double sx = 0.0, sy = 0.0, sxy = 0.0, sxx = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double xi = static_cast<double>(i);
        sx += xi;
        sy += x[i];
        sxy += xi * x[i];
        sxx += xi * xi;
    }
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

// Lag autocorrelation: covariance at the lag over the population variance.
inline double autocorrelation(const std::vector<double>& x, size_t lag) {
    const size_t n = x.size();
    if (lag >= n) return 0.0;
    const double var = variance(x);
    if (var < 1e-12) return 0.0;
    const double m = mean(x);
    double s = 0.0;
    for (size_t i = 0; i + lag < n; ++i) s += (x[i] - m) * (x[i + lag] - m);
    return (s / static_cast<double>(n - lag)) / var;
}

struct DftCoeff {
    double re;
    double im;
};

// Full O(n^2) DFT.
inline std::vector<DftCoeff> dft(const std::vector<double>& x) {
    const size_t n = x.size();
    std::vector<DftCoeff> out(n);
    for (size_t k = 0; k < n; ++k) {
        double re = 0.0, im = 0.0;
        for (size_t t = 0; t < n; ++t) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) *
                               static_cast<double>(t) / static_cast<double>(n);
            re += x[t] * std::cos(ang);
            im += x[t] * std::sin(ang);
        }
        out[k] = {re, im};
    }
    return out;
}

// The full 33-entry catalog in the pinned order.
inline std::vector<double> catalog(const std::vector<double>& x) {
    std::vector<double> out;
    out.push_back(mean(x));
    out.push_back(variance(x));
    out.push_back(skewness(x));
    out.push_back(kurtosis_excess(x));
    out.push_back(*std::min_element(x.begin(), x.end()));
    out.push_back(*std::max_element(x.begin(), x.end()));
    for (double q : {0.1, 0.25, 0.5, 0.75, 0.9}) out.push_back(quantile(x, q));
    out.push_back(abs_energy(x));
    out.push_back(mean_abs_change(x));
    out.push_back(count_above_mean(x));
    out.push_back(trend_slope(x));
    for (size_t lag = 1; lag <= 4; ++lag) out.push_back(autocorrelation(x, lag));
    const auto coeffs = dft(x);
    const size_t keep = std::min<size_t>(7, x.size() / 2 + 1);
    for (size_t k = 0; k < 7; ++k)
        out.push_back(k < keep ? std::hypot(coeffs[k].re, coeffs[k].im) : 0.0);
    for (size_t k = 0; k < 7; ++k) {
        const double mag = k < keep ? std::hypot(coeffs[k].re, coeffs[k].im) : 0.0;
        out.push_back(k < keep && mag >= 1e-12 ? std::atan2(coeffs[k].im, coeffs[k].re) : 0.0);
    }
    return out;
}

}  // namespace voltspy::test::oracle
