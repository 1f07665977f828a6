#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace voltspy {

// Regularized incomplete beta I_x(a,b), continued-fraction evaluation
// (Lentz). Good to ~1e-12 over the ranges used by the F-test.
inline double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;

    auto betacf = [](double a_, double b_, double x_) {
        constexpr int kMaxIter = 300;
        constexpr double kEps = 3e-14;
        constexpr double kFpMin = 1e-300;
        const double qab = a_ + b_;
        const double qap = a_ + 1.0;
        const double qam = a_ - 1.0;
        double c = 1.0;
        double d = 1.0 - qab * x_ / qap;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        d = 1.0 / d;
        double h = d;
        for (int m = 1; m <= kMaxIter; ++m) {
            const int m2 = 2 * m;
            double aa = m * (b_ - m) * x_ / ((qam + m2) * (a_ + m2));
            d = 1.0 + aa * d;
            if (std::fabs(d) < kFpMin) d = kFpMin;
            c = 1.0 + aa / c;
            if (std::fabs(c) < kFpMin) c = kFpMin;
            d = 1.0 / d;
            h *= d * c;
            aa = -(a_ + m) * (qab + m) * x_ / ((a_ + m2) * (qap + m2));
            d = 1.0 + aa * d;
            if (std::fabs(d) < kFpMin) d = kFpMin;
            c = 1.0 + aa / c;
            if (std::fabs(c) < kFpMin) c = kFpMin;
            d = 1.0 / d;
            const double del = d * c;
            h *= del;
            if (std::fabs(del - 1.0) < kEps) break;
        }
        return h;
    };

    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

// P(F > f) for an F(d1, d2) variate.
inline double f_survival(double f, double d1, double d2) {
    if (std::isinf(f)) return 0.0;
    if (f <= 0.0) return 1.0;
    const double x = d2 / (d2 + d1 * f);
    return incomplete_beta(d2 / 2.0, d1 / 2.0, x);
}

namespace detail {
inline std::vector<double> ranks_avg_ties(const std::vector<double>& v) {
    const size_t n = v.size();
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n, 0.0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}
}  // namespace detail

// Spearman rank correlation; ties get average ranks.
inline double spearman_rho(const std::vector<double>& a, const std::vector<double>& b) {
    const auto ra = detail::ranks_avg_ties(a);
    const auto rb = detail::ranks_avg_ties(b);
    const size_t n = ra.size();
    double ma = 0.0, mb = 0.0;
    for (size_t i = 0; i < n; ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double num = 0.0, da = 0.0, db = 0.0;
    for (size_t i = 0; i < n; ++i) {
        num += (ra[i] - ma) * (rb[i] - mb);
        da += (ra[i] - ma) * (ra[i] - ma);
        db += (rb[i] - mb) * (rb[i] - mb);
    }
    if (da <= 0.0 || db <= 0.0) return 0.0;
    return num / std::sqrt(da * db);
}

}  // namespace voltspy
