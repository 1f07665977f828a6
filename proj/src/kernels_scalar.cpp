#include <cmath>
#include <numbers>

#include "voltspy/kernels.hpp"

// Reference semantics for every kernel: straight-line loops, no manual
// unrolling. SIMD backends must match these within floating-point
// reassociation tolerance.
namespace voltspy::kernels {
namespace {

double sum_scalar(std::span<const double> x) {
    double acc = 0.0;
    for (double v : x) acc += v;
    return acc;
}

double dot_scalar(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double sq_distance_scalar(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

MinMax minmax_scalar(std::span<const double> x) {
    MinMax r{x.empty() ? 0.0 : x[0], x.empty() ? 0.0 : x[0]};
    for (double v : x) {
        if (v < r.min) r.min = v;
        if (v > r.max) r.max = v;
    }
    return r;
}

CenteredSums centered_sums_scalar(std::span<const double> x, double mean) {
    CenteredSums r{0.0, 0.0, 0.0};
    for (double v : x) {
        const double d = v - mean;
        const double d2 = d * d;
        r.m2 += d2;
        r.m3 += d2 * d;
        r.m4 += d2 * d2;
    }
    return r;
}

double abs_change_sum_scalar(std::span<const double> x) {
    double acc = 0.0;
    for (size_t i = 1; i < x.size(); ++i) acc += std::fabs(x[i] - x[i - 1]);
    return acc;
}

size_t count_above_scalar(std::span<const double> x, double thr) {
    size_t n = 0;
    for (double v : x)
        if (v > thr) ++n;
    return n;
}

double lag_cov_sum_scalar(std::span<const double> x, double mean, size_t lag) {
    if (lag >= x.size()) return 0.0;
    double acc = 0.0;
    for (size_t i = 0; i + lag < x.size(); ++i) acc += (x[i] - mean) * (x[i + lag] - mean);
    return acc;
}

// Direct-definition DFT: X_k = sum_t x_t * exp(-2*pi*i*k*t/n).
void dft_low_scalar(std::span<const double> x, size_t n_coeff, double* out_re, double* out_im) {
    const size_t n = x.size();
    for (size_t k = 0; k < n_coeff; ++k) {
        double re = 0.0, im = 0.0;
        if (n > 0) {
            const double w = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
            for (size_t t = 0; t < n; ++t) {
                const double ang = w * static_cast<double>(t);
                re += x[t] * std::cos(ang);
                im += x[t] * std::sin(ang);
            }
        }
        out_re[k] = re;
        out_im[k] = im;
    }
}

void axpy_scalar(double a, std::span<const double> x, std::span<double> y) {
    for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{
        "scalar",         sum_scalar,         dot_scalar,         sq_distance_scalar,
        minmax_scalar,    centered_sums_scalar, abs_change_sum_scalar,
        count_above_scalar, lag_cov_sum_scalar, dft_low_scalar,   axpy_scalar,
    };
    return ops;
}

}  // namespace voltspy::kernels
