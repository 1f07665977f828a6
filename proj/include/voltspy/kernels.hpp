#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

// Arithmetic inner loops shared by feature extraction, KNN distances and
// MLP training. Scalar reference implementations define the semantics;
// AVX2 (x86-64) and NEON (aarch64) variants are selected at runtime and
// are equivalence-tested against the scalar versions.
namespace voltspy::kernels {

struct MinMax {
    double min;
    double max;
};

// Sums of centered powers: m2 = sum (x-mean)^2, m3, m4 likewise.
struct CenteredSums {
    double m2;
    double m3;
    double m4;
};

struct Ops {
    const char* name;
    double (*sum)(std::span<const double>);
    double (*dot)(std::span<const double>, std::span<const double>);
    double (*sq_distance)(std::span<const double>, std::span<const double>);
    MinMax (*minmax)(std::span<const double>);
    CenteredSums (*centered_sums)(std::span<const double>, double mean);
    double (*abs_change_sum)(std::span<const double>);
    size_t (*count_above)(std::span<const double>, double threshold);
    double (*lag_cov_sum)(std::span<const double>, double mean, size_t lag);
    // First n_coeff DFT coefficients of x: out_re/out_im must hold n_coeff.
    void (*dft_low)(std::span<const double>, size_t n_coeff, double* out_re, double* out_im);
    // y += a * x
    void (*axpy)(double a, std::span<const double> x, std::span<double> y);
};

// Active backend. Resolved once per process: VOLTSPY_SIMD=scalar|avx2|neon
// forces a choice, otherwise the best available one is picked.
const Ops& active();

// All backends usable on this machine (scalar always included).
std::vector<const Ops*> available();

const Ops& scalar_ops();

inline double sum(std::span<const double> x) { return active().sum(x); }
inline double dot(std::span<const double> a, std::span<const double> b) { return active().dot(a, b); }
inline double sq_distance(std::span<const double> a, std::span<const double> b) {
    return active().sq_distance(a, b);
}
inline MinMax minmax(std::span<const double> x) { return active().minmax(x); }
inline CenteredSums centered_sums(std::span<const double> x, double mean) {
    return active().centered_sums(x, mean);
}
inline double abs_change_sum(std::span<const double> x) { return active().abs_change_sum(x); }
inline size_t count_above(std::span<const double> x, double thr) { return active().count_above(x, thr); }
inline double lag_cov_sum(std::span<const double> x, double mean, size_t lag) {
    return active().lag_cov_sum(x, mean, lag);
}
inline void dft_low(std::span<const double> x, size_t n_coeff, double* re, double* im) {
    active().dft_low(x, n_coeff, re, im);
}
inline void axpy(double a, std::span<const double> x, std::span<double> y) { active().axpy(a, x, y); }

}  // namespace voltspy::kernels
