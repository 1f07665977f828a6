#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <numbers>

#include "kernels_backends.hpp"

namespace voltspy::kernels {
namespace {

double sum_neon(std::span<const double> x) {
    const size_t n = x.size();
    float64x2_t acc = vdupq_n_f64(0.0);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(&x[i]));
    double r = vaddvq_f64(acc);
    for (; i < n; ++i) r += x[i];
    return r;
}

double dot_neon(std::span<const double> a, std::span<const double> b) {
    const size_t n = a.size();
    float64x2_t acc = vdupq_n_f64(0.0);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(&a[i]), vld1q_f64(&b[i]));
    double r = vaddvq_f64(acc);
    for (; i < n; ++i) r += a[i] * b[i];
    return r;
}

double sq_distance_neon(std::span<const double> a, std::span<const double> b) {
    const size_t n = a.size();
    float64x2_t acc = vdupq_n_f64(0.0);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(&a[i]), vld1q_f64(&b[i]));
        acc = vfmaq_f64(acc, d, d);
    }
    double r = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        r += d * d;
    }
    return r;
}

MinMax minmax_neon(std::span<const double> x) {
    const size_t n = x.size();
    if (n == 0) return {0.0, 0.0};
    MinMax r{x[0], x[0]};
    size_t i = 0;
    if (n >= 2) {
        float64x2_t vmin = vld1q_f64(&x[0]);
        float64x2_t vmax = vmin;
        for (i = 2; i + 2 <= n; i += 2) {
            const float64x2_t v = vld1q_f64(&x[i]);
            vmin = vminq_f64(vmin, v);
            vmax = vmaxq_f64(vmax, v);
        }
        r.min = vminvq_f64(vmin);
        r.max = vmaxvq_f64(vmax);
    }
    for (; i < n; ++i) {
        if (x[i] < r.min) r.min = x[i];
        if (x[i] > r.max) r.max = x[i];
    }
    return r;
}

CenteredSums centered_sums_neon(std::span<const double> x, double mean) {
    const size_t n = x.size();
    const float64x2_t vm = vdupq_n_f64(mean);
    float64x2_t a2 = vdupq_n_f64(0.0), a3 = a2, a4 = a2;
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(&x[i]), vm);
        const float64x2_t d2 = vmulq_f64(d, d);
        a2 = vaddq_f64(a2, d2);
        a3 = vfmaq_f64(a3, d2, d);
        a4 = vfmaq_f64(a4, d2, d2);
    }
    CenteredSums r{vaddvq_f64(a2), vaddvq_f64(a3), vaddvq_f64(a4)};
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        const double d2 = d * d;
        r.m2 += d2;
        r.m3 += d2 * d;
        r.m4 += d2 * d2;
    }
    return r;
}

double abs_change_sum_neon(std::span<const double> x) {
    const size_t n = x.size();
    if (n < 2) return 0.0;
    float64x2_t acc = vdupq_n_f64(0.0);
    size_t i = 1;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(&x[i]), vld1q_f64(&x[i - 1]));
        acc = vaddq_f64(acc, vabsq_f64(d));
    }
    double r = vaddvq_f64(acc);
    for (; i < n; ++i) r += std::fabs(x[i] - x[i - 1]);
    return r;
}

size_t count_above_neon(std::span<const double> x, double thr) {
    const size_t n = x.size();
    const float64x2_t vt = vdupq_n_f64(thr);
    uint64x2_t acc = vdupq_n_u64(0);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const uint64x2_t gt = vcgtq_f64(vld1q_f64(&x[i]), vt);
        acc = vaddq_u64(acc, vshrq_n_u64(gt, 63));
    }
    size_t count = static_cast<size_t>(vgetq_lane_u64(acc, 0) + vgetq_lane_u64(acc, 1));
    for (; i < n; ++i)
        if (x[i] > thr) ++count;
    return count;
}

double lag_cov_sum_neon(std::span<const double> x, double mean, size_t lag) {
    const size_t n = x.size();
    if (lag >= n) return 0.0;
    const size_t m = n - lag;
    const float64x2_t vm = vdupq_n_f64(mean);
    float64x2_t acc = vdupq_n_f64(0.0);
    size_t i = 0;
    for (; i + 2 <= m; i += 2) {
        const float64x2_t a = vsubq_f64(vld1q_f64(&x[i]), vm);
        const float64x2_t b = vsubq_f64(vld1q_f64(&x[i + lag]), vm);
        acc = vfmaq_f64(acc, a, b);
    }
    double r = vaddvq_f64(acc);
    for (; i < m; ++i) r += (x[i] - mean) * (x[i + lag] - mean);
    return r;
}

// Two phase lanes stepped by a rotation of 2*omega per iteration.
void dft_low_neon(std::span<const double> x, size_t n_coeff, double* out_re, double* out_im) {
    const size_t n = x.size();
    for (size_t k = 0; k < n_coeff; ++k) {
        double re = 0.0, im = 0.0;
        if (n >= 4) {
            const double w = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
            double c0[2] = {1.0, std::cos(w)};
            double s0[2] = {0.0, std::sin(w)};
            float64x2_t vc = vld1q_f64(c0);
            float64x2_t vs = vld1q_f64(s0);
            const float64x2_t rc = vdupq_n_f64(std::cos(2.0 * w));
            const float64x2_t rs = vdupq_n_f64(std::sin(2.0 * w));
            float64x2_t are = vdupq_n_f64(0.0), aim = vdupq_n_f64(0.0);
            size_t t = 0;
            for (; t + 2 <= n; t += 2) {
                const float64x2_t xv = vld1q_f64(&x[t]);
                are = vfmaq_f64(are, xv, vc);
                aim = vfmaq_f64(aim, xv, vs);
                const float64x2_t nc = vsubq_f64(vmulq_f64(vc, rc), vmulq_f64(vs, rs));
                vs = vaddq_f64(vmulq_f64(vs, rc), vmulq_f64(vc, rs));
                vc = nc;
            }
            re = vaddvq_f64(are);
            im = vaddvq_f64(aim);
            for (; t < n; ++t) {
                const double ang = w * static_cast<double>(t);
                re += x[t] * std::cos(ang);
                im += x[t] * std::sin(ang);
            }
        } else if (n > 0) {
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

void axpy_neon(double a, std::span<const double> x, std::span<double> y) {
    const size_t n = x.size();
    const float64x2_t va = vdupq_n_f64(a);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(&y[i], vfmaq_f64(vld1q_f64(&y[i]), va, vld1q_f64(&x[i])));
    for (; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const Ops& neon_ops() {
    static const Ops ops{
        "neon",         sum_neon,         dot_neon,         sq_distance_neon,
        minmax_neon,    centered_sums_neon, abs_change_sum_neon,
        count_above_neon, lag_cov_sum_neon, dft_low_neon,   axpy_neon,
    };
    return ops;
}

}  // namespace voltspy::kernels

#endif  // aarch64
