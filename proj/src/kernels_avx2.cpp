#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <numbers>

#include "kernels_backends.hpp"

#ifndef __AVX2__
#error kernels_avx2.cpp must be compiled with -mavx2 -mfma
#endif

namespace voltspy::kernels {
namespace {

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

__m256d abs_pd(__m256d v) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    return _mm256_and_pd(v, mask);
}

double sum_avx2(std::span<const double> x) {
    const size_t n = x.size();
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(&x[i]));
    double r = hsum(acc);
    for (; i < n; ++i) r += x[i];
    return r;
}

double dot_avx2(std::span<const double> a, std::span<const double> b) {
    const size_t n = a.size();
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]), acc);
    double r = hsum(acc);
    for (; i < n; ++i) r += a[i] * b[i];
    return r;
}

double sq_distance_avx2(std::span<const double> a, std::span<const double> b) {
    const size_t n = a.size();
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double r = hsum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        r += d * d;
    }
    return r;
}

MinMax minmax_avx2(std::span<const double> x) {
    const size_t n = x.size();
    if (n == 0) return {0.0, 0.0};
    MinMax r{x[0], x[0]};
    size_t i = 0;
    if (n >= 4) {
        __m256d vmin = _mm256_loadu_pd(&x[0]);
        __m256d vmax = vmin;
        for (i = 4; i + 4 <= n; i += 4) {
            const __m256d v = _mm256_loadu_pd(&x[i]);
            vmin = _mm256_min_pd(vmin, v);
            vmax = _mm256_max_pd(vmax, v);
        }
        alignas(32) double tmin[4], tmax[4];
        _mm256_store_pd(tmin, vmin);
        _mm256_store_pd(tmax, vmax);
        for (int k = 0; k < 4; ++k) {
            if (tmin[k] < r.min) r.min = tmin[k];
            if (tmax[k] > r.max) r.max = tmax[k];
        }
    }
    for (; i < n; ++i) {
        if (x[i] < r.min) r.min = x[i];
        if (x[i] > r.max) r.max = x[i];
    }
    return r;
}

CenteredSums centered_sums_avx2(std::span<const double> x, double mean) {
    const size_t n = x.size();
    const __m256d vm = _mm256_set1_pd(mean);
    __m256d a2 = _mm256_setzero_pd(), a3 = a2, a4 = a2;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(&x[i]), vm);
        const __m256d d2 = _mm256_mul_pd(d, d);
        a2 = _mm256_add_pd(a2, d2);
        a3 = _mm256_fmadd_pd(d2, d, a3);
        a4 = _mm256_fmadd_pd(d2, d2, a4);
    }
    CenteredSums r{hsum(a2), hsum(a3), hsum(a4)};
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        const double d2 = d * d;
        r.m2 += d2;
        r.m3 += d2 * d;
        r.m4 += d2 * d2;
    }
    return r;
}

double abs_change_sum_avx2(std::span<const double> x) {
    const size_t n = x.size();
    if (n < 2) return 0.0;
    __m256d acc = _mm256_setzero_pd();
    size_t i = 1;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&x[i - 1]));
        acc = _mm256_add_pd(acc, abs_pd(d));
    }
    double r = hsum(acc);
    for (; i < n; ++i) r += std::fabs(x[i] - x[i - 1]);
    return r;
}

size_t count_above_avx2(std::span<const double> x, double thr) {
    const size_t n = x.size();
    const __m256d vt = _mm256_set1_pd(thr);
    size_t count = 0;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d gt = _mm256_cmp_pd(_mm256_loadu_pd(&x[i]), vt, _CMP_GT_OQ);
        count += static_cast<size_t>(_mm_popcnt_u32(static_cast<unsigned>(_mm256_movemask_pd(gt))));
    }
    for (; i < n; ++i)
        if (x[i] > thr) ++count;
    return count;
}

double lag_cov_sum_avx2(std::span<const double> x, double mean, size_t lag) {
    const size_t n = x.size();
    if (lag >= n) return 0.0;
    const size_t m = n - lag;
    const __m256d vm = _mm256_set1_pd(mean);
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= m; i += 4) {
        const __m256d a = _mm256_sub_pd(_mm256_loadu_pd(&x[i]), vm);
        const __m256d b = _mm256_sub_pd(_mm256_loadu_pd(&x[i + lag]), vm);
        acc = _mm256_fmadd_pd(a, b, acc);
    }
    double r = hsum(acc);
    for (; i < m; ++i) r += (x[i] - mean) * (x[i + lag] - mean);
    return r;
}

// Four phase lanes stepped by a rotation of 4*omega per iteration; the tail
// falls back to direct trig, which is also the more accurate path.
void dft_low_avx2(std::span<const double> x, size_t n_coeff, double* out_re, double* out_im) {
    const size_t n = x.size();
    for (size_t k = 0; k < n_coeff; ++k) {
        double re = 0.0, im = 0.0;
        if (n >= 8) {
            const double w = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
            alignas(32) double c0[4], s0[4];
            for (int j = 0; j < 4; ++j) {
                c0[j] = std::cos(w * j);
                s0[j] = std::sin(w * j);
            }
            __m256d vc = _mm256_load_pd(c0);
            __m256d vs = _mm256_load_pd(s0);
            const __m256d rc = _mm256_set1_pd(std::cos(4.0 * w));
            const __m256d rs = _mm256_set1_pd(std::sin(4.0 * w));
            __m256d are = _mm256_setzero_pd(), aim = _mm256_setzero_pd();
            size_t t = 0;
            for (; t + 4 <= n; t += 4) {
                const __m256d xv = _mm256_loadu_pd(&x[t]);
                are = _mm256_fmadd_pd(xv, vc, are);
                aim = _mm256_fmadd_pd(xv, vs, aim);
                const __m256d nc = _mm256_fmsub_pd(vc, rc, _mm256_mul_pd(vs, rs));
                vs = _mm256_fmadd_pd(vs, rc, _mm256_mul_pd(vc, rs));
                vc = nc;
            }
            re = hsum(are);
            im = hsum(aim);
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

void axpy_avx2(double a, std::span<const double> x, std::span<double> y) {
    const size_t n = x.size();
    const __m256d va = _mm256_set1_pd(a);
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(&y[i], _mm256_fmadd_pd(va, _mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i])));
    for (; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops{
        "avx2",         sum_avx2,         dot_avx2,         sq_distance_avx2,
        minmax_avx2,    centered_sums_avx2, abs_change_sum_avx2,
        count_above_avx2, lag_cov_sum_avx2, dft_low_avx2,   axpy_avx2,
    };
    return ops;
}

}  // namespace voltspy::kernels

#endif  // x86_64
