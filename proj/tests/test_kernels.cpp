#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support/testutil.hpp"
#include "voltspy/kernels.hpp"
#include "voltspy/rng.hpp"

using namespace voltspy;
using test::close_rel;

// Every available SIMD backend must agree with the scalar reference within
// floating-point reassociation tolerance, across sizes that exercise both
// the vector body and the scalar tail.
TEST_CASE("kernels: backend equivalence against scalar") {
    Rng rng(1234);
    const auto& ref = kernels::scalar_ops();
    const auto backends = kernels::available();
    REQUIRE(!backends.empty());

    for (size_t n : {0ul, 1ul, 2ul, 3ul, 4ul, 5ul, 7ul, 8ul, 15ul, 64ul, 257ul, 1000ul}) {
        const auto x = test::random_series(rng, n, -100.0, 100.0);
        const auto y = test::random_series(rng, n, -100.0, 100.0);
        const double mean = n == 0 ? 0.0 : ref.sum(x) / static_cast<double>(n);

        for (const auto* ops : backends) {
            CAPTURE(ops->name);
            CAPTURE(n);
            CHECK(close_rel(ops->sum(x), ref.sum(x), 1e-12));
            CHECK(close_rel(ops->dot(x, y), ref.dot(x, y), 1e-12, 1e-7));
            CHECK(close_rel(ops->sq_distance(x, y), ref.sq_distance(x, y), 1e-12, 1e-7));
            const auto mm_a = ops->minmax(x);
            const auto mm_b = ref.minmax(x);
            CHECK(mm_a.min == mm_b.min);
            CHECK(mm_a.max == mm_b.max);
            const auto cs_a = ops->centered_sums(x, mean);
            const auto cs_b = ref.centered_sums(x, mean);
            CHECK(close_rel(cs_a.m2, cs_b.m2, 1e-12, 1e-7));
            CHECK(close_rel(cs_a.m3, cs_b.m3, 1e-11, 1e-6));
            CHECK(close_rel(cs_a.m4, cs_b.m4, 1e-11, 1e-6));
            CHECK(close_rel(ops->abs_change_sum(x), ref.abs_change_sum(x), 1e-12, 1e-8));
            CHECK(ops->count_above(x, mean) == ref.count_above(x, mean));
            for (size_t lag : {1ul, 2ul, 3ul, 4ul, n + 1})
                CHECK(close_rel(ops->lag_cov_sum(x, mean, lag), ref.lag_cov_sum(x, mean, lag),
                                1e-11, 1e-6));

            double re_a[7], im_a[7], re_b[7], im_b[7];
            ops->dft_low(x, 7, re_a, im_a);
            ref.dft_low(x, 7, re_b, im_b);
            for (int k = 0; k < 7; ++k) {
                CHECK(close_rel(re_a[k], re_b[k], 1e-9, 1e-6));
                CHECK(close_rel(im_a[k], im_b[k], 1e-9, 1e-6));
            }

            auto acc_a = test::random_series(rng, 0);
            acc_a.assign(n, 1.5);
            auto acc_b = acc_a;
            ops->axpy(0.75, x, acc_a);
            ref.axpy(0.75, x, acc_b);
            for (size_t i = 0; i < n; ++i) CHECK(acc_a[i] == doctest::Approx(acc_b[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("kernels: known values") {
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    CHECK(kernels::sum(x) == 10.0);
    CHECK(kernels::dot(x, x) == 30.0);
    const std::vector<double> y = {0.0, 0.0, 0.0, 0.0};
    CHECK(kernels::sq_distance(x, y) == 30.0);
    CHECK(kernels::minmax(x).min == 1.0);
    CHECK(kernels::minmax(x).max == 4.0);
    CHECK(kernels::count_above(x, 2.5) == 2);
    CHECK(kernels::abs_change_sum(x) == 3.0);

    // DFT of a pure cosine: X_1 = n/2.
    const size_t n = 32;
    std::vector<double> c(n);
    for (size_t t = 0; t < n; ++t)
        c[t] = std::cos(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n));
    double re[2], im[2];
    kernels::dft_low(c, 2, re, im);
    CHECK(close_rel(re[1], static_cast<double>(n) / 2.0, 1e-9));
    CHECK(std::fabs(im[1]) < 1e-9);
    CHECK(std::fabs(re[0]) < 1e-9);
}

TEST_CASE("kernels: active backend is registered") {
    const auto& active = kernels::active();
    bool found = false;
    for (const auto* ops : kernels::available())
        if (ops == &active) found = true;
    CHECK(found);
}
