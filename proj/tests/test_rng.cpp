#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"

#include "derivsim/rng.hpp"

using namespace derivsim;

TEST_CASE("philox output is deterministic and counter-sensitive") {
    const std::uint64_t a = rng::word64(42, 0, 0);
    CHECK(a == rng::word64(42, 0, 0));
    CHECK(a != rng::word64(42, 0, 1));
    CHECK(a != rng::word64(42, 1, 0));
    CHECK(a != rng::word64(43, 0, 0));
    CHECK(rng::word64(42, 0, 0, 0) != rng::word64(42, 0, 0, 1));
}

TEST_CASE("philox words are distinct across a counter block") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t path = 0; path < 64; ++path)
        for (std::uint32_t step = 0; step < 64; ++step)
            seen.insert(rng::word64(7, path, step));
    CHECK(seen.size() == 64u * 64u);
}

TEST_CASE("uniform draws live strictly inside (0,1) with sane moments") {
    double sum = 0.0, sum_sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng::uniform01(123, 0, static_cast<std::uint32_t>(i));
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        sum += u;
        sum_sq += u * u;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
    CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("normal inverse cdf hits reference quantiles") {
    CHECK(rng::normal_inverse_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rng::normal_inverse_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(rng::normal_inverse_cdf(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-12));
    CHECK(rng::normal_inverse_cdf(0.8413447460685429) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rng::normal_inverse_cdf(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-9));
    // Symmetry across the median.
    for (double p : {0.001, 0.01, 0.1, 0.3, 0.49}) {
        CHECK(rng::normal_inverse_cdf(p) ==
              doctest::Approx(-rng::normal_inverse_cdf(1.0 - p)).epsilon(1e-12));
    }
}

TEST_CASE("standard normal stream has unit moments") {
    double sum = 0.0, sum_sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rng::standard_normal(99, 1, static_cast<std::uint32_t>(i));
        sum += z;
        sum_sq += z * z;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::fabs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("parallel substreams are uncorrelated") {
    // Same step index across two adjacent paths.
    const int n = 50000;
    double sum_xy = 0.0, sum_x = 0.0, sum_y = 0.0, sum_x2 = 0.0, sum_y2 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double x = rng::standard_normal(5, 10, static_cast<std::uint32_t>(k));
        const double y = rng::standard_normal(5, 11, static_cast<std::uint32_t>(k));
        sum_xy += x * y;
        sum_x += x;
        sum_y += y;
        sum_x2 += x * x;
        sum_y2 += y * y;
    }
    const double cov = sum_xy / n - (sum_x / n) * (sum_y / n);
    const double corr = cov / std::sqrt((sum_x2 / n - sum_x / n * (sum_x / n)) *
                                        (sum_y2 / n - sum_y / n * (sum_y / n)));
    CHECK(std::fabs(corr) < 0.02);
}

TEST_CASE("stream helper walks its own counter") {
    rng::Stream s(11, 3);
    const double a = s.next_uniform();
    const double b = s.next_uniform();
    CHECK(a != b);
    CHECK(a == rng::uniform01(11, 3, 0));
    CHECK(b == rng::uniform01(11, 3, 1));
    const double r = s.next_range(5.0, 6.0);
    CHECK(r >= 5.0);
    CHECK(r < 6.0);
}
