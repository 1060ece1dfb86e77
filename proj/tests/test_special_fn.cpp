#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "truncue/special_fn.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// C(n, r) for n <= 30 stays below 2^53, so the doubles are exact.
double binomial(int n, int r) {
    std::vector<double> row(static_cast<size_t>(n) + 1, 0.0);
    row[0] = 1.0;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j >= 1; --j) row[static_cast<size_t>(j)] += row[static_cast<size_t>(j) - 1];
    return row[static_cast<size_t>(r)];
}

double binomial_tail(int i, int n, double x) {
    double sum = 0.0;
    for (int r = i; r <= n; ++r)
        sum += binomial(n, r) * std::pow(x, r) * std::pow(1.0 - x, n - r);
    return sum;
}

}  // namespace

TEST_CASE("log_gamma matches high-precision references", "[special_fn]") {
    REQUIRE_THAT(truncue::log_gamma(1.0), WithinAbs(0.0, 1e-14));
    REQUIRE_THAT(truncue::log_gamma(2.0), WithinAbs(0.0, 1e-14));
    REQUIRE_THAT(truncue::log_gamma(5.0), WithinRel(3.1780538303479456196, 1e-13));
    REQUIRE_THAT(truncue::log_gamma(0.5), WithinRel(0.57236494292470008707, 1e-13));
    REQUIRE_THAT(truncue::log_gamma(0.1), WithinRel(2.2527126517342059599, 1e-13));
    REQUIRE_THAT(truncue::log_gamma(3.7), WithinRel(1.4280723266653879219, 1e-13));
    REQUIRE_THAT(truncue::log_gamma(1e8), WithinRel(1742068066.1038347093, 1e-13));
}

TEST_CASE("log_gamma rejects the nonpositive domain", "[special_fn]") {
    REQUIRE_THROWS_AS(truncue::log_gamma(0.0), std::domain_error);
    REQUIRE_THROWS_AS(truncue::log_gamma(-3.5), std::domain_error);
    REQUIRE_THROWS_AS(truncue::log_gamma(std::nan("")), std::domain_error);
}

TEST_CASE("log_gamma satisfies the recurrence on [0.5, 1e8]", "[special_fn]") {
    std::mt19937_64 rng(20240817u);
    std::uniform_real_distribution<double> expo(std::log(0.5), std::log(1e8 - 1.0));
    for (int i = 0; i < 2000; ++i) {
        const double x = std::exp(expo(rng));
        const double lhs = truncue::log_gamma(x + 1.0);
        const double rhs = truncue::log_gamma(x) + std::log(x);
        REQUIRE_THAT(lhs, WithinAbs(rhs, 1e-12 * std::max(1.0, std::fabs(rhs))));
    }
}

TEST_CASE("reg_inc_beta reproduces closed forms and references", "[special_fn]") {
    REQUIRE_THAT(truncue::reg_inc_beta(1.0, 1.0, 0.3), WithinAbs(0.3, 1e-14));
    REQUIRE_THAT(truncue::reg_inc_beta(2.0, 1.0, 0.5), WithinAbs(0.25, 1e-14));
    REQUIRE_THAT(truncue::reg_inc_beta(3.0, 2.0, 0.4), WithinAbs(0.1792, 1e-13));
    REQUIRE_THAT(truncue::reg_inc_beta(0.5, 5.0, 0.2), WithinAbs(0.85507239459591958, 1e-12));
    REQUIRE_THAT(truncue::reg_inc_beta(7.5, 3.25, 0.6), WithinAbs(0.23044188050557073, 1e-12));
    REQUIRE_THAT(truncue::reg_inc_beta(40.0, 60.0, 0.31), WithinAbs(0.029769650919835746, 1e-12));
    REQUIRE(truncue::reg_inc_beta(4.0, 9.0, 0.0) == 0.0);
    REQUIRE(truncue::reg_inc_beta(4.0, 9.0, 1.0) == 1.0);
    // I_0.5(a, a) = 1/2 by symmetry, including large shapes.
    REQUIRE_THAT(truncue::reg_inc_beta(1e4, 1e4, 0.5), WithinAbs(0.5, 1e-12));
}

TEST_CASE("reg_inc_beta rejects bad arguments", "[special_fn]") {
    REQUIRE_THROWS_AS(truncue::reg_inc_beta(0.0, 1.0, 0.5), std::domain_error);
    REQUIRE_THROWS_AS(truncue::reg_inc_beta(1.0, -2.0, 0.5), std::domain_error);
    REQUIRE_THROWS_AS(truncue::reg_inc_beta(1.0, 1.0, -0.1), std::domain_error);
    REQUIRE_THROWS_AS(truncue::reg_inc_beta(1.0, 1.0, 1.1), std::domain_error);
}

TEST_CASE("reg_inc_beta agrees with the binomial tail sum", "[special_fn]") {
    for (int n = 1; n <= 30; ++n) {
        for (int i = 1; i <= n; i += (n > 8 ? 3 : 1)) {
            for (double x : {0.05, 0.2, 0.45, 0.7, 0.9}) {
                const double lhs = truncue::reg_inc_beta(i, n - i + 1.0, x);
                REQUIRE_THAT(lhs, WithinAbs(binomial_tail(i, n, x), 1e-10));
            }
        }
    }
}

TEST_CASE("reg_inc_beta symmetry holds on random parameters", "[special_fn]") {
    std::mt19937_64 rng(91u);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_real_distribution<double> shape_expo(std::log(0.2), std::log(500.0));
    for (int i = 0; i < 10000; ++i) {
        const double a = std::exp(shape_expo(rng));
        const double b = std::exp(shape_expo(rng));
        const double x = unif(rng);
        const double sum = truncue::reg_inc_beta(a, b, x) + truncue::reg_inc_beta(b, a, 1.0 - x);
        REQUIRE_THAT(sum, WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("reg_inc_beta is nondecreasing in x", "[special_fn]") {
    std::mt19937_64 rng(92u);
    std::uniform_real_distribution<double> shape_expo(std::log(0.3), std::log(200.0));
    for (int trial = 0; trial < 50; ++trial) {
        const double a = std::exp(shape_expo(rng));
        const double b = std::exp(shape_expo(rng));
        double prev = 0.0;
        for (int i = 1; i <= 200; ++i) {
            const double cur = truncue::reg_inc_beta(a, b, i / 200.0);
            REQUIRE(cur >= prev - 1e-14);
            prev = cur;
        }
    }
}

TEST_CASE("log-space incomplete beta matches deep-tail references", "[special_fn]") {
    REQUIRE_THAT(truncue::log_reg_inc_beta(50.0, 50.0, 0.2), WithinRel(-25.044295241067514, 1e-12));
    REQUIRE_THAT(truncue::log_reg_inc_beta(30.0, 10.0, 0.3), WithinRel(-20.027354820436831, 1e-12));
    REQUIRE_THAT(truncue::log_reg_inc_beta_upper(10.0, 30.0, 0.9), WithinRel(-50.821463773167345, 1e-12));
    REQUIRE(truncue::log_reg_inc_beta(3.0, 4.0, 0.0) == -std::numeric_limits<double>::infinity());
    REQUIRE(truncue::log_reg_inc_beta(3.0, 4.0, 1.0) == 0.0);
}

TEST_CASE("log-space incomplete beta is consistent with the linear scale", "[special_fn]") {
    std::mt19937_64 rng(93u);
    std::uniform_real_distribution<double> unif(0.01, 0.99);
    std::uniform_real_distribution<double> shape_expo(std::log(0.5), std::log(300.0));
    for (int i = 0; i < 2000; ++i) {
        const double a = std::exp(shape_expo(rng));
        const double b = std::exp(shape_expo(rng));
        const double x = unif(rng);
        const double p = truncue::reg_inc_beta(a, b, x);
        if (p > 1e-280) {
            REQUIRE_THAT(std::exp(truncue::log_reg_inc_beta(a, b, x)), WithinAbs(p, 1e-11));
        }
        const double q = 1.0 - p;
        if (q > 1e-280) {
            REQUIRE_THAT(std::exp(truncue::log_reg_inc_beta_upper(a, b, x)), WithinAbs(q, 1e-11));
        }
    }
}

TEST_CASE("reg_inc_gamma_lower reproduces closed forms and references", "[special_fn]") {
    REQUIRE_THAT(truncue::reg_inc_gamma_lower(1.0, std::log(2.0)), WithinAbs(0.5, 1e-14));
    REQUIRE(truncue::reg_inc_gamma_lower(2.0, 0.0) == 0.0);
    REQUIRE_THAT(truncue::reg_inc_gamma_lower(2.0, 2.0), WithinAbs(0.5939941502901616, 1e-13));
    REQUIRE_THAT(truncue::reg_inc_gamma_lower(5.5, 3.2), WithinAbs(0.15461246316198054, 1e-12));
    REQUIRE_THAT(truncue::reg_inc_gamma_lower(5.5, 8.1), WithinAbs(0.866133134850302, 1e-12));
    REQUIRE_THAT(truncue::reg_inc_gamma_lower(0.7, 0.3), WithinAbs(0.42041736887529387, 1e-12));
}

TEST_CASE("reg_inc_gamma_lower rejects bad arguments", "[special_fn]") {
    REQUIRE_THROWS_AS(truncue::reg_inc_gamma_lower(0.0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(truncue::reg_inc_gamma_lower(-1.0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(truncue::reg_inc_gamma_lower(1.0, -0.5), std::domain_error);
}

TEST_CASE("reg_inc_gamma_lower is nondecreasing in x", "[special_fn]") {
    for (double s : {0.4, 1.0, 2.5, 17.0, 120.0}) {
        double prev = 0.0;
        for (int i = 1; i <= 300; ++i) {
            const double x = i * (2.0 * s + 10.0) / 300.0;
            const double cur = truncue::reg_inc_gamma_lower(s, x);
            REQUIRE(cur >= prev - 1e-14);
            prev = cur;
        }
    }
}

TEST_CASE("log-space incomplete gamma is consistent with the linear scale", "[special_fn]") {
    std::mt19937_64 rng(94u);
    std::uniform_real_distribution<double> s_expo(std::log(0.5), std::log(200.0));
    std::uniform_real_distribution<double> frac(0.05, 3.0);
    for (int i = 0; i < 2000; ++i) {
        const double s = std::exp(s_expo(rng));
        const double x = s * frac(rng);
        const double p = truncue::reg_inc_gamma_lower(s, x);
        if (p > 1e-280) {
            REQUIRE_THAT(std::exp(truncue::log_reg_inc_gamma_lower(s, x)), WithinAbs(p, 1e-11));
        }
    }
}

// (1/k) y^k e^{-y} <= Gamma(k) P(k, y) <= (1/(k-y)) y^k e^{-y} for 0 < y < k,
// compared in log space so the deep-left-tail cases stay meaningful.
TEST_CASE("integration-by-parts sandwich brackets the incomplete gamma", "[special_fn]") {
    std::mt19937_64 rng(95u);
    std::uniform_int_distribution<int> kdist(2, 400);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const int k = kdist(rng);
        double y = k * unif(rng);
        if (y == 0.0) y = 0.5;
        const double mid = truncue::log_gamma(k) + truncue::log_reg_inc_gamma_lower(k, y);
        const double envelope = k * std::log(y) - y;
        const double lo = envelope - std::log(static_cast<double>(k));
        const double hi = envelope - std::log(static_cast<double>(k) - y);
        const double slack = 1e-10 * std::max(1.0, std::fabs(mid));
        REQUIRE(lo <= mid + slack);
        REQUIRE(mid <= hi + slack);
    }
}

TEST_CASE("stirling_bounds bracket the exact factorial", "[special_fn]") {
    const auto at1 = truncue::stirling_bounds(1);
    REQUIRE_THAT(at1.first, WithinRel(0.99587016146279725, 1e-12));
    REQUIRE_THAT(at1.second, WithinRel(1.0022744491822267, 1e-12));
    REQUIRE(at1.first < 1.0);
    REQUIRE(1.0 < at1.second);

    const auto at5 = truncue::stirling_bounds(5);
    REQUIRE(at5.first < 120.0);
    REQUIRE(120.0 < at5.second);

    const auto at20 = truncue::stirling_bounds(20);
    const double fact20 = 2432902008176640000.0;  // 20!, exactly representable
    REQUIRE(at20.first < fact20);
    REQUIRE(fact20 < at20.second);

    double factorial = 1.0;
    for (long j = 1; j <= 170; ++j) {
        factorial *= static_cast<double>(j);
        const auto [lo, hi] = truncue::stirling_bounds(j);
        REQUIRE(lo < factorial);
        REQUIRE(factorial < hi);
    }
}

TEST_CASE("stirling_bounds reports overflow and bad domain", "[special_fn]") {
    REQUIRE_THROWS_AS(truncue::stirling_bounds(0), std::domain_error);
    REQUIRE_THROWS_AS(truncue::stirling_bounds(171), std::overflow_error);
}
