#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "truncue/special_fn.hpp"

namespace truncue {

// The problem instance: truncate an n x n Haar unitary to its leading p x p
// block; k = n - p rows and columns are removed.
struct truncation_spec {
    long n = 0;
    long p = 0;

    long k() const { return n - p; }
};

inline void validate(const truncation_spec& spec) {
    detail::require(spec.p >= 1 && spec.p < spec.n,
                    "truncation_spec: requires 1 <= p < n");
}

// F_{i:n}(x): CDF of the i-th smallest of n independent uniforms.
inline probability order_stat_cdf(long i, long n, double x) {
    detail::require(i >= 1 && n >= 1 && i <= n, "order_stat_cdf: requires 1 <= i <= n");
    return reg_inc_beta(static_cast<double>(i), static_cast<double>(n - i + 1), x);
}

struct log_cdf_result {
    log_probability value = 0.0;
    // True when the evaluation stopped early because the partial log-sum fell
    // below ln(1e-300); value is then -inf although the true CDF is positive.
    bool underflow = false;
};

namespace detail {

inline constexpr double log_cdf_floor = -690.77552789821371;  // ln(1e-300)

// Per-factor continued-fraction fallback for the deep left tail, where the
// subtractive sweep below loses its significant digits.
inline log_cdf_result log_cdf_tail_by_cf(const truncation_spec& spec, double t,
                                         long a_start, double partial) {
    const double k = static_cast<double>(spec.k());
    for (long a = a_start; a <= spec.p; ++a) {
        partial += log_reg_inc_beta(static_cast<double>(a), k, t);
        if (partial < log_cdf_floor)
            return {-std::numeric_limits<double>::infinity(), true};
    }
    return {partial, false};
}

}  // namespace detail

// P(max_j |z_j|^2 <= t) = prod_{j=1}^{p} F_{p-j+1:n-j}(t); factor j is the
// Beta(p-j+1, k) CDF. Evaluated as a log-sum over a = p-j+1 = 1..p with the
// forward recurrence
//   I_t(a+1, k) = I_t(a, k) - T_a,
//   T_a = Gamma(a+k) / (Gamma(a+1) Gamma(k)) t^a (1-t)^k
// (T_a carried in log space), which costs O(p) for the whole product. Once a
// factor drops below a cancellation floor the remaining deep-tail factors are
// evaluated one by one with the continued fraction instead.
inline log_cdf_result exact_sq_radius_log_cdf_ex(const truncation_spec& spec, double t) {
    validate(spec);
    detail::require(t >= 0.0 && t <= 1.0 && !std::isnan(t),
                    "exact_sq_radius_log_cdf: requires t in [0, 1]");
    if (t == 0.0) return {-std::numeric_limits<double>::infinity(), false};
    if (t == 1.0) return {0.0, false};

    const double k = static_cast<double>(spec.k());
    const double log_t = std::log(t);
    const double log1m_t = std::log1p(-t);
    // Factors below this are recomputed by continued fraction: the sweep's
    // running subtraction carries absolute noise on the order of p*eps, so a
    // factor must stay well above that for its logarithm to keep ~9 digits.
    const double floor = 1e-7 * static_cast<double>(std::max(spec.p, 10L));

    double factor = -std::expm1(k * log1m_t);            // I_t(1, k)
    double log_term = std::log(k) + log_t + k * log1m_t;  // ln T_1
    double sum = 0.0;
    for (long a = 1; a <= spec.p; ++a) {
        if (factor <= floor) return detail::log_cdf_tail_by_cf(spec, t, a, sum);
        sum += std::log(factor);
        if (sum < detail::log_cdf_floor)
            return {-std::numeric_limits<double>::infinity(), true};
        if (a == spec.p) break;
        factor -= std::exp(log_term);
        log_term += log_t + std::log((static_cast<double>(a) + k) / (static_cast<double>(a) + 1.0));
    }
    return {sum, false};
}

inline log_probability exact_sq_radius_log_cdf(const truncation_spec& spec, double t) {
    return exact_sq_radius_log_cdf_ex(spec, t).value;
}

// CDF of the spectral radius max_j |z_j| itself.
inline probability exact_radius_cdf(const truncation_spec& spec, double r) {
    detail::require(r >= 0.0 && r <= 1.0 && !std::isnan(r),
                    "exact_radius_cdf: requires r in [0, 1]");
    return std::exp(exact_sq_radius_log_cdf(spec, r * r));
}

// Inverse CDF by bisection on [0, 1]; the CDF is continuous and strictly
// increasing wherever it is positive, so the bracket always contracts.
inline double exact_radius_quantile(const truncation_spec& spec, probability q) {
    validate(spec);
    detail::require(q > 0.0 && q < 1.0 && !std::isnan(q),
                    "exact_radius_quantile: requires q in (0, 1)");
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double f = exact_radius_cdf(spec, mid);
        if (f == q) return mid;
        (f < q ? lo : hi) = mid;
        if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * mid) break;
    }
    return 0.5 * (lo + hi);
}

// Counts grid points violating the tail chain
//   1 - F_{p:n-1}(x) >= 1 - F_{p-1:n-2}(x) >= ... >= 1 - F_{1:n-p}(x),
// i.e. tails nonincreasing in j. Factors are evaluated independently through
// the continued fraction so the chain is a genuine numerical check, not a
// by-product of the product recurrence.
inline long tail_monotone_violations(const truncation_spec& spec,
                                     const std::vector<double>& grid) {
    validate(spec);
    const double k = static_cast<double>(spec.k());
    long violations = 0;
    for (const double x : grid) {
        detail::require(x > 0.0 && x < 1.0, "tail_monotone_violations: grid values in (0, 1)");
        double prev_tail = std::numeric_limits<double>::infinity();
        for (long a = spec.p; a >= 1; --a) {  // a = p-j+1, so j runs 1..p
            const double tail = 1.0 - reg_inc_beta(static_cast<double>(a), k, x);
            if (tail > prev_tail + 1e-12) {
                ++violations;
                break;
            }
            prev_tail = tail;
        }
    }
    return violations;
}

}  // namespace truncue
