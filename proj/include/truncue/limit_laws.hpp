#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "truncue/order_stats.hpp"

namespace truncue {

// Asymptotic regime of a truncation spec, decided by operational thresholds
// on k = n - p relative to ln n and n.
enum class regime_tag {
    bulk,                   // p/n in (0.2, 0.8)
    heavy_truncation,       // k/(ln n)^3 >= 2 and k/n <= 0.2
    light_truncation,       // k/ln n <= 0.5
    very_light_truncation,  // k/ln n <= 0.1 (requires astronomically large n once k > 10)
    fixed_k,                // k declared fixed, or k <= 10
    gap,                    // 0.5 < k/ln n and k/(ln n)^3 < 2: limit only conjectured
};

inline std::string to_string(regime_tag tag) {
    switch (tag) {
        case regime_tag::bulk: return "Bulk";
        case regime_tag::heavy_truncation: return "HeavyTruncation";
        case regime_tag::light_truncation: return "LightTruncation";
        case regime_tag::very_light_truncation: return "VeryLightTruncation";
        case regime_tag::fixed_k: return "FixedK";
        case regime_tag::gap: return "Gap";
    }
    return "Unknown";
}

struct regime {
    regime_tag tag = regime_tag::bulk;
    double p_over_n = 0.0;
    double k_over_log_n = 0.0;
    double k_over_log_n_cubed = 0.0;
    int recommended_theorem = 1;  // 1, 3, or 4
    // Set only for the gap regime: the Gumbel normalization is applied there
    // on conjecture, not on a proved limit.
    bool gap_warning = false;
};

enum class limit_family { gumbel, reversed_weibull };

// Affine normalization (radius - A)/B together with its limit law.
struct normalized_law {
    double A = 0.0;
    double B = 1.0;
    limit_family family = limit_family::gumbel;
    long weibull_k = 0;  // shape of the reversed Weibull; unused for Gumbel
    int source_theorem = 1;
};

// Deterministic classification, rules applied in order.
inline regime classify_regime(const truncation_spec& spec,
                              std::optional<bool> fixed_k_declared = std::nullopt) {
    validate(spec);
    const double n = static_cast<double>(spec.n);
    const double k = static_cast<double>(spec.k());
    const double log_n = std::log(n);
    regime out;
    out.p_over_n = static_cast<double>(spec.p) / n;
    out.k_over_log_n = k / log_n;
    out.k_over_log_n_cubed = k / (log_n * log_n * log_n);

    const auto tagged = [&out](regime_tag tag, int theorem, bool warn = false) {
        out.tag = tag;
        out.recommended_theorem = theorem;
        out.gap_warning = warn;
        return out;
    };

    if (fixed_k_declared.value_or(false) || spec.k() <= 10)
        return tagged(regime_tag::fixed_k, 4);
    if (out.k_over_log_n <= 0.5) {
        return tagged(out.k_over_log_n <= 0.1 ? regime_tag::very_light_truncation
                                              : regime_tag::light_truncation,
                      3);
    }
    if (out.k_over_log_n_cubed < 2.0) return tagged(regime_tag::gap, 1, true);
    if (k / n <= 0.2) return tagged(regime_tag::heavy_truncation, 1);
    if (out.p_over_n > 0.2 && out.p_over_n < 0.8) return tagged(regime_tag::bulk, 1);
    // Nearer of the two remaining tags by p/n: small p/n sits on the heavily
    // truncated side, anything else is closer to the bulk band.
    if (out.p_over_n < 0.1) return tagged(regime_tag::heavy_truncation, 1);
    return tagged(regime_tag::bulk, 1);
}

// a(y) = (ln y)^{1/2} - (ln y)^{-1/2} ln(sqrt(2 pi) ln y), valid for y > 3.
inline double a_of(double y) {
    detail::require(y > 3.0, "a_of: requires y > 3");
    constexpr double half_log_two_pi = 0.91893853320467274178;  // ln(sqrt(2 pi))
    const double log_y = std::log(y);
    return std::sqrt(log_y) - (half_log_two_pi + std::log(log_y)) / std::sqrt(log_y);
}

// b(y) = (ln y)^{-1/2}, valid for y > 3.
inline double b_of(double y) {
    detail::require(y > 3.0, "b_of: requires y > 3");
    return 1.0 / std::sqrt(std::log(y));
}

// Gumbel normalization for the bulk and heavily truncated regimes:
//   c_n = ((p-1)/(n-1))^{1/2},  x_n = n c_n^2 / (1 - c_n^2),
//   A_n = c_n + (1/2)(1-c_n^2)^{1/2} (n-1)^{-1/2} a(x_n),
//   B_n =       (1/2)(1-c_n^2)^{1/2} (n-1)^{-1/2} b(x_n).
inline normalized_law theorem1_constants(const truncation_spec& spec) {
    validate(spec);
    detail::require(spec.p >= 2, "theorem1_constants: requires p >= 2");
    const double n = static_cast<double>(spec.n);
    const double c_sq = static_cast<double>(spec.p - 1) / static_cast<double>(spec.n - 1);
    const double x_n = n * c_sq / (1.0 - c_sq);
    detail::require(x_n > 3.0, "theorem1_constants: x_n <= 3, constants undefined");
    const double half_spread = 0.5 * std::sqrt((1.0 - c_sq) / static_cast<double>(spec.n - 1));
    return {std::sqrt(c_sq) + half_spread * a_of(x_n), half_spread * b_of(x_n),
            limit_family::gumbel, 0, 1};
}

// Root a_n of P(k, a_n) = k/n where P is the regularized lower incomplete
// gamma function; bracketing plus bisection, unique by strict monotonicity.
inline double solve_an(const truncation_spec& spec) {
    validate(spec);
    const double k = static_cast<double>(spec.k());
    const double target = k / static_cast<double>(spec.n);
    double lo = 0.0;
    double hi = k * std::max(1.0, -std::log(target));
    bool bracketed = reg_inc_gamma_lower(k, hi) >= target;
    for (int i = 0; i < 200 && !bracketed; ++i) {
        lo = hi;
        hi *= 2.0;
        bracketed = reg_inc_gamma_lower(k, hi) >= target;
    }
    if (!bracketed)
        throw std::runtime_error("solve_an: failed to bracket the root in 200 expansions");
    for (int i = 0; i < 300; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f = reg_inc_gamma_lower(k, mid);
        if (f == target) return mid;
        (f < target ? lo : hi) = mid;
        if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * mid) break;
    }
    return 0.5 * (lo + hi);
}

// Gumbel normalization for the lightly truncated regime:
//   A_n = (1 - a_n/n)^{1/2},  B_n = a_n / (2 n k).
inline normalized_law theorem3_constants(const truncation_spec& spec) {
    const double a_n = solve_an(spec);
    const double n = static_cast<double>(spec.n);
    detail::require(a_n < n, "theorem3_constants: requires a_n < n");
    return {std::sqrt(1.0 - a_n / n), a_n / (2.0 * n * static_cast<double>(spec.k())),
            limit_family::gumbel, 0, 3};
}

// Reversed-Weibull normalization for fixed k:
//   A = 1,  B = ((k+1)!)^{1/k} / (2 n^{1+1/k}),
// so (radius - 1)/B is the statistic with limit W_k. The factorial is kept in
// log space, which also guards against overflow for large k.
inline normalized_law theorem4_constants(const truncation_spec& spec) {
    validate(spec);
    const double k = static_cast<double>(spec.k());
    const double log_b = log_gamma(k + 2.0) / k - std::log(2.0) -
                         (1.0 + 1.0 / k) * std::log(static_cast<double>(spec.n));
    return {1.0, std::exp(log_b), limit_family::reversed_weibull, spec.k(), 4};
}

inline normalized_law law_for_theorem(const truncation_spec& spec, int theorem) {
    switch (theorem) {
        case 1: return theorem1_constants(spec);
        case 3: return theorem3_constants(spec);
        case 4: return theorem4_constants(spec);
        default: throw std::domain_error("law_for_theorem: theorem must be 1, 3, or 4");
    }
}

// Lambda(x) = exp(-e^{-x}).
inline probability gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

// W_k(x) = exp(-(-x)^k) for x <= 0, and 1 for x > 0.
inline probability reversed_weibull_cdf(long k, double x) {
    detail::require(k >= 1, "reversed_weibull_cdf: requires k >= 1");
    if (x > 0.0) return 1.0;
    return std::exp(-std::pow(-x, static_cast<double>(k)));
}

inline probability limit_cdf(const normalized_law& law, double x) {
    return law.family == limit_family::gumbel ? gumbel_cdf(x)
                                              : reversed_weibull_cdf(law.weibull_k, x);
}

// Exact CDF of the normalized radius (radius - A)/B, i.e. the exact law
// evaluated at A + Bx with the argument clamped to [0, 1].
inline probability normalized_exact_cdf(const truncation_spec& spec, const normalized_law& law,
                                        double x) {
    const double r = std::clamp(law.A + law.B * x, 0.0, 1.0);
    return exact_radius_cdf(spec, r);
}

// max over the grid of |exact normalized CDF - limit CDF|.
inline double sup_distance_to_limit(const truncation_spec& spec, const normalized_law& law,
                                    const std::vector<double>& grid) {
    detail::require(!grid.empty(), "sup_distance_to_limit: grid must be nonempty");
    detail::require(std::is_sorted(grid.begin(), grid.end()),
                    "sup_distance_to_limit: grid must be sorted");
    double sup = 0.0;
    for (const double x : grid)
        sup = std::max(sup, std::fabs(normalized_exact_cdf(spec, law, x) - limit_cdf(law, x)));
    return sup;
}

// count equally spaced points from lo to hi inclusive.
inline std::vector<double> linear_grid(double lo, double hi, long count) {
    detail::require(count >= 2 && lo < hi, "linear_grid: requires count >= 2 and lo < hi");
    std::vector<double> grid(static_cast<std::size_t>(count));
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (long i = 0; i < count; ++i)
        grid[static_cast<std::size_t>(i)] = lo + step * static_cast<double>(i);
    grid.back() = hi;
    return grid;
}

}  // namespace truncue
