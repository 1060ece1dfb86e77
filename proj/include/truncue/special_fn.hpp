#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace truncue {

using probability = double;      // value in [0, 1]
using log_probability = double;  // value in (-inf, 0]

namespace detail {

inline void require(bool cond, const char* msg) {
    if (!cond) throw std::domain_error(msg);
}

inline constexpr double cf_tiny = 1e-30;   // Lentz underflow guard
inline constexpr double cf_eps = 1e-15;    // relative convergence tolerance
inline constexpr int cf_max_iter = 300;

}  // namespace detail

// ln Gamma(x), x > 0. Lanczos rational approximation, g = 7, 9 terms
// (Godfrey coefficients); reflection below 0.5. Relative error of the
// returned logarithm stays below 1e-13 on [0.5, 1e8].
inline double log_gamma(double x) {
    detail::require(x > 0.0 && !std::isnan(x), "log_gamma: requires x > 0");
    static constexpr double g = 7.0;
    static constexpr double coeff[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    constexpr double half_log_two_pi = 0.91893853320467274178;  // ln(2*pi)/2
    if (x < 0.5) {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        const double pi = 3.14159265358979323846;
        return std::log(pi / std::sin(pi * x)) - log_gamma(1.0 - x);
    }
    const double z = x - 1.0;
    double sum = coeff[0];
    for (int i = 1; i < 9; ++i) sum += coeff[i] / (z + i);
    const double t = z + g + 0.5;
    return half_log_two_pi + (z + 0.5) * std::log(t) - t + std::log(sum);
}

namespace detail {

// Continued fraction for the regularized incomplete beta, modified Lentz.
// Convergent for x < (a+1)/(a+b+2); the caller applies the symmetry switch.
inline double beta_cf(double a, double b, double x) {
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < cf_tiny) d = cf_tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= cf_max_iter; ++m) {
        const double m2 = 2.0 * m;
        double num = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + num * d;
        if (std::fabs(d) < cf_tiny) d = cf_tiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < cf_tiny) c = cf_tiny;
        d = 1.0 / d;
        h *= d * c;
        num = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + num * d;
        if (std::fabs(d) < cf_tiny) d = cf_tiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < cf_tiny) c = cf_tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= cf_eps) return h;
    }
    throw std::runtime_error("reg_inc_beta: continued fraction failed to converge");
}

// ln of the common front factor x^a (1-x)^b Gamma(a+b)/(Gamma(a) Gamma(b)).
inline double beta_ln_front(double a, double b, double x) {
    return log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(x) +
           b * std::log1p(-x);
}

inline void beta_check_args(double a, double b, double x) {
    require(a > 0.0 && b > 0.0 && !std::isnan(a) && !std::isnan(b),
            "reg_inc_beta: requires a > 0 and b > 0");
    require(x >= 0.0 && x <= 1.0, "reg_inc_beta: requires x in [0, 1]");
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b), the Beta(a, b) CDF.
// Symmetry I_x(a,b) = 1 - I_{1-x}(b,a) keeps the continued fraction in its
// convergent region.
inline probability reg_inc_beta(double a, double b, double x) {
    detail::beta_check_args(a, b, x);
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = detail::beta_ln_front(a, b, x);
    if (x < (a + 1.0) / (a + b + 2.0))
        return std::exp(ln_front) * detail::beta_cf(a, b, x) / a;
    return 1.0 - std::exp(ln_front) * detail::beta_cf(b, a, 1.0 - x) / b;
}

// ln I_x(a, b); stays finite (not -inf) whenever x > 0, even when I_x
// underflows as a plain double.
inline log_probability log_reg_inc_beta(double a, double b, double x) {
    detail::beta_check_args(a, b, x);
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    if (x == 1.0) return 0.0;
    const double ln_front = detail::beta_ln_front(a, b, x);
    if (x < (a + 1.0) / (a + b + 2.0))
        return ln_front + std::log(detail::beta_cf(a, b, x) / a);
    const double upper = std::exp(ln_front) * detail::beta_cf(b, a, 1.0 - x) / b;
    return std::log1p(-upper);
}

// ln(1 - I_x(a, b)) = ln I_{1-x}(b, a).
inline log_probability log_reg_inc_beta_upper(double a, double b, double x) {
    return log_reg_inc_beta(b, a, 1.0 - x);
}

namespace detail {

// Lower incomplete gamma by series: P(s,x) = x^s e^{-x} / Gamma(s+1) * sum.
// Valid (and fast) for x < s + 1. Returns ln P.
inline double gamma_series_ln(double s, double x) {
    double term = 1.0, sum = 1.0, denom = s;
    for (int i = 0; i < cf_max_iter; ++i) {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if (std::fabs(term) <= std::fabs(sum) * cf_eps)
            return s * std::log(x) - x - log_gamma(s + 1.0) + std::log(sum);
    }
    throw std::runtime_error("reg_inc_gamma_lower: series failed to converge");
}

// Upper incomplete gamma by continued fraction (modified Lentz):
// Q(s,x) = x^s e^{-x} / Gamma(s) * CF. Valid for x >= s + 1. Returns Q.
inline double gamma_cf_upper(double s, double x) {
    double b = x + 1.0 - s;
    double c = 1.0 / cf_tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= cf_max_iter; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < cf_tiny) d = cf_tiny;
        c = b + an / c;
        if (std::fabs(c) < cf_tiny) c = cf_tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= cf_eps)
            return std::exp(s * std::log(x) - x - log_gamma(s)) * h;
    }
    throw std::runtime_error("reg_inc_gamma_lower: continued fraction failed to converge");
}

inline void gamma_check_args(double s, double x) {
    require(s > 0.0 && !std::isnan(s), "reg_inc_gamma_lower: requires s > 0");
    require(x >= 0.0 && !std::isnan(x), "reg_inc_gamma_lower: requires x >= 0");
}

}  // namespace detail

// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s).
// Series for x < s + 1, continued fraction on the complement otherwise.
inline probability reg_inc_gamma_lower(double s, double x) {
    detail::gamma_check_args(s, x);
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) return std::exp(detail::gamma_series_ln(s, x));
    return 1.0 - detail::gamma_cf_upper(s, x);
}

// ln P(s, x); finite for all x > 0.
inline log_probability log_reg_inc_gamma_lower(double s, double x) {
    detail::gamma_check_args(s, x);
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    if (x < s + 1.0) return detail::gamma_series_ln(s, x);
    return std::log1p(-detail::gamma_cf_upper(s, x));
}

// Two-sided Stirling bounds on j!:
// j^{j+1/2} e^{-j + eps} sqrt(2 pi) with 1/(12j+1) < eps < 1/(12j).
// Evaluated in log space; overflow (j! beyond double range) is reported.
inline std::pair<double, double> stirling_bounds(long j) {
    detail::require(j >= 1, "stirling_bounds: requires j >= 1");
    const double jd = static_cast<double>(j);
    constexpr double half_log_two_pi = 0.91893853320467274178;
    const double base = half_log_two_pi + (jd + 0.5) * std::log(jd) - jd;
    const double ln_lower = base + 1.0 / (12.0 * jd + 1.0);
    const double ln_upper = base + 1.0 / (12.0 * jd);
    if (ln_upper >= std::log(std::numeric_limits<double>::max()))
        throw std::overflow_error("stirling_bounds: j! exceeds the double range");
    return {std::exp(ln_lower), std::exp(ln_upper)};
}

}  // namespace truncue
