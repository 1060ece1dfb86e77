#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "truncue/eigen.hpp"
#include "truncue/haar.hpp"
#include "truncue/limit_laws.hpp"
#include "truncue/rng.hpp"

namespace truncue {

enum class sample_path { beta_max, matrix };

inline std::string to_string(sample_path path) {
    return path == sample_path::beta_max ? "BetaMax" : "Matrix";
}

struct empirical_sample {
    std::vector<double> values;  // sorted ascending
    long count = 0;              // values.size()
    sample_path path = sample_path::beta_max;
    std::uint64_t seed = 0;
};

struct gof_report {
    double ks_statistic = 0.0;
    long sample_count = 0;
    std::string reference;
    double pass_threshold = 0.0;
    bool passed = false;
};

// Beta(a, b) = X/(X+Y) with X ~ Gamma(a), Y ~ Gamma(b).
// std::gamma_distribution supplies the Marsaglia-Tsang rejection sampler
// (with the boosting transform when the shape is below 1), so a draw is O(1)
// in the shape parameters.
inline double sample_beta(double a, double b, std::mt19937_64& rng) {
    detail::require(a > 0.0 && b > 0.0, "sample_beta: requires a, b > 0");
    std::gamma_distribution<double> gamma_a(a, 1.0);
    std::gamma_distribution<double> gamma_b(b, 1.0);
    for (;;) {
        const double x = gamma_a(rng);
        const double y = gamma_b(rng);
        if (x + y > 0.0) return x / (x + y);
    }
}

// One spectral-radius draw through the order-statistic representation:
// max over j of sqrt(Beta(p-j+1, k)).
inline double sample_radius_order_stat(const truncation_spec& spec, std::mt19937_64& rng) {
    validate(spec);
    const double k = static_cast<double>(spec.k());
    double max_sq = 0.0;
    for (long a = 1; a <= spec.p; ++a)
        max_sq = std::max(max_sq, sample_beta(static_cast<double>(a), k, rng));
    return std::sqrt(max_sq);
}

// One spectral-radius draw through the matrix representation: eigenvalues of
// the truncated block of a Haar unitary. The eigensolver can overshoot 1 by
// a few ulps on a contraction, so the draw is clamped back into [0, 1].
inline double sample_radius_matrix(const truncation_spec& spec, std::mt19937_64& rng,
                                   long dim_cap = 256) {
    validate(spec);
    detail::require(spec.n <= dim_cap, "sample_radius_matrix: n exceeds the dimension cap");
    return std::min(spectral_radius(truncate(haar_unitary(spec.n, rng), spec.p)), 1.0);
}

// D = max_i max(|i/M - F(x_i)|, |F(x_i) - (i-1)/M|) over the sorted sample.
template <class ReferenceCdf>
double ks_statistic(const empirical_sample& sample, ReferenceCdf&& reference_cdf) {
    detail::require(!sample.values.empty(), "ks_statistic: sample must be nonempty");
    detail::require(std::is_sorted(sample.values.begin(), sample.values.end()),
                    "ks_statistic: sample must be sorted");
    const double m = static_cast<double>(sample.values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
        const double f = reference_cdf(sample.values[i]);
        const double above = std::fabs((static_cast<double>(i) + 1.0) / m - f);
        const double below = std::fabs(f - static_cast<double>(i) / m);
        d = std::max({d, above, below});
    }
    return d;
}

// Draws `count` radii in draw order with one SplitMix64 substream per draw
// (global draw index = counter_base + i), split over `workers` threads by
// index range. The substream scheme makes the result identical for any
// worker count. Failed draws (eigensolver non-convergence) are discarded and
// counted; exceeding a 0.1% failure budget aborts.
inline std::vector<double> draw_radii(const truncation_spec& spec, sample_path path, long count,
                                      std::uint64_t seed, int workers = 1,
                                      std::uint64_t counter_base = 0, long dim_cap = 256) {
    validate(spec);
    detail::require(count >= 0, "draw_radii: requires count >= 0");
    detail::require(workers >= 1, "draw_radii: requires workers >= 1");
    if (path == sample_path::matrix)
        detail::require(spec.n <= dim_cap, "draw_radii: n exceeds the dimension cap");

    std::vector<double> slots(static_cast<std::size_t>(count));
    std::vector<char> ok(static_cast<std::size_t>(count), 0);
    std::atomic<long> failures{0};

    const auto draw_range = [&](long begin, long end) {
        for (long i = begin; i < end; ++i) {
            auto rng = substream_engine(seed, counter_base + static_cast<std::uint64_t>(i));
            try {
                slots[static_cast<std::size_t>(i)] =
                    path == sample_path::beta_max
                        ? sample_radius_order_stat(spec, rng)
                        : sample_radius_matrix(spec, rng, dim_cap);
                ok[static_cast<std::size_t>(i)] = 1;
            } catch (const std::runtime_error&) {
                failures.fetch_add(1, std::memory_order_relaxed);
            }
        }
    };

    const long effective_workers = std::max(1L, std::min<long>(workers, count));
    if (effective_workers == 1) {
        draw_range(0, count);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(effective_workers));
        for (long w = 0; w < effective_workers; ++w) {
            const long begin = w * count / effective_workers;
            const long end = (w + 1) * count / effective_workers;
            pool.emplace_back(draw_range, begin, end);
        }
        for (auto& t : pool) t.join();
    }

    if (failures.load() > std::max(1L, count / 1000))
        throw std::runtime_error("draw_radii: draw failures exceeded the 0.1% budget (" +
                                 std::to_string(failures.load()) + " of " +
                                 std::to_string(count) + ")");

    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i)
        if (ok[static_cast<std::size_t>(i)]) values.push_back(slots[static_cast<std::size_t>(i)]);
    return values;
}

// Sorted empirical sample built from draw_radii.
inline empirical_sample collect_sample(const truncation_spec& spec, sample_path path, long count,
                                       std::uint64_t seed, int workers = 1,
                                       std::uint64_t counter_base = 0, long dim_cap = 256) {
    empirical_sample sample;
    sample.path = path;
    sample.seed = seed;
    sample.values = draw_radii(spec, path, count, seed, workers, counter_base, dim_cap);
    std::sort(sample.values.begin(), sample.values.end());
    sample.count = static_cast<long>(sample.values.size());
    return sample;
}

enum class comparison_target { exact_law, limit_law };

struct experiment_config {
    std::vector<truncation_spec> specs;
    sample_path path = sample_path::beta_max;
    long sample_count = 0;  // M per spec
    std::uint64_t seed = 1;
    int workers = 1;
    comparison_target target = comparison_target::exact_law;
    int limit_theorem = 0;  // 0 picks per spec via classify_regime
    long matrix_dim_cap = 256;
};

namespace detail {

inline std::string reference_description(const truncation_spec& spec, const normalized_law* law) {
    const std::string where =
        "n=" + std::to_string(spec.n) + ", p=" + std::to_string(spec.p);
    if (law == nullptr) return "exact(" + where + ")";
    if (law->family == limit_family::gumbel)
        return "Gumbel(theorem " + std::to_string(law->source_theorem) + ", " + where + ")";
    return "ReversedWeibull(k=" + std::to_string(law->weibull_k) + ", theorem " +
           std::to_string(law->source_theorem) + ", " + where + ")";
}

}  // namespace detail

// One KS row per spec, in the order given. Samples are compared either
// against the exact law or against the recommended (or forced) limit law
// after the affine normalization.
inline std::vector<gof_report> run_experiment(const experiment_config& config) {
    std::vector<gof_report> reports;
    if (config.sample_count == 0) return reports;
    for (std::size_t s = 0; s < config.specs.size(); ++s) {
        const auto& spec = config.specs[s];
        auto sample = collect_sample(
            spec, config.path, config.sample_count, config.seed, config.workers,
            static_cast<std::uint64_t>(s) * static_cast<std::uint64_t>(config.sample_count),
            config.matrix_dim_cap);

        gof_report row;
        row.sample_count = sample.count;
        row.pass_threshold = 1.95 / std::sqrt(static_cast<double>(sample.count));
        if (config.target == comparison_target::exact_law) {
            row.ks_statistic =
                ks_statistic(sample, [&](double r) { return exact_radius_cdf(spec, r); });
            row.reference = detail::reference_description(spec, nullptr);
        } else {
            const int theorem = config.limit_theorem != 0
                                    ? config.limit_theorem
                                    : classify_regime(spec).recommended_theorem;
            const auto law = law_for_theorem(spec, theorem);
            for (double& v : sample.values) v = (v - law.A) / law.B;
            row.ks_statistic = ks_statistic(sample, [&](double x) { return limit_cdf(law, x); });
            row.reference = detail::reference_description(spec, &law);
        }
        row.passed = row.ks_statistic <= row.pass_threshold;
        reports.push_back(std::move(row));
    }
    return reports;
}

}  // namespace truncue
