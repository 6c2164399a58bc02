#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "brw/env.hpp"
#include "brw/spectral.hpp"

namespace brw::prob {

struct ProbabilityEstimate {
    double point = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::int64_t n_samples = 0;
    std::int64_t n_indeterminate = 0;

    std::string to_json() const;
};

struct EstimateOptions {
    int initial_half_width = spectral::kDefaultHalfWidth;
    int max_half_width = 8 * spectral::kDefaultHalfWidth;
    double positivity_tol = spectral::kDefaultPositivityTol;
    double confidence = 0.95;
};

/// Spectral verdict for each of n_envs environments drawn from per-index
/// sub-seeds; slot i depends only on (spec, seed, i). OpenMP over
/// environments; the *_serial twin is the reference used by tests and the
/// benchmark.
std::vector<spectral::Verdict> batch_verdicts(const env::EnvironmentSpec& spec,
                                              std::int64_t n_envs, std::uint64_t seed,
                                              const EstimateOptions& opts = {});
std::vector<spectral::Verdict> batch_verdicts_serial(const env::EnvironmentSpec& spec,
                                                     std::int64_t n_envs, std::uint64_t seed,
                                                     const EstimateOptions& opts = {});

/// Monte Carlo estimate of P over environments with the spectral oracle.
/// Indeterminate verdicts widen the interval to cover both resolutions.
ProbabilityEstimate estimate_p_spectral(const env::EnvironmentSpec& spec, std::int64_t n_envs,
                                        std::uint64_t seed, const EstimateOptions& opts = {});

/// P{Lambda > two-point threshold of a random neighbor pair}: exact 4-case
/// enumeration for purely atomic laws, Monte Carlo otherwise.
ProbabilityEstimate upper_bound_thm2(const env::EnvironmentSpec& spec, std::int64_t n_samples,
                                     std::uint64_t seed, double confidence = 0.95);

struct LowerThm3Result {
    ProbabilityEstimate estimate;
    double best_a = 1.0;
};

/// max over a of P{quadratic form with psi = 2^{-a|x|} is positive},
/// evaluated on a common environment stream for every a, with golden-section
/// refinement around the grid maximum.
LowerThm3Result lower_bound_thm3(const env::EnvironmentSpec& spec,
                                 const std::vector<double>& a_grid, std::int64_t n_samples,
                                 std::uint64_t seed, int half_width = spectral::kDefaultHalfWidth,
                                 double confidence = 0.95, bool refine = true);

struct LowerThm4Result {
    double bound = 0.0;
    std::optional<int> l_hat;
};

/// p0^{2 l_hat} with l_hat the smallest island size whose eigenvalue
/// equation has a positive root; 0 when none exists within l_max.
LowerThm4Result lower_bound_thm4(const env::EnvironmentSpec& spec, int l_max);

struct BoundsConfig {
    std::int64_t n_envs = 2000;
    std::uint64_t seed = 1;
    std::vector<double> a_grid = {0.25, 0.5, 1.0, 2.0, 4.0};
    int l_max = 60;
    EstimateOptions estimate;
    bool refine_a = true;
};

struct BoundsReport {
    ProbabilityEstimate p_estimate;
    double upper_thm2 = 0.0;
    double lower_thm3 = 0.0;
    double lower_thm3_best_a = 1.0;
    double lower_thm4 = 0.0;
    std::optional<int> lower_thm4_l_hat;
    bool as_condition = false;

    std::string to_json() const;
};

/// Runs every bound with shared seed discipline and asserts the sandwich
/// ordering (throws std::runtime_error on violation beyond 3 sigma).
BoundsReport bounds_report(const env::EnvironmentSpec& spec, const BoundsConfig& config);

}  // namespace brw::prob
