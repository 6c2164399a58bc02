#include "brw/probability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "brw/criteria.hpp"
#include "brw/io.hpp"
#include "brw/parallel.hpp"
#include "brw/rng.hpp"
#include "brw/stats.hpp"

namespace brw::prob {

namespace {

// Salt constants keep the independent Monte Carlo streams of one run apart.
constexpr std::uint64_t kSaltThm2A = 0x7bd5c3u;
constexpr std::uint64_t kSaltThm2B = 0x1f83d9u;

ProbabilityEstimate tally_verdicts(const std::vector<spectral::Verdict>& verdicts,
                                   double confidence) {
    std::int64_t positive = 0, indeterminate = 0;
    for (auto v : verdicts) {
        if (v == spectral::Verdict::positive) ++positive;
        if (v == spectral::Verdict::indeterminate) ++indeterminate;
    }
    const auto n = static_cast<std::int64_t>(verdicts.size());
    ProbabilityEstimate est;
    est.n_samples = n;
    est.n_indeterminate = indeterminate;
    est.point = (static_cast<double>(positive) + 0.5 * static_cast<double>(indeterminate)) /
                static_cast<double>(n);
    // The interval covers both resolutions of every indeterminate sample.
    est.ci_low = stats::wilson_interval(positive, n, confidence).low;
    est.ci_high = stats::wilson_interval(positive + indeterminate, n, confidence).high;
    return est;
}

spectral::Verdict one_verdict(const env::EnvironmentSpec& spec, std::uint64_t env_seed,
                              const EstimateOptions& opts) {
    const auto generator = [&](int half_width) {
        return env::sample_environment(spec, half_width, env_seed);
    };
    return spectral::resolve_positivity(generator, spec, opts.positivity_tol,
                                        opts.initial_half_width, opts.max_half_width)
        .verdict;
}

}  // namespace

std::string ProbabilityEstimate::to_json() const {
    return io::JsonObject{}
        .field("point", point)
        .field("ci_low", ci_low)
        .field("ci_high", ci_high)
        .field("n_samples", n_samples)
        .field("n_indeterminate", n_indeterminate)
        .str();
}

std::vector<spectral::Verdict> batch_verdicts(const env::EnvironmentSpec& spec,
                                              std::int64_t n_envs, std::uint64_t seed,
                                              const EstimateOptions& opts) {
    if (n_envs < 1) throw std::invalid_argument("batch_verdicts: n_envs must be >= 1");
    std::vector<spectral::Verdict> verdicts(static_cast<std::size_t>(n_envs));
    parallel_for(static_cast<std::size_t>(n_envs), [&](std::size_t i) {
        verdicts[i] = one_verdict(spec, derive_seed(seed, i), opts);
    });
    return verdicts;
}

std::vector<spectral::Verdict> batch_verdicts_serial(const env::EnvironmentSpec& spec,
                                                     std::int64_t n_envs, std::uint64_t seed,
                                                     const EstimateOptions& opts) {
    if (n_envs < 1) throw std::invalid_argument("batch_verdicts: n_envs must be >= 1");
    std::vector<spectral::Verdict> verdicts(static_cast<std::size_t>(n_envs));
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        verdicts[i] = one_verdict(spec, derive_seed(seed, i), opts);
    }
    return verdicts;
}

ProbabilityEstimate estimate_p_spectral(const env::EnvironmentSpec& spec, std::int64_t n_envs,
                                        std::uint64_t seed, const EstimateOptions& opts) {
    return tally_verdicts(batch_verdicts(spec, n_envs, seed, opts), opts.confidence);
}

ProbabilityEstimate upper_bound_thm2(const env::EnvironmentSpec& spec, std::int64_t n_samples,
                                     std::uint64_t seed, double confidence) {
    spec.validate();
    const auto& dist = spec.mu_dist;
    const auto condition = [&](double xi1, double xi2) {
        return spec.lambda_source > criteria::two_point_threshold(spec.kappa, xi1, xi2);
    };
    if (dist.continuous_weight == 0.0) {
        // Purely atomic: enumerate the four neighbor-pair cases exactly.
        const double p0 = dist.atom_at_zero_prob;
        const double pc = dist.atom_at_c_prob;
        const double values[2] = {0.0, spec.c};
        const double probs[2] = {p0, pc};
        double bound = 0.0;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                if (condition(values[i], values[j])) bound += probs[i] * probs[j];
            }
        }
        ProbabilityEstimate est;
        est.point = est.ci_low = est.ci_high = bound;
        est.n_samples = 0;  // exact
        return est;
    }
    if (n_samples < 1) throw std::invalid_argument("upper_bound_thm2: n_samples must be >= 1");
    const std::uint64_t seed1 = derive_seed(seed, kSaltThm2A);
    const std::uint64_t seed2 = derive_seed(seed, kSaltThm2B);
    std::vector<char> hit(static_cast<std::size_t>(n_samples), 0);
    parallel_for(static_cast<std::size_t>(n_samples), [&](std::size_t i) {
        const double xi1 = env::sample_mu(dist, spec.c, seed1, static_cast<std::int64_t>(i));
        const double xi2 = env::sample_mu(dist, spec.c, seed2, static_cast<std::int64_t>(i));
        hit[i] = condition(xi1, xi2) ? 1 : 0;
    });
    std::int64_t k = 0;
    for (char h : hit) k += h;
    const auto ci = stats::wilson_interval(k, n_samples, confidence);
    ProbabilityEstimate est;
    est.point = static_cast<double>(k) / static_cast<double>(n_samples);
    est.ci_low = ci.low;
    est.ci_high = ci.high;
    est.n_samples = n_samples;
    return est;
}

LowerThm3Result lower_bound_thm3(const env::EnvironmentSpec& spec,
                                 const std::vector<double>& a_grid, std::int64_t n_samples,
                                 std::uint64_t seed, int half_width, double confidence,
                                 bool refine) {
    spec.validate();
    if (a_grid.empty()) throw std::invalid_argument("lower_bound_thm3: a_grid must be non-empty");
    for (double a : a_grid) {
        if (!(a > 0.0)) throw std::invalid_argument("lower_bound_thm3: grid values must be > 0");
    }
    if (n_samples < 1) throw std::invalid_argument("lower_bound_thm3: n_samples must be >= 1");

    // Same environment stream as the spectral estimate: common random numbers.
    std::vector<env::EnvironmentWindow> windows;
    windows.reserve(static_cast<std::size_t>(n_samples));
    for (std::int64_t i = 0; i < n_samples; ++i) {
        windows.emplace_back(half_width, derive_seed(seed, static_cast<std::uint64_t>(i)));
    }
    parallel_for(static_cast<std::size_t>(n_samples), [&](std::size_t i) {
        windows[i] = env::sample_environment(spec, half_width,
                                             derive_seed(seed, static_cast<std::uint64_t>(i)));
    });

    const auto count_positive = [&](double a) {
        std::vector<char> hit(windows.size(), 0);
        parallel_for(windows.size(), [&](std::size_t i) {
            hit[i] = criteria::quadratic_form(windows[i], spec, a) > 0.0 ? 1 : 0;
        });
        std::int64_t k = 0;
        for (char h : hit) k += h;
        return k;
    };

    std::int64_t best_count = -1;
    double best_a = a_grid.front();
    std::size_t best_idx = 0;
    for (std::size_t j = 0; j < a_grid.size(); ++j) {
        const std::int64_t k = count_positive(a_grid[j]);
        if (k > best_count) {
            best_count = k;
            best_a = a_grid[j];
            best_idx = j;
        }
    }

    if (refine) {
        // Golden-section sweep around the grid maximum; the objective is a
        // step function, so this only polishes the arg max.
        std::vector<double> sorted = a_grid;
        std::sort(sorted.begin(), sorted.end());
        const auto pos = static_cast<std::size_t>(
            std::find(sorted.begin(), sorted.end(), a_grid[best_idx]) - sorted.begin());
        double lo = pos > 0 ? sorted[pos - 1] : sorted[pos] / 4.0;
        double hi = pos + 1 < sorted.size() ? sorted[pos + 1] : sorted[pos] * 4.0;
        const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - golden * (hi - lo);
        double x2 = lo + golden * (hi - lo);
        std::int64_t f1 = count_positive(x1);
        std::int64_t f2 = count_positive(x2);
        for (int iter = 0; iter < 40 && hi - lo > 1e-6 * hi; ++iter) {
            if (f1 > best_count) {
                best_count = f1;
                best_a = x1;
            }
            if (f2 > best_count) {
                best_count = f2;
                best_a = x2;
            }
            if (f1 >= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - golden * (hi - lo);
                f1 = count_positive(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + golden * (hi - lo);
                f2 = count_positive(x2);
            }
        }
    }

    const auto ci = stats::wilson_interval(best_count, n_samples, confidence);
    LowerThm3Result result;
    result.estimate.point = static_cast<double>(best_count) / static_cast<double>(n_samples);
    result.estimate.ci_low = ci.low;
    result.estimate.ci_high = ci.high;
    result.estimate.n_samples = n_samples;
    result.best_a = best_a;
    return result;
}

LowerThm4Result lower_bound_thm4(const env::EnvironmentSpec& spec, int l_max) {
    spec.validate();
    LowerThm4Result result;
    result.l_hat = criteria::find_l_hat(spec.lambda_source, spec.kappa, spec.c, l_max);
    if (!result.l_hat) {
        result.bound = 0.0;
        return result;
    }
    const double p0 = spec.mu_dist.atom_at_zero_prob;
    result.bound = std::pow(p0, 2.0 * *result.l_hat);
    return result;
}

std::string BoundsReport::to_json() const {
    io::JsonObject obj;
    obj.field_raw("p_estimate", p_estimate.to_json())
        .field("upper_thm2", upper_thm2)
        .field("lower_thm3", lower_thm3)
        .field("lower_thm3_best_a", lower_thm3_best_a)
        .field("lower_thm4", lower_thm4);
    if (lower_thm4_l_hat) {
        obj.field("lower_thm4_l_hat", *lower_thm4_l_hat);
    } else {
        obj.field_null("lower_thm4_l_hat");
    }
    obj.field("as_condition", as_condition);
    return obj.str();
}

BoundsReport bounds_report(const env::EnvironmentSpec& spec, const BoundsConfig& config) {
    BoundsReport report;
    report.p_estimate = estimate_p_spectral(spec, config.n_envs, config.seed, config.estimate);
    const auto thm2 =
        upper_bound_thm2(spec, config.n_envs, config.seed, config.estimate.confidence);
    const auto thm3 = lower_bound_thm3(spec, config.a_grid, config.n_envs, config.seed,
                                       config.estimate.initial_half_width,
                                       config.estimate.confidence, config.refine_a);
    const auto thm4 = lower_bound_thm4(spec, config.l_max);
    report.upper_thm2 = thm2.point;
    report.lower_thm3 = thm3.estimate.point;
    report.lower_thm3_best_a = thm3.best_a;
    report.lower_thm4 = thm4.bound;
    report.lower_thm4_l_hat = thm4.l_hat;
    report.as_condition =
        criteria::as_supercritical_condition(spec.lambda_source, spec.kappa, spec.c);

    const double z = stats::normal_quantile(0.5 + config.estimate.confidence / 2.0);
    const auto sigma = [&](const ProbabilityEstimate& e) {
        return (e.ci_high - e.ci_low) / (2.0 * z);
    };
    const double slack = 1e-12;
    const double s_est = sigma(report.p_estimate);
    if (report.lower_thm3 > report.p_estimate.point + 3.0 * (s_est + sigma(thm3.estimate)) + slack) {
        throw std::runtime_error("bounds_report: lower bound (quadratic form) exceeds the "
                                 "estimate beyond 3 sigma");
    }
    if (report.lower_thm4 > report.p_estimate.point + 3.0 * s_est + slack) {
        throw std::runtime_error("bounds_report: lower bound (islands) exceeds the estimate "
                                 "beyond 3 sigma");
    }
    if (report.p_estimate.point > report.upper_thm2 + 3.0 * (s_est + sigma(thm2)) + slack) {
        throw std::runtime_error("bounds_report: estimate exceeds the two-point upper bound "
                                 "beyond 3 sigma");
    }
    if (report.as_condition && report.p_estimate.ci_high < 1.0 - 1e-9) {
        throw std::runtime_error("bounds_report: almost-sure condition holds but the estimate "
                                 "excludes 1");
    }
    return report;
}

}  // namespace brw::prob
