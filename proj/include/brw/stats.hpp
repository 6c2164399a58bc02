#pragma once

#include <cstdint>
#include <span>

namespace brw::stats {

/// Quantile of the standard normal (Acklam's rational approximation,
/// relative error below 1.2e-9). p in (0, 1).
double normal_quantile(double p);

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/// Wilson score interval for k successes out of n at the given two-sided
/// confidence level.
Interval wilson_interval(std::int64_t k, std::int64_t n, double confidence = 0.95);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares y = slope*t + intercept.
LineFit fit_line(std::span<const double> t, std::span<const double> y);

}  // namespace brw::stats
