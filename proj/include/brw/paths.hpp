#pragma once

#include <cstdint>
#include <vector>

#include "brw/env.hpp"

namespace brw::paths {

/// n-th Catalan number, exact. n <= 35 (largest that fits in int64).
std::int64_t catalan(int n);

/// Catalan number in floating point via log-gamma; usable far beyond the
/// exact range since converged series only need ratios.
double catalan_real(int n);

/// Number of n-step nearest-neighbor paths from x >= 1 to 0 that do not
/// touch 0 before the final step. Zero when n < x or parity differs.
std::int64_t path_count(int x, int n);

struct PathSeriesResult {
    double value = 0.0;
    int terms_used = 0;      // maximal path length summed
    double tail_bound = 0.0; // certified bound on the dropped remainder
};

/// Sum over origin-avoiding paths of the per-step weights (kappa/2)/(mu(z)+E),
/// E = kappa + lambda, evaluated by length-indexed dynamic programming.
/// Requires lambda > 0 for convergence; throws when the window cannot hold
/// every path needed to certify the requested tolerance.
PathSeriesResult u_path_series(const env::EnvironmentWindow& window,
                               const env::EnvironmentSpec& spec, double lambda, int x,
                               double tol);

/// u(1) for the environment constant at c1:
/// E1/kappa - sqrt((E1/kappa)^2 - 1), E1 = kappa + lambda + c1.
double u1_constant_closed_form(double kappa, double lambda, double c1);

/// Max over interior sites x != 0 of
/// |(kappa/2)(u(x+1)+u(x-1)) - (mu(x)+E) u(x)|; u is window-indexed, u(0)=1.
double verify_resolvent_identity(const env::EnvironmentWindow& window,
                                 const env::EnvironmentSpec& spec, double lambda,
                                 const std::vector<double>& u);

}  // namespace brw::paths
