#pragma once

#include <vector>

#include "brw/env.hpp"

namespace brw::evolve {

/// First-moment field m1(t, x) on the window, recorded on a uniform time grid.
struct MomentTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> fields;  // window-indexed, one per time
    int source_site = 0;
    int half_width = 0;

    double value(std::size_t t_index, int x) const {
        return fields[t_index][static_cast<std::size_t>(x + half_width)];
    }
};

/// Largest step accepted by integrate_moments: 0.1 / (2 kappa + c + Lambda).
double max_stable_dt(const env::EnvironmentSpec& spec);

/// Window radius keeping boundary leakage negligible up to t_end.
int recommended_half_width(double kappa, double t_end);

/// Classical fourth-order explicit integration of dm/dt = H m from
/// m(0) = delta_y, Dirichlet outside the window. Throws before starting when
/// dt exceeds the stability margin. record_stride 0 picks a stride that keeps
/// at most ~2000 records.
MomentTrajectory integrate_moments(const env::EnvironmentWindow& window,
                                   const env::EnvironmentSpec& spec, int y, double t_end,
                                   double dt, int record_stride = 0);

/// Same integration from an arbitrary window-indexed initial field.
MomentTrajectory integrate_moments_field(const env::EnvironmentWindow& window,
                                         const env::EnvironmentSpec& spec,
                                         std::vector<double> initial, double t_end, double dt,
                                         int record_stride = 0);

/// Least-squares slope of log m1(t, site) over the final 30% of the time
/// range. Requires at least 20 positive samples there.
double growth_rate(const MomentTrajectory& traj, int site);

}  // namespace brw::evolve
