#include "brw/evolver.hpp"

#include <cmath>
#include <stdexcept>

#include "brw/spectral.hpp"
#include "brw/stats.hpp"

namespace brw::evolve {

double max_stable_dt(const env::EnvironmentSpec& spec) {
    return 0.1 / (2.0 * spec.kappa + spec.c + spec.lambda_source);
}

int recommended_half_width(double kappa, double t_end) {
    return static_cast<int>(std::ceil(4.0 * std::sqrt(kappa * t_end))) + 20;
}

MomentTrajectory integrate_moments(const env::EnvironmentWindow& window,
                                   const env::EnvironmentSpec& spec, int y, double t_end,
                                   double dt, int record_stride) {
    const int L = window.half_width();
    if (y < -L || y > L) throw std::invalid_argument("integrate_moments: source outside window");
    std::vector<double> initial(2 * static_cast<std::size_t>(L) + 1, 0.0);
    initial[static_cast<std::size_t>(y + L)] = 1.0;
    auto traj = integrate_moments_field(window, spec, std::move(initial), t_end, dt,
                                        record_stride);
    traj.source_site = y;
    return traj;
}

MomentTrajectory integrate_moments_field(const env::EnvironmentWindow& window,
                                         const env::EnvironmentSpec& spec,
                                         std::vector<double> initial, double t_end, double dt,
                                         int record_stride) {
    const int L = window.half_width();
    if (initial.size() != 2 * static_cast<std::size_t>(L) + 1) {
        throw std::invalid_argument("integrate_moments: initial field must be window-indexed");
    }
    if (!(t_end > 0.0)) throw std::invalid_argument("integrate_moments: t_end must be > 0");
    if (!(dt > 0.0) || dt > max_stable_dt(spec) * (1.0 + 1e-12)) {
        throw std::invalid_argument("integrate_moments: dt exceeds the stability margin "
                                    "0.1/(2 kappa + c + lambda)");
    }
    const auto op = spectral::build_hamiltonian(window, spec);
    const auto n_steps = static_cast<std::int64_t>(std::ceil(t_end / dt - 1e-12));
    const double h = t_end / static_cast<double>(n_steps);  // h <= dt, lands on t_end
    if (record_stride <= 0) {
        record_stride = static_cast<int>(n_steps / 2000) + 1;
    }

    const auto n = static_cast<std::size_t>(op.size());
    std::vector<double> m = std::move(initial);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

    MomentTrajectory traj;
    traj.source_site = 0;
    traj.half_width = L;
    traj.times.push_back(0.0);
    traj.fields.push_back(m);

    for (std::int64_t step = 1; step <= n_steps; ++step) {
        op.apply(m, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = m[i] + 0.5 * h * k1[i];
        op.apply(tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = m[i] + 0.5 * h * k2[i];
        op.apply(tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = m[i] + h * k3[i];
        op.apply(tmp, k4);
        for (std::size_t i = 0; i < n; ++i) {
            m[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if (step % record_stride == 0 || step == n_steps) {
            traj.times.push_back(static_cast<double>(step) * h);
            traj.fields.push_back(m);
        }
    }
    return traj;
}

double growth_rate(const MomentTrajectory& traj, int site) {
    if (site < -traj.half_width || site > traj.half_width) {
        throw std::invalid_argument("growth_rate: site outside window");
    }
    if (traj.times.size() < 2) throw std::invalid_argument("growth_rate: trajectory too short");
    const double t_last = traj.times.back();
    const double t_first = traj.times.front();
    const double t_cut = t_last - 0.3 * (t_last - t_first);
    std::vector<double> ts, logs;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        if (traj.times[i] < t_cut) continue;
        const double v = traj.value(i, site);
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::runtime_error("growth_rate: m1 vanished or underflowed in the fit window");
        }
        ts.push_back(traj.times[i]);
        logs.push_back(std::log(v));
    }
    if (ts.size() < 20) {
        throw std::runtime_error("growth_rate: fewer than 20 positive samples in the fit window");
    }
    return stats::fit_line(ts, logs).slope;
}

}  // namespace brw::evolve
