#include "brw/env.hpp"

#include <cmath>
#include <stdexcept>

#include "brw/io.hpp"
#include "brw/rng.hpp"

namespace brw::env {

void MuDistribution::validate() const {
    const double weights[] = {atom_at_zero_prob, atom_at_c_prob, continuous_weight};
    for (double w : weights) {
        if (!(w >= 0.0 && w <= 1.0)) {
            throw std::invalid_argument("mu distribution: weights must lie in [0,1]");
        }
    }
    const double total = atom_at_zero_prob + atom_at_c_prob + continuous_weight;
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("mu distribution: weights must sum to 1");
    }
    if (continuous_weight > 0.0 && family == ContinuousFamily::scaled_beta) {
        if (!(beta_alpha > 0.0) || !(beta_beta > 0.0)) {
            throw std::invalid_argument("mu distribution: beta shapes must be positive");
        }
    }
}

MuDistribution bernoulli_mu(double atom_at_zero_prob) {
    MuDistribution dist;
    dist.atom_at_zero_prob = atom_at_zero_prob;
    dist.atom_at_c_prob = 1.0 - atom_at_zero_prob;
    dist.continuous_weight = 0.0;
    return dist;
}

void EnvironmentSpec::validate() const {
    if (!(lambda_source >= 0.0)) throw std::invalid_argument("spec: lambda_source must be >= 0");
    if (!(kappa > 0.0)) throw std::invalid_argument("spec: kappa must be > 0");
    if (!(c >= 0.0)) throw std::invalid_argument("spec: c must be >= 0");
    mu_dist.validate();
}

EnvironmentWindow::EnvironmentWindow(int half_width, std::uint64_t seed)
    : half_width_(half_width), seed_(seed), mu_(2 * static_cast<std::size_t>(half_width) + 1, 0.0) {
    if (half_width < 1) throw std::invalid_argument("window: half_width must be >= 1");
}

double EnvironmentWindow::mu(int x) const {
    if (x == 0 || x < -half_width_ || x > half_width_) {
        throw std::invalid_argument("window: site outside stored field");
    }
    return mu_[static_cast<std::size_t>(x + half_width_)];
}

void EnvironmentWindow::set_mu(int x, double value) {
    if (x == 0 || x < -half_width_ || x > half_width_) {
        throw std::invalid_argument("window: site outside stored field");
    }
    mu_[static_cast<std::size_t>(x + half_width_)] = value;
}

EnvironmentWindow EnvironmentWindow::restricted(int half_width) const {
    if (half_width > half_width_) {
        throw std::invalid_argument("window: cannot restrict to a larger radius");
    }
    EnvironmentWindow out(half_width, seed_);
    for (int x = -half_width; x <= half_width; ++x) {
        if (x != 0) out.set_mu(x, mu(x));
    }
    return out;
}

std::string EnvironmentWindow::to_json() const {
    std::vector<double> values;
    values.reserve(2 * static_cast<std::size_t>(half_width_));
    for (int x = -half_width_; x <= half_width_; ++x) {
        if (x != 0) values.push_back(mu(x));
    }
    return io::JsonObject{}
        .field("half_width", half_width_)
        .field("seed", seed_)
        .field("mu", values)
        .str();
}

double sample_mu(const MuDistribution& dist, double c, std::uint64_t seed, std::int64_t site) {
    SubStream stream(seed, static_cast<std::uint64_t>(site));
    const double u = stream.next_u01();
    if (u < dist.atom_at_zero_prob) return 0.0;
    if (u < dist.atom_at_zero_prob + dist.atom_at_c_prob) return c;
    switch (dist.family) {
        case ContinuousFamily::uniform:
            return c * stream.next_u01();
        case ContinuousFamily::scaled_beta:
            return c * stream.next_beta(dist.beta_alpha, dist.beta_beta);
    }
    throw std::invalid_argument("mu distribution: unknown continuous family");
}

EnvironmentWindow sample_environment(const EnvironmentSpec& spec, int half_width,
                                     std::uint64_t seed) {
    spec.validate();
    EnvironmentWindow window(half_width, seed);
    for (int x = -half_width; x <= half_width; ++x) {
        if (x == 0) continue;
        window.set_mu(x, sample_mu(spec.mu_dist, spec.c, seed, x));
    }
    return window;
}

EnvironmentWindow constant_environment(double c1, int half_width) {
    if (!(c1 >= 0.0)) throw std::invalid_argument("constant environment: rate must be >= 0");
    EnvironmentWindow window(half_width, 0);
    for (int x = -half_width; x <= half_width; ++x) {
        if (x != 0) window.set_mu(x, c1);
    }
    return window;
}

EnvironmentWindow two_point_environment(double mu1, double mu_minus1, int half_width) {
    if (!(mu1 >= 0.0) || !(mu_minus1 >= 0.0)) {
        throw std::invalid_argument("two-point environment: rates must be >= 0");
    }
    EnvironmentWindow window(half_width, 0);
    window.set_mu(1, mu1);
    window.set_mu(-1, mu_minus1);
    return window;
}

EnvironmentWindow island_environment(int l, double c, int half_width) {
    if (l < 0) throw std::invalid_argument("island environment: l must be >= 0");
    if (l >= half_width) {
        throw std::invalid_argument("island environment: need l < half_width");
    }
    EnvironmentWindow window(half_width, 0);
    for (int x = -half_width; x <= half_width; ++x) {
        if (x != 0) window.set_mu(x, std::abs(x) <= l ? 0.0 : c);
    }
    return window;
}

double potential(const EnvironmentWindow& window, const EnvironmentSpec& spec, int x) {
    if (x < -window.half_width() || x > window.half_width()) {
        throw std::invalid_argument("potential: site outside window");
    }
    return x == 0 ? spec.lambda_source : -window.mu(x);
}

}  // namespace brw::env
