#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace brw::env {

enum class ContinuousFamily { uniform, scaled_beta };

/// Law of the per-site killing rate: atoms at 0 and at c plus an absolutely
/// continuous component on [0, c]. The three weights must sum to one.
struct MuDistribution {
    double atom_at_zero_prob = 1.0;
    double atom_at_c_prob = 0.0;
    double continuous_weight = 0.0;
    ContinuousFamily family = ContinuousFamily::uniform;
    double beta_alpha = 1.0;  // shape parameters, scaled_beta only
    double beta_beta = 1.0;

    void validate() const;  // throws std::invalid_argument
};

MuDistribution bernoulli_mu(double atom_at_zero_prob);

/// Model parameters: source intensity, walk intensity, killing bound, and the
/// killing law.
struct EnvironmentSpec {
    double lambda_source = 0.0;
    double kappa = 1.0;
    double c = 0.0;
    MuDistribution mu_dist;

    void validate() const;
};

/// One realized killing field on {-L..L} \ {0}, stored densely. Values are
/// immutable after construction apart from the named builders below.
class EnvironmentWindow {
public:
    EnvironmentWindow(int half_width, std::uint64_t seed);

    int half_width() const noexcept { return half_width_; }
    std::uint64_t seed() const noexcept { return seed_; }

    double mu(int x) const;  // requires 0 < |x| <= half_width
    void set_mu(int x, double value);

    /// Field restricted to a smaller radius; shared sites are identical.
    EnvironmentWindow restricted(int half_width) const;

    /// {"half_width": L, "seed": u64, "mu": [x=-L..-1 then 1..L]}
    std::string to_json() const;

private:
    int half_width_;
    std::uint64_t seed_;
    std::vector<double> mu_;  // index x + half_width; origin slot unused
};

/// One draw from the killing law for the sub-stream (seed, site). Independent
/// of any other site and of evaluation order.
double sample_mu(const MuDistribution& dist, double c, std::uint64_t seed, std::int64_t site);

EnvironmentWindow sample_environment(const EnvironmentSpec& spec, int half_width,
                                     std::uint64_t seed);
EnvironmentWindow constant_environment(double c1, int half_width);
EnvironmentWindow two_point_environment(double mu1, double mu_minus1, int half_width);
EnvironmentWindow island_environment(int l, double c, int half_width);

/// V(x): lambda_source at the origin, -mu(x) elsewhere.
double potential(const EnvironmentWindow& window, const EnvironmentSpec& spec, int x);

}  // namespace brw::env
