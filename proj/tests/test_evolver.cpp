#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "brw/criteria.hpp"
#include "brw/env.hpp"
#include "brw/evolver.hpp"
#include "brw/spectral.hpp"

using namespace brw;
using doctest::Approx;

namespace {

env::EnvironmentSpec make_spec(double lambda, double kappa, double c) {
    env::EnvironmentSpec spec;
    spec.lambda_source = lambda;
    spec.kappa = kappa;
    spec.c = c;
    spec.mu_dist = env::bernoulli_mu(0.5);
    return spec;
}

double total_mass(const evolve::MomentTrajectory& traj, std::size_t k) {
    return std::accumulate(traj.fields[k].begin(), traj.fields[k].end(), 0.0);
}

}  // namespace

TEST_CASE("pure walk conserves mass away from the boundary") {
    const auto spec = make_spec(0.0, 1.0, 0.0);
    const auto window = env::constant_environment(0.0, 40);
    const auto traj =
        evolve::integrate_moments(window, spec, 0, 8.0, evolve::max_stable_dt(spec));
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        CHECK(total_mass(traj, k) == Approx(1.0).epsilon(1e-12));
        for (double v : traj.fields[k]) CHECK(v >= 0.0);
    }
}

TEST_CASE("mass grows only through the origin") {
    const auto spec = make_spec(0.7, 1.0, 0.0);
    const auto window = env::constant_environment(0.0, 30);
    const auto traj = evolve::integrate_moments(window, spec, 0, 2.0,
                                                evolve::max_stable_dt(spec) / 5.0, 1);
    // centered difference of the total mass vs Lambda * m(t, 0); the O(h^2)
    // difference error dominates the comparison
    const double h = traj.times[1] - traj.times[0];
    for (std::size_t k = 2; k + 2 < traj.times.size(); k += 125) {
        const double deriv = (total_mass(traj, k + 1) - total_mass(traj, k - 1)) / (2.0 * h);
        CHECK(deriv == Approx(spec.lambda_source * traj.value(k, 0)).epsilon(1e-4));
    }
}

TEST_CASE("supercritical constant environment approaches e^{lambda t}") {
    const auto spec = make_spec(1.0, 1.0, 0.0);
    const double lambda = criteria::constant_env_eigenvalue(1.0, 1.0, 0.0);
    const double t_end = 50.0 / lambda;
    const int half_width = evolve::recommended_half_width(spec.kappa, t_end);
    const auto window = env::constant_environment(0.0, half_width);
    const auto traj =
        evolve::integrate_moments(window, spec, 0, t_end, evolve::max_stable_dt(spec));
    const double rate = evolve::growth_rate(traj, 0);
    CHECK(rate == Approx(lambda).epsilon(0.02));
    // m e^{-lambda t} settles to a constant on the tail
    const double late = traj.value(traj.times.size() - 1, 0) *
                        std::exp(-lambda * traj.times.back());
    const double mid = traj.value(traj.times.size() / 2, 0) *
                       std::exp(-lambda * traj.times[traj.times.size() / 2]);
    CHECK(late == Approx(mid).epsilon(0.02));
}

TEST_CASE("no positive eigenvalue means no exponential growth") {
    // subcritical random environment: the log-slope stays at or below zero
    const auto spec = make_spec(0.2, 1.0, 1.0);
    const auto window = env::sample_environment(spec, 80, 1311);
    const auto op = spectral::build_hamiltonian(window, spec);
    REQUIRE(spectral::top_eigenvalue(op) <= 0.0);
    const auto traj =
        evolve::integrate_moments(window, spec, 0, 40.0, evolve::max_stable_dt(spec));
    CHECK(evolve::growth_rate(traj, 0) <= 1e-3);
}

TEST_CASE("uniform killing without a source decays") {
    const auto spec = make_spec(0.0, 1.0, 0.5);
    const auto window = env::constant_environment(0.5, 40);
    const auto traj =
        evolve::integrate_moments(window, spec, 0, 30.0, evolve::max_stable_dt(spec));
    CHECK(evolve::growth_rate(traj, 0) < 0.0);
}

TEST_CASE("growth rate is site-independent in a supercritical environment") {
    const auto spec = make_spec(1.0, 1.0, 1.0);
    const auto probe = env::sample_environment(spec, 400, 777);
    const double lambda =
        spectral::top_eigenvalue(spectral::build_hamiltonian(probe, spec));
    REQUIRE(lambda > 0.2);
    const double t_end = 50.0 / lambda;
    const int half_width =
        std::max(evolve::recommended_half_width(spec.kappa, t_end), 80);
    const auto window = env::sample_environment(spec, half_width, 777);
    const auto traj =
        evolve::integrate_moments(window, spec, 0, t_end, evolve::max_stable_dt(spec));
    const double at_origin = evolve::growth_rate(traj, 0);
    const double at_three = evolve::growth_rate(traj, 3);
    CHECK(at_origin == Approx(lambda).epsilon(0.02));
    CHECK(at_three == Approx(at_origin).epsilon(0.02));
}

TEST_CASE("trajectories are linear in the initial condition") {
    const auto spec = make_spec(0.8, 1.0, 1.0);
    const auto window = env::sample_environment(spec, 25, 4242);
    const double dt = evolve::max_stable_dt(spec);
    const auto from_zero = evolve::integrate_moments(window, spec, 0, 3.0, dt, 10);
    const auto from_one = evolve::integrate_moments(window, spec, 1, 3.0, dt, 10);
    std::vector<double> both(51, 0.0);
    both[25] = 1.0;  // delta_0
    both[26] = 1.0;  // + delta_1
    const auto combined = evolve::integrate_moments_field(window, spec, both, 3.0, dt, 10);
    REQUIRE(from_zero.times == combined.times);
    const auto last = from_zero.times.size() - 1;
    for (int x = -25; x <= 25; ++x) {
        const double summed = from_zero.value(last, x) + from_one.value(last, x);
        CHECK(combined.value(last, x) == Approx(summed).epsilon(1e-10));
    }
}

TEST_CASE("stability guard rejects large steps") {
    const auto spec = make_spec(1.0, 1.0, 1.0);
    const auto window = env::constant_environment(0.5, 10);
    const double dt_max = evolve::max_stable_dt(spec);
    CHECK_THROWS_AS(evolve::integrate_moments(window, spec, 0, 1.0, 2.0 * dt_max),
                    std::invalid_argument);
    CHECK_NOTHROW(evolve::integrate_moments(window, spec, 0, 1.0, dt_max));
}

TEST_CASE("growth rate demands positive samples") {
    const auto spec = make_spec(0.0, 1.0, 0.0);
    const auto window = env::constant_environment(0.0, 30);
    const auto traj =
        evolve::integrate_moments(window, spec, 0, 1.0, evolve::max_stable_dt(spec));
    // site 29 is out of diffusive reach at t = 1: m1 underflows to zero there
    CHECK_THROWS_AS(evolve::growth_rate(traj, 29), std::runtime_error);
}
