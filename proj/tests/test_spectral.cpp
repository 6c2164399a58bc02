#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "brw/criteria.hpp"
#include "brw/env.hpp"
#include "brw/rng.hpp"
#include "brw/spectral.hpp"

using namespace brw;
using doctest::Approx;

namespace {

env::EnvironmentSpec make_spec(double lambda, double kappa, double c, double p0 = 1.0) {
    env::EnvironmentSpec spec;
    spec.lambda_source = lambda;
    spec.kappa = kappa;
    spec.c = c;
    spec.mu_dist = env::bernoulli_mu(p0);
    return spec;
}

// Characteristic polynomial of the tridiagonal matrix via the leading
// principal minor recurrence; independent of the Sturm counting code.
double charpoly(const spectral::TridiagonalOperator& op, double x) {
    const double e2 = op.offdiag * op.offdiag;
    double p_prev = 1.0;
    double p = op.diag[0] - x;
    for (int i = 1; i < op.size(); ++i) {
        const double p_next = (op.diag[static_cast<std::size_t>(i)] - x) * p - e2 * p_prev;
        p_prev = p;
        p = p_next;
    }
    return p;
}

// Largest root of the characteristic polynomial by downward scan + bisection.
double charpoly_top_root(const spectral::TridiagonalOperator& op) {
    double hi = op.lambda_source + 2.0 * op.kappa + op.c + 1.0;
    const double s_hi = charpoly(op, hi);
    double lo = hi;
    double s_lo = s_hi;
    const double step = 1e-3;
    while (s_lo * s_hi > 0.0) {
        lo -= step;
        s_lo = charpoly(op, lo);
        REQUIRE(lo > -10.0);
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (charpoly(op, mid) * s_hi > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("hamiltonian layout") {
    const auto spec = make_spec(1.0, 1.0, 0.0);
    const auto window = env::constant_environment(0.0, 2);
    const auto op = spectral::build_hamiltonian(window, spec);
    CHECK(op.offdiag == 0.5);
    const std::vector<double> expect = {-1.0, -1.0, 0.0, -1.0, -1.0};
    CHECK(op.diag == expect);

    const auto spec2 = make_spec(0.0, 2.0, 1.0);
    const auto two_point = env::two_point_environment(1.0, 1.0, 3);
    const auto op2 = spectral::build_hamiltonian(two_point, spec2);
    CHECK(op2.offdiag == 1.0);
    CHECK(op2.diag[static_cast<std::size_t>(op2.index_of(0))] == -2.0);
    CHECK(op2.diag[static_cast<std::size_t>(op2.index_of(1))] == -3.0);
    CHECK(op2.diag[static_cast<std::size_t>(op2.index_of(-1))] == -3.0);
}

TEST_CASE("top eigenvalue matches the closed form of the constant environment") {
    const auto spec = make_spec(1.0, 1.0, 0.0);
    const auto op = spectral::build_hamiltonian(env::constant_environment(0.0, 400), spec);
    CHECK(spectral::top_eigenvalue(op) == Approx(std::sqrt(2.0) - 1.0).epsilon(1e-9));
}

TEST_CASE("no source means no positive eigenvalue") {
    for (double c1 : {0.0, 0.5, 2.0}) {
        const auto spec = make_spec(0.0, 1.0, c1, 0.0);
        const auto op =
            spectral::build_hamiltonian(env::constant_environment(c1, 200), spec);
        CHECK(spectral::top_eigenvalue(op) <= 0.0);
        CHECK(spectral::positive_eigenvalue_count(op, 0.0) == 0);
    }
}

TEST_CASE("small dense case agrees with the characteristic polynomial oracle") {
    SubStream stream(2024, 5);
    for (int trial = 0; trial < 10; ++trial) {
        const auto spec = make_spec(0.5 + stream.next_u01(), 0.5 + stream.next_u01(),
                                    1.0, 0.5);
        auto window = env::EnvironmentWindow(2, 0);
        for (int x = -2; x <= 2; ++x) {
            if (x != 0) window.set_mu(x, stream.next_u01());
        }
        const auto op = spectral::build_hamiltonian(window, spec);
        REQUIRE(op.size() == 5);
        const double lhs = spectral::top_eigenvalue(op);
        const double rhs = charpoly_top_root(op);
        CHECK(lhs == Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("sturm count at zero counts positive eigenvalues, at most one") {
    const auto spec = make_spec(0.9, 1.0, 1.0, 0.5);
    for (std::uint64_t s = 0; s < 30; ++s) {
        const auto window = env::sample_environment(spec, 120, derive_seed(31337, s));
        const auto op = spectral::build_hamiltonian(window, spec);
        const int count = spectral::positive_eigenvalue_count(op, 0.0);
        CHECK(count >= 0);
        CHECK(count <= 1);
        CHECK(count == (spectral::top_eigenvalue(op) > 0.0 ? 1 : 0));
    }
}

TEST_CASE("dirichlet bracketing: top eigenvalue non-decreasing in width") {
    const auto spec = make_spec(1.2, 1.0, 1.0, 0.5);
    const auto big = env::sample_environment(spec, 400, 5150);
    double prev = -1e9;
    std::vector<double> values;
    for (int L : {50, 100, 200, 400}) {
        const auto op = spectral::build_hamiltonian(big.restricted(L), spec);
        const double lambda = spectral::top_eigenvalue(op);
        CHECK(lambda >= prev - 1e-12);
        values.push_back(lambda);
        prev = lambda;
    }
    // geometric convergence for a positive eigenvalue
    REQUIRE(values.back() > 0.1);
    CHECK(std::abs(values[3] - values[2]) <= std::abs(values[2] - values[1]) + 1e-14);
}

TEST_CASE("eigenfunction properties in a symmetric environment") {
    const auto spec = make_spec(1.0, 1.0, 0.0);
    const auto window = env::constant_environment(0.0, 200);
    const auto op = spectral::build_hamiltonian(window, spec);
    const double lambda = spectral::top_eigenvalue(op);
    const auto ef = spectral::eigenfunction(op, lambda);
    CHECK(ef.residual <= 1e-8 * std::max(1.0, std::abs(lambda)));
    CHECK(ef.origin_scaled[static_cast<std::size_t>(op.index_of(0))] == 1.0);
    for (int x = 1; x <= 200; ++x) {
        CHECK(ef.origin_scaled[static_cast<std::size_t>(op.index_of(x))] ==
              Approx(ef.origin_scaled[static_cast<std::size_t>(op.index_of(-x))])
                  .epsilon(1e-10));
    }
    // geometric decay with ratio w = (lambda + kappa - r)/kappa, r = sqrt(lambda(lambda+2kappa))
    const double r = std::sqrt(lambda * (lambda + 2.0 * spec.kappa));
    const double w = (lambda + spec.kappa - r) / spec.kappa;
    for (int x = 1; x <= 30; ++x) {
        const double ratio = ef.origin_scaled[static_cast<std::size_t>(op.index_of(x + 1))] /
                             ef.origin_scaled[static_cast<std::size_t>(op.index_of(x))];
        CHECK(ratio == Approx(w).epsilon(1e-8));
    }
}

TEST_CASE("log eigenfunction is affine in |x| with the dispersion slope") {
    // lambda = kappa (cosh k - 1) links the decay rate k to the eigenvalue
    // when the tail killing vanishes.
    const auto spec = make_spec(1.5, 1.0, 0.0);
    const auto window = env::constant_environment(0.0, 300);
    const auto op = spectral::build_hamiltonian(window, spec);
    const double lambda = spectral::top_eigenvalue(op);
    const auto ef = spectral::eigenfunction(op, lambda);
    const auto at = [&](int x) {
        return ef.origin_scaled[static_cast<std::size_t>(op.index_of(x))];
    };
    // stay well above the inverse-iteration noise floor (u ~ 1e-13)
    std::vector<double> slopes;
    for (int x = 4; x <= 12; ++x) {
        slopes.push_back(std::log(at(x + 1)) - std::log(at(x)));
    }
    const double k_fit = -slopes[4];
    for (double s : slopes) CHECK(s == Approx(slopes.front()).epsilon(1e-5));
    const double lambda_from_k = spec.kappa * (std::cosh(k_fit) - 1.0);
    CHECK(lambda_from_k == Approx(lambda).epsilon(0.01));
}

TEST_CASE("eigenfunction rejects a non-eigenvalue shift") {
    const auto spec = make_spec(1.0, 1.0, 0.0);
    const auto op = spectral::build_hamiltonian(env::constant_environment(0.0, 100), spec);
    CHECK_THROWS_AS(spectral::eigenfunction(op, 0.77), std::runtime_error);
}

TEST_CASE("positivity verdicts") {
    // Almost-sure regime: every environment supercritical.
    const auto spec = make_spec(2.0, 1.0, 1.0, 0.5);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto window = env::sample_environment(spec, 400, derive_seed(777, s));
        CHECK(spectral::has_positive_eigenvalue(window, spec));
    }
    // No source.
    const auto null_spec = make_spec(0.0, 1.0, 1.0, 0.5);
    const auto window = env::sample_environment(null_spec, 400, 3);
    CHECK_FALSE(spectral::has_positive_eigenvalue(window, null_spec));
    CHECK(spectral::check_positivity(window, null_spec).verdict ==
          spectral::Verdict::negative);
}

TEST_CASE("two-point verdicts around the closed-form threshold") {
    // mu = 1, kappa = 2 (sigma = 1): threshold at Lambda = 1.
    const auto window = env::two_point_environment(1.0, 1.0, 400);
    auto spec = make_spec(1.05, 2.0, 1.0);
    CHECK(spectral::has_positive_eigenvalue(window, spec));
    spec.lambda_source = 0.95;
    CHECK_FALSE(spectral::has_positive_eigenvalue(window, spec));
}

TEST_CASE("adaptive resolution widens the window") {
    const auto spec = make_spec(1.2, 1.0, 1.0, 0.5);
    const auto generator = [&](int half_width) {
        return env::sample_environment(spec, half_width, 99);
    };
    const auto rep = spectral::resolve_positivity(generator, spec, 1e-7, 50, 800);
    CHECK(rep.verdict == spectral::Verdict::positive);
    CHECK(rep.truncation_gap < 1e-8);
}

TEST_CASE("spectrum envelope") {
    // mu == 0: spectrum of kappa*Laplacian lies in [-2 kappa, 0].
    auto spec = make_spec(0.0, 1.0, 0.0, 1.0);
    auto window = env::constant_environment(0.0, 150);
    CHECK(spectral::spectrum_envelope_check(window, spec));

    // mu == c: shifted by -c, still inside [-2k - c, 0].
    spec = make_spec(0.0, 1.0, 1.0, 0.0);
    window = env::constant_environment(1.0, 150);
    CHECK(spectral::spectrum_envelope_check(window, spec));

    // random environments
    spec = make_spec(0.0, 1.0, 1.0, 0.5);
    for (std::uint64_t s = 0; s < 50; ++s) {
        window = env::sample_environment(spec, 150, derive_seed(60601, s));
        CHECK(spectral::spectrum_envelope_check(window, spec));
    }
}

TEST_CASE("report never claims positivity without a source") {
    const auto spec = make_spec(0.0, 1.0, 1.0, 0.5);
    const auto window = env::sample_environment(spec, 200, 41);
    const auto report = spectral::analyze(window, spec);
    CHECK_FALSE(report.has_positive);
    CHECK(report.lambda_top <= 0.0);
    CHECK(report.residual <= 1e-8 * std::max(1.0, std::abs(report.lambda_top)));
}

TEST_CASE("eigen report serialization carries the required fields") {
    const auto spec = make_spec(1.0, 1.0, 0.0);
    const auto report =
        spectral::analyze(env::constant_environment(0.0, 100), spec);
    const auto json = report.to_json();
    CHECK(json.find("\"lambda_top\":") != std::string::npos);
    CHECK(json.find("\"has_positive\":true") != std::string::npos);
    CHECK(json.find("\"truncation_gap\":") != std::string::npos);
    CHECK(json.find("\"residual\":") != std::string::npos);
    CHECK(json.find("\"half_width\":100") != std::string::npos);
}
