#pragma once

#include <optional>

#include "brw/env.hpp"

namespace brw::criteria {

/// Almost-sure supercriticality: Lambda >= sqrt((kappa+c)^2 - kappa^2) - c.
bool as_supercritical_condition(double lambda_source, double kappa, double c);

struct IntervalBound {
    double lower = 0.0;
    double upper = 0.0;
};

/// Environment-independent enclosure of the positive eigenvalue, valid when
/// the almost-sure condition holds; throws std::domain_error otherwise.
IntervalBound eigenvalue_interval(double lambda_source, double kappa, double c);

/// sqrt((Lambda + c1)^2 + kappa^2) - (c1 + kappa): the eigenvalue of the
/// environment constant at c1; a genuine eigenvalue only when positive.
double constant_env_eigenvalue(double lambda_source, double kappa, double c1);

/// Right-hand side of the two-point existence condition, sigma = 2/kappa.
double two_point_threshold(double kappa, double mu1, double mu_minus1);

/// Lambda > (mu1 + mu-1 + 2 sigma mu1 mu-1) / ((1 + sigma mu1)(1 + sigma mu-1)).
bool two_point_condition(double lambda_source, double kappa, double mu1, double mu_minus1);

/// Symmetric two-point eigenvalue via the cubic in z = e^k:
/// z^3 - z^2 sigma (Lambda - mu) - z (sigma^2 Lambda mu + 1) + sigma mu = 0;
/// the root z > 1 gives lambda = (kappa/2)(z + 1/z - 2). Empty when none.
std::optional<double> two_point_eigenvalue_symmetric(double lambda_source, double kappa,
                                                     double mu);

/// (H psi, psi) for psi(x) = 2^{-a|x|}:
/// -kappa (2^a - 1)/(2^a + 1) + Lambda - sum_x mu(x) 4^{-a|x|}, with the tail
/// beyond the window charged at the worst case c (one-sided, the form is only
/// ever under-reported).
double quadratic_form(const env::EnvironmentWindow& window, const env::EnvironmentSpec& spec,
                      double a);

/// l2 norm squared of psi(x) = 2^{-a|x|} on the whole lattice.
double test_function_norm_sq(double a);

/// R(alpha, beta) = sum_k (beta^{2k+1} - alpha^{2k+1}) C_{k+l} with a
/// certified geometric tail below tol. Requires 0 < beta <= alpha < 1/2.
double island_R(double alpha, double beta, int l, double tol = 1e-14);

struct IslandSolveResult {
    int l = 0;
    std::optional<double> lambda_root;
    double R_value = 0.0;  // at the root, or at the probe point when no root
    bool converged = false;
};

/// Root in lambda of
/// 2 alpha kappa / (1 + sqrt(1 - 4 alpha^2)) + kappa alpha^{2l} R + Lambda - kappa - lambda
/// on (1e-9, Lambda + 2 kappa]; empty when the left end is already <= 0.
IslandSolveResult island_solve(double lambda_source, double kappa, double c, int l);
std::optional<double> island_lambda(double lambda_source, double kappa, double c, int l);

/// Smallest l <= l_max whose island equation has a positive root.
std::optional<int> find_l_hat(double lambda_source, double kappa, double c, int l_max);

}  // namespace brw::criteria
