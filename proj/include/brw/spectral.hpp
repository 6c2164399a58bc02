#pragma once

#include <functional>
#include <string>
#include <vector>

#include "brw/env.hpp"

namespace brw::spectral {

inline constexpr double kDefaultPositivityTol = 1e-7;
inline constexpr int kDefaultHalfWidth = 400;
inline constexpr double kEigenvalueTol = 1e-12;

/// Truncation of kappa*Laplacian + V to {-L..L} with killing outside the
/// window: symmetric tridiagonal, diag = V(x) - kappa, off-diagonal kappa/2.
struct TridiagonalOperator {
    std::vector<double> diag;
    double offdiag = 0.0;
    int half_width = 0;
    double kappa = 0.0;
    double c = 0.0;
    double lambda_source = 0.0;

    int size() const noexcept { return static_cast<int>(diag.size()); }
    int index_of(int x) const noexcept { return x + half_width; }

    /// y = T v (y resized as needed).
    void apply(const std::vector<double>& v, std::vector<double>& y) const;
};

TridiagonalOperator build_hamiltonian(const env::EnvironmentWindow& window,
                                      const env::EnvironmentSpec& spec);

/// Variant without the source: the origin carries a killing draw from the
/// window's own sub-stream instead of lambda_source.
TridiagonalOperator build_mu_hamiltonian(const env::EnvironmentWindow& window,
                                         const env::EnvironmentSpec& spec);

/// Number of eigenvalues strictly below `shift` (Sturm sign count, O(n)).
int eigenvalue_count_below(const TridiagonalOperator& op, double shift);

/// Number of eigenvalues above `tol`. For the one-source Hamiltonian this is
/// 0 or 1.
int positive_eigenvalue_count(const TridiagonalOperator& op, double tol = 0.0);

/// Largest eigenvalue by Sturm bisection on the a-priori enclosure
/// [-2k - c - Lambda, Lambda + 2k], to absolute tolerance `tol`.
double top_eigenvalue(const TridiagonalOperator& op, double tol = kEigenvalueTol);

struct Eigenfunction {
    std::vector<double> unit;           // l2-normalized
    std::vector<double> origin_scaled;  // rescaled so u(0) = 1
    double residual = 0.0;              // ||T u - lambda u||_2 for the unit vector
};

/// Inverse-iteration eigenvector for an eigenvalue known to kEigenvalueTol.
/// Throws std::runtime_error if the iteration does not converge (lambda not
/// an eigenvalue).
Eigenfunction eigenfunction(const TridiagonalOperator& op, double lambda);

enum class Verdict { negative, positive, indeterminate };

struct PositivityReport {
    Verdict verdict = Verdict::negative;
    double lambda_top = 0.0;       // at the full width
    double lambda_half = 0.0;      // at half the width
    double truncation_gap = 0.0;   // |lambda_top - lambda_half|
    int half_width = 0;
};

/// Decides lambda_top > tol with a truncation-stability check against the
/// half-width operator. The verdict is `indeterminate` when the two widths
/// straddle tol and differ by at least tol/10; the caller should enlarge L.
PositivityReport check_positivity(const env::EnvironmentWindow& window,
                                  const env::EnvironmentSpec& spec,
                                  double tol = kDefaultPositivityTol);

/// Boolean form of check_positivity; throws std::runtime_error on an
/// indeterminate verdict.
bool has_positive_eigenvalue(const env::EnvironmentWindow& window,
                             const env::EnvironmentSpec& spec,
                             double tol = kDefaultPositivityTol);

/// Re-derives the environment at doubled radii until the verdict stabilizes
/// or max_half_width is reached. generator(L) must return nested windows
/// (shared sites identical), which holds for all builders in brw::env.
PositivityReport resolve_positivity(const std::function<env::EnvironmentWindow(int)>& generator,
                                    const env::EnvironmentSpec& spec,
                                    double tol = kDefaultPositivityTol,
                                    int initial_half_width = kDefaultHalfWidth,
                                    int max_half_width = 8 * kDefaultHalfWidth);

struct EigenReport {
    double lambda_top = 0.0;
    bool has_positive = false;
    std::vector<double> eigenfunction;  // l2-normalized
    double truncation_gap = 0.0;
    double residual = 0.0;
    int half_width = 0;

    std::string to_json() const;
};

EigenReport analyze(const env::EnvironmentWindow& window, const env::EnvironmentSpec& spec,
                    double positivity_tol = kDefaultPositivityTol);

/// Certifies that the source-free operator has all eigenvalues inside
/// [-2k - c - tol, tol] via two Sturm counts.
bool spectrum_envelope_check(const env::EnvironmentWindow& window,
                             const env::EnvironmentSpec& spec, double tol = 1e-9);

}  // namespace brw::spectral
