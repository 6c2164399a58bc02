#include "brw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "brw/io.hpp"

namespace brw::spectral {

namespace {
constexpr double kMachEps = std::numeric_limits<double>::epsilon();
}

void TridiagonalOperator::apply(const std::vector<double>& v, std::vector<double>& y) const {
    const int n = size();
    y.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double s = diag[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        if (i > 0) s += offdiag * v[static_cast<std::size_t>(i - 1)];
        if (i + 1 < n) s += offdiag * v[static_cast<std::size_t>(i + 1)];
        y[static_cast<std::size_t>(i)] = s;
    }
}

TridiagonalOperator build_hamiltonian(const env::EnvironmentWindow& window,
                                      const env::EnvironmentSpec& spec) {
    TridiagonalOperator op;
    op.half_width = window.half_width();
    op.kappa = spec.kappa;
    op.c = spec.c;
    op.lambda_source = spec.lambda_source;
    op.offdiag = spec.kappa / 2.0;
    const int L = op.half_width;
    op.diag.resize(2 * static_cast<std::size_t>(L) + 1);
    for (int x = -L; x <= L; ++x) {
        op.diag[static_cast<std::size_t>(op.index_of(x))] =
            env::potential(window, spec, x) - spec.kappa;
    }
    return op;
}

TridiagonalOperator build_mu_hamiltonian(const env::EnvironmentWindow& window,
                                         const env::EnvironmentSpec& spec) {
    TridiagonalOperator op = build_hamiltonian(window, spec);
    // Origin gets its own killing draw, keyed by site 0 which the regular
    // sampler never consumes.
    const double mu0 = env::sample_mu(spec.mu_dist, spec.c, window.seed(), 0);
    op.diag[static_cast<std::size_t>(op.index_of(0))] = -mu0 - spec.kappa;
    op.lambda_source = 0.0;
    return op;
}

int eigenvalue_count_below(const TridiagonalOperator& op, double shift) {
    // EISPACK-style Sturm sequence: u_i = d_i - x - e^2/u_{i-1}; the number of
    // negative u_i equals the number of eigenvalues below the shift.
    const int n = op.size();
    const double e2 = op.offdiag * op.offdiag;
    const double huge = std::abs(op.offdiag) / kMachEps;
    int count = 0;
    double u = 1.0;
    for (int i = 0; i < n; ++i) {
        double v = 0.0;
        if (i > 0) v = (u != 0.0) ? e2 / u : huge;
        u = op.diag[static_cast<std::size_t>(i)] - shift - v;
        if (u < 0.0) ++count;
    }
    return count;
}

int positive_eigenvalue_count(const TridiagonalOperator& op, double tol) {
    return op.size() - eigenvalue_count_below(op, tol);
}

double top_eigenvalue(const TridiagonalOperator& op, double tol) {
    const int n = op.size();
    double lo = -2.0 * op.kappa - op.c - op.lambda_source;
    double hi = op.lambda_source + 2.0 * op.kappa;
    // Invariant: count(hi) == n, count(lo) < n.
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (eigenvalue_count_below(op, mid) == n) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

// LU factorization of (T - lambda I) with partial pivoting. Row swaps create a
// second super-diagonal; multipliers and swap flags are kept for the solves.
struct ShiftedFactor {
    std::vector<double> d, u1, u2, m;
    std::vector<char> swapped;
    int n = 0;

    ShiftedFactor(const TridiagonalOperator& op, double lambda) {
        n = op.size();
        const double e = op.offdiag;
        d.resize(static_cast<std::size_t>(n));
        u1.assign(static_cast<std::size_t>(n), 0.0);
        u2.assign(static_cast<std::size_t>(n), 0.0);
        m.assign(static_cast<std::size_t>(n), 0.0);
        swapped.assign(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < n; ++i) {
            d[static_cast<std::size_t>(i)] = op.diag[static_cast<std::size_t>(i)] - lambda;
            if (i + 1 < n) u1[static_cast<std::size_t>(i)] = e;
        }
        double norm = 0.0;
        for (double v : d) norm = std::max(norm, std::abs(v));
        norm = std::max(norm, std::abs(e));
        const double tiny = std::max(norm, 1.0) * kMachEps * kMachEps;
        for (int i = 0; i + 1 < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            double sub = e;  // row i+1, column i
            if (std::abs(d[k]) >= std::abs(sub)) {
                if (d[k] == 0.0) d[k] = tiny;
                const double mult = sub / d[k];
                m[k] = mult;
                d[k + 1] -= mult * u1[k];
                // u2[k] stays 0
            } else {
                swapped[k] = 1;
                const double mult = d[k] / sub;
                const double row_i_u1 = u1[k];      // may differ from e after an earlier swap
                const double next_d = d[k + 1];
                const double next_u1 = u1[k + 1];
                m[k] = mult;
                d[k] = sub;
                u1[k] = next_d;
                u2[k] = next_u1;
                d[k + 1] = row_i_u1 - mult * next_d;
                u1[k + 1] = -mult * next_u1;
            }
        }
        if (d[static_cast<std::size_t>(n - 1)] == 0.0) {
            d[static_cast<std::size_t>(n - 1)] = tiny;
        }
    }

    void solve(std::vector<double>& r) const {
        for (int i = 0; i + 1 < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            if (swapped[k]) std::swap(r[k], r[k + 1]);
            r[k + 1] -= m[k] * r[k];
        }
        for (int i = n - 1; i >= 0; --i) {
            const auto k = static_cast<std::size_t>(i);
            double s = r[k];
            if (i + 1 < n) s -= u1[k] * r[k + 1];
            if (i + 2 < n) s -= u2[k] * r[k + 2];
            r[k] = s / d[k];
        }
    }
};

double l2_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

Eigenfunction eigenfunction(const TridiagonalOperator& op, double lambda) {
    const int n = op.size();
    const ShiftedFactor factor(op, lambda);
    std::vector<double> v(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> tv;
    const double accept = 1e-8 * std::max(1.0, std::abs(lambda));
    double best_residual = std::numeric_limits<double>::infinity();
    std::vector<double> best = v;
    for (int iter = 0; iter < 6; ++iter) {
        factor.solve(v);
        const double norm = l2_norm(v);
        if (!(norm > 0.0) || !std::isfinite(norm)) break;
        for (double& x : v) x /= norm;
        op.apply(v, tv);
        double rr = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = tv[static_cast<std::size_t>(i)] - lambda * v[static_cast<std::size_t>(i)];
            rr += r * r;
        }
        const double residual = std::sqrt(rr);
        if (residual < best_residual) {
            best_residual = residual;
            best = v;
        }
        if (residual <= accept * 1e-4) break;
    }
    if (!(best_residual <= accept)) {
        throw std::runtime_error("eigenfunction: inverse iteration did not converge; "
                                 "shift is not an eigenvalue to working accuracy");
    }
    Eigenfunction out;
    const auto origin = static_cast<std::size_t>(op.index_of(0));
    if (best[origin] < 0.0) {
        for (double& x : best) x = -x;
    }
    out.unit = best;
    out.residual = best_residual;
    if (best[origin] == 0.0) {
        throw std::runtime_error("eigenfunction: vanishing value at the origin, cannot rescale");
    }
    out.origin_scaled = best;
    for (double& x : out.origin_scaled) x /= best[origin];
    return out;
}

PositivityReport check_positivity(const env::EnvironmentWindow& window,
                                  const env::EnvironmentSpec& spec, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("check_positivity: tol must be > 0");
    PositivityReport rep;
    rep.half_width = window.half_width();
    const auto op_full = build_hamiltonian(window, spec);
    rep.lambda_top = top_eigenvalue(op_full);
    const int half = std::max(1, window.half_width() / 2);
    const auto op_half = build_hamiltonian(window.restricted(half), spec);
    rep.lambda_half = top_eigenvalue(op_half);
    rep.truncation_gap = std::abs(rep.lambda_top - rep.lambda_half);
    // Dirichlet truncation makes lambda_top non-decreasing in L, so agreement
    // of both widths on the same side of tol is decisive; a straddle with a
    // non-converged gap is not.
    const bool straddle = (rep.lambda_top > tol) != (rep.lambda_half > tol);
    if (straddle && rep.truncation_gap >= tol / 10.0) {
        rep.verdict = Verdict::indeterminate;
    } else {
        rep.verdict = rep.lambda_top > tol ? Verdict::positive : Verdict::negative;
    }
    return rep;
}

bool has_positive_eigenvalue(const env::EnvironmentWindow& window,
                             const env::EnvironmentSpec& spec, double tol) {
    const PositivityReport rep = check_positivity(window, spec, tol);
    if (rep.verdict == Verdict::indeterminate) {
        throw std::runtime_error("has_positive_eigenvalue: truncation unstable near tol, "
                                 "enlarge the window");
    }
    return rep.verdict == Verdict::positive;
}

PositivityReport resolve_positivity(const std::function<env::EnvironmentWindow(int)>& generator,
                                    const env::EnvironmentSpec& spec, double tol,
                                    int initial_half_width, int max_half_width) {
    int width = initial_half_width;
    PositivityReport rep = check_positivity(generator(width), spec, tol);
    while (rep.verdict == Verdict::indeterminate && 2 * width <= max_half_width) {
        width *= 2;
        rep = check_positivity(generator(width), spec, tol);
    }
    return rep;
}

std::string EigenReport::to_json() const {
    return io::JsonObject{}
        .field("lambda_top", lambda_top)
        .field("has_positive", has_positive)
        .field("truncation_gap", truncation_gap)
        .field("residual", residual)
        .field("half_width", half_width)
        .str();
}

EigenReport analyze(const env::EnvironmentWindow& window, const env::EnvironmentSpec& spec,
                    double positivity_tol) {
    const PositivityReport pos = check_positivity(window, spec, positivity_tol);
    const auto op = build_hamiltonian(window, spec);
    const Eigenfunction ef = eigenfunction(op, pos.lambda_top);
    EigenReport report;
    report.lambda_top = pos.lambda_top;
    report.has_positive = pos.verdict == Verdict::positive;
    report.eigenfunction = ef.unit;
    report.truncation_gap = pos.truncation_gap;
    report.residual = ef.residual;
    report.half_width = window.half_width();
    return report;
}

bool spectrum_envelope_check(const env::EnvironmentWindow& window,
                             const env::EnvironmentSpec& spec, double tol) {
    const auto op = build_mu_hamiltonian(window, spec);
    const double floor = -2.0 * spec.kappa - spec.c - tol;
    const int above = positive_eigenvalue_count(op, tol);
    const int below = eigenvalue_count_below(op, floor);
    return above == 0 && below == 0;
}

}  // namespace brw::spectral
