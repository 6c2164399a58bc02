#include "brw/paths.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace brw::paths {

std::int64_t catalan(int n) {
    if (n < 0 || n > 35) {
        throw std::invalid_argument("catalan: exact range is 0 <= n <= 35");
    }
    // C_0 = 1, C_{k+1} = C_k * (4k+2)/(k+2); the product is always integral.
    unsigned __int128 value = 1;
    for (int k = 0; k < n; ++k) {
        value = value * static_cast<unsigned>(4 * k + 2) / static_cast<unsigned>(k + 2);
    }
    return static_cast<std::int64_t>(value);
}

double catalan_real(int n) {
    if (n < 0) throw std::invalid_argument("catalan_real: n must be >= 0");
    if (n <= 35) return static_cast<double>(catalan(n));
    return std::exp(std::lgamma(2.0 * n + 1.0) - 2.0 * std::lgamma(n + 1.0) -
                    std::log(n + 1.0));
}

namespace {

// C(n, k) with overflow detection; the reflection-principle counts stay well
// inside int64 for every n where the binomial itself fits.
std::int64_t binomial_checked(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 value = 1;
    for (int i = 1; i <= k; ++i) {
        value = value * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (value > static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max())) {
            throw std::invalid_argument("path_count: count exceeds the exact integer range");
        }
    }
    return static_cast<std::int64_t>(value);
}

}  // namespace

std::int64_t path_count(int x, int n) {
    if (x < 1) throw std::invalid_argument("path_count: x must be >= 1");
    if (n < 0) throw std::invalid_argument("path_count: n must be >= 0");
    if (n < x || (n - x) % 2 != 0) return 0;
    // Reflection principle: C(n-1, (n-x)/2) - C(n-1, (n+x)/2).
    return binomial_checked(n - 1, (n - x) / 2) - binomial_checked(n - 1, (n + x) / 2);
}

PathSeriesResult u_path_series(const env::EnvironmentWindow& window,
                               const env::EnvironmentSpec& spec, double lambda, int x,
                               double tol) {
    if (!(lambda > 0.0)) {
        throw std::domain_error("u_path_series: series diverges for lambda <= 0");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("u_path_series: tol must be > 0");
    const int L = window.half_width();
    if (x == 0 || x < -L || x > L) {
        throw std::invalid_argument("u_path_series: x must be a nonzero window site");
    }
    const double kappa = spec.kappa;
    const double E = kappa + lambda;
    const int ax = std::abs(x);

    // Worst-case weight per step is kappa/(2E) and path counts grow at most
    // like 2^n, so the length-n layer is bounded by q^n with q = kappa/E < 1
    // and the tail beyond N by q^{N+1}/(1-q).
    const double q = kappa / E;
    int n_max = ax;
    {
        const double needed = std::log(tol * (1.0 - q)) / std::log(q);  // N+1 > needed
        if (needed > 2e9) {
            throw std::runtime_error("u_path_series: tolerance unreachable for this lambda");
        }
        if (needed > static_cast<double>(n_max)) n_max = static_cast<int>(needed) + 1;
    }
    double tail = std::pow(q, n_max + 1) / (1.0 - q);
    while (tail >= tol) {
        ++n_max;
        tail *= q;
    }
    // A path of length n ending at 0 never leaves |z| <= (n + |x|)/2.
    const int reach = (n_max + ax) / 2;
    if (reach > L) {
        throw std::runtime_error("u_path_series: window too small for the requested tolerance");
    }

    // Paths starting on one side of 0 stay there; work on 1..reach with the
    // field mirrored for x < 0. g[z] holds the weighted count of n-step
    // origin-avoiding paths z -> 0.
    const int side = x > 0 ? 1 : -1;
    std::vector<double> weight(static_cast<std::size_t>(reach) + 2, 0.0);
    for (int z = 1; z <= reach; ++z) {
        weight[static_cast<std::size_t>(z)] = (kappa / 2.0) / (window.mu(side * z) + E);
    }
    std::vector<double> g(static_cast<std::size_t>(reach) + 2, 0.0);
    std::vector<double> g_next(static_cast<std::size_t>(reach) + 2, 0.0);
    double value = 0.0;
    // Length-1 layer: one step from z=1 into the origin.
    g[1] = weight[1];
    if (ax == 1) value += g[1];
    for (int n = 2; n <= n_max; ++n) {
        // z = 1 sees no contribution from the left: entering 0 ends a path,
        // so no path passes through 0 before its final step.
        for (int z = 1; z <= reach; ++z) {
            const double from_left = (z >= 2) ? g[static_cast<std::size_t>(z - 1)] : 0.0;
            const double from_right = g[static_cast<std::size_t>(z + 1)];
            g_next[static_cast<std::size_t>(z)] =
                weight[static_cast<std::size_t>(z)] * (from_left + from_right);
        }
        g.swap(g_next);
        value += g[static_cast<std::size_t>(ax)];
    }
    PathSeriesResult out;
    out.value = value;
    out.terms_used = n_max;
    out.tail_bound = tail;
    return out;
}

double u1_constant_closed_form(double kappa, double lambda, double c1) {
    if (!(kappa > 0.0)) throw std::invalid_argument("u1_constant_closed_form: kappa must be > 0");
    const double e1 = (kappa + lambda + c1) / kappa;
    if (e1 < 1.0) {
        throw std::domain_error("u1_constant_closed_form: requires kappa + lambda + c1 >= kappa");
    }
    return e1 - std::sqrt(e1 * e1 - 1.0);
}

double verify_resolvent_identity(const env::EnvironmentWindow& window,
                                 const env::EnvironmentSpec& spec, double lambda,
                                 const std::vector<double>& u) {
    const int L = window.half_width();
    if (u.size() != 2 * static_cast<std::size_t>(L) + 1) {
        throw std::invalid_argument("verify_resolvent_identity: u must be window-indexed");
    }
    const double E = spec.kappa + lambda;
    const auto at = [&](int x) { return u[static_cast<std::size_t>(x + L)]; };
    double worst = 0.0;
    for (int x = -L + 1; x <= L - 1; ++x) {
        if (x == 0) continue;
        const double lhs = (spec.kappa / 2.0) * (at(x + 1) + at(x - 1));
        const double rhs = (window.mu(x) + E) * at(x);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

}  // namespace brw::paths
