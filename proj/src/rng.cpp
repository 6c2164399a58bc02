#include "brw/rng.hpp"

#include <cmath>

namespace brw {

double SubStream::next_normal() noexcept {
    // Box-Muller, one value per call; wastes the sine branch but keeps the
    // stream layout independent of call history.
    const double u1 = next_u01_positive();
    const double u2 = next_u01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

double SubStream::next_gamma(double shape) noexcept {
    if (shape < 1.0) {
        // Boost to shape+1 and scale back (Marsaglia-Tsang augmentation step).
        const double u = next_u01_positive();
        return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = next_normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = next_u01_positive();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double SubStream::next_beta(double alpha, double beta) noexcept {
    const double g1 = next_gamma(alpha);
    const double g2 = next_gamma(beta);
    return g1 / (g1 + g2);
}

}  // namespace brw
