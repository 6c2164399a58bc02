#include "brw/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace brw::stats {

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("normal_quantile: p must be in (0,1)");
    }
    // Acklam 2003 coefficients.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

Interval wilson_interval(std::int64_t k, std::int64_t n, double confidence) {
    if (n <= 0 || k < 0 || k > n) {
        throw std::invalid_argument("wilson_interval: need 0 <= k <= n, n > 0");
    }
    const double z = normal_quantile(0.5 + confidence / 2.0);
    const double z2 = z * z;
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(k) / nn;
    const double denom = 1.0 + z2 / nn;
    const double center = (phat + z2 / (2.0 * nn)) / denom;
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
    Interval out;
    out.low = center - half;
    out.high = center + half;
    // rounding of the two expressions can differ in the last ulp; the
    // interval must contain the point estimate
    if (out.low > phat) out.low = phat;
    if (out.high < phat) out.high = phat;
    if (out.low < 0.0) out.low = 0.0;
    if (out.high > 1.0) out.high = 1.0;
    return out;
}

LineFit fit_line(std::span<const double> t, std::span<const double> y) {
    if (t.size() != y.size() || t.size() < 2) {
        throw std::invalid_argument("fit_line: need two samples of equal length");
    }
    const double n = static_cast<double>(t.size());
    double st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sy += y[i];
    }
    const double mt = st / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        sxx += (t[i] - mt) * (t[i] - mt);
        sxy += (t[i] - mt) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("fit_line: degenerate abscissae");
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mt;
    return fit;
}

}  // namespace brw::stats
