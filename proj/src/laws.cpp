#include "gffm/laws.hpp"

#include "gffm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gffm::laws {

double local_time_survival(const BridgeSpec& b, double l) {
    if (l < 0.0) throw std::domain_error("local_time_survival: l < 0");
    const double s = std::abs(b.w0) + std::abs(b.wT) + l;
    const double d = b.w0 - b.wT;
    const double v = std::exp(-(s * s - d * d) / (2.0 * b.T));
    return std::clamp(v, 0.0, 1.0);
}

double sample_local_time(const BridgeSpec& b, double u) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("sample_local_time: u outside (0,1)");
    const double d = b.w0 - b.wT;
    const double l = std::sqrt(d * d - 2.0 * b.T * std::log(u)) - std::abs(b.w0) - std::abs(b.wT);
    return l > 0.0 ? l : 0.0;
}

double bridge_min_survival(const BridgeSpec& b, double a) {
    if (a >= std::min(b.w0, b.wT)) return 0.0;
    return 1.0 - std::exp(-2.0 * (b.w0 - a) * (b.wT - a) / b.T);
}

double sample_bridge_min(const BridgeSpec& b, double u) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("sample_bridge_min: u outside (0,1)");
    const double c = -b.T * std::log(u);
    const double d = b.w0 - b.wT;
    return 0.5 * ((b.w0 + b.wT) - std::sqrt(d * d + 2.0 * c));
}

double two_set_survival(const TwoSetLawSpec& spec, double l) {
    if (l < 0.0) throw std::domain_error("two_set_survival: l < 0");
    spec.bc.require_sign_constancy();
    std::map<int, int> where;
    for (int i = 0; i < static_cast<int>(spec.kernel.points.size()); ++i)
        where[spec.kernel.points[i]] = i;
    double exponent = 0.0;
    for (int xh : *spec.bc.hat) {
        const double hh = spec.bc.value_at(xh);
        for (int xc : *spec.bc.check) {
            const double hc = spec.bc.value_at(xc);
            const double c = spec.kernel.entries(where.at(xh), where.at(xc));
            const double s = std::abs(hh) + std::abs(hc) + l;
            const double d = hh - hc;
            exponent += 0.5 * c * (s * s - d * d);
        }
    }
    return std::clamp(std::exp(-exponent), 0.0, 1.0);
}

double fps_laplace(double c_hat_check, double m, double h_check, double a, double u) {
    if (!(u > 0.0)) throw std::domain_error("fps_laplace: u must be positive");
    const double s = m - a + std::sqrt((h_check - a) * (h_check - a) + 2.0 * u);
    const double d = m - h_check;
    return std::exp(-0.5 * c_hat_check * (s * s - d * d));
}

double bm_hitting_cdf(double m, double a, double t) {
    if (t < 0.0) throw std::domain_error("bm_hitting_cdf: t < 0");
    if (m == a) return t >= 0.0 ? 1.0 : 0.0;
    if (t == 0.0) return 0.0;
    return 2.0 * stats::normal_cdf(-std::abs(m - a) / std::sqrt(t));
}

double last_visit_cdf(const BridgeSpec& b, double a, double t) {
    if (t < 0.0) throw std::domain_error("last_visit_cdf: t < 0");
    if (t >= b.T) return 1.0;
    const double horizon = b.T - t;
    // P(last visit <= t) = P(no visit of level a during [t, T]).
    auto avoid = [&](double x) {
        const double p = (x - a) * (b.wT - a);
        if (p <= 0.0) return 0.0;
        return 1.0 - std::exp(-2.0 * p / horizon);
    };
    if (t == 0.0) return avoid(b.w0);  // the atom: the bridge never visits a

    const double mu = b.w0 + (t / b.T) * (b.wT - b.w0);
    const double sigma = std::sqrt(t * (b.T - t) / b.T);
    double lo, hi;
    if (b.wT > a) {
        lo = a;
        hi = std::max(mu, a) + 10.0 * sigma;
    } else if (b.wT < a) {
        lo = std::min(mu, a) - 10.0 * sigma;
        hi = a;
    } else {
        return 0.0;  // bridge ends exactly at the level
    }
    // Composite Simpson over the bridge marginal at time t.
    const int n = 1024;
    const double h = (hi - lo) / n;
    auto f = [&](double x) {
        const double z = (x - mu) / sigma;
        const double dens = std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
        return dens * avoid(x);
    };
    double sum = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) sum += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return std::clamp(sum * h / 3.0, 0.0, 1.0);
}

}  // namespace gffm::laws
