#include "gffm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace gffm::stats {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
    z += kGamma;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t stream_base(std::uint64_t seed, std::uint64_t replicate) {
    return mix64(mix64(seed ^ 0xa0761d6478bd642fULL) + mix64(replicate ^ 0x452821e638d01377ULL));
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t replicate)
    : seed_(seed), replicate_(replicate), base_(stream_base(seed, replicate)) {}

RandomStream RandomStream::substream(std::uint64_t replicate) const {
    return RandomStream(seed_, replicate);
}

double RandomStream::uniform() {
    const std::uint64_t w = mix64(base_ + counter_ * kGamma);
    ++counter_;
    return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() { return inv_normal_cdf(uniform()); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double inv_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("inv_normal_cdf: p outside (0,1)");
    // Acklam's rational approximation, then one Halley refinement.
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
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

std::string TestReport::to_json() const {
    std::ostringstream os;
    os.precision(10);
    os << "{\"test\":\"" << name << "\",\"statistic\":\"" << statistic
       << "\",\"value\":" << value << ",\"p\":" << p_value
       << ",\"pass\":" << (pass ? "true" : "false") << ",\"n\":" << n1;
    if (n2 > 0) os << ",\"n2\":" << n2;
    os << ",\"seed\":" << seed << ",\"runtime_ms\":" << runtime_ms;
    if (!detail.empty()) os << ",\"detail\":\"" << detail << "\"";
    os << "}";
    return os.str();
}

double ks_pvalue(double d, double n_eff) {
    const double s = std::sqrt(n_eff);
    const double lambda = (s + 0.12 + 0.11 / s) * d;
    if (lambda < 1e-8) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-14) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestReport ks_one_sample(const std::string& name, std::vector<double> samples,
                         const std::function<double(double)>& cdf,
                         std::uint64_t seed, double p_threshold) {
    if (samples.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    double dmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(samples[i]);
        dmax = std::max(dmax, std::abs(f - static_cast<double>(i) / n));
        dmax = std::max(dmax, std::abs(static_cast<double>(i + 1) / n - f));
    }
    TestReport r;
    r.name = name;
    r.statistic = "ks1";
    r.value = dmax;
    r.p_value = ks_pvalue(dmax, static_cast<double>(n));
    r.pass = r.p_value > p_threshold;
    r.n1 = n;
    r.seed = seed;
    return r;
}

TestReport ks_with_zero_atom(const std::string& name, const std::vector<double>& samples,
                             double atom_mass,
                             const std::function<double(double)>& conditional_cdf,
                             std::uint64_t seed, double p_threshold, double z_threshold) {
    if (samples.empty()) throw std::invalid_argument("ks_with_zero_atom: empty sample");
    std::vector<double> positive;
    std::size_t zeros = 0;
    for (double v : samples) {
        if (v == 0.0)
            ++zeros;
        else
            positive.push_back(v);
    }
    const double n = static_cast<double>(samples.size());
    const double se = std::sqrt(std::max(atom_mass * (1.0 - atom_mass), 1e-300) / n);
    const double z = (static_cast<double>(zeros) / n - atom_mass) / se;

    TestReport r;
    r.name = name;
    r.seed = seed;
    r.n1 = samples.size();
    if (positive.empty()) {
        r.statistic = "binom_z";
        r.value = z;
        r.p_value = 2.0 * normal_cdf(-std::abs(z));
        r.pass = std::abs(z) <= z_threshold;
        return r;
    }
    TestReport ks = ks_one_sample(name, positive, conditional_cdf, seed, p_threshold);
    r.statistic = "atom_z+ks1";
    r.value = ks.value;
    r.p_value = ks.p_value;
    r.pass = (std::abs(z) <= z_threshold) && ks.pass;
    std::ostringstream os;
    os << "atom_z=" << z << " atom_mass=" << atom_mass
       << " atom_frac=" << static_cast<double>(zeros) / n;
    r.detail = os.str();
    return r;
}

TestReport ks_two_sample(const std::string& name, std::vector<double> a,
                         std::vector<double> b, std::uint64_t seed, double p_threshold) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t na = a.size(), nb = b.size();
    std::size_t i = 0, j = 0;
    double dmax = 0.0;
    while (i < na && j < nb) {
        const double v = std::min(a[i], b[j]);
        while (i < na && a[i] <= v) ++i;
        while (j < nb && b[j] <= v) ++j;
        dmax = std::max(dmax, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double n_eff = static_cast<double>(na) * nb / static_cast<double>(na + nb);
    TestReport r;
    r.name = name;
    r.statistic = "ks2";
    r.value = dmax;
    r.p_value = ks_pvalue(dmax, n_eff);
    r.pass = r.p_value > p_threshold;
    r.n1 = na;
    r.n2 = nb;
    r.seed = seed;
    return r;
}

TestReport mean_z(const std::string& name, const std::vector<double>& samples,
                  double target, double tolerance_in_se, std::uint64_t seed) {
    if (samples.size() < 2) throw std::invalid_argument("mean_z: degenerate sample");
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : samples) var += (v - mean) * (v - mean);
    var /= (n - 1.0);
    const double se = std::sqrt(var / n);
    const double z = se > 0.0 ? (mean - target) / se : (mean == target ? 0.0 : 1e300);
    TestReport r;
    r.name = name;
    r.statistic = "mean_z";
    r.value = z;
    r.p_value = 2.0 * normal_cdf(-std::abs(z));
    r.pass = std::abs(z) <= tolerance_in_se;
    r.n1 = samples.size();
    r.seed = seed;
    std::ostringstream os;
    os << "mean=" << mean << " target=" << target << " se=" << se;
    r.detail = os.str();
    return r;
}

SlopeFit slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("slope_fit: need at least 3 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    SlopeFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    if (x.size() > 2) f.stderr_slope = std::sqrt(ss / (n - 2.0) * n / denom);
    return f;
}

void parallel_replicates(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([t, threads, n, &fn] {
            for (std::size_t i = t; i < n; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

unsigned default_threads() {
    if (const char* env = std::getenv("GFFM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace gffm::stats
