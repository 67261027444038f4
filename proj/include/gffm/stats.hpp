#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gffm::stats {

/// Counter-based uniform stream. Every draw is a pure function of
/// (seed, replicate, site counter), so replicate-level parallelism can
/// never change the sample set.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t replicate = 0);

    /// Independent stream for a given replicate index of the same seed.
    RandomStream substream(std::uint64_t replicate) const;

    /// Uniform variate in the open interval (0,1).
    double uniform();

    /// Standard normal variate via inverse CDF of uniform().
    double normal();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t replicate() const { return replicate_; }

private:
    std::uint64_t seed_;
    std::uint64_t replicate_;
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

/// Inverse of the standard normal CDF, accurate to ~1e-15.
double inv_normal_cdf(double p);

/// Standard normal CDF.
double normal_cdf(double x);

struct TestReport {
    std::string name;
    std::string statistic;   // "ks1", "ks2", "mean_z", "binom_z", ...
    double value = 0.0;      // the statistic itself
    double p_value = 0.0;    // p for KS tests, |z| threshold margin for z tests
    bool pass = false;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::uint64_t seed = 0;
    double runtime_ms = 0.0;
    std::string detail;

    std::string to_json() const;
};

/// Asymptotic Kolmogorov p-value for statistic d at effective sample size n.
double ks_pvalue(double d, double n_eff);

/// One-sample KS against a continuous CDF.
TestReport ks_one_sample(const std::string& name, std::vector<double> samples,
                         const std::function<double(double)>& cdf,
                         std::uint64_t seed = 0, double p_threshold = 0.01);

/// One-sample test for a law with an atom at zero: binomial z-test on the
/// atom mass plus KS on the positive sub-sample against the conditional CDF.
TestReport ks_with_zero_atom(const std::string& name, const std::vector<double>& samples,
                             double atom_mass,
                             const std::function<double(double)>& conditional_cdf,
                             std::uint64_t seed = 0, double p_threshold = 0.01,
                             double z_threshold = 4.0);

/// Two-sample KS with asymptotic p-value.
TestReport ks_two_sample(const std::string& name, std::vector<double> a,
                         std::vector<double> b, std::uint64_t seed = 0,
                         double p_threshold = 0.01);

/// z-statistic of the sample mean against a target; passes when
/// |z| <= tolerance_in_se.
TestReport mean_z(const std::string& name, const std::vector<double>& samples,
                  double target, double tolerance_in_se = 4.0,
                  std::uint64_t seed = 0);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
};

/// Least-squares line fit, used for log-log exponent checks.
SlopeFit slope_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Runs fn(replicate) for replicate in [0,n) on up to `threads` workers.
/// Each replicate owns its output slot, so results are thread-count invariant.
void parallel_replicates(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t)>& fn);

/// Worker count from GFFM_THREADS, falling back to hardware concurrency.
unsigned default_threads();

}  // namespace gffm::stats
