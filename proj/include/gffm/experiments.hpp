#pragma once

#include "gffm/fps.hpp"

namespace gffm::experiments {

struct SuiteOptions {
    std::vector<std::uint64_t> seeds{7, 8, 9};
    double scale = 1.0;   // replicate multiplier for quick runs
    unsigned threads = 0; // 0 picks the configured default
};

struct SuiteResult {
    std::string name;
    std::vector<stats::TestReport> reports;
    bool pass = false;
    double runtime_ms = 0.0;
    std::string data_csv; // suite-specific summary table
};

/// Verification suites runnable from the CLI, plus the deterministic
/// network suite and the exhaustive small-graph oracle suite.
std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, const SuiteOptions& opt = {});

SuiteResult network_suite();
SuiteResult eq1_suite(const SuiteOptions& opt = {});
SuiteResult two_point_suite(const SuiteOptions& opt = {});
SuiteResult rewire_suite(const SuiteOptions& opt = {});
SuiteResult connect_suite(const SuiteOptions& opt = {});
SuiteResult star_joint_suite(const SuiteOptions& opt = {});
SuiteResult levy_suite(const SuiteOptions& opt = {});
SuiteResult fps_laplace_suite(const SuiteOptions& opt = {});
SuiteResult cor34_suite(const SuiteOptions& opt = {});
SuiteResult lattice_suite(const SuiteOptions& opt = {}, int rows = 40, int cols = 80,
                          bool periodic_rows = false);
SuiteResult oracle_suite(const SuiteOptions& opt = {});

}  // namespace gffm::experiments
