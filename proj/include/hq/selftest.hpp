#pragma once

// Built-in property suites run by `hqsolve selftest`.

#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hq/config.hpp"

namespace hq {

struct SuiteResult {
    std::string name;
    bool pass;
    std::string detail;
};

/// All σ_0..σ_n of a spectrum.  Injectable so that a broken convention can be
/// shown to be caught.
using SigmaFn = std::function<std::vector<double>(std::span<const double>)>;

/// σ_j(λ) = σ_j(λ|i) + λ_i σ_{j−1}(λ|i) for every i, j on seeded cone samples.
[[nodiscard]] SuiteResult recurrence_suite(const SigmaFn& sigma);

[[nodiscard]] SuiteResult symfun_oracle_suite();
[[nodiscard]] SuiteResult geometry_covariance_suite();
[[nodiscard]] SuiteResult jet_convergence_suite();
/// t = 0 Newton solve from a perturbed sphere.  Uses (n, k, l) and the grid of
/// `cfg` when given, else (3, 2, 0) on 129 nodes.
[[nodiscard]] SuiteResult fixed_point_suite(const RunConfig* cfg);

[[nodiscard]] std::vector<SuiteResult> run_selftest_suites(const RunConfig* cfg, const SigmaFn& sigma);

/// Runs every suite, prints one line each; 0 iff all pass.
int run_selftest(const RunConfig* cfg, std::ostream& log);

}  // namespace hq
