#pragma once

// INI-style run configuration:
//
//   [problem]   n, k, l, f, r1, r2, override_validation, validation_samples
//   [grid]      mode = axisym | s2, nodes, n_theta, n_phi
//   [solver]    newton_tol, max_newton, dt_init, dt_min, dt_max, fd_step,
//               max_halvings, cone_margin
//   [output]    directory, formats (comma list of csv, obj)
//
// Lines starting with '#' or ';' are comments.  Unknown sections or keys are
// rejected.

#include <filesystem>
#include <string>
#include <string_view>

#include "hq/continuation.hpp"

namespace hq {

struct ProblemConfig {
    int n = 3;
    int k = 2;
    int l = 0;
    std::string f;
    double r1 = 0.5;
    double r2 = 2.0;
    bool override_validation = false;
    int validation_samples = 200;
};

enum class GridMode { Axisym, S2 };

struct GridConfig {
    GridMode mode = GridMode::Axisym;
    int nodes = 129;
    int n_theta = 32;
    int n_phi = 64;
};

struct OutputConfig {
    std::string directory = "out";
    bool csv = true;
    bool obj = false;
};

struct RunConfig {
    ProblemConfig problem;
    GridConfig grid;
    SolverConfig solver;
    OutputConfig output;

    [[nodiscard]] QuotientParams params() const;
    [[nodiscard]] Grid make_grid() const;
    [[nodiscard]] HomotopyTarget make_target() const;
};

/// Throws ConfigError naming the key path and line.
[[nodiscard]] RunConfig parse_config(std::string_view text);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);
[[nodiscard]] std::string serialize_config(const RunConfig& cfg);

[[nodiscard]] bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace hq
