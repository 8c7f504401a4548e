#pragma once

// Command implementations behind the hqsolve executable.  Each returns a
// process exit code and writes diagnostics to `log`.
//
//   0  success
//   2  configuration or prescription error
//   3  assumptions failed (or an a priori bound was violated during the solve)
//   4  cone violation
//   5  continuation stalled / Newton failed
//   6  I/O error

#include <filesystem>
#include <ostream>

#include "hq/config.hpp"

namespace hq {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitValidation = 3,
    kExitCone = 4,
    kExitStalled = 5,
    kExitIo = 6,
};

/// Environment variable that replaces output.directory when set.
inline constexpr const char* kOutputDirEnv = "HQ_OUTPUT_DIR";

[[nodiscard]] std::filesystem::path output_directory(const RunConfig& cfg);

/// Validates, solves and writes rho.csv, trace.csv, summary.txt and (if
/// requested) mesh.obj.  A stalled run still writes the partial trace and
/// the last accepted field.
int run_solve(const RunConfig& cfg, std::ostream& log);

/// Prints each assumption with its worst margin.  0 iff all pass.
int run_validate(const RunConfig& cfg, std::ostream& log);

/// Reads rho.csv and writes mesh.obj into the output directory.
int run_export(const RunConfig& cfg, const std::filesystem::path& rho_csv, std::ostream& log);

/// Prints the bounds snapshot of a stored field.
int run_geometry(const RunConfig& cfg, const std::filesystem::path& rho_csv, std::ostream& log);

/// Maps a library exception onto an exit code.
[[nodiscard]] int exit_code_for(const std::exception& e);

void write_rho_csv(const std::filesystem::path& path, const ScalarField& rho, const Grid& grid);
[[nodiscard]] ScalarField read_rho_csv(const std::filesystem::path& path, const Grid& grid);
void write_trace_csv(const std::filesystem::path& path, const SolveTrace& trace);

/// OBJ surface X = ρ·x.  S² grids get n_theta·n_phi vertices plus one per
/// pole; axisymmetric fields are revolved with 128 azimuthal samples.
/// Throws UnsupportedDimension for an S² grid with n ≠ 2.
void export_mesh_obj(const ScalarField& rho, const Grid& grid, int n, const std::filesystem::path& path);

inline constexpr int kRevolveSamples = 128;

}  // namespace hq
