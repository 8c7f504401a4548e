#pragma once

// Damped Newton corrector and the t-continuation from the unit sphere.
//
// The discrete equation at every node is the log form
//   log σ_k(λ(η)) − log σ_l(λ(η)) − log f^t(X, ν) = 0,
// with λ(η) computed from finite-difference jets of ρ.

#include <vector>

#include <Eigen/SparseCore>

#include "hq/estimates.hpp"
#include "hq/fspec.hpp"
#include "hq/sphere_grid.hpp"

namespace hq {

struct SolverConfig {
    double newton_tol = 1e-10;  // sup-norm of the log residual
    int max_newton = 30;
    double dt_init = 0.1;
    double dt_min = 1e-4;
    double dt_max = 0.25;
    double dt_growth = 1.5;
    int fast_iterations = 4;    // grow Δt after a corrector this quick
    double fd_step = 0.0;       // relative jet step for the Jacobian; 0 selects ε^{1/3}
    double backtrack = 0.5;
    int max_halvings = 20;
    double cone_margin = 1e-12;
    bool enforce_c0 = true;     // abort when r1 < ρ < r2 fails on an accepted step

    /// Defaults for the grid kind (tolerance 1e-10 axisymmetric, 1e-8 on S²).
    static SolverConfig defaults_for(const Grid& grid);
    void validate() const;
};

struct TraceEntry {
    double t;
    int newton_iterations;
    double residual_sup;
    BoundsSnapshot bounds;
};

using SolveTrace = std::vector<TraceEntry>;

struct SolutionField {
    ScalarField rho;
    double residual_sup;
    BoundsSnapshot bounds;
    SolveTrace trace;
};

struct NewtonResult {
    ScalarField rho;
    int iterations;
    double residual_sup;
};

/// Per-node log residual.  Throws ConeViolation (with node index),
/// DegenerateJet, NonpositiveF or EvalError.
[[nodiscard]] ScalarField residual_vector(const ScalarField& rho, const Grid& grid,
                                          const HomotopyTarget& target, double t);

/// Columns grouped so that no two columns of one group touch a common row.
[[nodiscard]] std::vector<std::vector<int>> jacobian_coloring(const Grid& grid);

/// ∂residual_i/∂ρ_j: central differences of the pointwise residual in the
/// jet entries, chained with the (linear) stencil weights of each color.
[[nodiscard]] Eigen::SparseMatrix<double> assemble_jacobian(const ScalarField& rho, const Grid& grid,
                                                            const HomotopyTarget& target, double t,
                                                            const SolverConfig& cfg);

/// Backtracking Newton on the residual sup norm.  Every trial iterate must
/// stay admissible (ρ > 0, λ(η) ∈ Γ_k with margin ≥ cone_margin).  Throws
/// ConeViolation if `rho0` itself is inadmissible, NoConvergence otherwise.
[[nodiscard]] NewtonResult newton_solve(const ScalarField& rho0, double t, const HomotopyTarget& target,
                                        const Grid& grid, const SolverConfig& cfg);

/// Follows t from 0 (ρ ≡ 1, or `warm_start`) to 1.  Accepted steps are
/// appended to `*trace_out` as they happen, so a partial trace survives
/// ContinuationStalled / MonitorViolation.
[[nodiscard]] SolutionField continuation_solve(const HomotopyTarget& target, const Grid& grid,
                                               const SolverConfig& cfg, SolveTrace* trace_out = nullptr,
                                               const ScalarField* warm_start = nullptr);

}  // namespace hq
