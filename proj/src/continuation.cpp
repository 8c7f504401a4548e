#include "hq/continuation.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "hq/errors.hpp"

namespace hq {

namespace {

double sup_norm(const ScalarField& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

struct StateEval {
    ScalarField residual;
    double cone_margin_min;
};

StateEval evaluate_state(const ScalarField& rho, const Grid& grid, const HomotopyTarget& target, double t) {
    const auto& p = target.params;
    for (std::size_t i = 0; i < rho.size(); ++i)
        if (!(rho[i] > 0.0)) throw DegenerateJet("nonpositive radius at node " + std::to_string(i));
    const auto jets = grid_jets(rho, grid, p.n);
    StateEval out{ScalarField(rho.size()), std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < jets.size(); ++i) {
        const PointGeometry geo = assemble_point_geometry(jets[i], p.n);
        const auto cone = in_gamma_k(geo.eta_spectrum, p.k);
        if (!cone.member)
            throw ConeViolation("lambda(eta) outside Gamma_k at node " + std::to_string(i) +
                                    " (margin " + std::to_string(cone.margin) + ")",
                                i);
        out.cone_margin_min = std::min(out.cone_margin_min, cone.margin);
        const double f = eval_homotopy(target, t, as_span(geo.position), as_span(geo.nu));
        out.residual[i] = residual_at_point(geo, p, f);
    }
    return out;
}

double pointwise_residual(const PointJet& jet, const HomotopyTarget& target, double t) {
    const PointGeometry geo = assemble_point_geometry(jet, target.params.n);
    const double f = eval_homotopy(target, t, as_span(geo.position), as_span(geo.nu));
    return residual_at_point(geo, target.params, f);
}

// ∂r/∂ρ, ∂r/∂D_aρ and ∂r/∂(D_aD_bρ) (symmetric pair for a ≠ b) at one node,
// by central differences in each jet entry.
struct JetSensitivity {
    double rho;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;  // upper triangle used
};

JetSensitivity jet_sensitivity(const PointJet& jet, const HomotopyTarget& target, double t, double rel) {
    const int n = jet.dim();
    auto diff = [&](auto&& bump, double magnitude) {
        const double h = rel * std::max(1.0, std::abs(magnitude));
        PointJet up = jet, dn = jet;
        bump(up, h);
        bump(dn, -h);
        try {
            return (pointwise_residual(up, target, t) - pointwise_residual(dn, target, t)) / (2.0 * h);
        } catch (const Error&) {
            // One side left the admissible set: fall back to the other side.
            const double r0 = pointwise_residual(jet, target, t);
            try {
                return (pointwise_residual(up, target, t) - r0) / h;
            } catch (const Error&) {
                return (r0 - pointwise_residual(dn, target, t)) / h;
            }
        }
    };
    JetSensitivity s{0.0, Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
    s.rho = diff([](PointJet& j, double h) { j.rho += h; }, jet.rho);
    for (int a = 0; a < n; ++a) {
        s.grad(a) = diff([a](PointJet& j, double h) { j.grad(a) += h; }, jet.grad(a));
        for (int b = a; b < n; ++b)
            s.hess(a, b) = diff(
                [a, b](PointJet& j, double h) {
                    j.hess(a, b) += h;
                    if (a != b) j.hess(b, a) += h;
                },
                jet.hess(a, b));
    }
    return s;
}

}  // namespace

SolverConfig SolverConfig::defaults_for(const Grid& grid) {
    SolverConfig cfg;
    if (std::holds_alternative<SphereGrid2D>(grid)) cfg.newton_tol = 1e-8;
    return cfg;
}

void SolverConfig::validate() const {
    if (!(newton_tol > 0.0 && max_newton > 0 && dt_init > 0.0 && dt_min > 0.0 && dt_max > 0.0 &&
          dt_growth >= 1.0 && fd_step >= 0.0 && backtrack > 0.0 && backtrack < 1.0 &&
          max_halvings > 0 && cone_margin >= 0.0))
        throw std::invalid_argument("solver settings must be positive");
    if (!(dt_min <= dt_init && dt_init <= 1.0))
        throw std::invalid_argument("solver needs dt_min <= dt_init <= 1");
}

ScalarField residual_vector(const ScalarField& rho, const Grid& grid, const HomotopyTarget& target,
                            double t) {
    return evaluate_state(rho, grid, target, t).residual;
}

std::vector<std::vector<int>> jacobian_coloring(const Grid& grid) {
    const int n = node_count(grid);
    std::vector<std::vector<int>> rows_of(static_cast<std::size_t>(n));  // rows touched by column
    std::vector<std::vector<int>> cols_of(static_cast<std::size_t>(n));  // columns in a row
    for (int row = 0; row < n; ++row) {
        cols_of[static_cast<std::size_t>(row)] = stencil(grid, row);
        for (int col : cols_of[static_cast<std::size_t>(row)])
            rows_of[static_cast<std::size_t>(col)].push_back(row);
    }
    std::vector<int> color(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<int>> groups;
    std::vector<char> used;
    for (int col = 0; col < n; ++col) {
        used.assign(groups.size() + 1, 0);
        for (int row : rows_of[static_cast<std::size_t>(col)])
            for (int other : cols_of[static_cast<std::size_t>(row)]) {
                const int c = color[static_cast<std::size_t>(other)];
                if (c >= 0) used[static_cast<std::size_t>(c)] = 1;
            }
        int c = 0;
        while (used[static_cast<std::size_t>(c)]) ++c;
        color[static_cast<std::size_t>(col)] = c;
        if (c == static_cast<int>(groups.size())) groups.emplace_back();
        groups[static_cast<std::size_t>(c)].push_back(col);
    }
    return groups;
}

Eigen::SparseMatrix<double> assemble_jacobian(const ScalarField& rho, const Grid& grid,
                                              const HomotopyTarget& target, double t,
                                              const SolverConfig& cfg) {
    const int n = node_count(grid);
    const int dim = target.params.n;
    const double rel = cfg.fd_step > 0.0 ? cfg.fd_step : std::cbrt(std::numeric_limits<double>::epsilon());
    const auto jets = grid_jets(rho, grid, dim);
    std::vector<JetSensitivity> sens;
    sens.reserve(jets.size());
    for (const auto& jet : jets) sens.push_back(jet_sensitivity(jet, target, t, rel));

    // Jets are linear in the field, so the jet of the indicator of a color
    // group gives ∂jet_i/∂ρ_j for the one column j of the group near row i.
    std::vector<std::vector<int>> stencils(static_cast<std::size_t>(n));
    for (int row = 0; row < n; ++row) stencils[static_cast<std::size_t>(row)] = stencil(grid, row);
    std::vector<Eigen::Triplet<double>> entries;
    std::vector<char> in_group(static_cast<std::size_t>(n), 0);
    for (const auto& group : jacobian_coloring(grid)) {
        ScalarField indicator(static_cast<std::size_t>(n), 0.0);
        for (int col : group) {
            indicator[static_cast<std::size_t>(col)] = 1.0;
            in_group[static_cast<std::size_t>(col)] = 1;
        }
        const auto dj = grid_jets(indicator, grid, dim);
        for (int row = 0; row < n; ++row) {
            for (int col : stencils[static_cast<std::size_t>(row)]) {
                if (!in_group[static_cast<std::size_t>(col)]) continue;
                const PointJet& d = dj[static_cast<std::size_t>(row)];
                const JetSensitivity& s = sens[static_cast<std::size_t>(row)];
                double value = s.rho * d.rho + s.grad.dot(d.grad);
                for (int a = 0; a < dim; ++a)
                    for (int b = a; b < dim; ++b) value += s.hess(a, b) * d.hess(a, b);
                entries.emplace_back(row, col, value);
                break;
            }
        }
        for (int col : group) in_group[static_cast<std::size_t>(col)] = 0;
    }
    Eigen::SparseMatrix<double> jac(n, n);
    jac.setFromTriplets(entries.begin(), entries.end());
    return jac;
}

NewtonResult newton_solve(const ScalarField& rho0, double t, const HomotopyTarget& target,
                          const Grid& grid, const SolverConfig& cfg) {
    StateEval state = evaluate_state(rho0, grid, target, t);
    if (state.cone_margin_min < cfg.cone_margin)
        throw ConeViolation("initial state is too close to the cone boundary (margin " +
                            std::to_string(state.cone_margin_min) + ")");
    NewtonResult result{rho0, 0, sup_norm(state.residual)};

    while (result.residual_sup > cfg.newton_tol) {
        if (result.iterations == cfg.max_newton)
            throw NoConvergence("Newton did not reach tolerance in " + std::to_string(cfg.max_newton) +
                                " iterations at t = " + std::to_string(t) + " (residual " +
                                std::to_string(result.residual_sup) + ")");
        const Eigen::SparseMatrix<double> jac = assemble_jacobian(result.rho, grid, target, t, cfg);
        Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
        lu.compute(jac);
        if (lu.info() != Eigen::Success) throw NoConvergence("singular Jacobian at t = " + std::to_string(t));
        const Eigen::Map<const Eigen::VectorXd> rhs(state.residual.data(),
                                                    static_cast<Eigen::Index>(state.residual.size()));
        const Eigen::VectorXd step = lu.solve(-rhs);
        if (lu.info() != Eigen::Success || !step.allFinite())
            throw NoConvergence("linear solve failed at t = " + std::to_string(t));

        double alpha = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= cfg.max_halvings && !accepted; ++halving, alpha *= cfg.backtrack) {
            ScalarField trial = result.rho;
            for (std::size_t i = 0; i < trial.size(); ++i) trial[i] += alpha * step(static_cast<Eigen::Index>(i));
            try {
                StateEval trial_state = evaluate_state(trial, grid, target, t);
                const double norm = sup_norm(trial_state.residual);
                if (trial_state.cone_margin_min >= cfg.cone_margin &&
                    norm <= (1.0 - 1e-4 * alpha) * result.residual_sup) {
                    result.rho = std::move(trial);
                    result.residual_sup = norm;
                    state = std::move(trial_state);
                    accepted = true;
                }
            } catch (const DegenerateJet&) {
            } catch (const ConeViolation&) {
            } catch (const NonpositiveF&) {
            } catch (const EvalError&) {
            }
        }
        if (!accepted)
            throw NoConvergence("line search failed at t = " + std::to_string(t) + " (residual " +
                                std::to_string(result.residual_sup) + ")");
        ++result.iterations;
    }
    return result;
}

SolutionField continuation_solve(const HomotopyTarget& target, const Grid& grid, const SolverConfig& cfg,
                                 SolveTrace* trace_out, const ScalarField* warm_start) {
    cfg.validate();
    const auto& p = target.params;
    SolveTrace local;
    SolveTrace& trace = trace_out ? *trace_out : local;
    trace.clear();

    auto record = [&](double t, const NewtonResult& step) {
        const BoundsSnapshot bounds = snapshot_bounds(step.rho, grid, p);
        trace.push_back({t, step.iterations, step.residual_sup, bounds});
        if (!check_positivity(bounds))
            throw MonitorViolation("support function or cone margin not positive at t = " + std::to_string(t));
        if (cfg.enforce_c0) {
            const auto c0 = check_c0(bounds, target.r1, target.r2);
            if (!c0.pass)
                throw MonitorViolation("C0 bound r1 < rho < r2 violated at t = " + std::to_string(t) +
                                       " (rho in [" + std::to_string(bounds.rho_min) + ", " +
                                       std::to_string(bounds.rho_max) + "])");
        }
    };

    const ScalarField start = warm_start ? *warm_start : ScalarField(static_cast<std::size_t>(node_count(grid)), 1.0);
    NewtonResult current = newton_solve(start, 0.0, target, grid, cfg);
    record(0.0, current);

    double t = 0.0;
    double dt = cfg.dt_init;
    while (t < 1.0) {
        const double t_next = std::min(1.0, t + dt);
        try {
            NewtonResult next = newton_solve(current.rho, t_next, target, grid, cfg);
            current = std::move(next);
            t = t_next;
            record(t, current);
            if (current.iterations <= cfg.fast_iterations) dt = std::min(dt * cfg.dt_growth, cfg.dt_max);
        } catch (const NoConvergence&) {
            dt *= 0.5;
        } catch (const ConeViolation&) {
            dt *= 0.5;
        } catch (const NonpositiveF&) {
            dt *= 0.5;
        } catch (const DegenerateJet&) {
            dt *= 0.5;
        }
        if (dt < cfg.dt_min)
            throw ContinuationStalled("continuation stalled at t = " + std::to_string(t), t, current.rho);
    }

    SolutionField out{current.rho, current.residual_sup, trace.back().bounds, trace};
    return out;
}

}  // namespace hq
