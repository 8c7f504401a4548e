#include "hq/run.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "hq/errors.hpp"

namespace hq {

namespace fs = std::filesystem;

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void finish(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

const char* verdict(bool ok) { return ok ? "pass" : "fail"; }

void write_check(std::ostream& out, const char* name, const AssumptionCheck& c) {
    out << name << " = " << verdict(c.pass) << "\n"
        << name << "_worst_margin = " << num(c.worst_margin) << "\n";
}

void write_bounds(std::ostream& out, const BoundsSnapshot& b) {
    out << "rho_min = " << num(b.rho_min) << "\n"
        << "rho_max = " << num(b.rho_max) << "\n"
        << "u_min = " << num(b.u_min) << "\n"
        << "grad_sup = " << num(b.grad_sup) << "\n"
        << "kappa_sup = " << num(b.kappa_sup) << "\n"
        << "cone_margin_min = " << num(b.cone_margin_min) << "\n"
        << "eta_min = " << num(b.eta_min) << "\n";
}

struct SolveSummary {
    std::string status;
    std::string message;
    const AssumptionReport* report = nullptr;
    bool overridden = false;
    const SolveTrace* trace = nullptr;
};

void write_summary(const fs::path& path, const RunConfig& cfg, const HomotopyTarget& target,
                   const SolveSummary& s) {
    auto out = open_out(path);
    out << "status = " << s.status << "\n";
    if (!s.message.empty()) out << "message = " << s.message << "\n";
    out << "n = " << cfg.problem.n << "\nk = " << cfg.problem.k << "\nl = " << cfg.problem.l << "\n"
        << "f = " << cfg.problem.f << "\n"
        << "r1 = " << num(target.r1) << "\nr2 = " << num(target.r2) << "\n"
        << "epsilon = " << num(target.epsilon) << "\n"
        << "nodes = " << node_count(cfg.make_grid()) << "\n";
    if (s.report) {
        out << "validation = " << (s.report->all_pass() ? "pass" : s.overridden ? "overridden" : "fail") << "\n";
        write_check(out, "assumption_upper", s.report->upper);
        write_check(out, "assumption_lower", s.report->lower);
        write_check(out, "assumption_monotone", s.report->monotone);
    }
    if (s.trace && !s.trace->empty()) {
        const TraceEntry& last = s.trace->back();
        int total = 0;
        for (const auto& e : *s.trace) total += e.newton_iterations;
        out << "final_t = " << num(last.t) << "\n"
            << "residual_sup = " << num(last.residual_sup) << "\n"
            << "continuation_steps = " << s.trace->size() - 1 << "\n"
            << "newton_iterations = " << total << "\n";
        write_bounds(out, last.bounds);
        const C0Check c0 = check_c0(last.bounds, target.r1, target.r2);
        out << "c0_check = " << verdict(c0.pass) << "\n"
            << "c0_lower_margin = " << num(c0.lower_margin) << "\n"
            << "c0_upper_margin = " << num(c0.upper_margin) << "\n"
            << "positivity_check = " << verdict(check_positivity(last.bounds)) << "\n";
    }
    finish(out, path);
}

}  // namespace

fs::path output_directory(const RunConfig& cfg) {
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return fs::path(env);
    return fs::path(cfg.output.directory);
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const IoError*>(&e)) return kExitIo;
    if (dynamic_cast<const ConeViolation*>(&e)) return kExitCone;
    if (dynamic_cast<const ValidationFailed*>(&e) || dynamic_cast<const MonitorViolation*>(&e) ||
        dynamic_cast<const NonpositiveF*>(&e))
        return kExitValidation;
    if (dynamic_cast<const ContinuationStalled*>(&e) || dynamic_cast<const NoConvergence*>(&e) ||
        dynamic_cast<const DegenerateJet*>(&e))
        return kExitStalled;
    if (dynamic_cast<const Error*>(&e) || dynamic_cast<const std::invalid_argument*>(&e) ||
        dynamic_cast<const std::out_of_range*>(&e))
        return kExitConfig;
    return 1;
}

void write_rho_csv(const fs::path& path, const ScalarField& rho, const Grid& grid) {
    if (static_cast<int>(rho.size()) != node_count(grid)) throw SizeMismatch("field does not match grid");
    auto out = open_out(path);
    if (const auto* axi = std::get_if<AxisymGrid>(&grid)) {
        out << "theta,rho\n";
        for (int m = 0; m < axi->node_count; ++m)
            out << num(axi->theta[static_cast<std::size_t>(m)]) << "," << num(rho[static_cast<std::size_t>(m)]) << "\n";
    } else {
        const auto& s2 = std::get<SphereGrid2D>(grid);
        out << "theta,phi,rho\n";
        for (int i = 0; i < s2.n_theta; ++i)
            for (int j = 0; j < s2.n_phi; ++j)
                out << num(s2.theta[static_cast<std::size_t>(i)]) << "," << num(s2.phi[static_cast<std::size_t>(j)])
                    << "," << num(rho[static_cast<std::size_t>(s2.index(i, j))]) << "\n";
    }
    finish(out, path);
}

ScalarField read_rho_csv(const fs::path& path, const Grid& grid) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    const bool axisym = std::holds_alternative<AxisymGrid>(grid);
    const std::size_t columns = axisym ? 2 : 3;
    std::string line;
    if (!std::getline(in, line)) throw IoError(path.string() + " is empty");
    ScalarField rho;
    std::vector<double> coords;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            char* end = nullptr;
            const double x = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) throw IoError("malformed number '" + cell + "' in " + path.string());
            row.push_back(x);
        }
        if (row.size() != columns) throw IoError("wrong column count in " + path.string());
        coords.insert(coords.end(), row.begin(), row.end() - 1);
        rho.push_back(row.back());
    }
    if (static_cast<int>(rho.size()) != node_count(grid))
        throw SizeMismatch(path.string() + " has " + std::to_string(rho.size()) + " nodes, grid has " +
                           std::to_string(node_count(grid)));
    for (std::size_t i = 0; i < rho.size(); ++i) {
        double theta, phi = 0.0, want_phi = 0.0, want_theta;
        if (axisym) {
            theta = coords[i];
            want_theta = std::get<AxisymGrid>(grid).theta[i];
        } else {
            const auto& s2 = std::get<SphereGrid2D>(grid);
            theta = coords[2 * i];
            phi = coords[2 * i + 1];
            want_theta = s2.theta[i / static_cast<std::size_t>(s2.n_phi)];
            want_phi = s2.phi[i % static_cast<std::size_t>(s2.n_phi)];
        }
        if (std::abs(theta - want_theta) > 1e-9 || std::abs(phi - want_phi) > 1e-9)
            throw SizeMismatch(path.string() + " node coordinates do not match the configured grid");
    }
    return rho;
}

void write_trace_csv(const fs::path& path, const SolveTrace& trace) {
    auto out = open_out(path);
    out << "t,newton_iters,residual_sup,rho_min,rho_max,u_min,grad_sup,kappa_sup,cone_margin_min\n";
    for (const auto& e : trace) {
        const auto& b = e.bounds;
        out << num(e.t) << "," << e.newton_iterations << "," << num(e.residual_sup) << "," << num(b.rho_min) << ","
            << num(b.rho_max) << "," << num(b.u_min) << "," << num(b.grad_sup) << "," << num(b.kappa_sup) << ","
            << num(b.cone_margin_min) << "\n";
    }
    finish(out, path);
}

void export_mesh_obj(const ScalarField& rho, const Grid& grid, int n, const fs::path& path) {
    if (static_cast<int>(rho.size()) != node_count(grid)) throw SizeMismatch("field does not match grid");
    // Rings of a latitude–longitude surface: ring r has `width` vertices,
    // closed by one vertex at each pole.
    int rings = 0, width = 0;
    std::vector<Eigen::Vector3d> verts;
    Eigen::Vector3d north, south;
    auto at = [](double r, double theta, double phi) {
        return Eigen::Vector3d(r * std::cos(theta), r * std::sin(theta) * std::cos(phi),
                               r * std::sin(theta) * std::sin(phi));
    };
    if (const auto* axi = std::get_if<AxisymGrid>(&grid)) {
        rings = axi->node_count - 2;
        width = kRevolveSamples;
        for (int m = 1; m <= rings; ++m)
            for (int j = 0; j < width; ++j)
                verts.push_back(at(rho[static_cast<std::size_t>(m)], axi->theta[static_cast<std::size_t>(m)],
                                   2.0 * std::numbers::pi * j / width));
        north = Eigen::Vector3d(rho.front(), 0.0, 0.0);
        south = Eigen::Vector3d(-rho.back(), 0.0, 0.0);
    } else {
        if (n != 2) throw UnsupportedDimension("S² mesh export needs n = 2");
        const auto& s2 = std::get<SphereGrid2D>(grid);
        rings = s2.n_theta;
        width = s2.n_phi;
        double top = 0.0, bottom = 0.0;
        for (int i = 0; i < rings; ++i)
            for (int j = 0; j < width; ++j) {
                const double r = rho[static_cast<std::size_t>(s2.index(i, j))];
                verts.push_back(at(r, s2.theta[static_cast<std::size_t>(i)], s2.phi[static_cast<std::size_t>(j)]));
            }
        for (int j = 0; j < width; ++j) {
            top += rho[static_cast<std::size_t>(s2.index(0, j))];
            bottom += rho[static_cast<std::size_t>(s2.index(rings - 1, j))];
        }
        north = Eigen::Vector3d(top / width, 0.0, 0.0);
        south = Eigen::Vector3d(-bottom / width, 0.0, 0.0);
    }

    auto out = open_out(path);
    for (const auto& v : verts) out << "v " << num(v.x()) << " " << num(v.y()) << " " << num(v.z()) << "\n";
    out << "v " << num(north.x()) << " " << num(north.y()) << " " << num(north.z()) << "\n";
    out << "v " << num(south.x()) << " " << num(south.y()) << " " << num(south.z()) << "\n";
    const int pn = rings * width + 1, ps = rings * width + 2;
    auto id = [width](int i, int j) { return i * width + (j % width) + 1; };
    // Counter-clockwise seen from outside: θ direction first, then φ.
    for (int j = 0; j < width; ++j) out << "f " << pn << " " << id(0, j) << " " << id(0, j + 1) << "\n";
    for (int i = 0; i + 1 < rings; ++i)
        for (int j = 0; j < width; ++j)
            out << "f " << id(i, j) << " " << id(i + 1, j) << " " << id(i + 1, j + 1) << " " << id(i, j + 1) << "\n";
    for (int j = 0; j < width; ++j)
        out << "f " << id(rings - 1, j) << " " << ps << " " << id(rings - 1, j + 1) << "\n";
    finish(out, path);
}

int run_validate(const RunConfig& cfg, std::ostream& log) {
    try {
        const HomotopyTarget target = cfg.make_target();
        const AssumptionReport rep =
            validate_assumptions(target.base, target.params, target.r1, target.r2, cfg.problem.validation_samples);
        auto line = [&](const char* name, const AssumptionCheck& c) {
            log << name << ": " << verdict(c.pass) << " (worst margin " << num(c.worst_margin) << ", tolerance "
                << num(c.tolerance) << ")\n";
        };
        line("upper bound at r2", rep.upper);
        line("lower bound at r1", rep.lower);
        line("radial monotonicity", rep.monotone);
        return rep.all_pass() ? kExitOk : kExitValidation;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int run_solve(const RunConfig& cfg, std::ostream& log) {
    try {
        const Grid grid = cfg.make_grid();
        const HomotopyTarget target = cfg.make_target();
        const fs::path dir = output_directory(cfg);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

        const AssumptionReport rep =
            validate_assumptions(target.base, target.params, target.r1, target.r2, cfg.problem.validation_samples);
        SolveSummary summary;
        summary.report = &rep;
        summary.overridden = cfg.problem.override_validation;
        if (!rep.all_pass() && !cfg.problem.override_validation) {
            summary.status = "validation_failed";
            write_summary(dir / "summary.txt", cfg, target, summary);
            log << "error: prescription fails the structural assumptions (set override_validation to solve anyway)\n";
            run_validate(cfg, log);
            return kExitValidation;
        }

        SolverConfig solver = cfg.solver;
        solver.enforce_c0 = rep.all_pass();
        SolveTrace trace;
        summary.trace = &trace;
        try {
            const SolutionField sol = continuation_solve(target, grid, solver, &trace);
            summary.status = "ok";
            if (cfg.output.csv) {
                write_rho_csv(dir / "rho.csv", sol.rho, grid);
                write_trace_csv(dir / "trace.csv", trace);
            }
            if (cfg.output.obj) export_mesh_obj(sol.rho, grid, cfg.problem.n, dir / "mesh.obj");
            write_summary(dir / "summary.txt", cfg, target, summary);
            log << "solved: residual " << num(sol.residual_sup) << ", rho in [" << num(sol.bounds.rho_min) << ", "
                << num(sol.bounds.rho_max) << "], output in " << dir.string() << "\n";
            return kExitOk;
        } catch (const ContinuationStalled& e) {
            summary.status = "stalled";
            summary.message = e.what();
            write_rho_csv(dir / "rho.csv", e.last_rho(), grid);
            write_trace_csv(dir / "trace.csv", trace);
            write_summary(dir / "summary.txt", cfg, target, summary);
            log << "error: " << e.what() << "\n";
            return kExitStalled;
        } catch (const Error& e) {
            summary.status = "failed";
            summary.message = e.what();
            write_trace_csv(dir / "trace.csv", trace);
            write_summary(dir / "summary.txt", cfg, target, summary);
            log << "error: " << e.what() << "\n";
            return exit_code_for(e);
        }
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int run_export(const RunConfig& cfg, const fs::path& rho_csv, std::ostream& log) {
    try {
        const Grid grid = cfg.make_grid();
        const ScalarField rho = read_rho_csv(rho_csv, grid);
        const fs::path dir = output_directory(cfg);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
        export_mesh_obj(rho, grid, cfg.problem.n, dir / "mesh.obj");
        log << "wrote " << (dir / "mesh.obj").string() << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int run_geometry(const RunConfig& cfg, const fs::path& rho_csv, std::ostream& log) {
    try {
        const Grid grid = cfg.make_grid();
        const ScalarField rho = read_rho_csv(rho_csv, grid);
        const BoundsSnapshot b = snapshot_bounds(rho, grid, cfg.params());
        write_bounds(log, b);
        const C0Check c0 = check_c0(b, cfg.problem.r1, cfg.problem.r2);
        log << "c0_check = " << verdict(c0.pass) << "\n"
            << "positivity_check = " << verdict(check_positivity(b)) << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace hq
