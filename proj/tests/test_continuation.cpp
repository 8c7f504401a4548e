#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "hq/continuation.hpp"
#include "hq/errors.hpp"
#include "hq/oracles.hpp"

using namespace hq;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

double sup(const ScalarField& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

double radius_of(std::span<const double> X) {
    double r2 = 0.0;
    for (double x : X) r2 += x * x;
    return std::sqrt(r2);
}

// f = U·ρ*^{-m}·(|X|/ρ*)^{-power}: the sphere of radius ρ* solves it.
Prescription radial_power(const QuotientParams& p, double rho_star, int power) {
    const double u = p.unit_sphere_value() * std::pow(rho_star, -p.order());
    return Prescription([=](std::span<const double> X, std::span<const double>) {
        return u * std::pow(radius_of(X) / rho_star, -power);
    });
}

ScalarField zonal(const AxisymGrid& g, auto&& fn) {
    ScalarField f(static_cast<std::size_t>(g.node_count));
    for (int m = 0; m < g.node_count; ++m) f[static_cast<std::size_t>(m)] = fn(g.theta[static_cast<std::size_t>(m)]);
    return f;
}

Eigen::VectorXd as_vector(const ScalarField& f) {
    return Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
}

const QuotientParams k2l0 = QuotientParams::make(3, 2, 0);

}  // namespace

TEST_CASE("residual on spheres") {
    const auto grid = build_axisym_grid(33);
    const auto target = make_homotopy(radial_power(k2l0, 1.0, 3), k2l0, 0.5, 2.0);
    CHECK(sup(residual_vector(ScalarField(33, 1.0), grid, target, 0.0)) <= 1e-14);
    for (double r : {0.7, 0.95, 1.05, 1.6}) {
        const auto res = residual_vector(ScalarField(33, r), grid, target, 0.0);
        // log(r^{-m}) − log(r^{-m} + ε(r^{-m} − 1))
        const double m = 2.0, rm = std::pow(r, -m);
        const double expect = std::log(rm) - std::log(rm + target.epsilon * (rm - 1.0));
        for (double x : res) {
            CHECK(x == Approx(expect).epsilon(1e-12));
            CHECK((x > 0) == (r > 1));
        }
    }
}

TEST_CASE("residual reports the offending node") {
    const auto grid = build_axisym_grid(65);
    const auto target = make_homotopy(radial_power(k2l0, 1.0, 3), k2l0, 0.5, 2.0);
    const auto wild = zonal(grid, [](double t) { return 1 + 0.3 * std::cos(12 * t); });
    try {
        (void)residual_vector(wild, grid, target, 0.0);
        FAIL("expected ConeViolation");
    } catch (const ConeViolation& e) {
        REQUIRE(e.node().has_value());
        CHECK(*e.node() < 65u);
    }
    CHECK_THROWS_AS((void)residual_vector(ScalarField(65, -1.0), grid, target, 0.0), DegenerateJet);
}

TEST_CASE("coloring separates overlapping stencils") {
    for (const Grid& grid : {Grid(build_axisym_grid(33)), Grid(build_s2_grid(16, 32))}) {
        const auto groups = jacobian_coloring(grid);
        std::set<int> seen;
        for (const auto& group : groups) {
            std::set<int> rows;
            for (int col : group) {
                CHECK(seen.insert(col).second);
                // Rows touched by column col are the nodes whose stencil contains col.
                for (int r : stencil(grid, col)) CHECK(rows.insert(r).second);
            }
        }
        CHECK(static_cast<int>(seen.size()) == node_count(grid));
        CHECK(groups.size() <= 25u);
    }
}

TEST_CASE("Jacobian against exact and finite-difference derivatives") {
    const auto grid = build_axisym_grid(65);
    const auto base = radial_power(k2l0, 1.0, 3);
    const auto target = make_homotopy(base, k2l0, 0.5, 2.0);
    SolverConfig cfg;

    SUBCASE("constant mode") {
        // d/dr of the sphere residual at r = 1 is mε.
        const auto jac = assemble_jacobian(ScalarField(65, 1.0), grid, target, 0.0, cfg);
        const Eigen::VectorXd row_sums = jac * Eigen::VectorXd::Ones(65);
        for (Eigen::Index i = 0; i < 65; ++i) CHECK(row_sums(i) == Approx(2.0 * target.epsilon).epsilon(1e-6));
    }

    SUBCASE("directional derivative") {
        const auto rho = zonal(grid, [](double t) { return 1 + 0.05 * std::cos(t) + 0.03 * std::cos(2 * t); });
        const auto dir = zonal(grid, [](double t) { return std::sin(3 * t) + 0.5 * std::cos(t); });
        for (double t : {0.0, 0.6, 1.0}) {
            const auto jac = assemble_jacobian(rho, grid, target, t, cfg);
            const Eigen::VectorXd jv = jac * as_vector(dir);
            const double h = 1e-5;
            ScalarField up = rho, dn = rho;
            for (std::size_t i = 0; i < rho.size(); ++i) {
                up[i] += h * dir[i];
                dn[i] -= h * dir[i];
            }
            const Eigen::VectorXd fd =
                (as_vector(residual_vector(up, grid, target, t)) - as_vector(residual_vector(dn, grid, target, t))) / (2 * h);
            CHECK((jv - fd).cwiseAbs().maxCoeff() <= 1e-5 * fd.cwiseAbs().maxCoeff());
        }
    }
}

TEST_CASE("S2 and axisymmetric Jacobians agree on zonal data") {
    const auto p = QuotientParams::make(2, 2, 0);
    const int nt = 32;
    const auto s2 = build_s2_grid(nt, 2 * nt);
    const auto ax = build_axisym_grid(2 * nt + 1);
    const auto target = make_homotopy(radial_power(p, 1.0, 3), p, 0.5, 2.0);
    auto rho_fn = [](double t) { return 1 + 0.05 * std::cos(t); };
    auto dir_fn = [](double t) { return std::cos(2 * t); };
    ScalarField rs(static_cast<std::size_t>(s2.node_count())), ds(rs.size());
    for (int i = 0; i < nt; ++i)
        for (int j = 0; j < 2 * nt; ++j) {
            rs[static_cast<std::size_t>(s2.index(i, j))] = rho_fn(s2.theta[static_cast<std::size_t>(i)]);
            ds[static_cast<std::size_t>(s2.index(i, j))] = dir_fn(s2.theta[static_cast<std::size_t>(i)]);
        }
    const SolverConfig cfg;
    const Eigen::VectorXd js = assemble_jacobian(rs, s2, target, 0.5, cfg) * as_vector(ds);
    const Eigen::VectorXd ja = assemble_jacobian(zonal(ax, rho_fn), ax, target, 0.5, cfg) * as_vector(zonal(ax, dir_fn));
    const auto res_s = residual_vector(rs, s2, target, 0.5);
    const auto res_a = residual_vector(zonal(ax, rho_fn), ax, target, 0.5);
    double jerr = 0.0, rerr = 0.0;
    for (int i = 0; i < nt; ++i) {
        const int m = 2 * i + 1;
        for (int j = 0; j < 2 * nt; j += 7) {
            const auto node = static_cast<std::size_t>(s2.index(i, j));
            jerr = std::max(jerr, std::abs(js(static_cast<Eigen::Index>(node)) - ja(m)));
            rerr = std::max(rerr, std::abs(res_s[node] - res_a[static_cast<std::size_t>(m)]));
        }
    }
    CHECK(jerr <= 0.01 * ja.cwiseAbs().maxCoeff());
    CHECK(rerr <= 1e-3);
}

TEST_CASE("Newton corrector") {
    const auto grid = build_axisym_grid(129);
    const auto target = make_homotopy(radial_power(k2l0, 1.0, 3), k2l0, 0.5, 2.0);
    SolverConfig cfg;

    SUBCASE("already converged") {
        const auto r = newton_solve(ScalarField(129, 1.0), 0.0, target, grid, cfg);
        CHECK(r.iterations == 0);
        CHECK(r.residual_sup <= 1e-14);
    }
    SUBCASE("perturbed start") {
        const auto rho0 = zonal(grid, [](double t) { return 1 + 0.01 * std::cos(t); });
        const auto r = newton_solve(rho0, 0.0, target, grid, cfg);
        CHECK(r.iterations <= 10);
        for (double x : r.rho) CHECK(std::abs(x - 1.0) <= 1e-8);
    }
    SUBCASE("inadmissible start") {
        const auto wild = zonal(grid, [](double t) { return 1 + 0.3 * std::cos(12 * t); });
        CHECK_THROWS_AS((void)newton_solve(wild, 0.0, target, grid, cfg), ConeViolation);
    }
    SUBCASE("iteration budget") {
        cfg.max_newton = 1;
        const auto rho0 = zonal(grid, [](double t) { return 1 + 0.05 * std::cos(t); });
        CHECK_THROWS_AS((void)newton_solve(rho0, 0.0, target, grid, cfg), NoConvergence);
    }
}

TEST_CASE("continuation recovers spheres") {
    const auto grid = build_axisym_grid(65);
    SUBCASE("t-independent target") {
        // f equals the t = 0 member, so ρ ≡ 1 for every t.
        const double eps = select_epsilon(k2l0, 0.5, 2.0).epsilon;
        const Prescription f0([=](std::span<const double> X, std::span<const double>) {
            return k2l0.unit_sphere_value() * radial_bracket(k2l0, eps, radius_of(X));
        });
        const auto sol = continuation_solve(make_homotopy(f0, k2l0, 0.5, 2.0), grid, SolverConfig{});
        for (double x : sol.rho) CHECK(std::abs(x - 1.0) <= 1e-8);
        CHECK(sol.trace.front().t == 0.0);
        CHECK(sol.trace.back().t == 1.0);
    }
    SUBCASE("sphere of radius 1.3") {
        for (auto [n, k, l] : {std::tuple{3, 2, 0}, {4, 3, 1}, {5, 3, 0}}) {
            const auto p = QuotientParams::make(n, k, l);
            SolveTrace trace;
            const auto sol = continuation_solve(make_homotopy(radial_power(p, 1.3, p.order() + 1), p, 0.5, 2.0), grid,
                                                SolverConfig{}, &trace);
            for (double x : sol.rho) CHECK(std::abs(x - 1.3) <= 1e-8);
            CHECK(sol.residual_sup <= 1e-10);
            CHECK(trace.size() == sol.trace.size());
            for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i].t > trace[i - 1].t);
        }
    }
    SUBCASE("warm start") {
        const auto p = k2l0;
        const auto target = make_homotopy(radial_power(p, 1.3, 3), p, 0.5, 2.0);
        const auto warm = zonal(grid, [](double t) { return 1 + 0.01 * std::cos(t); });
        const auto sol = continuation_solve(target, grid, SolverConfig{}, nullptr, &warm);
        for (double x : sol.rho) CHECK(std::abs(x - 1.3) <= 1e-8);
    }
}

TEST_CASE("manufactured nonspherical solution converges at second order") {
    // Surface of revolution ρ_e(θ); f is its Hessian quotient along the
    // radial line, computed from the profile curvatures, and weighted so that
    // ρ^m f decreases in ρ.
    const auto p = k2l0;
    const double a = 0.08, b = 0.04;
    auto re = [=](double t) { return 1 + a * std::cos(t) + b * std::cos(2 * t); };
    auto re1 = [=](double t) { return -a * std::sin(t) - 2 * b * std::sin(2 * t); };
    auto re2 = [=](double t) { return -a * std::cos(t) - 4 * b * std::cos(2 * t); };
    const Prescription f([=](std::span<const double> X, std::span<const double>) {
        const double r = radius_of(X);
        const double theta = std::acos(std::clamp(X[0] / r, -1.0, 1.0));
        const auto kappa = oracle::revolution_curvatures(theta, re(theta), re1(theta), re2(theta), p.n);
        double H = 0.0;
        for (double k : kappa) H += k;
        std::vector<double> eta;
        for (double k : kappa) eta.push_back(H - k);
        const double q = oracle::sigma_subsets(eta, p.k) / oracle::sigma_subsets(eta, p.l);
        return q * std::pow(re(theta) / r, p.order() + 1);
    });
    const auto target = make_homotopy(f, p, 0.5, 2.0);
    double prev = 0.0;
    for (int N : {33, 65, 129}) {
        const auto grid = build_axisym_grid(N);
        const auto sol = continuation_solve(target, grid, SolverConfig{});
        double err = 0.0;
        for (int m = 0; m < N; ++m)
            err = std::max(err, std::abs(sol.rho[static_cast<std::size_t>(m)] - re(grid.theta[static_cast<std::size_t>(m)])));
        CHECK(err <= 0.5 * grid.spacing * grid.spacing);
        if (prev > 0.0) CHECK(prev / err >= 3.5);
        prev = err;
    }
}

TEST_CASE("literal scale-invariant target is degenerate at t = 1") {
    // f = U|X|^{-m} makes every dilation of a solution a solution.
    const auto grid = build_axisym_grid(65);
    const auto target = make_homotopy(radial_power(k2l0, 1.0, 2), k2l0, 0.5, 2.0);
    for (double r : {0.8, 1.0, 1.3}) CHECK(sup(residual_vector(ScalarField(65, r), grid, target, 1.0)) <= 1e-13);
    const auto rho = zonal(grid, [](double t) { return 1 + 0.05 * std::cos(t); });
    auto scaled = rho;
    for (double& x : scaled) x *= 1.4;
    const auto r0 = residual_vector(rho, grid, target, 1.0);
    const auto r1 = residual_vector(scaled, grid, target, 1.0);
    for (std::size_t i = 0; i < r0.size(); ++i) CHECK(r1[i] == Approx(r0[i]).epsilon(1e-10).scale(1.0));
    // The dilation direction is in the kernel of the linearization.
    const Eigen::VectorXd jr = assemble_jacobian(rho, grid, target, 1.0, SolverConfig{}) * as_vector(rho);
    CHECK(jr.cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("solver settings") {
    CHECK(SolverConfig::defaults_for(build_s2_grid(16, 32)).newton_tol == 1e-8);
    CHECK(SolverConfig::defaults_for(build_axisym_grid(17)).newton_tol == 1e-10);
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.dt_min = 0.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SolverConfig{};
    cfg.backtrack = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("stalled continuation keeps the last accepted state") {
    const auto grid = build_axisym_grid(33);
    const auto target = make_homotopy(radial_power(k2l0, 1.3, 3), k2l0, 0.5, 2.0);
    SolverConfig cfg;
    cfg.max_newton = 1;
    cfg.dt_init = 0.5;
    cfg.dt_min = 0.1;
    SolveTrace trace;
    try {
        (void)continuation_solve(target, grid, cfg, &trace);
        FAIL("expected ContinuationStalled");
    } catch (const ContinuationStalled& e) {
        CHECK(e.last_rho().size() == 33u);
        CHECK(e.last_t() == trace.back().t);
        CHECK(!trace.empty());
    }
}
