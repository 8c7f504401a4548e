#include "hq/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "hq/errors.hpp"
#include "hq/oracles.hpp"

namespace hq {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

Eigen::MatrixXd random_rotation(int dim, std::mt19937_64& gen) {
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = gauss(gen);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    return qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
}

double jet_error(const PointJet& a, const PointJet& b) {
    return std::max((a.grad - b.grad).cwiseAbs().maxCoeff(), (a.hess - b.hess).cwiseAbs().maxCoeff());
}

}  // namespace

SuiteResult recurrence_suite(const SigmaFn& sigma) {
    SuiteResult r{"recurrence-consistency", true, {}};
    double worst = 0.0;
    for (int n = 2; n <= 6; ++n) {
        for (const Spectrum& lam : sample_gamma_k(n, 2, 1000 + static_cast<std::uint64_t>(n), 50)) {
            const std::vector<double> all(lam.values().begin(), lam.values().end());
            const auto full = sigma(all);
            if (static_cast<int>(full.size()) != n + 1) {
                r.pass = false;
                r.detail = "sigma returned the wrong length";
                return r;
            }
            for (int i = 0; i < n; ++i) {
                const auto reduced_vals = oracle::drop(all, {i});
                const auto reduced = sigma(reduced_vals);
                for (int j = 0; j <= n; ++j) {
                    const double lower = j >= 1 ? reduced[static_cast<std::size_t>(j - 1)] : 0.0;
                    const double upper = j <= n - 1 ? reduced[static_cast<std::size_t>(j)] : 0.0;
                    const double want = upper + all[static_cast<std::size_t>(i)] * lower;
                    worst = std::max(worst, rel_err(full[static_cast<std::size_t>(j)], want));
                }
            }
            // σ_1 is the trace whatever convention the caller uses for σ_0.
            double trace = 0.0;
            for (double x : all) trace += x;
            worst = std::max(worst, rel_err(full[1], trace));
        }
    }
    r.pass = worst <= 1e-12;
    r.detail = fmt("worst relative defect %.3g", worst);
    return r;
}

SuiteResult symfun_oracle_suite() {
    SuiteResult r{"symfun-oracles", true, {}};
    double sigma_err = 0.0, grad_err = 0.0, offdiag_err = 0.0;
    bool elliptic = true;
    for (const auto& [n, k, l] : {std::tuple{3, 2, 0}, std::tuple{4, 3, 1}, std::tuple{5, 4, 2}}) {
        const auto p = QuotientParams::make(n, k, l);
        for (const Spectrum& lam : sample_gamma_k(p, 77, 40)) {
            const std::vector<double> v(lam.values().begin(), lam.values().end());
            for (int j = 0; j <= n; ++j)
                sigma_err = std::max(sigma_err, rel_err(elementary_symmetric(lam, j), oracle::sigma_subsets(v, j)));
            const auto g = grad_G(lam, p);
            for (int i = 0; i < n; ++i) {
                const double fd = oracle::quotient_partial(v, k, l, i);
                grad_err = std::max(grad_err, std::abs(g[static_cast<std::size_t>(i)] - fd) / std::max(std::abs(fd), 1e-8));
                elliptic = elliptic && g[static_cast<std::size_t>(i)] > 0.0;
            }
            const double want = oracle::offdiag_perturbation(v, k, l, 1);
            if (std::abs(v[0] - v[1]) > 1e-2 * lam.scale())
                offdiag_err = std::max(offdiag_err, std::abs(offdiag_second_G(lam, p, 1) - want) /
                                                        std::max(std::abs(want), 1e-8));
        }
    }
    r.pass = sigma_err <= 1e-12 && grad_err <= 1e-6 && offdiag_err <= 1e-5 && elliptic;
    char buf[200];
    std::snprintf(buf, sizeof buf, "sigma %.2g, grad %.2g, offdiag %.2g, elliptic %s", sigma_err, grad_err,
                  offdiag_err, elliptic ? "yes" : "no");
    r.detail = buf;
    return r;
}

SuiteResult geometry_covariance_suite() {
    SuiteResult r{"geometry-covariance", true, {}};
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> small(-0.2, 0.2);
    double frame_err = 0.0, ambient_err = 0.0, oracle_err = 0.0;
    for (int n = 2; n <= 5; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            Eigen::VectorXd grad(n);
            Eigen::MatrixXd hess(n, n);
            for (int i = 0; i < n; ++i) grad(i) = small(gen);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j <= i; ++j) hess(i, j) = hess(j, i) = small(gen);
            const PointJet jet = PointJet::at_north(1.0 + small(gen), grad, hess);
            const PointGeometry g0 = assemble_point_geometry(jet, n);

            const Eigen::MatrixXd R = random_rotation(n, gen);
            PointJet turned = jet;
            turned.grad = R.transpose() * jet.grad;
            turned.hess = R.transpose() * jet.hess * R;
            turned.frame = jet.frame * R;
            const PointGeometry g1 = assemble_point_geometry(turned, n);
            frame_err = std::max({frame_err, (g1.kappa - g0.kappa).cwiseAbs().maxCoeff(),
                                  (g1.nu - g0.nu).cwiseAbs().maxCoeff(), std::abs(g1.u - g0.u)});

            const Eigen::MatrixXd A = random_rotation(n + 1, gen);
            PointJet moved = jet;
            moved.point = A * jet.point;
            moved.frame = A * jet.frame;
            const PointGeometry g2 = assemble_point_geometry(moved, n);
            ambient_err = std::max({ambient_err, (g2.kappa - g0.kappa).cwiseAbs().maxCoeff(),
                                    (g2.nu - A * g0.nu).cwiseAbs().maxCoeff()});
        }
    }
    // Embedded-surface curvatures for an analytic field on S².
    for (double theta : {0.3, 1.1, 2.0, 2.9})
        for (double phi : {0.0, 1.7, 4.0}) {
            const double a = 0.1;
            const double st = std::sin(theta), ct = std::cos(theta), sp = std::sin(phi), cp = std::cos(phi);
            const oracle::Partials2 d{1.0 + a * st * cp, a * ct * cp, -a * st * sp, -a * st * cp, -a * ct * sp,
                                      -a * st * cp};
            const PointGeometry g = assemble_point_geometry(s2_point_jet(theta, phi, {d.rho, d.t, d.p, d.tt, d.tp, d.pp}), 2);
            const auto want = oracle::embedding_curvatures(theta, phi, d);
            for (int i = 0; i < 2; ++i) oracle_err = std::max(oracle_err, std::abs(g.kappa(i) - want[static_cast<std::size_t>(i)]));
        }
    r.pass = frame_err <= 1e-12 && ambient_err <= 1e-12 && oracle_err <= 1e-12;
    char buf[200];
    std::snprintf(buf, sizeof buf, "frame %.2g, ambient %.2g, embedding %.2g", frame_err, ambient_err, oracle_err);
    r.detail = buf;
    return r;
}

SuiteResult jet_convergence_suite() {
    SuiteResult r{"jet-convergence", true, {}};
    std::string detail = "axisym ratios";
    double prev = 0.0;
    bool ok = true;
    for (int nodes : {65, 129, 257}) {
        const AxisymGrid grid = build_axisym_grid(nodes);
        ScalarField rho(static_cast<std::size_t>(nodes));
        for (int m = 0; m < nodes; ++m) rho[static_cast<std::size_t>(m)] = 1.0 + 0.05 * std::cos(2.0 * grid.theta[static_cast<std::size_t>(m)]);
        const auto jets = axisym_jets(rho, grid, 3);
        double err = 0.0;
        for (int m = 0; m < nodes; ++m) {
            const double th = grid.theta[static_cast<std::size_t>(m)];
            const PointJet exact = axisym_point_jet(th, 1.0 + 0.05 * std::cos(2 * th), -0.1 * std::sin(2 * th),
                                                    -0.2 * std::cos(2 * th), 3);
            err = std::max(err, jet_error(jets[static_cast<std::size_t>(m)], exact));
        }
        if (prev > 0.0) {
            ok = ok && prev / err >= 3.5;
            detail += fmt(" %.2f", prev / err);
        }
        prev = err;
    }
    detail += ", s2 L2 ratios";
    prev = 0.0;
    for (int nt : {16, 32, 64}) {
        const SphereGrid2D grid = build_s2_grid(nt, 2 * nt);
        ScalarField rho(static_cast<std::size_t>(grid.node_count()));
        for (int i = 0; i < nt; ++i)
            for (int j = 0; j < 2 * nt; ++j)
                rho[static_cast<std::size_t>(grid.index(i, j))] =
                    1.0 + 0.05 * std::sin(grid.theta[static_cast<std::size_t>(i)]) * std::cos(grid.phi[static_cast<std::size_t>(j)]);
        const auto jets = s2_jets(rho, grid);
        ScalarField err(rho.size());
        for (int i = 0; i < nt; ++i)
            for (int j = 0; j < 2 * nt; ++j) {
                const double th = grid.theta[static_cast<std::size_t>(i)], ph = grid.phi[static_cast<std::size_t>(j)];
                const double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
                const PointJet exact = s2_point_jet(
                    th, ph, {1.0 + 0.05 * st * cp, 0.05 * ct * cp, -0.05 * st * sp, -0.05 * st * cp, -0.05 * ct * sp, -0.05 * st * cp});
                err[static_cast<std::size_t>(grid.index(i, j))] = jet_error(jets[static_cast<std::size_t>(grid.index(i, j))], exact);
            }
        const double l2 = field_norms(err, grid).l2;
        if (prev > 0.0) {
            ok = ok && prev / l2 >= 3.5;
            detail += fmt(" %.2f", prev / l2);
        }
        prev = l2;
    }
    r.pass = ok;
    r.detail = detail;
    return r;
}

SuiteResult fixed_point_suite(const RunConfig* cfg) {
    SuiteResult r{"fixed-point-solve", true, {}};
    try {
        const QuotientParams p = cfg ? cfg->params() : QuotientParams::make(3, 2, 0);
        const Grid grid = cfg ? cfg->make_grid() : Grid(build_axisym_grid(129));
        const SolverConfig solver = SolverConfig::defaults_for(grid);
        const HomotopyTarget target =
            make_homotopy(Prescription([](auto, auto) { return 1.0; }), p, 0.5, 2.0);
        ScalarField guess(static_cast<std::size_t>(node_count(grid)));
        for (int i = 0; i < node_count(grid); ++i)
            guess[static_cast<std::size_t>(i)] = 1.0 + 0.01 * node_direction(grid, i, p.n)(0);
        const NewtonResult res = newton_solve(guess, 0.0, target, grid, solver);
        double err = 0.0;
        for (double x : res.rho) err = std::max(err, std::abs(x - 1.0));
        r.pass = err <= 1e-8 && res.iterations <= 10;
        r.detail = fmt("sup |rho - 1| = %.2g after %.0f iterations", err, res.iterations);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = e.what();
    }
    return r;
}

std::vector<SuiteResult> run_selftest_suites(const RunConfig* cfg, const SigmaFn& sigma) {
    std::vector<SuiteResult> out;
    out.push_back(symfun_oracle_suite());
    out.push_back(recurrence_suite(sigma));
    out.push_back(geometry_covariance_suite());
    out.push_back(jet_convergence_suite());
    out.push_back(fixed_point_suite(cfg));
    return out;
}

int run_selftest(const RunConfig* cfg, std::ostream& log) {
    const auto start = std::chrono::steady_clock::now();
    const auto results = run_selftest_suites(cfg, [](std::span<const double> l) { return elementary_symmetric_all(l); });
    bool all = true;
    for (const auto& s : results) {
        log << (s.pass ? "PASS " : "FAIL ") << s.name << ": " << s.detail << "\n";
        all = all && s.pass;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log << (all ? "selftest passed" : "selftest FAILED") << fmt(" in %.1f s", secs) << "\n";
    return all ? 0 : 1;
}

}  // namespace hq
