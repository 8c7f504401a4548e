#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hq/errors.hpp"
#include "hq/oracles.hpp"
#include "hq/radial_geometry.hpp"
#include "hq/sphere_grid.hpp"

using namespace hq;
using doctest::Approx;

namespace {

PointJet random_jet(int n, std::mt19937_64& gen, double amp = 0.3) {
    std::uniform_real_distribution<double> u(-amp, amp);
    Eigen::VectorXd g(n);
    Eigen::MatrixXd h(n, n);
    for (int i = 0; i < n; ++i) g(i) = u(gen);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) h(i, j) = h(j, i) = u(gen);
    return PointJet::at_north(1.0 + u(gen), g, h);
}

Eigen::MatrixXd rotation(int dim, std::mt19937_64& gen) {
    std::normal_distribution<double> z;
    Eigen::MatrixXd a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = z(gen);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    return qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
}

}  // namespace

TEST_CASE("constant jet is a round sphere") {
    for (double r : {0.5, 1.0, 2.0}) {
        const auto g = assemble_point_geometry(PointJet::at_north(r, Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Zero(3, 3)), 3);
        CHECK(g.v == 1.0);
        CHECK(g.u == Approx(r));
        for (int i = 0; i < 3; ++i) {
            CHECK(g.kappa(i) == Approx(1.0 / r));
            CHECK(g.eta_spectrum[i] == Approx(2.0 / r));
        }
        CHECK(g.H == Approx(3.0 / r));
    }
}

TEST_CASE("support function with a tilted jet") {
    Eigen::VectorXd grad(3);
    grad << 1.0, 0.0, 0.0;
    const auto g = assemble_point_geometry(PointJet::at_north(1.0, grad, Eigen::MatrixXd::Zero(3, 3)), 3);
    CHECK(g.u == Approx(1.0 / std::sqrt(2.0)));
    CHECK(g.u == Approx(g.position.dot(g.nu)));
}

TEST_CASE("sphere_closed_form") {
    const auto s = sphere_closed_form(1.0, 3);
    for (int i = 0; i < 3; ++i) CHECK(s.eta_spectrum[i] == Approx(2.0));
    const auto s2 = sphere_closed_form(2.0, 4);
    const auto p = QuotientParams::make(4, 3, 1);
    CHECK(elementary_symmetric(s2.eta_spectrum, 3) / elementary_symmetric(s2.eta_spectrum, 1) == Approx(2.25));
    CHECK(p.binomial_ratio() * std::pow(3.0 / 2.0, 2) == Approx(2.25));

    for (int n = 2; n <= 5; ++n)
        for (double r : {0.5, 1.0, 2.0}) {
            const auto a = sphere_closed_form(r, n);
            const auto b = assemble_point_geometry(PointJet::at_north(r, Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)), n);
            CHECK((a.kappa - b.kappa).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((a.nu - b.nu).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((a.shape - b.shape).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK(std::abs(a.u - b.u) <= 1e-12);
            for (int i = 0; i < n; ++i) CHECK(std::abs(a.eta_spectrum[i] - b.eta_spectrum[i]) <= 1e-12);
        }
    CHECK_THROWS_AS((void)sphere_closed_form(0.0, 3), DegenerateJet);
}

TEST_CASE("residual_at_point") {
    for (int n = 3; n <= 5; ++n)
        for (double r : {0.5, 1.0, 2.0}) {
            const auto p = QuotientParams::make(n, 3, 1);
            const double f = p.binomial_ratio() * std::pow((n - 1) / r, p.order());
            CHECK(std::abs(residual_at_point(sphere_closed_form(r, n), p, f)) <= 1e-12);
        }
    const auto p = QuotientParams::make(3, 2, 0);
    const auto s = sphere_closed_form(1.0, 3);
    CHECK(residual_at_point(s, p, 6.0) == Approx(std::log(2.0)));
    CHECK(elementary_symmetric(s.eta_spectrum, 2) == Approx(12.0));
    CHECK_THROWS_AS((void)residual_at_point(s, p, 0.0), NonpositiveF);
    CHECK_THROWS_AS((void)residual_at_point(s, p, -1.0), NonpositiveF);

    std::mt19937_64 gen(3);
    const auto g = assemble_point_geometry(random_jet(3, gen, 0.1), 3);
    const double q = elementary_symmetric(g.eta_spectrum, 2);
    CHECK(std::abs(residual_at_point(g, p, q)) <= 1e-14);
}

TEST_CASE("residual_at_point rejects states outside the cone") {
    // A strongly saddle-shaped jet: κ = (large, -large, -large) puts λ(η) outside Γ_3.
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(3, 3);
    hess(0, 0) = -20.0;
    hess(1, 1) = 20.0;
    hess(2, 2) = 20.0;
    const auto g = assemble_point_geometry(PointJet::at_north(1.0, Eigen::VectorXd::Zero(3), hess), 3);
    CHECK_FALSE(in_gamma_k(g.eta_spectrum, 3).member);
    CHECK_THROWS_AS((void)residual_at_point(g, QuotientParams::make(3, 3, 0), 1.0), ConeViolation);
}

TEST_CASE("pointwise invariants") {
    std::mt19937_64 gen(17);
    for (int n = 2; n <= 5; ++n)
        for (int trial = 0; trial < 30; ++trial) {
            const PointJet jet = random_jet(n, gen);
            const auto g = assemble_point_geometry(jet, n);
            CHECK(std::abs(g.nu.norm() - 1.0) <= 1e-12);
            CHECK(std::abs(g.kappa.sum() - g.H) <= 1e-10 * std::max(1.0, std::abs(g.H)));
            CHECK(g.u > 0.0);
            CHECK(g.u <= g.rho + 1e-15);
            CHECK(g.v >= 1.0);
            double eta_sum = 0.0;
            for (int i = 0; i < n; ++i) eta_sum += g.eta_spectrum[i];
            CHECK(eta_sum == Approx((n - 1) * g.H));
            for (int i = 0; i < n; ++i) CHECK(g.eta_spectrum[i] == g.H - g.kappa(n - 1 - i));
            for (int i = 0; i + 1 < n; ++i) CHECK(g.kappa(i) <= g.kappa(i + 1));

            // ν is normal to the tangent vectors X_i = ρ e_i + D_iρ x.
            for (int i = 0; i < n; ++i) {
                const Eigen::VectorXd Xi = jet.rho * jet.frame.col(i) + jet.grad(i) * jet.point;
                CHECK(std::abs(Xi.dot(g.nu)) <= 1e-12);
            }
            // Outward: ν · x > 0 for a radial graph.
            CHECK(g.nu.dot(jet.point) > 0.0);

            // κ are the eigenvalues of g^{-1} h.
            Eigen::EigenSolver<Eigen::MatrixXd> es(g.shape);
            std::vector<double> ev;
            for (int i = 0; i < n; ++i) ev.push_back(es.eigenvalues()(i).real());
            std::sort(ev.begin(), ev.end());
            for (int i = 0; i < n; ++i) CHECK(ev[static_cast<std::size_t>(i)] == Approx(g.kappa(i)).epsilon(1e-10));
        }
}

TEST_CASE("frame and ambient covariance") {
    std::mt19937_64 gen(29);
    for (int n = 2; n <= 5; ++n)
        for (int trial = 0; trial < 10; ++trial) {
            const PointJet jet = random_jet(n, gen);
            const auto g0 = assemble_point_geometry(jet, n);

            const Eigen::MatrixXd R = rotation(n, gen);
            PointJet turned = jet;
            turned.grad = R.transpose() * jet.grad;
            turned.hess = R.transpose() * jet.hess * R;
            turned.frame = jet.frame * R;
            const auto g1 = assemble_point_geometry(turned, n);
            CHECK(std::abs(g1.v - g0.v) <= 1e-12);
            CHECK(std::abs(g1.u - g0.u) <= 1e-12);
            CHECK(std::abs(g1.H - g0.H) <= 1e-12);
            CHECK((g1.kappa - g0.kappa).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((g1.nu - g0.nu).cwiseAbs().maxCoeff() <= 1e-12);

            const Eigen::MatrixXd A = rotation(n + 1, gen);
            PointJet moved = jet;
            moved.point = A * jet.point;
            moved.frame = A * jet.frame;
            const auto g2 = assemble_point_geometry(moved, n);
            CHECK((g2.kappa - g0.kappa).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((g2.nu - A * g0.nu).cwiseAbs().maxCoeff() <= 1e-12);
        }
}

TEST_CASE("scaling the jet scales curvature") {
    std::mt19937_64 gen(31);
    for (int n = 2; n <= 4; ++n) {
        const PointJet jet = random_jet(n, gen);
        const auto g = assemble_point_geometry(jet, n);
        for (double c : {0.5, 3.0}) {
            PointJet s = jet;
            s.rho *= c;
            s.grad *= c;
            s.hess *= c;
            const auto h = assemble_point_geometry(s, n);
            CHECK(h.v == Approx(g.v));
            CHECK(h.u == Approx(c * g.u));
            CHECK((h.nu - g.nu).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((c * h.kappa - g.kappa).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("curvatures agree with an embedded surface of revolution") {
    // ρ(θ) = 1 + 0.05 cos θ.
    for (int n : {2, 3, 4})
        for (double th : {std::numbers::pi / 2, 0.4, 2.5}) {
            const double rho = 1 + 0.05 * std::cos(th), d1 = -0.05 * std::sin(th), d2 = -0.05 * std::cos(th);
            const auto g = assemble_point_geometry(axisym_point_jet(th, rho, d1, d2, n), n);
            const auto want = oracle::revolution_curvatures(th, rho, d1, d2, n);
            for (int i = 0; i < n; ++i) CHECK(g.kappa(i) == Approx(want[static_cast<std::size_t>(i)]).epsilon(1e-12));
        }
}

TEST_CASE("curvatures agree with an embedded parametrized surface on S2") {
    for (double th : {0.2, 1.0, 1.9, 3.0})
        for (double ph : {0.3, 2.0, 5.0}) {
            // ρ = 1 + 0.1 sin θ cos φ + 0.05 cos 2θ
            const double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
            const oracle::Partials2 d{1 + 0.1 * st * cp + 0.05 * std::cos(2 * th),
                                      0.1 * ct * cp - 0.1 * std::sin(2 * th),
                                      -0.1 * st * sp,
                                      -0.1 * st * cp - 0.2 * std::cos(2 * th),
                                      -0.1 * ct * sp,
                                      -0.1 * st * cp};
            const auto g = assemble_point_geometry(s2_point_jet(th, ph, {d.rho, d.t, d.p, d.tt, d.tp, d.pp}), 2);
            const auto want = oracle::embedding_curvatures(th, ph, d);
            CHECK(g.kappa(0) == Approx(want[0]).epsilon(1e-12));
            CHECK(g.kappa(1) == Approx(want[1]).epsilon(1e-12));
        }
}

TEST_CASE("mixed shape operator: the v^2 form matches, the v form does not") {
    std::mt19937_64 gen(41);
    for (int n = 2; n <= 4; ++n)
        for (int trial = 0; trial < 10; ++trial) {
            const PointJet jet = random_jet(n, gen);
            const auto g = assemble_point_geometry(jet, n);
            CHECK((mixed_shape_closed_form(jet, 2) - g.shape).cwiseAbs().maxCoeff() <= 1e-12);
            if (jet.grad.norm() > 0.1 && jet.hess.norm() > 0.1)
                CHECK((mixed_shape_closed_form(jet, 1) - g.shape).cwiseAbs().maxCoeff() > 1e-6);
        }
}

TEST_CASE("degenerate jets") {
    CHECK_THROWS_AS((void)assemble_point_geometry(PointJet::at_north(0.0, Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Zero(3, 3)), 3),
                    DegenerateJet);
    CHECK_THROWS_AS((void)assemble_point_geometry(PointJet::at_north(-1.0, Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Zero(3, 3)), 3),
                    DegenerateJet);
    CHECK_THROWS_AS((void)assemble_point_geometry(PointJet::at_north(1.0, Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Zero(2, 2)), 3),
                    DegenerateJet);
    Eigen::VectorXd inf = Eigen::VectorXd::Zero(3);
    inf(0) = INFINITY;
    CHECK_THROWS_AS((void)assemble_point_geometry(PointJet::at_north(1.0, inf, Eigen::MatrixXd::Zero(3, 3)), 3), DegenerateJet);
}
