#include "hq/radial_geometry.hpp"

#include <cmath>
#include <string>

#include "hq/errors.hpp"

namespace hq {

PointJet PointJet::at_north(double rho, Eigen::VectorXd grad, Eigen::MatrixXd hess) {
    const auto n = grad.size();
    PointJet jet;
    jet.rho = rho;
    jet.grad = std::move(grad);
    jet.hess = std::move(hess);
    jet.point = Eigen::VectorXd::Unit(n + 1, 0);
    jet.frame = Eigen::MatrixXd::Zero(n + 1, n);
    for (Eigen::Index i = 0; i < n; ++i) jet.frame(i + 1, i) = 1.0;
    return jet;
}

namespace {

void check_jet(const PointJet& jet, int n) {
    if (n < 2) throw DegenerateJet("dimension must be at least 2");
    if (jet.grad.size() != n || jet.hess.rows() != n || jet.hess.cols() != n)
        throw DegenerateJet("jet size does not match n = " + std::to_string(n));
    if (jet.point.size() != n + 1 || jet.frame.rows() != n + 1 || jet.frame.cols() != n)
        throw DegenerateJet("jet base point or frame has the wrong shape");
    if (!(jet.rho > 0.0) || !std::isfinite(jet.rho))
        throw DegenerateJet("radial function must be positive, got " + std::to_string(jet.rho));
    if (!jet.grad.allFinite() || !jet.hess.allFinite())
        throw DegenerateJet("jet has non-finite derivatives");
}

}  // namespace

PointGeometry assemble_point_geometry(const PointJet& jet, int n) {
    check_jet(jet, n);
    const double rho = jet.rho;
    const Eigen::VectorXd& d = jet.grad;
    const double grad_sq = d.squaredNorm();

    PointGeometry geo;
    geo.rho = rho;
    geo.grad_norm = std::sqrt(grad_sq);
    geo.v = std::sqrt(1.0 + grad_sq / (rho * rho));
    if (!std::isfinite(geo.v)) throw DegenerateJet("v is not finite");
    geo.u = rho * rho / std::sqrt(rho * rho + grad_sq);
    geo.position = rho * jet.point;
    geo.nu = (jet.point - jet.frame * (d / rho)) / geo.v;

    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    geo.metric = rho * rho * id + d * d.transpose();
    geo.second_form = (-jet.hess + rho * id + (2.0 / rho) * d * d.transpose()) / geo.v;
    geo.shape = geo.metric.ldlt().solve(geo.second_form);

    // g = ρ²(I + p pᵀ) with p = Dρ/ρ, so g^{-1/2} = ρ^{-1}(I + (1/v − 1) p̂ p̂ᵀ).
    Eigen::MatrixXd inv_sqrt = id / rho;
    if (grad_sq > 0.0) {
        const Eigen::VectorXd dir = d / std::sqrt(grad_sq);
        inv_sqrt += ((1.0 / geo.v - 1.0) / rho) * dir * dir.transpose();
    }
    Eigen::MatrixXd sym = inv_sqrt * geo.second_form * inv_sqrt;
    sym = 0.5 * (sym + sym.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
    geo.kappa = eig.eigenvalues();  // ascending
    geo.H = geo.kappa.sum();

    std::vector<double> eta(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) eta[static_cast<std::size_t>(i)] = geo.H - geo.kappa(n - 1 - i);
    geo.eta_spectrum = Spectrum(std::move(eta));
    return geo;
}

PointGeometry sphere_closed_form(double r, int n) {
    if (!(r > 0.0)) throw DegenerateJet("sphere radius must be positive");
    if (n < 2) throw DegenerateJet("dimension must be at least 2");
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    PointGeometry geo;
    geo.rho = r;
    geo.v = 1.0;
    geo.u = r;
    geo.position = r * Eigen::VectorXd::Unit(n + 1, 0);
    geo.nu = Eigen::VectorXd::Unit(n + 1, 0);
    geo.metric = r * r * id;
    geo.second_form = r * id;
    geo.shape = id / r;
    geo.kappa = Eigen::VectorXd::Constant(n, 1.0 / r);
    geo.H = n / r;
    geo.eta_spectrum = Spectrum(std::vector<double>(static_cast<std::size_t>(n), (n - 1) / r));
    return geo;
}

double residual_at_point(const PointGeometry& geom, const QuotientParams& p, double fval) {
    if (!(fval > 0.0)) throw NonpositiveF("prescribed curvature must be positive, got " + std::to_string(fval));
    const auto report = in_gamma_k(geom.eta_spectrum, p.k);
    if (!report.member) throw ConeViolation("lambda(eta) outside Gamma_k (margin " +
                                            std::to_string(report.margin) + ")");
    const double sk = report.sigmas[static_cast<std::size_t>(p.k - 1)];
    const double sl = p.l == 0 ? 1.0 : report.sigmas[static_cast<std::size_t>(p.l - 1)];
    return std::log(sk) - std::log(sl) - std::log(fval);
}

Eigen::MatrixXd mixed_shape_closed_form(const PointJet& jet, int v_power) {
    const auto n = jet.grad.size();
    const double rho = jet.rho;
    const Eigen::VectorXd p = jet.grad / rho;
    const double v = std::sqrt(1.0 + p.squaredNorm());
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    // D_iD_j log ρ = D_iD_jρ/ρ − D_iρD_jρ/ρ²
    const Eigen::MatrixXd log_hess = jet.hess / rho - p * p.transpose();
    const Eigen::MatrixXd bracket = -id + p * p.transpose() / std::pow(v, v_power);
    return (id + bracket * log_hess) / (rho * v);
}

}  // namespace hq
