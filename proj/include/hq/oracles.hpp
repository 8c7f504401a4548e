#pragma once

// Reference computations used by the self-test and the unit tests.  They
// share no code with the production paths: σ_j by subset enumeration,
// derivatives by complex steps through the brute-force quotient (and through
// the eigenvalues of a perturbed matrix), curvatures of an explicitly
// parametrized embedding.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace hq::oracle {

/// σ_j by summing over all j-subsets.  n ≤ 20.
template <class T>
T sigma_subsets(const std::vector<T>& lambda, int j) {
    const int n = static_cast<int>(lambda.size());
    if (j == 0) return T(1.0);
    if (j < 0 || j > n) return T(0.0);
    T sum(0.0);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != j) continue;
        T prod(1.0);
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) prod *= lambda[static_cast<std::size_t>(i)];
        sum += prod;
    }
    return sum;
}

inline std::vector<double> drop(std::vector<double> lambda, std::vector<int> idx) {
    std::sort(idx.rbegin(), idx.rend());
    for (int i : idx) lambda.erase(lambda.begin() + i);
    return lambda;
}

/// (σ_k/σ_l)^{1/(k−l)} from subset sums.
template <class T>
T quotient(const std::vector<T>& lambda, int k, int l) {
    return std::pow(sigma_subsets(lambda, k) / sigma_subsets(lambda, l), 1.0 / (k - l));
}

/// ∂G/∂λ_i by the complex step Im G(λ + i h e_i)/h.
inline double quotient_partial(const std::vector<double>& lambda, int k, int l, int i) {
    using C = std::complex<double>;
    const double h = 1e-30;
    std::vector<C> z(lambda.begin(), lambda.end());
    z[static_cast<std::size_t>(i)] += C(0.0, h);
    return quotient(z, k, l).imag() / h;
}

/// φ''(0)/2 for φ(s) = G(eig(diag λ + s(E_{0i} + E_{i0}))).  φ is even in s,
/// so at s = h·e^{iπ/4} the s² coefficient is Im φ(s)/h² up to O(h⁴).
inline double offdiag_perturbation(const std::vector<double>& lambda, int k, int l, int i) {
    using C = std::complex<double>;
    const auto n = static_cast<Eigen::Index>(lambda.size());
    double scale = 0.0;
    for (double x : lambda) scale = std::max(scale, std::abs(x));
    const double h = 1e-4 * std::max(scale, 1e-3);
    const C s = h * std::exp(C(0.0, std::numbers::pi / 4));
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index d = 0; d < n; ++d) a(d, d) = lambda[static_cast<std::size_t>(d)];
    a(0, i) = a(i, 0) = s;
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, false);
    const Eigen::VectorXcd ev = es.eigenvalues();
    return quotient(std::vector<C>(ev.data(), ev.data() + ev.size()), k, l).imag() / (h * h);
}

/// Principal curvatures of the hypersurface of revolution X = ρ(θ)(cos θ,
/// sin θ·ω), ω ∈ S^{n−1}, from the planar profile: the meridian curvature
/// and the (n−1)-fold parallel curvature.  Ascending.
inline std::vector<double> revolution_curvatures(double theta, double rho, double d1, double d2, int n) {
    const double w = std::sqrt(rho * rho + d1 * d1);
    const double meridian = (rho * rho + 2.0 * d1 * d1 - rho * d2) / (w * w * w);
    std::vector<double> out{meridian};
    const double s = std::sin(theta);
    // At the axis both families coincide.
    const double parallel =
        std::abs(s) < 1e-12 ? meridian : (rho * s - d1 * std::cos(theta)) / (rho * s * w);
    for (int i = 1; i < n; ++i) out.push_back(parallel);
    std::sort(out.begin(), out.end());
    return out;
}

/// Partials of ρ(θ, φ) up to second order.
struct Partials2 {
    double rho, t, p, tt, tp, pp;
};

/// Principal curvatures of X(θ, φ) = ρ·(cos θ, sin θ cos φ, sin θ sin φ)
/// from the first and second fundamental forms of the parametrization.
inline std::vector<double> embedding_curvatures(double theta, double phi, const Partials2& d) {
    using V = Eigen::Vector3d;
    const double ct = std::cos(theta), st = std::sin(theta), cp = std::cos(phi), sp = std::sin(phi);
    const V x(ct, st * cp, st * sp);
    const V xt(-st, ct * cp, ct * sp);
    const V xp(0.0, -st * sp, st * cp);
    const V xtt = -x;
    const V xtp(0.0, -ct * sp, ct * cp);
    const V xpp(0.0, -st * cp, -st * sp);
    const V Xt = d.t * x + d.rho * xt;
    const V Xp = d.p * x + d.rho * xp;
    const V Xtt = d.tt * x + 2.0 * d.t * xt + d.rho * xtt;
    const V Xtp = d.tp * x + d.t * xp + d.p * xt + d.rho * xtp;
    const V Xpp = d.pp * x + 2.0 * d.p * xp + d.rho * xpp;
    V nu = Xt.cross(Xp).normalized();
    if (nu.dot(x) < 0) nu = -nu;
    Eigen::Matrix2d I, II;
    I << Xt.dot(Xt), Xt.dot(Xp), Xt.dot(Xp), Xp.dot(Xp);
    // Outward normal: the sphere has positive curvature.
    II << -Xtt.dot(nu), -Xtp.dot(nu), -Xtp.dot(nu), -Xpp.dot(nu);
    const Eigen::EigenSolver<Eigen::Matrix2d> es(I.inverse() * II);
    std::vector<double> out{es.eigenvalues()(0).real(), es.eigenvalues()(1).real()};
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace hq::oracle
