#include "hq/fspec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hq/errors.hpp"

namespace hq {

Prescription::Prescription(FExpr expr)
    : expr_(expr), fn_([expr](std::span<const double> X, std::span<const double> nu) {
          return expr.evaluate(X, nu);
      }) {}

Prescription::Prescription(Fn fn) : fn_(std::move(fn)) {}

double radial_bracket(const QuotientParams& p, double epsilon, double rho) {
    const double inv = std::pow(rho, -p.order());
    return inv + epsilon * (inv - 1.0);
}

EpsilonChoice select_epsilon(const QuotientParams& p, double r1, double r2) {
    if (!(0.0 < r1 && r1 < r2)) throw BadAnnulus("annulus needs 0 < r1 < r2");
    constexpr int kSamples = 1024;
    const double m = p.order();
    const double c0 = 0.5 * std::pow(r2, -m);
    double critical = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kSamples; ++i) {
        const double rho = r1 + (r2 - r1) * i / (kSamples - 1.0);
        const double inv = std::pow(rho, -m);
        // inv + ε(inv − 1) ≥ c0 only constrains ε where inv < 1.
        if (inv < 1.0) critical = std::min(critical, (inv - c0) / (1.0 - inv));
    }
    return {std::min(0.1, critical / 2.0), c0};
}

HomotopyTarget make_homotopy(Prescription base, const QuotientParams& p, double r1, double r2) {
    if (!(0.0 < r1 && r1 < 1.0 && 1.0 < r2))
        throw BadAnnulus("annulus must satisfy 0 < r1 < 1 < r2 (got r1 = " + std::to_string(r1) +
                         ", r2 = " + std::to_string(r2) + ")");
    if (const auto& expr = base.expression()) expr->check_dimension(p.n + 1);
    const auto choice = select_epsilon(p, r1, r2);
    return HomotopyTarget{std::move(base), p, r1, r2, choice.epsilon, choice.c0};
}

double eval_homotopy(const HomotopyTarget& target, double t, std::span<const double> X,
                     std::span<const double> nu) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("homotopy parameter must lie in [0, 1]");
    double value = 0.0;
    if (t > 0.0) value += t * target.base(X, nu);
    if (t < 1.0) {
        double r2 = 0.0;
        for (double x : X) r2 += x * x;
        value += (1.0 - t) * target.params.unit_sphere_value() *
                 radial_bracket(target.params, target.epsilon, std::sqrt(r2));
    }
    return value;
}

std::vector<Eigen::VectorXd> quasi_uniform_directions(int dim, int count) {
    constexpr double kPi = std::numbers::pi;
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(count));
    if (dim == 2) {
        for (int i = 0; i < count; ++i) {
            const double a = 2.0 * kPi * (i + 0.5) / count;
            out.emplace_back(Eigen::Vector2d(std::cos(a), std::sin(a)));
        }
        return out;
    }
    if (dim == 3) {
        const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < count; ++i) {
            const double z = 1.0 - (2.0 * i + 1.0) / count;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double a = golden_angle * i;
            out.emplace_back(Eigen::Vector3d(z, r * std::cos(a), r * std::sin(a)));
        }
        return out;
    }
    // Kronecker sequence with generalized golden-ratio steps, pushed through
    // Box-Muller and normalized.
    const int d = dim + (dim % 2);
    double g = 2.0;
    for (int it = 0; it < 64; ++it) g = std::pow(1.0 + g, 1.0 / (d + 1));
    std::vector<double> alpha(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) alpha[static_cast<std::size_t>(j)] = std::pow(1.0 / g, j + 1);
    std::vector<double> u(static_cast<std::size_t>(d));
    for (int i = 0; i < count; ++i) {
        for (int j = 0; j < d; ++j) {
            const double x = 0.5 + (i + 1) * alpha[static_cast<std::size_t>(j)];
            u[static_cast<std::size_t>(j)] = x - std::floor(x);
        }
        Eigen::VectorXd v(dim);
        for (int j = 0; j < dim; j += 2) {
            const double radius = std::sqrt(-2.0 * std::log(std::max(u[static_cast<std::size_t>(j)], 1e-300)));
            const double angle = 2.0 * kPi * u[static_cast<std::size_t>(j + 1)];
            v(j) = radius * std::cos(angle);
            if (j + 1 < dim) v(j + 1) = radius * std::sin(angle);
        }
        out.push_back(v.normalized());
    }
    return out;
}

namespace {

struct Tracker {
    AssumptionCheck check;
    double scale = 0.0;
    bool first = true;

    void offer(double margin, double magnitude, const Eigen::VectorXd& X, const Eigen::VectorXd& nu) {
        scale = std::max(scale, std::abs(magnitude));
        if (first || margin < check.worst_margin) {
            check.worst_margin = margin;
            check.worst_position = X;
            check.worst_normal = nu;
            first = false;
        }
    }

    AssumptionCheck finish() {
        check.tolerance = 1e-8 * scale;
        check.pass = check.worst_margin >= -check.tolerance;
        return check;
    }
};

}  // namespace

AssumptionReport validate_assumptions(const Prescription& base, const QuotientParams& p, double r1,
                                      double r2, int samples) {
    if (samples < 100) throw std::invalid_argument("assumption validation needs at least 100 samples");
    if (!(0.0 < r1 && r1 < r2)) throw BadAnnulus("annulus needs 0 < r1 < r2");
    const int dim = p.n + 1;
    const int m = p.order();
    const auto directions = quasi_uniform_directions(dim, samples);

    Tracker upper, lower, monotone;
    const double bound_r2 = p.binomial_ratio() * std::pow((p.n - 1) / r2, m);
    const double bound_r1 = p.binomial_ratio() * std::pow((p.n - 1) / r1, m);
    for (const auto& dir : directions) {
        const Eigen::VectorXd X2 = r2 * dir;
        const double f2 = base(as_span(X2), as_span(dir));
        upper.offer(bound_r2 - f2, std::max(bound_r2, std::abs(f2)), X2, dir);
        const Eigen::VectorXd X1 = r1 * dir;
        const double f1 = base(as_span(X1), as_span(dir));
        lower.offer(f1 - bound_r1, std::max(bound_r1, std::abs(f1)), X1, dir);
    }

    constexpr int kRadii = 9;
    constexpr int kNormals = 8;
    auto normals = quasi_uniform_directions(dim, kNormals + 1);
    normals.erase(normals.begin());
    for (const auto& dir : directions) {
        for (int a = 0; a < kRadii; ++a) {
            const double rho = r1 + (r2 - r1) * a / (kRadii - 1.0);
            const double h = 1e-5 * rho;
            for (const auto& nu : normals) {
                auto weighted = [&](double r) {
                    const Eigen::VectorXd X = r * dir;
                    return std::pow(r, m) * base(as_span(X), as_span(nu));
                };
                const double center = weighted(rho);
                const double derivative = (weighted(rho + h) - weighted(rho - h)) / (2.0 * h);
                monotone.offer(-derivative, center / rho, rho * dir, nu);
            }
        }
    }
    return {upper.finish(), lower.finish(), monotone.finish()};
}

}  // namespace hq
