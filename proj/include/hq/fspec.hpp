#pragma once

// Prescribed curvature functions, the homotopy family f^t that starts at the
// unit sphere, and sampled checks of the structural assumptions on f.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hq/expression.hpp"
#include "hq/symfun.hpp"

namespace hq {

inline std::span<const double> as_span(const Eigen::VectorXd& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

/// f(X, ν) as a callable.  Either wraps a parsed expression or an arbitrary
/// function (manufactured problems build f from a known surface).
class Prescription {
public:
    using Fn = std::function<double(std::span<const double> X, std::span<const double> nu)>;

    explicit Prescription(FExpr expr);
    explicit Prescription(Fn fn);

    [[nodiscard]] double operator()(std::span<const double> X, std::span<const double> nu) const {
        return fn_(X, nu);
    }
    [[nodiscard]] const std::optional<FExpr>& expression() const { return expr_; }

private:
    std::optional<FExpr> expr_;
    Fn fn_;
};

struct HomotopyTarget {
    Prescription base;
    QuotientParams params;
    double r1;
    double r2;
    double epsilon;
    double c0;  // lower bound of the radial bracket on [r1, r2]
};

struct EpsilonChoice {
    double epsilon;
    double c0;
};

/// ε = min(0.1, ε*/2) where ε* is the largest value keeping
/// ρ^{-m} + ε(ρ^{-m} − 1) ≥ c0 := ½·r2^{-m} on 1024 samples of [r1, r2].
[[nodiscard]] EpsilonChoice select_epsilon(const QuotientParams& p, double r1, double r2);

/// Radial bracket ρ^{-m} + ε(ρ^{-m} − 1), m = k − l.
[[nodiscard]] double radial_bracket(const QuotientParams& p, double epsilon, double rho);

/// Throws BadAnnulus unless 0 < r1 < 1 < r2.
[[nodiscard]] HomotopyTarget make_homotopy(Prescription base, const QuotientParams& p, double r1,
                                           double r2);

/// f^t = t·f + (1 − t)(C_n^k/C_n^l)(n−1)^m·bracket(|X|).  The user f is not
/// evaluated at t = 0, and the radial term is skipped at t = 1.
[[nodiscard]] double eval_homotopy(const HomotopyTarget& target, double t, std::span<const double> X,
                                   std::span<const double> nu);

struct AssumptionCheck {
    bool pass = false;
    double worst_margin = 0.0;        // pass ⇔ worst_margin ≥ -tolerance
    double tolerance = 0.0;           // 1e-8 × largest sampled magnitude
    Eigen::VectorXd worst_position;   // X at the worst sample
    Eigen::VectorXd worst_normal;     // ν at the worst sample
};

struct AssumptionReport {
    AssumptionCheck upper;      // f(X, X/|X|) ≤ bound at |X| = r2
    AssumptionCheck lower;      // f(X, X/|X|) ≥ bound at |X| = r1
    AssumptionCheck monotone;   // ∂_ρ[ρ^m f] ≤ 0 on the annulus
    [[nodiscard]] bool all_pass() const { return upper.pass && lower.pass && monotone.pass; }
};

/// `count` deterministic quasi-uniform points on the unit sphere of R^dim
/// (Fibonacci lattice for dim = 3).
[[nodiscard]] std::vector<Eigen::VectorXd> quasi_uniform_directions(int dim, int count);

/// Samples the three conditions: the boundary inequalities on `samples`
/// directions with ν = X/|X|, the monotonicity by central differences in ρ
/// over a (direction, ρ, ν) lattice.
[[nodiscard]] AssumptionReport validate_assumptions(const Prescription& base, const QuotientParams& p,
                                                    double r1, double r2, int samples);

}  // namespace hq
