#pragma once

// Pointwise geometry of a radial graph X = ρ(x)·x over the unit sphere Sⁿ.
//
// All tangential quantities are components in an orthonormal frame
// {e_1..e_n} of the round metric at x, so σ_ij = δ_ij.  The frame and the
// base point are carried alongside the jet so that the outward normal can
// be reported in ambient coordinates.

#include <Eigen/Dense>

#include "hq/symfun.hpp"

namespace hq {

struct PointJet {
    double rho = 1.0;
    Eigen::VectorXd grad;   // D_iρ
    Eigen::MatrixXd hess;   // D_iD_jρ, symmetric
    Eigen::VectorXd point;  // x ∈ Sⁿ ⊂ R^{n+1}
    Eigen::MatrixXd frame;  // (n+1)×n, column i is e_i

    /// Jet at the base point (1, 0, …, 0) with the coordinate frame e_i = E_{i+1}.
    static PointJet at_north(double rho, Eigen::VectorXd grad, Eigen::MatrixXd hess);
    [[nodiscard]] int dim() const { return static_cast<int>(grad.size()); }
};

struct PointGeometry {
    double rho = 0.0;
    double grad_norm = 0.0;         // |Dρ|
    double v = 1.0;                 // √(1 + ρ^{-2}|Dρ|²)
    double u = 0.0;                 // support function ⟨X, ν⟩
    Eigen::VectorXd position;       // X = ρ·x
    Eigen::VectorXd nu;             // outward unit normal
    Eigen::MatrixXd metric;         // g_ij = ρ²δ_ij + D_iρ D_jρ
    Eigen::MatrixXd second_form;    // h_ij
    Eigen::MatrixXd shape;          // h^i_j = g^{ik}h_kj
    double H = 0.0;
    Eigen::VectorXd kappa;          // ascending
    Spectrum eta_spectrum{0.0, 0.0};  // λ_i(η) = H - κ_i, ascending
};

/// Throws DegenerateJet when ρ ≤ 0, v is not finite, or the jet shapes are
/// inconsistent with `n`.
[[nodiscard]] PointGeometry assemble_point_geometry(const PointJet& jet, int n);

/// Round sphere of radius r, reported at the base point (1, 0, …, 0).
[[nodiscard]] PointGeometry sphere_closed_form(double r, int n);

/// log σ_k(λ(η)) − log σ_l(λ(η)) − log f.  Throws ConeViolation or
/// NonpositiveF.
[[nodiscard]] double residual_at_point(const PointGeometry& geom, const QuotientParams& p,
                                       double fval);

/// g^{-1}h from the closed-form mixed expression
///   (1/(ρv)) (I + [−I + p pᵀ/v^{e}] D²log ρ),  p = Dρ/ρ,
/// with exponent e on v in the bracket.  e = 2 is the exact inverse-metric
/// contraction; e = 1 is kept so tests can show the two disagree.
[[nodiscard]] Eigen::MatrixXd mixed_shape_closed_form(const PointJet& jet, int v_power);

}  // namespace hq
