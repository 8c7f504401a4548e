#pragma once

// Sphere discretizations and finite-difference jets of a radial function.
//
// Both grids use the polar axis x1: a node at colatitude θ (and longitude φ
// on S²) sits at x = (cos θ, sin θ cos φ, sin θ sin φ) in R³, and at
// x = (cos θ, sin θ, 0, …, 0) in R^{n+1} for the axisymmetric reduction.

#include <utility>
#include <variant>
#include <vector>

#include "hq/radial_geometry.hpp"

namespace hq {

using ScalarField = std::vector<double>;

/// Uniform θ grid on [0, π] including both poles.
struct AxisymGrid {
    int node_count = 0;
    double spacing = 0.0;
    std::vector<double> theta;
};

/// Latitude–longitude grid on S² with rings offset half a spacing from the
/// poles; node (i, j) is stored at i·n_phi + j.
struct SphereGrid2D {
    int n_theta = 0;
    int n_phi = 0;
    double dtheta = 0.0;
    double dphi = 0.0;
    std::vector<double> theta;
    std::vector<double> phi;

    [[nodiscard]] int index(int i, int j) const { return i * n_phi + j; }
    [[nodiscard]] int node_count() const { return n_theta * n_phi; }
};

using Grid = std::variant<AxisymGrid, SphereGrid2D>;

[[nodiscard]] AxisymGrid build_axisym_grid(int node_count);
[[nodiscard]] SphereGrid2D build_s2_grid(int n_theta, int n_phi);

[[nodiscard]] int node_count(const Grid& grid);

/// Jet of a zonal function ρ(θ) in the frame {∂θ, equatorial directions}.
/// At the poles (sin θ = 0) the tangential entries cot θ·ρ′ take their limit ρ″.
[[nodiscard]] PointJet axisym_point_jet(double theta, double rho, double d_theta,
                                        double d_theta2, int n);

/// Jet on S² from coordinate partials, in the frame e_1 = ∂θ, e_2 = ∂φ / sin θ.
struct SphericalPartials {
    double rho, t, p, tt, tp, pp;
};
[[nodiscard]] PointJet s2_point_jet(double theta, double phi, const SphericalPartials& d);

[[nodiscard]] std::vector<PointJet> axisym_jets(const ScalarField& field, const AxisymGrid& grid, int n);
[[nodiscard]] std::vector<PointJet> s2_jets(const ScalarField& field, const SphereGrid2D& grid);

/// Jets for either grid; `n` must be 2 for the S² grid.
[[nodiscard]] std::vector<PointJet> grid_jets(const ScalarField& field, const Grid& grid, int n);

/// Unit direction x of node `node`.
[[nodiscard]] Eigen::VectorXd node_direction(const Grid& grid, int node, int n);

/// Nodes whose values enter the jet at `node` (sorted, unique, includes `node`).
[[nodiscard]] std::vector<int> stencil(const Grid& grid, int node);

struct FieldNorms {
    double sup;
    double l2;
};

/// Sup norm and quadrature L² norm over the sphere.  For the axisymmetric
/// grid the weights are |S^{n-1}| sin^{n-1}θ·spacing, for S² sin θ·dθ·dφ.
[[nodiscard]] FieldNorms field_norms(const ScalarField& field, const Grid& grid, int n = 2);

}  // namespace hq
