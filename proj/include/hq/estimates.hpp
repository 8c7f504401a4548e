#pragma once

// Observed values of the quantities the a priori estimates control: the C⁰
// bounds r1 < ρ < r2, the support function (star-shapedness), |Dρ| and the
// principal curvatures.

#include <span>

#include "hq/radial_geometry.hpp"
#include "hq/sphere_grid.hpp"

namespace hq {

struct BoundsSnapshot {
    double rho_min = 0.0;
    double rho_max = 0.0;
    double u_min = 0.0;
    double grad_sup = 0.0;
    double kappa_sup = 0.0;
    double cone_margin_min = 0.0;
    double eta_min = 0.0;
};

[[nodiscard]] BoundsSnapshot snapshot_bounds(const ScalarField& rho, const Grid& grid,
                                             const QuotientParams& p);
[[nodiscard]] BoundsSnapshot snapshot_from_geometry(std::span<const PointGeometry> nodes, int k);

struct C0Check {
    bool pass;
    double lower_margin;  // rho_min − r1
    double upper_margin;  // r2 − rho_max
};

/// Strict: passes iff r1 < rho_min and rho_max < r2.
[[nodiscard]] C0Check check_c0(const BoundsSnapshot& s, double r1, double r2);

/// u_min > 0 and cone_margin_min > 0.
[[nodiscard]] bool check_positivity(const BoundsSnapshot& s);

}  // namespace hq
